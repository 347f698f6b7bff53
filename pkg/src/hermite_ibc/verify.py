"""Seeded self-checks run by ``hermite-ibc verify``.

Each check is a function of a numpy Generator returning (passed, details).
The sizes are smaller than the full acceptance tests so a complete run stays
within a few seconds.
"""
import math
import time

import numpy as np

from . import oracles
from .analysis import hermite_coefficients, norm_in_space, sobolev_norm_1d
from .hermite_core import gauss_hermite, hermite_table, max_scaled_hermite
from .kernels import KernelEvalOptions, kernel_anchored, kernel_anova_integral, kernel_mehler, kernel_series
from .spectra import SpaceSpec, count_large_eigenvalues, minimal_errors, zeta_bound_on_count
from .weights import Constant, Explicit, FourierWeightSpec, Geometric, PolyDecay, decay_bounds, weight_table


def random_weights(rng):
    kind = rng.integers(4)
    if kind == 0:
        return PolyDecay(float(rng.uniform(0.5, 3.0)))
    if kind == 1:
        return Geometric(float(rng.uniform(0.2, 0.9)))
    if kind == 2:
        return Constant(float(rng.uniform(0.1, 1.0)))
    pre = np.sort(rng.uniform(0.1, 1.0, size=3))[::-1]
    return Explicit(tuple(pre), float(rng.uniform(0, pre[-1])))


def random_space(rng, family=None, s_max=3):
    family = family or ("anova", "korobov", "sobolev", "exponential")[rng.integers(4)]
    alpha = int(rng.integers(1, 4))
    if family == "korobov":
        alpha = float(rng.choice([1.5, 2.0, 3.0]))
    omega = float(rng.uniform(0.2, 0.8)) if family == "exponential" else None
    fw = FourierWeightSpec(family, alpha, random_weights(rng), omega)
    return SpaceSpec(fw, int(rng.integers(1, s_max + 1)))


# ---------------------------------------------------------------------------
# bounds

def check_decay_bounds(rng, kmax=10_000):
    bad = 0
    for alpha in range(1, 7):
        spec = FourierWeightSpec("anova", alpha, Constant(1.0))
        ks = np.arange(1, kmax + 1)
        for g in (0.1, 0.5, 1.0):
            r = weight_table(spec, g, kmax)[1:]
            lo, hi = decay_bounds(alpha, g, ks.astype(float))
            bad += int(np.count_nonzero((r < lo) | (r > hi)))
    return bad == 0, {"violations": bad}


def check_zeta_bound(rng, cases=30):
    worst = 0.0
    for _ in range(cases):
        space = random_space(rng, "anova")
        eps = float(np.exp(rng.uniform(np.log(0.05), np.log(0.9))))
        q = 1.0 / space.alpha + float(rng.uniform(0.01, 2.0))
        ratio = count_large_eigenvalues(space, eps) / zeta_bound_on_count(space, eps, q)
        worst = max(worst, ratio)
    return worst <= 1.0, {"max_count_over_bound": worst}


def check_cramer(rng, kmax=200):
    ratio = max_scaled_hermite(kmax, np.linspace(-12, 12, 2001))
    return ratio <= 1.0, {"max_ratio": ratio}


# ---------------------------------------------------------------------------
# kernels

def check_mehler(rng, points=11):
    grid = np.linspace(-3, 3, points)
    xx, yy = np.meshgrid(grid, grid)
    opts = KernelEvalOptions(tail_tolerance=1e-12)
    worst = 0.0
    for omega in (0.3, 0.6, 0.9):
        for g in (0.5, 1.0):
            space = SpaceSpec(FourierWeightSpec("exponential", 1, Constant(g), omega), 1)
            a = kernel_mehler(omega, Constant(g), 1, xx[..., None], yy[..., None])
            b = kernel_series(space, xx[..., None], yy[..., None], opts).value
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst <= 1e-10, {"max_abs_diff": worst}


def check_integral_form(rng, points=3):
    space = SpaceSpec(FourierWeightSpec("anova", 1, Constant(1.0)), 1)
    worst = abs(kernel_anova_integral(1, 1.0, 0.0, 0.0) - (1.0 + math.log(2.0)))
    for x, y in rng.uniform(-2, 2, size=(points, 2)):
        a = kernel_anova_integral(1, 1.0, float(x), float(y))
        b = kernel_series(space, [x], [y]).value
        worst = max(worst, abs(a - b))
    return worst <= 1e-6, {"max_abs_diff": worst}


def check_anchored(rng, points=50):
    nonzero = 0
    for _ in range(points):
        x = float(rng.uniform(0.01, 3))
        y = -float(rng.uniform(0.01, 3))
        for alpha in range(1, 5):
            nonzero += kernel_anchored(alpha, 1.0, x, y).decomposable != 0.0
    return nonzero == 0, {"nonzero": nonzero}


# ---------------------------------------------------------------------------
# norms

def _monomial_derivs(d, alpha):
    out = []
    for t in range(alpha + 1):
        c, p = float(math.perm(d, t)), d - t
        out.append((lambda x, c=c, p=p: c * np.asarray(x, dtype=float) ** p) if p >= 0
                   else (lambda x: np.zeros_like(np.asarray(x, dtype=float))))
    return out


def check_norm_duality(rng, dmax=6):
    worst = 0.0
    for alpha in (1, 2, 3):
        for g in (0.25, 1.0):
            space = SpaceSpec(FourierWeightSpec("anova", alpha, Constant(g)), 1)
            for d in range(dmax + 1):
                coeffs = hermite_coefficients(lambda x, d=d: x[:, 0] ** d, 1, d)
                a = norm_in_space(coeffs, space)
                b = sobolev_norm_1d(_monomial_derivs(d, alpha), alpha, g)
                worst = max(worst, abs(a - b) / b)
    return worst <= 1e-8, {"max_rel_diff": worst}


def check_parseval(rng, cases=10):
    worst = 0.0
    rule = gauss_hermite(12)
    for _ in range(cases):
        c = rng.normal(size=(4, 4))
        tabx = hermite_table(3, rule.nodes)

        def f(x, c=c):
            return np.einsum("ij,in,jn->n", c, hermite_table(3, x[:, 0]), hermite_table(3, x[:, 1]))
        coeffs = hermite_coefficients(f, 2, 3)
        vals = np.einsum("ij,in,jm->nm", c, tabx, tabx)
        direct = float(rule.weights @ (vals ** 2) @ rule.weights)
        worst = max(worst, abs(coeffs.l2_norm() ** 2 - direct) / direct)
    return worst <= 1e-10, {"max_rel_diff": worst}


# ---------------------------------------------------------------------------
# spectra

def check_counts(rng, configs=20, per_config=20, grid_cap=2_000_000):
    mismatches = 0
    for _ in range(configs):
        space = random_space(rng)
        eps_min = _smallest_feasible_eps(space, grid_cap)
        eps = np.exp(rng.uniform(np.log(eps_min), np.log(0.99), size=per_config))
        ref = oracles.naive_counts(space, eps)
        got = [count_large_eigenvalues(space, float(e)) for e in eps]
        mismatches += sum(a != b for a, b in zip(ref, got))
    return mismatches == 0, {"mismatches": mismatches}


def _smallest_feasible_eps(space, grid_cap):
    """Smallest eps whose brute-force grid stays below ``grid_cap`` entries."""
    eps = 0.9
    while eps > 1e-4:
        trial = eps * 0.8
        size = 1
        for j in range(1, space.s + 1):
            fw = space.fw
            size *= oracles.degree_bound(fw.family, fw.alpha, fw.omega, fw.gamma(j), trial * trial) + 1
        if size > grid_cap:
            break
        eps = trial
    return eps


def check_minimal_errors(rng, configs=10, n=300):
    worst = 0.0
    for _ in range(configs):
        space = random_space(rng)
        ref = np.sqrt(oracles.brute_eigenvalues(space, n + 1))
        got = minimal_errors(space, n)
        worst = max(worst, float(np.max(np.abs(ref - got))))
    return worst <= 1e-12, {"max_abs_diff": worst}


SUITES = {
    "bounds": {"decay-bounds": check_decay_bounds, "zeta-bound": check_zeta_bound,
               "cramer": check_cramer},
    "kernels": {"mehler": check_mehler, "integral-form": check_integral_form,
                "anchored-decomposable": check_anchored},
    "norms": {"norm-duality": check_norm_duality, "parseval": check_parseval},
    "spectra": {"count-oracle": check_counts, "minimal-errors": check_minimal_errors},
}


def run_suite(name, seed=0):
    """Run a suite (or "all") and return a JSON-ready summary."""
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        for check, fn in SUITES[suite].items():
            rng = np.random.default_rng([seed, len(results)])
            t0 = time.perf_counter()
            ok, details = fn(rng)
            results.append({"suite": suite, "check": check, "passed": bool(ok),
                            "seconds": round(time.perf_counter() - t0, 3), "details": details})
    return {"suite": name, "seed": seed, "passed": all(r["passed"] for r in results), "checks": results}
