"""Eigenvalues of the L2-approximation operator and what they say about tractability.

The eigenvalues of W_s on a weighted Hermite space are exactly the Fourier
weights R(k), so information complexity for linear information is a lattice
counting problem and the n-th minimal error is a k-largest-products problem.
"""
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import lru_cache
import heapq
import itertools
import math

import numpy as np
from scipy import integrate, optimize

from .errors import DivergenceError, DomainError, UnsupportedCombination
from .hermite_core import zeta
from .weights import (
    Constant, Explicit, Family, FourierWeightSpec, Geometric, MultiIndex, PolyDecay,
    fourier_weight, sum_exponent, weight_infimum, weight_table,
)

MAX_ACTIVE_DIMS = 1_000_000


@dataclass(frozen=True)
class SpaceSpec:
    fw: FourierWeightSpec
    s: int

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 1:
            raise DomainError("dimension s must be a positive integer")

    @property
    def family(self):
        return self.fw.family

    @property
    def alpha(self):
        return self.fw.alpha


@dataclass(frozen=True)
class ComplexityReport:
    epsilon: float
    count: int
    zeta_bound: float | None = None
    q_used: float | None = None


# ---------------------------------------------------------------------------
# counting |A(eps, s)|

def _positive_table(spec, gamma, thr):
    """Weights w(k), k >= 1, that exceed ``thr``, as a non-increasing list."""
    kmax = 16
    while True:
        tab = weight_table(spec, gamma, kmax)
        if not tab[-1] > thr:
            break
        if kmax > 1 << 40:
            raise DomainError("one-dimensional table does not fall below the threshold")
        kmax *= 2
    n = int(np.count_nonzero(tab[1:] > thr))
    return tab[1:1 + n].tolist()


def _active_tables(space, thr):
    tables, cache = [], {}
    for j in range(1, space.s + 1):
        g = space.fw.gamma(j)
        if g not in cache:
            cache[g] = _positive_table(space.fw, g, thr) if g > thr else []
        tab = cache[g]
        if not tab:
            break
        if len(tables) >= MAX_ACTIVE_DIMS:
            raise DomainError("too many active dimensions for exact enumeration")
        tables.append(tab)
    return tables


def count_large_eigenvalues(space, epsilon, tol=0.0):
    """Exact |{k : R(k) > eps^2 - tol}| as a Python int.

    Depth-first over the position of the last nonzero coordinate.  For each
    partial index the number of admissible values of the newest coordinate is
    found by bisection, and a subtree is only opened when the next coordinate
    can still contribute.
    """
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    thr = epsilon * epsilon - tol
    tables = _active_tables(space, thr)
    m = len(tables)
    first = [t[0] for t in tables]
    total = 1
    stack = [(1.0, 0)]
    while stack:
        p, start = stack.pop()
        for d in range(start, m):
            if not p * first[d] > thr:
                break
            tab = tables[d]
            c = bisect_left(tab, True, key=lambda w: not p * w > thr)
            total += c
            if d + 1 < m:
                nxt = first[d + 1]
                for w in tab[:c]:
                    q = p * w
                    if not q * nxt > thr:
                        break
                    stack.append((q, d + 1))
    return total


def _log_zeta_bound(space, epsilon, q):
    a = space.fw.alpha
    c = a ** (a * q) * zeta(a * q)
    g = np.array([space.fw.gamma(j) for j in range(1, space.s + 1)])
    return -2.0 * q * math.log(epsilon) + float(np.sum(np.log1p(c * g ** q)))


def zeta_bound_on_count(space, epsilon, q):
    """Zeta-function upper bound on |A(eps, s)| for Gaussian ANOVA weights; inf on overflow."""
    if space.family is not Family.GAUSSIAN_ANOVA:
        raise UnsupportedCombination("the zeta bound is stated for Gaussian ANOVA weights")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    if not q > 1.0 / space.alpha:
        raise DomainError(f"q must exceed 1/alpha = {1.0 / space.alpha}")
    lb = _log_zeta_bound(space, epsilon, q)
    return math.exp(lb) if lb < 709.0 else math.inf


def best_zeta_bound(space, epsilon):
    """Minimise the zeta bound over q; returns (bound, q)."""
    lo = 1.0 / space.alpha
    res = optimize.minimize_scalar(
        lambda t: _log_zeta_bound(space, epsilon, lo + math.exp(t)),
        bounds=(-12.0, 3.0), method="bounded")
    q = lo + math.exp(res.x)
    return zeta_bound_on_count(space, epsilon, q), q


def complexity_report(space, epsilon, q=None):
    count = count_large_eigenvalues(space, epsilon)
    if space.family is not Family.GAUSSIAN_ANOVA:
        return ComplexityReport(epsilon, count)
    if q is None:
        bound, q = best_zeta_bound(space, epsilon)
    else:
        bound = zeta_bound_on_count(space, epsilon, q)
    return ComplexityReport(epsilon, count, bound, q)


# ---------------------------------------------------------------------------
# sorted eigenvalue stream

def eigenvalue_stream(space):
    """Yield ``(value, MultiIndex)`` in non-increasing order of value, forever.

    A node whose last nonzero coordinate is m spawns k + e_m and k + e_{m+1};
    an index that just opened coordinate m also spawns its sibling that opens
    m + 1 instead.  This visits every index once, children never exceed their
    parent, and every successor has a larger colexicographic key, so equal
    values leave the heap in colexicographic order.
    """
    spec, s = space.fw, space.s
    zero = MultiIndex()
    heap = [(-1.0, zero.sort_key(), zero, 0)]

    def push(k, opened):
        heapq.heappush(heap, (-fourier_weight(spec, k), k.sort_key(), k, opened))

    while heap:
        negv, _, k, opened = heapq.heappop(heap)
        yield -negv, k
        m = k.max_dim
        if m == 0:
            push(k.incremented(1), 1)
            continue
        push(k.incremented(m), 0)
        if m < s:
            push(k.incremented(m + 1), m + 1)
            if opened:
                d = dict(k.entries)
                del d[m]
                d[m + 1] = 1
                push(MultiIndex.from_dict(d), m + 1)


def minimal_errors(space, n_max):
    """Array of e(n) = sqrt(lambda_{n+1}) for n = 0..n_max."""
    vals = [v for v, _ in itertools.islice(eigenvalue_stream(space), n_max + 1)]
    return np.sqrt(np.array(vals))


def nth_minimal_error(space, n):
    if n < 0:
        raise DomainError("n must be non-negative")
    v, _ = next(itertools.islice(eigenvalue_stream(space), n, None))
    return math.sqrt(v)


# ---------------------------------------------------------------------------
# per-dimension power sums  sum_{k >= 1} w(k)^tau

_HEAD = 4096


def _continuous_weight(spec, gamma, x):
    """Smooth extension of the 1-D weight to real (or complex) x >= alpha."""
    a = spec.alpha
    if spec.family is Family.GAUSSIAN_ANOVA:
        prod = 1.0
        for i in range(a):
            prod = prod * (x - i)
        return gamma / prod
    if spec.family is Family.KOROBOV:
        return gamma / x ** a
    total, beta = 0.0, 1.0
    for tau in range(1, a + 1):
        beta = beta * (x - tau + 1)
        total = total + beta
    return 1.0 / (1.0 + total / gamma)


def _normalised_profile(spec, gamma, tau, big_k):
    """h(u) with w(K/u)^tau = (K/u)^(-alpha*tau) * h(u) for u in (0, 1]."""
    a = spec.alpha
    if spec.family is Family.GAUSSIAN_ANOVA:
        def h(u):
            prod = 1.0
            for i in range(a):
                prod *= 1.0 - i * u / big_k
            return (gamma / prod) ** tau
    elif spec.family is Family.KOROBOV:
        def h(u):
            return gamma ** tau
    else:
        def h(u):
            v = u / big_k
            total, beta = 0.0, 1.0
            for t in range(1, a + 1):
                beta *= 1.0 - (t - 1) * v
                total += beta * v ** (a - t)
            return (gamma / (gamma * v ** a + total)) ** tau
    return h


@lru_cache(maxsize=4096)
def _power_sum_cached(spec, gamma, tau):
    if spec.family is Family.EXPONENTIAL:
        q = spec.omega ** tau
        return gamma ** tau * q / (1.0 - q)
    p = spec.alpha * tau
    if not p > 1.0:
        raise DivergenceError(f"sum of weights^{tau} diverges (alpha * tau = {p} <= 1)")
    big_k = _HEAD
    tab = weight_table(spec, gamma, big_k - 1)
    head = math.fsum(tab[1:] ** tau)
    # Euler-Maclaurin from K: integral + g(K)/2 - g'(K)/12; the next term is below 1e-16
    h = _normalised_profile(spec, gamma, tau, big_k)
    val, _ = integrate.quad(h, 0.0, 1.0, weight="alg", wvar=(p - 2.0, 0.0),
                            epsabs=0.0, epsrel=1e-13, limit=200)
    integral = big_k ** (1.0 - p) * val
    g_k = _continuous_weight(spec, gamma, float(big_k)) ** tau
    step = 1e-20
    dg_k = (_continuous_weight(spec, gamma, big_k + 1j * step) ** tau).imag / step
    return head + integral + 0.5 * g_k - dg_k / 12.0


def power_sum(spec, gamma, tau):
    """sum_{k >= 1} w_{gamma}(k)^tau for the 1-D weights of ``spec``."""
    return _power_sum_cached(spec, float(gamma), float(tau))


def _distinct_gammas(space):
    counts = {}
    for j in range(1, space.s + 1):
        g = space.fw.gamma(j)
        counts[g] = counts.get(g, 0) + 1
    return counts


def _log_product(space, tau):
    """log prod_j (1 + sum_k w_j(k)^tau)."""
    spec = space.fw
    scalable = spec.family is not Family.SOBOLEV
    base = power_sum(spec, 1.0, tau) if scalable else None
    out = []
    for g, mult in _distinct_gammas(space).items():
        if g == 0.0:
            continue
        sj = g ** tau * base if scalable else power_sum(spec, g, tau)
        out.append(mult * math.log1p(sj))
    return math.fsum(out)


def trace(space):
    """Trace of W_s for Gaussian ANOVA weights, prod_j (1 + gamma_j T(alpha))."""
    if space.family is not Family.GAUSSIAN_ANOVA:
        raise UnsupportedCombination("trace is provided for Gaussian ANOVA weights")
    if space.alpha == 1:
        raise DivergenceError("the trace is infinite for alpha = 1")
    return math.exp(_log_product(space, 1.0))


def trace_constant(alpha):
    """T(alpha) = sum_{k >= 1} r_{alpha,1}(k)."""
    spec = FourierWeightSpec(Family.GAUSSIAN_ANOVA, alpha, Constant(1.0))
    if alpha == 1:
        raise DivergenceError("the trace is infinite for alpha = 1")
    return power_sum(spec, 1.0, 1.0)


def spt_criterion_sum(space, tau):
    """sum_k R(k)^tau = prod_j (1 + sum_{k>=1} w_j(k)^tau)."""
    if space.family is not Family.EXPONENTIAL and not tau * space.alpha > 1:
        raise DivergenceError("tau must exceed 1/alpha")
    lp = _log_product(space, tau)
    return math.exp(lp) if lp < 709.0 else math.inf


def qpt_criterion_value(space, tau):
    """(1/s^2) * (sum_k R(k)^(tau (1 + ln s)))^(1/tau)."""
    s = space.s
    p = tau * (1.0 + math.log(s))
    if space.family is not Family.EXPONENTIAL and not p * space.alpha > 1:
        raise DivergenceError("tau (1 + ln s) must exceed 1/alpha")
    lv = _log_product(space, p) / tau - 2.0 * math.log(s)
    return math.exp(lv) if lv < 709.0 else math.inf


# ---------------------------------------------------------------------------
# tractability verdicts

HOLDS, FAILS, SUFFICIENT, UNKNOWN, UNSUPPORTED = (
    "holds", "fails", "sufficient-only", "unknown", "unsupported")
_POSITIVE = (HOLDS, SUFFICIENT)
PROBLEMS = ("approximation", "integration", "anchored-integration", "integration-nonneg-rules")
DEFAULT_SIGMA_TAU = ((0.5, 1.0), (1.0, 1.0), (2.0, 1.0))


@dataclass(frozen=True)
class TractabilityEntry:
    notion: str
    verdict: str
    basis: str
    exponent: float | None = None
    exponent_kind: str | None = None
    sigma: float | None = None
    tau: float | None = None

    def to_dict(self):
        return {k: getattr(self, k) for k in
                ("notion", "sigma", "tau", "verdict", "exponent", "exponent_kind", "basis")}


@dataclass(frozen=True)
class TractabilityReport:
    weights: object
    alpha: float
    family: Family
    info_class: str
    problem: str
    entries: tuple = field(default=())
    note: str = ""

    @property
    def supported(self):
        return all(e.verdict != UNSUPPORTED for e in self.entries)

    def entry(self, notion, sigma=None, tau=None):
        for e in self.entries:
            if e.notion == notion and (sigma is None or e.sigma == sigma) and (tau is None or e.tau == tau):
                return e
        raise KeyError(notion)

    def verdict(self, notion, sigma=None, tau=None):
        return self.entry(notion, sigma, tau).verdict


@dataclass(frozen=True)
class _WeightFacts:
    s_gamma: float
    infimum: float
    summable: bool
    log_bounded: bool
    seq: object

    def vanishing_mean(self, sigma):
        """lim_s s^-sigma sum_{j<=s} gamma_j == 0."""
        if sigma > 1:
            return True
        seq = self.seq
        if isinstance(seq, PolyDecay):
            return seq.a >= 1 or sigma > 1 - seq.a
        if isinstance(seq, Geometric):
            return True
        if isinstance(seq, Constant):
            return False
        return seq.tail == 0

    def vanishing_mean_all(self):
        """The previous condition for every sigma in (0, 1]."""
        seq = self.seq
        if isinstance(seq, PolyDecay):
            return seq.a >= 1
        if isinstance(seq, Explicit):
            return seq.tail == 0
        return isinstance(seq, Geometric)


def weight_facts(seq):
    if isinstance(seq, PolyDecay):
        summable, log_bounded = seq.a > 1, seq.a >= 1
    elif isinstance(seq, Geometric):
        summable = log_bounded = True
    elif isinstance(seq, Constant):
        summable = log_bounded = False
    else:
        summable = log_bounded = seq.tail == 0
    return _WeightFacts(sum_exponent(seq), weight_infimum(seq), summable, log_bounded, seq)


def _spt_exponent(alpha, facts):
    return 2.0 * max(1.0 / alpha, facts.s_gamma)


def _qpt_exponent(alpha, facts):
    gi = facts.infimum
    if gi == 0:
        return 2.0 / alpha
    return 2.0 * max(1.0 / alpha, 1.0 / math.log(1.0 / gi))


def _all_class_verdicts(family, alpha, facts, sigma_tau):
    """Verdicts for L2-approximation with arbitrary linear information."""
    anova = family is Family.GAUSSIAN_ANOVA
    cite = "Theorem 2" if anova else "Corollary 1"
    spt_ok = facts.s_gamma < math.inf
    out = {}
    tau_star = _spt_exponent(alpha, facts) if spt_ok else None
    out["SPT"] = (HOLDS if spt_ok else FAILS, f"{cite} item 1", tau_star, "exact" if spt_ok else None)
    out["PT"] = (HOLDS if spt_ok else FAILS, f"{cite} item 2", None, None)
    wt_ok = facts.infimum < 1
    if anova:
        v = HOLDS if wt_ok else FAILS
        basis = f"{cite} item 3" + ("" if wt_ok else " (curse of dimensionality, n >= 2^s)")
        for notion in ("QPT", "UWT", "WT"):
            out[notion] = (v, basis, None, None)
    else:
        out["QPT"] = (SUFFICIENT if wt_ok else UNKNOWN, f"{cite} item 3", None, None)
    if wt_ok:
        t_star = _qpt_exponent(alpha, facts)
        verdict, basis, _, _ = out["QPT"]
        out["QPT"] = (verdict, basis, t_star, "exact")
    for sigma, tau in sigma_tau:
        key = ("(sigma,tau)-WT", sigma, tau)
        if sigma > 1:
            out[key] = (HOLDS, f"{cite} item 4", None, None)
        elif anova:
            out[key] = (HOLDS if wt_ok else FAILS, f"{cite} item 3", None, None)
    return out


def _std_conditions(facts, sigma_tau, cite, positive, negative=None):
    """Map each notion to the verdict implied by the five weight conditions."""
    neg = negative if negative is not None else UNKNOWN
    out = {}
    out["SPT"] = (positive if facts.summable else neg, f"{cite} item 1", None, None)
    out["PT"] = (positive if facts.log_bounded else neg, f"{cite} item 2", None, None)
    out["WT"] = (positive if facts.vanishing_mean(1.0) else neg, f"{cite} item 3", None, None)
    out["UWT"] = (positive if facts.vanishing_mean_all() else neg, f"{cite} item 5", None, None)
    for sigma, tau in sigma_tau:
        if sigma <= 1:
            ok = facts.vanishing_mean(sigma)
            out[("(sigma,tau)-WT", sigma, tau)] = (positive if ok else neg, f"{cite} item 4", None, None)
    return out


_IMPLIES = [("SPT", "PT"), ("PT", "QPT"), ("QPT", "UWT"), ("UWT", "WT")]


def _implications(keys):
    edges = list(_IMPLIES)
    for key in keys:
        if isinstance(key, tuple):
            _, sigma, tau = key
            edges.append(("UWT", key))
            if sigma >= 1 and tau >= 1:
                edges.append(("WT", key))
            if sigma <= 1 and tau <= 1:
                edges.append((key, "WT"))
    return edges


def _close(verdicts, keys):
    """Propagate positive verdicts forward and failures backward along implications."""
    edges = _implications(keys)
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            va, vb = verdicts[a], verdicts[b]
            if va[0] in _POSITIVE and vb[0] == FAILS:
                raise AssertionError(f"inconsistent verdicts: {a} {va[0]} but {b} fails")
            if va[0] in _POSITIVE and vb[0] == UNKNOWN:
                verdicts[b] = (va[0], f"implied by {_name(a)} ({va[1]})", vb[2], vb[3])
                changed = True
            if vb[0] == FAILS and va[0] == UNKNOWN:
                verdicts[a] = (FAILS, f"{_name(b)} fails ({vb[1]})", None, None)
                changed = True
    return verdicts


def _name(key):
    if isinstance(key, tuple):
        return f"({key[1]:g},{key[2]:g})-WT"
    return key


def tractability_report(weights, alpha, family, info_class="all", problem="approximation",
                        sigma_tau=DEFAULT_SIGMA_TAU):
    """Evaluate the known tractability characterisations for a weight sequence.

    Integration problems always refer to function values (linear information
    makes integration trivial), so ``info_class`` is ignored for them.
    """
    family = Family(family)
    if problem not in PROBLEMS:
        raise DomainError(f"unknown problem {problem!r}")
    if info_class not in ("all", "std"):
        raise DomainError(f"unknown information class {info_class!r}")
    facts = weight_facts(weights)
    keys = ["SPT", "PT", "QPT", "WT", "UWT"] + [("(sigma,tau)-WT", s, t) for s, t in sigma_tau]
    verdicts = {k: (UNKNOWN, "no applicable result", None, None) for k in keys}
    reason = _unsupported_reason(family, alpha, info_class, problem)
    note = ""
    if reason:
        verdicts = {k: (UNSUPPORTED, reason, None, None) for k in keys}
    elif problem == "approximation" and info_class == "all":
        verdicts.update(_all_class_verdicts(family, alpha, facts, sigma_tau))
    elif problem == "approximation":
        verdicts.update(_std_conditions(facts, sigma_tau, "Theorem 4", SUFFICIENT))
        if verdicts["SPT"][0] == SUFFICIENT:
            verdicts["SPT"] = (SUFFICIENT, "Theorem 4 item 1", _spt_exponent(alpha, facts), "exact")
        lower = _all_class_verdicts(family, alpha, facts, sigma_tau)
        for k, v in lower.items():
            if v[0] == FAILS and verdicts[k][0] == UNKNOWN:
                verdicts[k] = (FAILS, v[1] + " for linear information, and n(all) <= n(std)", None, None)
    elif problem == "integration":
        verdicts.update(_std_conditions(facts, sigma_tau, "Theorem 5", SUFFICIENT))
        if verdicts["SPT"][0] == SUFFICIENT:
            verdicts["SPT"] = (SUFFICIENT, "Theorem 5 item 1", _spt_exponent(alpha, facts), "upper-bound")
        note = "function values only"
    elif problem == "integration-nonneg-rules":
        verdicts.update(_std_conditions(facts, sigma_tau, "Theorem 6", UNKNOWN, FAILS))
        for k, v in verdicts.items():
            if v[0] == UNKNOWN:
                verdicts[k] = (UNKNOWN, v[1] + ": necessary condition met, sufficiency not established", None, None)
        if facts.infimum > 0:
            verdicts["QPT"] = (FAILS, "Theorem 6 (weights bounded below: n grows exponentially in s)", None, None)
        note = "linear rules with non-negative weights"
    else:
        verdicts.update(_std_conditions(facts, sigma_tau, "anchored-space theorem", HOLDS, FAILS))
        note = "weighted anchored Sobolev space; family ignored"
    verdicts = _close(verdicts, keys)
    entries = []
    for k in keys:
        v, basis, expo, kind = verdicts[k]
        if isinstance(k, tuple):
            entries.append(TractabilityEntry(k[0], v, basis, expo, kind, k[1], k[2]))
        else:
            entries.append(TractabilityEntry(k, v, basis, expo, kind))
    return TractabilityReport(weights, alpha, family, info_class, problem, tuple(entries), note)


def _unsupported_reason(family, alpha, info_class, problem):
    if problem == "anchored-integration":
        return "" if alpha > 1 else "anchored-space integration results need alpha > 1"
    if family is Family.EXPONENTIAL:
        return "no tractability result is available for the exponential family"
    if problem == "integration-nonneg-rules":
        return "" if alpha >= 1 else "alpha must be at least 1"
    if problem == "approximation" and info_class == "all":
        return ""
    if not alpha > 1:
        return "results for function values need alpha > 1"
    return ""
