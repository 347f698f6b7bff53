"""Function-level computations: Hermite coefficients, norms, truncation and cubature error."""
import csv
from dataclasses import dataclass
import io
import itertools
import math

import numpy as np

from .errors import DomainError, QuadratureError, SchemaError
from .hermite_core import gauss_hermite, hermite_table
from .kernels import kernel_mehler, kernel_series
from .spectra import eigenvalue_stream
from .weights import Family, MultiIndex, embedding_scaled_weights, fourier_weight

COEFF_DROP = 1e-13
QUAD_BUDGET = 4_000_000


@dataclass(frozen=True)
class HermiteCoefficients:
    coeffs: dict
    s: int

    def items(self):
        return self.coeffs.items()

    def l2_norm(self):
        return math.sqrt(math.fsum(c * c for c in self.coeffs.values()))

    def restricted(self, keep):
        return HermiteCoefficients({k: c for k, c in self.coeffs.items() if k in keep}, self.s)

    def evaluate(self, x):
        """Evaluate the expansion at points ``x`` with last axis s."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        deg = max((k for m in self.coeffs for _, k in m.items()), default=0)
        tabs = [hermite_table(deg, x[:, j]) for j in range(self.s)]
        out = np.zeros(x.shape[0])
        for m, c in self.coeffs.items():
            term = np.full(x.shape[0], c)
            for j, k in m.items():
                term *= tabs[j - 1][k]
            out += term
        return out


@dataclass(frozen=True)
class CubatureRule:
    nodes: np.ndarray
    weights: np.ndarray
    s: int | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        nodes = np.asarray(self.nodes, dtype=float)
        s = self.s
        if s is None and nodes.ndim == 2 and len(w):
            s = nodes.shape[1]
        nodes = nodes.reshape(len(w), s if s is not None else 0)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "s", s)

    @property
    def nonneg(self):
        return bool(np.all(self.weights >= 0))

    def __len__(self):
        return len(self.weights)


# ---------------------------------------------------------------------------
# coefficients and norms

def hermite_coefficients(f, s, degree_cap, quad_points=None):
    """Hermite coefficients of ``f`` for all k with max_j k_j <= degree_cap.

    ``f`` maps an (N, s) array of points to N values.  The tensor Gauss rule
    has ``degree_cap + 1`` points per axis unless ``quad_points`` is given,
    which integrates f * H_k exactly whenever f is a polynomial of degree at
    most ``degree_cap`` in each variable.
    """
    n = quad_points or degree_cap + 1
    if n ** s > QUAD_BUDGET:
        raise QuadratureError(f"tensor rule with {n}^{s} nodes exceeds the budget")
    rule = gauss_hermite(n)
    grid = np.array(list(itertools.product(rule.nodes, repeat=s))).reshape(-1, s)
    vals = np.asarray(f(grid), dtype=float).reshape((n,) * s)
    proj = hermite_table(degree_cap, rule.nodes) * rule.weights
    c = vals
    for axis in reversed(range(s)):
        c = np.tensordot(proj, c, axes=([1], [c.ndim - 1]))
    out = {}
    for idx in zip(*np.nonzero(np.abs(c) >= COEFF_DROP)):
        out[MultiIndex.from_dense(idx)] = float(c[idx])
    return HermiteCoefficients(out, s)


def norm_in_space(coeffs, space):
    """sqrt(sum_k c_k^2 / R(k))."""
    return math.sqrt(math.fsum(c * c / fourier_weight(space.fw, k) for k, c in coeffs.items()))


def sobolev_norm_1d(derivs, alpha, gamma, quad=None):
    """Norm from means of derivatives, given f, f', ..., f^(alpha) as callables."""
    if len(derivs) < alpha + 1:
        raise DomainError(f"need f and its first {alpha} derivatives")
    quad = quad or gauss_hermite(64)
    total = quad.integrate(derivs[0]) ** 2
    for tau in range(1, alpha):
        total += quad.integrate(derivs[tau]) ** 2 / gamma
    total += quad.integrate(lambda x: np.asarray(derivs[alpha](x), dtype=float) ** 2) / gamma
    return math.sqrt(total)


def spectral_truncation(coeffs, space, n):
    """Keep the coefficients on the n leading eigen-directions; return (kept, L2 error)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    keep = {k for _, k in itertools.islice(eigenvalue_stream(space), n)}
    kept = coeffs.restricted(keep)
    err = math.sqrt(math.fsum(c * c for k, c in coeffs.items() if k not in keep))
    return kept, err


# ---------------------------------------------------------------------------
# worst-case integration error

def _gram(space, nodes, opts):
    if space.family is Family.EXPONENTIAL:
        xs, ys = np.broadcast_arrays(nodes[:, None, :], nodes[None, :, :])
        return kernel_mehler(space.fw.omega, space.fw.weights, space.s, xs, ys)
    n = len(nodes)
    iu, ju = np.triu_indices(n)
    vals = np.asarray(kernel_series(space, nodes[iu], nodes[ju], opts).value)
    gram = np.empty((n, n))
    gram[iu, ju] = vals
    gram[ju, iu] = vals
    return gram


def wce_squared(space, rule, opts=None):
    """Raw (unclamped) squared worst-case error 1 - 2 sum w + w^T K w."""
    if len(rule) == 0:
        return 1.0
    if rule.s != space.s:
        raise DomainError(f"rule dimension {rule.s} does not match s = {space.s}")
    gram = _gram(space, rule.nodes, opts)
    w = rule.weights
    quad_form = math.fsum((np.outer(w, w) * gram).ravel())
    return math.fsum([1.0, -2.0 * math.fsum(w), quad_form])


def wce_integration(space, rule, opts=None):
    """Worst-case integration error of a cubature rule."""
    return math.sqrt(max(0.0, wce_squared(space, rule, opts)))


def c_omega(omega):
    r = math.sqrt(1.0 - omega * omega)
    return (1.0 - r) / r


def _log_prod(alpha, weights, s, omega):
    omega = 3.0 ** (-alpha / 3.0) if omega is None else omega
    c = c_omega(omega)
    return math.fsum(math.log1p(weights.gamma(j) * c) for j in range(1, s + 1))


def wce_lower_bound(alpha, weights, s, n, omega=None):
    """Lower bound on the error of any n-point rule with non-negative weights."""
    if n < 0 or alpha < 1:
        raise DomainError("need n >= 0 and alpha >= 1")
    val = 1.0 - n * math.exp(-_log_prod(alpha, weights, s, omega))
    return math.sqrt(max(0.0, val))


def nonneg_node_bound(alpha, weights, s, epsilon, omega=None):
    """(1 - eps^2) prod_j (1 + gamma_j c_omega): nodes needed by non-negative rules."""
    return (1.0 - epsilon * epsilon) * math.exp(_log_prod(alpha, weights, s, omega))


def space_lower_bound(space, n):
    """Non-negative-rule lower bound for any of the four families.

    The bound lives in the exponential space; every other family dominates
    one with omega = 3^(-alpha/3), after shrinking the weights for Sobolev.
    """
    fam, alpha = space.family, space.alpha
    if fam is Family.EXPONENTIAL:
        return wce_lower_bound(1, space.fw.weights, space.s, n, omega=space.fw.omega)
    weights = embedding_scaled_weights(space.fw) if fam is Family.SOBOLEV else space.fw.weights
    return wce_lower_bound(alpha, weights, space.s, n)


# ---------------------------------------------------------------------------
# rule files

def parse_rule_csv(text):
    """Parse "w,x1,...,xs" CSV text into a CubatureRule."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [(i, r) for i, r in enumerate(rows, start=1) if any(c.strip() for c in r)]
    if not rows:
        return CubatureRule(np.zeros((0, 0)), np.zeros(0), None)
    line, header = rows[0]
    header = [h.strip() for h in header]
    s = len(header) - 1
    expected = ["w"] + [f"x{j}" for j in range(1, s + 1)]
    if s < 1 or header != expected:
        raise SchemaError(f"line {line}: header must be {','.join(expected) if s >= 1 else 'w,x1,...'}")
    weights, nodes = [], []
    for line, row in rows[1:]:
        if len(row) != s + 1:
            raise SchemaError(f"line {line}: expected {s + 1} columns, found {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError as exc:
            raise SchemaError(f"line {line}: {exc}") from None
        if not all(math.isfinite(v) for v in vals):
            raise SchemaError(f"line {line}: non-finite value")
        weights.append(vals[0])
        nodes.append(vals[1:])
    return CubatureRule(np.array(nodes).reshape(len(weights), s), np.array(weights), s)


def read_rule_csv(path):
    with open(path, newline="") as fh:
        return parse_rule_csv(fh.read())


def format_rule_csv(rule):
    s = rule.s or 1
    lines = [",".join(["w"] + [f"x{j}" for j in range(1, s + 1)])]
    for w, x in zip(rule.weights, rule.nodes):
        lines.append(",".join(repr(float(v)) for v in (w, *x)))
    return "\n".join(lines) + "\n"
