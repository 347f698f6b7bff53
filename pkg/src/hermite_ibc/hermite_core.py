"""Orthonormal Hermite polynomials, Gaussian quadrature and a few special functions.

All Hermite polynomials here are the probabilists' ones normalised to be
orthonormal with respect to the standard normal density.
"""
from dataclasses import dataclass
import math

import numpy as np
from numpy.polynomial import hermite as _phys_hermite
from scipy import special

from .errors import DomainError, QuadratureError

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureRule:
    """Quadrature for integrals against the standard normal density."""
    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    def integrate(self, f):
        """Apply the rule to a vectorised callable."""
        return float(np.dot(self.weights, np.asarray(f(self.nodes), dtype=float)))

    def __len__(self):
        return len(self.nodes)


def hermite_eval(k, x):
    """Evaluate H_k at ``x`` (scalar or array) with the normalised recurrence."""
    if k < 0:
        raise DomainError("Hermite degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for j in range(1, k):
        prev, cur = cur, (x * cur - math.sqrt(j) * prev) / math.sqrt(j + 1)
    return cur if cur.ndim else float(cur)


def hermite_table(kmax, x):
    """Return an array of shape ``(kmax + 1,) + x.shape`` holding H_0..H_kmax."""
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = x
    for j in range(1, kmax):
        out[j + 1] = (x * out[j] - math.sqrt(j) * out[j - 1]) / math.sqrt(j + 1)
    return out


def hermite_eval_multi(k, x):
    """Evaluate the tensor-product Hermite polynomial for a MultiIndex ``k``.

    ``x`` is a point (length ``s``) or an array of points with last axis ``s``.
    """
    x = np.asarray(x, dtype=float)
    s = x.shape[-1] if x.ndim else 1
    if k.max_dim > s:
        raise DomainError(f"multi-index uses dimension {k.max_dim} but the point has {s}")
    val = np.ones(x.shape[:-1]) if x.ndim > 1 else 1.0
    for j, kj in k.items():
        val = val * hermite_eval(kj, x[..., j - 1])
    return val


def gauss_hermite(n):
    """n-point Gauss rule for the standard normal density, exact to degree 2n - 1."""
    if n < 1:
        raise DomainError("quadrature needs at least one node")
    try:
        t, w = _phys_hermite.hermgauss(n)
    except np.linalg.LinAlgError as exc:
        raise QuadratureError(f"Gauss-Hermite node computation failed for n={n}") from exc
    nodes = t * math.sqrt(2.0)
    weights = w / math.sqrt(math.pi)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
        raise QuadratureError(f"non-finite Gauss-Hermite rule for n={n}")
    return QuadratureRule(nodes=nodes, weights=weights, degree=2 * n - 1)


# Bernoulli numbers B_2, B_4, ... used by the Euler-Maclaurin tail.
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def zeta_tail(x, start):
    """Return sum_{n >= start} n^-x for x > 1 and integer start >= 1.

    Below ``max(start, 16)`` terms are summed directly; beyond that the
    integral tail and Euler-Maclaurin corrections take over.
    """
    if not x > 1.0:
        raise DomainError(f"zeta argument must exceed 1, got {x}")
    cut = max(int(start), 16)
    head = math.fsum(n ** -x for n in range(int(start), cut))
    tail = cut ** (1.0 - x) / (x - 1.0) + 0.5 * cut ** -x
    rising = x
    power = cut ** (-x - 1.0)
    fact = 2.0
    for m, b in enumerate(_BERNOULLI, start=1):
        tail += b / fact * rising * power
        rising *= (x + 2 * m - 1) * (x + 2 * m)
        power /= cut * cut
        fact *= (2 * m + 1) * (2 * m + 2)
    return head + tail


def zeta(x):
    """Riemann zeta function for real x > 1, absolute accuracy about 1e-13."""
    return zeta_tail(x, 1)


def normal_pdf(y):
    y = np.asarray(y, dtype=float)
    out = np.exp(-0.5 * y * y) / SQRT_2PI
    return out if out.ndim else float(out)


def normal_cdf(y):
    """Standard normal CDF via erfc, accurate in both tails."""
    y = np.asarray(y, dtype=float)
    out = 0.5 * special.erfc(-y / math.sqrt(2.0))
    return out if out.ndim else float(out)


def mills_ratio(t):
    """Return Phi(-t) / phi(t) without underflow, for any real t."""
    t = np.asarray(t, dtype=float)
    out = math.sqrt(math.pi / 2.0) * special.erfcx(t / math.sqrt(2.0))
    return out if out.ndim else float(out)


def max_scaled_hermite(kmax, x):
    """max over k <= kmax and the points x of |H_k(x)| sqrt(phi(x)); Cramer's bound keeps it below 1."""
    x = np.asarray(x, dtype=float)
    return float(np.max(np.abs(hermite_table(kmax, x)) * np.sqrt(normal_pdf(x))))
