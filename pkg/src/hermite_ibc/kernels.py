"""Reproducing kernels of weighted Hermite spaces and of the anchored space.

Series kernels are summed with a certified tail.  Each term is bounded
through |H_k(x)| sqrt(phi(x)) <= min(1, sqrt(pi) k^(-1/12)), and the weight
tail is bounded by its power-law envelope.  For slowly decaying weights that
certificate needs astronomically many terms.  In that case the tail beyond a
short head is written as an integral of the Mehler kernel against a density
in the generating variable omega, and evaluated by adaptive quadrature.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError, ToleranceError
from .hermite_core import SQRT_2PI, hermite_table, normal_cdf
from .weights import Family, weight_table

_PI6 = math.pi ** 6  # beyond this degree the improved bound is below 1


@dataclass(frozen=True)
class KernelEvalOptions:
    """Accuracy and effort controls.

    ``method`` is "auto", "direct" (plain truncated series) or "transform"
    (short head plus integral tail; polynomially decaying families only).
    ``quadrature_points`` caps the subintervals of every adaptive quadrature.
    """
    tail_tolerance: float = 1e-10
    max_degree: int = 10 ** 6
    quadrature_points: int = 201
    method: str = "auto"
    direct_limit: int = 20000
    transform_head: int = 128

    def __post_init__(self):
        if not self.tail_tolerance > 0:
            raise DomainError("tail_tolerance must be positive")
        if self.max_degree < 1 or self.quadrature_points < 1:
            raise DomainError("caps must be positive")
        if self.method not in ("auto", "direct", "transform"):
            raise DomainError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class KernelValue:
    value: object
    tail_bound: object
    method: str

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class AnchoredValue:
    value: float
    decomposable: float

    def __iter__(self):
        return iter((self.value, self.decomposable))


def _quad(f, a, b, points=None, epsabs=1e-13, epsrel=1e-12, limit=201):
    if a == b:
        return 0.0, 0.0
    pts = None
    if points:
        pts = sorted({p for p in points if a < p < b}) or None
    out = integrate.quad(f, a, b, points=pts, epsabs=epsabs, epsrel=epsrel,
                         limit=limit, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3 and err > 100 * max(epsabs, epsrel * abs(val)):
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {out[3]}")
    return val, err


def envelope(x):
    """phi(x)^(-1/2), the Cramer envelope of |H_k(x)|."""
    x = np.asarray(x, dtype=float)
    return (2.0 * math.pi) ** 0.25 * np.exp(0.25 * x * x)


# ---------------------------------------------------------------------------
# truncated series

def _tail_weight_bound(spec, gamma, big_k):
    """Upper bound on sum_{k > K} w(k) min(1, pi k^(-1/6))."""
    if spec.family is Family.EXPONENTIAL:
        return gamma * spec.omega ** (big_k + 1) / (1.0 - spec.omega)
    a = spec.alpha
    kc = max(big_k, math.ceil(_PI6))
    tab = weight_table(spec, gamma, kc)[big_k + 1:]
    ks = np.arange(big_k + 1, kc + 1, dtype=float)
    exact = float(np.sum(tab * np.minimum(1.0, math.pi * ks ** (-1.0 / 6.0))))
    c = gamma if spec.family is Family.KOROBOV else gamma * float(a) ** a
    return exact + c * math.pi * kc ** (5.0 / 6.0 - a) / (a - 5.0 / 6.0)


def _degree_needed(spec, gamma, scale, tol, cap):
    k = 32
    while _tail_weight_bound(spec, gamma, k) * scale > tol:
        if k >= cap:
            return None
        k = min(2 * k, cap)
    lo, hi = k // 2, k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _tail_weight_bound(spec, gamma, mid) * scale > tol:
            lo = mid
        else:
            hi = mid
    return hi


def _direct_1d(w, xs, ys):
    """sum_{k <= K} w[k] H_k(x) H_k(y) for arrays xs, ys."""
    total = np.full(xs.shape, w[0])
    hx0, hy0 = np.ones_like(xs), np.ones_like(ys)
    hx1, hy1 = xs.copy(), ys.copy()
    for k in range(1, len(w)):
        total += w[k] * hx1 * hy1
        r0, r1 = math.sqrt(k), math.sqrt(k + 1)
        hx0, hx1 = hx1, (xs * hx1 - r0 * hx0) / r1
        hy0, hy1 = hy1, (ys * hy1 - r0 * hy0) / r1
    return total


def _omega_density(spec, gamma, head):
    """mu with w(k) = int_0^1 omega^k mu(omega) d omega for every k > head."""
    a = spec.alpha
    if spec.family is Family.GAUSSIAN_ANOVA:
        c = gamma / math.factorial(a - 1)
        return lambda om, u2: c * u2 ** (a - 1) * om ** (-a)
    if spec.family is Family.KOROBOV:
        c = gamma / math.gamma(a)
        return lambda om, u2: c * (-math.log1p(-u2)) ** (a - 1) / om
    poly = np.polynomial.Polynomial([gamma])
    beta = np.polynomial.Polynomial([1.0])
    for tau in range(1, a + 1):
        beta = beta * np.polynomial.Polynomial([-(tau - 1), 1.0])
        poly = poly + beta
    roots = poly.roots()
    if len(roots) > 1:
        gaps = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots))
        if gaps.min() < 1e-8:
            raise ToleranceError("repeated roots in the Sobolev weight denominator")
    if np.max(roots.real) >= head:
        raise ToleranceError("series head too short for the integral tail")
    resid = 1.0 / poly.deriv()(roots)

    def mu(om, u2):
        return gamma * float(np.real(np.sum(resid * np.exp(-(roots + 1.0) * math.log(om)))))
    return mu


def _transform_1d(spec, gamma, xs, ys, opts):
    """Head of ``transform_head`` terms plus the tail as an omega-integral."""
    head = opts.transform_head
    w = weight_table(spec, gamma, head)
    prods = hermite_table(head, xs) * hermite_table(head, ys)
    value_head = w @ prods
    mu = _omega_density(spec, gamma, head)
    xy, d2 = xs * ys, (xs - ys) ** 2
    omega0 = 0.5
    u_max = math.sqrt(1.0 - omega0)

    def integrand(u):
        u2 = u * u
        om = 1.0 - u2
        q = u2 * (2.0 - u2)  # 1 - omega^2
        two_u_mehler = 2.0 / math.sqrt(2.0 - u2) * np.exp(om * xy / (1.0 + om) - om * om * d2 / (2.0 * q))
        partial = np.polynomial.polynomial.polyval(om, prods)
        return mu(om, u2) * (two_u_mehler - 2.0 * u * partial)

    tol = opts.tail_tolerance
    val, err = integrate.quad_vec(integrand, 0.0, u_max, epsabs=tol / 10, epsrel=1e-12,
                                  limit=max(opts.quadrature_points, 200))
    # the part omega < omega0 was dropped; bound it through the Cramer envelope
    ex, ey = envelope(xs), envelope(ys)
    drop, _ = integrate.quad(lambda om: abs(mu(om, 1.0 - om)) * om ** (head + 1), 1e-300, omega0)
    cut = 2.0 * drop * ex * ey
    return value_head + val, err + cut


def _kernel_1d(spec, gamma, xs, ys, opts):
    scale = float(np.max(envelope(xs) * envelope(ys)))
    tol = opts.tail_tolerance
    poly_family = spec.family is not Family.EXPONENTIAL
    if opts.method == "transform" and poly_family:
        v, b = _transform_1d(spec, gamma, xs, ys, opts)
        return v, np.broadcast_to(b, xs.shape), "transform"
    cap = opts.max_degree
    if opts.method == "auto" and poly_family:
        cap = min(cap, opts.direct_limit)
    k = _degree_needed(spec, gamma, scale, tol, cap)
    if k is None:
        if opts.method == "auto" and poly_family:
            v, b = _transform_1d(spec, gamma, xs, ys, opts)
            return v, np.broadcast_to(b, xs.shape), "transform"
        raise ToleranceError(f"tail tolerance {tol} not reachable below degree {cap}")
    w = weight_table(spec, gamma, k)
    bound = _tail_weight_bound(spec, gamma, k) * envelope(xs) * envelope(ys)
    return _direct_1d(w, xs, ys), bound, "direct"


def kernel_series(space, x, y, opts=None):
    """K_R(x, y) = sum_k R(k) H_k(x) H_k(y) as a product of 1-D series.

    ``x`` and ``y`` are points of length s or arrays of points with last
    axis s.  Returns a KernelValue whose ``tail_bound`` bounds the absolute
    error of ``value`` pointwise.
    """
    opts = opts or KernelEvalOptions()
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.ndim == 0:
        x, y = x.reshape(1), y.reshape(1)
    if x.shape != y.shape or x.shape[-1] != space.s:
        raise DomainError(f"points must have last dimension s = {space.s}")
    lead = x.shape[:-1]
    xs, ys = x.reshape(-1, space.s), y.reshape(-1, space.s)
    value = np.ones(xs.shape[0])
    upper = np.ones(xs.shape[0])
    methods = set()
    for j in range(space.s):
        g = space.fw.gamma(j + 1)
        if g == 0.0:
            continue
        v, b, how = _kernel_1d(space.fw, g, xs[:, j], ys[:, j], opts)
        methods.add(how)
        value = value * v
        upper = upper * (np.abs(v) + b)
    bound = upper - np.abs(value)
    if not lead:
        return KernelValue(float(value[0]), float(bound[0]), "+".join(sorted(methods)) or "direct")
    return KernelValue(value.reshape(lead), bound.reshape(lead), "+".join(sorted(methods)) or "direct")


def kernel_mehler(omega, weights, s, x, y):
    """Closed-form kernel of the exponential family via Mehler's formula."""
    if not 0 < omega < 1:
        raise DomainError("omega must lie in (0, 1)")
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.ndim == 0:
        x, y = x.reshape(1), y.reshape(1)
    if x.shape[-1] != s or y.shape != x.shape:
        raise DomainError(f"points must have last dimension s = {s}")
    g = np.array([weights.gamma(j) for j in range(1, s + 1)])
    q = 1.0 - omega * omega
    m = np.exp(omega * x * y / (1.0 + omega) - omega * omega * (x - y) ** 2 / (2.0 * q)) / math.sqrt(q)
    val = np.prod(1.0 - g + g * m, axis=-1)
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# integral representation for Gaussian ANOVA weights

def theta(x, y):
    """theta(x, y) = Phi(y) if y <= x else -Phi(-y)."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    out = np.where(y <= x, normal_cdf(y), -normal_cdf(-y))
    return float(out) if out.ndim == 0 else out


def antiderivative_op(h, x, opts=None, epsabs=1e-13):
    """The zero-mean primitive g(x) = int h(y) theta(x, y) dy of ``h``.

    Integrals are truncated at |y| = 10 and split at 0 and x.
    """
    opts = opts or KernelEvalOptions()
    lo, hi = min(-10.0, x), max(10.0, x)
    left, _ = _quad(lambda t: h(t) * normal_cdf(t), lo, x, points=[0.0],
                    epsabs=epsabs, limit=opts.quadrature_points)
    right, _ = _quad(lambda t: h(t) * normal_cdf(-t), x, hi, points=[0.0],
                     epsabs=epsabs, limit=opts.quadrature_points)
    return left - right


def kernel_anova_integral(alpha, gamma, x, y, opts=None):
    """Gaussian ANOVA kernel of smoothness 1 or 2 from its theta-integral form."""
    opts = opts or KernelEvalOptions()
    if alpha not in (1, 2):
        raise DomainError("integral representation is implemented for alpha in {1, 2}")
    lim = opts.quadrature_points
    cut = [x, y, 0.0]
    if alpha == 1:
        def outer(t):
            return theta(x, t) * theta(y, t) * (SQRT_2PI * math.exp(0.5 * t * t))
        val, _ = _quad(outer, -8.0, 8.0, points=cut, epsabs=1e-14, limit=lim)
        return 1.0 + gamma * val

    def inner(z, t):
        # int theta(z, xi) theta(xi, t) d xi, the primitive of xi -> theta(xi, t)
        tol = 1e-14 * math.exp(-0.5 * t * t)
        lo, hi = min(-10.0, z), max(10.0, z)
        pts = [0.0, t]
        a, _ = _quad(lambda u: theta(u, t) * normal_cdf(u), lo, z, points=pts, epsabs=tol, limit=lim)
        b, _ = _quad(lambda u: theta(u, t) * normal_cdf(-u), z, hi, points=pts, epsabs=tol, limit=lim)
        return a - b

    def outer(t):
        return inner(x, t) * inner(y, t) * (SQRT_2PI * math.exp(0.5 * t * t))
    val, _ = _quad(outer, -8.0, 8.0, points=cut, epsabs=1e-12, epsrel=1e-10, limit=lim)
    return 1.0 + gamma * x * y + gamma * val


# ---------------------------------------------------------------------------
# anchored kernel

def kernel_anchored(alpha, gamma, x, y, opts=None):
    """Anchored Sobolev kernel; returns (value, decomposable part L)."""
    opts = opts or KernelEvalOptions()
    if int(alpha) != alpha or alpha < 1:
        raise DomainError("alpha must be a positive integer")
    alpha = int(alpha)
    xy = x * y
    poly = 1.0
    fact = 1.0
    for ell in range(1, alpha):
        fact *= ell
        poly += gamma * xy ** ell / (fact * fact)
    if xy < 0:
        return AnchoredValue(poly, 0.0)
    ax, ay = abs(x), abs(y)
    top = min(ax, ay)
    norm = float(math.factorial(alpha - 1)) ** 2

    def f(t):
        return SQRT_2PI * math.exp(0.5 * t * t) * (ax - t) ** (alpha - 1) * (ay - t) ** (alpha - 1) / norm
    big_l, _ = _quad(f, 0.0, top, epsabs=1e-14, limit=opts.quadrature_points)
    return AnchoredValue(poly + gamma * big_l, big_l)


def kernel_anchored_product(alpha, weights, x, y, opts=None):
    """Tensor product of 1-D anchored kernels with coordinate weights."""
    val = 1.0
    for j, (xj, yj) in enumerate(zip(x, y), start=1):
        val *= kernel_anchored(alpha, weights.gamma(j), xj, yj, opts).value
    return val
