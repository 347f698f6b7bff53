"""Coordinate weight sequences, multi-indices and the four Fourier weight families."""
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .errors import DomainError


# ---------------------------------------------------------------------------
# coordinate weights gamma_1 >= gamma_2 >= ...

@dataclass(frozen=True)
class PolyDecay:
    """gamma_j = scale * j^-a."""
    a: float
    scale: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("PolyDecay needs a > 0")
        if not 0 < self.scale <= 1:
            raise DomainError("PolyDecay scale must lie in (0, 1]")

    def gamma(self, j):
        return self.scale * float(j) ** -self.a

    def scaled(self, factor):
        return PolyDecay(self.a, self.scale * factor)


@dataclass(frozen=True)
class Geometric:
    """gamma_j = scale * c^j."""
    c: float
    scale: float = 1.0

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise DomainError("Geometric needs c in (0, 1)")
        if not 0 < self.scale <= 1:
            raise DomainError("Geometric scale must lie in (0, 1]")

    def gamma(self, j):
        return self.scale * self.c ** j

    def scaled(self, factor):
        return Geometric(self.c, self.scale * factor)


@dataclass(frozen=True)
class Constant:
    """gamma_j = g for every j."""
    g: float

    def __post_init__(self):
        if not 0 < self.g <= 1:
            raise DomainError("Constant weight must lie in (0, 1]")

    def gamma(self, j):
        return self.g

    def scaled(self, factor):
        return Constant(self.g * factor)


@dataclass(frozen=True)
class Explicit:
    """Listed leading weights followed by a constant tail (tail 0 allowed)."""
    prefix: tuple
    tail: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(float(v) for v in self.prefix))
        vals = self.prefix
        if any(not 0 < v <= 1 for v in vals):
            raise DomainError("Explicit prefix entries must lie in (0, 1]")
        if any(b > a for a, b in zip(vals, vals[1:])):
            raise DomainError("Explicit prefix must be non-increasing")
        if self.tail < 0 or (vals and self.tail > vals[-1]) or self.tail > 1:
            raise DomainError("Explicit tail must lie in [0, last prefix entry]")

    def gamma(self, j):
        return self.prefix[j - 1] if j <= len(self.prefix) else self.tail

    def scaled(self, factor):
        return Explicit(tuple(v * factor for v in self.prefix), self.tail * factor)


WeightSequence = PolyDecay | Geometric | Constant | Explicit


def gammas(seq, s):
    """Array of gamma_1..gamma_s."""
    return np.array([seq.gamma(j) for j in range(1, s + 1)], dtype=float)


def sum_exponent(seq):
    """Infimum of kappa with sum_j gamma_j^kappa finite (may be inf)."""
    if isinstance(seq, PolyDecay):
        return 1.0 / seq.a
    if isinstance(seq, Geometric):
        return 0.0
    if isinstance(seq, Constant):
        return math.inf
    return 0.0 if seq.tail == 0 else math.inf


def weight_infimum(seq):
    if isinstance(seq, (PolyDecay, Geometric)):
        return 0.0
    if isinstance(seq, Constant):
        return seq.g
    return seq.tail


# ---------------------------------------------------------------------------
# Fourier weight families

class Family(str, Enum):
    GAUSSIAN_ANOVA = "anova"
    KOROBOV = "korobov"
    SOBOLEV = "sobolev"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class FourierWeightSpec:
    family: Family
    alpha: float
    weights: WeightSequence
    omega: float | None = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam is Family.EXPONENTIAL:
            if self.omega is None or not 0 < self.omega < 1:
                raise DomainError("Exponential family needs omega in (0, 1)")
        elif self.omega is not None:
            raise DomainError("omega is only meaningful for the Exponential family")
        if fam in (Family.GAUSSIAN_ANOVA, Family.SOBOLEV):
            if float(self.alpha) != int(self.alpha) or self.alpha < 1:
                raise DomainError(f"{fam.value} family needs a positive integer alpha")
            object.__setattr__(self, "alpha", int(self.alpha))
        elif fam is Family.KOROBOV and not self.alpha >= 1:
            raise DomainError("Korobov-type family needs alpha >= 1")

    def gamma(self, j):
        return self.weights.gamma(j)


def _weight_1d(family, alpha, omega, gamma, k):
    """Scalar 1-D Fourier weight; k is a Python int >= 0."""
    if k == 0:
        return 1.0
    if family is Family.GAUSSIAN_ANOVA:
        prod = 1.0
        if k < alpha:
            for i in range(2, k + 1):
                prod *= float(i)
        else:
            for i in range(alpha):
                prod *= float(k - i)
        return gamma / prod
    if family is Family.KOROBOV:
        if float(alpha).is_integer():
            prod = 1.0
            for _ in range(int(alpha)):
                prod *= float(k)
            return gamma / prod
        return gamma / float(k) ** alpha
    if family is Family.SOBOLEV:
        beta = 1.0
        total = 0.0
        for tau in range(1, alpha + 1):
            beta *= float(k - tau + 1)
            total += beta
        return 1.0 / (1.0 + total / gamma)
    return gamma * omega ** k


def weight_table(spec, gamma, kmax):
    """Vectorised 1-D weights for k = 0..kmax with coordinate weight ``gamma``.

    Uses the same operation order as the scalar path, so results agree bitwise.
    """
    k = np.arange(kmax + 1, dtype=float)
    fam, alpha = spec.family, spec.alpha
    out = np.empty(kmax + 1)
    if fam is Family.GAUSSIAN_ANOVA:
        low = min(alpha, kmax + 1)
        for kk in range(low):
            out[kk] = _weight_1d(fam, alpha, None, gamma, kk)
        if kmax >= alpha:
            kh = k[alpha:]
            prod = np.ones_like(kh)
            for i in range(alpha):
                prod *= kh - i
            out[alpha:] = gamma / prod
    elif fam is Family.KOROBOV and float(alpha).is_integer():
        prod = np.ones(kmax)
        for _ in range(int(alpha)):
            prod *= k[1:]
        out[1:] = gamma / prod
    elif fam is Family.SOBOLEV:
        beta = np.ones_like(k)
        total = np.zeros_like(k)
        for tau in range(1, alpha + 1):
            beta *= k - tau + 1
            total += beta
        out[:] = 1.0 / (1.0 + total / gamma)
    else:
        # numpy's vectorised power is not bitwise equal to float.__pow__
        out[:] = np.fromiter((_weight_1d(fam, alpha, spec.omega, gamma, kk) for kk in range(kmax + 1)),
                             float, kmax + 1)
    out[0] = 1.0
    return out


def fourier_weight_1d(spec, j, k):
    """Fourier weight of degree ``k`` in coordinate ``j`` (1-based)."""
    if j < 1 or k < 0:
        raise DomainError("need j >= 1 and k >= 0")
    return _weight_1d(spec.family, spec.alpha, spec.omega, spec.gamma(j), int(k))


def fourier_weight(spec, k):
    """Product of the 1-D weights over the support of the MultiIndex ``k``."""
    val = 1.0
    for j, kj in k.items():
        val *= _weight_1d(spec.family, spec.alpha, spec.omega, spec.gamma(j), kj)
    return val


def decay_bounds(alpha, gamma, k):
    """Lower and upper envelopes gamma/k^alpha and gamma*(alpha/k)^alpha of r_{alpha,gamma}(k)."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 1):
        raise DomainError("decay bounds need k >= 1")
    kp = k ** alpha
    if kp.ndim == 0:
        kp = float(kp)
    return gamma / kp, gamma * float(alpha) ** alpha / kp


def embedding_scaled_weights(spec):
    """Weights for which the Gaussian ANOVA norm dominates the given family's norm."""
    a = float(spec.alpha) ** spec.alpha
    if spec.family is Family.KOROBOV:
        return spec.weights.scaled(1.0 / a)
    if spec.family is Family.SOBOLEV:
        return spec.weights.scaled(1.0 / (2.0 * a))
    raise DomainError("embedding scaling is defined for the Korobov-type and Sobolev families only")


# ---------------------------------------------------------------------------
# multi-indices

@dataclass(frozen=True)
class MultiIndex:
    """Sparse multi-index: sorted ``(j, k_j)`` pairs with j 1-based and k_j >= 1."""
    entries: tuple = field(default=())

    def __post_init__(self):
        ent = tuple(sorted((int(j), int(k)) for j, k in self.entries if k != 0))
        dims = [j for j, _ in ent]
        if len(set(dims)) != len(dims):
            raise DomainError("repeated dimension in multi-index")
        if any(j < 1 or k < 0 for j, k in ent):
            raise DomainError("multi-index needs j >= 1 and k >= 0")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d.items()))

    @classmethod
    def from_dense(cls, ks):
        return cls(tuple((j + 1, k) for j, k in enumerate(ks)))

    def items(self):
        return iter(self.entries)

    def get(self, j):
        for jj, k in self.entries:
            if jj == j:
                return k
        return 0

    def dense(self, s):
        out = [0] * s
        for j, k in self.entries:
            if j > s:
                raise DomainError(f"multi-index uses dimension {j} > {s}")
            out[j - 1] = k
        return tuple(out)

    @property
    def max_dim(self):
        return self.entries[-1][0] if self.entries else 0

    @property
    def degree(self):
        return sum(k for _, k in self.entries)

    def incremented(self, j):
        d = dict(self.entries)
        d[j] = d.get(j, 0) + 1
        return MultiIndex.from_dict(d)

    def sort_key(self):
        # colexicographic: dense vectors compared from the last coordinate backwards
        return tuple(reversed(self.entries))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return "MultiIndex({" + ", ".join(f"{j}: {k}" for j, k in self.entries) + "})"
