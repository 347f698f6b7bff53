"""Brute-force reference computations used to check the fast paths.

These enumerate full product grids with weights written straight from their
closed forms, sharing no code with the enumeration in ``spectra``.
"""
import math

import numpy as np

from .weights import Family


def weight_reference(family, alpha, omega, gamma, k):
    """1-D Fourier weight from its closed form, with exact integer factorials."""
    family = Family(family)
    if k == 0:
        return 1.0
    if family is Family.GAUSSIAN_ANOVA:
        if k < alpha:
            return gamma / math.factorial(k)
        return gamma / math.perm(k, alpha)
    if family is Family.KOROBOV:
        return gamma / k ** alpha
    if family is Family.SOBOLEV:
        return 1.0 / (1.0 + sum(math.perm(k, t) for t in range(1, alpha + 1)) / gamma)
    return gamma * omega ** k


def _falling(k, t):
    """Exact k (k-1) ... (k-t+1) for an integer array k (zero where k < t)."""
    dtype = np.int64 if int(k.max(initial=0)) ** t < 2 ** 62 else object
    out = np.ones(len(k), dtype=dtype)
    for i in range(t):
        out = out * np.maximum(k - i, 0).astype(dtype)
    return out


def weight_column(family, alpha, omega, gamma, kmax):
    """Weights for k = 0..kmax from exact integer factorial ratios."""
    family = Family(family)
    k = np.arange(kmax + 1)
    with np.errstate(divide="ignore"):
        if family is Family.GAUSSIAN_ANOVA:
            fact = np.array([math.factorial(int(v)) for v in k[:alpha]], dtype=float)
            col = np.concatenate([gamma / fact, gamma / _falling(k[alpha:], alpha).astype(float)])
        elif family is Family.KOROBOV:
            col = gamma / k.astype(float) ** alpha
        elif family is Family.SOBOLEV:
            total = sum(_falling(k, t) for t in range(1, int(alpha) + 1))
            col = 1.0 / (1.0 + total.astype(float) / gamma)
        else:
            col = gamma * np.exp(k * math.log(omega))
    col[0] = 1.0
    return col


def degree_bound(family, alpha, omega, gamma, thr):
    """K such that every 1-D weight with k > K is at most ``thr``."""
    family = Family(family)
    if gamma <= thr:
        return 0
    if family is Family.GAUSSIAN_ANOVA:
        return max(int(alpha), math.ceil(alpha * (gamma / thr) ** (1.0 / alpha)))
    if family is Family.KOROBOV:
        return math.ceil((gamma / thr) ** (1.0 / alpha))
    if family is Family.SOBOLEV:
        # the sum of falling factorials exceeds both k and (k - alpha + 1)^alpha
        return min(math.ceil(gamma / thr), int(alpha) - 1 + math.ceil((gamma / thr) ** (1.0 / alpha)))
    return math.ceil(math.log(thr / gamma) / math.log(omega))


def grid_products(space, thr, prune=True):
    """Products prod_j w_j(k_j) over the box that holds every weight above ``thr``.

    With ``prune`` only products above ``thr`` are kept.  Each 1-D column is
    non-increasing and every factor is at most 1, so for a partial product p
    only a prefix of the column can survive; a slightly generous prefix is
    taken and the exact comparison ``p * w > thr`` then decides.  Without
    ``prune`` the whole box is returned.
    """
    fw = space.fw
    out = np.ones(1)
    for j in range(1, space.s + 1):
        g = fw.gamma(j)
        col = weight_column(fw.family, fw.alpha, fw.omega, g, degree_bound(fw.family, fw.alpha, fw.omega, g, thr))
        if not prune:
            out = np.multiply.outer(out, col).ravel()
            continue
        lens = np.searchsorted(-col, -(thr / out) * (1 - 1e-9), side="left")
        lens = np.minimum(lens + 1, len(col))
        starts = np.repeat(np.cumsum(lens) - lens, lens)
        idx = np.arange(int(lens.sum())) - starts
        cand = np.repeat(out, lens) * col[idx]
        out = cand[cand > thr]
    return out


def box_size(space, thr):
    fw = space.fw
    size = 1
    for j in range(1, space.s + 1):
        size *= degree_bound(fw.family, fw.alpha, fw.omega, fw.gamma(j), thr) + 1
    return size


def naive_counts(space, epsilons, prune=True):
    """Counts |{k : R(k) > eps^2}| for several eps by sorting one grid."""
    eps = np.asarray(epsilons, dtype=float)
    prods = np.sort(grid_products(space, float(eps.min()) ** 2, prune))
    return [int(len(prods) - np.searchsorted(prods, e * e, side="right")) for e in eps]


def brute_eigenvalues(space, n):
    """The n largest eigenvalues, found on a grid shrunk until it holds at least n above threshold."""
    thr = 0.5
    while True:
        prods = grid_products(space, thr)
        if len(prods) >= n:
            return np.sort(prods)[::-1][:n]
        thr /= 4.0
