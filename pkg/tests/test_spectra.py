import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermite_ibc import oracles
from hermite_ibc.errors import DivergenceError, DomainError, UnsupportedCombination
from hermite_ibc.hermite_core import zeta
from hermite_ibc.spectra import (
    FAILS, HOLDS, SUFFICIENT, UNKNOWN, UNSUPPORTED, SpaceSpec, best_zeta_bound, complexity_report,
    count_large_eigenvalues, eigenvalue_stream, minimal_errors, nth_minimal_error, power_sum,
    qpt_criterion_value, spt_criterion_sum, trace, trace_constant, tractability_report,
    zeta_bound_on_count,
)
from hermite_ibc.weights import Constant, Explicit, Family, FourierWeightSpec, Geometric, PolyDecay


def space(family, alpha, w, s, omega=None):
    return SpaceSpec(FourierWeightSpec(family, alpha, w, omega), s)


A2 = space("anova", 2, Constant(0.5), 1)

families = st.sampled_from(["anova", "korobov", "sobolev", "exponential"])
weight_seqs = st.one_of(
    st.builds(PolyDecay, st.floats(0.5, 3)),
    st.builds(Geometric, st.floats(0.2, 0.9)),
    st.builds(Constant, st.floats(0.1, 1.0)),
)


@st.composite
def spaces(draw, s_max=3):
    fam = draw(families)
    alpha = draw(st.sampled_from([1.5, 2.0, 3.0])) if fam == "korobov" else draw(st.integers(1, 3))
    omega = draw(st.floats(0.2, 0.8)) if fam == "exponential" else None
    return space(fam, alpha, draw(weight_seqs), draw(st.integers(1, s_max)), omega)


# ---------------------------------------------------------------------------
# counting

def test_count_examples():
    assert count_large_eigenvalues(A2, 0.1) == 8
    assert count_large_eigenvalues(A2, 0.8) == 1
    assert count_large_eigenvalues(space("anova", 2, Constant(1.0), 10), 0.9) >= 1024


def test_count_domain():
    with pytest.raises(DomainError):
        count_large_eigenvalues(A2, 1.0)
    with pytest.raises(DomainError):
        count_large_eigenvalues(A2, 0.0)


def test_count_tolerance_widens():
    # r(2) = 0.25 equals eps^2 for eps = 0.5; strict ">" excludes it
    assert count_large_eigenvalues(A2, 0.5) == 2
    assert count_large_eigenvalues(A2, 0.5, tol=1e-12) == 3


def test_count_is_exact_python_integer():
    big = space("anova", 2, Constant(1.0), 20)
    n = count_large_eigenvalues(big, 0.99)
    assert type(n) is int and n == 2 ** 20


def test_infinite_dimension_via_explicit_tail():
    # dimensions past the prefix have gamma = tail <= eps^2 and contribute nothing
    sp = space("anova", 2, Explicit((0.9, 0.5), 0.001), 10_000)
    assert count_large_eigenvalues(sp, 0.2) == count_large_eigenvalues(
        space("anova", 2, Explicit((0.9, 0.5), 0.001), 2), 0.2)


@given(spaces(), st.floats(0.05, 0.95))
@settings(max_examples=80)
def test_count_matches_naive_grid(sp, eps):
    assert count_large_eigenvalues(sp, eps) == oracles.naive_counts(sp, [eps])[0]


@given(spaces(), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_count_monotone_in_eps(sp, e1, e2):
    lo, hi = sorted((e1, e2))
    assert count_large_eigenvalues(sp, lo) >= count_large_eigenvalues(sp, hi)


@given(spaces(), st.floats(0.1, 0.95))
@settings(max_examples=40)
def test_count_agrees_with_stream(sp, eps):
    n = count_large_eigenvalues(sp, eps)
    if n > 10_000:
        return
    vals = [v for v, _ in itertools.islice(eigenvalue_stream(sp), n + 1)]
    assert sum(v > eps * eps for v in vals) == n
    assert not vals[n] > eps * eps


@given(st.integers(1, 3), st.sampled_from([1, 2, 3]), st.floats(0.1, 1.0), st.floats(0.1, 0.9))
@settings(max_examples=40)
def test_dimension_recurrence(s, alpha, g, eps):
    base = space("anova", alpha, Constant(g), s)
    nxt = space("anova", alpha, Constant(g), s + 1)
    rhs = count_large_eigenvalues(base, eps)
    k = 1
    while True:
        e = eps * g ** -0.5 * (k / alpha) ** (alpha / 2)
        if e >= 1:
            break
        rhs += count_large_eigenvalues(base, e)
        k += 1
    assert count_large_eigenvalues(nxt, eps) <= rhs


# ---------------------------------------------------------------------------
# zeta bound

def test_zeta_bound_example():
    sp = space("anova", 2, Constant(1.0), 1)
    b = zeta_bound_on_count(sp, 0.1, 1.0)
    assert b == pytest.approx(100 * (1 + 4 * math.pi ** 2 / 6), rel=1e-12)
    assert count_large_eigenvalues(sp, 0.1) == 11
    sp3 = space("anova", 2, Explicit((0.9, 0.5, 0.1), 0.0), 3)
    assert count_large_eigenvalues(sp3, 0.05) <= zeta_bound_on_count(sp3, 0.05, 1.2)


def test_zeta_bound_errors_and_overflow():
    with pytest.raises(DomainError):
        zeta_bound_on_count(A2, 0.1, 0.5)
    with pytest.raises(UnsupportedCombination):
        zeta_bound_on_count(space("korobov", 2, Constant(1.0), 1), 0.1, 1.0)
    assert zeta_bound_on_count(space("anova", 2, Constant(1.0), 2000), 0.1, 1.0) == math.inf


@given(st.integers(1, 3), st.integers(1, 4), weight_seqs, st.floats(0.05, 0.9), st.floats(0.01, 3))
def test_zeta_bound_dominates_count(alpha, s, w, eps, dq):
    sp = space("anova", alpha, w, s)
    q = 1 / alpha + dq
    assert count_large_eigenvalues(sp, eps) <= zeta_bound_on_count(sp, eps, q)


def test_best_zeta_bound_not_worse_than_fixed_q():
    sp = space("anova", 2, PolyDecay(2), 5)
    best, q = best_zeta_bound(sp, 0.05)
    assert q > 0.5 and best <= zeta_bound_on_count(sp, 0.05, 1.0) * (1 + 1e-9)
    rep = complexity_report(sp, 0.05)
    assert rep.count <= rep.zeta_bound and rep.q_used == pytest.approx(q)
    assert complexity_report(space("sobolev", 2, PolyDecay(2), 2), 0.1).zeta_bound is None


# ---------------------------------------------------------------------------
# stream and minimal errors

def test_stream_examples():
    sp = space("anova", 2, Constant(0.5), 2)
    head = list(itertools.islice(eigenvalue_stream(sp), 4))
    assert head[0][0] == 1.0 and len(head[0][1]) == 0
    assert [v for v, _ in head] == [1.0, 0.5, 0.5, 0.25]
    assert nth_minimal_error(sp, 0) == 1.0
    assert nth_minimal_error(sp, 1) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert nth_minimal_error(sp, 3) == 0.5


def test_stream_ties_colexicographic():
    sp = space("anova", 2, Constant(0.5), 3)
    ones = [k.dense(3) for v, k in itertools.islice(eigenvalue_stream(sp), 4) if v == 0.5]
    assert ones == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


@given(spaces(), st.integers(20, 300))
@settings(max_examples=30)
def test_stream_order_is_total_and_deterministic(sp, n):
    items = list(itertools.islice(eigenvalue_stream(sp), n))
    keys = [(-v, k.sort_key()) for v, k in items]
    assert keys == sorted(keys)


@given(spaces(), st.integers(1, 400))
@settings(max_examples=40)
def test_stream_matches_brute_force(sp, n):
    got = minimal_errors(sp, n - 1) ** 2
    ref = oracles.brute_eigenvalues(sp, n)
    np.testing.assert_allclose(got, ref, rtol=0, atol=1e-15)
    assert np.all(np.diff(got) <= 0)


@given(spaces(), st.integers(50, 400))
@settings(max_examples=20)
def test_stream_indices_distinct_and_consistent(sp, n):
    from hermite_ibc.weights import fourier_weight
    seen = set()
    for v, k in itertools.islice(eigenvalue_stream(sp), n):
        assert k not in seen and k.max_dim <= sp.s
        assert v == fourier_weight(sp.fw, k)
        seen.add(k)


# ---------------------------------------------------------------------------
# trace and criteria

def _trace_closed_form(alpha):
    return sum(1 / math.factorial(k) for k in range(1, alpha)) + 1 / ((alpha - 1) * math.factorial(alpha - 1))


@pytest.mark.parametrize("alpha", range(2, 9))
def test_trace_constant(alpha):
    t = trace_constant(alpha)
    assert t == pytest.approx(_trace_closed_form(alpha), abs=1e-13)
    assert zeta(alpha) <= t <= math.e - 2 + zeta(alpha)


def test_trace_examples():
    assert trace(space("anova", 2, Constant(1.0), 1)) == pytest.approx(3.0, abs=1e-12)
    assert trace(space("anova", 2, Explicit((1.0, 0.5), 0.0), 2)) == pytest.approx(6.0, abs=1e-12)
    with pytest.raises(DivergenceError):
        trace(space("anova", 1, Constant(1.0), 3))
    with pytest.raises(UnsupportedCombination):
        trace(space("korobov", 2, Constant(1.0), 1))


def test_criterion_sums():
    sp = space("anova", 2, Constant(1.0), 1)
    assert spt_criterion_sum(sp, 1.0) == pytest.approx(3.0, abs=1e-12)
    assert spt_criterion_sum(sp, 2.0) == pytest.approx(2 + (2 * zeta(2) - 3), abs=1e-12)
    with pytest.raises(DivergenceError):
        spt_criterion_sum(sp, 0.5)
    assert qpt_criterion_value(sp, 1.0) == pytest.approx(3.0, abs=1e-12)
    assert qpt_criterion_value(space("anova", 2, Constant(1.0), 4), 1.0) >= 1.0


@pytest.mark.parametrize("family, alpha", [("anova", 1), ("anova", 3), ("korobov", 1.5), ("korobov", 2.5),
                                           ("sobolev", 1), ("sobolev", 2), ("exponential", 1)])
@pytest.mark.parametrize("tau", [1.0, 1.7])
def test_power_sum_against_long_direct_sum(family, alpha, tau):
    if family != "exponential" and alpha * tau <= 1.0:
        return
    spec = FourierWeightSpec(family, alpha, Constant(0.7), 0.6 if family == "exponential" else None)
    n = 2_000_000
    k = np.arange(1, n + 1, dtype=float)
    w = np.array([oracles.weight_reference(family, alpha, spec.omega, 0.7, int(i)) for i in range(1, 200)])
    tail_start = 200
    if family == "anova":
        kk = k[tail_start - 1:]
        prod = np.ones_like(kk)
        for i in range(int(alpha)):
            prod *= kk - i
        tail = 0.7 / prod
    elif family == "korobov":
        tail = 0.7 / k[tail_start - 1:] ** alpha
    elif family == "sobolev":
        kk = k[tail_start - 1:]
        beta, tot = np.ones_like(kk), np.zeros_like(kk)
        for t in range(1, int(alpha) + 1):
            beta *= kk - t + 1
            tot += beta
        tail = 1 / (1 + tot / 0.7)
    else:
        tail = 0.7 * 0.6 ** k[tail_start - 1:]
    direct = math.fsum(w ** tau) + math.fsum(tail ** tau)
    # remainder beyond n: integral bound with the leading power law
    p = alpha * tau
    rem = 0.0 if family == "exponential" else (0.7 * float(alpha) ** alpha) ** tau * n ** (1 - p) / (p - 1)
    got = power_sum(spec, 0.7, tau)
    assert direct <= got * (1 + 1e-12) and got <= direct + rem + 1e-12


# ---------------------------------------------------------------------------
# tractability

def _closure_ok(rep):
    v = {e.notion: e.verdict for e in rep.entries if e.sigma is None}
    pos = (HOLDS, SUFFICIENT)
    chains = [("SPT", "PT"), ("PT", "QPT"), ("QPT", "UWT"), ("UWT", "WT")]
    return all(not (v[a] in pos and v[b] == FAILS) for a, b in chains)


def test_report_examples():
    rep = tractability_report(PolyDecay(2), 2, "anova")
    assert rep.verdict("SPT") == HOLDS and rep.entry("SPT").exponent == pytest.approx(1.0)
    rep = tractability_report(Constant(1.0), 3, "anova")
    assert rep.verdict("WT") == FAILS and "Theorem 2 item 3" in rep.entry("WT").basis
    rep = tractability_report(Constant(0.5), 4, "anova")
    assert rep.verdict("QPT") == HOLDS and rep.entry("QPT").exponent == pytest.approx(2 / math.log(2))
    assert rep.verdict("SPT") == FAILS and rep.verdict("PT") == FAILS
    rep = tractability_report(PolyDecay(1), 2, "anova", "std")
    assert rep.verdict("PT") == SUFFICIENT
    rep = tractability_report(PolyDecay(0.5), 2, "anova", "std")
    assert rep.verdict("PT") == UNKNOWN


def test_report_unsupported():
    rep = tractability_report(PolyDecay(2), 1, "anova", "std")
    assert not rep.supported and rep.verdict("PT") == UNSUPPORTED
    assert not tractability_report(PolyDecay(2), 2, "exponential").supported
    assert tractability_report(PolyDecay(2), 1, "anova").supported
    with pytest.raises(DomainError):
        tractability_report(PolyDecay(2), 2, "anova", problem="nonsense")


def test_nonneg_rules_fail_with_weights_bounded_below():
    rep = tractability_report(Constant(0.3), 2, "korobov", problem="integration-nonneg-rules")
    assert rep.verdict("QPT") == FAILS and rep.verdict("WT") == FAILS


def test_integration_spt_exponent_is_upper_bound():
    rep = tractability_report(PolyDecay(3), 2, "anova", problem="integration")
    assert rep.verdict("SPT") == SUFFICIENT and rep.entry("SPT").exponent_kind == "upper-bound"


@given(weight_seqs, st.integers(1, 5), st.sampled_from(list(Family)),
       st.sampled_from(["all", "std"]),
       st.sampled_from(["approximation", "integration", "anchored-integration", "integration-nonneg-rules"]))
def test_reports_are_logically_closed(w, alpha, family, cls, problem):
    rep = tractability_report(w, alpha, family, cls, problem)
    assert _closure_ok(rep)
    if rep.verdict("SPT") == HOLDS:
        assert rep.verdict("PT") == HOLDS
    if rep.verdict("QPT") == HOLDS:
        assert rep.verdict("UWT") == HOLDS and rep.verdict("WT") == HOLDS
