import numpy as np
import pytest

from reckern import BandwidthSchedule, DivergenceError, RunningBandwidthSums


def sched(c=1.0, nu=0.25, dim=1, ell=1.0):
    return BandwidthSchedule(c=c, nu=nu, dim=dim, ell=ell)


@pytest.mark.parametrize("c,nu,n,expected", [
    (1.0, 0.25, 1, 1.0),
    (1.0, 0.25, 16, 0.5),
    (0.8, 0.2, 32, 0.4),
])
def test_h_closed_form(c, nu, n, expected):
    assert sched(c=c, nu=nu).h(n) == pytest.approx(expected, rel=1e-14)


def test_h_rejects_index_zero():
    with pytest.raises(ValueError):
        sched().h(0)


def test_h_strictly_decreasing():
    s = sched(nu=0.1)
    h = s.h(np.arange(1, 5001))
    assert np.all(np.diff(h) < 0)


def test_constructor_validation():
    with pytest.raises(ValueError):
        BandwidthSchedule(c=0.0, nu=0.25, dim=1, ell=0.5)
    with pytest.raises(ValueError):
        BandwidthSchedule(c=1.0, nu=1.0, dim=1, ell=0.5)
    with pytest.raises(ValueError):
        BandwidthSchedule(c=1.0, nu=0.25, dim=1, ell=1.5)


@pytest.mark.parametrize("n", [1, 7, 100, 12345])
def test_b_nr_at_r_zero_is_exactly_one(n):
    assert sched().b_nr(n, 0.0) == 1.0


def test_b_nr_approaches_limits():
    # direct-summation averages against their closed-form limits
    assert sched(nu=0.25).b_nr(10**6, 2.0) == pytest.approx(2.0, rel=5e-3)
    assert sched(nu=0.2).b_nr(10**6, -1.0) == pytest.approx(1.0 / 1.2, rel=5e-3)


def test_beta_closed_form():
    assert sched().beta(0.0) == 1.0
    assert sched(nu=0.25).beta(2.0) == pytest.approx(2.0, rel=1e-14)
    assert sched(nu=0.25).beta(-1.0) == pytest.approx(0.8, rel=1e-14)


def test_beta_matches_riemann_integral_oracle():
    # the limit is the integral of t^(-nu*r) over (0, 1]
    nu, r = 0.25, 2.0
    t = (np.arange(1, 2_000_001) - 0.5) / 2_000_000
    midpoint = np.mean(t ** (-nu * r))
    assert sched(nu=nu).beta(r) == pytest.approx(midpoint, rel=1e-4)


def test_beta_matches_summation_oracle_negative_r():
    assert sched(nu=0.25).beta(-1.0) == pytest.approx(
        sched(nu=0.25).b_nr(10**6, -1.0), rel=1e-3)


def test_beta_divergence():
    with pytest.raises(DivergenceError):
        sched(nu=0.25).beta(4.0)
    with pytest.raises(DivergenceError):
        sched(nu=0.5).beta(2.0)


@pytest.mark.parametrize("dim", [1, 2])
@pytest.mark.parametrize("nu", [0.2, 0.25])
def test_cesaro_convergence_rate(dim, nu):
    # |B_{n,r} - beta_r| within max(0.02, 5 n^-(1-nu r)) at n = 1e5
    n = 10**5
    s = BandwidthSchedule(c=1.0, nu=nu, dim=dim, ell=0.5)
    for r in (-dim, 0.0, 1.0, float(dim), float(dim + 2)):
        if nu * r >= 1.0:
            continue
        bound = max(0.02, 5.0 * n ** (-min(1.0, 1.0 - nu * r)))
        assert abs(s.b_nr(n, r) - s.beta(r)) <= bound, (r, nu, dim)


def test_derived_exponents():
    s = BandwidthSchedule(c=1.0, nu=0.25, dim=2, ell=0.25)
    assert s.r_den == pytest.approx(1.5)
    assert s.r_var == pytest.approx(1.0)
    assert s.r_bias == pytest.approx(3.5)


class TestValidation:
    def test_corollary_regime_flagged(self):
        rep = BandwidthSchedule(c=1.0, nu=0.22, dim=1, ell=1.0).validate()
        assert rep.passed
        assert any("bias-cancellation" in n for n in rep.notes)

    def test_fast_decay_fails(self):
        rep = BandwidthSchedule(c=1.0, nu=0.5, dim=1, ell=1.0).validate()
        assert not rep.passed
        assert any("d+2" in name for name in rep.failed_names())

    def test_d3_slow_decay_passes_without_corollary_flag(self):
        rep = BandwidthSchedule(c=1.0, nu=0.1, dim=3, ell=1.0).validate()
        assert rep.passed
        assert not any("bias-cancellation" in n for n in rep.notes)

    def test_constant_bandwidth_fails_first_clause(self):
        rep = BandwidthSchedule(c=1.0, nu=0.0, dim=1, ell=1.0).validate()
        assert not rep.passed


class TestRunningSums:
    def test_matches_direct_recomputation(self):
        s = BandwidthSchedule(c=0.7, nu=0.25, dim=2, ell=0.25)
        sums = RunningBandwidthSums(s, track=(2.0, -1.0))
        for _ in range(500):
            sums.update(1)
        i = np.arange(1, 501, dtype=float)
        h = s.h(i)
        direct = float(np.sum(h ** s.r_den))
        assert sums.s_den == pytest.approx(direct, rel=1e-12)
        assert sums.s_r[2.0] == pytest.approx(float(np.sum(h ** 2)), rel=1e-12)
        assert sums.b_nr(2.0) == pytest.approx(s.b_nr(500, 2.0), rel=1e-12)

    def test_chunked_update_equivalent(self):
        s = BandwidthSchedule(c=0.7, nu=0.3, dim=1, ell=0.0)
        a = RunningBandwidthSums(s)
        b = RunningBandwidthSums(s)
        for _ in range(300):
            a.update(1)
        b.update(300)
        assert a.n == b.n
        assert a.s_den == pytest.approx(b.s_den, rel=1e-13)

    def test_strictly_increasing(self):
        s = BandwidthSchedule(c=1.0, nu=0.25, dim=1, ell=1.0)
        sums = RunningBandwidthSums(s)
        prev = 0.0
        for _ in range(50):
            sums.update(1)
            assert sums.s_den > prev
            prev = sums.s_den
