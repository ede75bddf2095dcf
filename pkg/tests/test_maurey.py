import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subrip.linalg import ApproxSpec, make_unitary
from subrip.maurey import (PHASES, NetParams, NoGoodSample, PhaseDistribution,
                           build_family_for, build_improved_family, build_simple_family,
                           coordinate_band_failures, final_comparison, find_good_g, g_histograms,
                           normalized_apply, phase_decompose, sample_g, verify_decomposition)
from subrip.sampling import full_sample, make_rng, sample_rows

S2 = math.sqrt(2)


def unit_l1(v):
    v = np.asarray(v, dtype=complex)
    return v / np.abs(v).sum()


def test_params_derived_values():
    p = NetParams(1 / 8, 1 / 8)
    assert (p.t, p.r) == (3, 6)
    assert p.gamma == pytest.approx(1 / 48)
    assert list(p.levels) == [7, 8, 9]
    assert p.sample_size(1) == math.ceil(8 * 2 * math.log2(48))
    q = NetParams(1 / 8, 1 / 8, "improved")
    assert q.gamma == pytest.approx((1 / 8) / (60 * 9))
    assert list(q.levels) == list(range(1, 10))
    assert q.default_slack() == ApproxSpec(10 / 8, 9 / 8 + 60 * 9 * q.gamma)
    assert p.default_slack() == ApproxSpec(3 / 8, 9 / 8 + 6 * p.gamma)


@pytest.mark.parametrize("eps, eta, variant", [(0, 0.1, "simple"), (0.6, 0.1, "simple"),
                                               (0.1, 0.2, "improved"), (0.1, 0.1, "bogus")])
def test_params_rejects(eps, eta, variant):
    with pytest.raises(ValueError):
        NetParams(eps, eta, variant)


def test_phase_decompose_basis_vector():
    x = np.zeros(4, dtype=complex)
    x[0] = 1
    w = phase_decompose(x).weights
    # independent evaluation of both invariants
    slack = (1 - 1 / S2) / 2
    assert w[0, 0] == pytest.approx(1 / S2 + slack, abs=1e-15)
    assert w[0, 2] == pytest.approx(slack, abs=1e-15)
    assert w[0, 1] == 0 and w[0, 3] == 0
    assert S2 * (w[0, 0] - w[0, 2]) == pytest.approx(1.0, abs=1e-15)
    assert w[0].sum() == pytest.approx(1.0, abs=1e-15)
    assert np.all(w[1:] == 0)


def test_phase_decompose_imaginary_entry():
    x = np.array([0, 1j, 0], dtype=complex)
    w = phase_decompose(x).weights
    assert w[1, 1] == pytest.approx(1 / S2)
    assert w[1, 3] == 0
    assert w[1, 0] == pytest.approx(w[1, 2])
    assert w[1, 0] > 0


def test_phase_decompose_rejects_unnormalized():
    with pytest.raises(ValueError):
        phase_decompose(np.array([0.5, 0.4]))


def _check_phase_invariants(x):
    d = phase_decompose(x)
    w = d.weights
    assert np.all(w >= 0)
    assert np.abs(w.sum(axis=1) - np.abs(x)).max() <= 1e-12
    assert np.abs(d.signed_sum() - x).max() <= 1e-12
    assert abs(d.total_mass() - 1) <= 1e-12


def test_phase_invariants_on_many_vectors():
    rng = make_rng(2025)
    for trial in range(10_000):
        n = int(rng.integers(1, 20))
        kind = trial % 4
        if kind == 0:
            v = rng.normal(size=n) + 0j
        elif kind == 1:
            v = 1j * rng.normal(size=n)
        elif kind == 2:
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
        else:
            v = np.zeros(n, dtype=complex)
            v[rng.integers(n)] = np.exp(2j * np.pi * rng.random())
        if np.abs(v).sum() == 0:
            continue
        _check_phase_invariants(unit_l1(v))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=12))
def test_phase_invariants_property(vals):
    v = np.array(vals, dtype=complex)
    if np.abs(v).sum() < 1e-300:
        return
    _check_phase_invariants(unit_l1(v))


def degenerate(n, l, s=0):
    w = np.zeros((n, 4))
    w[l, s] = 1.0
    return PhaseDistribution(w)


def test_sample_g_degenerate_distribution():
    m = make_unitary("dft", 8)
    p = NetParams(0.25, 0.25)
    g = sample_g(m, degenerate(8, 3), 2, p, make_rng(0))
    assert np.allclose(g, S2 * m.column(3) / m.flatness, atol=1e-13)
    g2 = sample_g(m, degenerate(8, 3, 1), 5, p, make_rng(1))
    assert np.allclose(g2, 1j * S2 * m.column(3) / m.flatness, atol=1e-13)


def test_sample_g_sup_norm_bound():
    m = make_unitary("dft", 64)
    p = NetParams(0.25, 0.25)
    rng = make_rng(3)
    for _ in range(50):
        x = unit_l1(rng.normal(size=64) + 1j * rng.normal(size=64))
        g = sample_g(m, phase_decompose(x), 3, p, rng)
        assert np.abs(g).max() <= S2 * (1 + 1e-12)


def test_sample_g_unbiased():
    n, draws = 64, 1000
    m = make_unitary("hadamard", n)
    p = NetParams(0.5, 0.5, c_f=0.05)  # small |F| so the test has teeth
    rng = make_rng(4)
    x = unit_l1(rng.normal(size=n) + 1j * rng.normal(size=n))
    d = phase_decompose(x)
    gs = np.array([sample_g(m, d, 1, p, rng) for _ in range(draws)])
    target = normalized_apply(m, x)
    se_re = gs.real.std(axis=0, ddof=1) / math.sqrt(draws)
    se_im = gs.imag.std(axis=0, ddof=1) / math.sqrt(draws)
    ok = (np.abs(gs.real.mean(0) - target.real) <= 5 * se_re) & \
         (np.abs(gs.imag.mean(0) - target.imag) <= 5 * se_im)
    assert ok.all()


def test_band_check_degenerate_basis_vector():
    # x = e_l with all mass on (l, 0): g = sqrt(2) M^(l), so |g_j| = sqrt(2) |Mx_j| = sqrt(2)
    # in normalized units; the band 2^(-i/2) covers the gap sqrt(2) - 1 only for i <= 2
    n, l = 8, 5
    m = make_unitary("dft", n)
    x = np.zeros(n, dtype=complex)
    x[l] = 1
    p = NetParams(0.25, 0.25)
    g = sample_g(m, degenerate(n, l), 1, p, make_rng(0))
    mx = normalized_apply(m, x)
    for i in range(1, 7):
        fails = coordinate_band_failures(mx, g, i)
        oracle = [not ((abs(g[j]) - 2 ** (-i / 2)) <= abs(mx[j]) <= abs(g[j]) + 2 ** (-i / 2))
                  for j in range(n)]
        assert fails.tolist() == oracle
        assert fails.all() == (2 ** (-i / 2) < S2 - 1)
        assert not fails.any() == (i <= 2)


def test_find_good_g_reports_failure():
    # a degenerate x at a fine level can never satisfy the band
    n = 8
    m = make_unitary("dft", n)
    x = np.zeros(n, dtype=complex)
    x[2] = 1
    p = NetParams(0.25, 0.25)
    with pytest.raises(NoGoodSample) as err:
        find_good_g(m, x, full_sample(n), 4, p, make_rng(0), max_attempts=3,
                    dist=degenerate(n, 2))
    assert err.value.attempts == 3


def test_find_good_g_full_sample_counts_coincide():
    m = make_unitary("dft", 64)
    rng = make_rng(5)
    x = unit_l1(rng.normal(size=64))
    p = NetParams(0.25, 0.25)
    res = find_good_g(m, x, full_sample(64), 4, p, rng)
    assert res.bad_n == res.bad_q
    assert res.bad_n <= p.gamma * 64


def test_find_good_g_violation_fraction_at_finest_level():
    n = 256
    m = make_unitary("dft", n)
    p = NetParams(1 / 8, 1 / 8)
    level = p.t + p.r
    fracs = []
    for s in range(100):
        rng = make_rng(s, 42)
        x = unit_l1(rng.normal(size=n) + 1j * rng.normal(size=n))
        g = sample_g(m, phase_decompose(x), level, p, rng)
        fracs.append(coordinate_band_failures(normalized_apply(m, x), g, level).mean())
    assert np.mean(fracs) <= p.gamma


def random_levels(rng, count, n, scale):
    # sampled g never exceeds sqrt(2) in sup norm
    return [scale * S2 * rng.random(n) * np.exp(2j * np.pi * rng.random(n))
            for _ in range(count)]


def test_simple_family_zero_levels():
    p = NetParams(0.25, 0.25)
    fam = build_simple_family([np.zeros(16)] * p.t, p)
    assert np.all(fam.level_of == 0)
    assert np.all(fam.h == 0)


def test_simple_family_level_one_membership():
    p = NetParams(0.25, 0.25)
    levels = [np.zeros(16, dtype=complex) for _ in range(p.t)]
    levels[0][3] = 2 * 2 ** -0.5
    levels[1][3] = 5.0  # would also qualify at level 2, but level 1 is smallest
    fam = build_simple_family(levels, p)
    assert fam.level_of[3] == 1
    assert fam.level_set(1).tolist() == [3]
    assert all(fam.level_set(i).size == 0 for i in range(2, p.t + 1))
    assert fam.h[0, 3] == pytest.approx(2.0)


def check_simple_structure(fam):
    p = fam.params
    sets = [set(fam.level_set(i)) for i in range(1, p.t + 1)]
    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            assert not sets[a] & sets[b]
    for i in range(1, p.t + 1):
        h = fam.h[i - 1]
        assert np.all(h >= 0) and np.all(h <= 9 * 2.0 ** -i)
        assert set(np.flatnonzero(h)) <= sets[i - 1]
        g = fam.g_levels[i + p.r]
        for j in sets[i - 1]:
            assert abs(g[j]) >= 2 * 2 ** (-i / 2)
            if i >= 2:
                assert abs(fam.g_levels[i - 1 + p.r][j]) < 2 * 2 ** (-(i - 1) / 2)


def check_improved_structure(fam):
    p = fam.params
    t, r = p.t, p.r
    for i in range(1, t + 1):
        c = set(fam.level_set(i))
        h = fam.h[i - 1]
        d = fam.delta[i - 1]
        # telescoping: exact equality in floating point
        assert np.array_equal(np.diff(h, axis=0, prepend=0.0).sum(axis=0), h[-1])
        assert set(np.flatnonzero(d.any(axis=0))) <= c
        assert set(np.flatnonzero(h.any(axis=0))) <= c
        for mo in range(r + 1):
            m = i + mo
            assert np.all(np.abs(d[mo]) <= 30 * 2.0 ** (-(i + m) / 2))
        for j in c:
            assert abs(fam.g_levels[i][j]) >= 2 * 2 ** (-i / 2)
            if i >= 2:
                assert abs(fam.g_levels[i - 1][j]) < 2 * 2 ** (-(i - 1) / 2)


def test_random_families_structure_n16():
    rng = make_rng(6)
    ps = NetParams(0.25, 0.125)
    pi = NetParams(0.25, 0.125, "improved")
    for _ in range(300):
        scale = rng.uniform(0.05, 1.0)
        check_simple_structure(build_simple_family(random_levels(rng, ps.t, 16, scale), ps))
        check_improved_structure(
            build_improved_family(random_levels(rng, pi.t + pi.r, 16, scale), pi))


def test_improved_family_zero_levels():
    p = NetParams(0.25, 0.25, "improved")
    fam = build_improved_family([np.zeros(16)] * (p.t + p.r), p)
    assert np.all(fam.h == 0) and np.all(fam.delta == 0)


def test_improved_family_clips_large_differences():
    p = NetParams(0.5, 0.5, "improved")  # t = 1, r = 2
    levels = [np.zeros(4, dtype=complex) for _ in range(p.t + p.r)]
    levels[0][0] = 2.0  # joins C_1
    levels[1][0] = 9.0  # jump 81 - 4 exceeds 30 * 2^-1.5
    levels[2][0] = 9.0
    fam = build_improved_family(levels, p)
    assert fam.delta[0, 0, 0] == pytest.approx(4.0)
    assert fam.delta[0, 1, 0] == 0.0
    assert fam.delta[0, 2, 0] == 0.0
    assert fam.h[0, 2, 0] == pytest.approx(81.0)


def test_family_level_count_checked():
    p = NetParams(0.25, 0.25)
    with pytest.raises(ValueError):
        build_simple_family([np.zeros(4)] * (p.t + 1), p)
    with pytest.raises(ValueError):
        build_improved_family([np.zeros(4)] * p.t, NetParams(0.25, 0.25, "improved"))


def test_verify_basis_vector_mean():
    n = 64
    m = make_unitary("dft", n)
    x = np.zeros(n, dtype=complex)
    x[7] = 1
    assert np.mean(np.abs(m.apply(x)) ** 2) == pytest.approx(1 / n, rel=1e-12)
    p = NetParams(0.25, 0.25)
    fam, _ = build_family_for(m, x, sample_rows(n, 32, 1), p, make_rng(1))
    rep = verify_decomposition(m, x, sample_rows(n, 32, 1), fam)
    assert rep["full_average"]["lhs"] == pytest.approx(1.0, rel=1e-12)  # normalized units


@pytest.mark.parametrize("variant", ["simple", "improved"])
def test_verify_full_sample_items_coincide(variant):
    n = 64
    m = make_unitary("dft", n)
    rng = make_rng(8)
    x = unit_l1(rng.normal(size=n) + 1j * rng.normal(size=n))
    p = NetParams(0.25, 0.25, variant)
    fam, _ = build_family_for(m, x, full_sample(n), p, rng)
    rep = verify_decomposition(m, x, full_sample(n), fam)
    assert rep["sample_average"]["lhs"] == pytest.approx(rep["full_average"]["lhs"], rel=1e-12)
    assert rep["sample_average"]["rhs"] == pytest.approx(rep["full_average"]["rhs"], rel=1e-12)
    fc = final_comparison(m, x, full_sample(n), 0.25, 0.25)
    assert fc["pass"] and fc["abs_gap"] <= 1e-15


@pytest.mark.parametrize("variant", ["simple", "improved"])
def test_verify_decomposition_monte_carlo(variant):
    n = 256
    m = make_unitary("dft", n)
    p = NetParams(1 / 8, 1 / 8, variant)
    passes = 0
    for s in range(100):
        rng = make_rng(s, 99)
        x = np.zeros(n, dtype=complex)
        sup = rng.choice(n, 4, replace=False)
        x[sup] = rng.normal(size=4) + 1j * rng.normal(size=4)
        x = unit_l1(x)
        q = sample_rows(n, 1024, s)
        fam, _ = build_family_for(m, x, q, p, rng)
        passes += verify_decomposition(m, x, q, fam)["pass"]
    assert passes >= 90


def test_report_contents_improved():
    n = 128
    m = make_unitary("dft", n)
    rng = make_rng(10)
    x = unit_l1(rng.normal(size=n))
    p = NetParams(0.25, 0.25, "improved")
    q = sample_rows(n, 300, 2)
    fam, found = build_family_for(m, x, q, p, rng)
    assert [f.level for f in found] == list(p.levels)
    rep = verify_decomposition(m, x, q, fam)
    for key in ("sample_average", "full_average", "net_transfer", "mass_lower_bound"):
        assert key in rep
    assert len(rep["level_set_sizes"]) == p.t
    d = fam.to_dict()
    assert set(d["g_levels"]) == {str(i) for i in p.levels}
    custom = verify_decomposition(m, x, q, fam, ApproxSpec(0.0, 0.0))
    assert custom["sample_average"]["eps"] == 0.0


def test_g_histograms_rows():
    n = 64
    m = make_unitary("dft", n)
    rng = make_rng(11)
    x = unit_l1(rng.normal(size=n))
    p = NetParams(0.25, 0.25)
    fam, _ = build_family_for(m, x, sample_rows(n, 50, 0), p, rng)
    rows = g_histograms(fam, bins=5)
    assert len(rows) == 5 * p.t
    for lvl in p.levels:
        assert sum(r["count"] for r in rows if r["level"] == lvl) == n


def test_phases_constant():
    assert np.allclose(PHASES, [1j**s for s in range(4)])
