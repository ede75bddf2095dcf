import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import dft_oracle
from subrip.linalg import make_unitary
from subrip.sampling import (PartialOperator, RowSample, apply_partial, full_mean, full_sample,
                             make_rng, sample_rows, sampled_mean)


def test_single_row_ensemble():
    assert sample_rows(1, 3, 99).indices.tolist() == [0, 0, 0]


def test_same_seed_same_multiset():
    a = sample_rows(1024, 500, 7)
    b = sample_rows(1024, 500, 7)
    assert np.array_equal(a.indices, b.indices)
    assert not np.array_equal(a.indices, sample_rows(1024, 500, 8).indices)


def test_q_larger_than_n_keeps_duplicates():
    s = sample_rows(4, 40, 0)
    assert s.q == 40
    assert s.counts().sum() == 40
    assert s.scale**2 * s.q == pytest.approx(4)


def test_empirical_frequencies():
    n, q = 1024, 10_000
    counts = sample_rows(n, q, 2024).counts()
    p = 1 / n
    sd = math.sqrt(q * p * (1 - p))
    assert np.all(np.abs(counts - q * p) <= 5 * sd)


@pytest.mark.parametrize("bad", [[], [-1], [4]])
def test_row_sample_validates_indices(bad):
    with pytest.raises(ValueError):
        RowSample(4, np.array(bad, dtype=np.int64))


def test_row_sample_json_roundtrip():
    s = sample_rows(64, 10, 3)
    t = RowSample.from_json(s.to_json())
    assert np.array_equal(s.indices, t.indices)
    assert (t.n, t.q, t.seed) == (64, 10, 3)
    doc = s.to_dict()
    assert set(doc) == {"N", "q", "indices", "seed"}


def test_row_sample_json_rejects_inconsistent_q():
    with pytest.raises(ValueError):
        RowSample.from_dict({"N": 4, "q": 3, "indices": [0, 1], "seed": None})


def _e(n, i):
    x = np.zeros(n, dtype=complex)
    x[i] = 1
    return x


def test_full_sample_is_isometry(rng):
    for kind in ("dft", "hadamard"):
        a = PartialOperator(make_unitary(kind, 32), full_sample(32))
        x = rng.normal(size=32) + 1j * rng.normal(size=32)
        assert np.linalg.norm(a.apply(x)) == pytest.approx(np.linalg.norm(x), rel=1e-10)


def test_dft4_rows_0_2_on_e0():
    a = PartialOperator(make_unitary("dft", 4), RowSample(4, np.array([0, 2])))
    ax = apply_partial(a, _e(4, 0))
    # sqrt(4/2) * (1/2, 1/2)
    assert np.allclose(ax, [math.sqrt(2) / 2, math.sqrt(2) / 2], atol=1e-15)
    assert np.linalg.norm(ax) ** 2 == pytest.approx(1.0, abs=1e-14)
    assert sampled_mean(a, _e(4, 0)) == pytest.approx(0.25, abs=1e-15)
    assert full_mean(a.base, _e(4, 0)) == pytest.approx(0.25, abs=1e-15)


def test_duplicate_rows_give_equal_outputs(rng):
    a = PartialOperator(make_unitary("dft", 8), RowSample(8, np.array([0, 0])))
    y = a.apply(rng.normal(size=8))
    assert y[0] == y[1]


def test_apply_matches_dense_submatrix(rng):
    m = make_unitary("dft", 16)
    s = sample_rows(16, 11, 5)
    a = PartialOperator(m, s)
    dense = math.sqrt(16 / 11) * dft_oracle(16)[s.indices]
    x = rng.normal(size=16) + 1j * rng.normal(size=16)
    assert np.abs(a.apply(x) - dense @ x).max() < 1e-10
    y = rng.normal(size=11) + 1j * rng.normal(size=11)
    assert np.abs(a.adjoint(y) - dense.conj().T @ y).max() < 1e-10
    assert np.abs(a.dense() - dense).max() < 1e-12
    assert np.abs(a.gram() - dense.conj().T @ dense).max() < 1e-12


def test_dimension_mismatch():
    a = PartialOperator(make_unitary("dft", 8), sample_rows(8, 3, 0))
    with pytest.raises(ValueError):
        a.apply(np.ones(7))
    with pytest.raises(ValueError):
        a.adjoint(np.ones(4))
    with pytest.raises(ValueError):
        PartialOperator(make_unitary("dft", 8), sample_rows(4, 3, 0))


def test_sampled_mean_full_and_zero():
    m = make_unitary("dft", 16)
    a = PartialOperator(m, full_sample(16))
    x = make_rng(1).normal(size=16)
    assert sampled_mean(a, x) == pytest.approx(full_mean(m, x), rel=1e-14)
    assert sampled_mean(a, np.zeros(16)) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 64), st.integers(0, 2**32), st.complex_numbers(max_magnitude=1e3,
                                                                      allow_nan=False))
def test_norm_identity_and_linearity(q, seed, c):
    a = PartialOperator(make_unitary("dft", 32), sample_rows(32, q, seed))
    x = make_rng(seed, 1).normal(size=32) + 1j * make_rng(seed, 2).normal(size=32)
    ax = a.apply(x)
    assert np.linalg.norm(ax) ** 2 == pytest.approx(32 * sampled_mean(a, x), rel=1e-9)
    assert np.allclose(a.apply(c * x), c * ax, rtol=1e-9, atol=1e-9)


def test_sampled_mean_unbiased():
    n, q, reps = 1024, 256, 10_000
    m = make_unitary("dft", n)
    x = make_rng(77).normal(size=n) + 1j * make_rng(78).normal(size=n)
    v = np.abs(m.apply(x)) ** 2
    # v is precomputed once; indexing it by each sample equals sampled_mean
    a = PartialOperator(m, sample_rows(n, q, 0))
    assert sampled_mean(a, x) == pytest.approx(v[a.sample.indices].mean(), rel=1e-12)
    means = np.array([v[sample_rows(n, q, s).indices].mean() for s in range(reps)])
    se = means.std(ddof=1) / math.sqrt(reps)
    assert abs(means.mean() - full_mean(m, x)) <= 3 * se


def test_make_rng_streams_are_distinct():
    assert make_rng(1, 0).random() != make_rng(1, 1).random()
    assert make_rng(1, 0).random() == make_rng(1, 0).random()
