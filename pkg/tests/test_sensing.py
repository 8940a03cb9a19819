import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfcs.sensing import SignalSpec, gaussian_matrix, generate_signal, make_rng, measure, sign_vector


def test_gaussian_matrix_moments():
    A = gaussian_matrix(1000, 2000, seed=3)
    assert A.shape == (1000, 2000)
    assert -0.01 < A.mean() < 0.01
    assert 0.99 < A.var() < 1.01


def test_gaussian_matrix_deterministic():
    assert gaussian_matrix(1, 1, 99)[0, 0] == gaussian_matrix(1, 1, 99)[0, 0]
    assert not np.array_equal(gaussian_matrix(3, 3, 1), gaussian_matrix(3, 3, 2))


@pytest.mark.parametrize("m,n", [(0, 5), (5, 0)])
def test_gaussian_matrix_rejects_empty(m, n):
    with pytest.raises(ValueError):
        gaussian_matrix(m, n, 0)


def test_seed_range():
    with pytest.raises(ValueError):
        make_rng(-1)
    with pytest.raises(ValueError):
        make_rng(2**64)
    make_rng(2**64 - 1)


def test_substreams_are_independent():
    # the same seed feeds different purposes without reusing draws
    a = make_rng(5, 0).standard_normal(4)
    b = make_rng(5, 1).standard_normal(4)
    assert not np.allclose(a, b)


def test_signal_without_jitter():
    spec = SignalSpec(n=10, K=4, jitter_std=0.0, block_starts_B=(0, 1), block_starts_C=(2, 3))
    x = generate_signal(spec, seed=0)
    expected = np.array([2, 2, -1, -1, 0, 0, 0, 0, 0, 0]) / np.sqrt(10)
    np.testing.assert_allclose(x, expected, rtol=0, atol=1e-15)


def test_paper_signal_support():
    x = generate_signal(SignalSpec.paper(K=100), seed=11)
    expected = np.concatenate([np.arange(100, 125), np.arange(500, 525), np.arange(1000, 1025), np.arange(1500, 1525)])
    np.testing.assert_array_equal(np.flatnonzero(x), expected)
    assert np.all(x[100:125] > 0) and np.all(x[500:525] > 0)
    assert np.all(x[1000:1025] < 0) and np.all(x[1500:1525] < 0)


def test_signal_norm_is_returned():
    spec = SignalSpec.paper(K=400)
    x, nrm = generate_signal(spec, seed=1, return_norm=True)
    xbar = x * nrm
    # unnormalized levels sit near 2 and -1
    assert abs(np.median(xbar[spec.support("B")]) - 2) < 0.05
    assert abs(np.median(xbar[spec.support("C")]) + 1) < 0.05


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=10, K=6),  # not a multiple of 4
        dict(n=10, K=4, block_starts_B=(0, 0), block_starts_C=(2, 3)),  # overlap
        dict(n=10, K=8, block_starts_B=(0, 2), block_starts_C=(4, 9)),  # out of range
        dict(n=10, K=4, block_starts_B=(-1, 2), block_starts_C=(4, 6)),
    ],
)
def test_signal_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SignalSpec(**kwargs)


@settings(max_examples=40, deadline=None)
@given(K=st.sampled_from([4, 8, 12, 20]), seed=st.integers(0, 2**64 - 1))
def test_signal_invariants(K, seed):
    spec = SignalSpec(n=64, K=K, jitter_std=0.0, block_starts_B=(0, 16), block_starts_C=(32, 48))
    x = generate_signal(spec, seed)
    assert abs(np.linalg.norm(x) - 1) <= 1e-12
    assert np.count_nonzero(x) == K
    np.testing.assert_array_equal(generate_signal(spec, seed), x)


def test_sign_vector():
    np.testing.assert_array_equal(sign_vector([3.2, -0.1, 0.0]), [1, -1, -1])
    np.testing.assert_array_equal(sign_vector(np.ones(5)), np.ones(5))
    assert sign_vector([]).size == 0


def test_measure_examples():
    np.testing.assert_array_equal(measure(np.eye(2), [0.6, -0.8]), [1, -1])
    np.testing.assert_array_equal(measure(np.array([[1.0], [-1.0]]), [1.0]), [1, -1])
    # an exact zero product maps to -1
    np.testing.assert_array_equal(measure(np.array([[1.0, -1.0]]), [2.0, 2.0]), [-1])


def test_measure_dimension_mismatch():
    with pytest.raises(ValueError):
        measure(np.ones((3, 2)), np.ones(3))


def test_measure_noise_is_seeded():
    A = gaussian_matrix(200, 10, 1)
    x = np.ones(10) / np.sqrt(10)
    y1 = measure(A, x, 1.0, seed=4)
    np.testing.assert_array_equal(y1, measure(A, x, 1.0, seed=4))
    assert not np.array_equal(y1, measure(A, x, 1.0, seed=5))
    assert set(np.unique(y1)) <= {-1.0, 1.0}


@settings(max_examples=30, deadline=None)
@given(c=st.floats(1e-3, 1e3), seed=st.integers(0, 1000))
def test_measure_scale_invariance(c, seed):
    A = gaussian_matrix(30, 8, seed)
    x = make_rng(seed, 9).standard_normal(8)
    np.testing.assert_array_equal(measure(A, c * x), measure(A, x))
