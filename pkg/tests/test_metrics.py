import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfcs.metrics import age, evaluate, mae, mse, per, snr_db


def test_mae():
    assert mae([1, 0], [0, 0]) == 0.5
    assert mae([0.3, -0.2], [0.3, -0.2]) == 0
    assert mae([1, -1], [-1, 1]) == 2


def test_mse():
    assert mse([1, 0], [0, 0]) == 0.5
    assert mse([0.3, -0.2], [0.3, -0.2]) == 0
    assert mse([1, -1], [-1, 1]) == 4


def test_snr():
    assert snr_db([1.0, 0.0], [1.0, math.sqrt(0.1)]) == pytest.approx(10.0, abs=1e-12)
    assert snr_db([1.0, 0.0], [0.0, 0.0]) == 0.0
    assert snr_db([0.6, 0.8], [0.6, 0.8]) == math.inf


def test_per():
    assert per([1, 0, -1], [0.5, 0, 0]) == pytest.approx(1 / 3)
    assert per([1, 0, -2], [3, 0, 1e-9]) == 0
    assert per([1, 2, 3], [0, 0, 0]) == 1


def test_age():
    x = np.array([0.6, 0.8])
    assert age(x, x) == 0
    assert age([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.5)
    assert age(x, -x) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        age([1.0, 1.0], [1.0, 0.0])


def test_length_mismatch():
    for f in (mae, mse, snr_db, per, age):
        with pytest.raises(ValueError):
            f([1.0, 0.0], [1.0])


def _unit_pair(seed, n):
    rng = np.random.default_rng(seed)
    x, e = rng.standard_normal(n), rng.standard_normal(n)
    return x / np.linalg.norm(x), e / np.linalg.norm(e)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 50))
def test_cross_metric_identities(seed, n):
    x, e = _unit_pair(seed, n)
    r = evaluate(x, e)
    assert r.mse * n == pytest.approx(2 - 2 * math.cos(math.pi * r.age), abs=1e-9)
    if r.mse > 0:
        assert r.snr_db == pytest.approx(-10 * math.log10(r.mse * n), abs=1e-9)
    assert 0 <= r.per <= 1 and 0 <= r.age <= 1 and r.mae >= 0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 30))
def test_symmetry(seed, n):
    x, e = _unit_pair(seed, n)
    e[: n // 2] = 0
    if not e.any():
        return
    e /= np.linalg.norm(e)
    for f in (mae, mse, per, age, snr_db):
        assert f(x, e) == pytest.approx(f(e, x), abs=1e-12)
