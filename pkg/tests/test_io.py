import numpy as np
import pytest

from bfcs import io


def test_matrix_roundtrip(tmp_path):
    A = np.random.default_rng(0).standard_normal((3, 5))
    path = tmp_path / "A.bin"
    io.write_matrix(path, A)
    raw = path.read_bytes()
    assert raw[:8] == io.MATRIX_MAGIC
    assert int.from_bytes(raw[8:16], "little") == 3 and int.from_bytes(raw[16:24], "little") == 5
    assert len(raw) == 24 + 8 * 15
    np.testing.assert_array_equal(io.read_matrix(path), A)


def test_matrix_corrupt(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"NOTAMAT!" + bytes(16))
    with pytest.raises(ValueError):
        io.read_matrix(path)
    io.write_matrix(path, np.ones((2, 2)))
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError, match="2x2"):
        io.read_matrix(path)


@pytest.mark.parametrize("ext", [".csv", ".json"])
def test_signal_roundtrip(tmp_path, ext):
    x = np.array([0.1, -2.5e-17, 1 / 3, 0.0])
    path = tmp_path / f"x{ext}"
    io.write_signal(path, x)
    np.testing.assert_array_equal(io.read_signal(path), x)


def test_signal_formats(tmp_path):
    io.write_signal(tmp_path / "x.csv", [1.5, -2.0])
    assert (tmp_path / "x.csv").read_text() == "1.5\n-2.0\n"
    io.write_signal(tmp_path / "x.json", [1.5])
    assert (tmp_path / "x.json").read_text().strip() == '{"n": 1, "values": [1.5]}'
    with pytest.raises(ValueError):
        io.write_signal(tmp_path / "x.txt", [1.0])


@pytest.mark.parametrize("ext", [".csv", ".json"])
def test_signs_roundtrip(tmp_path, ext):
    y = np.array([1.0, -1.0, -1.0])
    path = tmp_path / f"y{ext}"
    io.write_signs(path, y)
    np.testing.assert_array_equal(io.read_signs(path), y)


def test_signs_validation(tmp_path):
    (tmp_path / "y.csv").write_text("1\n0\n")
    with pytest.raises(ValueError):
        io.read_signs(tmp_path / "y.csv")
    (tmp_path / "y.json").write_text('{"m": 3, "signs": [1, -1]}')
    with pytest.raises(ValueError):
        io.read_signs(tmp_path / "y.json")
