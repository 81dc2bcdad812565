from __future__ import annotations

import struct

import numpy as np
import pytest

from vos_tracking.ingestion.flow_io import FlowDirectory, flow_filename, read_flo, write_flo
from vos_tracking.segmentation.flow import FlowField
from vos_tracking.utils.errors import InputFormatError, MissingFlowError


def _flo_bytes(width: int, height: int, payload: np.ndarray, magic: float = 202021.25) -> bytes:
    return struct.pack("<fii", magic, width, height) + payload.astype("<f4").tobytes()


def test_read_known_layout(tmp_path):
    # 2 rows x 3 cols, row-major (dx, dy) pairs
    payload = np.arange(12, dtype=np.float32)
    path = tmp_path / "000000.flo"
    path.write_bytes(_flo_bytes(3, 2, payload))
    flow = read_flo(path)
    assert flow.shape == (2, 3)
    assert tuple(flow.vectors[0, 0]) == (0.0, 1.0)
    assert tuple(flow.vectors[0, 2]) == (4.0, 5.0)
    assert tuple(flow.vectors[1, 0]) == (6.0, 7.0)


def test_write_is_bit_exact(tmp_path, rng):
    v = rng.normal(size=(4, 5, 2)).astype(np.float32)
    path = write_flo(tmp_path / "a.flo", FlowField(4, 5, v))
    assert path.read_bytes() == _flo_bytes(5, 4, v.reshape(-1))
    np.testing.assert_array_equal(read_flo(path).vectors, v)


@pytest.mark.parametrize(
    "raw",
    [
        b"\x00\x01",
        struct.pack("<fii", 1.0, 1, 1) + b"\x00" * 8,
        struct.pack("<fii", 202021.25, 2, 2) + b"\x00" * 8,
        struct.pack("<fii", 202021.25, 0, 2),
    ],
    ids=["truncated", "magic", "short-payload", "zero-width"],
)
def test_malformed_files(tmp_path, raw):
    path = tmp_path / "bad.flo"
    path.write_bytes(raw)
    with pytest.raises(InputFormatError):
        read_flo(path)


def test_non_finite_rejected(tmp_path):
    payload = np.array([np.inf, 0.0], dtype=np.float32)
    path = tmp_path / "nan.flo"
    path.write_bytes(_flo_bytes(1, 1, payload))
    with pytest.raises(InputFormatError, match="NaN or Inf"):
        read_flo(path)


def test_directory_lookup(tmp_path):
    write_flo(tmp_path / flow_filename(0), FlowField.uniform(2, 3, 1.0, 0.0))
    write_flo(tmp_path / flow_filename(2), FlowField.zeros(2, 3))
    (tmp_path / "notes.flo").write_bytes(b"")
    flows = FlowDirectory(tmp_path, height=2, width=3)
    assert list(flows) == [0, 2]
    assert len(flows) == 2
    assert 0 in flows and 1 not in flows
    assert float(flows[0].vectors[0, 0, 0]) == 1.0
    with pytest.raises(MissingFlowError, match="1->2"):
        flows[1]


def test_directory_checks_dimensions(tmp_path):
    write_flo(tmp_path / flow_filename(0), FlowField.zeros(3, 3))
    with pytest.raises(InputFormatError, match="3x3"):
        FlowDirectory(tmp_path, height=2, width=3)[0]


def test_flow_filename():
    assert flow_filename(7) == "000007.flo"
