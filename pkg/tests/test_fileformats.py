import json

import numpy as np
import pytest

from conftest import pauli_decay_transfers
from nonunital.errors import InputFormatError, NotCompletelyPositiveError
from nonunital.fileformats import dump_channel, dump_process, load_channel, load_process
from nonunital.channels import TransferMatrix


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return path


def test_channel_roundtrip(tmp_path):
    t = TransferMatrix(np.diag([1.0, 0.5, 0.5, 0.25]))
    dump_channel(t, tmp_path / "c.json")
    assert np.array_equal(load_channel(tmp_path / "c.json").matrix, t.matrix)


def test_channel_first_row_check(tmp_path):
    rows = np.eye(4)
    rows[0, 3] = 1e-9
    load_channel(_write(tmp_path / "ok.json", {"dim": 2, "rows": rows.tolist()}))
    rows[0, 3] = 1e-6
    with pytest.raises(InputFormatError, match="first row"):
        load_channel(_write(tmp_path / "bad.json", {"dim": 2, "rows": rows.tolist()}))


@pytest.mark.parametrize("obj", [
    {"rows": np.eye(4).tolist()},
    {"dim": 1, "rows": [[1.0]]},
    {"dim": 2, "rows": np.eye(9).tolist()},
    {"dim": 2, "rows": [["a"] * 4] * 4},
])
def test_channel_malformed(tmp_path, obj):
    with pytest.raises(InputFormatError):
        load_channel(_write(tmp_path / "m.json", obj))


def test_not_json(tmp_path):
    (tmp_path / "x.json").write_text("{nope")
    with pytest.raises(InputFormatError):
        load_process(tmp_path / "x.json")


def test_process_roundtrip(tmp_path):
    times = np.linspace(0, 2, 5)
    dump_process(times, pauli_decay_transfers(times), tmp_path / "p.json")
    p = load_process(tmp_path / "p.json")
    assert np.allclose(p.transfers(times), pauli_decay_transfers(times))
    assert p.kind == "tabulated"


def test_process_rejects_non_cp_sample(tmp_path):
    times = np.array([0.0, 1.0, 2.0])
    tr = pauli_decay_transfers(times)
    tr[1, 1, 1] = 1.5
    with pytest.raises(NotCompletelyPositiveError, match="t=1.0"):
        load_process(_write(tmp_path / "p.json", {"dim": 2, "times": times.tolist(),
                                                  "transfers": tr.tolist()}))


def test_process_count_mismatch(tmp_path):
    with pytest.raises(InputFormatError):
        load_process(_write(tmp_path / "p.json", {"dim": 2, "times": [0.0, 1.0],
                                                  "transfers": [np.eye(4).tolist()]}))
