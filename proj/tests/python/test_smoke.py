import math
import os
from pathlib import Path

import numpy as np
import pytest

import pycsd

DATA = Path(os.environ.get("CSD_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_quality_values():
    y = [0, 1, 1, 0]
    assert pycsd.wracc([0, 1, 1, 1], y) == pytest.approx(0.125)
    assert pycsd.wracc_max(y) == 0.25
    assert pycsd.nwracc(y, y) == 1.0
    assert pycsd.jaccard_similarity([1, 1, 0, 0], [1, 0, 1, 0]) == pytest.approx(1 / 3)
    assert pycsd.deselection_dissimilarity([0, 0, 1, 1], [1, 1, 0, 0]) == 2
    with pytest.raises(ValueError):
        pycsd.nwracc([1, 0], [1, 1])


def test_exact_search_from_numpy():
    data = pycsd.Dataset(np.array([[1.0], [2.0], [3.0]]), [0, 1, 0])
    box = pycsd.discover(data, "EXACT", k=1)
    assert box.lb == [2.0] and box.ub == [2.0]
    assert pycsd.membership(box, data) == [0, 1, 0]
    assert pycsd.nwracc(pycsd.membership(box, data), data.target) == 1.0


def test_mors_example_bounds():
    data = pycsd.Dataset(np.array([[1, 5], [2, 7], [3, 6], [10, 8]]), [1, 1, 0, 0])
    box = pycsd.discover(data, "MORS")
    assert box.lb == [-math.inf, -math.inf]
    assert box.ub == [2.0, 7.0]


def test_csv_and_alternatives():
    data = pycsd.load_csv(DATA / "toy_duplicated.csv")
    entries = pycsd.find_alternatives(data, "EXACT", a=1, tau_abs=1, k=1)
    assert len(entries) == 2
    assert entries[1]["hamming_to_original"] == 1.0
    assert entries[0]["selection"] != entries[1]["selection"]


def test_errors_are_python_exceptions():
    with pytest.raises(RuntimeError):
        pycsd.load_csv(DATA / "missing.csv")
    data = pycsd.load_csv(DATA / "toy_noisy.csv")
    with pytest.raises(ValueError):
        pycsd.discover(data, "GREEDY")
    with pytest.raises(pycsd.SolverNotFound):
        pycsd.discover(data, "SMT", solver_command="/nonexistent/solver {file}")


def test_encode_smt_text():
    data = pycsd.load_csv(DATA / "toy_noisy.csv")
    text = pycsd.encode_smt(data, k=2)
    assert text.count("(declare-fun") == 2 * data.cols + data.rows + 3 * data.cols
    assert text.rstrip().endswith("(get-model)")
