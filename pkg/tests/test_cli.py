import csv
import io
import json
import math
from pathlib import Path

import numpy as np
import pytest

from cfkernel.cli import REPORT_KEYS, dumps_report, run

GOLDEN = Path(__file__).parent / "golden"
HALF = "1.5707963267948966"


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], buf)
    return code, buf.getvalue()


def test_eval_matches_golden_file():
    code, text = call("eval", "--m", 2, "--p", HALF, "--u", 0, "--v", 1, "--json")
    assert code == 0
    got = json.loads(text)
    want = json.loads((GOLDEN / "eval_m2.json").read_text())
    assert list(got) == list(want) == list(REPORT_KEYS)
    for key in want:
        if isinstance(want[key], float):
            assert got[key] == pytest.approx(want[key], rel=1e-14, abs=1e-15)
        else:
            assert got[key] == want[key]


def test_eval_p_zero_from_vectors():
    code, text = call("eval", "--m", 4, "--p", 0, "--x", "1,0,0,0", "--y", "1,1,0,0", "--json")
    assert code == 0
    rep = json.loads(text)
    assert complex(rep["scalar_re"], rep["scalar_im"]) == pytest.approx(np.exp(-1j), abs=1e-12)
    assert rep["bivec_re"] == rep["bivec_im"] == 0.0
    assert rep["v"] == pytest.approx(1.0)


def test_plain_text_eval():
    code, text = call("eval", "--m", 3, "--p", HALF, "--u", 0.2, "--v", 0.1)
    assert code == 0 and "scalar" in text and "bivector" in text


def test_report_round_trips_losslessly():
    rng = np.random.default_rng(4)
    for _ in range(50):
        rep = {k: float(rng.normal() * 10.0 ** rng.integers(-20, 20)) for k in REPORT_KEYS}
        rep["m"], rep["rep"] = 4, "series"
        back = json.loads(dumps_report(rep))
        assert back == rep
        assert list(back) == list(REPORT_KEYS)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["eval", "--m", "4"],
        ["eval", "--m", "4", "--p", "0", "--u", "1"],
        ["eval", "--m", "4", "--p", "0", "--u", "1", "--v", "1", "--rep", "nonsense"],
        ["eval", "--m", "3", "--p", "1.0", "--u", "1", "--v", "1", "--rep", "closed"],
        ["eval", "--m", "3", "--p", "0", "--x", "1,2", "--y", "1,2,3"],
        ["coeffs", "--p", "1", "--u", "0", "--v", "1", "--max-m", "5"],
        ["laplace", "--m", "4", "--p", "1", "--s", "0.5", "--u", "1", "--v", "1"],
        ["validate", "--m", "4", "--p", HALF, "--trials", "0"],
        ["transform", "--input", "/nonexistent.json", "--targets", "/nonexistent.json", "--out", "x.json"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_validate_passes_and_is_deterministic():
    argv = ("validate", "--m", 4, "--p", HALF, "--trials", 20, "--seed", 7, "--tmax", 3)
    code, first = call(*argv)
    assert code == 0
    assert "worst pair" in first
    assert call(*argv) == (code, first)


def test_validate_failure_exits_1():
    # a tolerance no floating-point comparison can meet
    code, text = call("validate", "--m", 4, "--p", HALF, "--trials", 5, "--seed", 1, "--tmax", 3, "--tol", 0)
    assert code == 1 and "FAIL" in text


def test_coeffs_lists_even_dimensions():
    code, text = call("coeffs", "--p", HALF, "--u", 0.3, "--v", 0.7, "--max-m", 8)
    assert code == 0
    lines = [json.loads(s) for s in text.splitlines()]
    assert [r["m"] for r in lines] == [2, 4, 6, 8]
    first = lines[0]
    assert first["scalar_re"] == pytest.approx(math.cos(0.7), abs=1e-13)


def test_laplace_subcommand():
    code, text = call("laplace", "--m", 4, "--p", 0.3, "--s", "3,0.5", "--u", 0.2, "--v", 0.5)
    assert code == 0 and "[ok]" in text
    code, _ = call("laplace", "--m", 4, "--p", 0.3, "--s", "3,0.5", "--u", 0.2, "--v", 0.5, "--tol", 0)
    assert code == 1


def test_transform_round_trip(tmp_path):
    spec = {"dim": 2, "grid_order": 48, "channels": {"0": [{"coeff": 1.0, "powers": [0, 0], "gaussian": 0.5}]}}
    (tmp_path / "f.json").write_text(json.dumps(spec))
    (tmp_path / "y.json").write_text(json.dumps([[0.0, 0.0], [1.0, -0.5]]))
    code, _ = call("transform", "--input", tmp_path / "f.json", "--p", HALF,
                   "--targets", tmp_path / "y.json", "--out", tmp_path / "out.json")
    assert code == 0
    res = json.loads((tmp_path / "out.json").read_text())["results"]
    assert res[1]["coeffs"]["1"][0] == pytest.approx(math.exp(-0.625), abs=1e-10)


def test_grid_writes_four_csv_files(tmp_path):
    code, _ = call("grid", "--m", 2, "--p", HALF, "--umin", -1, "--umax", 1, "--vmin", 0, "--vmax", 2,
                   "--nu", 3, "--nv", 5, "--out", tmp_path / "k")
    assert code == 0
    with open(tmp_path / "k_bivec_re.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 4 and len(rows[0]) == 6
    vs = [float(x) for x in rows[0][1:]]
    for row in rows[1:]:
        # K_2 at p = pi/2 is e^{x^y} = cos v + (sin v / v) x^y, whatever u is
        assert [float(x) for x in row[1:]] == pytest.approx(np.sinc(np.array(vs) / np.pi), abs=1e-14)
    assert {p.name for p in tmp_path.iterdir()} == {f"k_{c}.csv" for c in ("scalar_re", "scalar_im", "bivec_re", "bivec_im")}
