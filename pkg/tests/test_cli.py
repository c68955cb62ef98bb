import io
import json
import math

import pytest

from periodic_jacobi.cli import fmt, main
from periodic_jacobi.sweep import CSV_HEADER, SplitMix64, SweepConfig, sample_matrix
from periodic_jacobi.errors import InvalidInputError


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_splitmix_reference_values():
    # published first outputs for seed 1234567
    g = SplitMix64(1234567)
    assert [g.next_u64() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]
    g = SplitMix64(0)
    assert 0 <= g.uniform() < 1
    assert all(3 <= SplitMix64(s).integer(3, 5) <= 5 for s in range(50))


def test_fmt():
    assert fmt(0.0) == "0.000000"
    assert fmt(1.5) == "1.500000"
    assert fmt(5e-5) == "5.000000e-05"
    assert fmt(2e6) == "2.000000e+06"
    assert fmt(math.inf) == "inf"


def test_spectrum_p2(tmp_path):
    cfg = write(tmp_path, "p2.json", {"a": [1, 1], "b": [1, -1], "label": "worked"})
    csv_path = tmp_path / "bands.csv"
    code, out, _ = run(["spectrum", cfg, "--csv", str(csv_path)])
    assert code == 0
    assert "band 0: [-2.236068, -1.000000]" in out and "band 1: [1.000000, 2.236068]" in out
    assert "gap 1: (-1.000000, 1.000000) length 2.000000 open" in out
    assert "label: worked" in out
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "kind,index,lower,upper,length,closed"
    assert rows[-1] == "gap,1,-1,1,2,false"


def test_spectrum_p1(tmp_path):
    code, out, _ = run(["spectrum", write(tmp_path, "c.json", {"a": [1], "b": [0]})])
    assert code == 0 and "band 0: [-2.000000, 2.000000]" in out and "gap" not in out.split("max")[0]


@pytest.mark.parametrize("content, needle", [
    ('{"a": [1,', "invalid JSON"),
    ('{"a": [1]}', "missing field 'b'"),
    ('{"a": [0, 1], "b": [0, 0]}', "a[0]"),
    ('{"a": [1, 1], "b": [0]}', "length"),
    ('[1, 2]', "JSON object"),
])
def test_bad_matrix_configs(tmp_path, content, needle):
    for cmd in (["spectrum"], ["verify"]):
        code, _, err = run(cmd + [write(tmp_path, "bad.json", content)])
        assert code == 2 and needle in err


def test_missing_file(tmp_path):
    assert run(["spectrum", str(tmp_path / "nope.json")])[0] == 2


def test_verify(tmp_path):
    code, out, _ = run(["verify", write(tmp_path, "p2.json", {"a": [1, 1], "b": [1, -1]}), "--strict"])
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("theorem_b_upper"))
    assert line.split()[3] == "1.000000" and line.endswith("PASS")
    assert "SKIPPED(branch M<2)" in out
    code, out, _ = run(["verify", write(tmp_path, "c7.json", {"a": [1] * 7, "b": [0] * 7})])
    assert code == 0
    statuses = {l.split()[-1] for l in out.splitlines()[:-1] if "SKIPPED" not in l}
    assert statuses <= {"PASS", "DEGENERATE"}


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    from periodic_jacobi import cli
    from periodic_jacobi.bounds import BoundsReport, inequality

    monkeypatch.setattr(cli, "full_verification",
                        lambda J, tol: BoundsReport((inequality("broken", 2, 1),)))
    code, out, _ = run(["verify", write(tmp_path, "p2.json", {"a": [1, 1], "b": [1, -1]})])
    assert code == 1 and "FAIL" in out


def test_sample(tmp_path):
    cfg = write(tmp_path, "p2.json", {"a": [1, 1], "b": [1, -1]})
    code, out, _ = run(["sample", cfg, "--from", "-3", "--to", "3", "--points", "7"])
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "lambda,discriminant" and len(rows) == 8
    assert rows[4] == "0,-3"
    cfg1 = write(tmp_path, "c.json", {"a": [1], "b": [0]})
    code, out, _ = run(["sample", cfg1, "--from", "-2", "--to", "2", "--points", "3"])
    assert [r.split(",")[1] for r in out.splitlines()[1:]] == ["-2", "0", "2"]
    assert run(["sample", cfg1, "--from", "-2", "--to", "2", "--points", "1"])[0] == 2
    assert run(["sample", cfg1, "--from", "2", "--to", "-2"])[0] == 2


def test_sweep_config_validation():
    with pytest.raises(InvalidInputError):
        SweepConfig(seed=1, count=0)
    with pytest.raises(InvalidInputError):
        SweepConfig(seed=-1, count=3)
    with pytest.raises(InvalidInputError):
        SweepConfig(seed=1, count=3, a_lo=0.0)
    with pytest.raises(InvalidInputError):
        SweepConfig.from_dict({"seed": 1, "count": 2, "colour": "red"})


def test_sample_matrix_ranges():
    cfg = SweepConfig(seed=5, count=50, p_min=3, p_max=4)
    for i in range(50):
        J = sample_matrix(cfg, i)
        assert 3 <= J.period <= 4
        assert all(0.5 <= x < 2 for x in J.a) and all(-1 <= x < 1 for x in J.b)
    cfg = SweepConfig(seed=5, count=50, epsilon=1e-3)
    for i in range(50):
        J = sample_matrix(cfg, i)
        assert max(J.a) - min(J.a) <= 1e-3 and max(J.b) - min(J.b) <= 1e-3


def test_sweep(tmp_path):
    cfg = write(tmp_path, "sw.json", {"seed": 42, "count": 20})
    code, out, err = run(["sweep", cfg])
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == ",".join(CSV_HEADER) and len(rows) == 21
    assert all(r.endswith(",true") for r in rows[1:])
    assert "samples 20, failures 0" in err
    code2, out2, _ = run(["sweep", cfg, "--jobs", "2"])
    assert code2 == 0 and out2 == out
    assert run(["sweep", write(tmp_path, "z.json", {"seed": 42, "count": 0})])[0] == 2
    assert run(["sweep", write(tmp_path, "n.json", {"count": 3})])[0] == 2


def test_sweep_failure_flushes_and_exits_1(tmp_path, monkeypatch):
    from periodic_jacobi import sweep

    real = sweep.evaluate_sample

    def broken(cfg, i, tol):
        row = real(cfg, i, tol)
        return row if i else sweep.SweepRow(**{**row.__dict__, "all_pass": False,
                                               "failures": ("fake",)})

    monkeypatch.setattr(sweep, "evaluate_sample", broken)
    path = tmp_path / "o.csv"
    code, _, err = run(["sweep", write(tmp_path, "sw.json", {"seed": 1, "count": 3}), "--csv", str(path)])
    assert code == 1 and "sample 0 failed: fake" in err
    assert len(path.read_text().splitlines()) == 4


def test_oracle4():
    code, out, _ = run(["oracle4", "1", "2", "1", "2"])
    assert code == 0
    assert "interior gap: 2.000000" in out and "exterior gap: 0.000000" in out
    dev = float(out.split("cross-check deviation: ")[1].split()[0])
    assert dev <= 1e-9
    code, out, _ = run(["oracle4", "1", "1", "2", "2"])
    assert "interior gap: 0.000000" in out and "exterior gap: 1.414214" in out
    code, out, _ = run(["oracle4", "1", "1", "1", "1"])
    assert "spectrum: [-2.000000, 2.000000]\n" in out
    assert run(["oracle4", "1", "0", "1", "1"])[0] == 2
    assert run(["oracle4", "1", "2"])[0] == 2
