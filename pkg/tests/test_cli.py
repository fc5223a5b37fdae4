import json
import subprocess
import sys

import pytest

from nestohedron.cli import main

D2 = {"ground_set": 4, "sets": [[0], [1], [2], [3], [0, 2], [1, 3]]}
D3 = {"ground_set": 3, "sets": [[0], [1], [2], [0, 1], [0, 1, 2]]}
D4 = {"ground_set": 3, "sets": [[0], [1], [2], [0, 1], [1, 2], [0, 1, 2]]}
K4 = {"vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}


@pytest.fixture
def write(tmp_path):
    def _write(data, name="input.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_complex_d4(capsys, write):
    code, out, _ = run(capsys, "complex", "--input", write(D4))
    assert code == 0
    data = json.loads(out)
    assert data["f_vector"] == [1, 5, 5]
    assert len(data["maximal_faces"]) == 5


def test_complex_dot_is_five_cycle(capsys, write):
    code, out, _ = run(capsys, "complex", "--input", write(D4), "--format", "dot")
    assert code == 0
    assert out.startswith("graph dual {")
    assert out.count(" -- ") == 5
    assert out.count("[label=") == 10


def test_render_d2_square(capsys, write):
    code, out, _ = run(capsys, "render", "--input", write(D2))
    assert code == 0
    assert out.count("<line ") == 4
    assert out.count("<polygon ") == 1
    (poly,) = [line for line in out.splitlines() if line.startswith("<polygon")]
    points = poly.split('points="')[1].split('"')[0].split()
    assert len(points) == 4


def test_render_d3_trapezoid(capsys, write):
    code, out, _ = run(capsys, "render", "--input", write(D3))
    assert code == 0 and out.count("<line ") == 4


def test_render_high_rank_falls_back_to_json(capsys, write):
    code, out, _ = run(capsys, "render", "--graph", "--input", write(K4))
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"fan", "polytope"}


def test_validate_missing_singleton(capsys, write):
    code, _, err = run(capsys, "validate", "--input", write({"ground_set": 3, "sets": [[0], [1]]}))
    assert code == 1
    assert "MissingSingleton" in err


def test_validate_union_not_closed(capsys, write):
    bad = {"ground_set": 3, "sets": [[0], [1], [2], [0, 1], [1, 2]]}
    code, _, err = run(capsys, "validate", "--input", write(bad))
    assert code == 1 and "UnionNotClosed" in err and "{1,2}" in err


def test_validate_report(capsys, write, tmp_path):
    code, out, _ = run(capsys, "validate", "--input", write(D2), "--output", str(tmp_path / "o"))
    assert code == 0
    assert "components: {1,3} {2,4}" in out
    assert "rank: 2" in out
    assert "graphical: yes" in out


def test_validate_json(capsys, write):
    code, out, _ = run(capsys, "validate", "--input", write(D3), "--format", "json")
    data = json.loads(out)
    assert data["graphical"] is False and data["rank"] == 2


def test_parse_error_position(capsys, write):
    code, _, err = run(capsys, "validate", "--input", write('{"ground_set": 3,\n "sets": [[0],]}'))
    assert code == 1
    assert ":2:" in err


@pytest.mark.parametrize(
    "data",
    [
        {"ground_set": 0, "sets": []},
        {"ground_set": 2, "sets": [[0], [1], [2]]},
        {"ground_set": 2, "sets": [[0], [1]], "extra": 1},
        {"ground_set": 2, "sets": [[0], ["1"]]},
        [1, 2],
    ],
)
def test_malformed_building(capsys, write, data):
    assert run(capsys, "validate", "--input", write(data))[0] == 1


@pytest.mark.parametrize(
    "data",
    [
        {"vertices": 3, "edges": [[0, 0]]},
        {"vertices": 3, "edges": [[0, 1], [1, 0]]},
        {"vertices": 3, "edges": [[0, 3]]},
        {"vertices": 3, "edges": [[0, 1, 2]]},
    ],
)
def test_malformed_graph(capsys, write, data):
    assert run(capsys, "validate", "--graph", "--input", write(data))[0] == 1


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", "--input", str(tmp_path / "none.json"))[0] == 1


def test_unknown_flag_and_command(capsys, write):
    assert run(capsys, "validate", "--input", write(D2), "--bogus")[0] == 1
    assert run(capsys, "explode", "--input", write(D2))[0] == 1


def test_format_not_available(capsys, write):
    code, _, err = run(capsys, "fan", "--input", write(D2), "--format", "svg")
    assert code == 1


def test_inline_input(capsys):
    code, out, _ = run(capsys, "complex", "--input", json.dumps(D4))
    assert code == 0 and json.loads(out)["f_vector"] == [1, 5, 5]


def test_fan_json(capsys, write):
    code, out, _ = run(capsys, "fan", "--input", write(D2))
    data = json.loads(out)
    assert data["dim"] == 2
    assert data["rays"] == {"0": [1, 0], "1": [0, 1], "2": [-1, 0], "3": [0, -1]}
    assert len(data["maximal_cones"]) == 4


def test_polytope_json(capsys, write):
    code, out, _ = run(capsys, "polytope", "--input", write(D3))
    data = json.loads(out)
    assert data["equalities"] == [[0, 1, 2]]
    assert {"set": [0, 1], "rhs": 4} in data["inequalities"]
    points = {tuple(v["point"]) for v in data["vertices"]}
    assert ("3/1", "1/1", "-4/1") in points


def test_verify_with_oracle(capsys, write, tmp_path):
    out_dir = tmp_path / "v"
    code, out, _ = run(
        capsys, "verify", "--graph", "--input", write(K4), "--oracle", "--samples", "100",
        "--output", str(out_dir),
    )
    assert code == 0
    report = json.loads((out_dir / "verify.json").read_text())
    assert report["oracle"]["passed"] is True
    assert report["f_vector"] == [1, 14, 36, 24]
    assert "oracle:" in out


def test_verification_failure_exit_code(capsys, write, monkeypatch):
    from nestohedron import cli
    from nestohedron.errors import FanViolation

    def broken(*args, **kwargs):
        raise FanViolation("cones overlap", witness=(1, 2))

    monkeypatch.setattr(cli, "verify_fan", broken)
    code, _, err = run(capsys, "verify", "--input", write(D2))
    assert code == 2
    assert "cones overlap" in err


def test_cap_violation(capsys, write):
    big = {"ground_set": 17, "sets": [[i] for i in range(17)]}
    code, _, err = run(capsys, "complex", "--input", write(big))
    assert code == 1 and "TooLarge" in err


COMMANDS = [
    ("validate", []),
    ("complex", []),
    ("complex", ["--format", "dot"]),
    ("fan", []),
    ("polytope", []),
    ("verify", ["--samples", "200", "--oracle"]),
    ("render", []),
]


@pytest.mark.parametrize("command,extra", COMMANDS)
def test_deterministic(capsys, write, tmp_path, command, extra):
    path = write(D4)
    outputs = []
    for k in range(2):
        out_dir = tmp_path / f"run{k}"
        code, out, _ = run(capsys, command, "--input", path, "--seed", "7", "--output", str(out_dir), *extra)
        assert code == 0
        files = {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}
        outputs.append((out, files))
    assert outputs[0] == outputs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nestohedron", "validate", "--input", json.dumps(D4)],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip()
    bad = subprocess.run(
        [sys.executable, "-m", "nestohedron", "validate", "--input", '{"ground_set": 2, "sets": [[0]]}'],
        capture_output=True, text=True, timeout=60,
    )
    assert bad.returncode == 1
