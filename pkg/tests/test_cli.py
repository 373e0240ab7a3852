from __future__ import annotations

import json

import pytest

from monocoh.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "triangle": "v v1\nv v2\nv v3\ne v1 v2\ne v2 v3\ne v1 v3\n",
        "empty": "",
        "l2": "e a b\ne b c\n",
        "bad": "e a a\n",
        "k33": "".join(f"e a{i} b{j}\n" for i in range(3) for j in range(3)),
    }.items():
        p = tmp_path / f"{name}.g"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cohomology_triangle(files, capsys):
    code, out, _ = run(capsys, "cohomology", files["triangle"], "--property", "oriented-matching", "--algebra", "trunc:2")
    assert code == 0
    assert "H^0: rank 8" in out and "H^1: rank 8" in out


def test_cohomology_json_is_deterministic(files, capsys):
    argv = ("cohomology", files["triangle"], "--property", "multipath", "--json", "--over", "z")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    data = json.loads(a)
    assert list(data) == sorted(data)
    assert data["dims"] == [8, 12, 2]


def test_complex_torsion_report(files, tmp_path, capsys):
    k55 = tmp_path / "k55.g"
    k55.write_text("".join(f"e a{i} b{j}\n" for i in range(5) for j in range(5)))
    code, out, _ = run(capsys, "complex", str(k55), "--kind", "graph-matching", "--homology", "z", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["f_vector"] == [25, 200, 600, 600, 120]
    assert data["reduced_homology"]["torsion"] == {"2": [3]}


def test_complex_predict(files, capsys):
    code, out, _ = run(capsys, "complex", files["k33"], "--kind", "oriented-matching", "--predict")
    assert code == 0 and "wedge, 8 sphere(s) of dimension 2" in out


def test_verify_empty_dsq(files, capsys):
    code, out, _ = run(capsys, "verify", files["empty"], "--suite", "dsq")
    assert code == 0 and out.startswith("[PASS]")


@pytest.mark.parametrize("suite", ["signs", "dsq", "iso-sr", "decomposition", "match-multipath", "wedge", "oh-oracle"])
def test_all_suites_pass_on_triangle(files, capsys, suite):
    code, out, _ = run(capsys, "verify", files["triangle"], "--suite", suite)
    assert code == 0, out


def test_verify_random_prints_seed(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "wedge", "--random", "3", "--seed", "11")
    assert code == 0 and out.splitlines()[0] == "seed: 11"


def test_oriented_homology_flip(files, capsys):
    code, out, _ = run(capsys, "oriented-homology", files["l2"], "--flip", "a-b", "--json")
    data = json.loads(out)
    assert code == 0 and data["agrees"] and data["base_flips"] == [0]
    assert data["histogram"] == [1, 2, 0]


def test_info_free_flow_and_source_resolution(files, capsys, tmp_path):
    code, out, _ = run(capsys, "info", files["triangle"])
    assert code == 0 and "free-flow orientations of the underlying graph: 2" in out
    code, out, _ = run(capsys, "free-flow", files["l2"], "--count")
    assert code == 0 and out.strip() == "free-flow orientations: 3"
    target = tmp_path / "sr.g"
    code, _, _ = run(capsys, "source-resolution", files["triangle"], "-o", str(target))
    assert code == 0
    code, out, _ = run(capsys, "info", str(target))
    assert "vertices: 5   edges: 3" in out


@pytest.mark.parametrize("argv, fragment", [
    (("info", "missing.g"), "file"),
    (("cohomology", "{tri}", "--property", "multipath", "--algebra", "trunc:zz"), "algebra"),
    (("oriented-homology", "{tri}", "--flip", "9"), "out of range"),
    (("complex", "{tri}", "--kind", "oriented-matching-filtered"), "max-cycles"),
    (("info", "{bad}"), "graph file"),
    (("verify", "--suite", "dsq"), "graph file is required"),
])
def test_usage_errors_exit_2(files, capsys, argv, fragment):
    argv = [a.format(tri=files["triangle"], bad=files["bad"]) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and fragment in err


def test_size_guard_is_reported(tmp_path, capsys):
    p = tmp_path / "big.g"
    p.write_text("".join(f"e x{k} x{k + 1}\n" for k in range(31)))
    code, _, err = run(capsys, "complex", str(p), "--kind", "multipath")
    assert code == 2 and "size guard" in err and "30" in err


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["complex"])
    assert exc.value.code == 2
