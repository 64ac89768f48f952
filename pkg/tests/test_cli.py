import json

import pytest

from cwcount.cli import main
from cwcount.expression import evaluate, gen_family, parse_document


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def gen(tmp_path, capsys):
    def make(family, *params, seed=0):
        path = tmp_path / f"{family}-{'-'.join(map(str, params))}-{seed}.cwe"
        assert run(capsys, "gen", family, *params, "--out", path, "--seed", seed)[0] == 0
        return path
    return make


def test_count_paths_k2(gen, capsys):
    code, out, _ = run(capsys, "count", "--object", "paths", "--input", gen("clique", 2))
    report = json.loads(out)
    assert code == 0
    assert set(report) == {"object", "n", "width", "counts", "elapsed_ms", "flags"}
    assert report["object"] == "paths" and report["counts"] == "1"
    assert report["n"] == 2 and report["width"] == 2


def test_count_maximal_by_size(gen, capsys):
    _, out, _ = run(capsys, "count", "--object", "maximal-matchings", "--by-size", "--input", gen("path", 4))
    assert json.loads(out)["counts"] == {"1": "1", "2": "1"}


def test_count_perfect_clique6(gen, capsys):
    _, out, _ = run(capsys, "count", "--object", "perfect-matchings", "--input", gen("clique", 6), "--json")
    assert json.loads(out)["counts"] == "15"


@pytest.mark.parametrize("obj, expected", [
    ("matchings", "5"),
    ("min-maximal-matchings", {"size": "1", "count": "1"}),
    ("matching-covers", None),
    ("path-matchings", {"total": "8", "nonempty": "7"}),
    ("paths", "6"),
])
def test_count_objects_on_path4(gen, capsys, obj, expected):
    _, out, _ = run(capsys, "count", "--object", obj, "--input", gen("path", 4))
    counts = json.loads(out)["counts"]
    if expected is not None:
        assert counts == expected


def test_count_paths_by_length(gen, capsys):
    _, out, _ = run(capsys, "count", "--object", "paths", "--by-size", "--input", gen("path", 5))
    assert json.loads(out)["counts"] == {"1": "4", "2": "3", "3": "2", "4": "1"}


def test_big_counts_are_exact_strings(gen, capsys):
    _, out, _ = run(capsys, "count", "--object", "perfect-matchings", "--input", gen("clique", 40))
    value = json.loads(out)["counts"]
    expected = 1
    for k in range(1, 40, 2):
        expected *= k
    assert isinstance(value, str) and int(value) == expected


def test_redundant_input_rejected_or_cleaned(tmp_path, capsys):
    path = tmp_path / "redundant.cwe"
    path.write_text("(e 1 2 (e 1 2 (u (v 1) (v 2))))")
    code, _, err = run(capsys, "count", "--object", "paths", "--input", path)
    assert code == 2 and "not irredundant" in err
    code, out, _ = run(capsys, "count", "--object", "paths", "--input", path, "--allow-null-eta")
    assert code == 0 and json.loads(out)["counts"] == "1"


def test_partial_redundancy_is_an_error(tmp_path, capsys):
    path = tmp_path / "partial.cwe"
    path.write_text("(e 1 2 (u (e 1 2 (u (v 1) (v 2))) (v 2)))")
    code, _, err = run(capsys, "count", "--object", "paths", "--input", path, "--allow-null-eta")
    assert code == 2 and "1 of 2 cross pairs" in err


def test_parse_error_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.cwe"
    path.write_text("(u (v 1)\n   (v 0))")
    code, _, err = run(capsys, "count", "--object", "paths", "--input", path)
    assert code == 2 and "bad.cwe:2:7" in err


def test_check_random(capsys):
    code, out, _ = run(capsys, "check", "--random", 6, 3, 40)
    assert code == 0 and out.startswith("PASS 40 case(s)")


def test_check_jobs(capsys):
    code, out, _ = run(capsys, "check", "--random", 5, 2, 12, "--jobs", 2, "--object", "paths")
    assert code == 0 and "PASS 12" in out


def test_check_single_vertex(tmp_path, capsys):
    path = tmp_path / "one.cwe"
    path.write_text("(v 1)\n")
    assert run(capsys, "check", "--input", path)[0] == 0


def test_check_catches_literal_recurrence(gen, capsys):
    code, out, _ = run(capsys, "check", "--input", gen("clique", 2), "--no-coverage-filter")
    assert code == 1
    assert "object=matching-covers key=((0, 0), (0, 0))" in out


def test_check_oracle_cap(gen, capsys):
    code, _, err = run(capsys, "check", "--input", gen("clique", 12))
    assert code == 2 and "CWCOUNT_ORACLE_MAX" in err


def test_gen_outputs(gen):
    g = evaluate(parse_document(gen("path", 4).read_text())[0])
    assert (g.n, len(g.edges)) == (4, 3)
    g = evaluate(parse_document(gen("clique", 5).read_text())[0])
    assert len(g.edges) == 10


def test_gen_deterministic(gen, tmp_path, capsys):
    first = gen("random", 8, 3, seed=7).read_bytes()
    other = tmp_path / "again.cwe"
    run(capsys, "gen", "random", 8, 3, "--seed", 7, "--out", other)
    assert other.read_bytes() == first
    expr, width = parse_document(first.decode())
    assert width == 3 and expr == gen_family("random", 8, 3, seed=7)


def test_gen_bad_params(capsys):
    code, _, err = run(capsys, "gen", "path", 0)
    assert code == 2 and "sizes" in err


def test_gen_dot(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    run(capsys, "gen", "clique", 3, "--dot", dot)
    text = dot.read_text()
    assert text.startswith("graph G {") and text.count("--") == 3


def test_bench_table_and_figure(tmp_path, capsys):
    fig = tmp_path / "bench.png"
    code, out, _ = run(capsys, "bench", "--object", "pm", "--family", "path", "--n", "4..9", "--figure", fig)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].split("\t") == ["n", "vertices", "edges", "width", "states", "elapsed_ms", "count"]
    rows = [line.split("\t") for line in lines[1:]]
    assert [int(r[0]) for r in rows] == list(range(4, 10))
    # every edge subset of a path is a linear forest
    assert [int(r[-1]) for r in rows] == [2 ** (n - 1) for n in range(4, 10)]
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_bench_mc_cograph(capsys):
    code, out, _ = run(capsys, "bench", "--object", "mc", "--family", "cograph", "--n", "8..12")
    assert code == 0 and len(out.strip().splitlines()) == 6


def test_bench_single(capsys):
    code, out, _ = run(capsys, "bench", "--object", "matchings", "--family", "clique", "--n", "1..1")
    assert code == 0 and out.strip().splitlines()[1].split("\t")[-1] == "1"


def test_check_random_all_objects(capsys):
    code, out, _ = run(capsys, "check", "--random", 8, 3, 200)
    assert code == 0 and out.startswith("PASS 200 case(s)")
