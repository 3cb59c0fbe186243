import json

import pytest

from localeforge.cli import main
from localeforge.frame import Frame, boolean, chain, find_isomorphism
from localeforge.poset import Poset


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_chain_and_boolean(capsys):
    code, out, _ = run(capsys, "gen", "chain", "3")
    assert code == 0
    assert find_isomorphism(Frame.from_json(json.loads(out)), chain(3)) is not None
    code, out, _ = run(capsys, "gen", "boolean", "2")
    assert find_isomorphism(Frame.from_json(json.loads(out)), boolean(2)) is not None


def test_gen_downsets_of_grid(capsys, write):
    grid = write("grid.json", Poset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).to_json())
    code, out, _ = run(capsys, "gen", "downsets-of", grid)
    assert code == 0
    assert Frame.from_json(json.loads(out)).n == 6


def test_gen_rejects_bad_params(capsys):
    assert run(capsys, "gen", "chain", "x")[0] == 2
    assert run(capsys, "gen", "chain", "0")[0] == 2
    code, _, err = run(capsys, "--max-downsets", "16", "gen", "boolean", "5")
    assert code == 2 and "downset_cap" in err


def test_frame_check_c3_fails(capsys, write):
    c3 = write("c3.json", chain(3).to_json())
    code, out, _ = run(capsys, "--format", "json", "frame", "check", c3)
    assert code == 1
    checks = json.loads(out)["checks"]
    assert checks["compact"]["pass"]
    for name in ("regular", "subfit", "hausdorff", "stone"):
        assert not checks[name]["pass"]


def test_frame_check_boolean_passes(capsys, write):
    sq = write("sq.json", boolean(2).to_json())
    code, out, _ = run(capsys, "frame", "check", sq)
    assert code == 0
    assert "regular" in out


def test_malformed_json(capsys, write):
    bad = write("bad.json", '{"n": 2,\n "leq": [[1, 0]')
    code, _, err = run(capsys, "frame", "check", bad)
    assert code == 2
    assert "line 2" in err and "column" in err


def test_invalid_structure_and_missing_file(capsys, write, tmp_path):
    m3 = [[i == j or i == 0 or j == 4 for j in range(5)] for i in range(5)]
    code, _, err = run(capsys, "frame", "check", write("m3.json", {"n": 5, "leq": m3}))
    assert code == 2
    assert run(capsys, "frame", "check", str(tmp_path / "nope.json"))[0] == 2


def test_cap_is_named(capsys, write):
    b4 = write("b4.json", boolean(4).to_json())
    code, _, err = run(capsys, "--nucleus-cap", "3", "--max-downsets", "8", "frame", "check", b4)
    assert code == 2
    assert "cap exceeded: downset_cap = 8" in err


def test_frame_nuclei(capsys, write):
    c3 = write("c3.json", chain(3).to_json())
    code, out, _ = run(capsys, "--format", "json", "frame", "nuclei", c3)
    assert code == 0
    assert json.loads(out)["count"] == 4
    code, out, _ = run(capsys, "frame", "nuclei", c3, "--dot")
    assert code == 0 and out.startswith("digraph")


def test_frame_hausdorff(capsys, write):
    assert run(capsys, "frame", "hausdorff", write("c2.json", chain(2).to_json()))[0] == 0
    code, out, _ = run(capsys, "frame", "hausdorff", write("c3.json", chain(3).to_json()))
    assert code == 1 and "witness" in out


def test_frame_coproduct(capsys, write, tmp_path):
    c3 = write("c3.json", chain(3).to_json())
    dest = tmp_path / "sum.json"
    code, out, _ = run(capsys, "frame", "coproduct", c3, c3, "--out", str(dest))
    assert code == 0 and "6" in out
    assert Frame.from_json(json.loads(dest.read_text())).n == 6


def test_map_check(capsys, write):
    up = write("up.json", {"source": chain(2).to_json(), "target": chain(3).to_json(), "table": [0, 2]})
    code, out, _ = run(capsys, "--format", "json", "map", "check", up)
    checks = json.loads(out)["checks"]
    assert checks["surjection"]["pass"] and not checks["injection"]["pass"]
    assert code == 1
    ident = write("id.json", {"source": chain(3).to_json(), "target": chain(3).to_json(), "table": [0, 1, 2]})
    assert run(capsys, "map", "check", ident)[0] == 0
    bad = write("bad.json", {"source": chain(3).to_json(), "target": chain(3).to_json(), "table": [0, 2, 1]})
    assert run(capsys, "map", "check", bad)[0] == 2


def test_pretopos_audit(capsys):
    code, out, _ = run(capsys, "pretopos", "audit", "--max-size", "2")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())


def test_functor_verify(capsys):
    code, out, _ = run(capsys, "functor", "verify", "--max-size", "3")
    assert code == 0 and "ALL PASS" in out
    code, out, _ = run(capsys, "functor", "verify", "--max-size", "2", "--json")
    assert code == 0 and json.loads(out)["pass"] is True
    assert run(capsys, "functor", "verify", "--max-size", "0")[0] == 2


def test_output_is_deterministic(capsys, write):
    c3 = write("c3.json", chain(3).to_json())
    for argv in (["--seed", "4", "functor", "verify", "--max-size", "2", "--json"],
                 ["--format", "json", "frame", "nuclei", c3],
                 ["gen", "boolean", "3"]):
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first


def test_parallel_verify_matches_serial(capsys):
    serial = run(capsys, "functor", "verify", "--max-size", "2", "--json")
    parallel = run(capsys, "--jobs", "2", "functor", "verify", "--max-size", "2", "--json")
    assert serial == parallel


def test_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("LOCALEFORGE_MAXCAP", "4")
    code, _, err = run(capsys, "gen", "boolean", "3")
    assert code == 2 and "downset_cap" in err
