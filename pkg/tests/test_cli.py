import io
import json

import pytest

from app.cli import run
from app.models.schemas import SheafPayload
from app.models.sheaf import CellSheaf
from app.services.generator_service import generator_service
from app.services.sheaf_service import sheaf_service

from tests.conftest import CONIC


def generate(capsys, *argv):
    assert run(["generate", *argv]) == 0
    return capsys.readouterr().out


@pytest.fixture
def line_json(capsys):
    return generate(capsys, "bergman", "--uniform", "2", "3")


def test_generate_cube(capsys):
    payload = json.loads(generate(capsys, "cube", "3"))
    assert payload["ambient_dim"] == 3
    assert len(payload["rays"]) == 8
    assert payload["maximal_cells"] == [[0, 1, 2, 3, 4, 5, 6, 7]]


def test_betti_all_p_from_stdin(capsys, monkeypatch, line_json):
    monkeypatch.setattr("sys.stdin", io.StringIO(line_json))
    assert run(["betti", "--sheaf", "f", "--all-p", "--variant", "usual"]) == 0
    assert capsys.readouterr().out == "1 0\n2 0\n"


def test_betti_from_file_as_json(capsys, tmp_path, line_json):
    path = tmp_path / "line.json"
    path.write_text(line_json)
    assert run(["betti", "--sheaf", "f", "--all-p", "--variant", "bm", "-i", str(path), "--json"]) == 0
    table = json.loads(capsys.readouterr().out)
    assert table["rows"] == [[0, 2], [0, 1]]
    assert table["p_values"] == [0, 1]


def test_cube_w_table(capsys, tmp_path):
    path = tmp_path / "cube.json"
    path.write_text(generate(capsys, "cube", "3"))
    assert run(["betti", "--sheaf", "w", "--all-p", "--variant", "cochain", "--input", str(path)]) == 0
    rows = [[int(x) for x in line.split()] for line in capsys.readouterr().out.splitlines()]
    assert [rows[p][p] for p in range(4)] == [1, 3, 3, 1]


def test_hypersurface_info(capsys, tmp_path):
    path = tmp_path / "conic.json"
    path.write_text(generate(capsys, "hypersurface", CONIC))
    assert run(["info", "-i", str(path)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["f_vector"] == [2, 5]
    assert info["bounded_f_vector"] == [2, 1]
    assert info["far_faces"] == 4


def test_print_complex(capsys, tmp_path):
    path = tmp_path / "cube.json"
    path.write_text(generate(capsys, "cube", "3"))
    assert run(["print-complex", "--sheaf", "constant", "--variant", "cochain", "-i", str(path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "k^0 --> k^8 --> k^12 --> k^6 --> k^1 --> k^0"


def test_validate(capsys, tmp_path, line_json):
    path = tmp_path / "line.json"
    path.write_text(line_json)
    assert run(["validate", "-i", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True
    assert report["sheaves_checked"] == 6


def test_parse_error_exits_with_one(capsys):
    assert run(["generate", "hypersurface", "max(0,x"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_incompatible_sheaf_and_variant(capsys, tmp_path, line_json):
    path = tmp_path / "line.json"
    path.write_text(line_json)
    assert run(["betti", "--sheaf", "w", "--variant", "usual", "-i", str(path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_constant_sheaf_has_no_p_table(capsys, tmp_path, line_json):
    path = tmp_path / "line.json"
    path.write_text(line_json)
    assert run(["betti", "--sheaf", "constant", "--all-p", "--variant", "usual", "-i", str(path)]) == 1


def test_bad_input_json(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("not json"))
    assert run(["info"]) == 1
    assert "cannot read JSON" in capsys.readouterr().err


def test_disconnected_matroid_file(capsys, tmp_path):
    path = tmp_path / "matroid.json"
    path.write_text(json.dumps({"n": 3, "bases": [[0, 1, 2]]}))
    assert run(["generate", "bergman", "--matroid", str(path)]) == 1
    assert "components" in capsys.readouterr().err


def test_unknown_graph_family(capsys):
    assert run(["generate", "bergman", "--graph", "cycle:4"]) == 1


def test_negative_wedge_degree_is_a_usage_error(capsys, line_json, tmp_path):
    path = tmp_path / "line.json"
    path.write_text(line_json)
    with pytest.raises(SystemExit) as exc:
        run(["betti", "--sheaf", "f", "--p", "-1", "--variant", "usual", "-i", str(path)])
    assert exc.value.code == 1
    assert "non-negative" in capsys.readouterr().err


@pytest.mark.parametrize("entry", ["abc", "1/0"])
def test_malformed_rational_exits_with_one(capsys, tmp_path, entry):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"ambient_dim": 1, "rays": [["1", entry]], "maximal_cells": [[0]]}))
    assert run(["info", "-i", str(path)]) == 1
    assert "not a rational" in capsys.readouterr().err


def write_cube_and_sheaf(capsys, tmp_path, sheaf):
    cube = tmp_path / "square.json"
    cube.write_text(generate(capsys, "cube", "2"))
    sheaf_path = tmp_path / "sheaf.json"
    sheaf_path.write_text(SheafPayload.from_sheaf(sheaf).model_dump_json())
    return str(cube), str(sheaf_path)


def test_betti_of_a_sheaf_file(capsys, tmp_path):
    square = generator_service.cube_complex(2)
    cube, sheaf = write_cube_and_sheaf(capsys, tmp_path, sheaf_service.constant_cosheaf(square))
    assert run(["betti", "--sheaf-file", sheaf, "--variant", "usual", "-i", cube]) == 0
    assert capsys.readouterr().out == "1 0 0\n"


def test_sheaf_file_that_does_not_fit(capsys, tmp_path):
    square = generator_service.cube_complex(2)
    s = sheaf_service.constant_cosheaf(square)
    blocks = dict(s.blocks)
    pair = next(iter(sorted(blocks)))
    blocks[pair] = blocks[pair].scale(2)
    broken = CellSheaf(s.direction, s.ambient_wedge_dim, dict(s.bases), blocks)
    cube, sheaf = write_cube_and_sheaf(capsys, tmp_path, broken)
    assert run(["betti", "--sheaf-file", sheaf, "--variant", "usual", "-i", cube]) == 1
    assert "does not fit" in capsys.readouterr().err


def test_sheaf_and_sheaf_file_are_exclusive(capsys, tmp_path, line_json):
    path = tmp_path / "line.json"
    path.write_text(line_json)
    with pytest.raises(SystemExit) as exc:
        run(["betti", "--sheaf", "f", "--sheaf-file", str(path), "--variant", "usual", "-i", str(path)])
    assert exc.value.code == 1


def test_chain_export_feeds_homology(capsys, monkeypatch, tmp_path, line_json):
    path = tmp_path / "line.json"
    path.write_text(line_json)
    assert run(["chain", "--sheaf", "f", "--p", "1", "--variant", "bm", "-i", str(path)]) == 0
    exported = capsys.readouterr().out
    assert json.loads(exported)["direction"] == "chain"
    monkeypatch.setattr("sys.stdin", io.StringIO(exported))
    assert run(["homology"]) == 0
    assert capsys.readouterr().out == "0 1\n"
    chain_path = tmp_path / "chain.json"
    chain_path.write_text(exported)
    assert run(["homology", "--print", "-i", str(chain_path)]) == 0
    assert "-->" in capsys.readouterr().out
    assert run(["homology", "--json", "-i", str(chain_path)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["betti"] == [0, 1]
    assert result["euler_characteristic"] == -1


def test_homology_rejects_bad_entries(capsys, tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({"direction": "chain", "differentials": [[["abc"]], []], "dims": [1, 1]}))
    assert run(["homology", "-i", str(path)]) == 1


def test_output_is_byte_identical_across_runs(capsys, tmp_path):
    first = generate(capsys, "hypersurface", CONIC)
    assert generate(capsys, "hypersurface", CONIC) == first
    path = tmp_path / "conic.json"
    path.write_text(first)
    outputs = []
    for _ in range(2):
        assert run(["betti", "--sheaf", "f", "--all-p", "--variant", "bm", "-i", str(path), "--json"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
