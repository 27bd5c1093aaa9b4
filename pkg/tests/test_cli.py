import json

import pytest

from fourfold.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -------------------------------------------------------------------- ranks


def test_ranks_k3_numbers(capsys):
    code, out, _ = run(capsys, "ranks", "--b2", "22")
    assert code == 0
    assert "2   22" in out
    assert "3   252" in out
    assert "4   3520" in out


def test_ranks_rank_zero_lists_tail(capsys):
    code, out, _ = run(capsys, "ranks", "--b2", "0")
    assert code == 0
    assert "4   1" in out
    assert "7   1" in out
    assert "rank 0" in out


def test_ranks_engine_agreement_at_rank_three(capsys):
    code, out, _ = run(capsys, "ranks", "--b2", "3", "--engine", "--max-degree", "5")
    assert code == 0
    assert "MISMATCH" not in out
    assert "5   10        10        ok" in out


def test_ranks_json_round_trip(capsys):
    code, out, _ = run(capsys, "ranks", "--b2", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert out.strip() == json.dumps(doc, indent=2, sort_keys=True)
    assert doc["formula"] == {"2": 4, "3": 9, "4": 16}
    assert doc["finite_tail"] is False
    assert doc["engine"] is None


def test_ranks_requires_one_source(capsys):
    code, _, err = run(capsys, "ranks")
    assert code == 2
    assert "source" in err


def test_ranks_rejects_inconsistent_split(capsys):
    code, _, err = run(capsys, "ranks", "--b2", "3", "--split", "1,1")
    assert code == 2
    assert "split" in err


def test_ranks_guard_exceeded_prints_partial(capsys):
    code, out, err = run(capsys, "ranks", "--b2", "5", "--engine", "--guard", "10")
    assert code == 3
    assert "guard" in err
    assert "partial" in out


# -------------------------------------------------------------------- model


def test_model_rank_one(capsys):
    code, out, _ = run(capsys, "model", "--b2", "1")
    assert code == 0
    assert "x1 (degree 2)  d = 0" in out
    assert "v5_1 (degree 5)  d = x1^3" in out


def test_model_rank_two_signs_follow_split(capsys):
    code, out, _ = run(capsys, "model", "--b2", "2", "--split", "2,0")
    assert code == 0
    assert "x1^2 - x2^2" in out
    assert "x1*x2" in out
    code, out, _ = run(capsys, "model", "--b2", "2", "--split", "1,1")
    assert code == 0
    assert "x1^2 + x2^2" in out


def test_model_rank_zero_through_degree_seven(capsys):
    code, out, _ = run(capsys, "model", "--b2", "0", "--max-degree", "7")
    assert code == 0
    assert "u4_1 (degree 4)  d = 0" in out
    assert "v7_1 (degree 7)  d = u4_1^2" in out


def test_model_json_document(capsys):
    code, out, _ = run(capsys, "model", "--b2", "2", "--split", "1,1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert out.strip() == json.dumps(doc, indent=2, sort_keys=True)
    assert doc["meta"] == {
        "b2": 2,
        "b2plus": 1,
        "b2minus": 1,
        "sigma": 0,
        "max_degree": 5,
    }
    assert doc["ranks"] == {"2": 2, "3": 2, "4": 0, "5": 0}
    names = [g["name"] for g in doc["generators"]]
    assert names == ["x1", "x2", "v3_1", "v3_2"]
    v3_1 = doc["generators"][2]["differential"]
    assert v3_1 == [
        {"coeff": "1", "monomial": [["x1", 2]]},
        {"coeff": "1", "monomial": [["x2", 2]]},
    ]


# ----------------------------------------------------------------- classify


def test_classify_equivalent_pair(capsys):
    code, out, _ = run(capsys, "classify", "diag:1,-1", "hyperbolic")
    assert code == 0
    assert "EQUIVALENT" in out
    assert "connected sum (1, 1)" in out


def test_classify_distinguishes_signature(capsys):
    code, out, _ = run(capsys, "classify", "diag:1,1", "hyperbolic")
    assert code == 0
    assert "NOT equivalent" in out


def test_classify_e8_against_diagonal(capsys):
    code, out, _ = run(capsys, "classify", "e8", "diag:1,1,1,1,1,1,1,1")
    assert code == 0
    assert "EQUIVALENT" in out


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "k3", "sum:3,19", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["equivalent"] is True
    assert doc["forms"][0]["rank"] == 22
    assert doc["forms"][0]["sigma"] == -16


def test_classify_reads_form_files(tmp_path, capsys):
    path = tmp_path / "quadric.json"
    path.write_text(json.dumps({"name": "quadric", "matrix": [[0, 1], [1, 0]]}))
    code, out, _ = run(capsys, "classify", str(path), "diag:1,-1")
    assert code == 0
    assert "quadric" in out
    assert "EQUIVALENT" in out


def test_classify_rejects_float_entries(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"matrix": [[1.0]]}))
    code, _, err = run(capsys, "classify", str(path), "cp2")
    assert code == 2
    assert "integer" in err


def test_classify_rejects_asymmetric_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"matrix": [[0, 1], [2, 0]]}))
    code, _, err = run(capsys, "classify", str(path), "cp2")
    assert code == 2


def test_classify_rejects_non_unimodular(capsys):
    code, _, err = run(capsys, "classify", "diag:2", "cp2")
    assert code == 2
    assert "determinant" in err


# ----------------------------------------------------------------- examples


def test_examples_hypersurface(capsys):
    code, out, _ = run(capsys, "examples", "hypersurface", "3")
    assert code == 0
    assert "b2=7" in out
    assert "2   7" in out
    assert "3   27" in out
    assert "4   105" in out


def test_examples_complete_intersection(capsys):
    code, out, _ = run(capsys, "examples", "ci", "2,2")
    assert code == 0
    assert "b2=6" in out
    assert "3   20" in out  # 6*7/2 - 1
    assert "4   64" in out  # 6*32/3


def test_examples_k3(capsys):
    code, out, _ = run(capsys, "examples", "k3")
    assert code == 0
    assert "3   252" in out
    assert "4   3520" in out


def test_examples_connected_sum(capsys):
    code, out, _ = run(capsys, "examples", "connected-sum", "2,1")
    assert code == 0
    assert "b2=3" in out
    assert "5   10" in out


def test_examples_bad_parameters(capsys):
    code, _, err = run(capsys, "examples", "hypersurface", "zero")
    assert code == 2
    code, _, err = run(capsys, "examples", "ci")
    assert code == 2


# ------------------------------------------------------------------- verify


def test_verify_single_rank_all_splits(capsys):
    code, out, _ = run(
        capsys, "verify", "--b2", "3", "--max-degree", "5", "--all-splits"
    )
    assert code == 0
    assert out.count("[PASS]") == 5  # four splits plus the identity-of-tables line
    assert "all checks passed" in out


def test_verify_detects_injected_fault(capsys):
    code, out, _ = run(
        capsys, "verify", "--b2", "2", "--max-degree", "4", "--inject-fault"
    )
    assert code == 1
    assert "[FAIL]" in out
    assert "verification FAILED" in out


def test_verify_rank_zero(capsys):
    code, out, _ = run(capsys, "verify", "--b2", "0", "--max-degree", "7")
    assert code == 0
    assert "4:1" in out and "7:1" in out


def test_verify_default_range(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert out.count("[PASS]") == 7  # b2 = 0..6 at the default degree
    assert "all checks passed" in out


def test_output_is_deterministic_across_runs(capsys):
    first = run(capsys, "model", "--b2", "3", "--split", "2,1", "--format", "json")
    second = run(capsys, "model", "--b2", "3", "--split", "2,1", "--format", "json")
    assert first == second
    third = run(capsys, "ranks", "--b2", "6", "--engine")
    fourth = run(capsys, "ranks", "--b2", "6", "--engine")
    assert third == fourth
