import json

import pytest

from isotrivial.cli import main, surface_from_json, surface_to_json
from isotrivial.errors import SchemaError

QUASI = {
    "schema": 1,
    "p": 3,
    "group": [{"kind": "mu", "n": 3}],
    "gY": 0,
    "e_type": "ordinary",
    "orbits": [{"n": 3, "weight": [1]}] * 3,
    "x_hint": "rational_cuspidal",
    "hom_rank": 0,
}
ABELIAN = {"schema": 1, "p": 5, "group": [{"kind": "mu", "n": 5}], "gY": 1, "orbits": []}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_quasi_hyperelliptic_table(capsys):
    code, out, _ = run(capsys, "classify", json.dumps(QUASI))
    assert code == 0
    row = out.splitlines()[2].split("|")
    assert [c.strip() for c in row] == ["0", "Quasi-hyperelliptic", "Rational with a cusp", "0", "2", "2"]


def test_classify_abelian_json(capsys):
    code, out, _ = run(capsys, "classify", json.dumps(ABELIAN), "--format", "json")
    r = json.loads(out)
    assert code == 0
    assert (r["kappa"], r["betti"], r["q"]) == (0, [1, 4, 6, 4, 1], 2)


def test_classify_from_file_and_list(tmp_path, capsys):
    path = tmp_path / "in.json"
    path.write_text(json.dumps([QUASI, ABELIAN]))
    code, out, _ = run(capsys, "classify", str(path), "--format", "json")
    assert code == 0 and len(json.loads(out)) == 2


def test_output_is_deterministic(capsys):
    _, a, _ = run(capsys, "classify", json.dumps(QUASI), "--format", "json")
    _, b, _ = run(capsys, "classify", json.dumps(QUASI), "--format", "json")
    assert a == b


def test_malformed_json_exits_1(capsys):
    code, _, err = run(capsys, "classify", "{not json")
    assert code == 1 and "malformed" in err


def test_unknown_field_is_named(capsys):
    bad = dict(ABELIAN, genus=3)
    code, _, err = run(capsys, "classify", json.dumps(bad))
    assert code == 1 and "'genus'" in err


def test_wrong_schema_version(capsys):
    code, _, err = run(capsys, "classify", json.dumps(dict(ABELIAN, schema=2)))
    assert code == 1 and "schema" in err


def test_inconsistent_data_exits_2(capsys):
    one_fiber = dict(QUASI, orbits=[{"n": 3, "weight": [1]}], x_hint="unknown")
    code, _, err = run(capsys, "classify", json.dumps(one_fiber))
    assert code == 2 and "two multiple fibers" in err


def test_surface_json_roundtrip():
    d = surface_from_json(dict(QUASI, orbits=[{"n": 3, "weight": [1], "label": "a"}] * 3))
    assert surface_from_json(surface_to_json(d)) == d


def test_orbit_schema():
    with pytest.raises(SchemaError):
        surface_from_json(dict(QUASI, orbits=[{"n": 3, "weights": [1]}]))
    with pytest.raises(SchemaError):
        surface_from_json(dict(QUASI, orbits=[{"n": "3"}]))


@pytest.mark.parametrize("check", ["e2_law", "embed_ordinary", "embed_supersingular", "fixed_points", "calcoli"])
def test_verify_checks_pass(capsys, check):
    code, out, _ = run(capsys, "verify", check)
    assert code == 0 and out.startswith(f"PASS {check}")


def test_verify_prints_reduced_matrix(capsys):
    _, out, _ = run(capsys, "verify", "embed_supersingular")
    assert "[[1, t^2 + s^2], [t^2*s^2 + t + s, t^3 + t^2*s + t*s^2 + s^3 + 1]]" in out


def test_verify_fixed_points_small_scan(capsys):
    code, out, _ = run(capsys, "verify", "fixed_points", "--q-max", "2")
    assert code == 0 and "reduced confidence" in out


def test_verify_unknown_check(capsys):
    code, _, err = run(capsys, "verify", "nonsense")
    assert code == 1 and "unknown check" in err


def test_ramify_translation_preset(capsys):
    code, out, _ = run(capsys, "ramify", '{"p": 7, "preset": "translation"}', "--format", "json")
    r = json.loads(out)
    assert code == 0
    assert r["i_x"] == [2] * 6 and r["artin"] == 12 and r["deg_omega_X"] == -2


def test_ramify_series(capsys):
    code, out, _ = run(capsys, "ramify", '{"p": 5, "stab_order": 2, "group_order": 2, "series": [[0, 4]]}', "--format", "json")
    assert code == 0 and json.loads(out)["tame"] is True


def test_ramify_bad_preset(capsys):
    code, _, _ = run(capsys, "ramify", '{"p": 5, "preset": "spin"}')
    assert code == 1


def test_example_plane_then_classify(capsys):
    code, out, _ = run(capsys, "example", "plane", "--p", "5", "--r", "1", "--roots", "0,1,2,3,4")
    assert code == 0
    d = json.loads(out)
    assert len(d["orbits"]) == 5
    code, out, _ = run(capsys, "classify", out, "--format", "json")
    assert json.loads(out)["deg_omega_X"] == 10


def test_example_space(capsys):
    code, out, _ = run(capsys, "example", "space", "--p", "5", "--n", "1")
    d = json.loads(out)
    assert code == 0 and d["gY"] == 1 and len(d["orbits"]) == 5


def test_example_space_explicit_parameters(capsys):
    code, out, _ = run(capsys, "example", "space", "--p", "5", "--n", "1", "--a", "15,16,3,21")
    assert code == 0
    code, _, err = run(capsys, "example", "space", "--p", "5", "--n", "1", "--a", "2,3,5,6")
    assert code == 2 and "sum to zero" in err


def test_suite_with_corrupted_golden(tmp_path, capsys):
    from isotrivial.acceptance import GOLDEN_DIR

    for f in GOLDEN_DIR.iterdir():
        (tmp_path / f.name).write_text(f.read_text())
    (tmp_path / "classification_table.txt").write_text("kappa | S\n")
    code, out, _ = run(capsys, "suite", "--golden-dir", str(tmp_path))
    assert code == 1
    assert "FAIL criterion 2" in out and "+++ computed" in out
