import copy
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from bmetric.cli import run
from bmetric.example import build_example
from bmetric.manifold import AlgebraModel
from bmetric.spec_io import SpecError, load_spec, model_from_spec, model_to_spec
from bmetric.tensor import tensor_equal

DATA = Path(__file__).resolve().parent.parent / "data"
EX = DATA / "ex.json"
ABELIAN = DATA / "abelian.json"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    return code, json.loads(out) if out else None, err


def write_spec(tmp_path, data, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def same_model(a: AlgebraModel, b: AlgebraModel) -> bool:
    return a.params == b.params and all(
        tensor_equal(x, y) for x, y in ((a.c, b.c), (a.g, b.g), (a.phi, b.phi), (a.xi, b.xi), (a.eta, b.eta)))


# -- spec files --------------------------------------------------------


def test_shipped_spec_is_the_builtin_example():
    assert same_model(load_spec(EX), build_example())
    assert json.loads(EX.read_text()) == model_to_spec(build_example())


def test_spec_round_trip():
    spec = model_to_spec(build_example())
    assert model_to_spec(model_from_spec(json.loads(json.dumps(spec)))) == spec


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.update(dimension=4), "dimension"),
    (lambda d: d["metric"][0].__setitem__(1, "1"), "metric[1][2]"),
    (lambda d: d["metric"][0].__setitem__(0, "0.5"), "metric[1][1]"),
    (lambda d: d["phi"].pop(), "phi"),
    (lambda d: d["xi"].__setitem__(4, True), "xi[5]"),
    (lambda d: d["brackets"][0].__setitem__("k", 6), "brackets[1].k"),
    (lambda d: d["brackets"][0].__setitem__("value", "l1 +* 2"), "brackets[1].value"),
    (lambda d: d["brackets"][0].__setitem__("value", "q"), "brackets[1].value"),
    (lambda d: d["parameters"].append("l1"), "parameters"),
    (lambda d: d["brackets"].append(dict(d["brackets"][0], value="7")), "brackets[%d]"),
])
def test_spec_errors_name_the_field(mutate, field):
    data = copy.deepcopy(model_to_spec(build_example()))
    mutate(data)
    if "%d" in field:
        field = field % len(data["brackets"])
    with pytest.raises(SpecError) as info:
        model_from_spec(data)
    assert info.value.field == field


def test_parse_error_position_reaches_the_message():
    data = model_to_spec(build_example())
    data["brackets"][0]["value"] = "l1 +* 2"
    with pytest.raises(SpecError, match="position 4"):
        model_from_spec(data)


# -- exit codes --------------------------------------------------------


def test_validate_example():
    code, out, _ = call_json("validate", "--input", str(EX))
    assert code == 0 and out["ok"]
    assert {c["name"] for c in out["checks"]} >= {"metric_compatibility", "jacobi", "signature"}


def test_corrupted_metric_entry_exits_2_and_names_the_field(tmp_path):
    data = json.loads(EX.read_text())
    data["metric"][2][2] = "1"
    code, out, err = call_json("validate", "--input", write_spec(tmp_path, data))
    assert code == 2
    assert "metric[3][3]" in err
    assert out["ok"] is False


def test_corrupted_metric_symmetry_exits_2(tmp_path):
    data = json.loads(EX.read_text())
    data["metric"][0][3] = "1"
    code, _, err = call("validate", "--input", write_spec(tmp_path, data))
    assert code == 2 and "metric[1][4]" in err


def test_jacobi_failure_exits_2(tmp_path):
    data = json.loads(ABELIAN.read_text())
    data["brackets"] = [{"i": 1, "j": 2, "k": 1, "value": "1"}, {"i": 1, "j": 3, "k": 2, "value": "1"}]
    code, _, err = call("classify", "--input", write_spec(tmp_path, data))
    assert code == 2 and "brackets" in err and "jacobi" in err


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "--input", "/nonexistent/spec.json"],
    ["classify", "--input", str(EX), "--bind", "zz=1"],
    ["classify", "--input", str(EX), "--bind", "l1=0.5"],
    ["verify-example", "--bind", "l1"],
    ["no-such-command"],
])
def test_input_errors_exit_2(argv):
    code, _, err = call(*argv)
    assert code == 2 and err


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = call("validate", "--input", str(path))
    assert code == 2 and "<json>" in err


# -- commands ----------------------------------------------------------


def test_classify_example_is_f6():
    code, out, _ = call_json("classify", "--input", str(EX))
    assert code == 0
    cls = out["classification"]
    assert (cls["U"], cls["U1"], cls["U2"], cls["U3"], cls["sub_label"]) == (True, True, True, True, "F6")


def test_torsion_on_abelian_is_zero():
    code, out, _ = call_json("torsion", "--input", str(ABELIAN))
    assert code == 0
    assert out["T"] == []
    assert all(v == [] for v in out["forms"].values())
    assert all(v["verdict"] == "pass" for v in out["classes"].values())


def test_torsion_on_example_passes_its_identities():
    code, out, _ = call_json("torsion", "--input", str(EX))
    assert code == 0
    first = out["T"][0]
    assert first["index"] == [1, 5, 1] and first["value"] == "-l1"


def test_connection_commands():
    code, out, _ = call_json("connection", "--input", str(EX))
    assert code == 0 and out["connection"] == "phib"
    assert {c["name"] for c in out["checks"]} >= {"parallel_phi", "Q_skew", "U_form_agrees"}
    code, out, _ = call_json("connection", "--input", str(EX), "--connection", "lc")
    assert code == 0 and out["connection"] == "lc"


def test_curvature_reports_the_failing_r_xi_formula():
    code, out, _ = call_json("curvature", "--input", str(EX))
    assert code == 1
    verdicts = {c["name"]: c["verdict"] for c in out["checks"]}
    assert verdicts["R_prime_via_Q"] == "pass"
    assert verdicts["scalar_curvature_identity"] == "pass"
    assert verdicts["R_xi_formula"] == "fail"
    assert out["R_prime"] == [] and out["tau_prime"] == "0"


def test_curvature_lc_with_bindings():
    code, out, _ = call_json("curvature", "--input", str(EX), "--connection", "lc",
                             "--bind", "l1=1", "--bind", "l2=0", "--bind", "l3=0",
                             "--bind", "l4=0", "--bind", "m1=0", "--bind", "m3=0")
    assert code == 0
    assert {"index": [1, 5, 1, 5], "value": "1"} in out["R"]


def test_verify_example_is_deterministic_and_reports_parallel_torsion():
    code1, out1, _ = call("verify-example", "--format", "json")
    code2, out2, _ = call("verify-example", "--format", "json")
    assert out1 == out2
    assert code1 == code2 == 1
    report = json.loads(out1)
    failed = [c for c in report["checks"] if c["verdict"] == "fail"]
    assert [c["name"] for c in failed] == ["parallel_torsion"]
    assert failed[0]["witness"] == [5, 1, 5, 1]


def test_verify_example_with_seed_adds_random_checks():
    code, out, _ = call_json("verify-example", "--seed", "7")
    names = [c["name"] for c in out["checks"]]
    assert "random.flat_phib" in names and out["seed"] == 7
    assert code == 1


def test_verify_example_with_bindings_where_phib_vanishes():
    code, out, _ = call_json("verify-example", "--bind", "l2=1", "--bind", "m1=1",
                             "--bind", "l4=2", "--bind", "m3=2")
    assert code == 0 and out["ok"]
    assert out["bindings"] == {"l2": "1", "l4": "2", "m1": "1", "m3": "2"}


def test_text_format():
    code, out, _ = call("classify", "--input", str(EX))
    assert code == 0
    assert out.startswith("classify: ok")
    assert "sub_label: F6" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bmetric", "validate", "--input", str(ABELIAN)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "validate: ok" in proc.stdout
