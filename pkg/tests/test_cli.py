import io
import json

import pytest
from jsonschema import validate

from qal.cli import run
from tests.test_quad_algebra import NON_KOSZUL

try:
    from importlib.resources import files
    SCHEMA = json.loads(files("qal").joinpath("report.schema.json").read_text())
except Exception:  # pragma: no cover
    import os
    here = os.path.join(os.path.dirname(__file__), "..", "src", "qal")
    SCHEMA = json.load(open(os.path.join(here, "report.schema.json")))


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_lah_table_row():
    code, text = invoke("lah", "--n", "4")
    assert code == 0
    lines = text.splitlines()
    assert any(line.split() == ["4", "2", "36"] for line in lines)


def test_lah_json_schema():
    code, text = invoke("lah", "--n", "5", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    validate(doc, SCHEMA)
    assert {"n": 5, "k": 3, "lah": 120} in doc["rows"]


def test_stirling_csv():
    code, text = invoke("stirling", "--n", "4", "--format", "csv")
    assert code == 0
    assert text.splitlines()[0] == "n,k,stirling1,stirling2"
    assert "4,2,11,7" in text.splitlines()


def test_basis_empty_listing():
    code, text = invoke("basis", "chain-gangs", "--n", "3", "--degree", "3")
    assert code == 0
    assert text.strip().splitlines() == ["index  monomial"]


def test_basis_json_and_dot():
    code, text = invoke("basis", "updown", "--n", "3", "--degree", "1",
                        "--format", "json")
    doc = json.loads(text)
    validate(doc, SCHEMA)
    assert len(doc["rows"]) == 6
    code, text = invoke("basis", "down", "--n", "3", "--degree", "2",
                        "--emit-dot")
    assert code == 0
    assert text.count("digraph") == 1 and "2 -> 1;" in text


def test_reduce_prune():
    code, text = invoke("reduce", "prune", "1>2,1>3", "--format", "csv")
    assert code == 0
    rows = set(text.strip().splitlines()[1:])
    assert rows == {'1,"1>2,2>3"', '-1,"1>3,3>2"'}


def test_reduce_loop_is_empty():
    code, text = invoke("reduce", "prune", "1>2,2>3,3>1", "--format", "json")
    assert code == 0
    assert json.loads(text)["rows"] == []


def test_reduce_respects_input_order_parity():
    _, a = invoke("reduce", "lex", "1>3,2>3", "--format", "json")
    _, b = invoke("reduce", "lex", "2>3,1>3", "--format", "json")
    ra = {r["monomial"]: r["coeff"] for r in json.loads(a)["rows"]}
    rb = {r["monomial"]: r["coeff"] for r in json.loads(b)["rows"]}
    assert set(ra) == set(rb)
    assert all(ra[m] == str(-int(rb[m])) for m in ra)


def test_verify_pvh_json_schema_and_exit():
    code, text = invoke("verify", "pvh", "--family", "pvb", "--n", "4",
                        "--format", "json")
    assert code == 0
    doc = json.loads(text)
    validate(doc, SCHEMA)
    assert doc["verdict"] == "PASS"
    assert doc["degree2"] == {"relators": 36, "rank": 36, "pass": True}
    assert doc["degree3"]["kernel_dim"] == 24


def test_verify_euler_json_schema():
    code, text = invoke("verify", "euler", "--family", "pvb", "--n", "3",
                        "--max-degree", "4", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    validate(doc, SCHEMA)
    assert doc["pass"] is True


def test_failing_check_exits_one(tmp_path):
    pres = tmp_path / "nk.json"
    pres.write_text(json.dumps(NON_KOSZUL))
    code, text = invoke("verify", "euler", "--presentation", str(pres),
                        "--max-degree", "4", "--format", "json")
    assert code == 1
    doc = json.loads(text)
    validate(doc, SCHEMA)
    assert doc["pass"] is False


def test_presentation_file_degree2(tmp_path):
    pres = tmp_path / "pvb3.json"
    pres.write_text(json.dumps({"family": "pvb", "n": 3}))
    code, text = invoke("verify", "degree2", "--presentation", str(pres))
    assert code == 0 and "[PASS]" in text


def test_pvh_with_presentation_runs_degree2_only(tmp_path):
    pres = tmp_path / "pvb3.json"
    pres.write_text(json.dumps({"family": "pvb", "n": 3}))
    code, text = invoke("verify", "pvh", "--presentation", str(pres),
                        "--format", "json")
    assert code == 0
    doc = json.loads(text)
    validate(doc, SCHEMA)
    assert doc["check"] == "pvh-degree2"


def test_usage_error_exit_two():
    with pytest.raises(SystemExit) as exc:
        run(["basis", "nonsense", "--n", "3", "--degree", "1"])
    assert exc.value.code == 2
    assert run(["verify", "psi"]) == 2          # missing --n
    assert run(["verify", "coproduct", "--n", "3"]) == 2


def test_budget_exit_two():
    assert run(["hilbert", "--family", "pvb", "--n", "4",
                "--max-degree", "4", "--budget", "100"]) == 2


def test_output_deterministic():
    a = invoke("verify", "confluence", "--n", "4", "--trials", "25",
               "--seed", "5", "--format", "json")
    b = invoke("verify", "confluence", "--n", "4", "--trials", "25",
               "--seed", "5", "--format", "json")
    assert a == b
    a = invoke("hilbert", "--family", "pvb", "--n", "3", "--max-degree", "3",
               "--format", "json")
    b = invoke("hilbert", "--family", "pvb", "--n", "3", "--max-degree", "3",
               "--format", "json")
    assert a == b


def test_hilbert_table():
    code, text = invoke("hilbert", "--family", "pvb", "--n", "3",
                        "--max-degree", "2")
    assert code == 0
    assert any(line.split() == ["2", "30", "6"] for line in text.splitlines())
