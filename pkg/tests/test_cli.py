import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import EXAMPLES
from subsig.cli import dumps, main
from subsig.specfile import SpecError, decode_vector, load_spec, parse_rational


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, data, name="spec.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


SP3 = {
    "spec_version": 1,
    "n": 3,
    "structure": {"formula": "(x1 | x2) & x3"},
    "lifetime": {"kind": "exchangeable"},
}


def test_subsig_example(tmp_path, capsys):
    code, out, _ = run(capsys, "subsig", write(tmp_path, SP3), "--set", "1,3")
    assert code == 0
    assert json.loads(out) == {"values": ["2/3", "1/6"]}


def test_subsig_normalized(capsys):
    code, out, _ = run(capsys, "subsig", EXAMPLES / "series_parallel_3.json", "--set", "3,1", "--normalized")
    assert code == 0 and json.loads(out)["values"] == ["4/5", "1/5"]


def test_domination_example(capsys):
    code, out, _ = run(capsys, "domination", EXAMPLES / "bridge_module_4.json")
    assert code == 0
    assert json.loads(out) == {"{1,2}": 1, "{1,3,4}": 1, "{1,2,3,4}": -1}
    assert list(json.loads(out)) == ["{1,2}", "{1,3,4}", "{1,2,3,4}"]


def test_signature_and_bp(capsys):
    code, out, _ = run(capsys, "signature", EXAMPLES / "two_of_three.json")
    assert json.loads(out) == {"signature": ["0", "1", "0"], "route_agreement": True}
    code, out, _ = run(capsys, "bp", EXAMPLES / "series_parallel_3.json")
    assert json.loads(out)["values"] == ["1/6", "1/6", "2/3"]


def test_module_command(capsys):
    code, out, _ = run(capsys, "module", EXAMPLES / "bridge_module_4.json", "--module", "0")
    doc = json.loads(out)
    assert code == 0
    assert doc["attribution"] == "1/6"
    assert doc["module_signature"] == ["1", "0"]
    assert doc["factorization"]["holds"] is True
    assert doc["via_module"] == ["1/6", "0"]


def test_module_witness(tmp_path, capsys):
    spec = json.loads((EXAMPLES / "bridge_module_4.json").read_text())
    spec["lifetime"] = {
        "kind": "orderings",
        "entries": [{"order": [3, 1, 2, 4], "p": "1/2"}, {"order": [4, 3, 1, 2], "p": "1/2"}],
    }
    code, out, _ = run(capsys, "module", write(tmp_path, spec))
    doc = json.loads(out)
    assert code == 0
    assert doc["factorization"]["holds"] is False
    assert set(doc["factorization"]["witness"]) >= {"j", "A", "B", "ratio", "ratio2"}
    assert doc["via_module"] is None


def test_mc_command(capsys):
    args = ("mc", EXAMPLES / "series_parallel_3.json", "--target", "subsig", "--set", "1,3",
            "--samples", "40000", "--seed", "9")
    code, first, _ = run(capsys, *args)
    assert code == 0
    doc = json.loads(first)
    assert [e["exact"] for e in doc["estimates"]] == ["2/3", "1/6"]
    assert all(e["within_4se"] for e in doc["estimates"])
    _, second, _ = run(capsys, "--threads", "3", *args)
    assert first == second


def test_mc_exponential_bp(capsys):
    code, out, _ = run(capsys, "mc", EXAMPLES / "two_of_three.json", "--target", "bp", "--samples", "30000")
    doc = json.loads(out)
    assert code == 0 and [e["exact"] for e in doc["estimates"]] == ["1/4", "2/5", "7/20"]


def test_mc_float_format():
    text = dumps({"x": __import__("subsig.cli", fromlist=["_Float17"])._Float17(0.1)})
    assert json.loads(text)["x"] == 0.1
    assert "0.10000000000000001" in text


def test_exact_output_byte_identical(capsys):
    outs = {run(capsys, "module", EXAMPLES / "bridge_module_4.json")[1] for _ in range(3)}
    assert len(outs) == 1


class TestExitCodes:
    def test_empty_set_is_usage(self, tmp_path, capsys):
        code, out, err = run(capsys, "subsig", write(tmp_path, SP3), "--set", "")
        assert code == 2 and out == "" and "--set" in err

    def test_bad_set(self, tmp_path, capsys):
        assert run(capsys, "subsig", write(tmp_path, SP3), "--set", "1,9")[0] == 2
        assert run(capsys, "subsig", write(tmp_path, SP3), "--set", "a")[0] == 2

    def test_missing_argument(self, capsys):
        assert run(capsys, "subsig")[0] == 2

    def test_unreadable_file(self, tmp_path, capsys):
        assert run(capsys, "bp", tmp_path / "absent.json")[0] == 2

    def test_schema_violation(self, tmp_path, capsys):
        bad = dict(SP3, extra=1)
        code, _, err = run(capsys, "validate", write(tmp_path, bad))
        assert code == 1 and "schema" in err
        assert run(capsys, "validate", write(tmp_path, dict(SP3, spec_version=2)))[0] == 1
        assert run(capsys, "validate", write(tmp_path, "{not json"))[0] == 1

    def test_structure_inputs(self, tmp_path, capsys):
        spec = dict(SP3, structure={"path_sets": [[1]]})
        assert run(capsys, "validate", write(tmp_path, spec))[0] == 0
        bad_formula = dict(SP3, structure={"formula": "x1 & (x2"})
        assert run(capsys, "validate", write(tmp_path, bad_formula))[0] == 1

    def test_bad_module(self, tmp_path, capsys):
        spec = json.loads((EXAMPLES / "bridge_module_4.json").read_text())
        spec["modules"] = [{"set": [2, 3], "chi": "x2 & x3"}]
        code, _, err = run(capsys, "validate", write(tmp_path, spec))
        assert code == 1 and "module" in err

    def test_bad_distribution(self, tmp_path, capsys):
        spec = dict(SP3, lifetime={"kind": "orderings", "entries": [{"order": [1, 2, 3], "p": "1/2"}]})
        assert run(capsys, "bp", write(tmp_path, spec))[0] == 1

    def test_mc_without_continuous_model(self, tmp_path, capsys):
        code, _, err = run(capsys, "mc", write(tmp_path, SP3), "--set", "1")
        assert code == 3 and "continuous" in err

    def test_enumeration_cap(self, tmp_path, capsys):
        spec = {
            "spec_version": 1, "n": 11,
            "structure": {"formula": "x1 & x11"},
            "lifetime": {"kind": "exponential", "rates": ["1"] * 11},
        }
        assert run(capsys, "bp", write(tmp_path, spec))[0] == 3

    def test_normalization_undefined(self, tmp_path, capsys):
        spec = dict(SP3, structure={"formula": "x1 & x2"})
        assert run(capsys, "subsig", write(tmp_path, spec), "--set", "3", "--normalized")[0] == 1


class TestSpecFile:
    @pytest.mark.parametrize("name", ["series_parallel_3.json", "bridge_module_4.json", "two_of_three.json"])
    def test_examples_round_trip(self, name):
        spec = load_spec(EXAMPLES / name)
        again = load_spec(json.loads(json.dumps(spec.to_json())))
        assert again.phi == spec.phi
        assert again.to_json() == spec.to_json()
        assert [d.module for d in again.modules] == [d.module for d in spec.modules]

    def test_rationals(self):
        assert parse_rational("2/3") == Fraction(2, 3)
        assert parse_rational("-4") == -4
        with pytest.raises(SpecError):
            parse_rational("0.5")

    def test_exact_output_round_trip(self, capsys):
        _, out, _ = run(capsys, "subsig", EXAMPLES / "series_parallel_3.json", "--set", "1,3")
        values = decode_vector(json.loads(out)["values"])
        assert dumps({"values": list(values)}) + "\n" == out

    def test_path_sets_out_of_range(self):
        with pytest.raises(SpecError):
            load_spec(dict(SP3, structure={"path_sets": [[1, 4]]}))

    def test_rates_length(self):
        with pytest.raises(SpecError):
            load_spec(dict(SP3, lifetime={"kind": "exponential", "rates": ["1"]}))


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "subsig", "subsig", str(EXAMPLES / "series_parallel_3.json"), "--set", "1,3"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"values": ["2/3", "1/6"]}
