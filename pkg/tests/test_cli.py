"""End-to-end command line checks through main(argv)."""

import json
from fractions import Fraction

import pytest

from bsmg.cli import main
from bsmg.groupoid.core import FiniteMeasuredGroupoid, validate
from bsmg.groupoid.randomgen import partition_groupoid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def pair_file(tmp_path):
    G = partition_groupoid([Fraction(1, 2), Fraction(1, 2)], [(0, 1)])
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(G.to_doc()))
    return path


class TestWords:
    def test_modular_exact_output(self, capsys):
        code, out, err = run(capsys, "bs", "modular", "--p", "2", "--q", "3",
                             "--word", "t^2 a^5")
        assert code == 0
        assert out == '{"value":"9/4"}\n'

    def test_formats(self, capsys):
        base = ("bs", "modular", "--p", "2", "--q", "3", "--word", "t^2 a^5")
        _, out, _ = run(capsys, *base, "--format", "csv")
        assert out == "value\n9/4\n"
        _, out, _ = run(capsys, *base, "--format", "text")
        assert out == "value: 9/4\n"

    def test_normalize_detects_the_identity(self, capsys):
        doc = run_json(capsys, "bs", "normalize", "--p", "2", "--q", "3",
                       "--word", "t a^2 T a^-3")
        assert doc["trivial"] is True
        assert doc["t_length"] == 0

    def test_same_element(self, capsys):
        doc = run_json(capsys, "bs", "same", "--p", "2", "--q", "3",
                       "--word", "t a^2 T", "--other", "a^3")
        assert doc == {"same_element": True}

    def test_classify_iso(self, capsys):
        doc = run_json(capsys, "bs", "classify-iso", "--p", "2", "--q", "3",
                       "--r", "3", "--s", "2")
        assert doc == {"isomorphic": True}
        code, _, err = run(capsys, "bs", "classify-iso", "--p", "0", "--q",
                           "3", "--r", "2", "--s", "3")
        assert code == 2
        assert err.startswith("usage error:")


class TestTree:
    def test_distance_uses_canonical_vertices(self, capsys):
        doc = run_json(capsys, "tree", "distance", "--p", "2", "--q", "3",
                       "--u", "a^5", "--v", "t")
        assert doc == {"distance": 1}

    def test_stabilizer_index_is_directional(self, capsys):
        doc = run_json(capsys, "tree", "stabilizer-index", "--p", "2",
                       "--q", "3", "--u", "e", "--v", "t")
        assert doc == {"index": 3}
        doc = run_json(capsys, "tree", "stabilizer-index", "--p", "2",
                       "--q", "3", "--u", "t", "--v", "e")
        assert doc == {"index": 2}

    def test_geodesic(self, capsys):
        doc = run_json(capsys, "tree", "geodesic", "--p", "2", "--q", "3",
                       "--u", "T", "--v", "t")
        assert doc["length"] == 2
        assert len(doc["vertices"]) == 3

    def test_neighbors_outgoing_first(self, capsys):
        doc = run_json(capsys, "tree", "neighbors", "--p", "2", "--q", "3",
                       "--v", "e")
        assert [row["sign"] for row in doc["rows"]] == [1, 1, 1, -1, -1]


class TestGroupoid:
    def test_validate_clean(self, capsys, pair_file):
        doc = run_json(capsys, "groupoid", "validate", "--in", str(pair_file))
        assert doc == {"valid": True, "violations": []}

    def test_validate_names_the_broken_axiom(self, capsys, tmp_path):
        G = partition_groupoid([Fraction(1, 2), Fraction(1, 2)], [(0, 1)])
        doc = G.to_doc()
        doc["arrows"][2]["inverse"] = 2
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "groupoid", "validate", "--in", str(path))
        assert code == 1
        parsed = json.loads(out)
        assert parsed["valid"] is False
        assert any("inverse" in v for v in parsed["violations"])

    def test_index(self, capsys, pair_file):
        doc = run_json(capsys, "groupoid", "index", "--in", str(pair_file),
                       "--unit", "0", "--arrows", "2")
        assert doc == {"unit": 0, "subgroupoid_arrows": 4,
                       "index": 1, "local_index": "1"}
        doc = run_json(capsys, "groupoid", "index", "--in", str(pair_file),
                       "--unit", "0", "--arrows", "")
        # the local index conditions on the component of the subgroupoid,
        # so the trivial sub in one two-point class gives 2 * (1/2) = 1
        assert doc["index"] == 2 and doc["local_index"] == "1"
        code, _, err = run(capsys, "groupoid", "index", "--in",
                           str(pair_file), "--unit", "9", "--arrows", "")
        assert code == 2 and "out of range" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "groupoid", "validate", "--in", "no.json")
        assert code == 2
        assert err.startswith("usage error:")

    def test_random_round_trips_and_is_deterministic(self, capsys):
        argv = ("groupoid", "random", "--kind", "partition", "--units", "4",
                "--seed", "5")
        code, out1, _ = run(capsys, *argv)
        assert code == 0
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2
        G = FiniteMeasuredGroupoid.from_doc(json.loads(out1))
        assert validate(G) == []


class TestCocycle:
    def test_level_model_corollary(self, capsys):
        doc = run_json(capsys, "cocycle", "level-model", "--p", "2", "--q",
                       "3", "--k", "1", "--l", "0", "--verify-corollary")
        assert doc == {"p": 2, "q": 3, "k": 1, "l": 0, "floors": [2, 3],
                       "product": "3/2", "arrows_checked": 25}

    def test_flow_type(self, capsys):
        doc = run_json(capsys, "cocycle", "flow-type", "--loops", "3/2")
        assert doc == {"kind": "III_lambda", "lambda": "2/3"}
        doc = run_json(capsys, "cocycle", "flow-type", "--loops", "2,3")
        assert doc == {"kind": "III_1", "lambda": None}

    def test_scaled_product(self, capsys):
        doc = run_json(capsys, "cocycle", "scaled-product", "--ratio", "3/2",
                       "--n", "2")
        assert doc == {"kind": "III_lambda", "lambda": "4/9"}

    def test_modular_pair_on_a_file(self, capsys, pair_file):
        doc = run_json(capsys, "cocycle", "modular-pair", "--in",
                       str(pair_file), "--sub", "2")
        assert doc == {"subgroupoid_arrows": 4,
                       "d": ["1"] * 4, "k": ["1"] * 4}


class TestProfinite:
    def test_verify_counts(self, capsys):
        doc = run_json(capsys, "profinite", "verify", "--p", "2", "--q", "3",
                       "--K", "1", "--L", "1")
        assert doc["sigma_kernel"] == 24
        assert doc["sigma_roundtrip"] == 24
        assert doc["sigma_composition"] == 20
        assert doc["fix_implies_u0"] == 6
        assert doc["u0_implies_fix"] == 1

    def test_sigma_and_inverse(self, capsys):
        doc = run_json(capsys, "profinite", "sigma", "--p", "2", "--q", "3",
                       "--value", "2@(2,1)", "--k", "1", "--l", "0")
        # sigma keeps the operand's level; only the inverse consumes budget
        assert doc == {"input": "2@(2,1)", "result": "4@(2,1)", "modulus": 12}
        doc = run_json(capsys, "profinite", "sigma", "--p", "2", "--q", "3",
                       "--value", "4@(1,1)", "--k", "1", "--l", "0",
                       "--inverse")
        assert doc == {"input": "4@(1,1)", "result": "2@(0,1)", "modulus": 3}

    def test_budget_is_a_verification_failure(self, capsys):
        code, _, err = run(capsys, "profinite", "sigma", "--p", "2", "--q",
                           "3", "--value", "2@(2,1)", "--k", "3", "--l", "0")
        assert code == 1
        assert err.startswith("verification failure:")

    def test_unit_report(self, capsys):
        doc = run_json(capsys, "profinite", "unit", "--p", "2", "--q", "3",
                       "--value", "5@(1,1)", "--k", "1", "--l", "1")
        assert doc == {"value": "5@(1,1)", "is_unit": True,
                       "u0": False, "fixes_level": True}
        doc = run_json(capsys, "profinite", "unit", "--p", "2", "--q", "3",
                       "--value", "3@(1,1)")
        assert doc == {"value": "3@(1,1)", "is_unit": False}
        code, _, err = run(capsys, "profinite", "unit", "--p", "2", "--q",
                           "3", "--value", "nonsense")
        assert code == 2


class TestDynamics:
    def test_beta(self, capsys):
        doc = run_json(capsys, "dynamics", "beta", "--theta", "3/2",
                       "--x", "0", "--n", "1")
        assert doc == {"value": 1}
        doc = run_json(capsys, "dynamics", "beta", "--theta", "golden",
                       "--x", "0", "--n", "1")
        assert doc == {"value": 1}
        code, _, err = run(capsys, "dynamics", "beta", "--theta", "0",
                           "--x", "0", "--n", "1")
        assert code == 2

    def test_rotation(self, capsys):
        doc = run_json(capsys, "dynamics", "rotation", "--theta", "3/2",
                       "--N", "6")
        assert doc["kind"] == "rational" and doc["period"] == 12
        code, _, _ = run(capsys, "dynamics", "rotation", "--theta", "golden")
        assert code == 2

    def test_components_csv(self, capsys):
        code, out, _ = run(capsys, "dynamics", "components", "--c", "1",
                           "--n", "12", "--r", "2", "--s", "3",
                           "--kmax", "1", "--lmax", "1", "--format", "csv")
        assert code == 0
        assert out == "count,k,l\n1,0,0\n3,0,1\n2,1,0\n6,1,1\n"

    def test_words(self, capsys):
        doc = run_json(capsys, "dynamics", "words", "--p", "2", "--q", "3",
                       "--count", "3")
        assert len(doc["words"]) == 3
        assert all(isinstance(w, str) and w for w in doc["words"])

    def test_cesaro_small_horizon(self, capsys):
        doc = run_json(capsys, "dynamics", "cesaro", "--theta", "3/2",
                       "--horizon", "40")
        assert doc["horizon"] == 40
        assert doc["gap"] >= 0


class TestConfigAndSuite:
    def test_config_splice_and_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "m.cfg"
        cfg.write_text("p=2\nq=3\n# comment\nword=t^2 a^5\n")
        code, out, _ = run(capsys, "bs", "modular", "--config", str(cfg))
        assert code == 0
        assert out == '{"value":"9/4"}\n'
        code, out, _ = run(capsys, "bs", "modular", "--config", str(cfg),
                           "--word", "a")
        assert out == '{"value":"1"}\n'

    def test_config_unknown_key_is_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("p=2\nq=3\nword=a\nbogus=1\n")
        with pytest.raises(SystemExit) as exc:
            main(["bs", "modular", "--config", str(cfg)])
        assert exc.value.code == 2

    def test_config_file_errors(self, capsys, tmp_path):
        code, _, err = run(capsys, "bs", "modular", "--config", "gone.cfg")
        assert code == 2 and err.startswith("usage error:")
        cfg = tmp_path / "noeq.cfg"
        cfg.write_text("just a line\n")
        code, _, err = run(capsys, "bs", "modular", "--config", str(cfg))
        assert code == 2 and "key=value" in err

    def test_suite_lemmas_reproducible(self, capsys):
        argv = ("suite", "lemmas", "--cases", "1")
        code, out1, _ = run(capsys, *argv)
        assert code == 0
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2
        lines = out1.strip().splitlines()
        assert sum(line.startswith("PASS") for line in lines) == 9
        summary = json.loads(lines[-1])
        assert summary["passed"] == 9 and summary["failed"] == 0
