"""
Tests for the cw3iso command line.
"""

import json

import pytest

from src.chlrr.decompose import DecomposeOutcome
from src.graphs.core import cycle_graph
from src.graphs.io import parse_edge_list, to_edge_list
from src.main import EXIT_DATAERR, EXIT_USAGE, build_parser, main
from src.models.reports import IsoResult
from src.oracle.brute import Witness
from tests.conftest import C5_EXPRESSION


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def c5_file(write, c5):
    return write("c5.txt", to_edge_list(c5))


@pytest.fixture
def rotated_c5_file(write, rotated_c5):
    return write("c5_rotated.txt", to_edge_list(rotated_c5.with_names([str(v) for v in range(5)])))


class TestParser:
    """Test cases for argument parsing."""

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_USAGE

    def test_missing_argument(self):
        with pytest.raises(SystemExit) as exc:
            main(["iso", "only-one.txt"])
        assert exc.value.code == EXIT_USAGE

    def test_bad_format(self, c5_file):
        with pytest.raises(SystemExit) as exc:
            main(["mdtree", c5_file, "--format", "dimacs"])
        assert exc.value.code == EXIT_USAGE

    def test_defaults(self):
        args = build_parser().parse_args(["iso", "a.txt", "b.txt"])
        assert args.format == "edgelist"
        assert not args.witness
        assert args.reduction is None


class TestIsoCommand:
    """Test cases for ``cw3iso iso``."""

    def test_isomorphic_with_witness(self, c5_file, rotated_c5_file, c5, rotated_c5, capsys):
        assert main(["iso", c5_file, rotated_c5_file, "--witness"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "ISOMORPHIC"
        pairs = [tuple(int(x) for x in line.split(" -> ")) for line in lines[1:]]
        assert [v for v, _ in pairs] == [0, 1, 2, 3, 4]
        assert Witness(tuple(pairs)).validate(c5, rotated_c5)

    def test_non_isomorphic(self, c5_file, write, p5, capsys):
        p5_file = write("p5.txt", to_edge_list(p5))
        assert main(["iso", c5_file, p5_file, "--witness"]) == 1
        assert capsys.readouterr().out.strip() == "NON-ISOMORPHIC"

    def test_json(self, c5_file, rotated_c5_file, capsys):
        assert main(["iso", c5_file, rotated_c5_file, "--witness", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "ISOMORPHIC"
        assert len(report["witness"]) == 5

    def test_pendant_reduction_flag(self, c5_file, rotated_c5_file, capsys):
        assert main(["iso", c5_file, rotated_c5_file, "--reduction", "pendant"]) == 0
        assert capsys.readouterr().out.strip() == "ISOMORPHIC"

    def test_colored_inputs(self, write, capsys):
        g = write("g.txt", "3 2\n0 1\n1 2\nc 0 5\n")
        h = write("h.txt", "3 2\n0 1\n1 2\nc 1 5\n")
        assert main(["iso", g, h]) == 1
        assert capsys.readouterr().out.strip() == "NON-ISOMORPHIC"

    def test_graph6_inputs(self, write, capsys):
        g = write("g.g6", "Bw\n")
        assert main(["iso", g, g, "--format", "graph6"]) == 0

    def test_clique_width_exceeded(self, c5_file, mocker, capsys):
        mocker.patch("src.main.iso_cw3", return_value=IsoResult.exceeded("clique-width > 3"))
        assert main(["iso", c5_file, c5_file]) == 2
        assert capsys.readouterr().out.strip() == "CLIQUEWIDTH-EXCEEDED"

    def test_malformed_input(self, c5_file, write, capsys):
        bad = write("bad.txt", "3 1\n0 7\n")
        assert main(["iso", c5_file, bad]) == EXIT_DATAERR
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, c5_file, tmp_path):
        assert main(["iso", c5_file, str(tmp_path / "absent.txt")]) == EXIT_DATAERR


class TestEvalCommand:
    """Test cases for ``cw3iso eval``."""

    def test_c5(self, write, capsys):
        path = write("c5.expr", C5_EXPRESSION)
        assert main(["eval", path]) == 0
        assert capsys.readouterr().out.splitlines() == [
            "5 5",
            "a b",
            "a e",
            "b c",
            "c d",
            "d e",
            "labels a:1 b:2 c:2 d:1 e:3",
        ]

    def test_json(self, write, capsys):
        path = write("c5.expr", C5_EXPRESSION)
        assert main(["eval", path, "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n"] == 5
        assert report["labels"]["e"] == 3

    def test_syntax_error(self, write, capsys):
        path = write("bad.expr", "u(a:1)")
        assert main(["eval", path]) == EXIT_DATAERR
        assert "offset" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["eval", str(tmp_path / "absent.expr")]) == EXIT_DATAERR

    def test_undecodable_file(self, tmp_path, capsys):
        path = tmp_path / "latin1.expr"
        path.write_bytes(b"u(a:1, \xe9:2)")
        assert main(["eval", str(path)]) == EXIT_DATAERR
        assert "utf-8" in capsys.readouterr().err


class TestDecomposeCommand:
    """Test cases for ``cw3iso decompose``."""

    def test_output_evaluates_back(self, write, capsys):
        g = cycle_graph(6)
        assert main(["decompose", write("c6.txt", to_edge_list(g))]) == 0
        expression = capsys.readouterr().out.strip()
        assert main(["eval", write("c6.expr", expression)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "6 6"
        edges = {frozenset(line.split()) for line in lines[1:-1]}
        assert edges == {frozenset((g.name(u), g.name(v))) for u, v in g.edges}
        assert set(lines[-1].split()[1:]) == {f"{v}:1" for v in range(6)}

    def test_exceeded(self, c5_file, mocker, capsys):
        mocker.patch("src.main.graph_to_expression", return_value=DecomposeOutcome(None, "clique-width > 3"))
        assert main(["decompose", c5_file]) == 2
        assert capsys.readouterr().out.strip() == "CLIQUEWIDTH-EXCEEDED"


class TestDumpCommands:
    """Test cases for the mdtree, skeleton and labg dumps."""

    def test_mdtree_json(self, write, k3, capsys):
        assert main(["mdtree", write("k3.txt", to_edge_list(k3))]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["nodes"][report["root"]]["kind"] == "series"

    def test_mdtree_dot(self, c5_file, capsys):
        assert main(["mdtree", c5_file, "--dot"]) == 0
        assert capsys.readouterr().out.startswith("digraph MDTree {")

    def test_skeleton_json(self, write, p4, capsys):
        assert main(["skeleton", write("p4.txt", to_edge_list(p4))]) == 0
        report = json.loads(capsys.readouterr().out)
        assert [c["kind"] for c in report["components"]] == ["star", "star"]
        assert report["special_edges"] == [["m0", "m1"]]

    def test_skeleton_disconnected(self, write):
        assert main(["skeleton", write("two.txt", "2 0\n")]) == EXIT_DATAERR

    def test_labg(self, write, p4, capsys):
        assert main(["labg", write("p4.txt", to_edge_list(p4))]) == 0
        report = json.loads(capsys.readouterr().out)
        assert [c["provenance"] for c in report["candidates"]] == ["B1", "B1", "B1", "B1", "T1"]
        assert report["candidates"][4]["source"] == ["1", "2"]

    def test_labg_not_prime(self, write, claw):
        assert main(["labg", write("claw.txt", to_edge_list(claw))]) == EXIT_DATAERR


class TestGeneratorCommands:
    """Test cases for ``gen-expr`` and ``profile``."""

    def test_gen_expr_is_seeded(self, capsys):
        assert main(["gen-expr", "8", "3", "--seed", "4"]) == 0
        first = capsys.readouterr().out
        assert main(["gen-expr", "8", "3", "--seed", "4"]) == 0
        assert capsys.readouterr().out == first

    def test_gen_expr_output_evaluates(self, write, capsys):
        assert main(["gen-expr", "7", "2", "--seed", "9"]) == 0
        path = write("gen.expr", capsys.readouterr().out)
        assert main(["eval", path]) == 0
        assert capsys.readouterr().out.splitlines()[0].startswith("7 ")

    def test_gen_expr_bad_label_budget(self):
        assert main(["gen-expr", "5", "4"]) == EXIT_DATAERR

    @pytest.mark.integration
    def test_profile(self, capsys):
        assert main(["profile", "--sizes", "4", "6", "--repeats", "1", "--seed", "2"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["sizes"] == [4, 6]
        assert len(report["seconds"]) == 2


def test_edge_list_writer_matches_reader(c5):
    assert parse_edge_list(to_edge_list(c5)).graph == c5
