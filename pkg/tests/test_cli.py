"""End-to-end tests of the command-line interface and the SVG renderer.

All expected exit codes and artifact contents below are derived by hand
from the documented contracts (0 clean, 1 violation, 2 usage error,
3 budget exceeded) and from independently constructed fixtures; no
expected value is copied from program output.
"""

import json

import pytest

from simembed.cli import main, render_svg, RenderStyle
from simembed.geom import Point
from simembed.leveltree import (
    LevelTree,
    RegionSystem,
    dump_level_tree,
    load_level_tree,
)
from simembed.model import (
    Drawing,
    FormatError,
    Instance,
    PathGraph,
    RootedTree,
    dump_drawing,
    dump_instance,
    load_drawing,
    load_instance,
)

from test_analyzer import passage_witness

GADGET_PARENT = [None, 0, 0, 0, 1, 2, 3, 1, 2, 3]


def depth2_instance():
    t = RootedTree.from_parent([None, 0, 0, 1, 1, 2, 2])
    return Instance(t, PathGraph.of([3, 1, 4, 0, 5, 2, 6]))


def write_instance(tmp_path, inst, name="a.sge"):
    p = tmp_path / name
    p.write_text(dump_instance(inst))
    return str(p)


class TestLevelTreeFormat:
    def test_round_trip_without_lines(self):
        lt = LevelTree.of(RootedTree.from_parent(GADGET_PARENT),
                          (1, 2, 2, 2, 1, 1, 1, 1, 3, 4))
        lt2, rs2 = load_level_tree(dump_level_tree(lt))
        assert lt2.tree.parent == lt.tree.parent
        assert tuple(lt2.phi) == tuple(lt.phi)
        assert rs2 is None

    def test_round_trip_with_lines(self):
        lt = LevelTree.of(RootedTree.from_parent(GADGET_PARENT),
                          (1, 2, 2, 2, 1, 1, 1, 1, 3, 4))
        rs = RegionSystem.horizontal([0, 1, 2, 3])
        lt2, rs2 = load_level_tree(dump_level_tree(lt, rs))
        assert rs2 is not None
        assert rs2.positions() == rs.positions()

    def test_bad_header_rejected(self):
        with pytest.raises(FormatError):
            load_level_tree("nope 1 2 3\n")

    def test_length_mismatch_rejected(self):
        with pytest.raises(FormatError):
            load_level_tree("slt 1 3 2\ntree - 0 0\nphi 1 2\n")


class TestEmbedCheck:
    def test_embed_then_check_clean(self, tmp_path):
        sge = write_instance(tmp_path, depth2_instance())
        sgd = str(tmp_path / "a.sgd")
        assert main(["embed-depth2", sge, "--out", sgd]) == 0
        assert main(["check", sge, sgd]) == 0

    def test_check_rejects_crossing_drawing(self, tmp_path):
        # path order 1,0,2,3 with segment (1,0) crossing segment (2,3)
        # at (9/5, 9/5), verified by hand
        t = RootedTree.from_parent([None, 0, 0, 0])
        inst = Instance(t, PathGraph.of([1, 0, 2, 3]))
        d = Drawing({0: Point(2, 2), 1: Point(0, 0),
                     2: Point(3, 0), 3: Point(1, 3)})
        sge = write_instance(tmp_path, inst)
        sgd = tmp_path / "x.sgd"
        sgd.write_text(dump_drawing(d))
        assert main(["check", sge, str(sgd)]) == 1

    def test_embed_refuses_depth3(self, tmp_path, capsys):
        t = RootedTree.from_parent([None, 0, 1, 2])
        sge = write_instance(tmp_path, Instance(t, PathGraph.of([3, 2, 1, 0])))
        assert main(["embed-depth2", sge]) == 1
        err = capsys.readouterr().err
        assert "depth 3" in err and "depth-4" in err

    def test_check_records_format(self, tmp_path, capsys):
        sge = write_instance(tmp_path, depth2_instance())
        sgd = str(tmp_path / "a.sgd")
        main(["embed-depth2", sge, "--out", sgd])
        capsys.readouterr()
        assert main(["check", sge, sgd, "--format", "records"]) == 0
        rec = json.loads(capsys.readouterr().out)
        assert rec["clean"] and rec["tree_planar"] and rec["path_planar"]


class TestSearch:
    def test_found_writes_drawing(self, tmp_path, capsys):
        sge = write_instance(tmp_path, depth2_instance())
        out = tmp_path / "s.sgd"
        assert main(["search", sge, "--grid", "3",
                     "--out", str(out)]) == 0
        d = load_drawing(out.read_text())
        inst = load_instance(open(sge).read())
        assert main(["check", sge, str(out)]) == 0
        assert len(d.pos) == inst.tree.n

    def test_proved_none_small_grid(self, tmp_path):
        # three vertices cannot be placed injectively on a 1x1 grid
        t = RootedTree.from_parent([None, 0, 0])
        sge = write_instance(tmp_path, Instance(t, PathGraph.of([1, 0, 2])))
        assert main(["search", sge, "--grid", "1"]) == 1

    def test_budget_exceeded(self, tmp_path):
        sge = write_instance(tmp_path, depth2_instance())
        assert main(["search", sge, "--grid", "4", "--budget", "1"]) == 3


class TestLevelSearch:
    def test_certified_leveling_exhausts(self, tmp_path, capsys):
        lt = LevelTree.of(RootedTree.from_parent(GADGET_PARENT),
                          (1, 2, 2, 2, 1, 1, 1, 1, 3, 4))
        slt = tmp_path / "g.slt"
        slt.write_text(dump_level_tree(lt))
        assert main(["level-search", str(slt), "--grid", "10",
                     "--format", "records"]) == 1
        rec = json.loads(capsys.readouterr().out)
        assert rec["status"] == "ExhaustedNone"

    def test_planar_leveling_found(self, tmp_path):
        lt = LevelTree.of(RootedTree.from_parent(GADGET_PARENT),
                          (1, 2, 2, 2, 3, 3, 3, 3, 3, 3))
        slt = tmp_path / "g.slt"
        slt.write_text(dump_level_tree(lt))
        assert main(["level-search", str(slt), "--grid", "10"]) == 0

    def test_region_lines_switch_to_region_search(self, tmp_path, capsys):
        # regions are weaker than lines: the leveling certified
        # nonplanar above becomes drawable with interior freedom
        lt = LevelTree.of(RootedTree.from_parent(GADGET_PARENT),
                          (1, 2, 2, 2, 1, 1, 1, 1, 3, 4))
        rs = RegionSystem.horizontal([0, 1, 2, 3])
        slt = tmp_path / "r.slt"
        slt.write_text(dump_level_tree(lt, rs))
        assert main(["level-search", str(slt), "--grid", "4",
                     "--budget", "50000000", "--format", "records"]) == 0
        rec = json.loads(capsys.readouterr().out)
        assert rec["status"] == "Found"

    def test_budget_exceeded(self, tmp_path):
        lt = LevelTree.of(RootedTree.from_parent(GADGET_PARENT),
                          (1, 2, 2, 2, 1, 1, 1, 1, 3, 4))
        rs = RegionSystem.horizontal([0, 1, 2, 3])
        slt = tmp_path / "r.slt"
        slt.write_text(dump_level_tree(lt, rs))
        assert main(["level-search", str(slt), "--grid", "4",
                     "--budget", "3"]) == 3


class TestGenerateParams:
    def test_desk_generate_round_trips(self, tmp_path, capsys):
        out = str(tmp_path / "gen")
        assert main(["generate", "--s", "2", "--x", "1", "--y", "2",
                     "--out", out]) == 0
        inst = load_instance((tmp_path / "gen.sge").read_text())
        from simembed.counterexample import SequencePlan
        plan = SequencePlan.from_json((tmp_path / "gen.plan").read_text())
        assert inst.tree.n > 0 and plan.cells

    def test_symbolic_records(self, capsys):
        assert main(["generate", "--s", "2", "--x", "1", "--y", "2",
                     "--mode", "symbolic", "--format", "records"]) == 0
        rec = json.loads(capsys.readouterr().out)
        assert rec["cells_per_formation"] == 592

    def test_params_text_degeneracy(self, capsys):
        assert main(["params", "1", "2"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert "yes" in out[1] and "no" in out[2]

    def test_params_records_exact(self, capsys):
        assert main(["params", "2", "--format", "records"]) == 0
        rec = json.loads(capsys.readouterr().out)
        assert rec["r"] == 2 ** 7 * 3 * 2
        from math import comb
        assert rec["y"] == comb(rec["r"] + 2, 3)


class TestAnalyze:
    def test_passage_witness_records(self, tmp_path, capsys):
        inst, d, plan = passage_witness()
        sge = write_instance(tmp_path, inst)
        sgd = tmp_path / "w.sgd"
        sgd.write_text(dump_drawing(d))
        pln = tmp_path / "w.plan"
        pln.write_text(plan.to_json())
        assert main(["analyze", sge, str(pln), str(sgd),
                     "--format", "records"]) == 0
        recs = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
        kinds = {r["kind"] for r in recs}
        assert "passage" in kinds and "door" in kinds
        assert any(r["kind"] == "door" and r["status"] == "closed"
                   for r in recs)

    def test_text_summary(self, tmp_path, capsys):
        inst, d, plan = passage_witness()
        sge = write_instance(tmp_path, inst)
        sgd = tmp_path / "w.sgd"
        sgd.write_text(dump_drawing(d))
        pln = tmp_path / "w.plan"
        pln.write_text(plan.to_json())
        assert main(["analyze", sge, str(pln), str(sgd)]) == 0
        assert "passages=" in capsys.readouterr().out


class TestRender:
    def small(self):
        t = RootedTree.from_parent([None, 0, 0])
        inst = Instance(t, PathGraph.of([1, 0, 2]))
        d = Drawing({0: Point(0, 0), 1: Point(-1, 1), 2: Point(1, 1)})
        return inst, d

    def test_layering_and_counts(self):
        inst, d = self.small()
        svg = render_svg(inst, d)
        style = RenderStyle()
        grey = svg.index(style.tree_stroke)
        black = svg.index(f'stroke="{style.path_stroke}"')
        assert grey < black  # tree edges are drawn beneath path edges
        assert svg.count("<line") == 4
        assert svg.count("<circle") == 3
        assert black < svg.index("<circle")  # vertices on top
        assert 'version="1.1"' in svg

    def test_deterministic(self, tmp_path, capsys):
        inst, d = self.small()
        sge = write_instance(tmp_path, inst)
        sgd = tmp_path / "d.sgd"
        sgd.write_text(dump_drawing(d))
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        assert main(["render", sge, str(sgd), "--out", str(a)]) == 0
        assert main(["render", sge, str(sgd), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_threads_flag_does_not_change_output(self, tmp_path):
        inst, d = self.small()
        sge = write_instance(tmp_path, inst)
        sgd = tmp_path / "d.sgd"
        sgd.write_text(dump_drawing(d))
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        main(["--threads", "1", "render", sge, str(sgd), "--out", str(a)])
        main(["--threads", "8", "render", sge, str(sgd), "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_display_precision_is_4_decimals(self):
        inst, d = self.small()
        from fractions import Fraction
        d = Drawing({0: Point(Fraction(1, 3), 0), 1: Point(-1, 1),
                     2: Point(1, 1)})
        svg = render_svg(inst, d)
        import re
        for m in re.finditer(r'[xy][12]?="(-?\d+\.\d+)"', svg):
            assert len(m.group(1).split(".")[1]) == 4


class TestUsageErrors:
    def test_missing_file(self, capsys):
        assert main(["check", "/nonexistent.sge", "/nonexistent.sgd"]) == 2

    def test_malformed_instance(self, tmp_path):
        p = tmp_path / "bad.sge"
        p.write_text("not an instance\n")
        assert main(["embed-depth2", str(p)]) == 2

    def test_invalid_generate_params(self):
        assert main(["generate", "--s", "2", "--x", "2", "--y", "3"]) == 2

    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == 2
