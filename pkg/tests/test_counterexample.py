import pytest

from simembed.counterexample import (
    CapExceeded,
    CounterexampleParams,
    InvalidParams,
    PaperParameters,
    ScaleMode,
    SequencePlan,
    SizeReport,
    X_CAP,
    Y_CAP,
    build_instance,
    compute_paper_parameters,
    derive_cells,
    validate_structure,
)
from simembed.model import PathGraph, Instance, Role, validate_instance, tree_depth


def reduced(s, x, **kw):
    base = dict(s=s, x=x, y=2 * x if x > 1 else 2, formation_reps=2,
                formation_outer=1, sef_tuple=2, sef_efs=2, sef_reps=4,
                cap=500_000)
    base.update(kw)
    return CounterexampleParams(**base)


LATTICE = [(2, 1), (2, 2), (3, 1), (3, 2)]


class TestParams:
    def test_rejects_small_s(self):
        with pytest.raises(InvalidParams):
            reduced(1, 1).validate()

    def test_rejects_y_not_divisible(self):
        with pytest.raises(InvalidParams):
            reduced(2, 2, y=3).validate()

    def test_rejects_wrong_joint_count(self):
        with pytest.raises(InvalidParams):
            reduced(2, 1, joints=5).validate()

    def test_rejects_sef_reps_not_multiple_of_tuple(self):
        with pytest.raises(InvalidParams):
            reduced(2, 1, sef_reps=5).validate()

    def test_joint_count(self):
        assert reduced(2, 1).joint_count() == 8
        assert reduced(2, 2).joint_count() == 16

    def test_efs_needed_matches_schedule(self):
        # every tuple is skipped sef_reps/sef_tuple times
        p = reduced(2, 1)
        assert p.efs_needed_per_tuple() == 2
        full = CounterexampleParams(s=2, x=2, y=2)
        assert full.efs_needed_per_tuple() == 110  # 120 - 120/12


class TestPaperParameters:
    def test_y_formula_small(self):
        # independent oracle: C(386, 3) = 386*385*384/6
        assert compute_paper_parameters(1).y == 386 * 385 * 384 // 6
        assert compute_paper_parameters(1).y == 9_511_040

    def test_r_formula(self):
        assert compute_paper_parameters(1).r == 384
        assert compute_paper_parameters(5).r == 1920

    def test_x1_degenerate(self):
        p = compute_paper_parameters(1)
        assert p.degenerate and p.s == 0

    def test_x2_consistency(self):
        p = compute_paper_parameters(2)
        assert p.y == 770 * 769 * 768 // 6
        assert p.s == (p.y - p.y // 2) * 148
        assert not p.degenerate

    def test_caps(self):
        assert X_CAP == 7 * 9 * 2**23
        assert Y_CAP == 49 * 27 * 2**26

    def test_big_x_exact(self):
        # near the cap the values stay exact big integers
        p = compute_paper_parameters(X_CAP)
        r = 384 * X_CAP
        assert p.y == (r + 2) * (r + 1) * r // 6
        assert p.l == (p.s - 1) ** 4 * 9 * X_CAP

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidParams):
            compute_paper_parameters(0)


class TestSymbolicMode:
    def test_formation_cell_counts_at_paper_constants(self):
        p = CounterexampleParams(s=2, x=1, y=2,
                                 scale_mode=ScaleMode.PaperSymbolic)
        rep = build_instance(p)
        assert isinstance(rep, SizeReport)
        assert rep.cells_per_formation == 592
        assert rep.cells_per_formation_per_joint == 148

    def test_cell_count_formulas(self):
        p = CounterexampleParams(s=3, x=2, y=2,
                                 scale_mode=ScaleMode.PaperSymbolic)
        rep = build_instance(p)
        assert rep.cell_head_counts == (1, 6, 6)
        assert rep.cell_tail_counts == (12, 72, 72)
        assert rep.cell_stabilizers == 144


class TestDeskBuild:
    @pytest.mark.parametrize("s,x", LATTICE)
    def test_instance_and_structure_valid(self, s, x):
        inst, plan = build_instance(reduced(s, x))
        assert validate_instance(inst).valid
        assert validate_structure(inst, reduced(s, x), plan).valid

    @pytest.mark.parametrize("s,x", LATTICE)
    def test_depth_exactly_four(self, s, x):
        inst, _ = build_instance(reduced(s, x))
        assert tree_depth(inst.tree) == 4

    @pytest.mark.parametrize("s,x", LATTICE)
    def test_edge_disjoint(self, s, x):
        inst, _ = build_instance(reduced(s, x))
        tree = {frozenset(e) for e in inst.tree.edges()}
        path = {frozenset(e) for e in inst.path.edges()}
        assert not tree & path

    def test_cell_counts_derived_from_path(self):
        p = reduced(3, 1)
        inst, _ = build_instance(p)
        cells = derive_cells(inst)
        assert len(cells) == p.joint_count() * p.cells_needed_per_joint()
        for c in cells:
            assert (1, len(c["head2"]), len(c["head3"])) == (1, 6, 6)
            assert (len(c["tail1"]), len(c["tail2"]), len(c["tail3"])) == (12, 72, 72)
            assert len(c["stab"]) == 144

    def test_deterministic(self):
        a, pa = build_instance(reduced(2, 2))
        b, pb = build_instance(reduced(2, 2))
        assert a.tree == b.tree and a.path == b.path
        assert pa.to_json() == pb.to_json()

    def test_cap_enforced(self):
        with pytest.raises(CapExceeded):
            build_instance(reduced(3, 2, cap=1000))

    def test_double_defects(self):
        p = reduced(2, 1, sef_tuple=4, sef_reps=4, sef_efs=2,
                    double_defects=True)
        inst, plan = build_instance(p)
        assert validate_instance(inst).valid
        assert all(len(d) == 2 for d in plan.sef["defects"])
        assert validate_structure(inst, p, plan).valid

    def test_plan_round_trip(self):
        _, plan = build_instance(reduced(2, 1))
        back = SequencePlan.from_json(plan.to_json())
        assert back.to_json() == plan.to_json()


class TestValidatorCatchesMutations:
    def test_detects_swapped_cell_members(self):
        p = reduced(2, 1)
        inst, plan = build_instance(p)
        order = list(inst.path.order)
        # swapping a stabilizer with its preceding tail 2-vertex breaks
        # the interleaving pattern
        cell = plan.cells[0]
        i = order.index(cell.stabilizers[0])
        order[i], order[i - 1] = order[i - 1], order[i]
        bad = Instance(inst.tree, PathGraph.of(order), True)
        assert not validate_structure(bad, p, plan).valid

    def test_detects_dropped_stabilizer(self):
        p = reduced(2, 1)
        inst, plan = build_instance(p)
        order = list(inst.path.order)
        cell = plan.cells[0]
        v = cell.stabilizers[-1]
        order.remove(v)
        order.append(v)
        bad = Instance(inst.tree, PathGraph.of(order), True)
        assert not validate_structure(bad, p, plan).valid

    def test_detects_formation_order_break(self):
        p = reduced(2, 1)
        inst, plan = build_instance(p)
        order = list(inst.path.order)
        # swap the opening vertices of the first two cells: the joint
        # sequence no longer matches ((h1 h2 h3)^R1 h4^R1)^R2
        a = plan.cells[plan.formations[0]["cells"][0]].head_1vertex
        b = plan.cells[plan.formations[0]["cells"][1]].head_1vertex
        ia, ib = order.index(a), order.index(b)
        seg_a_end = ia + 1
        # move the whole first cell after the second by rotating the two
        # cell segments
        la = len(plan.cells[plan.formations[0]["cells"][0]].path_order())
        lb = len(plan.cells[plan.formations[0]["cells"][1]].path_order())
        rot = order[ia:ia + la + lb]
        order[ia:ia + la + lb] = rot[la:] + rot[:la]
        bad = Instance(inst.tree, PathGraph.of(order), True)
        assert not validate_structure(bad, p, plan).valid
