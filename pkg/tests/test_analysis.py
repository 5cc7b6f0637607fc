import pytest

import oracles
from osrlab.analysis import (AU, AX, BWD, EU, EX, FWD, At, Def, Meta, Not, PathSemantics,
                             TrueF, Use, check_ctl, definitely_assigned, dominates,
                             find_substitutions, format_formula, holds, is_live, live_by_ctl,
                             live_vars, parse_formula, reaching_defs, satisfying_points,
                             unique_reaching_def, urdef_by_ctl)
from osrlab.errors import OsrSyntaxError, UnboundMetaVariable
from osrlab.ir import IntLit, build_cfg, parse_program
from osrlab.rewrite import builtin_cp, builtin_dce, matches

MAXIMAL = PathSemantics.MAXIMAL_FINITE
FIXPOINT = PathSemantics.FIXPOINT


class TestLiveness:
    def test_p1_point_3(self, p1):
        assert live_vars(p1, 3) == {"V", "X"}

    def test_p2_point_3(self, p2):
        assert live_vars(p2, 3) == {"X"}

    def test_entry_is_empty(self, corpus):
        for e in corpus:
            assert live_vars(e.program, 1) == frozenset()

    def test_all_points_of_p1(self, p1):
        assert [sorted(live_vars(p1, l)) for l in p1.points()] == [[], ["X"], ["V", "X"], ["Y"]]

    def test_matches_path_oracle(self, corpus):
        for e in corpus:
            for l in e.program.points():
                assert live_vars(e.program, l) == oracles.live(e.program, l), (e.name, l)

    def test_out_of_range(self, p1):
        with pytest.raises(ValueError):
            live_vars(p1, 5)


class TestDefinitelyAssigned:
    def test_p1(self, p1):
        assert definitely_assigned(p1, 3) == {"X", "V"}

    def test_after_in(self, p1):
        assert definitely_assigned(p1, 2) == {"X"}

    def test_one_armed_diamond_excludes(self):
        p = parse_program("in X\nif (X < 0) goto 4\nZ := 1\nskip\nout X")
        assert "Z" not in definitely_assigned(p, 4)

    def test_matches_path_oracle(self, corpus):
        for e in corpus:
            for l in e.program.points():
                assert definitely_assigned(e.program, l) == \
                    oracles.definitely_assigned(e.program, l), (e.name, l)

    def test_monotone_along_straight_chains(self, corpus):
        for e in corpus:
            cfg = build_cfg(e.program)
            for a in e.program.points():
                if len(cfg.succ[a]) == 1:
                    (b,) = cfg.succ[a]
                    if len(cfg.pred[b]) == 1:
                        assert definitely_assigned(e.program, a) <= \
                            definitely_assigned(e.program, b)


class TestReachingDefinitions:
    def test_p1(self, p1):
        assert unique_reaching_def(p1, 3, "V") == 2

    def test_loop_has_two_defs(self, sum_loop):
        assert reaching_defs(sum_loop, 5, "S") == {3, 6}
        assert unique_reaching_def(sum_loop, 5, "S") is None

    def test_never_defined(self, p1):
        assert unique_reaching_def(p1, 3, "Q") is None

    def test_matches_path_oracle(self, corpus):
        for e in corpus:
            p = e.program
            for l in p.points():
                for x in p.variables():
                    assert set(reaching_defs(p, l, x)) == oracles.reaching(p, l, x)
                    assert unique_reaching_def(p, l, x) == oracles.urdef(p, l, x)

    def test_soundness_by_path_enumeration(self, corpus):
        """The unique definition is the last one on every entry path (acyclic programs)."""
        for e in corpus:
            p = e.program
            if not oracles.is_acyclic(p):
                continue
            for l in p.points():
                for x in p.variables():
                    d = unique_reaching_def(p, l, x)
                    if d is None:
                        continue
                    assert x in oracles.defs_at(p, d)
                    for path in oracles.simple_paths(p, 1, l):
                        last = [n for n in path[:-1] if x in oracles.defs_at(p, n)][-1]
                        assert last == d


class TestCtl:
    def test_dominance_at_entry(self, p1):
        assert check_ctl(p1, 1, dominates(2, 3), MAXIMAL)

    def test_ex_use(self, p1):
        assert not check_ctl(p1, 2, EX(Use("Y")), MAXIMAL)
        assert check_ctl(p1, 3, EX(Use("Y")), MAXIMAL)

    def test_true_everywhere(self, corpus):
        for e in corpus:
            for mode in PathSemantics:
                assert satisfying_points(e.program, TrueF(), mode) == frozenset(e.program.points())

    def test_unbound_meta(self, p1):
        with pytest.raises(UnboundMetaVariable):
            check_ctl(p1, 1, Def(Meta("x", "var")))

    def test_at_is_all_or_nothing(self, p1):
        assert holds(p1, At(3, Use("V")))
        assert not any(check_ctl(p1, l, At(2, Use("V"))) for l in p1.points())

    def test_vacuous_until_where_no_complete_path_starts(self):
        p = parse_program("in X\nif (X < 0) goto 4\ngoto 3\nout X")
        # point 3 loops forever: it heads no complete path
        assert check_ctl(p, 3, AU(TrueF(), Def("Q"), FWD), MAXIMAL)
        assert not check_ctl(p, 3, AU(TrueF(), Def("Q"), FWD), FIXPOINT)
        assert not check_ctl(p, 3, EU(TrueF(), Def("Q"), FWD), MAXIMAL)

    def test_modes_agree_on_acyclic_corpus(self, corpus):
        for e in corpus:
            if not oracles.is_acyclic(e.program):
                continue
            for f in oracles.formula_battery(e.program):
                assert satisfying_points(e.program, f, MAXIMAL) == \
                    satisfying_points(e.program, f, FIXPOINT)

    def test_liveness_formula_matches_dataflow(self, corpus):
        """The CTL liveness encoding agrees with dataflow under complete-path semantics."""
        for e in corpus:
            for l in e.program.points():
                if l > 1:
                    assert live_by_ctl(e.program, l, MAXIMAL) == live_vars(e.program, l)
                if oracles.is_acyclic(e.program) and l > 1:
                    assert live_by_ctl(e.program, l, FIXPOINT) == live_vars(e.program, l)

    def test_fixpoint_liveness_loses_loop_carried_values(self, sum_loop):
        """Least-fixpoint backward until cannot prove N assigned inside the loop."""
        assert "N" in live_vars(sum_loop, 6)
        assert "N" not in live_by_ctl(sum_loop, 6, FIXPOINT)

    def test_urdef_formula_matches_dataflow(self, corpus):
        for e in corpus:
            for l in range(2, len(e.program) + 1):
                for x in e.program.variables():
                    assert urdef_by_ctl(e.program, l, x, MAXIMAL) == \
                        unique_reaching_def(e.program, l, x), (e.name, l, x)

    def test_liveness_formula_shape(self):
        f = is_live("X")
        assert f.left == AX(AU(TrueF(), Def("X"), BWD), BWD)
        assert f.right == EU(Not(Def("X")), Use("X"), FWD)


class TestSubstitutions:
    def test_cp_condition_on_p1(self, p1):
        (theta,) = list(matches(p1, builtin_cp()))
        assert {k: theta[k] for k in ("m", "x", "v", "c")} == {
            "m": 3, "x": "Y", "v": "V", "c": IntLit(3)}

    def test_cp_condition_alone_binds_its_own_metas(self, p1):
        # without the clause pattern every point from V := 3 onwards qualifies
        thetas = find_substitutions(p1, builtin_cp().condition)
        assert [(t["m"], t["v"], t["c"]) for t in thetas] == [
            (2, "V", IntLit(3)), (3, "V", IntLit(3)), (4, "V", IntLit(3))]

    def test_dce_condition_on_p1(self, p1):
        assert list(matches(p1, builtin_dce())) == []

    def test_true_with_one_point_meta(self, corpus):
        for e in corpus:
            f = At(Meta("m", "point"), TrueF())
            subs = list(find_substitutions(e.program, f))
            assert [s["m"] for s in subs] == list(e.program.points())


class TestFormulaText:
    @pytest.mark.parametrize("text", [
        "(fwd-EU (not (def X)) (use X))",
        "(and (bwd-AX (bwd-AU true (def X))) (fwd-EU (not (def X)) (use X)))",
        "(not (fwd-EU (not (point 2)) (point 3)))",
        '(at ?m (stmt "?x := ?e"))',
        '(or (conlit "3") (freevar X "X + 1"))',
    ])
    def test_round_trip(self, text):
        assert format_formula(parse_formula(text)) == text

    def test_parsed_formula_evaluates(self, p1):
        assert check_ctl(p1, 1, parse_formula("(not (fwd-EU (not (point 2)) (point 3)))"))

    @pytest.mark.parametrize("text", ["(def X", "(fwd-XX true)", "(point x)"])
    def test_syntax_errors(self, text):
        with pytest.raises(OsrSyntaxError):
            parse_formula(text)
