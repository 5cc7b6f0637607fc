"""Well-formedness assumptions the rest of the suite relies on."""

import itertools

import oracles
from osrlab.corpus import load_corpus
from osrlab.ir import (Completed, CondGoto, FuelExhausted, Goto, parse_program, run)

MAX_STEPS = 200


def test_size_and_shapes(corpus):
    assert len(corpus) >= 12
    assert {"straight", "branch", "loop"} <= {e.shape for e in corpus}
    assert all(e.pipelines for e in corpus)


def test_every_use_is_definitely_assigned(corpus):
    for e in corpus:
        p = e.program
        for l in p.points():
            assert oracles.uses_at(p, l) <= oracles.definitely_assigned(p, l), (e.name, l)


def test_every_point_is_reachable_and_can_finish(corpus):
    for e in corpus:
        p = e.program
        for l in p.points():
            assert l == 1 or oracles.reachable_avoiding(p, 1, l, set()), (e.name, l)
            dead_ends = [k for k in p.points() if not oracles.successors(p, k)]
            assert l in dead_ends or any(oracles.reachable_avoiding(p, l, k, set())
                                         for k in dead_ends), (e.name, l)


def test_no_jump_back_to_the_header(corpus):
    for e in corpus:
        for instr in e.program.instrs:
            if isinstance(instr, (Goto, CondGoto)):
                assert instr.target != 1, e.name


def test_runs_terminate_on_the_whole_input_range(corpus):
    for e in corpus:
        names = e.program.in_vars
        grids = [range(lo, hi + 1) for lo, hi in (e.input_ranges[x] for x in names)]
        for values in itertools.islice(itertools.product(*grids), 400):
            outcome = run(e.program, dict(zip(names, values)), fuel=MAX_STEPS)
            assert not isinstance(outcome, FuelExhausted), (e.name, values)


def test_completed_runs_exist_for_every_program(corpus):
    for e in corpus:
        assert any(isinstance(run(e.program, s), Completed) for s in e.random_stores(50))


def test_loading_a_bare_directory(tmp_path):
    (tmp_path / "a.osr").write_text("in X\nout X\n")
    (tmp_path / "b.osr").write_text("in Y\nY := Y + 1\nout Y\n")
    entries = load_corpus(tmp_path)
    assert [e.name for e in entries] == ["a", "b"]
    assert all(e.pipelines == () for e in entries)
    assert entries[1].program == parse_program("in Y\nY := Y + 1\nout Y")
