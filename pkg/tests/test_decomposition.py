import pytest

from cnfdecomp import fixtures as fx
from cnfdecomp.cnf import ClauseSet, Role
from cnfdecomp.csp import DirectEncodingMap, DomainState, ExtensionalConstraint
from cnfdecomp.decomposition import (
    CheckerDecomposition,
    PropagatorDecomposition,
    validate_checker_decomposition,
    validate_propagator_decomposition,
)
from cnfdecomp.errors import BudgetExceeded, StructureError
from cnfdecomp.oracle import bacchus_table_encoding, enumeration_checker, lift_checker_to_propagator

TABLE_CHECK = enumeration_checker(fx.table_constraint())
TABLE_DC = lift_checker_to_propagator(TABLE_CHECK)


def replace_clause(d, old, new):
    clauses = tuple(new if c == old else c for c in d.formula.clauses)
    return type(d)(d.formula.with_clauses(clauses), d.encoding)


def test_example2_passes():
    report = validate_checker_decomposition(fx.example2(), TABLE_CHECK)
    assert report.passed and report.verdict == "pass"
    assert report.states_checked == 9


def test_example2_mutation_forces_an_input():
    bad = replace_clause(fx.example2(), (-fx.Y1, fx.X1A), (fx.Y1, fx.X1A))
    report = validate_checker_decomposition(bad, TABLE_CHECK)
    assert report.verdict == "fail"
    assert any("forced" in c.observed for c in report.counterexamples)


def test_empty_constraint_checker():
    emap = DirectEncodingMap.dense([2])
    f = ClauseSet(2, ((-2,),), {1: Role.INPUT, 2: Role.INPUT}, {})
    f = ClauseSet(3, ((-3,),), {1: Role.INPUT, 2: Role.INPUT, 3: Role.OUTPUT})
    d = CheckerDecomposition(f, emap)
    empty = enumeration_checker(ExtensionalConstraint.table([2], []))
    assert validate_checker_decomposition(d, empty).passed


def test_checker_conflict_is_reported():
    emap = DirectEncodingMap.dense([1])
    f = ClauseSet(3, ((-2,), (2, -3), (1, 2)), {1: Role.INPUT, 2: Role.AUX, 3: Role.OUTPUT})
    report = validate_checker_decomposition(CheckerDecomposition(f, emap), lambda s: 1)
    assert not report.passed


def test_example1_passes():
    report = validate_propagator_decomposition(fx.example1(), TABLE_DC)
    assert report.passed
    assert report.states_checked == 9


def test_example1_without_failure_clause_fails_at_b_a():
    d = fx.example1()
    bad = PropagatorDecomposition(d.formula.with_clauses(d.formula.clauses[:-1]), d.encoding)
    report = validate_propagator_decomposition(bad, TABLE_DC)
    assert not report.passed
    states = {(c.state, c.instantiation) for c in report.counterexamples}
    assert states == {(DomainState.of({1}, {0}), "false-only")}
    assert report.counterexamples[0].expected == "conflict"


def test_modes():
    d = fx.example1()
    bad = PropagatorDecomposition(d.formula.with_clauses(d.formula.clauses[:-1]), d.encoding)
    assert validate_propagator_decomposition(bad, TABLE_DC, mode="domain").passed
    either = validate_propagator_decomposition(bad, TABLE_DC, mode="either")
    assert either.passed and either.mode == "domain"
    assert validate_propagator_decomposition(d, TABLE_DC, mode="either").mode == "bare"
    with pytest.raises(ValueError):
        validate_propagator_decomposition(d, TABLE_DC, mode="sometimes")


def test_trivial_table_never_prunes():
    c = ExtensionalConstraint.table([3], [(0,), (1,), (2,)])
    d = bacchus_table_encoding(c)
    report = validate_propagator_decomposition(d, lambda s: s)
    assert report.passed and report.states_checked == 7


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        validate_checker_decomposition(fx.example2(), TABLE_CHECK, budget=3)


def test_report_text_is_line_oriented():
    d = fx.example1()
    bad = PropagatorDecomposition(d.formula.with_clauses(d.formula.clauses[:-1]), d.encoding)
    text = validate_propagator_decomposition(bad, TABLE_DC).to_text()
    lines = text.splitlines()
    assert lines[:4] == ["kind propagator", "mode bare", "states 9", "verdict fail"]
    assert lines[4].startswith("counterexample state X0={1} X1={0} | false-only")


def test_reports_are_deterministic():
    bad = replace_clause(fx.example2(), (-fx.Y1, fx.X1A), (fx.Y1, fx.X1A))
    a = validate_checker_decomposition(bad, TABLE_CHECK).to_text()
    b = validate_checker_decomposition(bad, TABLE_CHECK).to_text()
    assert a == b


def test_wrapper_invariants():
    emap = DirectEncodingMap.dense([2])
    with pytest.raises(StructureError):
        CheckerDecomposition(ClauseSet(2, (), {1: Role.INPUT, 2: Role.INPUT}), emap)
    with pytest.raises(StructureError):
        PropagatorDecomposition(ClauseSet(1, (), {1: Role.INPUT}), emap)
    with pytest.raises(StructureError):
        PropagatorDecomposition(fx.example2().formula, fx.table_encoding())
    d = fx.example1()
    assert d.metadata == {"inputs": 4, "auxiliaries": 3, "clauses": 11}
