import random

import pytest
from hypothesis import given, settings, strategies as st

from cnfdecomp import fixtures as fx
from cnfdecomp.cnf import (
    ClauseSet,
    Role,
    convert_3cnf,
    failed_literal_test,
    format_dimacs,
    parse_dimacs,
    propagation_rounds,
    replay_trail,
    unit_propagate,
)
from cnfdecomp.csp import DomainState, encode_domain_false_only, enumerate_domain_states
from cnfdecomp.decomposition import with_domain_clauses
from cnfdecomp.errors import ParseError, StructureError
from cnfdecomp.oracle import enumeration_checker
from cnfdecomp.verify import partial_assignments


def naive_up(clauses, a):
    """Rescan every clause until nothing changes.  Returns (final, conflict)."""
    val = dict(a)
    changed = True
    while changed:
        changed = False
        for c in clauses:
            if any(val.get(abs(l)) == (l > 0) for l in c):
                continue
            open_lits = [l for l in c if abs(l) not in val]
            if not open_lits:
                return val, True
            if len(open_lits) == 1:
                l = open_lits[0]
                val[abs(l)] = l > 0
                changed = True
    return val, False


def aux_all(n, clauses):
    return ClauseSet(n, tuple(clauses), {v: Role.AUX for v in range(1, n + 1)})


@st.composite
def formulas(draw, max_vars=6, max_clauses=10):
    n = draw(st.integers(1, max_vars))
    clauses = []
    for _ in range(draw(st.integers(0, max_clauses))):
        vs = draw(st.lists(st.integers(1, n), min_size=1, max_size=min(5, n), unique=True))
        clauses.append(tuple(v if draw(st.booleans()) else -v for v in vs))
    clauses = list(dict.fromkeys(clauses))
    return aux_all(n, clauses)


@st.composite
def formula_and_assignment(draw):
    f = draw(formulas())
    vals = draw(st.lists(st.sampled_from([None, False, True]), min_size=f.num_vars,
                         max_size=f.num_vars))
    a = {v: b for v, b in enumerate(vals, 1) if b is not None}
    return f, a


# -- examples ---------------------------------------------------------------


def test_example1_prunes_x2a():
    res = unit_propagate(fx.example1().formula, {fx.X1A: False})
    assert not res.conflict
    assert res.final[fx.Y1] is False
    assert res.final[fx.X2A] is False


def test_empty_formula_is_identity():
    a = {1: True, 2: False}
    res = unit_propagate(aux_all(3, []), a)
    assert res.final == a and not res.conflict and res.trail == []


def test_example2_forces_output():
    d = fx.example2()
    res = unit_propagate(d.formula, {fx.X1A: False, fx.X2B: False})
    assert [res.final[y] for y in (fx.Y1, fx.Y2, fx.Y3)] == [False] * 3
    assert res.final[fx.Z] is False
    assert not res.conflict


def test_example2_alone_deduces_nothing_on_inputs():
    res = unit_propagate(fx.example2().formula, {fx.X1A: False})
    assert {v: res.final.get(v) for v in (fx.X1B, fx.X2A, fx.X2B, fx.Z)} == dict.fromkeys(
        (fx.X1B, fx.X2A, fx.X2B, fx.Z)
    )


def test_conflict_from_initial_assignment():
    res = unit_propagate(aux_all(2, [(1, 2)]), {1: False, 2: False})
    assert res.conflict


def test_trail_is_fifo_and_ascending():
    f = aux_all(4, [(-1, 2), (-1, 3), (-2, 4)])
    res = unit_propagate(f, {1: True})
    assert res.trail == [(2, 0), (3, 1), (4, 2)]


def test_undeclared_assignment_rejected():
    with pytest.raises(StructureError):
        unit_propagate(aux_all(2, [(1, 2)]), {5: True})


# -- failed literal test ------------------------------------------------------


def test_failed_literal_immediate():
    assert failed_literal_test(aux_all(1, [(-1,)]), {}, 1)


def test_failed_literal_empty_formula():
    assert not failed_literal_test(aux_all(2, []), {}, 2)


def test_failed_literal_rejects_assigned():
    with pytest.raises(ValueError):
        failed_literal_test(aux_all(2, []), {2: False}, 2)


def test_failed_literal_does_not_mutate():
    a = {1: False}
    failed_literal_test(aux_all(2, [(1, 2)]), a, -2)
    assert a == {1: False}


def _probe_formula():
    d = fx.example2()
    f = with_domain_clauses(d.formula, d.encoding)
    return f.with_clauses(f.clauses + ((fx.Z,),)), d.encoding


def test_failed_literal_example2_probe():
    f, _ = _probe_formula()
    # X1 = {a}, X2 = {a}: probing X2 = a finds the tuple <a,a>, no failure
    oracle = enumeration_checker(fx.table_constraint())
    expected = oracle(DomainState.of({0}, {0})) == 0
    assert failed_literal_test(f, {fx.X1B: False, fx.X2B: False}, fx.X2A) is expected
    assert expected is False


def test_failed_literal_matches_restriction_oracle():
    f, emap = _probe_formula()
    oracle = enumeration_checker(fx.table_constraint())
    lit_of = emap.literal_of()
    checked = 0
    for state in enumerate_domain_states(emap.domain_sizes):
        a = encode_domain_false_only(state, emap)
        for v in emap.prop_vars():
            if v in a:
                continue
            i, j = lit_of[v]
            assert failed_literal_test(f, a, v) == (oracle(state.restrict(i, j)) == 0)
            checked += 1
    assert checked == 24


# -- 3-CNF ------------------------------------------------------------------


def test_3cnf_split_example():
    f = aux_all(4, [(1, 2, 3, 4)])
    g = convert_3cnf(f)
    assert g.clauses == ((1, 2, 5), (-5, 3, 4))
    assert g.roles[5] is Role.AUX


def test_3cnf_keeps_short_clauses():
    f = aux_all(3, [(1, -2, 3), (1,)])
    assert convert_3cnf(f).clauses == f.clauses


def test_3cnf_long_chain_shape():
    g = convert_3cnf(aux_all(6, [(1, 2, 3, 4, 5, 6)]))
    assert g.clauses == ((1, 2, 7), (-7, 3, 8), (-8, 4, 9), (-9, 5, 6))
    assert all(len(c) <= 3 for c in g.clauses)


def test_3cnf_preserves_propagation_exhaustively():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(3, 6)
        clauses = set()
        for _ in range(rng.randint(1, 5)):
            vs = rng.sample(range(1, n + 1), rng.randint(1, n))
            clauses.add(tuple(v if rng.random() < 0.5 else -v for v in vs))
        f = aux_all(n, sorted(clauses))
        g = convert_3cnf(f)
        assert len(g) <= 3 * len(f) + f.literal_count()
        for a in partial_assignments(list(range(1, n + 1))):
            r1, r2 = unit_propagate(f, a), unit_propagate(g, a)
            assert r1.conflict == r2.conflict
            if not r1.conflict:
                assert r1.final == {v: b for v, b in r2.final.items() if v <= n}


# -- properties ---------------------------------------------------------------


@settings(max_examples=200)
@given(formula_and_assignment())
def test_matches_naive_fixpoint(data):
    f, a = data
    res = unit_propagate(f, a)
    final, conflict = naive_up(f.clauses, a)
    assert res.conflict == conflict
    if not conflict:
        assert res.final == final


@settings(max_examples=100)
@given(formula_and_assignment(), st.randoms(use_true_random=False))
def test_confluence(data, rnd):
    f, a = data
    base = unit_propagate(f, a)
    clauses = list(f.clauses)
    for _ in range(5):
        rnd.shuffle(clauses)
        other = unit_propagate(f.with_clauses(clauses), a)
        assert other.conflict == base.conflict
        if not base.conflict:
            assert other.final == base.final


@settings(max_examples=100)
@given(formula_and_assignment(), st.data())
def test_monotone_in_the_assignment(data, draw):
    f, a = data
    free = [v for v in range(1, f.num_vars + 1) if v not in a]
    extra = draw.draw(st.dictionaries(st.sampled_from(free), st.booleans()) if free
                      else st.just({}))
    small, big = unit_propagate(f, a), unit_propagate(f, {**a, **extra})
    if not big.conflict:
        assert not small.conflict
        assert small.final.items() <= big.final.items()


@settings(max_examples=100)
@given(formula_and_assignment())
def test_trail_replays(data):
    f, a = data
    res = unit_propagate(f, a)
    assert replay_trail(a, res.trail) == res.final
    # each trail clause was unit when used
    val = dict(a)
    for lit, c in res.trail:
        others = [l for l in f.clauses[c] if l != lit]
        assert all(val.get(abs(l)) == (l < 0) for l in others)
        val[abs(lit)] = lit > 0


@settings(max_examples=100)
@given(formula_and_assignment())
def test_rounds_reach_the_same_fixpoint(data):
    f, a = data
    rounds, conflict = propagation_rounds(f, a)
    res = unit_propagate(f, a)
    assert conflict == res.conflict
    if not conflict:
        assert set(rounds) == set(res.final) - set(a)


def test_rounds_are_breadth_first():
    f = aux_all(4, [(-1, 2), (-2, 3), (-1, 4)])
    rounds, _ = propagation_rounds(f, {1: True})
    assert rounds == {2: 1, 4: 1, 3: 2}


# -- structure and DIMACS -------------------------------------------------------


@pytest.mark.parametrize("clause", [(), (1, 1), (1, -1), (0,)])
def test_bad_clauses(clause):
    with pytest.raises(StructureError):
        aux_all(2, [clause])


def test_roles_must_cover_and_single_output():
    with pytest.raises(StructureError):
        ClauseSet(2, ((1, 2),), {1: Role.AUX})
    with pytest.raises(StructureError):
        ClauseSet(2, ((1, 2),), {1: Role.OUTPUT, 2: Role.OUTPUT})


def test_dimacs_round_trip_is_byte_exact():
    f = fx.example2().formula
    text = format_dimacs(f)
    assert text.splitlines()[0] == "c role input 1 0 0"
    assert "c role output 8" in text
    assert "p cnf 8 7" in text
    g = parse_dimacs(text)
    assert g == f and g.labels == f.labels
    assert format_dimacs(g) == text


def test_dimacs_plain_defaults_to_aux():
    g = parse_dimacs("c plain\np cnf 3 2\n1 -3 0\n2 3 -1 0\n")
    assert g.clauses == ((1, -3), (2, 3, -1))
    assert g.auxiliaries == [1, 2, 3]


@pytest.mark.parametrize(
    "text",
    [
        "1 2 0\n",
        "p cnf 2 2\n1 2 0\n",
        "p cnf 2 1\n1 2\n",
        "p cnf 2 1\n1 x 0\n",
        "p dnf 2 1\n1 0\n",
        "c role frob 1\np cnf 1 1\n1 0\n",
        "p cnf 1 1\n3 0\n",
    ],
)
def test_dimacs_errors(text):
    with pytest.raises(ParseError):
        parse_dimacs(text)
