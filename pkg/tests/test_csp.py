import pytest
from hypothesis import given, strategies as st

from cnfdecomp.csp import (
    CspVariable,
    DirectEncodingMap,
    DomainState,
    ExtensionalConstraint,
    decode_assignment,
    encode_domain,
    enumerate_domain_states,
    format_table,
    instantiations,
    parse_table,
)
from cnfdecomp.errors import BudgetExceeded, ParseError, StructureError

# X_1 with initial domain {1,2,3} -> value indices 0,1,2 -> x ids 1,2,3
ONE_VAR = DirectEncodingMap.dense([3])


def test_encode_singleton_sets_true():
    a = encode_domain(DomainState.of({0}), ONE_VAR)
    assert a == {1: True, 2: False, 3: False}


def test_encode_full_domain_is_unset():
    assert encode_domain(DomainState.full([3, 2]), DirectEncodingMap.dense([3, 2])) == {}


def test_encode_prunes_only():
    assert encode_domain(DomainState.of({0, 1}), ONE_VAR) == {3: False}


def test_encode_rejects_wrong_variable_count():
    with pytest.raises(StructureError):
        encode_domain(DomainState.full([3, 3]), ONE_VAR)


def test_decode_false_literals():
    assert decode_assignment({2: False, 3: False}, ONE_VAR) == DomainState.of({0})


def test_decode_all_unset_is_initial():
    assert decode_assignment({}, ONE_VAR) == DomainState.full([3])


def test_decode_ignores_true():
    a = decode_assignment({1: True, 2: False, 3: False}, ONE_VAR)
    assert a == decode_assignment({2: False, 3: False}, ONE_VAR)


def test_instantiations_of_singleton():
    reps = dict(instantiations(DomainState.of({0}), ONE_VAR))
    assert reps == {
        "canonical": {1: True, 2: False, 3: False},
        "false-only": {2: False, 3: False},
    }


@pytest.mark.parametrize(
    "sizes, count", [([2, 2], 9), ([1], 1), ([3, 3, 3], 343), ([2, 3], 21)]
)
def test_enumeration_counts(sizes, count):
    states = list(enumerate_domain_states(sizes))
    assert len(states) == count
    assert len(set(states)) == count


def test_enumeration_accepts_variables_and_is_ordered():
    states = list(enumerate_domain_states([CspVariable(0, 2)]))
    assert states == [DomainState.of({0}), DomainState.of({1}), DomainState.of({0, 1})]


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded) as info:
        list(enumerate_domain_states([5, 5], budget=9))
    assert info.value.required == 10


def test_restrict_and_subset():
    s = DomainState.of({0, 1}, {0, 2})
    assert s.restrict(1, 2) == DomainState.of({0, 1}, {2})
    assert s.restrict(1, 1).is_wipeout
    assert s.restrict(0, 0).issubset(s)
    assert not s.issubset(s.restrict(0, 0))


sizes_st = st.lists(st.integers(1, 3), min_size=1, max_size=3)


@st.composite
def state_pairs(draw):
    sizes = draw(sizes_st)
    big, small = [], []
    for d in sizes:
        vals = draw(st.sets(st.integers(0, d - 1), min_size=1))
        sub = draw(st.sets(st.sampled_from(sorted(vals)), min_size=1))
        big.append(vals)
        small.append(sub)
    return sizes, DomainState.of(*big), DomainState.of(*small)


@given(state_pairs())
def test_round_trip(data):
    sizes, s, _ = data
    emap = DirectEncodingMap.dense(sizes)
    assert decode_assignment(encode_domain(s, emap), emap) == s


@given(state_pairs())
def test_encode_is_antitone(data):
    sizes, big, small = data
    emap = DirectEncodingMap.dense(sizes)
    false_big = {v for v, b in encode_domain(big, emap).items() if not b}
    false_small = {v for v, b in encode_domain(small, emap).items() if not b}
    assert false_big <= false_small


@given(sizes_st)
def test_count_formula(sizes):
    expected = 1
    for d in sizes:
        expected *= 2**d - 1
    assert sum(1 for _ in enumerate_domain_states(sizes)) == expected


def test_direct_encoding_clauses():
    emap = DirectEncodingMap.dense([3, 1])
    assert emap.at_least_one() == [(1, 2, 3), (4,)]
    assert emap.at_most_one() == [(-1, -2), (-1, -3), (-2, -3)]
    assert emap.literal_of()[4] == (1, 0)


def test_table_round_trip():
    c = ExtensionalConstraint.table([2, 3], [(0, 0), (1, 2)])
    text = format_table(c)
    assert text == "table 2 2 3\n0 0\n1 2\n"
    assert parse_table("# comment\n" + text) == c


@pytest.mark.parametrize(
    "text",
    [
        "",
        "tabel 1 2\n0\n",
        "table 2 2\n0 0\n",
        "table 1 2\n0 0\n",
        "table 1 2\n2\n",
        "table 1 2\n0\n0\n",
        "table 1 2\nx\n",
    ],
)
def test_table_parse_errors(text):
    with pytest.raises(ParseError):
        parse_table(text)


def test_constraint_invariants():
    with pytest.raises(StructureError):
        ExtensionalConstraint.table([2], [(0,), (0,)])
    with pytest.raises(StructureError):
        CspVariable(0, 0)
