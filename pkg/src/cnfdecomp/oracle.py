"""Ground-truth consistency checkers and domain-consistency propagators."""

from __future__ import annotations

import itertools

from .cnf import ClauseSet, Role
from .csp import DirectEncodingMap, DomainState, ExtensionalConstraint
from .decomposition import CheckerFunction, PropagatorDecomposition, PropagatorFunction


def enumeration_checker(c: ExtensionalConstraint) -> CheckerFunction:
    """0 iff no tuple of ``c`` survives in the given domains."""
    scope, tuples = c.scope, c.tuples

    def check(state: DomainState) -> int:
        doms = [state.values[v] for v in scope]
        for t in tuples:
            if all(val in dom for val, dom in zip(t, doms)):
                return 1
        return 0

    return check


def lift_checker_to_propagator(f: CheckerFunction) -> PropagatorFunction:
    """Prune every ``X_i = j`` whose restriction makes ``f`` return 0."""

    def propagate(state: DomainState) -> DomainState:
        if state.is_wipeout:
            return DomainState.wipeout(len(state))
        out = []
        for i, vs in enumerate(state.values):
            keep = frozenset(j for j in vs if f(state.restrict(i, j)))
            if not keep:
                return DomainState.wipeout(len(state))
            out.append(keep)
        return DomainState(tuple(out))

    return propagate


def checker_from_propagator(p: PropagatorFunction) -> CheckerFunction:
    return lambda state: 0 if p(state).is_wipeout else 1


def max_matching(adj: list[list[int]]) -> dict[int, int]:
    """Kuhn's augmenting paths.  ``adj[u]`` lists right vertices of left ``u``.

    Returns right -> left.
    """
    match: dict[int, int] = {}

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match or augment(match[v], seen):
                match[v] = u
                return True
        return False

    for u in range(len(adj)):
        augment(u, set())
    return match


def alldifferent_checker(n: int, state: DomainState) -> int:
    """1 iff the value graph of the first ``n`` variables has a matching covering them."""
    adj = [sorted(state.values[i]) for i in range(n)]
    if any(not a for a in adj):
        return 0
    return int(len(max_matching(adj)) == n)


def alldifferent_table(n: int, d: int) -> ExtensionalConstraint:
    return ExtensionalConstraint.table([d] * n, itertools.permutations(range(d), n))


def bacchus_table_encoding(
    c: ExtensionalConstraint, *, at_most_one: bool = False
) -> PropagatorDecomposition:
    """One auxiliary per tuple, support clauses both ways, and a failure clause.

    Inputs x_{i,j} take ids ``1..N`` in (variable, value) order, tuple
    auxiliaries follow in table order.  Clause order: for each tuple its
    ``y_t -> x`` clauses, then for each literal its support clause (a
    negative unit when unsupported), then ``OR_t y_t``; optionally the
    direct encoding's at-most-one clauses last.
    """
    if not c.tuples:
        raise ValueError("empty table: no tuple variables to encode")
    if c.scope != tuple(range(c.arity)):
        raise ValueError("scope must be the variables 0..k-1")
    emap = DirectEncodingMap.dense(c.domain_sizes)
    nx = sum(c.domain_sizes)
    ys = list(range(nx + 1, nx + 1 + len(c.tuples)))
    clauses = []
    for y, t in zip(ys, c.tuples):
        for i, v in enumerate(t):
            clauses.append((-y, emap.var(i, v)))
    for i, d in enumerate(c.domain_sizes):
        for v in range(d):
            supports = [y for y, t in zip(ys, c.tuples) if t[i] == v]
            clauses.append((-emap.var(i, v), *supports))
    clauses.append(tuple(ys))
    if at_most_one:
        clauses += emap.at_most_one()
    roles = {v: Role.INPUT for v in emap.prop_vars()}
    roles.update({y: Role.AUX for y in ys})
    formula = ClauseSet(nx + len(ys), tuple(clauses), roles, emap.literal_of())
    return PropagatorDecomposition(
        formula, emap, {"tuples": len(c.tuples), "at_most_one": at_most_one}
    )
