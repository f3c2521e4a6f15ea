"""Exhaustive behavioural comparison of decompositions and circuits."""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Sequence

from .circuit import Circuit, build_circuit_input, evaluate
from .cnf import ClauseSet, unit_propagate
from .csp import (
    DEFAULT_STATE_BUDGET,
    DirectEncodingMap,
    DomainState,
    decode_assignment,
    enumerate_domain_states,
    instantiations,
)
from .decomposition import CheckerDecomposition, PropagatorDecomposition
from .errors import BudgetExceeded


def partial_assignments(variables: Sequence[int]) -> Iterator[dict[int, bool]]:
    """All 3^n assignments of ``variables`` to unset/FALSE/TRUE."""
    for vals in itertools.product((None, False, True), repeat=len(variables)):
        yield {v: b for v, b in zip(variables, vals) if b is not None}


def complete_assignments(variables: Sequence[int]) -> Iterator[dict[int, bool]]:
    for vals in itertools.product((False, True), repeat=len(variables)):
        yield dict(zip(variables, vals))


def input_bits(a, variables: Sequence[int]) -> list[int]:
    """Circuit input for a partial assignment: FALSE -> 0, unset/TRUE -> 1."""
    return [0 if a.get(v) is False else 1 for v in variables]


def forces_false(f: ClauseSet, var: int, a) -> bool:
    return unit_propagate(f, a).final.get(var) is False


def checker_z_false(d: CheckerDecomposition, a) -> bool:
    return forces_false(d.formula, d.z, a)


def compare_checker_circuit(
    d: CheckerDecomposition, s: Circuit, assignments: Iterable[dict[int, bool]]
) -> list[dict[int, bool]]:
    """Assignments where "z forced FALSE" and "circuit outputs 0" disagree.

    Circuit inputs are matched to the checker's inputs in id order.
    """
    inputs = d.formula.inputs
    bad = []
    for a in assignments:
        if checker_z_false(d, a) != (evaluate(s, input_bits(a, inputs)) == 0):
            bad.append(a)
    return bad


def compare_checkers(
    d1: CheckerDecomposition, d2: CheckerDecomposition, assignments: Iterable[dict[int, bool]]
) -> list[dict[int, bool]]:
    return [a for a in assignments if checker_z_false(d1, a) != checker_z_false(d2, a)]


def behaviour(artifact, emap: DirectEncodingMap, state: DomainState):
    """What an artifact does at ``state``, in a form comparable across kinds.

    Checkers and circuits yield ``("dis-entailed", bool)`` per instantiation
    (circuits are evaluated on the characteristic input and repeat it);
    propagators yield the decoded domains, or ``"conflict"`` on an empty
    clause or a wiped-out domain.
    """
    if isinstance(artifact, Circuit):
        v = evaluate(artifact, build_circuit_input(state, emap, artifact)) == 0
        return tuple(("dis-entailed", v) for _ in instantiations(state, emap))
    if isinstance(artifact, CheckerDecomposition):
        return tuple(
            ("dis-entailed", checker_z_false(artifact, a))
            for _, a in instantiations(state, emap)
        )
    if isinstance(artifact, PropagatorDecomposition):
        out = []
        for _, a in instantiations(state, emap):
            res = unit_propagate(artifact.formula, a)
            dom = None if res.conflict else decode_assignment(res.final, emap)
            # a wiped-out domain is a failure just like an empty clause
            out.append("conflict" if dom is None or dom.is_wipeout else str(dom))
        return tuple(out)
    raise TypeError(f"cannot compare {type(artifact).__name__}")


def compare_on_states(a, b, emap: DirectEncodingMap, budget: int = DEFAULT_STATE_BUDGET):
    """Domain states on which the two artifacts behave differently."""
    diffs = []
    for state in enumerate_domain_states(list(emap.domain_sizes), budget):
        ba, bb = behaviour(a, emap, state), behaviour(b, emap, state)
        if ba != bb:
            diffs.append((state, ba, bb))
    return diffs


def z_false_on(artifact, inputs: Sequence[int], a) -> bool:
    """Checker: UP forces z FALSE.  Circuit: output 0 on the input bits."""
    if isinstance(artifact, Circuit):
        return evaluate(artifact, input_bits(a, inputs)) == 0
    return checker_z_false(artifact, a)


def compare_on_assignments(a, b, inputs: Sequence[int], budget: int = DEFAULT_STATE_BUDGET):
    """Partial input assignments where two checkers/circuits disagree on z.

    Circuit inputs are matched to ``inputs`` in order.  The 3^n sweep is
    refused when it exceeds ``2^budget`` assignments.
    """
    required = math.ceil(len(inputs) * math.log2(3))
    if required > budget:
        raise BudgetExceeded(required, budget, "assignments")
    return [
        (p, z_false_on(a, inputs, p), z_false_on(b, inputs, p))
        for p in partial_assignments(inputs)
        if z_false_on(a, inputs, p) != z_false_on(b, inputs, p)
    ]
