"""Propagator and checker decompositions and their exhaustive validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .cnf import ClauseSet, Role, unit_propagate
from .csp import (
    DEFAULT_STATE_BUDGET,
    DirectEncodingMap,
    DomainState,
    decode_assignment,
    enumerate_domain_states,
    instantiations,
)
from .errors import StructureError

CheckerFunction = Callable[[DomainState], int]
PropagatorFunction = Callable[[DomainState], DomainState]

MODES = ("bare", "domain", "either")


def _check_inputs(formula: ClauseSet, encoding: DirectEncodingMap):
    inputs = set(formula.inputs)
    mapped = set(encoding.prop_vars())
    if inputs != mapped:
        raise StructureError(
            "input variables do not match the direct encoding: "
            f"unmapped {sorted(inputs - mapped)}, missing {sorted(mapped - inputs)}"
        )


def _labelled(formula: ClauseSet, encoding: DirectEncodingMap) -> ClauseSet:
    labels = encoding.literal_of()
    if formula.labels == labels:
        return formula
    return ClauseSet(formula.num_vars, formula.clauses, formula.roles, labels)


def encoding_from_labels(formula: ClauseSet) -> DirectEncodingMap:
    """Rebuild the direct encoding from the ``(i, j)`` labels of the inputs."""
    rows: dict[int, dict[int, int]] = {}
    for v in formula.inputs:
        if v not in formula.labels:
            raise StructureError(f"input variable {v} has no (variable, value) label")
        i, j = formula.labels[v]
        rows.setdefault(i, {})[j] = v
    if sorted(rows) != list(range(len(rows))):
        raise StructureError("CSP variable indices of the inputs are not 0..n-1")
    out = []
    for i in range(len(rows)):
        row = rows[i]
        if sorted(row) != list(range(len(row))):
            raise StructureError(f"values of CSP variable {i} are not 0..d-1")
        out.append(tuple(row[j] for j in range(len(row))))
    return DirectEncodingMap(tuple(out))


def from_formula(formula: ClauseSet):
    """Checker if the formula has an output variable, propagator otherwise."""
    emap = encoding_from_labels(formula)
    if formula.output is None:
        return PropagatorDecomposition(formula, emap)
    return CheckerDecomposition(formula, emap)


@dataclass(frozen=True)
class PropagatorDecomposition:
    formula: ClauseSet
    encoding: DirectEncodingMap
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        _check_inputs(self.formula, self.encoding)
        if self.formula.output is not None:
            raise StructureError("a propagator decomposition has no output variable")
        object.__setattr__(self, "formula", _labelled(self.formula, self.encoding))
        self.metadata.setdefault("inputs", len(self.formula.inputs))
        self.metadata.setdefault("auxiliaries", len(self.formula.auxiliaries))
        self.metadata.setdefault("clauses", len(self.formula))

    __hash__ = None


@dataclass(frozen=True)
class CheckerDecomposition:
    formula: ClauseSet
    encoding: DirectEncodingMap
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        _check_inputs(self.formula, self.encoding)
        if self.formula.output is None:
            raise StructureError("a checker decomposition needs an output variable")
        object.__setattr__(self, "formula", _labelled(self.formula, self.encoding))
        self.metadata.setdefault("inputs", len(self.formula.inputs))
        self.metadata.setdefault("auxiliaries", len(self.formula.auxiliaries))
        self.metadata.setdefault("clauses", len(self.formula))

    __hash__ = None

    @property
    def z(self) -> int:
        return self.formula.output


def with_domain_clauses(formula: ClauseSet, encoding: DirectEncodingMap) -> ClauseSet:
    """``formula`` followed by the direct encoding's at-most-one/at-least-one clauses."""
    present = set(formula.clauses)
    extra = [c for c in encoding.domain_clauses() if c not in present]
    return formula.with_clauses(formula.clauses + tuple(extra))


@dataclass
class Counterexample:
    state: DomainState
    instantiation: str
    expected: str
    observed: str

    def __str__(self):
        return (
            f"state {self.state} | {self.instantiation} | "
            f"expected {self.expected} | observed {self.observed}"
        )


@dataclass
class ValidationReport:
    kind: str
    mode: str
    states_checked: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "fail" if self.counterexamples else "pass"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_text(self) -> str:
        lines = [
            f"kind {self.kind}",
            f"mode {self.mode}",
            f"states {self.states_checked}",
            f"verdict {self.verdict}",
        ]
        lines += [f"counterexample {c}" for c in self.counterexamples]
        return "\n".join(lines) + "\n"


def _fmt_state(s: DomainState) -> str:
    return "wipeout" if s.is_wipeout else str(s)


def _states(encoding: DirectEncodingMap, budget: int) -> Iterator[DomainState]:
    return enumerate_domain_states(list(encoding.domain_sizes), budget)


def _validate_checker_once(d, oracle, mode, budget) -> ValidationReport:
    formula = d.formula
    if mode == "domain":
        formula = with_domain_clauses(formula, d.encoding)
    own = len(d.formula.clauses)
    inputs = set(d.formula.inputs)
    z = d.z
    report = ValidationReport("checker", mode)
    for state in _states(d.encoding, budget):
        report.states_checked += 1
        expected = oracle(state)
        for label, a in instantiations(state, d.encoding):
            res = unit_propagate(formula, a)
            if res.conflict:
                report.counterexamples.append(
                    Counterexample(state, label, "no conflict", "conflict")
                )
                continue
            # forcing done by the direct-encoding clauses is not the checker's
            bad = [
                lit for lit, c in res.trail if abs(lit) in inputs and c < own
            ]
            if bad:
                report.counterexamples.append(
                    Counterexample(
                        state, label, "no input forced",
                        "forced " + " ".join(map(str, bad)),
                    )
                )
                continue
            z_false = res.final.get(z) is False
            if z_false != (expected == 0):
                report.counterexamples.append(
                    Counterexample(
                        state, label,
                        f"z {'FALSE' if expected == 0 else 'not FALSE'}",
                        f"z {'FALSE' if z_false else _zval(res.final.get(z))}",
                    )
                )
    return report


def _zval(x):
    return "UNSET" if x is None else ("TRUE" if x else "FALSE")


def _validate_propagator_once(d, oracle, mode, budget) -> ValidationReport:
    formula = d.formula
    if mode == "domain":
        formula = with_domain_clauses(formula, d.encoding)
    report = ValidationReport("propagator", mode)
    for state in _states(d.encoding, budget):
        report.states_checked += 1
        expected = oracle(state)
        for label, a in instantiations(state, d.encoding):
            res = unit_propagate(formula, a)
            if expected.is_wipeout:
                if not res.conflict:
                    report.counterexamples.append(
                        Counterexample(
                            state, label, "conflict",
                            f"no conflict, domains {decode_assignment(res.final, d.encoding)}",
                        )
                    )
                continue
            if res.conflict:
                report.counterexamples.append(
                    Counterexample(state, label, _fmt_state(expected), "conflict")
                )
                continue
            got = decode_assignment(res.final, d.encoding)
            if got != expected:
                report.counterexamples.append(
                    Counterexample(state, label, str(expected), str(got))
                )
    return report


def _dispatch(once, d, oracle, mode, budget):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "either":
        return once(d, oracle, mode, budget)
    bare = once(d, oracle, "bare", budget)
    if bare.passed:
        return bare
    dom = once(d, oracle, "domain", budget)
    return dom if dom.passed else bare


def validate_checker_decomposition(
    d: CheckerDecomposition,
    oracle: CheckerFunction,
    *,
    mode: str = "bare",
    budget: int = DEFAULT_STATE_BUDGET,
) -> ValidationReport:
    """Check the checker-decomposition conditions at every domain state.

    Each state is tried under both of its propositional representations
    (singletons TRUE, and FALSE literals only).  Propagation must never
    conflict or force an input, and must force the output FALSE exactly
    when ``oracle`` returns 0.  ``mode="domain"`` adds the direct encoding's
    clauses; ``"either"`` accepts whichever of the two passes and records it.
    """
    return _dispatch(_validate_checker_once, d, oracle, mode, budget)


def validate_propagator_decomposition(
    d: PropagatorDecomposition,
    oracle: PropagatorFunction,
    *,
    mode: str = "bare",
    budget: int = DEFAULT_STATE_BUDGET,
) -> ValidationReport:
    """Check that propagation prunes exactly what ``oracle`` prunes.

    Wipeouts must surface as a conflict.  Modes as for
    :func:`validate_checker_decomposition`.
    """
    return _dispatch(_validate_propagator_once, d, oracle, mode, budget)


def z_forced_false(d: CheckerDecomposition, a) -> bool:
    res = unit_propagate(d.formula, a)
    return res.final.get(d.z) is False


def role_summary(f: ClauseSet) -> dict[str, int]:
    return {r.value: len(f.vars_with(r)) for r in Role}
