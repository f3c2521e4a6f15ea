"""Conversions between propagator decompositions, checker decompositions
and monotone circuits, plus the normal-form rewrites a checker needs before
it can be turned into a layered circuit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .circuit import Circuit, Gate, GateKind, is_structurally_monotone, tseitin_encode
from .cnf import ClauseSet, Role, convert_3cnf, unit_propagate
from .csp import DEFAULT_STATE_BUDGET, DirectEncodingMap, enumerate_domain_states, instantiations
from .decomposition import CheckerDecomposition, PropagatorDecomposition
from .errors import NormalizationError, NotMonotoneError, StructureError


class ReifiedVariablePair(NamedTuple):
    base: int
    t: int
    f: int


# ---------------------------------------------------------------------------
# propagator <-> checker


def _true_var(lit, pairs):
    p = pairs[abs(lit)]
    return p.t if lit > 0 else p.f


def _false_var(lit, pairs):
    p = pairs[abs(lit)]
    return p.f if lit > 0 else p.t


def propagator_to_checker(d: PropagatorDecomposition) -> CheckerDecomposition:
    """Checker whose output is forced FALSE iff propagation on ``d`` conflicts.

    Every variable ``p`` gets a pair ``p_t``/``p_f`` recording that ``p``
    was derived TRUE/FALSE.  The formula, split to 3-CNF first, is simulated
    one implication per literal on these pairs, and ``p_t & p_f`` forces
    the output FALSE.
    """
    f3 = convert_3cnf(d.formula)
    nv = f3.num_vars
    pairs = {
        p: ReifiedVariablePair(p, nv + 2 * p - 1, nv + 2 * p) for p in range(1, nv + 1)
    }
    z = nv + 2 * nv + 1
    roles = {p: f3.roles.get(p, Role.AUX) for p in range(1, nv + 1)}
    for pr in pairs.values():
        roles[pr.t] = Role.AUX
        roles[pr.f] = Role.AUX
    roles[z] = Role.OUTPUT

    clauses = []
    for pr in pairs.values():
        clauses.append((-pr.base, pr.t))
        clauses.append((pr.base, pr.f))
    for c in f3.clauses:
        for k in reversed(range(len(c))):
            ante = [_false_var(c[j], pairs) for j in range(len(c)) if j != k]
            clauses.append(tuple(-a for a in ante) + (_true_var(c[k], pairs),))
    for pr in pairs.values():
        clauses.append((-pr.t, -pr.f, -z))

    formula = ClauseSet(z, tuple(clauses), roles, dict(d.formula.labels))
    meta = {
        "source_clauses": len(d.formula),
        "three_cnf_clauses": len(f3),
        "pairs": list(pairs.values()),
    }
    return CheckerDecomposition(formula, d.encoding, meta)


def _simplify(clause, false_vars, rename):
    out = []
    for lit in clause:
        v = abs(lit)
        if v in false_vars:
            if lit < 0:
                return None  # satisfied
            continue
        out.append(rename.get(v, v) * (1 if lit > 0 else -1))
    return tuple(out)


def checker_to_propagator(d: CheckerDecomposition) -> PropagatorDecomposition:
    """Propagator simulating a failed literal test per input literal.

    For every x_{i,j} a renamed copy of the checker is specialised to
    ``X_i = j`` by fixing the sibling literals x_{i,k} FALSE (clauses they
    satisfy are dropped, their positive literals deleted), and
    ``(z_copy, -x_{i,j})`` prunes x_{i,j} once the copy's output is FALSE.
    """
    C = d.formula
    emap = d.encoding
    nonin = sorted(v for v, r in C.roles.items() if r is not Role.INPUT)
    nxt = C.num_vars
    roles = {v: Role.INPUT for v in emap.prop_vars()}
    clauses = []
    copies = {}
    for i, row in enumerate(emap.variables):
        for j, x in enumerate(row):
            siblings = set(row) - {x}
            rename = {}
            for u in nonin:
                nxt += 1
                rename[u] = nxt
                roles[nxt] = Role.AUX
            copies[(i, j)] = rename
            for c in C.clauses:
                s = _simplify(c, siblings, rename)
                if s is None:
                    continue
                if not s:
                    raise NormalizationError(
                        f"clause {c} is empty once X{i}={j}; not a checker decomposition"
                    )
                clauses.append(s)
            clauses.append((rename[d.z], -x))
    formula = ClauseSet(nxt, tuple(clauses), roles, emap.literal_of())
    return PropagatorDecomposition(
        formula, emap, {"copies": copies, "source_clauses": len(C)}
    )


# ---------------------------------------------------------------------------
# normal forms


def strip_negative_input_literals(
    d: CheckerDecomposition, mode: str = "remove"
) -> CheckerDecomposition:
    """Get rid of negative input literals.

    ``remove`` drops every clause that has one.  ``substitute`` replaces
    ``-x_{i,j}`` by the positive literals of its siblings x_{i,k}, k != j,
    which is what the at-least-one clause of ``X_i`` makes it equivalent to.
    """
    if mode not in ("remove", "substitute"):
        raise ValueError(f"unknown mode {mode!r}")
    inputs = set(d.formula.inputs)
    lit_of = d.encoding.literal_of()
    out = []
    for c in d.formula.clauses:
        if not any(lit < 0 and -lit in inputs for lit in c):
            out.append(c)
            continue
        if mode == "remove":
            continue
        new: list[int] = []
        for lit in c:
            if lit < 0 and -lit in inputs:
                i, j = lit_of[-lit]
                new += [v for k, v in enumerate(d.encoding.variables[i]) if k != j]
            else:
                new.append(lit)
        new = list(dict.fromkeys(new))
        if not new:
            raise NormalizationError(f"clause {c} vanishes under substitution")
        out.append(tuple(new))
    return CheckerDecomposition(d.formula.with_clauses(out), d.encoding, {"strip": mode})


def _flip(f: ClauseSet, flip: set[int]) -> ClauseSet:
    return f.with_clauses(
        tuple(-lit if abs(lit) in flip else lit for lit in c) for c in f.clauses
    )


def auxiliaries_true_when_output_false(
    d: CheckerDecomposition, budget: int = DEFAULT_STATE_BUDGET
) -> tuple[set[int], set[int]]:
    """Auxiliaries forced TRUE, resp. FALSE, in some propagation that sets z FALSE."""
    aux = set(d.formula.auxiliaries)
    ever_true, ever_false = set(), set()
    for state in enumerate_domain_states(list(d.encoding.domain_sizes), budget):
        for _, a in instantiations(state, d.encoding):
            res = unit_propagate(d.formula, a)
            if res.conflict or res.final.get(d.z) is not False:
                continue
            for v in aux:
                val = res.final.get(v)
                if val is True:
                    ever_true.add(v)
                elif val is False:
                    ever_false.add(v)
    return ever_true, ever_false


def normalize_auxiliary_polarity(
    d: CheckerDecomposition, budget: int = DEFAULT_STATE_BUDGET
) -> CheckerDecomposition:
    """Flip every auxiliary that some output-FALSE propagation sets TRUE."""
    ever_true, ever_false = auxiliaries_true_when_output_false(d, budget)
    both = ever_true & ever_false
    if both:
        raise NormalizationError(
            f"auxiliaries {sorted(both)} are forced both ways at output-FALSE states"
        )
    if not ever_true:
        return CheckerDecomposition(d.formula, d.encoding, {"flipped": []})
    return CheckerDecomposition(
        _flip(d.formula, ever_true), d.encoding, {"flipped": sorted(ever_true)}
    )


def to_exactly_one_negative_form(d: CheckerDecomposition) -> CheckerDecomposition:
    """Drop clauses with several negative literals; reject all-positive ones."""
    inputs = set(d.formula.inputs)
    out, dropped = [], []
    for c in d.formula.clauses:
        if any(lit < 0 and -lit in inputs for lit in c):
            raise NormalizationError(
                f"clause {c} has a negative input literal; strip them first"
            )
        neg = [lit for lit in c if lit < 0]
        if len(neg) >= 2:
            dropped.append(c)
        elif not neg:
            raise NormalizationError(
                f"clause {c} has no negative literal and could force a variable TRUE"
            )
        else:
            out.append(c)
    return CheckerDecomposition(
        d.formula.with_clauses(out), d.encoding, {"dropped": dropped}
    )


def normalize(
    d: CheckerDecomposition, strip_mode: str = "remove", budget: int = DEFAULT_STATE_BUDGET
) -> CheckerDecomposition:
    """Strip negative inputs, fix auxiliary polarity, reduce to one negative per clause."""
    return to_exactly_one_negative_form(
        normalize_auxiliary_polarity(strip_negative_input_literals(d, strip_mode), budget)
    )


def is_exactly_one_negative(d: CheckerDecomposition) -> bool:
    inputs = set(d.formula.inputs)
    for c in d.formula.clauses:
        neg = [lit for lit in c if lit < 0]
        if len(neg) != 1 or -neg[0] in inputs:
            return False
    return True


# ---------------------------------------------------------------------------
# checker -> layered monotone circuit


@dataclass
class LayeredCircuitPlan:
    """Gates of the unswept layered circuit.

    ``clause_gates[(i, j)]`` lists the fan-in of the OR gate for clause ``j``
    at layer ``i``: ``("b", v)`` for input ``v``, ``("y", i-1, k)`` for a
    previous-layer variable gate.  ``var_gates[(i, k)]`` lists the clause
    gates ANDed into non-input variable ``k`` at layer ``i``.
    """

    layers: int
    inputs: list[int]
    nodes: list[int]
    output: int
    clause_gates: dict[tuple[int, int], tuple] = field(default_factory=dict)
    var_gates: dict[tuple[int, int], tuple] = field(default_factory=dict)
    omitted: list[str] = field(default_factory=list)

    @staticmethod
    def input_id(v):
        return f"x{v}"

    @staticmethod
    def clause_id(i, j):
        return f"c{j + 1}@{i}"

    @staticmethod
    def var_id(i, k):
        return f"y{k}@{i}"

    def _ref(self, ref):
        if ref[0] == "b":
            return self.input_id(ref[1])
        return self.var_id(ref[1], ref[2])

    def gate_layer(self) -> dict[str, int]:
        out = {self.clause_id(i, j): i for i, j in self.clause_gates}
        out.update({self.var_id(i, k): i for i, k in self.var_gates})
        return out

    def raw_circuit(self) -> Circuit:
        """Every planned gate, no sweep.  Undefined output becomes constant 1."""
        gates = []
        for i in range(1, self.layers + 1):
            for (li, j), fanin in sorted(self.clause_gates.items()):
                if li == i:
                    gates.append(Gate(self.clause_id(i, j), GateKind.OR,
                                      tuple(self._ref(r) for r in fanin)))
            for (li, k), fanin in sorted(self.var_gates.items()):
                if li == i:
                    gates.append(Gate(self.var_id(i, k), GateKind.AND,
                                      tuple(self.clause_id(i, j) for j in fanin)))
        out = self.var_id(self.layers, self.output)
        if (self.layers, self.output) not in self.var_gates:
            gates.append(Gate("one", GateKind.AND, ()))
            out = "one"
        return Circuit(tuple(self.input_id(v) for v in self.inputs), tuple(gates), out)

    def swept_circuit(self) -> tuple[Circuit, dict[str, int]]:
        """Collapse one-input variable gates, drop gates the output never reads,
        and number the survivors ``g1, g2, ...`` by layer.

        Returns the circuit and the layer of each surviving gate.
        """
        raw = self.raw_circuit()
        layer_of = self.gate_layer()
        alias: dict[str, str] = {}
        kept: list[Gate] = []
        for g in raw.gates:
            fanin = tuple(alias.get(a, a) for a in g.fanin)
            if g.id in layer_of and g.id.startswith("y") and len(fanin) == 1:
                alias[g.id] = fanin[0]
                continue
            kept.append(Gate(g.id, g.kind, fanin))
        out = alias.get(raw.output, raw.output)
        live = {out}
        for g in reversed(kept):
            if g.id in live:
                live.update(g.fanin)
        kept = [g for g in kept if g.id in live]
        names = {g.id: f"g{n}" for n, g in enumerate(kept, 1)}
        layers = {names[g.id]: layer_of.get(g.id, self.layers) for g in kept}
        gates = tuple(
            Gate(names[g.id], g.kind, tuple(names.get(a, a) for a in g.fanin))
            for g in kept
        )
        circuit = Circuit(raw.inputs, gates, names.get(out, out))
        return circuit, layers


def build_layered_plan(d: CheckerDecomposition) -> LayeredCircuitPlan:
    """One layer per non-input variable; layer ``i`` is the ``i``-th round
    of breadth-first unit propagation.
    """
    if not is_exactly_one_negative(d):
        raise NormalizationError(
            "checker is not in exactly-one-negative form with positive inputs"
        )
    f = d.formula
    inputs = f.inputs
    input_set = set(inputs)
    nodes = sorted(v for v, r in f.roles.items() if r is not Role.INPUT)
    plan = LayeredCircuitPlan(len(nodes), inputs, nodes, d.z)
    heads = {}
    for j, c in enumerate(f.clauses):
        heads.setdefault(-next(lit for lit in c if lit < 0), []).append(j)
    for i in range(1, plan.layers + 1):
        for j, c in enumerate(f.clauses):
            fanin = []
            ok = True
            for lit in c:
                if lit < 0:
                    continue
                if lit in input_set:
                    fanin.append(("b", lit))
                elif (i - 1, lit) in plan.var_gates:
                    fanin.append(("y", i - 1, lit))
                else:
                    ok = False
                    break
            if ok:
                plan.clause_gates[(i, j)] = tuple(fanin)
            else:
                plan.omitted.append(f"clause gate c{j + 1} at layer {i}")
        for k in nodes:
            defined = tuple(j for j in heads.get(k, ()) if (i, j) in plan.clause_gates)
            if len(defined) < len(heads.get(k, ())):
                plan.omitted.append(
                    f"{len(heads.get(k, ())) - len(defined)} input(s) of variable gate "
                    f"{k} at layer {i}"
                )
            if defined:
                plan.var_gates[(i, k)] = defined
            else:
                plan.omitted.append(f"variable gate {k} at layer {i}")
    return plan


def checker_to_circuit(d: CheckerDecomposition) -> Circuit:
    """Monotone circuit whose output is 0 iff propagation forces z FALSE.

    Input ``x{v}`` carries bit 0 when variable ``v`` is FALSE, 1 otherwise.
    """
    circuit, _ = build_layered_plan(d).swept_circuit()
    return circuit


def circuit_to_checker(s: Circuit, emap: DirectEncodingMap) -> CheckerDecomposition:
    """Tseitin encoding of a monotone circuit, with inputs tied to ``emap``.

    Circuit inputs are matched to x-variables in the map's id order.
    """
    if not is_structurally_monotone(s):
        raise NotMonotoneError(
            "circuit contains NOT gates; the Tseitin encoding of a non-monotone "
            "circuit need not propagate its output (e.g. OR(x1,x2) AND OR(x1,NOT x2))"
        )
    ids = emap.prop_vars()
    if ids != list(range(1, len(s.inputs) + 1)):
        raise StructureError(
            f"circuit has {len(s.inputs)} inputs; encoding must number x-variables "
            f"1..{len(s.inputs)}"
        )
    f = tseitin_encode(s)
    f = ClauseSet(f.num_vars, f.clauses, f.roles, emap.literal_of())
    return CheckerDecomposition(f, emap, {"gates": len(s)})
