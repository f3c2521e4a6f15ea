"""Boolean circuits over AND/OR/NOT gates, monotonicity, Tseitin encoding."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .cnf import ClauseSet, Role
from .csp import DirectEncodingMap, DomainState
from .errors import BudgetExceeded, ParseError, StructureError

DEFAULT_INPUT_BUDGET = 20


class GateKind(str, enum.Enum):
    AND = "AND"
    OR = "OR"
    NOT = "NOT"


class Gate(NamedTuple):
    id: str
    kind: GateKind
    fanin: tuple[str, ...]


@dataclass(frozen=True)
class Circuit:
    """A DAG of gates listed in topological order.

    AND/OR gates with no fan-in are the constants 1 and 0 respectively.
    """

    inputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    output: str

    def __post_init__(self):
        gates = tuple(
            Gate(str(g[0]), GateKind(g[1]), tuple(map(str, g[2]))) for g in self.gates
        )
        object.__setattr__(self, "inputs", tuple(map(str, self.inputs)))
        object.__setattr__(self, "gates", gates)
        seen = set()
        for x in self.inputs:
            if x in seen:
                raise StructureError(f"duplicate id {x}")
            seen.add(x)
        for g in gates:
            if g.id in seen:
                raise StructureError(f"duplicate id {g.id}")
            for a in g.fanin:
                if a not in seen:
                    raise StructureError(
                        f"gate {g.id} reads {a}, which is not defined before it"
                    )
            if g.kind is GateKind.NOT and len(g.fanin) != 1:
                raise StructureError(f"NOT gate {g.id} needs exactly one input")
            seen.add(g.id)
        if self.output not in seen:
            raise StructureError(f"output {self.output} is not a gate or input")

    def __len__(self):
        return len(self.gates)

    def evaluate_all(self, b: Mapping[str, int]) -> dict[str, int]:
        val = {}
        for x in self.inputs:
            if x not in b:
                raise StructureError(f"no value for input {x}")
            val[x] = 1 if b[x] else 0
        for g in self.gates:
            if g.kind is GateKind.AND:
                val[g.id] = int(all(val[a] for a in g.fanin))
            elif g.kind is GateKind.OR:
                val[g.id] = int(any(val[a] for a in g.fanin))
            else:
                val[g.id] = 1 - val[g.fanin[0]]
        return val

    def gate(self, gid: str) -> Gate:
        for g in self.gates:
            if g.id == gid:
                return g
        raise KeyError(gid)


def evaluate(s: Circuit, b: Mapping[str, int] | Sequence[int]) -> int:
    """Value of the output gate.  ``b`` is a mapping or a bit vector in input order."""
    if not isinstance(b, Mapping):
        b = list(b)
        if len(b) != len(s.inputs):
            raise StructureError(f"{len(b)} input bits for {len(s.inputs)} inputs")
        b = dict(zip(s.inputs, b))
    return s.evaluate_all(b)[s.output]


def is_structurally_monotone(s: Circuit) -> bool:
    return all(g.kind is not GateKind.NOT for g in s.gates)


def is_semantically_monotone(s: Circuit, budget: int = DEFAULT_INPUT_BUDGET) -> bool:
    """Exhaustively check that raising any single input never lowers the output."""
    n = len(s.inputs)
    if n > budget:
        raise BudgetExceeded(n, budget, "inputs")
    table = [
        evaluate(s, [(mask >> k) & 1 for k in range(n)]) for mask in range(1 << n)
    ]
    for mask in range(1 << n):
        if not table[mask]:
            continue
        for k in range(n):
            if not mask >> k & 1 and not table[mask | 1 << k]:
                return False
    return True


def build_circuit_input(state: DomainState, emap: DirectEncodingMap, s: Circuit | None = None):
    """Characteristic input of ``state``: bit for x_{i,j} is 1 iff ``j`` in ``D(X_i)``.

    Keys are the propositional ids; with a circuit ``s`` whose inputs follow
    the map's variable order, keys are the circuit's input ids instead.
    """
    bits = {
        v: int(j in vs)
        for row, vs in zip(emap.variables, state.values)
        for j, v in enumerate(row)
    }
    if s is None:
        return bits
    order = sorted(bits)
    if len(order) != len(s.inputs):
        raise StructureError("circuit inputs do not match the encoding")
    return {x: bits[v] for x, v in zip(s.inputs, order)}


def split_fanin(s: Circuit) -> Circuit:
    """Left-deep chains for AND/OR gates with more than two (distinct) inputs."""
    gates = []
    for g in s.gates:
        fanin = tuple(dict.fromkeys(g.fanin))
        if g.kind is GateKind.NOT or len(fanin) <= 2:
            gates.append(Gate(g.id, g.kind, fanin))
            continue
        acc = fanin[0]
        for k, a in enumerate(fanin[1:-1], 1):
            tmp = f"{g.id}.{k}"
            gates.append(Gate(tmp, g.kind, (acc, a)))
            acc = tmp
        gates.append(Gate(g.id, g.kind, (acc, fanin[-1])))
    return Circuit(s.inputs, tuple(gates), s.output)


def tseitin_encode(s: Circuit) -> ClauseSet:
    """Clausal reification of every gate.

    Inputs get variables ``1..n`` in input order; gates get the following ids
    in topological order after fan-in splitting.  A NOT gate gets no variable
    of its own: consumers use the negated literal of its operand.  If the
    output itself is a NOT gate, or an input, a fresh output variable is
    reified against it.
    """
    s = split_fanin(s)
    lit: dict[str, int] = {}
    roles: dict[int, Role] = {}
    nxt = 0
    for x in s.inputs:
        nxt += 1
        lit[x] = nxt
        roles[nxt] = Role.INPUT
    clauses: list[tuple[int, ...]] = []

    def emit(c):
        c = tuple(dict.fromkeys(c))
        if not any(-l in c for l in c):
            clauses.append(c)

    for g in s.gates:
        if g.kind is GateKind.NOT:
            lit[g.id] = -lit[g.fanin[0]]
            continue
        nxt += 1
        v = nxt
        lit[g.id] = v
        roles[v] = Role.AUX
        ins = list(dict.fromkeys(lit[a] for a in g.fanin))
        if any(-a in ins for a in ins):
            # x AND NOT x / x OR NOT x: constant gate
            emit((-v,) if g.kind is GateKind.AND else (v,))
            continue
        if g.kind is GateKind.AND:
            for a in ins:
                emit((a, -v))
            emit(tuple(-a for a in ins) + (v,))
        else:
            for a in ins:
                emit((-a, v))
            emit(tuple(ins) + (-v,))
    out = lit[s.output]
    if out < 0 or roles[out] is Role.INPUT:
        nxt += 1
        clauses += [(out, -nxt), (-out, nxt)]
        out = nxt
    roles[out] = Role.OUTPUT
    return ClauseSet(nxt, tuple(clauses), roles)


# ---------------------------------------------------------------------------
# gate-list text format


def parse_circuit(text: str) -> Circuit:
    inputs: list[str] = []
    gates: list[Gate] = []
    output = None
    defined: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kw = fields[0]
        if output is not None:
            raise ParseError("nothing may follow the output line", lineno)
        if kw == "input":
            if len(fields) != 2:
                raise ParseError("expected 'input <id>'", lineno)
            if gates:
                raise ParseError("inputs must precede gates", lineno)
            inputs.append(fields[1])
            defined.add(fields[1])
        elif kw == "gate":
            if len(fields) < 3 or fields[2] not in GateKind.__members__:
                raise ParseError("expected 'gate <id> AND|OR|NOT <fanin...>'", lineno)
            for a in fields[3:]:
                if a not in defined:
                    raise ParseError(f"fan-in {a} used before definition", lineno)
            gates.append(Gate(fields[1], GateKind(fields[2]), tuple(fields[3:])))
            defined.add(fields[1])
        elif kw == "output":
            if len(fields) != 2:
                raise ParseError("expected 'output <id>'", lineno)
            output = fields[1]
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno)
    if output is None:
        raise ParseError("missing output line")
    try:
        return Circuit(tuple(inputs), tuple(gates), output)
    except StructureError as exc:
        raise ParseError(str(exc)) from None


def format_circuit(s: Circuit) -> str:
    lines = [f"input {x}" for x in s.inputs]
    for g in s.gates:
        lines.append(" ".join(["gate", g.id, g.kind.value, *g.fanin]))
    lines.append(f"output {s.output}")
    return "\n".join(lines) + "\n"


def all_bit_vectors(n: int):
    return itertools.product((0, 1), repeat=n)
