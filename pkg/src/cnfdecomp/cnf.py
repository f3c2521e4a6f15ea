"""Role-annotated CNF, unit propagation, failed literal test, 3-CNF split.

Literals are nonzero ints: ``v`` is the positive literal of variable ``v``
and ``-v`` the negative one.  A clause is a tuple of literals.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ParseError, StructureError

Clause = tuple[int, ...]
PartialAssignment = Mapping[int, bool]


class Role(str, enum.Enum):
    INPUT = "input"
    AUX = "aux"
    OUTPUT = "output"


def check_clause(clause: Sequence[int]) -> Clause:
    clause = tuple(clause)
    if not clause:
        raise StructureError("empty clause")
    if 0 in clause:
        raise StructureError("literal 0 in clause")
    if len(set(clause)) != len(clause):
        raise StructureError(f"duplicate literal in clause {clause}")
    if any(-lit in clause for lit in clause):
        raise StructureError(f"tautological clause {clause}")
    return clause


@dataclass(frozen=True, eq=True)
class ClauseSet:
    """A CNF formula over variables ``1..num_vars`` with role tags.

    ``labels`` optionally ties input variables to CSP literals ``(i, j)``;
    it only matters for serialization.
    """

    num_vars: int
    clauses: tuple[Clause, ...]
    roles: dict[int, Role] = field(default_factory=dict)
    labels: dict[int, tuple[int, int]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(check_clause(c) for c in self.clauses))
        object.__setattr__(self, "roles", {v: Role(r) for v, r in self.roles.items()})
        for c in self.clauses:
            for lit in c:
                v = abs(lit)
                if v > self.num_vars:
                    raise StructureError(f"variable {v} exceeds declared {self.num_vars}")
                if v not in self.roles:
                    raise StructureError(f"variable {v} has no role")
        for v in self.roles:
            if not 1 <= v <= self.num_vars:
                raise StructureError(f"role for undeclared variable {v}")
        if sum(r is Role.OUTPUT for r in self.roles.values()) > 1:
            raise StructureError("more than one output variable")

    __hash__ = None

    def __len__(self):
        return len(self.clauses)

    def vars_with(self, role: Role) -> list[int]:
        return sorted(v for v, r in self.roles.items() if r is role)

    @property
    def inputs(self) -> list[int]:
        return self.vars_with(Role.INPUT)

    @property
    def auxiliaries(self) -> list[int]:
        return self.vars_with(Role.AUX)

    @property
    def output(self) -> int | None:
        out = self.vars_with(Role.OUTPUT)
        return out[0] if out else None

    def literal_count(self) -> int:
        return sum(len(c) for c in self.clauses)

    def with_clauses(self, clauses: Iterable[Sequence[int]], **changes) -> ClauseSet:
        kw = dict(num_vars=self.num_vars, roles=self.roles, labels=self.labels)
        kw.update(changes)
        return ClauseSet(clauses=tuple(tuple(c) for c in clauses), **kw)

    @cached_property
    def _engine(self) -> _Engine:
        return _Engine(self.num_vars, self.clauses)


class PropagationResult(NamedTuple):
    final: dict[int, bool]
    conflict: bool
    trail: list[tuple[int, int]]

    def forced(self, initial: PartialAssignment) -> dict[int, bool]:
        """Variables assigned by propagation, not by ``initial``."""
        return {v: b for v, b in self.final.items() if v not in initial}

    def is_false(self, var: int) -> bool:
        return self.final.get(var) is False


class _Engine:
    """Counter-based unit propagation compiled for one clause list.

    Each clause tracks how many of its literals are TRUE and how many are not
    yet FALSE; counts are updated at assignment time so they are exact
    whenever a clause is inspected.
    """

    def __init__(self, num_vars: int, clauses: Sequence[Clause]):
        self.num_vars = num_vars
        self.clauses = clauses
        self.sizes = [len(c) for c in clauses]
        # occ[lit] lists clauses containing lit; index lit + num_vars
        occ: list[list[int]] = [[] for _ in range(2 * num_vars + 1)]
        for idx, c in enumerate(clauses):
            for lit in c:
                occ[lit + num_vars].append(idx)
        self.occ = occ
        self.units = [idx for idx, c in enumerate(clauses) if len(c) == 1]

    def run(self, initial: PartialAssignment):
        clauses, occ, nv = self.clauses, self.occ, self.num_vars
        val: dict[int, bool] = {}
        ntrue = [0] * len(clauses)
        slack = list(self.sizes)  # literals not yet FALSE
        trail: list[tuple[int, int]] = []
        queue: deque[int] = deque()

        for v in sorted(initial):
            if v < 1 or v > nv:
                raise StructureError(f"assignment to undeclared variable {v}")
            lit = v if initial[v] else -v
            val[v] = lit > 0
            for c in occ[lit + nv]:
                ntrue[c] += 1
            for c in occ[nv - lit]:
                slack[c] -= 1
            queue.append(lit)

        pending = self.units
        while True:
            for c in pending:
                if ntrue[c]:
                    continue
                k = slack[c]
                if k == 0:
                    return val, True, trail
                if k == 1:
                    for lit in clauses[c]:
                        if abs(lit) not in val:
                            val[abs(lit)] = lit > 0
                            for c2 in occ[lit + nv]:
                                ntrue[c2] += 1
                            for c2 in occ[nv - lit]:
                                slack[c2] -= 1
                            queue.append(lit)
                            trail.append((lit, c))
                            break
            if not queue:
                return val, False, trail
            pending = occ[nv - queue.popleft()]


def unit_propagate(f: ClauseSet, a: PartialAssignment) -> PropagationResult:
    """Unit propagation of ``a`` over ``f`` to fixpoint or first conflict.

    Forced literals are processed first-in first-out; the clauses containing
    a literal's negation are visited in ascending index order.
    """
    val, conflict, trail = f._engine.run(a)
    return PropagationResult(val, conflict, trail)


def propagation_rounds(f: ClauseSet, a: PartialAssignment):
    """Breadth-first unit propagation.

    Each round forces, simultaneously, every literal that is unit under the
    assignment left by the previous round.  Returns ``(round_of, conflict)``
    where ``round_of[v]`` is the 1-based round in which ``v`` was forced.
    """
    val = dict(a)
    round_of: dict[int, int] = {}
    rnd = 0
    while True:
        rnd += 1
        forced: dict[int, bool] = {}
        for c in f.clauses:
            open_lits = []
            sat = False
            for lit in c:
                x = val.get(abs(lit))
                if x is None:
                    open_lits.append(lit)
                elif x == (lit > 0):
                    sat = True
                    break
            if sat:
                continue
            if not open_lits:
                return round_of, True
            if len(open_lits) == 1:
                lit = open_lits[0]
                if forced.get(abs(lit), lit > 0) != (lit > 0):
                    return round_of, True
                forced[abs(lit)] = lit > 0
        if not forced:
            return round_of, False
        for v, b in forced.items():
            val[v] = b
            round_of[v] = rnd


def replay_trail(a: PartialAssignment, trail: Sequence[tuple[int, int]]) -> dict[int, bool]:
    out = dict(a)
    for lit, _ in trail:
        out[abs(lit)] = lit > 0
    return out


def failed_literal_test(f: ClauseSet, a: PartialAssignment, lit: int) -> bool:
    """True iff asserting ``lit`` on top of ``a`` makes propagation conflict."""
    if abs(lit) in a:
        raise ValueError(f"literal {lit} is already assigned")
    probe = dict(a)
    probe[abs(lit)] = lit > 0
    return unit_propagate(f, probe).conflict


def convert_3cnf(f: ClauseSet) -> ClauseSet:
    """Split long clauses into a chain of 3-literal clauses.

    ``(l1, l2, ..., lk)`` becomes ``(l1, l2, s1), (-s1, l3, s2), ...,
    (-s_{k-3}, l_{k-1}, lk)`` with fresh auxiliaries ``s``.
    """
    nxt = f.num_vars
    roles = dict(f.roles)
    out: list[Clause] = []
    for c in f.clauses:
        if len(c) <= 3:
            out.append(c)
            continue
        nxt += 1
        roles[nxt] = Role.AUX
        out.append((c[0], c[1], nxt))
        for lit in c[2:-2]:
            nxt += 1
            roles[nxt] = Role.AUX
            out.append((-(nxt - 1), lit, nxt))
        out.append((-nxt, c[-2], c[-1]))
    return ClauseSet(nxt, tuple(out), roles, dict(f.labels))


# ---------------------------------------------------------------------------
# extended DIMACS


def format_dimacs(f: ClauseSet) -> str:
    lines = []
    for v in sorted(f.roles):
        r = f.roles[v]
        if r is Role.INPUT:
            i, j = f.labels.get(v, (-1, -1))
            lines.append(f"c role input {v} {i} {j}")
        else:
            lines.append(f"c role {r.value} {v}")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> ClauseSet:
    """Parse DIMACS with ``c role ...`` annotations.

    Variables without a role annotation default to auxiliary.
    """
    roles: dict[int, Role] = {}
    labels: dict[int, tuple[int, int]] = {}
    header = None
    clauses: list[Clause] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            fields = line.split()
            if len(fields) >= 3 and fields[1] == "role":
                try:
                    kind, v = fields[2], int(fields[3])
                    if kind == "input":
                        roles[v] = Role.INPUT
                        i, j = int(fields[4]), int(fields[5])
                        if i >= 0:
                            labels[v] = (i, j)
                    elif kind in ("aux", "output"):
                        roles[v] = Role(kind)
                    else:
                        raise ParseError(f"unknown role {kind!r}", lineno)
                except (IndexError, ValueError) as exc:
                    if isinstance(exc, ParseError):
                        raise
                    raise ParseError("malformed role annotation", lineno) from None
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError("malformed problem line", lineno)
            try:
                header = (int(fields[2]), int(fields[3]))
            except ValueError:
                raise ParseError("malformed problem line", lineno) from None
            continue
        if header is None:
            raise ParseError("clause before problem line", lineno)
        try:
            lits = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError("non-integer literal", lineno) from None
        for lit in lits:
            if lit == 0:
                if not pending:
                    raise ParseError("empty clause", lineno)
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise ParseError("missing problem line")
    if pending:
        raise ParseError("last clause not terminated by 0")
    num_vars, num_clauses = header
    if num_clauses != len(clauses):
        raise ParseError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    for c in clauses:
        for lit in c:
            roles.setdefault(abs(lit), Role.AUX)
    try:
        return ClauseSet(num_vars, tuple(clauses), roles, labels)
    except StructureError as exc:
        raise ParseError(str(exc)) from None
