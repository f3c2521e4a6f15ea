"""CSP variables, finite domains, table constraints and the direct encoding.

Values are dense indices ``0..d-1`` per variable.  Propositional variables
are positive integers (DIMACS style); a partial assignment is a mapping from
variable id to ``True``/``False`` with missing ids read as unset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BudgetExceeded, ParseError, StructureError

DEFAULT_STATE_BUDGET = 24


@dataclass(frozen=True)
class CspVariable:
    id: int
    domain_size: int

    def __post_init__(self):
        if self.domain_size < 1:
            raise StructureError(f"variable {self.id}: empty initial domain")


@dataclass(frozen=True)
class DomainState:
    """Current domains, one frozenset of value indices per variable.

    A state in which every set is empty is the wipeout state returned by
    propagators that detect failure.
    """

    values: tuple[frozenset[int], ...]

    @classmethod
    def full(cls, domain_sizes: Sequence[int]) -> DomainState:
        return cls(tuple(frozenset(range(d)) for d in domain_sizes))

    @classmethod
    def wipeout(cls, n: int) -> DomainState:
        return cls((frozenset(),) * n)

    @classmethod
    def of(cls, *domains: Iterable[int]) -> DomainState:
        return cls(tuple(frozenset(d) for d in domains))

    def __len__(self):
        return len(self.values)

    @property
    def is_wipeout(self) -> bool:
        return any(not v for v in self.values)

    def restrict(self, var: int, value: int) -> DomainState:
        """The state with ``var`` narrowed to ``{value}``, all else unchanged."""
        vals = list(self.values)
        vals[var] = frozenset((value,)) & vals[var]
        return DomainState(tuple(vals))

    def issubset(self, other: DomainState) -> bool:
        return all(a <= b for a, b in zip(self.values, other.values))

    def literals(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i, vs in enumerate(self.values) for j in vs)

    def __str__(self):
        if self.is_wipeout and not any(self.values):
            return "wipeout"
        return " ".join(
            f"X{i}={{{','.join(map(str, sorted(vs)))}}}"
            for i, vs in enumerate(self.values)
        )


@dataclass(frozen=True)
class ExtensionalConstraint:
    """A table constraint: explicit solution tuples over ``scope``.

    ``domain_sizes[p]`` is the initial domain size of ``scope[p]``.
    """

    scope: tuple[int, ...]
    domain_sizes: tuple[int, ...]
    tuples: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.scope) != len(self.domain_sizes):
            raise StructureError("scope and domain sizes differ in length")
        if len(set(self.scope)) != len(self.scope):
            raise StructureError("repeated variable in scope")
        for d in self.domain_sizes:
            if d < 1:
                raise StructureError("domain sizes must be positive")
        if len(set(self.tuples)) != len(self.tuples):
            raise StructureError("duplicate tuple in table")
        for t in self.tuples:
            if len(t) != len(self.scope):
                raise StructureError(f"tuple {t} has wrong arity")
            for v, d in zip(t, self.domain_sizes):
                if not 0 <= v < d:
                    raise StructureError(f"tuple {t} leaves the initial domain")

    @classmethod
    def table(cls, domain_sizes: Sequence[int], tuples: Iterable[Sequence[int]]):
        """Constraint over variables ``0..k-1``."""
        return cls(
            tuple(range(len(domain_sizes))),
            tuple(domain_sizes),
            tuple(tuple(t) for t in tuples),
        )

    @property
    def arity(self) -> int:
        return len(self.scope)

    def variables(self) -> list[CspVariable]:
        return [CspVariable(v, d) for v, d in zip(self.scope, self.domain_sizes)]


@dataclass(frozen=True)
class DirectEncodingMap:
    """Bijection between CSP literals ``X_i = j`` and propositional variables.

    ``variables[i][j]`` is the id of x_{i,j}.
    """

    variables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for row in self.variables:
            if not row:
                raise StructureError("CSP variable with empty initial domain")
            for v in row:
                if v < 1 or v in seen:
                    raise StructureError(f"bad or repeated propositional id {v}")
                seen.add(v)

    @classmethod
    def dense(cls, domain_sizes: Sequence[int], first: int = 1) -> DirectEncodingMap:
        rows, nxt = [], first
        for d in domain_sizes:
            rows.append(tuple(range(nxt, nxt + d)))
            nxt += d
        return cls(tuple(rows))

    @property
    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.variables)

    @property
    def num_csp_vars(self) -> int:
        return len(self.variables)

    def var(self, i: int, j: int) -> int:
        try:
            return self.variables[i][j]
        except IndexError:
            raise StructureError(f"no propositional variable for X{i}={j}") from None

    def prop_vars(self) -> list[int]:
        return [v for row in self.variables for v in row]

    def literal_of(self) -> dict[int, tuple[int, int]]:
        """Inverse map: propositional id -> (csp var, value)."""
        return {
            v: (i, j) for i, row in enumerate(self.variables) for j, v in enumerate(row)
        }

    def max_var(self) -> int:
        return max(self.prop_vars())

    def at_most_one(self) -> list[tuple[int, ...]]:
        return [
            (-a, -b)
            for row in self.variables
            for a, b in itertools.combinations(row, 2)
        ]

    def at_least_one(self) -> list[tuple[int, ...]]:
        return [tuple(row) for row in self.variables]

    def domain_clauses(self) -> list[tuple[int, ...]]:
        return self.at_most_one() + self.at_least_one()


def encode_domain(state: DomainState, emap: DirectEncodingMap) -> dict[int, bool]:
    """Propositional image of ``state``: pruned values FALSE, singletons TRUE."""
    if len(state) != emap.num_csp_vars:
        raise StructureError(
            f"state has {len(state)} variables, map has {emap.num_csp_vars}"
        )
    out = {}
    for row, vs in zip(emap.variables, state.values):
        for j, v in enumerate(row):
            if j not in vs:
                out[v] = False
        if len(vs) == 1:
            (j,) = vs
            if j >= len(row):
                raise StructureError(f"value {j} outside the initial domain")
            out[row[j]] = True
    return out


def encode_domain_false_only(state: DomainState, emap: DirectEncodingMap) -> dict[int, bool]:
    """Like :func:`encode_domain` but never sets a singleton TRUE."""
    return {v: False for v, val in encode_domain(state, emap).items() if not val}


def instantiations(state: DomainState, emap: DirectEncodingMap):
    """Both propositional representations of ``state``, labelled.

    Yields ``("canonical", a)`` and, when it differs, ``("false-only", a)``.
    """
    a = encode_domain(state, emap)
    yield "canonical", a
    if any(a.values()):
        yield "false-only", {v: x for v, x in a.items() if not x}


def decode_assignment(a: Mapping[int, bool], emap: DirectEncodingMap) -> DomainState:
    """``j`` stays in ``D(X_i)`` unless x_{i,j} is FALSE."""
    return DomainState(
        tuple(
            frozenset(j for j, v in enumerate(row) if a.get(v, True) is not False)
            for row in emap.variables
        )
    )


def state_space_log2(domain_sizes: Sequence[int]) -> int:
    return sum(domain_sizes)


def check_budget(domain_sizes: Sequence[int], budget: int = DEFAULT_STATE_BUDGET):
    need = state_space_log2(domain_sizes)
    if need > budget:
        raise BudgetExceeded(need, budget)


def enumerate_domain_states(
    variables: Sequence[CspVariable] | Sequence[int],
    budget: int = DEFAULT_STATE_BUDGET,
) -> Iterator[DomainState]:
    """Every combination of nonempty subdomains, first variable slowest.

    Accepts either :class:`CspVariable` objects or plain domain sizes.
    Subsets of one variable are ordered by their bitmask.
    """
    sizes = [v.domain_size if isinstance(v, CspVariable) else int(v) for v in variables]
    check_budget(sizes, budget)
    per_var = [
        [
            frozenset(j for j in range(d) if mask >> j & 1)
            for mask in range(1, 1 << d)
        ]
        for d in sizes
    ]
    for combo in itertools.product(*per_var):
        yield DomainState(combo)


# ---------------------------------------------------------------------------
# constraint-table text format


def parse_table(text: str) -> ExtensionalConstraint:
    """Parse ``table <arity> <d_1> ... <d_k>`` followed by tuple lines."""
    header = None
    tuples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if header is None:
            if fields[0] != "table":
                raise ParseError("expected 'table' header", lineno)
            try:
                nums = [int(f) for f in fields[1:]]
            except ValueError:
                raise ParseError("non-integer in header", lineno) from None
            if not nums or len(nums) != nums[0] + 1:
                raise ParseError("header arity does not match domain count", lineno)
            header = nums[1:]
            continue
        try:
            t = tuple(int(f) for f in fields)
        except ValueError:
            raise ParseError("non-integer value in tuple", lineno) from None
        if len(t) != len(header):
            raise ParseError(f"tuple of length {len(t)}, arity is {len(header)}", lineno)
        tuples.append(t)
    if header is None:
        raise ParseError("missing 'table' header")
    try:
        return ExtensionalConstraint.table(header, tuples)
    except StructureError as exc:
        raise ParseError(str(exc)) from None


def format_table(c: ExtensionalConstraint) -> str:
    lines = [f"table {c.arity} " + " ".join(map(str, c.domain_sizes))]
    lines += [" ".join(map(str, t)) for t in c.tuples]
    return "\n".join(lines) + "\n"
