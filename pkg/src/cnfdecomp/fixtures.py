"""The worked examples: a 2x2 table constraint, its propagator and checker
decompositions, a non-monotone circuit with an incomplete Tseitin encoding,
and a layered exactly-one-negative checker with its monotone circuit.
"""

from __future__ import annotations

from .circuit import Circuit, Gate, GateKind
from .cnf import ClauseSet, Role
from .csp import DirectEncodingMap, ExtensionalConstraint
from .decomposition import CheckerDecomposition, PropagatorDecomposition

# values a=0, b=1; x1a=1 x1b=2 x2a=3 x2b=4; y1..y3 = 5..7; z = 8
X1A, X1B, X2A, X2B = 1, 2, 3, 4
Y1, Y2, Y3 = 5, 6, 7
Z = 8

TABLE_TUPLES = ((0, 0), (1, 1), (0, 1))


def table_constraint() -> ExtensionalConstraint:
    """Two variables over {a, b} allowing <a,a>, <b,b>, <a,b>."""
    return ExtensionalConstraint.table([2, 2], TABLE_TUPLES)


def table_encoding() -> DirectEncodingMap:
    return DirectEncodingMap.dense([2, 2])


# clause table in reading order, implications written as clauses
EXAMPLE1_CLAUSES = (
    (-X1A, Y1, Y3), (-X2A, Y1), (-Y1, X1A), (-Y1, X2A),
    (-X1B, Y2), (-X2B, Y2, Y3), (-Y2, X1B), (-Y2, X2B),
    (-Y3, X1A), (-Y3, X2B), (Y1, Y2, Y3),
)

EXAMPLE2_CLAUSES = (
    (-Y1, X1A), (-Y1, X2A),
    (-Y2, X1B), (-Y2, X2B),
    (-Y3, X1A), (-Y3, X2B),
    (Y1, Y2, Y3, -Z),
)


def _table_roles(with_z: bool):
    roles = {v: Role.INPUT for v in (X1A, X1B, X2A, X2B)}
    roles.update({y: Role.AUX for y in (Y1, Y2, Y3)})
    if with_z:
        roles[Z] = Role.OUTPUT
    return roles


def example1() -> PropagatorDecomposition:
    emap = table_encoding()
    f = ClauseSet(7, EXAMPLE1_CLAUSES, _table_roles(False), emap.literal_of())
    return PropagatorDecomposition(f, emap)


def example2() -> CheckerDecomposition:
    emap = table_encoding()
    f = ClauseSet(8, EXAMPLE2_CLAUSES, _table_roles(True), emap.literal_of())
    return CheckerDecomposition(f, emap)


def example3_circuit() -> Circuit:
    """OR_1(x1, x2) AND OR_2(x1, NOT x2): monotone function, non-monotone circuit."""
    return Circuit(
        ("x1", "x2"),
        (
            Gate("g1", GateKind.OR, ("x1", "x2")),
            Gate("n2", GateKind.NOT, ("x2",)),
            Gate("g2", GateKind.OR, ("x1", "n2")),
            Gate("g3", GateKind.AND, ("g1", "g2")),
        ),
        "g3",
    )


# x1..x7 = 1..7, y1 = 8, y2 = 9, z = 10
EXAMPLE4_CLAUSES = (
    (1, 2, -8),
    (5, 6, -9),
    (4, 8, -9),
    (3, 9, -8),
    (8, 9, 7, -10),
)


def example4() -> CheckerDecomposition:
    # seven independent inputs, each modelled as a one-value CSP variable
    emap = DirectEncodingMap.dense([1] * 7)
    roles = {v: Role.INPUT for v in range(1, 8)}
    roles.update({8: Role.AUX, 9: Role.AUX, 10: Role.OUTPUT})
    f = ClauseSet(10, EXAMPLE4_CLAUSES, roles, emap.literal_of())
    return CheckerDecomposition(f, emap)


def example4_circuit() -> Circuit:
    """The three-layer monotone circuit built from :func:`example4`."""
    x = [f"x{k}" for k in range(1, 8)]
    return Circuit(
        tuple(x),
        (
            # layer 1: clause gates of c1, c2 (variable gates collapsed)
            Gate("g1", GateKind.OR, ("x1", "x2")),
            Gate("g2", GateKind.OR, ("x5", "x6")),
            # layer 2: clause gates c1..c4, variable gates y1, y2
            Gate("g3", GateKind.OR, ("x1", "x2")),
            Gate("g4", GateKind.OR, ("x5", "x6")),
            Gate("g5", GateKind.OR, ("x4", "g1")),
            Gate("g6", GateKind.OR, ("x3", "g2")),
            Gate("g7", GateKind.AND, ("g3", "g6")),
            Gate("g8", GateKind.AND, ("g4", "g5")),
            # layer 3: clause gate c5 feeding the output
            Gate("g9", GateKind.OR, ("g7", "g8", "x7")),
        ),
        "g9",
    )


EXAMPLE4_LAYERS = {1: ["g1", "g2"], 2: ["g3", "g4", "g5", "g6", "g7", "g8"], 3: ["g9"]}

FIXTURE_NAMES = (
    "example1", "example1-table", "example2", "example3", "example4", "example4-circuit",
)
