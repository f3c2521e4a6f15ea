"""Command-line front end.

Every verb reads its inputs from files (``-`` for standard input) and writes
its artifact to standard output or ``-o``.  Exit status is 0 on success,
1 when a validation or equivalence check fails, 2 on usage, parse or
refusal errors.
"""

from __future__ import annotations

import argparse
import sys

from . import fixtures
from .circuit import Circuit, format_circuit, parse_circuit
from .cnf import format_dimacs, parse_dimacs
from .csp import DEFAULT_STATE_BUDGET, DirectEncodingMap, format_table, parse_table
from .decomposition import (
    MODES,
    CheckerDecomposition,
    PropagatorDecomposition,
    from_formula,
    validate_checker_decomposition,
    validate_propagator_decomposition,
)
from .errors import (
    BudgetExceeded,
    NormalizationError,
    NotMonotoneError,
    ParseError,
    StructureError,
)
from .oracle import (
    alldifferent_checker,
    bacchus_table_encoding,
    enumeration_checker,
    lift_checker_to_propagator,
)
from .transforms import (
    checker_to_circuit,
    checker_to_propagator,
    circuit_to_checker,
    normalize,
    propagator_to_checker,
)
from .verify import compare_on_assignments, compare_on_states

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _is_dimacs(text: str) -> bool:
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        return line[0] in "cp"
    return False


def _load_decomposition(path: str):
    return from_formula(parse_dimacs(_read(path)))


def _load_checker(path: str) -> CheckerDecomposition:
    d = _load_decomposition(path)
    if not isinstance(d, CheckerDecomposition):
        raise UsageError(f"{path}: expected a checker decomposition (needs an output variable)")
    return d


def _load_propagator(path: str) -> PropagatorDecomposition:
    d = _load_decomposition(path)
    if not isinstance(d, PropagatorDecomposition):
        raise UsageError(f"{path}: expected a propagator decomposition (has an output variable)")
    return d


def _load_artifact(path: str):
    text = _read(path)
    if _is_dimacs(text):
        return from_formula(parse_dimacs(text))
    return parse_circuit(text)


def _domains(spec: str | None, n_inputs: int) -> DirectEncodingMap:
    if spec is None:
        return DirectEncodingMap.dense([1] * n_inputs)
    try:
        sizes = [int(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"--domains expects comma-separated sizes, got {spec!r}") from None
    if any(d < 1 for d in sizes) or sum(sizes) != n_inputs:
        raise UsageError(f"--domains {spec} must be positive and sum to {n_inputs} inputs")
    return DirectEncodingMap.dense(sizes)


def _oracle(spec: str, kind: str):
    """Checker or propagator oracle from ``table:<file>`` / ``alldiff:<n>:<d>``."""
    name, _, rest = spec.partition(":")
    if name == "table" and rest:
        c = parse_table(_read(rest))
        checker, sizes = enumeration_checker(c), c.domain_sizes
    elif name == "alldiff":
        try:
            n, d = (int(x) for x in rest.split(":"))
        except ValueError:
            raise UsageError("--oracle alldiff:<n>:<d> needs two integers") from None
        checker, sizes = (lambda s: alldifferent_checker(n, s)), (d,) * n
    else:
        raise UsageError(f"unknown oracle {spec!r}; use table:<file> or alldiff:<n>:<d>")
    if kind == "propagator":
        return lift_checker_to_propagator(checker), tuple(sizes)
    return checker, tuple(sizes)


# ---------------------------------------------------------------------------
# verbs


def cmd_encode_table(args):
    c = parse_table(_read(args.table))
    return format_dimacs(bacchus_table_encoding(c, at_most_one=args.amo).formula)


def cmd_prop_to_checker(args):
    return format_dimacs(propagator_to_checker(_load_propagator(args.cnf)).formula)


def cmd_checker_to_prop(args):
    return format_dimacs(checker_to_propagator(_load_checker(args.cnf)).formula)


def cmd_normalize(args):
    d = normalize(_load_checker(args.cnf), args.strip, args.budget)
    return format_dimacs(d.formula)


def cmd_to_circuit(args):
    return format_circuit(checker_to_circuit(_load_checker(args.cnf)))


def cmd_to_cnf(args):
    s = parse_circuit(_read(args.circuit))
    return format_dimacs(circuit_to_checker(s, _domains(args.domains, len(s.inputs))).formula)


def cmd_validate(args):
    d = _load_decomposition(args.cnf)
    kind = "checker" if isinstance(d, CheckerDecomposition) else "propagator"
    oracle, sizes = _oracle(args.oracle, kind)
    if sizes != d.encoding.domain_sizes:
        raise UsageError(
            f"oracle domain sizes {list(sizes)} do not match the encoding "
            f"{list(d.encoding.domain_sizes)}"
        )
    run = validate_checker_decomposition if kind == "checker" else (
        validate_propagator_decomposition
    )
    report = run(d, oracle, mode=args.mode, budget=args.budget)
    return report.to_text(), EXIT_OK if report.passed else EXIT_FAIL


def _family(artifact) -> str:
    return "propagator" if isinstance(artifact, PropagatorDecomposition) else "checker"


def cmd_verify_equiv(args):
    a, b = _load_artifact(args.first), _load_artifact(args.second)
    if _family(a) != _family(b):
        raise UsageError("cannot compare a propagator with a checker or circuit")
    emap = None
    for art in (a, b):
        if not isinstance(art, Circuit):
            emap = art.encoding
            break
    if emap is None:
        emap = _domains(args.domains, len(a.inputs))
    for art in (a, b):
        if not isinstance(art, Circuit) and art.encoding.domain_sizes != emap.domain_sizes:
            raise UsageError("the two artifacts use different domain sizes")
    lines = [f"kind {_family(a)}"]
    if _family(a) == "checker":
        inputs = sorted(emap.prop_vars())
        for art in (a, b):
            if isinstance(art, Circuit) and len(art.inputs) != len(inputs):
                raise UsageError("circuit inputs do not match the encoding")
        diffs = compare_on_assignments(a, b, inputs, args.budget)
        rows = [
            f"difference assignment {_fmt_assignment(p, inputs)} | first z "
            f"{'FALSE' if fa else 'not FALSE'} | second z {'FALSE' if fb else 'not FALSE'}"
            for p, fa, fb in diffs
        ]
    else:
        diffs = compare_on_states(a, b, emap, args.budget)
        rows = [f"difference state {s} | first {ba} | second {bb}" for s, ba, bb in diffs]
    lines.append(f"differences {len(diffs)}")
    lines.append(f"verdict {'equivalent' if not diffs else 'different'}")
    return "\n".join(lines + rows) + "\n", EXIT_OK if not diffs else EXIT_FAIL


def _fmt_assignment(a, inputs) -> str:
    sym = {None: "*", False: "0", True: "1"}
    return "".join(sym[a.get(v)] for v in inputs)


FIXTURES = {
    "example1": lambda: format_dimacs(fixtures.example1().formula),
    "example1-table": lambda: format_table(fixtures.table_constraint()),
    "example2": lambda: format_dimacs(fixtures.example2().formula),
    "example3": lambda: format_circuit(fixtures.example3_circuit()),
    "example4": lambda: format_dimacs(fixtures.example4().formula),
    "example4-circuit": lambda: format_circuit(fixtures.example4_circuit()),
}


def cmd_fixtures(args):
    return FIXTURES[args.name]()


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cnfdecomp",
        description="CNF decompositions of propagators and checkers, and monotone circuits.",
    )
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, func, help):
        sp = sub.add_parser(name, help=help, description=help)
        sp.set_defaults(func=func)
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        return sp

    def budget(sp):
        sp.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET,
                        help="log2 of the largest state space to enumerate (default %(default)s)")

    sp = verb("encode-table", cmd_encode_table, "table constraint -> propagator CNF")
    sp.add_argument("table")
    sp.add_argument("--amo", action="store_true", help="also emit at-most-one clauses")

    sp = verb("prop-to-checker", cmd_prop_to_checker, "propagator CNF -> checker CNF")
    sp.add_argument("cnf")
    sp = verb("checker-to-prop", cmd_checker_to_prop, "checker CNF -> propagator CNF")
    sp.add_argument("cnf")

    sp = verb("normalize", cmd_normalize, "checker CNF -> exactly-one-negative checker CNF")
    sp.add_argument("cnf")
    sp.add_argument("--strip", choices=("remove", "substitute"), default="remove")
    budget(sp)

    sp = verb("to-circuit", cmd_to_circuit, "normalized checker CNF -> monotone circuit")
    sp.add_argument("cnf")
    sp = verb("to-cnf", cmd_to_cnf, "monotone circuit -> checker CNF (Tseitin)")
    sp.add_argument("circuit")
    sp.add_argument("--domains", help="comma-separated domain sizes grouping the inputs")

    sp = verb("validate", cmd_validate, "check a CNF against an oracle on every domain state")
    sp.add_argument("cnf")
    sp.add_argument("--oracle", required=True, help="table:<file> or alldiff:<n>:<d>")
    sp.add_argument("--mode", choices=MODES, default="bare")
    budget(sp)

    sp = verb("verify-equiv", cmd_verify_equiv, "compare two artifacts on every domain state")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--domains", help="domain sizes when both artifacts are circuits")
    budget(sp)

    sp = verb("fixtures", cmd_fixtures, "print a worked example")
    sp.add_argument("name", choices=sorted(FIXTURES))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (UsageError, ParseError, StructureError, NotMonotoneError,
            NormalizationError, BudgetExceeded, OSError) as exc:
        print(f"cnfdecomp {args.verb}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text, status = result if isinstance(result, tuple) else (result, EXIT_OK)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
