"""Command-line front end.

Exit codes: 0 satisfiable, 1 unsatisfiable, 2 unknown, 3 usage or input
errors, 4 internal failures.  `solve --json` emits one JSON object with the
status, the fragment classification, an optional witness, and basic stats.

Witness coordinates are power sums over the instance's prime, serialized as
{"p": prime, "terms": [[coefficient, exponent], ...]} with rational
coefficients as strings; plain rational coordinates use "p": 0 and a single
term at exponent 0.  A "value" field with the exact rational value is added
whenever materializing it fits under the exponent guard (see --guard and the
PADIC_GUARD environment variable).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .combiner import solve_combined
from .dispatch import geq_problem_of
from .errors import InputError, InternalError, OverflowGuardError, ParseError
from .model import (
    Fragment,
    ImmediateUnsat,
    Instance,
    Status,
    classify,
    instance_size,
    normalize,
)
from .parser import parse_instance, serialize_instance
from .rational import DEFAULT_EXPONENT_GUARD, PowerSum, as_fraction
from .solver_geq import solve_geq
from .solver_leq import solve_leq
from .testkit import (
    random_instance,
    sized_geq_problem,
    sized_leq_problem,
    smith_oracle_geq,
    verify_witness,
)

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3
EXIT_INTERNAL = 4

_STATUS_EXIT = {
    Status.SAT: EXIT_SAT,
    Status.UNSAT: EXIT_UNSAT,
    Status.UNKNOWN: EXIT_UNKNOWN,
}


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here says 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _default_guard() -> int:
    raw = os.environ.get("PADIC_GUARD")
    if raw is None:
        return DEFAULT_EXPONENT_GUARD
    try:
        value = int(raw)
        if value <= 0:
            raise ValueError
        return value
    except ValueError:
        raise InputError(f"PADIC_GUARD must be a positive integer, got {raw!r}") from None


def _coordinate_json(value, guard: int) -> dict:
    if isinstance(value, PowerSum):
        out = {
            "p": value.prime,
            "terms": [[str(c), e] for c, e in value.terms],
        }
        try:
            out["value"] = str(value.materialize(guard))
        except OverflowGuardError:
            pass
        return out
    q = as_fraction(value)
    return {"p": 0, "terms": [[str(q), 0]], "value": str(q)}


def _coordinate_text(value) -> str:
    if isinstance(value, PowerSum):
        v = value.valuation()
        return f"{value}  (v_{value.prime} = {v})"
    return str(as_fraction(value))


def _fragment_string(inst: Instance) -> str | None:
    norm = normalize(inst)
    if isinstance(norm, ImmediateUnsat):
        return None
    return classify(norm).describe()


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, frozenset):
        return sorted(obj)
    return obj


def _cmd_solve(args) -> int:
    guard = args.guard if args.guard is not None else _default_guard()
    inst = parse_instance(_read_source(args.file))
    started = time.perf_counter()
    verdict = solve_combined(inst, window=args.window, threads=args.threads)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    fragment = _fragment_string(inst)
    if args.json:
        payload = {
            "status": verdict.status.value,
            "fragment": fragment,
            "stats": {
                "size": instance_size(inst),
                "time_ms": round(elapsed_ms, 3),
            },
        }
        if verdict.code:
            payload["code"] = verdict.code
        if verdict.reason:
            payload["reason"] = verdict.reason
        if verdict.is_sat:
            payload["witness"] = (
                {
                    var: _coordinate_json(value, guard)
                    for var, value in verdict.witness.items()
                }
                if args.witness and verdict.witness is not None
                else None
            )
        if verdict.diagnostics and args.witness:
            payload["diagnostics"] = _jsonable(verdict.diagnostics)
        print(json.dumps(payload))
    else:
        print(verdict.status.value)
        if verdict.code:
            print(f"code: {verdict.code}")
        if verdict.reason:
            print(f"reason: {verdict.reason}")
        if fragment:
            print(f"fragment: {fragment}")
        if verdict.is_sat and args.witness:
            if verdict.witness is None:
                print("witness: decision only")
                for part, status in verdict.diagnostics.get("parts", {}).items():
                    print(f"  part {part}: {status}")
            else:
                for var in inst.variables:
                    print(f"{var} = {_coordinate_text(verdict.witness[var])}")
    return _STATUS_EXIT[verdict.status]


def _witness_from_json(raw: str) -> dict:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"witness is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("witness JSON must be an object mapping variables")
    witness = {}
    for var, entry in data.items():
        if isinstance(entry, str):
            witness[var] = Fraction(entry)
        elif isinstance(entry, dict):
            p = entry.get("p")
            terms = entry.get("terms", [])
            if p == 0:
                if len(terms) != 1 or terms[0][1] != 0:
                    raise InputError(
                        f"rational coordinate {var!r} must have one term at exponent 0"
                    )
                witness[var] = Fraction(terms[0][0])
            else:
                witness[var] = PowerSum(
                    p, tuple((Fraction(str(c)), int(e)) for c, e in terms)
                )
        else:
            raise InputError(f"coordinate {var!r} must be a string or an object")
    return witness


def _cmd_check(args) -> int:
    guard = args.guard if args.guard is not None else _default_guard()
    inst = parse_instance(_read_source(args.file))
    witness = _witness_from_json(_read_source(args.witness))
    result = verify_witness(inst, witness, guard=guard)
    if result:
        print("valid")
        return EXIT_SAT
    print(f"invalid ({result.code}): {result.detail}")
    return EXIT_UNSAT


def _cmd_classify(args) -> int:
    inst = parse_instance(_read_source(args.file))
    norm = normalize(inst)
    if isinstance(norm, ImmediateUnsat):
        print(f"unsat at normalization: v_{norm.prime}({norm.var}) {norm.reason}")
        return EXIT_UNSAT
    fc = classify(norm)
    print(fc.describe())
    for p, frag in sorted(fc.per_prime.items()):
        print(f"p = {p}: {frag.value} ({frag.label})")
    if fc.has_orders:
        print("order constraints present (rational LP side)")
    if not fc.per_prime and not fc.has_orders:
        print("no valuation or order constraints (plain linear algebra)")
    return EXIT_SAT


def _cmd_gen(args) -> int:
    primes = tuple(int(p) for p in args.primes.split(","))
    inst = random_instance(
        args.seed,
        fragment=args.fragment,
        num_vars=args.vars,
        num_eqs=args.eqs,
        coeff_mag=args.coeff_mag,
        bound_mag=args.bound_mag,
        primes=primes,
        num_orders=args.orders,
        cover_all_vars=args.cover,
    )
    sys.stdout.write(serialize_instance(inst))
    return EXIT_SAT


def _cmd_oracle(args) -> int:
    inst = parse_instance(_read_source(args.file))
    norm = normalize(inst)
    if isinstance(norm, ImmediateUnsat):
        print("unsat")
        return EXIT_UNSAT
    if norm.orders:
        raise InputError("the oracle handles valuation instances, not orders")
    primes = norm.primes
    if len(primes) != 1:
        raise InputError("the oracle needs exactly one prime")
    p = primes[0]
    fc = classify(norm)
    if fc.per_prime[p] is not Fragment.GEQ:
        raise InputError("the oracle decides lower-bound instances only")
    problem = geq_problem_of(norm, p)
    if any(problem.exact):
        raise InputError("the oracle does not take exact valuation pins")
    verdict = smith_oracle_geq(problem)
    print(verdict.status.value)
    return _STATUS_EXIT[verdict.status]


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'n':>5}  {'lower-bound (s)':>16}  {'upper-bound (s)':>16}")
    for n in sizes:
        started = time.perf_counter()
        solve_geq(sized_geq_problem(args.seed + n, n))
        geq_elapsed = time.perf_counter() - started
        started = time.perf_counter()
        solve_leq(sized_leq_problem(args.seed + n, n))
        leq_elapsed = time.perf_counter() - started
        print(f"{n:>5}  {geq_elapsed:>16.4f}  {leq_elapsed:>16.4f}")
    return EXIT_SAT


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="padicsat",
        description="decide linear systems with p-adic valuation and order constraints",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_guard(p):
        p.add_argument(
            "--guard",
            type=int,
            default=None,
            metavar="G",
            help="exponent guard for materializing power sums "
            "(default: PADIC_GUARD or 2**20)",
        )

    p_solve = sub.add_parser("solve", help="decide an instance file (- for stdin)")
    p_solve.add_argument("file", nargs="?", default="-")
    p_solve.add_argument("--witness", action="store_true", help="print the witness")
    p_solve.add_argument(
        "--window",
        type=int,
        default=None,
        metavar="W",
        help="assume v >= W when a search would otherwise be unbounded below",
    )
    p_solve.add_argument("--json", action="store_true", help="machine-readable output")
    p_solve.add_argument(
        "--threads", type=int, default=1, metavar="N", help="parallel branch workers"
    )
    add_guard(p_solve)
    p_solve.set_defaults(run=_cmd_solve)

    p_check = sub.add_parser("check", help="verify a witness JSON against an instance")
    p_check.add_argument("file")
    p_check.add_argument("witness", help="JSON file mapping variables to coordinates")
    add_guard(p_check)
    p_check.set_defaults(run=_cmd_check)

    p_classify = sub.add_parser("classify", help="report the fragment of an instance")
    p_classify.add_argument("file", nargs="?", default="-")
    p_classify.set_defaults(run=_cmd_classify)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument(
        "--fragment",
        choices=("geq", "leq", "eq", "mixed"),
        default="mixed",
    )
    p_gen.add_argument("--vars", type=int, default=4)
    p_gen.add_argument("--eqs", type=int, default=2)
    p_gen.add_argument("--orders", type=int, default=0)
    p_gen.add_argument("--primes", default="2,3")
    p_gen.add_argument("--coeff-mag", type=int, default=9)
    p_gen.add_argument("--bound-mag", type=int, default=3)
    p_gen.add_argument(
        "--cover",
        action="store_true",
        help="give every variable a nonzero coefficient somewhere",
    )
    p_gen.set_defaults(run=_cmd_gen)

    p_oracle = sub.add_parser(
        "oracle",
        help="decide a lower-bound instance through the independent "
        "divisibility oracle",
    )
    p_oracle.add_argument("file", nargs="?", default="-")
    p_oracle.set_defaults(run=_cmd_oracle)

    p_bench = sub.add_parser("bench", help="time the polynomial solvers")
    p_bench.add_argument("--sizes", default="8,16,32,64")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(run=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse raises SystemExit for -h as well (code 0)
        return int(exc.code or 0)
    try:
        return args.run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InternalError, OverflowGuardError) as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
