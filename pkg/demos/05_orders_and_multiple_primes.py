# Order constraints, several primes at once, and the text front end.
#
# Rational inequalities live in a different world than valuations: they see
# the archimedean size of a number, valuations see its divisibility.  The
# combiner makes them agree by (1) detecting order rows that are secretly
# equalities, via exact LP probes, and (2) deciding each prime against the
# enlarged equation system.

import os
import tempfile

from padicsat import classify, normalize, parse_instance, solve_combined
from padicsat.cli import main as cli_main

TEXT = """\
# one variable squeezed from both sides
vars x
ord 1 x <= 1
ord -1 x <= -1
val 2 : v(x) >= 1
"""

inst = parse_instance(TEXT)
print("fragment:", classify(normalize(inst)).describe())

verdict = solve_combined(inst)
print("squeezed system:", verdict.status.value, "--", verdict.reason)
print("order rows found to be implicit equalities:",
      verdict.diagnostics["implicit-equalities"])
# Both inequalities together force x = 1, but v_2(1) = 0 < 1: unsat, and the
# diagnostics name the rows that were converted.

# Strict inequalities carve out open sets, where there is always room for
# divisibility: some x in (0, 1) has v_2 >= 1 and v_3 >= 1 at once (6/7 is
# one such point; the solver proves existence without us guessing it).
open_interval = parse_instance(
    "vars x\n"
    "ord -1 x < 0\n"
    "ord 1 x < 1\n"
    "val 2 : v(x) >= 1\n"
    "val 3 : v(x) >= 1\n"
)
verdict = solve_combined(open_interval)
print("\n0 < x < 1 with 2|x and 3|x:", verdict.status.value)
print("per-part decisions:", verdict.diagnostics["parts"])
# Multi-prime answers are decision-only: each prime is certified separately
# and a single closed-form witness is not constructed.
print("witness:", verdict.witness)

# Infeasible order systems come with an exact Farkas certificate in the
# diagnostics -- a nonnegative combination of the rows that sums to an
# impossible row.
impossible = parse_instance("vars x y\nord 1 x + 1 y <= 0\nord -1 x - 1 y < 0\n")
verdict = solve_combined(impossible)
print("\nx + y <= 0 and x + y > 0:", verdict.status.value, f"[{verdict.code}]")
print("certificate:", verdict.diagnostics["certificate"])

# The same engine sits behind the command-line front end.
print("\n--- via the CLI ---")
with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as fh:
    fh.write(TEXT)
    path = fh.name
try:
    code = cli_main(["solve", path, "--json"])
    print("exit code:", code, "(0 sat, 1 unsat, 2 unknown)")
finally:
    os.unlink(path)
