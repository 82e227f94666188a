"""Mixing bound directions is NP-complete, and graph coloring shows why.

A proper k-coloring (k = p**e) embeds into a system of linear equations
plus valuation windows: each vertex variable must be a unit times a power
of p below p**e, and each edge forces two vertices into different powers.
Deciding these mixed systems is exactly as hard as coloring, so the solver
runs a branch-and-propagate search -- complete, exact, but worst-case
exponential.
"""

import random
import time

from padicsat import solve_instance, verify_witness
from padicsat.testkit import Graph, brute_color, encode_coloring

# Complete graphs are the crispest family: K_n is k-colorable iff n <= k.
# In a satisfying witness the color of vertex v is x_v mod p**e (the
# endpoints of every edge are forced to differ mod p**e).
def colors_of(witness, g, p, e):
    out = {}
    for v in range(g.n):
        q = witness[f"x{v}"].materialize()
        out[v] = q.numerator * pow(q.denominator, -1, p**e) % p**e
    return out


for n in (3, 4):
    inst = encode_coloring(Graph.complete(n), 3, 1)
    verdict = solve_instance(inst)
    print(f"K{n} with 3 colors: {verdict.status.value}")
    if verdict.is_sat:
        assert verify_witness(inst, verdict.witness)
        print("   coloring:", colors_of(verdict.witness, Graph.complete(n), 3, 1))

# Four colors as 2**2 exercises the multi-digit window at p = 2.
for n in (4, 5):
    verdict = solve_instance(encode_coloring(Graph.complete(n), 2, 2))
    print(f"K{n} with 4 colors: {verdict.status.value}")
print()

# Odd cycles need 3 colors, even cycles only 2.
for n in (6, 7):
    two = solve_instance(encode_coloring(Graph.cycle(n), 2, 1))
    print(f"C{n} with 2 colors: {two.status.value}")

# Random graphs, checked against brute force.
rng = random.Random(42)
t0 = time.perf_counter()
mismatches = 0
for _ in range(25):
    g = Graph.random(rng.randrange(10**6), rng.randint(3, 7), density=0.5)
    p, e = rng.choice(((2, 1), (3, 1), (2, 2)))
    got = solve_instance(encode_coloring(g, p, e)).is_sat
    if got != brute_color(g, p**e):
        mismatches += 1
print()
print(f"25 random graphs vs brute force: {mismatches} mismatches "
      f"({time.perf_counter() - t0:.2f}s)")
