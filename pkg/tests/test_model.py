"""Instance model: normalization, fragment classification, size measure."""

import random
from fractions import Fraction

import pytest

from padicsat.errors import InputError
from padicsat.model import (
    Equation,
    Fragment,
    ImmediateUnsat,
    Instance,
    OrderConstraint,
    ValConstraint,
    VarProfile,
    Verdict,
    classify,
    classify_kinds,
    height,
    instance_size,
    normalize,
)
from padicsat.rational import INF, NEG_INF


def inst(variables, equations=(), valuations=(), orders=()):
    return Instance(
        variables=tuple(variables),
        equations=tuple(equations),
        valuations=tuple(valuations),
        orders=tuple(orders),
    )


def test_validation_rejects_malformed_instances():
    with pytest.raises(InputError):
        inst(["x", "x"])  # duplicate name
    with pytest.raises(InputError):
        inst(["x"], equations=[Equation.of([1, 2], 0)])  # wrong width
    with pytest.raises(InputError):
        inst(["x"], valuations=[ValConstraint(2, "y", ">=", 0)])  # undeclared
    with pytest.raises(InputError):
        ValConstraint(4, "x", ">=", 0)  # 4 is not prime
    with pytest.raises(InputError):
        ValConstraint(2, "x", "~", 0)  # unknown relation


def test_desugared_strict_relations():
    assert ValConstraint(3, "x", "<", 5).desugared() == ValConstraint(3, "x", "<=", 4)
    assert ValConstraint(3, "x", ">", 5).desugared() == ValConstraint(3, "x", ">=", 6)
    weak = ValConstraint(3, "x", ">=", 5)
    assert weak.desugared() == weak


def test_normalize_folds_profiles():
    i = inst(
        ["x", "y"],
        valuations=[
            ValConstraint(3, "x", ">=", -1),
            ValConstraint(3, "x", ">=", 2),
            ValConstraint(3, "x", "<=", 7),
            ValConstraint(3, "x", "!=", 4),
            ValConstraint(5, "y", "!=", 0),
        ],
    )
    norm = normalize(i)
    assert not isinstance(norm, ImmediateUnsat)
    px = norm.profile(3, "x")
    assert (px.lower, px.upper, px.excluded) == (2, 7, frozenset({4}))
    assert px.allow_infinity is False and px.exact is False
    py = norm.profile(5, "y")
    assert (py.lower, py.upper, py.excluded) == (NEG_INF, INF, frozenset({0}))
    assert py.allow_infinity is True
    # untouched pairs give the unconstrained profile
    assert norm.profile(3, "y").is_unconstrained()
    assert norm.profile(7, "x").is_unconstrained()
    assert norm.primes == (3, 5)


def test_normalize_equality_pins_and_marks_exact_at_two():
    i = inst(
        ["x", "y"],
        valuations=[
            ValConstraint(2, "x", "==", 3),
            ValConstraint(3, "y", "==", 1),
        ],
    )
    norm = normalize(i)
    px = norm.profile(2, "x")
    assert (px.lower, px.upper, px.exact) == (3, 3, True)
    py = norm.profile(3, "y")
    assert (py.lower, py.upper, py.exact) == (1, 1, False)


def test_normalize_detects_empty_windows():
    bad = normalize(
        inst(
            ["x"],
            valuations=[
                ValConstraint(2, "x", ">=", 5),
                ValConstraint(2, "x", "<=", 3),
            ],
        )
    )
    assert isinstance(bad, ImmediateUnsat)
    assert (bad.prime, bad.var) == (2, "x")

    pinned = normalize(
        inst(
            ["x"],
            valuations=[
                ValConstraint(3, "x", "==", 2),
                ValConstraint(3, "x", "!=", 2),
            ],
        )
    )
    assert isinstance(pinned, ImmediateUnsat)


def test_profile_admits():
    prof = VarProfile(lower=0, upper=INF, excluded=frozenset({2}))
    assert prof.admits(0) and prof.admits(3) and prof.admits(INF)
    assert not prof.admits(-1) and not prof.admits(2)
    capped = VarProfile(lower=NEG_INF, upper=4, allow_infinity=False)
    assert capped.admits(-100) and capped.admits(4)
    assert not capped.admits(5) and not capped.admits(INF)


def test_classification_table():
    assert classify_kinds(2, frozenset()) is Fragment.NONE
    assert classify_kinds(2, frozenset({">="})) is Fragment.GEQ
    assert classify_kinds(2, frozenset({">=", "=="})) is Fragment.GEQ
    assert classify_kinds(3, frozenset({">="})) is Fragment.GEQ
    assert classify_kinds(3, frozenset({"=="})) is Fragment.HARD
    assert classify_kinds(3, frozenset({"<=", "!="})) is Fragment.LEQ
    assert classify_kinds(2, frozenset({"!="})) is Fragment.LEQ
    assert classify_kinds(5, frozenset({">=", "<="})) is Fragment.HARD
    assert classify_kinds(2, frozenset({"==", "<="})) is Fragment.HARD
    assert Fragment.HARD.label == "NP-complete fragment"
    assert Fragment.GEQ.label == "in P"


def test_classify_summary():
    i = inst(
        ["x", "y"],
        valuations=[
            ValConstraint(2, "x", ">=", 0),
            ValConstraint(3, "y", "<=", 1),
            ValConstraint(3, "y", ">=", 0),
        ],
        orders=[OrderConstraint.of([1, 0], "<", 2)],
    )
    norm = normalize(i)
    fc = classify(norm)
    assert fc.per_prime == {2: Fragment.GEQ, 3: Fragment.HARD}
    assert fc.has_orders and fc.multi_prime
    assert fc.describe() == "2:GEQ,3:HARD,ord"
    assert classify(normalize(inst(["x"]))).describe() == "NONE"


def test_height_frozen_values():
    assert height(0) == 1
    assert height(1) == 1
    assert height(-1) == 1
    assert height(Fraction(3, 8)) == 6  # 1 + 2 + 3
    assert height(Fraction(-5, 3)) == 6  # 1 + 3 + 2
    assert height(INF) == 1 and height(NEG_INF) == 1


def test_instance_size_frozen_example():
    # two equations x + y = 0, x - y = 0: max dimension 2, eight unit entries
    i = inst(
        ["x", "y"],
        equations=[Equation.of([1, 1], 0), Equation.of([1, -1], 0)],
    )
    assert instance_size(i) == 8


def test_instance_size_counts_valuations_and_orders():
    base = inst(["x"])
    assert instance_size(base) == 1  # just the dimension floor
    with_val = inst(["x"], valuations=[ValConstraint(3, "x", ">=", 4)])
    # prime 3 has height 1+2=3, bound 4 height 1+2+0... h(4)=1+2=3
    assert instance_size(with_val) == 1 + height(3) + height(4)
    with_ord = inst(["x"], orders=[OrderConstraint.of([Fraction(3, 8)], "<", 1)])
    assert instance_size(with_ord) == 1 + height(Fraction(3, 8)) + height(1)


def test_normalize_is_idempotent_on_profiles():
    rng = random.Random(77)
    rels = [">=", "<=", "==", "!=", "<", ">"]
    for trial in range(50):
        vals = [
            ValConstraint(
                rng.choice([2, 3, 5]),
                rng.choice(["x", "y"]),
                rng.choice(rels),
                rng.randint(-4, 4),
            )
            for _ in range(rng.randint(0, 6))
        ]
        i = inst(["x", "y"], valuations=vals)
        norm = normalize(i)
        if isinstance(norm, ImmediateUnsat):
            continue
        # rebuild an instance spelling out each profile, renormalize, compare
        spelled = []
        for p in norm.primes:
            for var in ["x", "y"]:
                prof = norm.profile(p, var)
                if prof.is_unconstrained():
                    continue
                if prof.lower != NEG_INF:
                    rel = "==" if prof.lower == prof.upper else ">="
                    spelled.append(ValConstraint(p, var, rel, prof.lower))
                if prof.upper != INF and prof.lower != prof.upper:
                    spelled.append(ValConstraint(p, var, "<=", prof.upper))
                for d in prof.excluded:
                    spelled.append(ValConstraint(p, var, "!=", d))
        again = normalize(inst(["x", "y"], valuations=spelled))
        assert not isinstance(again, ImmediateUnsat)
        for p in norm.primes:
            for var in ["x", "y"]:
                a, b = norm.profile(p, var), again.profile(p, var)
                assert (a.lower, a.upper, a.excluded, a.allow_infinity) == (
                    b.lower,
                    b.upper,
                    b.excluded,
                    b.allow_infinity,
                ), f"trial {trial}: profile drift at p={p} var={var}"


def test_verdict_helpers():
    sat = Verdict.sat(witness={"x": 1})
    assert sat.is_sat and not sat.is_unsat and not sat.is_unknown
    unsat = Verdict.unsat("why", "because", extra=3)
    assert unsat.is_unsat and unsat.code == "why"
    assert unsat.diagnostics["extra"] == 3
    unk = Verdict.unknown("mixed-unbounded", "cannot enumerate")
    assert unk.is_unknown
