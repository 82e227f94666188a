"""
Valuations and symbolic power sums
==================================

A tour of the arithmetic layer: p-adic valuations of rationals, and the
PowerSum normal form that lets us talk about numbers like 3**1000000 + 9
without ever writing their digits down.
"""

from fractions import Fraction

from padicsat import INF, PowerSum, leading_digit, valuation

# The p-adic valuation v_p(q) counts how many factors of p divide q.
# Negative values mean p divides the denominator.
print("v_2(40)   =", valuation(40, 2))          # 40 = 2**3 * 5
print("v_2(5/8)  =", valuation(Fraction(5, 8), 2))
print("v_3(9/2)  =", valuation(Fraction(9, 2), 3))
print("v_7(10)   =", valuation(10, 7))
print("v_5(0)    =", valuation(0, 5), "(zero divides by everything)")
print()

# The leading digit is the first nonzero base-p digit, i.e. q / p**v_p(q)
# reduced mod p.  Together (valuation, leading digit) behave like a
# "first-order approximation" of q in the p-adic world.
print("leading 3-adic digit of 45/7:", leading_digit(Fraction(45, 7), 3))
print()

# PowerSum stores a number as a formal sum of rational multiples of powers
# of p.  The exponents can be astronomically large; nothing is expanded.
big = PowerSum(3, ((Fraction(1), 10**6), (Fraction(9), 0)))
print("big =", big)
print("v_3(big) =", big.valuation())   # min over terms of exponent + v_3(coeff)

# Careful: the valuation is NOT always the smallest exponent.  Terms can
# interact when coefficients themselves carry powers of p.  Here the two
# terms describe the same value 3**2, written two ways:
cancel = PowerSum(3, ((Fraction(1), 1), (Fraction(-1, 3), 2)))
print("cancel =", cancel, "-> value", cancel.materialize(), "valuation", cancel.valuation())
print("is_zero:", cancel.is_zero())
assert cancel.valuation() == INF

# Arithmetic stays in the normal form: exponents strictly increasing,
# coefficients nonzero.
a = PowerSum(5, ((Fraction(2), -3), (Fraction(1), 4)))
b = PowerSum(5, ((Fraction(3), -3), (Fraction(-1), 4)))
print("a + b =", a + b)
print("(a + b).shift(2) =", (a + b).shift(2))
print("(a + b).scale(1/10) =", (a + b).scale(Fraction(1, 10)))

# materialize() turns the sum back into an exact Fraction, but refuses to
# build numbers with millions of digits unless you raise the guard.
small = PowerSum(2, ((Fraction(3), -4), (Fraction(1), 5)))
print("small materializes to", small.materialize())
try:
    big.materialize(guard=100)
except Exception as exc:
    print("guarded:", exc)
