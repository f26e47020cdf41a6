"""A critical-slope base change: 17a over Q(i) at p = 3.

a_3(17a) = 0, so alpha has slope 1/2 over Q.  3 is inert in Q(i), so
the base change has slope 1 at the prime above 3, which is critical for
weight 2 over K.  Its cyclotomic L-function is still available as the
product of the two supersingular L-functions over Q.

    python demos/03_critical_base_change.py
"""

from fractions import Fraction

from bcpadic.basechange import cyc_base_change_L, factorisation_check, inert_fields, supersingular_primes, transfer
from bcpadic.characters import primitive_characters
from bcpadic.eigenforms import form_symbols, load_eigenform
from bcpadic.lfunction import form_lifts

f = load_eigenform("17a")
primes = supersingular_primes(form_symbols("17a").plus, 50)
print("supersingular primes of 17a below 50 (by Hecke action):", primes)

p = primes[0]
K = inert_fields(p)[0]
data = transfer(f, p, K)
print(f"p={p}, K=Q(sqrt(-{K.d})): {data.splitting}, slope over K {data.slopes[0]}, critical {data.critical}")

lifts = form_lifts("17a", p, 25, 20)
bc = cyc_base_change_L(lifts, f, K)
for h in (Fraction(1), Fraction(1, 2)):
    r = bc.admissibility(h)
    print(f"admissible of order {h}: {r.admissible}  (depth minima {[str(m) for m in r.minima]})")

chars = primitive_characters(p) + primitive_characters(p**2) + primitive_characters(p**3)
rep = factorisation_check(bc, lifts, chars)
print(f"\n{len(chars)} characters, {rep.nonzero_rows} with nonzero prediction")
print("product / Artin prediction is one constant:", rep.constant_ratio)
