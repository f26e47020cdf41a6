"""The p-adic L-function of 11a at p = 5, built two ways.

First from the overconvergent lift of the p-stabilised symbol, then from
Riemann sums of the classical symbol at each character.  The two agree
on every digit the lift claims.

    python demos/01_riemann_sums_11a.py
"""

from bcpadic.characters import primitive_characters
from bcpadic.lfunction import evaluate, form_lfunction, form_lifts, form_oracle, lvalue_from_exact

p = 5
lifts = form_lifts("11a", p, 25, 20)
Lp = form_lfunction(lifts)
print(f"11a at p={p}: a_p = {lifts.a_p}, ordinary = {Lp.ordinary}")
print(f"moment precision of the lift: {lifts.lifts[0].precision[:8]} ...")

# total mass: the value at the trivial character
mass = Lp.total_mass()
print(f"total mass: valuation {mass.valuation()}, known to {mass.precision} digits")

print("\ncharacter  digits  agrees with the Riemann sum")
for chi in primitive_characters(p) + primitive_characters(p * p)[:6]:
    r = evaluate(Lp, chi)
    exact = lvalue_from_exact(form_oracle(lifts, chi), p, r.precision, alpha=Lp.alpha, h=Lp.h)
    print(f"{chi.label():>9}  {r.precision:>6}  {r.value.agrees_with(exact)}")
