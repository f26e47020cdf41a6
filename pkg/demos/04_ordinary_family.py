"""The ordinary family through 11a at p = 5.

The lift is extended in a weight variable w = k - k0, truncated at
w^4.  At w = 0 it returns the direct lift; at k = 4 it gives a weight-6
U_5-eigen-symbol, to the precision the truncation allows.  The U_5
slope-0 count matches across truncations of the distribution module.

    python demos/04_ordinary_family.py
"""

from bcpadic.eigenforms import form_symbols
from bcpadic.lfunction import mellin_square_holds
from bcpadic.modsym import p_stabilise
from bcpadic.overconvergent import (
    family_lift, lift_noncritical, specialise_family, symbols_agree, truncation_precision, up_char_series,
)

p, Mw = 5, 4
direct = lift_noncritical(p_stabilise(form_symbols("11a").plus, p, 1), 12, 14)
fam = family_lift(direct, Mw)
print("w = 0 recovers the direct lift:", symbols_agree(direct, specialise_family(fam, 0)))

for k in (4, 8):
    s = specialise_family(fam, k)
    print(f"k = {k}: {truncation_precision(p, Mw, k)} digits, U_5-eigen {s.is_up_eigen()}, "
          f"Mellin square {mellin_square_holds(fam, k)}")

for M in (10, 15):
    cs = up_char_series(11, p, 0, M)
    print(f"M = {M}: slope-0 multiplicity {cs.slope_multiplicity(0)}, slopes below 1: {len(cs.slopes_below(1))}")
