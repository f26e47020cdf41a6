"""Gauss sums over Q and over an imaginary quadratic field, exactly.

The norm identity tau(chi) tau(chi-bar) = chi(-1) cond and the
Hasse-Davenport product relation are checked in the cyclotomic ring;
nothing is rounded.

    python demos/02_gauss_sums.py
"""

from bcpadic.characters import ImagQuadField, kronecker_character, primitive_characters
from bcpadic.gauss import SQRT_CONVENTIONS, hasse_davenport_check, norm_identity_holds, tau_q

print("tau(chi_-4) =", tau_q(kronecker_character(4)).value)

total = sum(len(primitive_characters(c)) for c in range(1, 46))
good = sum(norm_identity_holds(chi) for c in range(1, 46) for chi in primitive_characters(c))
print(f"norm identity: {good}/{total} primitive characters of conductor <= 45")

# the choice of sqrt(-d) in the additive character over K matters
chi = primitive_characters(9)[0]
for d in (4, 7):
    K = ImagQuadField(d)
    res = {c: hasse_davenport_check(chi, K, c).holds for c in SQRT_CONVENTIONS}
    print(f"Hasse-Davenport for {chi.label()} over Q(sqrt(-{d})): {res}")
