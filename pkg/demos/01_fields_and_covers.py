"""
Finite fields and Kummer covers
===============================

Build F_4, the cover y^3 = x of the line minus {0, oo}, and look at the
local picture above each puncture.
"""

from asmoduli.gf import field_create, root_of_unity
from asmoduli.kummer import KummerCover, cover_mul, sigma_apply, to_string
from asmoduli.localexp import LocalFrame
from asmoduli.pfrac import INF, PuncturedLine, elem_mul, to_string as ring_str

F = field_create(2, 2, 2)  # F_4, elements coded 0..3
print(F.describe())
w = root_of_unity(F, 3)
print("cube root of unity:", F.to_str(w), " w^2 + w + 1 =", F.add(F.add(F.mul(w, w), w), 1))

# rings of functions on the punctured line use partial fractions
U = PuncturedLine(F, (0,))
a = elem_mul(U.x(), U.inv_linear(0, 2))  # x / x^2
print("x * x^-2 =", ring_str(a))

V = KummerCover(U, 3, [1])
y = V.y()
print("y^3 =", to_string(cover_mul(cover_mul(y, y), y)))
print("sigma(y) =", to_string(sigma_apply(y)))

# one point above 0 and above oo, both totally ramified
for P in (0, INF):
    fr = LocalFrame(V, P)
    print(U.label(P), "e =", fr.e, " y =", fr.expand(y, 6))
