"""
Semidirect products and lifting
===============================

Cayley-table groups, the actions of Z/3 on V4 and Q8, and the lifting
equation (h, 1)^n = (v, 0) in F_q x| Z/n.
"""

from asmoduli import groups as grp
from asmoduli.gf import field_create

V4, Q8, C3 = grp.elem_abelian(2, 2), grp.quaternion8(), grp.cyclic(3)
print("|Aut V4| =", len(grp.automorphisms(V4)), " |Aut Q8| =", len(grp.automorphisms(Q8)))

for P, name in ((V4, "V4"), (Q8, "Q8")):
    acts = grp.actions(P, C3)
    for i, act in enumerate(acts):
        r = grp.enumerate_gp_rho(P, C3, act)
        print(f"{name} rho'={i}: passing {r.passing}, classes {r.classes}")

F = field_create(2, 2, 2)
for e in (1, 2, 3):
    sols = {F.to_str(v): sorted(grp.solve_lift(F, e, 3, v)) for v in range(F.order)}
    print("e =", F.to_str(e), sols)
