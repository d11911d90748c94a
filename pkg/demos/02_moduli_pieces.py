"""
Eigen-classes and moduli pieces
===============================

For y^3 = x over F_4 with multiplier zeta_3, list the kernel basis, the new
coordinates at each level, and all 16 classes at level 1.
"""

from asmoduli.config import bundled
from asmoduli.kummer import to_string
from asmoduli.moduli import enumerate_classes, floor_formula, iota_eval, kernel_level, new_basis, piece_dims

cfg = bundled("cfg_a")
fk = cfg.kernel()
print("e_rho =", cfg.ctx.to_str(fk.e_rho), " component j0 =", fk.j0)

for ell in range(3):
    print(f"level {ell}: kernel", [to_string(b) for b in kernel_level(fk, ell)][:6], "...")
    print("          new", [to_string(b) for b in new_basis(fk, ell)][:6])

dims = piece_dims(fk, 4)
print("d_l:", dims, " floor formula:", [floor_formula(fk, l) for l in range(1, 5)])

classes = enumerate_classes(fk, 1)
print(len(classes), "classes at level 1")
for c in classes[:5]:
    print("  ", [cfg.ctx.to_str(v) for v in c.coords], "->", to_string(c.rep))

# classes stay distinct inside the full Artin-Schreier quotient
print("distinct images:", len({iota_eval(fk, c) for c in classes}))
