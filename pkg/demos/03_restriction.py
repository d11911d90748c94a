"""
Restriction to the punctured discs
==================================

Compare global classes with the local classes at the punctures, for each
bundled configuration, and scan ramification profiles.
"""

from asmoduli.config import bundled
from asmoduli.gf import field_create
from asmoduli.localmod import local_global_compare
from asmoduli.moduli import RhoAction
from asmoduli.pfrac import PuncturedLine
from asmoduli.restrict import analyze_restriction, essential_surjectivity_scan, restriction_matrix

for name in ("cfg_a", "cfg_b", "cfg_c", "cfg_d"):
    fk = bundled(name).kernel()
    rep = analyze_restriction(fk, [1, 2, 3])
    print(name, [(r["d_global"], r["sum_d_local"], r["kernel_dim"], r["surjective"]) for r in rep["rows"]])

fk = bundled("cfg_a").kernel()
rm = restriction_matrix(fk, 1)
print("CFG-A level 1 matrix over F_2:\n", rm.map.matrix)
print("targets:", rm.map.target.labels)

rep = local_global_compare(field_create(2, 2, 2), 3, 1, [0, 1, 2, 3])
print("local vs global dims:", [(r["local_dim"], r["global_dim"]) for r in rep["rows"]])
print("pairs:", rep["global_pairs"], "<->", rep["local_pairs"])

# n = 3 needs F_16: over F_4 only 1 is a cube
U = PuncturedLine(field_create(2, 2, 4), (0,))
for row in essential_surjectivity_scan(U, 3, RhoAction(1), 2):
    print(row["profile"], row["exponents"], "tame at", row["tame_points"], "surjective:", row["surjective"])
