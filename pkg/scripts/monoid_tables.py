"""Print the Cayley table of the 12-element quotient and the hexagon labeling."""

from cyclo.monoid import TABLE_NAMES, check_dihedral, polygon_labeling, quotient_monoid

q = quotient_monoid()
w = max(map(len, TABLE_NAMES))
print(" " * (w + 1) + " ".join(n.rjust(w) for n in TABLE_NAMES))
for name, row in zip(TABLE_NAMES, q.table):
    print(name.rjust(w), " ".join(TABLE_NAMES[i].rjust(w) for i in row))
print()
for k, v in check_dihedral(q).items():
    print(f"{k}: {v}")
print()
for k, v in polygon_labeling().items():
    print(f"{k}: {v}")
