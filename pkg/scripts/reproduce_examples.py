"""Print the two worked examples: the equa-exam node [3,2,1] and the
non-cluster-cyclic counterexample at [2,1,2,1]."""

from pathlib import Path

from cyclo import PatternTree
from cyclo.core import load_matrix
from cyclo.cartan import check_congruence, congruence_product, pset_of, quasi_cartan_at
from cyclo.core import fmt_decimal
from cyclo.signs import Incoherent, cluster_cyclic_data, tropical_signs

DATA = Path(__file__).resolve().parent.parent / "data"


def show(name, M, decimals=None):
    print(f"{name} =")
    for row in M.data:
        cells = [fmt_decimal(x, decimals) if decimals else str(x) for x in row]
        print("   ", " ".join(c.rjust(8) for c in cells))


def equa():
    tree = PatternTree(*load_matrix(DATA / "equa_exam.json"))
    w = (3, 2, 1)
    node = tree.node_at(w)
    cc = cluster_cyclic_data(tree.B0)
    print("products", [str(x) for x in cc["products"]], "slack", cc["slack"])
    show("B^w", node.B)
    show("C^w", node.C)
    show("G^w", node.G)
    print("P^w =", pset_of(node).sorted())
    show("A~^w", quasi_cartan_at(node, tree.d).deformation)
    show("C^T A~_3 C", congruence_product(tree, w))
    print("congruence holds:", check_congruence(tree, w))


def counter():
    tree = PatternTree(*load_matrix(DATA / "counter.json"))
    C = tree.node_at((2, 1, 2, 1)).C
    show("C^[2121]", C)
    show("C^[2121] (4 places)", C, 4)
    signs = tropical_signs(C)
    if isinstance(signs, Incoherent):
        print("mixed-sign columns:", list(signs.columns))


if __name__ == "__main__":
    equa()
    print()
    counter()
