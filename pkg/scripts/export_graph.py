"""Export the unlabeled C- or G-exchange graph of a matrix file as DOT and
report whether it is a ball in the 3-regular tree."""

import argparse
import sys

from cyclo import PatternTree
from cyclo.core import load_matrix
from cyclo.exchange_graph import build_graph, export_dot


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("matrix")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--pattern", choices=("c", "g"), default="c")
    p.add_argument("--out", default=None)
    a = p.parse_args()

    g = build_graph(PatternTree(*load_matrix(a.matrix)), a.depth, a.pattern)
    if a.out:
        with open(a.out, "w") as fh:
            export_dot(g, fh)
    else:
        export_dot(g, sys.stdout)
    print(f"vertices {len(g)} (tree ball: {g.expected_tree_size()}), edges {len(g.edges)}, "
          f"collisions {len(g.collisions)}, kappa increasing: {g.kappa_increasing()}",
          file=sys.stderr)


if __name__ == "__main__":
    main()
