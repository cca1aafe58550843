"""Build the 14-node benchmark graph shipped in ``rqrao/data/rnd14.txt``.

The reference instance is a random 14-node graph with +-1 weights, edge
density 0.5, maximum cut 12 and a single maximizer up to a global flip,
``b = 00001101101010`` written as ``b_13 ... b_1 b_0``. The original file is
not distributed, so this script searches the same random family for a graph
with those properties and relabels its nodes so the maximizer reads the same.

Run: python notebooks/00_build_rnd14.py [output-path]
"""

import sys
from pathlib import Path

import numpy as np

from rqrao.graph import Graph, cut_weight, generate

TARGET = "00001101101010"  # b_13 ... b_0
N = 14


def all_cuts(g: Graph) -> np.ndarray:
    x = np.arange(1 << (N - 1))
    bits = np.zeros((x.size, N), dtype=np.int8)
    bits[:, 1:] = (x[:, None] >> np.arange(N - 1)) & 1
    iu, iv, w = g.edge_arrays()
    return bits, ((bits[:, iu] != bits[:, iv]) * w).sum(axis=1)


def search(max_seed: int = 100_000) -> tuple[int, Graph, np.ndarray]:
    for seed in range(max_seed):
        g = generate({"kind": "random", "n": N, "density": 0.5, "weights": "pm1", "seed": seed})
        bits, cuts = all_cuts(g)
        best = cuts.max()
        if best == 12 and np.sum(cuts == best) == 1:
            return seed, g, bits[int(np.argmax(cuts))]
    raise RuntimeError("no instance found")


def relabel(g: Graph, opt: np.ndarray) -> tuple[Graph, dict[int, int]]:
    want = np.array([int(c) for c in reversed(TARGET)])  # want[i] = b_i
    if np.sum(opt) != np.sum(want):
        opt = 1 - opt
    assert np.sum(opt) == np.sum(want), "maximizer has the wrong number of ones"
    ones_old = [u for u in range(N) if opt[u]]
    zeros_old = [u for u in range(N) if not opt[u]]
    ones_new = [i for i in range(N) if want[i]]
    zeros_new = [i for i in range(N) if not want[i]]
    mapping = dict(zip(ones_old + zeros_old, ones_new + zeros_new))
    h = Graph(range(N), [(mapping[u], mapping[v], w) for u, v, w in g.edges])
    return h, mapping


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[1] / "src/rqrao/data/rnd14.txt"
    seed, g, opt = search()
    h, mapping = relabel(g, opt)
    target = np.array([int(c) for c in reversed(TARGET)])
    assert cut_weight(h, target) == 12
    _, cuts = all_cuts(h)
    assert cuts.max() == 12 and np.sum(cuts == 12) == 1
    header = (
        f"# 14-node random graph, +-1 weights, density 0.5 (generator seed {seed}, nodes relabelled)\n"
        f"# maximum cut 12, unique up to flip: b_13..b_0 = {TARGET}\n"
    )
    out.write_text(header + h.to_rudy())
    print(f"seed {seed}: {h.num_edges} edges, written to {out}")
