"""Weighted undirected graphs, cut weights and the reduction machinery.

Graphs are immutable. Node labels are plain ints that survive reduction, so a
reduced graph still knows which original nodes it is made of. Bit strings are
numpy arrays aligned with ``Graph.nodes``.
"""

from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "ParityRecord",
    "RootedForest",
    "Tree",
    "cut_weight",
    "generate",
    "max_spanning_forest",
    "parse_rudy",
    "perturb_weights",
    "perturb_zero_weights",
    "read_graph",
    "reduce_graph",
]


class GraphError(ValueError):
    """Malformed graph input or a violated graph contract."""


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Weighted undirected simple graph with stable integer node labels.

    Self-loops are dropped with a warning and parallel edges are merged by
    summing their weights.
    """

    __slots__ = ("_nodes", "_w", "_adj", "_index")

    def __init__(self, nodes: Iterable[int], edges: Iterable[tuple[int, int, float]] = ()):
        self._nodes = tuple(int(u) for u in nodes)
        if len(set(self._nodes)) != len(self._nodes):
            raise GraphError("duplicate node labels")
        self._index = {u: i for i, u in enumerate(self._nodes)}
        w: dict[tuple[int, int], float] = {}
        for u, v, wt in edges:
            u, v = int(u), int(v)
            if u not in self._index or v not in self._index:
                raise GraphError(f"edge ({u}, {v}) references a missing node")
            if u == v:
                warnings.warn(f"dropping self-loop on node {u}", stacklevel=2)
                continue
            k = _key(u, v)
            w[k] = w.get(k, 0.0) + float(wt)
        self._w = w
        self._adj = None

    @classmethod
    def _trusted(cls, nodes: tuple[int, ...], w: dict[tuple[int, int], float]) -> "Graph":
        g = cls.__new__(cls)
        g._nodes = nodes
        g._index = {u: i for i, u in enumerate(nodes)}
        g._w = w
        g._adj = None
        return g

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[tuple[int, int, float]]) -> "Graph":
        return cls(range(num_nodes), edges)

    # -- basic queries -----------------------------------------------------
    @property
    def nodes(self) -> tuple[int, ...]:
        return self._nodes

    @property
    def num_nodes(self) -> int:
        return len(self._nodes)

    @property
    def num_edges(self) -> int:
        return len(self._w)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        """Edges as ``(u, v, w)`` with ``u < v``, sorted by ``(u, v)``."""
        return [(u, v, w) for (u, v), w in sorted(self._w.items())]

    def position(self, u: int) -> int:
        return self._index[u]

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self._w

    def weight(self, u: int, v: int) -> float:
        return self._w[_key(u, v)]

    def neighbors(self, u: int) -> dict[int, float]:
        return dict(self._adjacency()[u])

    def degree(self, u: int) -> int:
        return len(self._adjacency()[u])

    def total_weight(self) -> float:
        return float(sum(self._w.values()))

    def _adjacency(self) -> dict[int, dict[int, float]]:
        if self._adj is None:
            adj: dict[int, dict[int, float]] = {u: {} for u in self._nodes}
            for (u, v), w in self._w.items():
                adj[u][v] = w
                adj[v][u] = w
            self._adj = adj
        return self._adj

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Positions ``(iu, iv)`` and weights of all edges, in ``edges`` order."""
        edges = self.edges
        iu = np.fromiter((self._index[u] for u, _, _ in edges), dtype=np.int64, count=len(edges))
        iv = np.fromiter((self._index[v] for _, v, _ in edges), dtype=np.int64, count=len(edges))
        w = np.fromiter((x for _, _, x in edges), dtype=float, count=len(edges))
        return iu, iv, w

    def adjacency_matrix(self) -> np.ndarray:
        n = self.num_nodes
        a = np.zeros((n, n))
        iu, iv, w = self.edge_arrays()
        a[iu, iv] = w
        a[iv, iu] = w
        return a

    def with_weights(self, weights: Mapping[tuple[int, int], float]) -> "Graph":
        w = dict(self._w)
        for (u, v), x in weights.items():
            k = _key(u, v)
            if k not in w:
                raise GraphError(f"no edge ({u}, {v})")
            w[k] = float(x)
        return Graph._trusted(self._nodes, w)

    def without_nodes(self, drop: Iterable[int]) -> "Graph":
        drop = set(drop)
        nodes = tuple(u for u in self._nodes if u not in drop)
        w = {k: x for k, x in self._w.items() if k[0] not in drop and k[1] not in drop}
        return Graph._trusted(nodes, w)

    def subgraph(self, keep: Iterable[int]) -> "Graph":
        keep = set(keep)
        return self.without_nodes(u for u in self._nodes if u not in keep)

    def isolated_nodes(self) -> list[int]:
        adj = self._adjacency()
        return [u for u in self._nodes if not adj[u]]

    def connected_components(self) -> list[list[int]]:
        adj = self._adjacency()
        seen: set[int] = set()
        comps = []
        for s in self._nodes:
            if s in seen:
                continue
            seen.add(s)
            comp, queue = [], deque([s])
            while queue:
                u = queue.popleft()
                comp.append(u)
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        queue.append(v)
            comps.append(sorted(comp, key=self._index.__getitem__))
        return comps

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._nodes == other._nodes and self._w == other._w

    def __repr__(self) -> str:
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"

    # -- serialization -----------------------------------------------------
    def to_rudy(self) -> str:
        """Rudy/Gset text with 1-based positions; labels are not preserved."""
        lines = [f"{self.num_nodes} {self.num_edges}"]
        for u, v, w in self.edges:
            ws = str(int(w)) if float(w).is_integer() else repr(w)
            lines.append(f"{self._index[u] + 1} {self._index[v] + 1} {ws}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"nodes": list(self._nodes), "edges": [[u, v, w] for u, v, w in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        d = json.loads(text)
        nodes = d["nodes"]
        if isinstance(nodes, int):
            nodes = range(nodes)
        return cls(nodes, [tuple(e) for e in d["edges"]])


def parse_rudy(text: str) -> Graph:
    """Parse the rudy/Gset format: header ``n m`` then ``i j w`` lines, 1-based."""
    lines = [(no, ln.split()) for no, ln in enumerate(text.splitlines(), start=1)]
    lines = [(no, parts) for no, parts in lines if parts and not parts[0].startswith(("#", "%"))]
    if not lines:
        raise GraphError("empty input")
    no, head = lines[0]
    try:
        n, m = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise GraphError(f"line {no}: expected header 'n m'") from None
    if n < 0 or m < 0:
        raise GraphError(f"line {no}: negative size")
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges but {len(body)} edge lines follow")
    edges = []
    for no, parts in body:
        if len(parts) not in (2, 3):
            raise GraphError(f"line {no}: expected 'i j w'")
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphError(f"line {no}: malformed numbers") from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphError(f"line {no}: node index out of range 1..{n}")
        edges.append((i - 1, j - 1, w))
    return Graph(range(n), edges)


def read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return Graph.from_json(text)
    return parse_rudy(text)


def cut_weight(g: Graph, bits: Sequence[int] | np.ndarray) -> float:
    """Total weight of the edges whose endpoints carry different bits."""
    b = np.asarray(bits)
    if b.shape != (g.num_nodes,):
        raise GraphError(f"bit string has length {b.size}, graph has {g.num_nodes} nodes")
    iu, iv, w = g.edge_arrays()
    return float(np.sum(w[b[iu] != b[iv]]))


def perturb_weights(g: Graph, amplitude: float, rng: np.random.Generator) -> Graph:
    """Add independent ``Uniform[-amplitude, amplitude]`` noise to every edge weight."""
    if amplitude < 0:
        raise GraphError("amplitude must be non-negative")
    keys = sorted(g._w)
    xi = rng.uniform(-amplitude, amplitude, size=len(keys))
    return Graph._trusted(g.nodes, {k: g._w[k] + float(x) for k, x in zip(keys, xi)})


def perturb_zero_weights(g: Graph, amplitude: float, rng: np.random.Generator) -> Graph:
    """Re-noise only the edges whose weight is exactly zero."""
    zeros = sorted(k for k, w in g._w.items() if w == 0.0)
    if not zeros or amplitude == 0:
        return g
    w = dict(g._w)
    for k, x in zip(zeros, rng.uniform(-amplitude, amplitude, size=len(zeros))):
        w[k] = float(x)
    return Graph._trusted(g.nodes, w)


def reduce_graph(g: Graph, removed: int, kept: int, sign: int) -> Graph:
    """Delete ``removed`` after tying its bit to ``kept``.

    ``sign=+1`` means equal bits, ``sign=-1`` different bits. Every other edge
    ``(removed, l)`` is folded into ``(kept, l)`` with weight multiplied by
    ``sign``. Edges whose merged weight is zero are kept.
    """
    if sign not in (1, -1):
        raise GraphError("sign must be +1 or -1")
    if not g.has_edge(removed, kept):
        raise GraphError(f"no edge ({removed}, {kept}) to reduce along")
    nbrs = g._adjacency()[removed]
    w = {k: x for k, x in g._w.items() if removed not in k}
    for l, x in nbrs.items():
        if l == kept:
            continue
        k = _key(kept, l)
        w[k] = w.get(k, 0.0) + sign * x
    nodes = tuple(u for u in g.nodes if u != removed)
    return Graph._trusted(nodes, w)


@dataclass
class ParityRecord:
    """Parity decisions made while shrinking a graph.

    ``decisions`` holds ``(removed, kept, sign)`` in the order they were
    applied. ``free`` lists nodes dropped because they had no edges left; they
    take bit 0.
    """

    decisions: list[tuple[int, int, int]] = field(default_factory=list)
    free: list[int] = field(default_factory=list)
    residual_graph: Graph | None = None
    residual_assignment: dict[int, int] = field(default_factory=dict)

    def add(self, removed: int, kept: int, sign: int) -> None:
        self.decisions.append((removed, kept, sign))

    def replay(self, g: Graph) -> Graph:
        """Apply the recorded reductions to ``g`` (e.g. the unperturbed original)."""
        for removed, kept, sign in self.decisions:
            g = reduce_graph(g, removed, kept, sign)
        if self.free:
            g = g.without_nodes(self.free)
        return g

    def lift(self, g: Graph, residual_bits: Mapping[int, int]) -> np.ndarray:
        """Full bit string of ``g`` from the residual assignment."""
        val: dict[int, int] = {u: 0 for u in self.free}
        val.update({int(u): int(b) for u, b in residual_bits.items()})
        for removed, kept, sign in reversed(self.decisions):
            val[removed] = val[kept] ^ (1 if sign < 0 else 0)
        missing = [u for u in g.nodes if u not in val]
        if missing:
            raise GraphError(f"nodes {missing[:5]} have no assigned bit")
        return np.array([val[u] for u in g.nodes], dtype=np.int8)


@dataclass
class Tree:
    root: int
    parent: dict[int, int]
    weight: dict[int, float]

    @property
    def nodes(self) -> list[int]:
        return [self.root, *self.parent]

    def leaf_to_root(self) -> list[tuple[int, int]]:
        """``(child, parent)`` pairs, every child listed after all its descendants."""
        children: dict[int, list[int]] = {}
        for c, p in self.parent.items():
            children.setdefault(p, []).append(c)
        order, queue = [], deque([self.root])
        while queue:
            u = queue.popleft()
            for c in sorted(children.get(u, ())):
                order.append((c, u))
                queue.append(c)
        return order[::-1]


@dataclass
class RootedForest:
    trees: list[Tree]

    @property
    def num_edges(self) -> int:
        return sum(len(t.parent) for t in self.trees)

    def total_weight(self) -> float:
        return float(sum(sum(t.weight.values()) for t in self.trees))

    def edge_set(self) -> set[tuple[int, int]]:
        return {_key(c, p) for t in self.trees for c, p in t.parent.items()}


def max_spanning_forest(
    edges: Iterable[tuple[int, int, float]], rng: np.random.Generator | None = None
) -> RootedForest:
    """Maximum-weight spanning forest (Kruskal) with one random root per tree.

    Ties are broken by the smaller ``(u, v)`` pair. Without ``rng`` the root is
    the smallest label of each tree.
    """
    es = sorted(((_key(u, v), float(w)) for u, v, w in edges), key=lambda e: (-e[1], e[0]))
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    adj: dict[int, list[tuple[int, float]]] = {}
    for (u, v), w in es:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent[ru] = rv
        adj.setdefault(u, []).append((v, w))
        adj.setdefault(v, []).append((u, w))

    trees = []
    seen: set[int] = set()
    for start in sorted(adj):
        if start in seen:
            continue
        comp, queue = [], deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        comp.sort()
        root = comp[int(rng.integers(len(comp)))] if rng is not None else comp[0]
        par, wt = {}, {}
        queue = deque([root])
        visited = {root}
        while queue:
            u = queue.popleft()
            for v, w in sorted(adj[u]):
                if v not in visited:
                    visited.add(v)
                    par[v], wt[v] = u, w
                    queue.append(v)
        trees.append(Tree(root, par, wt))
    return RootedForest(trees)


def _weights(kind: str, size: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "pm1":
        return rng.choice(np.array([-1.0, 1.0]), size=size)
    if kind == "unit":
        return np.ones(size)
    raise GraphError(f"unknown weight distribution {kind!r}")


def generate(spec: Mapping[str, object]) -> Graph:
    """Build a graph from a generator spec.

    ``{"kind": "random", "n": 14, "density": 0.5, "weights": "pm1", "seed": 0}``
    ``{"kind": "3regular", "n": 100, "seed": 1}``
    ``{"kind": "toric_plus_hub", "grid": 3, "weights": "pm1", "seed": 2}``
    """
    kind = spec.get("kind")
    seed = spec.get("seed", 0)
    rng = np.random.default_rng(seed)
    if kind == "random":
        n = int(spec["n"])
        density = float(spec.get("density", 0.5))
        if not 0 <= density <= 1:
            raise GraphError("density must lie in [0, 1]")
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        m = int(density * len(pairs))
        idx = np.sort(rng.choice(len(pairs), size=m, replace=False))
        w = _weights(str(spec.get("weights", "pm1")), m, rng)
        return Graph(range(n), [(*pairs[i], x) for i, x in zip(idx, w)])
    if kind == "3regular":
        import networkx as nx

        n = int(spec["n"])
        if n < 4 or (3 * n) % 2:
            raise GraphError(f"no 3-regular simple graph on {n} nodes")
        h = nx.random_regular_graph(3, n, seed=int(rng.integers(2**31)))
        pairs = sorted(_key(int(u), int(v)) for u, v in h.edges())
        w = _weights(str(spec.get("weights", "pm1")), len(pairs), rng)
        return Graph(range(n), [(u, v, x) for (u, v), x in zip(pairs, w)])
    if kind == "toric_plus_hub":
        g = int(spec["grid"])
        if g < 3:
            raise GraphError("toric grid needs size >= 3")
        pairs = []
        for r in range(g):
            for c in range(g):
                u = r * g + c
                pairs.append(_key(u, r * g + (c + 1) % g))
                pairs.append(_key(u, ((r + 1) % g) * g + c))
        hub = g * g
        pairs += [(u, hub) for u in range(hub)]
        w = _weights(str(spec.get("weights", "pm1")), len(pairs), rng)
        return Graph(range(hub + 1), [(u, v, x) for (u, v), x in zip(pairs, w)])
    raise GraphError(f"unknown generator kind {kind!r}")
