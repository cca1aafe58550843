"""(m,1) quantum random access codes for MAX-CUT.

Each node gets a slot ``(qubit, pauli)``. Nodes sharing a qubit use different
Paulis and adjacent nodes never share a qubit. The relaxed Hamiltonian is

    H_m = sum_{(j,k)} w_jk (I - m P_<j> P_<k>) / 2

and a magic state encodes one bit per active Pauli on each qubit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .graph import Graph

__all__ = [
    "ACTIVE_PAULIS",
    "PAULI",
    "AssignmentError",
    "HamiltonianTerms",
    "MagicState",
    "PauliAssignment",
    "assign_paulis",
    "build_terms",
    "decode_bits",
    "magic_density",
    "magic_state_for",
]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

ACTIVE_PAULIS = {1: ("Z",), 2: ("X", "Z"), 3: ("X", "Y", "Z")}


class AssignmentError(ValueError):
    pass


def _check_m(m: int) -> None:
    if m not in ACTIVE_PAULIS:
        raise AssignmentError(f"m must be 1, 2 or 3, got {m}")


@dataclass(frozen=True)
class PauliAssignment:
    """Node -> (qubit, Pauli) map for an (m,1) encoding."""

    m: int
    num_qubits: int
    slots: Mapping[int, tuple[int, str]]

    @property
    def nodes(self) -> list[int]:
        return list(self.slots)

    @property
    def paulis(self) -> tuple[str, ...]:
        return ACTIVE_PAULIS[self.m]

    def qubit(self, node: int) -> int:
        return self.slots[node][0]

    def pauli(self, node: int) -> str:
        return self.slots[node][1]

    def occupancy(self) -> list[dict[str, int]]:
        occ: list[dict[str, int]] = [{} for _ in range(self.num_qubits)]
        for u, (q, p) in self.slots.items():
            occ[q][p] = u
        return occ

    def validate(self, g: Graph | None = None) -> None:
        """Raise ``AssignmentError`` unless both encoding constraints hold."""
        _check_m(self.m)
        seen: dict[tuple[int, str], int] = {}
        per_qubit = [0] * self.num_qubits
        for u, (q, p) in self.slots.items():
            if not 0 <= q < self.num_qubits:
                raise AssignmentError(f"node {u}: qubit {q} out of range")
            if p not in self.paulis:
                raise AssignmentError(f"node {u}: Pauli {p} not active for m={self.m}")
            if (q, p) in seen:
                raise AssignmentError(f"nodes {seen[q, p]} and {u} share slot ({q}, {p})")
            seen[q, p] = u
            per_qubit[q] += 1
        if max(per_qubit, default=0) > self.m:
            raise AssignmentError("a qubit hosts more than m nodes")
        if g is not None:
            missing = [u for u in g.nodes if u not in self.slots]
            if missing:
                raise AssignmentError(f"nodes {missing[:5]} are unassigned")
            for u, v, _ in g.edges:
                if self.slots[u][0] == self.slots[v][0]:
                    raise AssignmentError(f"adjacent nodes {u} and {v} share qubit {self.slots[u][0]}")

    def to_json(self) -> str:
        return json.dumps(
            {"m": self.m, "num_qubits": self.num_qubits, "slots": {str(u): [q, p] for u, (q, p) in self.slots.items()}}
        )

    @classmethod
    def from_json(cls, text: str) -> "PauliAssignment":
        d = json.loads(text)
        slots = {int(u): (int(q), str(p)) for u, (q, p) in d["slots"].items()}
        return cls(int(d["m"]), int(d["num_qubits"]), slots)


def assign_paulis(g: Graph, m: int, rng: np.random.Generator) -> PauliAssignment:
    """Random feasible assignment by a randomized greedy pass.

    Nodes are visited in random order and dropped into a uniformly chosen free
    slot on a qubit that hosts none of their neighbours; a fresh qubit is
    opened when no slot qualifies.
    """
    _check_m(m)
    paulis = ACTIVE_PAULIS[m]
    order = [g.nodes[i] for i in rng.permutation(g.num_nodes)]
    qubit_of: dict[int, int] = {}
    pauli_of: dict[int, str] = {}
    used: list[set[str]] = []
    open_qubits: list[int] = []  # qubits with a free Pauli, in creation order
    for u in order:
        blocked = {qubit_of[v] for v in g.neighbors(u) if v in qubit_of}
        cands = [(q, p) for q in open_qubits if q not in blocked for p in paulis if p not in used[q]]
        if cands:
            q, p = cands[int(rng.integers(len(cands)))]
        else:
            q, p = len(used), paulis[int(rng.integers(m))]
            used.append(set())
            open_qubits.append(q)
        used[q].add(p)
        if len(used[q]) == m:
            open_qubits.remove(q)
        qubit_of[u], pauli_of[u] = q, p
    slots = {u: (qubit_of[u], pauli_of[u]) for u in g.nodes}
    return PauliAssignment(m, len(used), slots)


@dataclass(frozen=True)
class HamiltonianTerms:
    """``constant * I + sum coeff * P_a P_b`` with one two-local term per edge."""

    m: int
    num_qubits: int
    constant: float
    terms: tuple[tuple[float, tuple[int, str], tuple[int, str], tuple[int, int]], ...]

    def pauli_terms(self) -> list[tuple[float, dict[int, str]]]:
        """Terms as ``(coefficient, {qubit: pauli})`` including the constant."""
        out = [(self.constant, {})] if self.constant else []
        out += [(c, {a[0]: a[1], b[0]: b[1]}) for c, a, b, _ in self.terms]
        return out


def build_terms(g: Graph, a: PauliAssignment) -> HamiltonianTerms:
    terms = []
    const = 0.0
    for j, k, w in g.edges:
        if j not in a.slots or k not in a.slots:
            raise AssignmentError(f"edge ({j}, {k}) has an unassigned endpoint")
        sa, sb = a.slots[j], a.slots[k]
        if sa[0] == sb[0]:
            raise AssignmentError(f"adjacent nodes {j} and {k} share qubit {sa[0]}")
        const += w / 2
        terms.append((-(a.m / 2) * w, sa, sb, (j, k)))
    return HamiltonianTerms(a.m, a.num_qubits, const, tuple(terms))


@dataclass(frozen=True)
class MagicState:
    """Product magic state; ``bits[q, i]`` is the bit on Pauli ``ACTIVE_PAULIS[m][i]`` of qubit ``q``."""

    m: int
    bits: np.ndarray

    @property
    def num_qubits(self) -> int:
        return self.bits.shape[0]


def magic_state_for(a: PauliAssignment, node_bits: Mapping[int, int]) -> MagicState:
    """Embed node bits into their slots; unused slots carry 0."""
    bits = np.zeros((a.num_qubits, a.m), dtype=np.int8)
    idx = {p: i for i, p in enumerate(a.paulis)}
    for u, (q, p) in a.slots.items():
        bits[q, idx[p]] = int(node_bits[u])
    return MagicState(a.m, bits)


def magic_density(ms: MagicState, qubit: int) -> np.ndarray:
    """Single-qubit density matrix ``(I + m^-1/2 sum (-1)^b_P P) / 2``."""
    if not 0 <= qubit < ms.num_qubits:
        raise IndexError(f"qubit {qubit} out of range")
    r = PAULI["I"].copy()
    for p, b in zip(ACTIVE_PAULIS[ms.m], ms.bits[qubit]):
        r += (-1) ** int(b) / np.sqrt(ms.m) * PAULI[p]
    return r / 2


def decode_bits(
    a: PauliAssignment,
    site_expectations: Mapping[int, float],
    rng: np.random.Generator,
    nodes: Sequence[int] | None = None,
) -> np.ndarray:
    """Pauli rounding: bit 0 for a positive expectation, 1 for negative, coin flip at 0."""
    nodes = a.nodes if nodes is None else nodes
    e = np.array([site_expectations[u] for u in nodes], dtype=float)
    bits = (e < 0).astype(np.int8)
    ties = e == 0
    if ties.any():
        bits[ties] = rng.integers(0, 2, size=int(ties.sum()))
    return bits
