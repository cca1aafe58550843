"""Recursive QRAO and its single-shot relatives.

One round of the recursion: run N independent trials (fresh Pauli assignment
and fresh random MPS each), measure every edge energy, shrink the ensemble
mean toward zero, take a maximum spanning forest of the surviving edges by
``|energy|`` and fix each forest edge from the leaves up. Rounds repeat until
at most M nodes remain, which are then brute-forced on the original weights.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ..graph import Graph, ParityRecord, max_spanning_forest, perturb_weights, reduce_graph
from ..oracle import brute_force_maxcut
from ..qrac import assign_paulis, build_terms, decode_bits
from ..rng import as_generator, stream
from ..tensornet import build_mpo, edge_energies, init_mps, optimize, site_expectations
from ..tensornet.optim import OptimizerConfig
from .ensemble import ensemble_energies
from .report import RqraoParams, SolveReport

__all__ = ["SolveError", "brute_solve", "qrao_solve", "rqrao_solve", "tree_rounding_solve"]

log = logging.getLogger(__name__)

# spawn-key namespaces under one solve seed
_PERTURB, _TRIAL, _FOREST, _STALL = 0, 1, 2, 3


class SolveError(RuntimeError):
    pass


@dataclass
class _Trial:
    energies: np.ndarray
    value: float
    ls_failed: bool


def _run_trial(g: Graph, edges, p: RqraoParams, rng: np.random.Generator) -> _Trial:
    a = assign_paulis(g, p.m, rng)
    h = build_mpo(build_terms(g, a), a.num_qubits)
    psi = init_mps(a.num_qubits, p.chi, rng)
    res = optimize(psi, h, p.optimizer)
    return _Trial(edge_energies(res.state, a, edges), res.value, res.line_search_failed)


def _trials(g: Graph, edges, p: RqraoParams, seed: int, rnd: int, attempt: int, threads: int):
    def one(t):
        try:
            return _run_trial(g, edges, p, stream(seed, _TRIAL, rnd, attempt, t))
        except (ArithmeticError, FloatingPointError, np.linalg.LinAlgError) as exc:
            log.warning("round %d trial %d dropped: %s", rnd, t, exc)
            return None

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            out = list(pool.map(one, range(p.ensemble)))
    else:
        out = [one(t) for t in range(p.ensemble)]
    return [r for r in out if r is not None]


def _drop_isolated(g: Graph, record: ParityRecord) -> Graph:
    iso = g.isolated_nodes()
    if iso:
        record.free.extend(iso)
        g = g.without_nodes(iso)
    return g


def _finish(g: Graph, record: ParityRecord) -> np.ndarray:
    residual = record.replay(g)
    record.residual_graph = residual
    bits, _ = brute_force_maxcut(residual)
    record.residual_assignment = dict(zip(residual.nodes, bits.tolist()))
    return record.lift(g, record.residual_assignment)


def rqrao_solve(
    g: Graph, p: RqraoParams | None = None, rng: np.random.Generator | int | None = None, threads: int = 1
) -> SolveReport:
    """Recursive QRAO on ``g``; the returned weight is measured on ``g`` itself."""
    p = p or RqraoParams()
    seed = int(as_generator(rng).integers(0, 2**63 - 1))
    t0 = time.perf_counter()
    record = ParityRecord()
    flags: list[str] = []
    rounds: list[dict] = []
    work = perturb_weights(g, p.amplitude, stream(seed, _PERTURB)) if p.amplitude > 0 else g
    work = _drop_isolated(work, record)
    rnd = 0
    while work.num_nodes > p.bf_threshold:
        tr = time.perf_counter()
        nodes_before = work.num_nodes
        edges = work.edges
        trials = _trials(work, edges, p, seed, rnd, 0, threads)
        if not trials:
            flags.append(f"round {rnd}: all trials failed, retrying with fresh seeds")
            trials = _trials(work, edges, p, seed, rnd, 1, threads)
            if not trials:
                raise SolveError(f"round {rnd}: all {p.ensemble} trials failed twice on {work.num_nodes} nodes")
        if len(trials) < p.ensemble:
            flags.append(f"round {rnd}: {p.ensemble - len(trials)} trials dropped")
        samples = np.array([t.energies for t in trials])
        frak = ensemble_energies(samples, p.scale)
        sign_of = {(u, v): (1 if e > 0 else -1) for (u, v, _), e in zip(edges, frak)}
        strong = [(u, v, abs(e)) for (u, v, _), e in zip(edges, frak) if e != 0]
        if not strong:
            # every edge shrank to zero: fix the single edge with the largest |mean|
            mu = samples.mean(axis=0)
            i = int(np.argmax(np.abs(mu)))
            if mu[i] == 0:
                i = int(stream(seed, _STALL, rnd).integers(len(edges)))
            u, v, _ = edges[i]
            sign_of[(u, v)] = 1 if mu[i] >= 0 else -1
            strong = [(u, v, 1.0)]
            flags.append(f"round {rnd}: no edge survived shrinkage; fixed ({u}, {v}) by mean")
        forest = max_spanning_forest(strong, stream(seed, _FOREST, rnd))
        fixed = 0
        for tree in forest.trees:
            for child, parent in tree.leaf_to_root():
                s = sign_of[(min(child, parent), max(child, parent))]
                record.add(child, parent, s)
                work = reduce_graph(work, child, parent, s)
                fixed += 1
        work = _drop_isolated(work, record)
        rounds.append(
            {
                "round": rnd,
                "nodes": nodes_before,
                "edges": len(edges),
                "fixed": fixed,
                "best_objective": round(max(t.value for t in trials), 12),
                "trials": len(trials),
                "line_search_flags": sum(t.ls_failed for t in trials),
                "seconds": time.perf_counter() - tr,
            }
        )
        rnd += 1
    bits = _finish(g, record)
    params = p.to_dict()
    return SolveReport.build(
        g, "rqrao", bits, seed, params, rounds, flags, {"total_seconds": time.perf_counter() - t0}
    )


def tree_rounding_solve(
    g: Graph, p: RqraoParams | None = None, rng: np.random.Generator | int | None = None, threads: int = 1
) -> SolveReport:
    """The recursion with a single trial per round, i.e. tree rounding of one state."""
    p = (p or RqraoParams()).with_(ensemble=1)
    rep = rqrao_solve(g, p, rng, threads)
    rep.algorithm = "tree"
    return rep


def qrao_solve(
    g: Graph,
    m: int = 3,
    chi: int = 2,
    rng: np.random.Generator | int | None = None,
    cfg: OptimizerConfig | None = None,
) -> SolveReport:
    """One relaxation, one optimized MPS, Pauli rounding of every node."""
    seed = int(as_generator(rng).integers(0, 2**63 - 1))
    t0 = time.perf_counter()
    r = stream(seed, _TRIAL)
    a = assign_paulis(g, m, r)
    h = build_mpo(build_terms(g, a), a.num_qubits)
    res = optimize(init_mps(a.num_qubits, chi, r), h, cfg)
    bits = decode_bits(a, site_expectations(res.state, a), r, nodes=list(g.nodes))
    flags = ["line search failed; best iterate used"] if res.line_search_failed else []
    params = {"m": m, "chi": chi, "optimizer": asdict(cfg or OptimizerConfig())}
    rounds = [{"round": 0, "nodes": g.num_nodes, "edges": g.num_edges, "fixed": g.num_nodes,
               "best_objective": round(res.value, 12), "seconds": time.perf_counter() - t0}]
    return SolveReport.build(g, "qrao", bits, seed, params, rounds, flags, {"total_seconds": time.perf_counter() - t0})


def brute_solve(g: Graph) -> SolveReport:
    t0 = time.perf_counter()
    bits, _ = brute_force_maxcut(g)
    return SolveReport.build(g, "brute", bits, None, {}, timing={"total_seconds": time.perf_counter() - t0})
