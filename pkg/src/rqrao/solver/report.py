from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from ..graph import Graph, cut_weight
from ..tensornet.optim import OptimizerConfig

__all__ = ["RqraoParams", "SolveReport", "ReportError"]


class ReportError(RuntimeError):
    pass


@dataclass(frozen=True)
class RqraoParams:
    """Hyperparameters of the recursive solver (defaults: m=3, N=20, S=2, chi=2, M=10)."""

    m: int = 3
    ensemble: int = 20
    scale: float = 2.0
    chi: int = 2
    bf_threshold: int = 10
    amplitude: float = 1e-5
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.m not in (1, 2, 3):
            raise ValueError("m must be 1, 2 or 3")
        if self.ensemble < 1:
            raise ValueError("ensemble size N must be >= 1")
        if self.bf_threshold < 1:
            raise ValueError("brute-force threshold M must be >= 1")
        if self.scale < 0:
            raise ValueError("scale factor S must be >= 0")
        if self.chi < 1:
            raise ValueError("bond dimension must be >= 1")
        if self.amplitude < 0:
            raise ValueError("perturbation amplitude must be >= 0")

    def with_(self, **kw) -> "RqraoParams":
        return replace(self, **kw)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


_TELEMETRY = ["round", "nodes", "edges", "fixed", "best_objective", "seconds"]


@dataclass
class SolveReport:
    """Outcome of one solve.

    ``bits`` is aligned with ``graph.nodes`` of the input. Wall-clock data live
    only in ``timing`` and the ``seconds`` column of ``rounds`` so the rest of
    the report is reproducible byte for byte.
    """

    algorithm: str
    bits: np.ndarray
    weight: float
    seed: int | None
    params: dict[str, Any] = field(default_factory=dict)
    rounds: list[dict[str, Any]] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)

    @classmethod
    def build(cls, g: Graph, algorithm: str, bits, seed, params, rounds=None, flags=None, timing=None):
        bits = np.asarray(bits, dtype=np.int8)
        return cls(algorithm, bits, cut_weight(g, bits), seed, dict(params), rounds or [], flags or [], timing or {})

    def check(self, g: Graph, tol: float = 1e-9) -> None:
        """Recompute the cut weight from scratch and compare."""
        w = cut_weight(g, self.bits)
        if abs(w - self.weight) > tol * max(1.0, abs(w)):
            raise ReportError(f"reported weight {self.weight} but bits cut {w}")

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        d = {
            "algorithm": self.algorithm,
            "weight": self.weight,
            "bits": "".join(str(int(b)) for b in self.bits),
            "seed": self.seed,
            "params": self.params,
            "rounds": [{k: v for k, v in r.items() if k != "seconds"} for r in self.rounds],
            "flags": list(self.flags),
        }
        if timing:
            d["timing"] = dict(self.timing, round_seconds=[r.get("seconds", 0.0) for r in self.rounds])
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True, default=_jsonable)

    def telemetry_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_TELEMETRY)
        for r in self.rounds:
            w.writerow([r.get(k, "") for k in _TELEMETRY])
        return buf.getvalue()


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x)}")
