"""Bundled benchmark instances."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .graph import Graph, parse_rudy

__all__ = ["RND14_OPTIMUM", "RND14_STRING", "rnd14", "rnd14_optimum_bits"]

RND14_OPTIMUM = 12.0
RND14_STRING = "00001101101010"  # b_13 ... b_0, unique up to a global flip


def rnd14() -> Graph:
    """14-node random graph with +-1 weights and edge density 0.5 (see ``notebooks/00_build_rnd14.py``)."""
    return parse_rudy(resources.files("rqrao.data").joinpath("rnd14.txt").read_text())


def rnd14_optimum_bits() -> np.ndarray:
    """The maximizer as an array indexed by node, ``bits[i] = b_i``."""
    return np.array([int(c) for c in reversed(RND14_STRING)], dtype=np.int8)
