"""Glue between the raw-point oracles and library objects."""

from __future__ import annotations

import numpy as np

from noiseknn.metric import BITS, REAL, SYMBOL, Dataset, DiscreteTable, Euclidean, HypercubeUltrametric, encode_bits


def library_dataset(kind, pts, z, table=None, nbits=None, d=1.0):
    if kind == "real":
        return Dataset(np.array(pts, dtype=float), z, REAL), Euclidean()
    if kind == "symbol":
        return Dataset(np.array(pts), z, SYMBOL), DiscreteTable(np.array(table))
    codes = [encode_bits(p) for p in pts]
    return Dataset(np.array(codes), z, BITS, nbits=nbits), HypercubeUltrametric(d)


ACCEPTANCE_LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    """Log one acceptance line (shown in the terminal summary) and assert it."""
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
