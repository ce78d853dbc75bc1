"""Bit-space enumeration helpers.

Scenario and configuration spaces are enumerated as integers 0..2^n-1 whose
bits select dimension values, processed in chunks as numpy 0/1 arrays.  The
helpers here are purely combinatorial; tree and formula semantics live in
the layer modules.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

# Chunks of 2^18 keep per-node temporaries around 256 KiB.
CHUNK_BITS = 18


class BitSpace:
    """An ordered list of named Boolean dimensions.

    Dimension ``i`` is bit ``i`` of the enumeration index, so dimension
    order fixes the canonical enumeration order: index 0 is all-false and
    counting up flips the first dimension fastest.
    """

    def __init__(self, dims: tuple[str, ...]):
        self.dims = dims
        self.index = {d: i for i, d in enumerate(dims)}
        self.size = 1 << len(dims)

    def __len__(self) -> int:
        return len(self.dims)

    def chunks(self, align: int = 1) -> Iterator[tuple[int, int]]:
        """Contiguous (start, stop) ranges covering the space.

        ``align`` forces chunk boundaries to multiples of that many points,
        so callers can keep sub-blocks (for example one attack row) whole.
        """
        step = max(1 << CHUNK_BITS, align)
        step -= step % align
        for start in range(0, self.size, step):
            yield start, min(start + step, self.size)

    def column(self, dim: str, start: int, stop: int) -> np.ndarray:
        """The 0/1 values of ``dim`` over index range [start, stop)."""
        idx = np.arange(start, stop, dtype=np.int64)
        return ((idx >> self.index[dim]) & 1).astype(np.uint8)

    def point(self, index: int) -> dict[str, bool]:
        """Decode one enumeration index into an assignment."""
        return {d: bool((index >> i) & 1) for i, d in enumerate(self.dims)}

    def mask_of(self, assignment) -> int:
        """Encode an assignment (mapping or set of true dims) as an index."""
        if isinstance(assignment, (set, frozenset)):
            items = ((d, True) for d in assignment)
        else:
            items = assignment.items()
        mask = 0
        for dim, value in items:
            if value:
                mask |= 1 << self.index[dim]
        return mask

    def force_bits(self, idx: np.ndarray, overrides: dict[str, bool]) -> np.ndarray:
        """Indices with the overridden dimensions forced to fixed values."""
        if not overrides:
            return idx
        clear = 0
        setbits = 0
        for dim, value in overrides.items():
            bit = 1 << self.index[dim]
            clear |= bit
            if value:
                setbits |= bit
        return (idx & ~clear) | setbits


def popcounts(masks: np.ndarray) -> np.ndarray:
    """Number of set bits of each mask (int64 input)."""
    counts = np.zeros(masks.shape, dtype=np.int64)
    work = masks.copy()
    while np.any(work):
        counts += work & 1
        work >>= 1
    return counts


def minimal_masks(masks: np.ndarray) -> np.ndarray:
    """Inclusion-minimal masks of ``masks``, ascending.

    Processes masks by rising popcount; a mask survives when no already
    kept mask is a subset of it.
    """
    if masks.size == 0:
        return masks.astype(np.int64)
    masks = np.unique(masks.astype(np.int64))
    order = np.argsort(popcounts(masks), kind="stable")
    masks = masks[order]
    kept = np.empty(masks.size, dtype=np.int64)
    n_kept = 0
    for m in masks:
        if n_kept and bool(np.any((kept[:n_kept] & m) == kept[:n_kept])):
            continue
        kept[n_kept] = m
        n_kept += 1
    return np.sort(kept[:n_kept])


def mask_bits(masks: np.ndarray, width: int) -> np.ndarray:
    """Bit matrix of shape (len(masks), width) for vectorized products."""
    return (masks[:, None] >> np.arange(width, dtype=np.int64)[None, :]) & 1


def scenario_prob_chunk(start: int, stop: int, probs: np.ndarray) -> np.ndarray:
    """Joint probability of each scenario index in [start, stop).

    ``probs[i]`` is the marginal probability that dimension ``i`` is set;
    dimensions are independent.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.ones(stop - start, dtype=np.float64)
    for i, p in enumerate(probs):
        bit = (idx >> i) & 1
        out *= np.where(bit == 1, p, 1.0 - p)
    return out
