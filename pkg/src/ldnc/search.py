"""Brute-force solvability search over all codes of a layered network.

Candidates enumerate every assignment of the free matrix entries: the
encoders in session order, then the relay matrices in node order, then
the decoders in session order, each matrix row-major, with the first
entry as the least significant base-p digit of the candidate index.
:func:`candidate_code` decodes an index into a code, so the enumeration
order is part of the public contract and results are reproducible.

:func:`exhaustive_search` scans candidates in contiguous chunks, each
evaluated as one batched pass over the network (all codes in a chunk
propagate together as stacked integer arrays).  Chunks are independent,
so they could be handed to parallel workers; the reported code is always
the one with the globally smallest solving index, and any returned code
is re-verified through the ordinary transfer-matrix path before it is
handed back.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .coding import LinearCode, is_solving
from .gf_linalg import GfMatrix
from .network import LayeredNetwork

DEFAULT_BUDGET = 1_000_000
_CHUNK = 1 << 16


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a code search.

    ``outcome`` is one of ``found``, ``exhausted``, ``budget-exceeded``
    (exhaustive) or ``found`` / ``not-found`` (random).  For exhaustive
    hits ``index`` is the candidate index; for random hits it is the
    1-based trial number.  ``scanned`` counts evaluated candidates.
    """

    outcome: str
    code: LinearCode | None
    index: int | None
    scanned: int


@dataclass(frozen=True)
class _Slot:
    kind: str  # "C", "F" or "D"
    key: object
    rows: int
    cols: int
    offset: int


def _layout(ln: LayeredNetwork) -> tuple[list[_Slot], int]:
    q = ln.base.q
    slots: list[_Slot] = []
    offset = 0

    def push(kind, key, rows, cols):
        nonlocal offset
        slots.append(_Slot(kind, key, rows, cols, offset))
        offset += rows * cols

    for s in ln.base.sessions_sorted():
        push("C", s.id, q, ln.message_length(s))
    for v in ln.relay_nodes():
        push("F", v, q, q)
    for s in ln.base.sessions_sorted():
        push("D", s.id, ln.message_length(s), q)
    return slots, offset


def free_entry_count(ln: LayeredNetwork) -> int:
    """Number of free matrix entries a code for this network has."""
    return _layout(ln)[1]


def candidate_count(ln: LayeredNetwork) -> int:
    """Size of the full code space, p ** free_entry_count."""
    return ln.base.field.p ** free_entry_count(ln)


def _code_from_entries(ln: LayeredNetwork, slots, entries) -> LinearCode:
    fm = ln.base.field
    encoders, decoders, relays = {}, {}, {}
    for slot in slots:
        block = np.array(
            entries[slot.offset:slot.offset + slot.rows * slot.cols], dtype=np.int64
        ).reshape(slot.rows, slot.cols)
        mat = GfMatrix(fm, block)
        if slot.kind == "C":
            encoders[slot.key] = mat
        elif slot.kind == "D":
            decoders[slot.key] = mat
        else:
            relays[slot.key] = mat
    return LinearCode(network=ln, encoders=encoders, decoders=decoders, relays=relays)


def candidate_code(ln: LayeredNetwork, index: int) -> LinearCode:
    """Decode a candidate index into its code (the enumeration contract)."""
    slots, total = _layout(ln)
    if not 0 <= index < ln.base.field.p ** total:
        raise ValueError(f"candidate index {index} out of range")
    p = ln.base.field.p
    entries = []
    for _ in range(total):
        entries.append(index % p)
        index //= p
    return _code_from_entries(ln, slots, entries)


def _scan_chunk(ln: LayeredNetwork, slots, total_entries, start, count) -> np.ndarray:
    """Boolean solving mask for candidates start .. start+count-1."""
    p = ln.base.field.p
    idx = np.arange(start, start + count, dtype=np.int64)
    entries = np.zeros((count, total_entries), dtype=np.int64)
    top = start + count - 1
    power = 1
    for e in range(total_entries):
        if power > top:
            break
        entries[:, e] = (idx // power) % p
        power *= p
    mats = {
        (slot.kind, slot.key): entries[:, slot.offset:slot.offset + slot.rows * slot.cols]
        .reshape(count, slot.rows, slot.cols)
        for slot in slots
    }

    sessions = ln.base.sessions_sorted()
    ok = np.ones(count, dtype=bool)
    for sl in sessions:
        wl = ln.message_length(sl)
        influence = {sl.source: mats[("C", sl.id)]}
        arrived: dict[str, np.ndarray] = {}
        for layer in range(1, ln.horizon + 1):
            arrived = {}
            for v in ln.nodes_at(layer):
                acc = None
                for e in ln.base.in_edges(v):
                    if e.src not in influence:
                        continue
                    term = np.einsum(
                        "ab,nbc->nac", e.gain.to_array(), influence[e.src]
                    )
                    acc = term if acc is None else acc + term
                if acc is not None:
                    arrived[v] = acc % p
            if layer < ln.horizon:
                influence = {
                    v: np.einsum("nab,nbc->nac", mats[("F", v)], y) % p
                    for v, y in arrived.items()
                }
        for sk in sessions:
            wk = ln.message_length(sk)
            y = arrived.get(sk.destination)
            if y is None:
                gamma = np.zeros((count, wk, wl), dtype=np.int64)
            else:
                gamma = np.einsum("nab,nbc->nac", mats[("D", sk.id)], y) % p
            if sk.id == sl.id:
                target = np.eye(wk, wl, dtype=np.int64)
            else:
                target = np.zeros((wk, wl), dtype=np.int64)
            ok &= (gamma == target).all(axis=(1, 2))
        if not ok.any():
            break
    return ok


def _batched_sums_fit_int64(ln: LayeredNetwork) -> bool:
    p = ln.base.field.p
    q = ln.base.q
    fan_in = max((len(ln.base.in_edges(v)) for v in ln.base.nodes), default=1)
    widest = max((ln.message_length(s) for s in ln.base.sessions), default=1)
    return max(fan_in, 1) * max(q, widest, 1) * (p - 1) * (p - 1) < 2**63


def exhaustive_search(
    ln: LayeredNetwork, budget: int = DEFAULT_BUDGET, chunk_size: int = _CHUNK
) -> SearchResult:
    """Scan codes in enumeration order for the first solving one.

    Returns ``found`` with the lexicographically first solving code,
    ``exhausted`` when the whole space fits within the budget and holds
    no solving code (so none exists at this vector length, horizon and
    width profile), or ``budget-exceeded`` when the scan was truncated.
    """
    slots, total_entries = _layout(ln)
    space = ln.base.field.p ** total_entries
    bound = min(space, budget)
    if not _batched_sums_fit_int64(ln):
        # enormous moduli: evaluate one candidate at a time through the
        # exact (arbitrary-precision) matrix path
        for index in range(bound):
            code = candidate_code(ln, index)
            if is_solving(ln, code):
                return SearchResult("found", code, index, index + 1)
        if bound == space:
            return SearchResult("exhausted", None, None, bound)
        return SearchResult("budget-exceeded", None, None, bound)
    start = 0
    while start < bound:
        count = min(chunk_size, bound - start)
        mask = _scan_chunk(ln, slots, total_entries, start, count)
        hits = np.flatnonzero(mask)
        if hits.size:
            index = start + int(hits[0])
            code = candidate_code(ln, index)
            if not is_solving(ln, code):
                raise RuntimeError(
                    f"batched scan and transfer-matrix check disagree at index {index}"
                )
            return SearchResult("found", code, index, index + 1)
        start += count
    if bound == space:
        return SearchResult("exhausted", None, None, bound)
    return SearchResult("budget-exceeded", None, None, bound)


def random_search(ln: LayeredNetwork, trials: int, seed: int = 0) -> SearchResult:
    """Sample codes uniformly; deterministic given the seed.

    Entries are drawn in enumeration order, one batch per trial, so equal
    seeds replay identical candidate sequences.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    slots, total_entries = _layout(ln)
    p = ln.base.field.p
    rng = random.Random(seed)
    for trial in range(1, trials + 1):
        entries = [rng.randrange(p) for _ in range(total_entries)]
        code = _code_from_entries(ln, slots, entries)
        if is_solving(ln, code):
            return SearchResult("found", code, trial, trial)
    return SearchResult("not-found", None, None, trials)
