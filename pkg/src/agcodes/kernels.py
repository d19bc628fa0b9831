"""numpy kernels for the exhaustive-search hot paths: spanning a linear
space of words, pairwise minimum distance, and ball-center search.

Every kernel is deterministic. Reductions are pure minima/maxima with
first-occurrence tie-breaks that do not depend on chunk size, and the
optional thread fan-out (AGCODES_THREADS) only splits commutative
reductions across row blocks.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError

EXHAUSTIVE_CENTER_CAP = 1 << 24
SPAN_CELL_CAP = 1 << 26

_TABLE_CACHE: dict = {}


def thread_count() -> int:
    raw = os.environ.get("AGCODES_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def field_tables(field):
    """(ADD, MUL) numpy lookup tables for a field of order <= 256."""
    cached = _TABLE_CACHE.get(field)
    if cached is not None:
        return cached
    q = field.q
    if q > 256:
        raise PreconditionError("vector kernels support field order <= 256")
    add = np.empty((q, q), dtype=np.uint8)
    mul = np.empty((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            add[a, b] = field.add(a, b)
            mul[a, b] = field.mul(a, b)
    _TABLE_CACHE[field] = (add, mul)
    return add, mul


def linear_span_words(field, basis_rows) -> np.ndarray:
    """All q^k words sum_k c_k * row_k, one per coefficient tuple.

    Row index encodes the coefficients little-endian: index = sum c_k q^k,
    so row 0 is the zero word and basis_rows[0] varies fastest.
    """
    add, mul = field_tables(field)
    q = field.q
    rows = [np.asarray(r, dtype=np.uint8) for r in basis_rows]
    n = rows[0].shape[0] if rows else 0
    if q ** len(rows) * max(n, 1) > SPAN_CELL_CAP:
        raise PreconditionError("linear span too large to enumerate")
    words = np.zeros((1, n), dtype=np.uint8)
    for row in rows:
        scaled = mul[np.arange(q, dtype=np.uint8)[:, None], row[None, :]]
        # (q, M, n): for each coefficient value, shift the whole prefix
        words = add[scaled[:, None, :], words[None, :, :]].reshape(-1, n)
    return words


def words_array(words, alphabet_size: int) -> np.ndarray:
    dtype = np.uint8 if alphabet_size <= 256 else np.uint16
    return np.array(list(words), dtype=dtype).reshape(len(words), -1)


def pairwise_min_distance(arr: np.ndarray) -> int | None:
    """Exact minimum pairwise Hamming distance; None for fewer than 2 rows."""
    m = arr.shape[0]
    if m < 2:
        return None
    block = max(1, (1 << 22) // max(1, m))
    starts = list(range(0, m - 1, block))

    def scan(start):
        stop = min(start + block, m - 1)
        best = arr.shape[1] + 1
        for i in range(start, stop):
            d = (arr[i + 1 :] != arr[i]).sum(axis=1)
            lo = int(d.min())
            if lo < best:
                best = lo
        return best

    workers = thread_count()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return min(pool.map(scan, starts))
    return min(scan(s) for s in starts)


def min_nonzero_weight(arr: np.ndarray) -> int:
    weights = (arr != 0).sum(axis=1)
    nz = weights[weights > 0]
    if nz.size == 0:
        raise PreconditionError("no nonzero word")
    return int(nz.min())


@dataclass
class SearchOutcome:
    """Result of a ball-center search over center tuples."""

    best_count: int
    centers: tuple[tuple[int, ...], ...]
    survivor_indices: np.ndarray
    strategy: str
    n_candidates: int
    census_total: int | None = None
    n_centers_space: int | None = None


def _survivor_mask(word_arrays, radii, center_digits, n):
    mask = None
    for r, words in enumerate(word_arrays):
        c = np.asarray(center_digits[r * n : (r + 1) * n], dtype=words.dtype)
        d = (words != c).sum(axis=1)
        m = d <= radii[r]
        mask = m if mask is None else (mask & m)
    return mask


def _count_chunk(word_arrays, radii, centers: np.ndarray, n) -> np.ndarray:
    counts = None
    for r, words in enumerate(word_arrays):
        c = centers[:, r * n : (r + 1) * n]
        d = (words[None, :, :] != c[:, None, :]).sum(axis=2)
        m = d <= radii[r]
        counts = m if counts is None else (counts & m)
    return counts.sum(axis=1)


def center_search(
    word_arrays,
    radii,
    alphabet_size: int,
    strategy: str = "exhaustive",
    seed: int = 0,
    trials: int = 64,
    census: bool = False,
) -> SearchOutcome:
    """Find a center tuple maximizing the number of rows within the given
    Hamming radii of it, simultaneously for every word array.

    exhaustive scans all alphabet_size^(m*N) tuples in ascending symbol
    order and keeps the first maximizer (the lexicographically least one).
    random scores the all-zeros tuple plus `trials` seeded tuples. greedy
    starts from one seeded tuple and accepts strict single-coordinate
    improvements until a full pass stalls, then falls back to the all-zeros
    tuple if that is at least as good. The all-zeros candidate guarantees at
    least one survivor whenever the zero word is present.
    """
    m = len(word_arrays)
    if m == 0 or len(radii) != m:
        raise PreconditionError("need one radius per word array")
    n = word_arrays[0].shape[1]
    total_positions = m * n

    def outcome(best_count, digits, n_cand, census_total=None, space=None):
        per_r = tuple(
            tuple(int(x) for x in digits[r * n : (r + 1) * n]) for r in range(m)
        )
        mask = _survivor_mask(word_arrays, radii, digits, n)
        return SearchOutcome(
            best_count=int(best_count),
            centers=per_r,
            survivor_indices=np.nonzero(mask)[0],
            strategy=strategy,
            n_candidates=n_cand,
            census_total=census_total,
            n_centers_space=space,
        )

    if strategy == "exhaustive":
        space = alphabet_size ** total_positions
        if space > EXHAUSTIVE_CENTER_CAP:
            raise PreconditionError(
                f"exhaustive center space {space} exceeds cap {EXHAUSTIVE_CENTER_CAP}"
            )
        weights = [
            alphabet_size ** (total_positions - 1 - k) for k in range(total_positions)
        ]
        dtype = np.uint8 if alphabet_size <= 256 else np.uint16
        chunk = max(1, (1 << 22) // max(1, word_arrays[0].shape[0]))
        best_count = -1
        best_digits = None
        census_total = 0
        for start in range(0, space, chunk):
            idx = np.arange(start, min(start + chunk, space), dtype=np.int64)
            centers = np.empty((idx.shape[0], total_positions), dtype=dtype)
            for k, w in enumerate(weights):
                centers[:, k] = (idx // w) % alphabet_size
            counts = _count_chunk(word_arrays, radii, centers, n)
            if census:
                census_total += int(counts.sum())
            top = int(counts.max())
            if top > best_count:
                best_count = top
                best_digits = tuple(int(x) for x in centers[int(np.argmax(counts))])
        return outcome(
            best_count, best_digits, space, census_total if census else None, space
        )

    rng = random.Random(seed)

    def count_one(digits):
        return int(_survivor_mask(word_arrays, radii, digits, n).sum())

    zeros = tuple([0] * total_positions)
    if strategy == "random":
        candidates = [zeros] + [
            tuple(rng.randrange(alphabet_size) for _ in range(total_positions))
            for _ in range(trials)
        ]
        best_digits = None
        best_count = -1
        for cand in candidates:
            c = count_one(cand)
            if c > best_count:
                best_count = c
                best_digits = cand
        return outcome(best_count, best_digits, len(candidates))

    if strategy == "greedy":
        current = [rng.randrange(alphabet_size) for _ in range(total_positions)]
        current_count = count_one(tuple(current))
        evaluated = 1
        improved = True
        while improved:
            improved = False
            for pos in range(total_positions):
                original = current[pos]
                for sym in range(alphabet_size):
                    if sym == original:
                        continue
                    current[pos] = sym
                    c = count_one(tuple(current))
                    evaluated += 1
                    if c > current_count:
                        current_count = c
                        original = sym
                        improved = True
                    else:
                        current[pos] = original
        zeros_count = count_one(zeros)
        evaluated += 1
        if zeros_count > current_count:
            return outcome(zeros_count, zeros, evaluated)
        return outcome(current_count, tuple(current), evaluated)

    raise PreconditionError(f"unknown center strategy {strategy!r}")
