"""Simulated random walks, used to cross-check exact counts.

Walks run on the edge table of a Cayley ball, vectorised with numpy.
Randomness comes from numpy's PCG64 seeded per block of trials with
``SeedSequence([seed, block_index])``; blocks have a fixed size, so hit
counts do not depend on how many threads process them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cayley import DEFAULT_CAP, CayleyBall
from .errors import UsageError

BLOCK = 1 << 15


@dataclass
class WalkSample:
    seed: int
    n: int
    trials: int
    hits: int

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.trials)


def _edge_array(b: CayleyBall) -> np.ndarray:
    k = len(b.gens)
    arr = np.full((len(b), k), -1, dtype=np.int64)
    for sid, row in enumerate(b.edges):
        if row:
            arr[sid] = row
    return arr


def _blocks(trials: int):
    start, index = 0, 0
    while start < trials:
        size = min(BLOCK, trials - start)
        yield index, size
        start += size
        index += 1


def _endpoints(edges: np.ndarray, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    k = edges.shape[1]
    state = np.zeros(size, dtype=np.int64)
    steps = rng.integers(0, k, size=(n, size))
    for t in range(n):
        state = edges[state, steps[t]]
    return state


def _run(trials, seed, threads, count_block):
    if not isinstance(trials, int) or trials < 1:
        raise UsageError(f"trials must be a positive integer, got {trials!r}")
    if not 0 <= seed < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")

    def work(block):
        index, size = block
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
        return int(count_block(size, rng))

    blocks = list(_blocks(trials))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(work, blocks))
    return sum(map(work, blocks))


def estimate_local(engine, gens, s, n: int, trials: int, seed: int, threads: int = 1,
                   cap=DEFAULT_CAP) -> WalkSample:
    """Fraction of n-step walks from the identity of S^1 that end at ``s``.

    The target is lambda_s(n) / |X|^n.
    """
    if n < 1:
        raise UsageError("walk length must be >= 1")
    b = CayleyBall(engine, gens, n, cap=cap)
    edges = _edge_array(b)
    target = b.id_of(s)

    def count(size, rng):
        ends = _endpoints(edges, n, size, rng)
        return 0 if target is None else np.count_nonzero(ends == target)

    return WalkSample(seed, n, trials, _run(trials, seed, threads, count))


def estimate_coincidence(engine, gens, n: int, trials: int, seed: int, threads: int = 1,
                         cap=DEFAULT_CAP) -> WalkSample:
    """Fraction of trials in which two independent n-step walks end together.

    The target is gamma'(2n) / |X|^(2n).
    """
    if n < 1:
        raise UsageError("walk length must be >= 1")
    b = CayleyBall(engine, gens, n, cap=cap)
    edges = _edge_array(b)

    def count(size, rng):
        first = _endpoints(edges, n, size, rng)
        second = _endpoints(edges, n, size, rng)
        return np.count_nonzero(first == second)

    return WalkSample(seed, n, trials, _run(trials, seed, threads, count))


def exact_local(table, s, n) -> Fraction:
    return Fraction(table.lam(s, n), len(table.gens) ** n)


def exact_coincidence(table, n) -> Fraction:
    return Fraction(table.inner(n, n), len(table.gens) ** (2 * n))
