"""Exact local and global cogrowth counts and rate estimates.

Count vectors are computed by dynamic programming over the Cayley ball:
v_0 is the point mass at the identity of S^1 and v_{n+1}[t] sums v_n[s]
over edges s -> t.  Everything is exact integer arithmetic; floats appear
only in rate estimates, computed from integer logarithms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .algebra import GeneratorChoice, SemigroupEngine
from .cayley import DEFAULT_CAP, CayleyBall
from .errors import UsageError


@dataclass
class CountVector:
    n: int
    counts: dict  # element -> int

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class RateEstimate:
    value: float
    horizon: int
    certified_lower_bound: bool
    window: list[int] = field(default_factory=list)


def graded_weight(engine: SemigroupEngine, gens: GeneratorChoice) -> int | None:
    """Common length of all generator targets, when the engine has a length grading.

    If it exists, words of different lengths never represent the same element,
    so cross-length inner products vanish.
    """
    weights = {engine.length(t) for t in gens.targets}
    if len(weights) == 1:
        w = weights.pop()
        if w is not None and w > 0:
            return w
    return None


class CogrowthTable:
    """Count vectors v_1..v_N with the derived local and global functions."""

    def __init__(self, engine: SemigroupEngine, gens: GeneratorChoice, N: int, cap: int = DEFAULT_CAP):
        if not isinstance(N, int) or N < 0:
            raise UsageError(f"horizon must be a nonnegative integer, got {N!r}")
        self.engine = engine
        self.gens = gens
        self.N = N
        self.ball = CayleyBall(engine, gens, N, cap=cap)
        self.graded = graded_weight(engine, gens) is not None
        self._vectors = [{0: 1}]
        edges = self.ball.edges
        for _ in range(N):
            prev = self._vectors[-1]
            nxt: dict[int, int] = {}
            for sid, c in prev.items():
                for tid in edges[sid]:
                    nxt[tid] = nxt.get(tid, 0) + c
            self._vectors.append(nxt)

    @property
    def size(self) -> int:
        return len(self.gens)

    def vector_ids(self, n: int) -> dict[int, int]:
        return self._vectors[n]

    def count_vector(self, n: int) -> CountVector:
        elems = self.ball.elements
        return CountVector(n, {elems[i]: c for i, c in self._vectors[n].items()})

    def lam(self, s, n: int) -> int:
        sid = self.ball.id_of(s)
        if sid is None:
            return 0
        return self._vectors[n].get(sid, 0)

    def local(self, s) -> dict[int, int]:
        return {n: self.lam(s, n) for n in range(1, self.N + 1)}

    def inner(self, i: int, j: int) -> int:
        a, b = self._vectors[i], self._vectors[j]
        if len(a) > len(b):
            a, b = b, a
        return sum(c * b.get(k, 0) for k, c in a.items())

    def gamma_prime(self) -> dict[int, int]:
        out = {}
        for n in range(1, 2 * self.N + 1):
            out[n] = self.inner(n // 2, n // 2) if n % 2 == 0 else 0
        return out

    def gamma_horizon(self) -> int:
        return 2 * self.N if self.graded else self.N + 1

    def gamma(self) -> dict[int, int]:
        """gamma(n) for 1 <= n <= gamma_horizon().

        Needs every split i + j = n with i, j <= N, i.e. n <= N + 1, unless
        the generators are graded, in which case only i = j contributes.
        """
        out = {}
        for n in range(1, self.gamma_horizon() + 1):
            if self.graded:
                out[n] = self.inner(n // 2, n // 2) if n % 2 == 0 else 0
                continue
            total = 0
            for i in range(1, n):
                j = n - i
                if i > j:
                    break
                term = self.inner(i, j)
                total += term if i == j else 2 * term
            out[n] = total
        return out


def count_vectors(engine, gens, N, cap=DEFAULT_CAP) -> list[CountVector]:
    table = CogrowthTable(engine, gens, N, cap=cap)
    return [table.count_vector(n) for n in range(1, N + 1)]


def local_cogrowth(engine, gens, s, N, cap=DEFAULT_CAP) -> dict[int, int]:
    return CogrowthTable(engine, gens, N, cap=cap).local(s)


def gamma_prime(engine, gens, N, cap=DEFAULT_CAP) -> dict[int, int]:
    return CogrowthTable(engine, gens, N, cap=cap).gamma_prime()


def gamma(engine, gens, N, cap=DEFAULT_CAP) -> dict[int, int]:
    return CogrowthTable(engine, gens, N, cap=cap).gamma()


def _root(value: int, n: int) -> float:
    return math.exp(math.log(value) / n)


def rate_from_gamma_prime(gp: dict[int, int], N: int) -> RateEstimate:
    window = [n for n in range(2, 2 * N + 1, 2) if gp.get(n, 0) >= 1]
    best = max(math.log(gp[n]) / n for n in window)
    return RateEstimate(math.exp(best), N, True, window)


def gamma_rate(engine=None, gens=None, N=None, cap=DEFAULT_CAP, table: CogrowthTable | None = None) -> RateEstimate:
    """Largest gamma'(n)^(1/n) over even n <= 2N.

    Every such value is a lower bound for the global cogrowth rate, which is
    a supremum over n, so the estimate is certified.
    """
    if table is None:
        if not isinstance(N, int) or N < 1:
            raise UsageError(f"gamma_rate needs N >= 1, got {N!r}")
        table = CogrowthTable(engine, gens, N, cap=cap)
    elif table.N < 1:
        raise UsageError("gamma_rate needs N >= 1")
    return rate_from_gamma_prime(table.gamma_prime(), table.N)


def local_rate(engine=None, gens=None, s=None, N=None, cap=DEFAULT_CAP, table: CogrowthTable | None = None) -> RateEstimate:
    """max lambda_s(n)^(1/n) over n in [ceil(N/2), N]; a heuristic, not a bound."""
    if table is None:
        if not isinstance(N, int) or N < 2:
            raise UsageError(f"local_rate needs N >= 2, got {N!r}")
        table = CogrowthTable(engine, gens, N, cap=cap)
    N = table.N
    window = list(range(-(-N // 2), N + 1))
    logs = [math.log(c) / n for n in window if (c := table.lam(s, n)) >= 1]
    value = math.exp(max(logs)) if logs else 0.0
    return RateEstimate(value, N, False, window)


def enumerate_words(gens: GeneratorChoice, n: int):
    return itertools.product(range(len(gens)), repeat=n)


def word_histogram(engine, gens, n: int) -> dict:
    """Histogram of the elements represented by all |X|^n words, by direct evaluation."""
    hist: dict = {}
    for word in enumerate_words(gens, n):
        s = engine.identity
        for i in word:
            s = engine.mul(s, gens.targets[i])
        hist[s] = hist.get(s, 0) + 1
    return hist


def brute_force_gamma(engine, gens, n: int) -> int:
    """Count pairs (u, v) of nonempty words with |u| + |v| = n and equal value."""
    values = {}
    for length in range(1, n):
        values[length] = []
        for word in enumerate_words(gens, length):
            s = gens.targets[word[0]]
            for i in word[1:]:
                s = engine.mul(s, gens.targets[i])
            values[length].append(s)
    count = 0
    for i in range(1, n):
        for u in values[i]:
            for v in values[n - i]:
                if u == v:
                    count += 1
    return count


@dataclass
class CheckResult:
    passed: bool
    witness: str | None = None
    checked: int = 0


def verify_convolution(engine, gens, N, track=(), cap=DEFAULT_CAP, table: CogrowthTable | None = None,
                       brute_limit: int = 8) -> CheckResult:
    """Check gamma against pair enumeration (small n) and gamma(2n) >= lambda_s(n)^2."""
    if table is None:
        table = CogrowthTable(engine, gens, N, cap=cap)
    g = table.gamma()
    checked = 0
    for n in range(2, min(max(g), brute_limit) + 1):
        expected = brute_force_gamma(table.engine, table.gens, n)
        checked += 1
        if g[n] != expected:
            return CheckResult(False, f"gamma({n}) = {g[n]} but pair enumeration gives {expected}", checked)
    tracked = [table.engine.identity, *table.gens.targets, *track]
    for s in tracked:
        for n in range(1, table.N + 1):
            if 2 * n not in g:
                break
            lam = table.lam(s, n)
            checked += 1
            if g[2 * n] < lam * lam:
                name = table.engine.canonical(s)
                return CheckResult(False, f"gamma({2 * n}) = {g[2 * n]} < lambda_{name}({n})^2 = {lam * lam}", checked)
    return CheckResult(True, None, checked)
