"""The right random-walk Markov operator M on l2(S^1).

M is never stored as a matrix.  A finitely supported vector v is a dict
element -> number and vM is computed exactly on its full image:

    (vM)(t) = (1/|X|) * sum over (s, i) with s x_i = t of v(s).

Left walks are handled by running the same code on the opposite engine.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import GeneratorChoice, SemigroupEngine
from .cayley import DEFAULT_CAP, CayleyBall, IndegreeReport, right_indegree_stats
from .cogrowth import CheckResult, CogrowthTable, gamma_rate
from .errors import UsageError


@dataclass
class WalkVector:
    step: int
    support: dict  # element -> Fraction


def apply(engine: SemigroupEngine, gens: GeneratorChoice, v: dict) -> dict:
    """vM; exact (Fraction) when v holds ints or Fractions, float otherwise."""
    out: dict = {}
    for s, a in v.items():
        if not a:
            continue
        for t in gens.targets:
            p = engine.mul(s, t)
            out[p] = out.get(p, 0) + a
    k = len(gens)
    if all(isinstance(a, (int, Fraction)) for a in out.values()):
        return {p: Fraction(a) / k for p, a in out.items()}
    return {p: a / k for p, a in out.items()}


def norm_squared(v: dict):
    return sum(a * a for a in v.values())


def walk_vector(engine, gens, n, cap=DEFAULT_CAP, table: CogrowthTable | None = None) -> WalkVector:
    """chi_1 M^n, exactly: lambda_s(n) / |X|^n at every element s."""
    if table is None or table.N < n:
        table = CogrowthTable(engine, gens, n, cap=cap)
    denom = len(table.gens) ** n
    elems = table.ball.elements
    return WalkVector(n, {elems[i]: Fraction(c, denom) for i, c in table.vector_ids(n).items()})


def walk_norm_squared(table: CogrowthTable, n: int) -> Fraction:
    """|chi_1 M^n|_2^2 as an exact rational."""
    vec = table.vector_ids(n)
    return Fraction(sum(c * c for c in vec.values()), len(table.gens) ** (2 * n))


def verify_walk_identity(engine, gens, N, cap=DEFAULT_CAP, table: CogrowthTable | None = None) -> CheckResult:
    """gamma'(2n) |X|^(-2n) == |chi_1 M^n|_2^2 for n <= N, in exact rationals.

    The right-hand side is built from walk vectors obtained by applying M
    step by step to chi_1, independently of the integer count vectors.
    """
    if table is None:
        table = CogrowthTable(engine, gens, N, cap=cap)
    gp = table.gamma_prime()
    k = len(table.gens)
    v = {table.engine.identity: Fraction(1)}
    for n in range(1, table.N + 1):
        v = apply(table.engine, table.gens, v)
        lhs = Fraction(gp[2 * n], k ** (2 * n))
        rhs = norm_squared(v)
        if lhs != rhs:
            return CheckResult(False, f"n={n}: gamma'(2n)/|X|^2n = {lhs} but |chi_1 M^n|^2 = {rhs}", n)
    return CheckResult(True, None, table.N)


def rayleigh_quotient(engine, gens, v: dict) -> float:
    """|vM|_2 / |v|_2 for a finitely supported nonzero v; image computed exactly."""
    den = norm_squared(v)
    if not den:
        raise UsageError("Rayleigh quotient of the zero vector")
    num = norm_squared(apply(engine, gens, v))
    if isinstance(num, Fraction) or isinstance(den, Fraction):
        return math.sqrt(Fraction(num) / Fraction(den))
    return math.sqrt(num / den)


@dataclass
class NormBound:
    value: float
    walk_quotients: list[float] = field(default_factory=list)
    power_quotients: list[float] = field(default_factory=list)


def _walk_iterate(engine, gens, steps):
    """Yield (v, |vM|/|v|) along v = chi_1 M^j / |chi_1 M^j|, j < steps."""
    v = {engine.identity: 1.0}
    for _ in range(steps):
        w = apply(engine, gens, v)
        norm_w = math.sqrt(norm_squared(w))
        yield v, norm_w / math.sqrt(norm_squared(v))
        v = {s: a / norm_w for s, a in w.items()}


def _power_iterate(engine, gens, radius, iterations, cap):
    """Yield (v, |vM|/|v|) for power iteration of MM* on the radius ball.

    The start is the uniform vector on the ball; chi_1 is a poor start since
    it is often an eigenvector of MM* (whenever 1 has no proper right divisors).
    """
    if not isinstance(radius, int) or radius < 1:
        raise UsageError(f"radius must be >= 1, got {radius!r}")
    b = CayleyBall(engine, gens, radius + 1, cap=cap)
    inner = [i for i in range(len(b)) if b.layer_of[i] <= radius]
    k = len(gens)
    v = {i: 1.0 / math.sqrt(len(inner)) for i in inner}
    for _ in range(iterations):
        w: dict[int, float] = {}
        for sid, a in v.items():
            for tid in b.edges[sid]:
                w[tid] = w.get(tid, 0.0) + a / k
        yield {b.elements[i]: a for i, a in v.items()}, math.sqrt(norm_squared(w) / norm_squared(v))
        # adjoint step: (wM*)(s) = (1/|X|) sum_i w(s x_i), kept inside the ball
        nxt = {}
        for sid in inner:
            acc = sum(w.get(tid, 0.0) for tid in b.edges[sid])
            if acc:
                nxt[sid] = acc / k
        scale = math.sqrt(norm_squared(nxt))
        if scale == 0.0:
            return
        v = {sid: a / scale for sid, a in nxt.items()}


def norm_lower_bound(engine, gens, radius: int, iterations: int, cap=DEFAULT_CAP) -> NormBound:
    """Lower bound for ||M||_2 from concrete finitely supported vectors.

    Two families are tried: the normalised walk vectors chi_1 M^j for
    j < min(iterations, radius), and power iteration of MM* restricted to the
    radius ball.  Every quotient |vM|/|v| uses the full image of v, so each
    one is a true lower bound; the best is returned.
    """
    if not isinstance(radius, int) or radius < 1:
        raise UsageError(f"radius must be >= 1, got {radius!r}")
    walk = [q for _, q in _walk_iterate(engine, gens, max(1, min(iterations, radius)))]
    power = [q for _, q in _power_iterate(engine, gens, radius, iterations, cap)]
    return NormBound(max(walk + power), walk, power)


def power_iteration_vectors(engine, gens, radius: int, iterations: int, cap=DEFAULT_CAP) -> list[dict]:
    """The MM* power-iteration vectors visited by ``norm_lower_bound``, keyed by element."""
    return [v for v, _ in _power_iterate(engine, gens, radius, iterations, cap)]


def random_vectors(engine, gens, radius: int, count: int, seed: int, max_support: int = 50,
                   cap=DEFAULT_CAP) -> list[dict]:
    """Seeded random vectors with Gaussian entries on random subsets of the ball."""
    b = CayleyBall(engine, gens, radius, cap=cap)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        size = rng.randint(1, min(max_support, len(b)))
        ids = rng.sample(range(len(b)), size)
        out.append({b.elements[i]: rng.gauss(0.0, 1.0) for i in ids})
    return out


def spectral_radius_lower_bound(engine=None, gens=None, N=None, cap=DEFAULT_CAP,
                                table: CogrowthTable | None = None) -> float:
    """max over n <= N of |chi_1 M^n|_2^(1/n).

    Since ||M^n|| >= |chi_1 M^n|_2 this bounds the spectral radius from below.
    It is computed from the walk norms and checked against gamma_rate / |X|.
    """
    if table is None:
        table = CogrowthTable(engine, gens, N, cap=cap)
    if table.N < 1:
        raise UsageError("spectral_radius_lower_bound needs N >= 1")
    best = None
    for n in range(1, table.N + 1):
        sq = walk_norm_squared(table, n)
        log_root = (math.log(sq.numerator) - math.log(sq.denominator)) / (2 * n)
        best = log_root if best is None else max(best, log_root)
    value = math.exp(best)
    via_gamma = gamma_rate(table=table).value / len(table.gens)
    if not math.isclose(value, via_gamma, rel_tol=1e-12):
        raise AssertionError(f"walk-norm bound {value} disagrees with gamma_rate/|X| = {via_gamma}")
    return value


@dataclass
class OperatorReport:
    N: int
    walk_norms_squared: dict   # n -> Fraction
    walk_norms: dict           # n -> float
    walk_identity: CheckResult
    spectral_radius_lower_bound: float
    norm_lower_bound: float
    rayleigh_max: float | None
    rayleigh_samples: int
    indegree: IndegreeReport


def operator_report(engine, gens, N, radius=None, iterations=20, rayleigh_samples=0, seed=0,
                    cap=DEFAULT_CAP) -> OperatorReport:
    table = CogrowthTable(engine, gens, N, cap=cap)
    squares = {n: walk_norm_squared(table, n) for n in range(1, N + 1)}
    radius = radius if radius is not None else max(1, min(N, 6))
    nb = norm_lower_bound(engine, gens, radius, iterations, cap=cap)
    rq_max = None
    if rayleigh_samples:
        vecs = random_vectors(engine, gens, radius, rayleigh_samples, seed, cap=cap)
        vecs += power_iteration_vectors(engine, gens, radius, iterations, cap=cap)
        rq_max = max(rayleigh_quotient(engine, gens, v) for v in vecs)
    return OperatorReport(
        N=N,
        walk_norms_squared=squares,
        walk_norms={n: math.sqrt(q) for n, q in squares.items()},
        walk_identity=verify_walk_identity(engine, gens, N, table=table),
        spectral_radius_lower_bound=spectral_radius_lower_bound(table=table),
        norm_lower_bound=nb.value,
        rayleigh_max=rq_max,
        rayleigh_samples=rayleigh_samples,
        indegree=right_indegree_stats(table.ball) if N >= 1 else None,
    )
