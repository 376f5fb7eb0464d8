"""Right Cayley balls, right indegree diagnostics and finite-table predicates."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import GeneratorChoice, SemigroupEngine
from .errors import DomainError, ResourceError, UsageError

DEFAULT_CAP = 5_000_000


class CayleyBall:
    """Breadth-first closure of the right Cayley graph around the identity of S^1.

    Ids are dense integers in discovery order: by layer, and within a layer
    by the lexicographically first word reaching the element.  ``edges[i]``
    lists ``mul(element_i, x_j)`` ids for every generator j, and is filled
    for every element of layer < radius (empty otherwise).
    """

    def __init__(self, engine: SemigroupEngine, gens: GeneratorChoice, radius: int,
                 cap: int = DEFAULT_CAP):
        if not isinstance(radius, int) or radius < 0:
            raise UsageError(f"radius must be a nonnegative integer, got {radius!r}")
        self.engine = engine
        self.gens = gens
        self.radius = 0
        self.cap = cap
        self.elements = [engine.identity]
        self.index = {engine.identity: 0}
        self.layer_of = [0]
        self.layers = [[0]]
        self.edges: list[list[int]] = [[]]
        self.extend(radius)

    def __len__(self):
        return len(self.elements)

    def extend(self, radius: int):
        """Grow the ball in place up to ``radius``."""
        engine = self.engine
        targets = self.gens.targets
        index = self.index
        elements = self.elements
        while self.radius < radius:
            frontier = self.layers[self.radius]
            new_layer = []
            for sid in frontier:
                s = elements[sid]
                row = []
                for t in targets:
                    p = engine.mul(s, t)
                    pid = index.get(p)
                    if pid is None:
                        if len(elements) >= self.cap:
                            raise ResourceError(
                                f"Cayley ball exceeds {self.cap} elements while building "
                                f"layer {self.radius + 1} (layer {self.radius} complete)"
                            )
                        pid = len(elements)
                        index[p] = pid
                        elements.append(p)
                        self.layer_of.append(self.radius + 1)
                        self.edges.append([])
                        new_layer.append(pid)
                    row.append(pid)
                self.edges[sid] = row
            self.layers.append(new_layer)
            self.radius += 1
        return self

    def id_of(self, element) -> int | None:
        return self.index.get(element)

    def canonical(self, eid: int) -> str:
        return self.engine.canonical(self.elements[eid])

    def write_csv(self, elements_path, edges_path):
        with open(elements_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["element_id", "layer", "canonical_form"])
            for eid in range(len(self.elements)):
                w.writerow([eid, self.layer_of[eid], self.canonical(eid)])
        with open(edges_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["src_id", "gen_index", "dst_id"])
            for eid, row in enumerate(self.edges):
                for i, dst in enumerate(row):
                    w.writerow([eid, i, dst])


def ball(engine: SemigroupEngine, gens: GeneratorChoice, radius: int, cap: int = DEFAULT_CAP) -> CayleyBall:
    return CayleyBall(engine, gens, radius, cap=cap)


@dataclass
class IndegreeReport:
    max_indegree: list[int]          # per generator, over sources inside the ball
    witnesses: list[tuple | None]    # (target canonical, [source canonicals]) attaining the max
    analytic_bounded: bool | None    # known answer for the whole semigroup, if any


_ANALYTIC_BOUNDED = {"free", "free_commutative", "integer_lattice", "bicyclic", "finite_table"}


def right_indegree_stats(b: CayleyBall) -> IndegreeReport:
    if b.radius < 1:
        raise UsageError("right indegree needs a ball of radius at least 1")
    k = len(b.gens)
    maxima, witnesses = [], []
    for i in range(k):
        preimages: dict[int, list[int]] = {}
        for sid, row in enumerate(b.edges):
            if row:
                preimages.setdefault(row[i], []).append(sid)
        best = max(preimages.items(), key=lambda kv: (len(kv[1]), -kv[0]))
        maxima.append(len(best[1]))
        witnesses.append((b.canonical(best[0]), [b.canonical(s) for s in best[1]]))
    analytic = True if b.engine.kind in _ANALYTIC_BOUNDED else None
    return IndegreeReport(maxima, witnesses, analytic)


@dataclass
class FiniteStructureReport:
    j_classes: list[list[str]]
    j_order: list[tuple[int, int]]   # (i, j): class i <=_J class j, i != j
    minimal_ideal: list[str]
    is_simple: bool
    left_reversible: bool
    klawe: bool
    right_cancellative: bool
    right_cancellative_witness: tuple | None = None

    def as_dict(self):
        return {
            "j_classes": self.j_classes,
            "j_order": [list(p) for p in self.j_order],
            "minimal_ideal": self.minimal_ideal,
            "is_simple": self.is_simple,
            "left_reversible": self.left_reversible,
            "klawe": self.klawe,
            "right_cancellative": self.right_cancellative,
            "right_cancellative_witness": (
                list(self.right_cancellative_witness) if self.right_cancellative_witness else None
            ),
        }


def finite_structure(engine: SemigroupEngine) -> FiniteStructureReport:
    S = engine.elements()
    if S is None:
        raise DomainError("finite_structure needs a finite engine")
    mul = engine.mul
    S1 = S + ([] if engine.has_identity else [engine.identity])

    ideals = {}
    for s in S:
        left = {mul(u, s) for u in S1}
        ideals[s] = frozenset(mul(t, v) for t in left for v in S1)
    classes: dict[frozenset, list] = {}
    for s in S:
        classes.setdefault(ideals[s], []).append(s)
    class_list = list(classes.items())
    j_order = [
        (i, j)
        for (i, (ii, _)), (j, (ij, _)) in itertools.product(enumerate(class_list), repeat=2)
        if i != j and ii <= ij
    ]
    kernel = min((ideal for ideal, _ in class_list), key=len)
    assert all(kernel <= ideal for ideal, _ in class_list)

    right_ideals = {s: {mul(s, t) for t in S} for s in S}
    left_reversible = all(right_ideals[s] & right_ideals[t] for s, t in itertools.combinations(S, 2))

    klawe = True
    for s, x, y in itertools.product(S, repeat=3):
        if x != y and mul(s, x) == mul(s, y):
            if not any(mul(x, t) == mul(y, t) for t in S):
                klawe = False
                break

    rc_witness = None
    for x in S:
        seen = {}
        for t in S:
            p = mul(t, x)
            if p in seen:
                rc_witness = (engine.canonical(seen[p]), engine.canonical(t), engine.canonical(x))
                break
            seen[p] = t
        if rc_witness:
            break

    name = engine.canonical
    return FiniteStructureReport(
        j_classes=[[name(s) for s in members] for _, members in class_list],
        j_order=j_order,
        minimal_ideal=[name(s) for s in S if s in kernel],
        is_simple=len(class_list) == 1,
        left_reversible=left_reversible,
        klawe=klawe,
        right_cancellative=rc_witness is None,
        right_cancellative_witness=rc_witness,
    )


def folner_defect(engine: SemigroupEngine, gens: GeneratorChoice | None, F: Iterable, H: Iterable,
                  side: str = "right") -> Fraction:
    """max over h in H of |Fh \\ F| / |F| (or |hF \\ F| / |F| for side='left')."""
    F = set(F)
    H = list(H)
    if not F:
        raise UsageError("Folner defect needs a nonempty set F")
    if side not in ("right", "left"):
        raise UsageError(f"side must be 'right' or 'left', got {side!r}")
    worst = Fraction(0)
    for h in H:
        if side == "right":
            image = {engine.mul(f, h) for f in F}
        else:
            image = {engine.mul(h, f) for f in F}
        worst = max(worst, Fraction(len(image - F), len(F)))
    return worst
