"""Semigroup engines, generator choices and derived constructions.

Every engine multiplies elements of S^1: a non-monoid engine still carries
an adjoined identity element so that Cayley balls and random walks can be
rooted there.  ``has_identity`` records whether S itself is a monoid, which
matters for empty words and for ``adjoin_identity``.

Elements are plain hashable Python values (tuples or ints), already in
canonical form, so equality of elements is equality of semigroup elements.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import ConfluenceError, DomainError, ResourceError, UsageError

Element = Hashable

KINDS = (
    "finite_table",
    "rewriting",
    "free",
    "free_commutative",
    "bicyclic",
    "integer_lattice",
)

DEFAULT_POWER_CAP = 100_000


def letter_names(k: int) -> list[str]:
    if k <= 26:
        return [chr(ord("a") + i) for i in range(k)]
    return [f"x{i + 1}" for i in range(k)]


def join_symbols(symbols: Sequence[str]) -> str:
    """Render a word; ``1`` is the empty word."""
    if not symbols:
        return "1"
    if all(len(s) == 1 for s in symbols):
        return "".join(symbols)
    return ".".join(symbols)


def tokenize(text: str, symbols: Sequence[str]) -> list[int]:
    """Split ``text`` into indices of ``symbols``.

    Whitespace and ``.`` separate letters; unseparated runs are split by
    greedy longest match.  The literal ``1`` is the empty word unless some
    symbol is itself called ``1``.
    """
    text = text.strip()
    lookup = {s: i for i, s in enumerate(symbols)}
    if text == "1" and "1" not in lookup:
        return []
    if not text:
        raise UsageError("empty word; write 1 for the empty word")
    by_length = sorted(lookup, key=len, reverse=True)
    out = []
    for chunk in re.split(r"[\s.]+", text):
        pos = 0
        while pos < len(chunk):
            for sym in by_length:
                if chunk.startswith(sym, pos):
                    out.append(lookup[sym])
                    pos += len(sym)
                    break
            else:
                raise UsageError(f"cannot parse {chunk[pos:]!r} in word {text!r} over {list(symbols)}")
    return out


@dataclass(frozen=True)
class GeneratorChoice:
    """Ordered generator symbols and the elements they represent.

    Targets may repeat: several symbols can name the same element.
    """

    symbols: tuple[str, ...]
    targets: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.symbols:
            raise UsageError("a generator choice needs at least one symbol")
        if len(self.symbols) != len(self.targets):
            raise UsageError("symbols and targets differ in length")
        if len(set(self.symbols)) != len(self.symbols):
            raise UsageError(f"duplicate generator symbols in {list(self.symbols)}")

    def __len__(self):
        return len(self.symbols)

    def parse_word(self, text: str) -> list[int]:
        return tokenize(text, self.symbols)

    def render(self, word: Sequence[int]) -> str:
        return join_symbols([self.symbols[i] for i in word])


class SemigroupEngine:
    """Base class; subclasses define ``mul``, ``canonical`` and ``contains``."""

    kind: str = ""
    has_identity: bool = False
    identity: Element = None

    def mul(self, s, t):
        raise NotImplementedError

    def canonical(self, s) -> str:
        raise NotImplementedError

    def contains(self, s) -> bool:
        raise NotImplementedError

    def default_generators(self) -> GeneratorChoice:
        raise NotImplementedError

    def length(self, s) -> int | None:
        """Length of every word representing ``s`` when that is well defined."""
        return None

    def elements(self) -> list | None:
        """All elements of S for finite engines, else None."""
        return None


def _word_canonical(word, symbols):
    return join_symbols([symbols[i] for i in word])


@dataclass(frozen=True, eq=True)
class FreeEngine(SemigroupEngine):
    rank: int
    monoid: bool = False
    kind = "free"

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise UsageError(f"free rank must be a positive integer, got {self.rank!r}")

    @property
    def has_identity(self):
        return self.monoid

    @property
    def identity(self):
        return ()

    @property
    def symbols(self):
        return tuple(letter_names(self.rank))

    def mul(self, s, t):
        return s + t

    def canonical(self, s):
        return _word_canonical(s, self.symbols)

    def contains(self, s):
        return isinstance(s, tuple) and all(isinstance(i, int) and 0 <= i < self.rank for i in s)

    def length(self, s):
        return len(s)

    def default_generators(self):
        return GeneratorChoice(self.symbols, [(i,) for i in range(self.rank)])


@dataclass(frozen=True, eq=True)
class FreeCommutativeEngine(SemigroupEngine):
    """Elements are exponent vectors; canonical words are sorted."""

    rank: int
    kind = "free_commutative"
    has_identity = True

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise UsageError(f"free commutative rank must be a positive integer, got {self.rank!r}")

    @property
    def identity(self):
        return (0,) * self.rank

    @property
    def symbols(self):
        return tuple(letter_names(self.rank))

    def mul(self, s, t):
        return tuple(a + b for a, b in zip(s, t))

    def canonical(self, s):
        word = [i for i, e in enumerate(s) for _ in range(e)]
        return _word_canonical(word, self.symbols)

    def contains(self, s):
        return (
            isinstance(s, tuple)
            and len(s) == self.rank
            and all(isinstance(e, int) and e >= 0 for e in s)
        )

    def length(self, s):
        return sum(s)

    def default_generators(self):
        gens = []
        for i in range(self.rank):
            e = [0] * self.rank
            e[i] = 1
            gens.append(tuple(e))
        return GeneratorChoice(self.symbols, gens)


@dataclass(frozen=True, eq=True)
class BicyclicEngine(SemigroupEngine):
    """The monoid <b, c | bc = 1>; element (i, j) stands for c^i b^j."""

    kind = "bicyclic"
    has_identity = True
    identity = (0, 0)
    symbols = ("b", "c")

    def mul(self, s, t):
        i, j = s
        k, l = t
        m = min(j, k)
        return (i + k - m, j + l - m)

    def canonical(self, s):
        i, j = s
        return "c" * i + "b" * j or "1"

    def contains(self, s):
        return (
            isinstance(s, tuple)
            and len(s) == 2
            and all(isinstance(e, int) and e >= 0 for e in s)
        )

    def default_generators(self):
        return GeneratorChoice(self.symbols, [(0, 1), (1, 0)])


@dataclass(frozen=True, eq=True)
class IntegerLatticeEngine(SemigroupEngine):
    """The group Z^d under addition; generators are chosen freely."""

    dim: int
    kind = "integer_lattice"
    has_identity = True

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise UsageError(f"lattice dimension must be a positive integer, got {self.dim!r}")

    @property
    def identity(self):
        return (0,) * self.dim

    def mul(self, s, t):
        return tuple(a + b for a, b in zip(s, t))

    def canonical(self, s):
        return "(" + ",".join(str(x) for x in s) + ")"

    def contains(self, s):
        return isinstance(s, tuple) and len(s) == self.dim and all(isinstance(x, int) for x in s)

    def generators(self, vectors, names=None) -> GeneratorChoice:
        targets = []
        for v in vectors:
            v = (v,) if isinstance(v, int) else tuple(v)
            if len(v) != self.dim or not all(isinstance(x, int) for x in v):
                raise UsageError(f"generator {v!r} is not an integer vector of dimension {self.dim}")
            if not any(v):
                raise UsageError("lattice generators must be nonzero")
            targets.append(v)
        if names is None:
            names = letter_names(len(targets))
        return GeneratorChoice(names, targets)

    def default_generators(self):
        if self.dim == 1:
            return self.generators([1, -1], ["a", "b"])
        vectors, names = [], []
        for i in range(self.dim):
            for sign, prefix in ((1, "a"), (-1, "b")):
                e = [0] * self.dim
                e[i] = sign
                vectors.append(e)
                names.append(f"{prefix}{i + 1}")
        return self.generators(vectors, names)


class FiniteTableEngine(SemigroupEngine):
    """A finite semigroup given by its Cayley table (0-based internally).

    When S has no identity, index ``order`` is the adjoined identity of S^1.
    """

    kind = "finite_table"

    def __init__(self, table: Sequence[Sequence[int]], check: bool = True):
        m = len(table)
        if m < 1:
            raise UsageError("a finite table needs at least one element")
        rows = []
        for r in table:
            r = tuple(r)
            if len(r) != m:
                raise UsageError(f"table row {r} has length {len(r)}, expected {m}")
            for x in r:
                if not isinstance(x, int) or not 0 <= x < m:
                    raise UsageError(f"table entry {x!r} out of range 0..{m - 1}")
            rows.append(r)
        self.table = tuple(rows)
        self.order = m
        if check:
            for x, y, z in itertools.product(range(m), repeat=3):
                if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                    raise UsageError(
                        f"table is not associative at ({x + 1},{y + 1},{z + 1})"
                    )
        ident = None
        for e in range(m):
            if all(self.table[e][x] == x == self.table[x][e] for x in range(m)):
                ident = e
                break
        self.has_identity = ident is not None
        self.identity = ident if ident is not None else m

    @classmethod
    def from_one_based(cls, rows: Sequence[Sequence[int]]) -> "FiniteTableEngine":
        return cls([[x - 1 for x in r] for r in rows])

    def one_based_rows(self):
        return [[x + 1 for x in r] for r in self.table]

    def __eq__(self, other):
        return isinstance(other, FiniteTableEngine) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteTableEngine(order={self.order})"

    @property
    def symbols(self):
        return tuple(f"s{i + 1}" for i in range(self.order))

    def mul(self, s, t):
        m = self.order
        if s == m:
            return t
        if t == m:
            return s
        return self.table[s][t]

    def canonical(self, s):
        if s == self.order:
            return "1"
        return f"s{s + 1}"

    def contains(self, s):
        return isinstance(s, int) and 0 <= s <= self.order and (s < self.order or not self.has_identity)

    def elements(self):
        return list(range(self.order))

    def default_generators(self):
        return GeneratorChoice(self.symbols, range(self.order))


def _shortlex_less(u, v):
    return (len(u), tuple(u)) < (len(v), tuple(v))


class RewritingEngine(SemigroupEngine):
    """Normal forms under a confluent, shortlex-reducing rewriting system.

    Letters are indices into ``alphabet``; the alphabet order is the
    lexicographic order used for shortlex comparison.
    """

    kind = "rewriting"

    def __init__(self, alphabet: Sequence[str], rules: Iterable[tuple], monoid: bool = False):
        self.alphabet = tuple(alphabet)
        if not self.alphabet:
            raise UsageError("rewriting alphabet is empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise UsageError(f"duplicate letters in alphabet {list(self.alphabet)}")
        self.monoid = bool(monoid)
        parsed = []
        for lhs, rhs in rules:
            lhs = tuple(tokenize(lhs, self.alphabet)) if isinstance(lhs, str) else tuple(lhs)
            rhs = tuple(tokenize(rhs, self.alphabet)) if isinstance(rhs, str) else tuple(rhs)
            for w in (lhs, rhs):
                if any(not 0 <= i < len(self.alphabet) for i in w):
                    raise UsageError(f"rule letter outside alphabet in {lhs}->{rhs}")
            shown = f"{self._show(lhs)} -> {self._show(rhs)}"
            if not lhs:
                raise UsageError(f"rule {shown} has an empty left-hand side")
            if not rhs and not self.monoid:
                raise UsageError(f"rule {shown} rewrites to the empty word in a non-monoid")
            if not _shortlex_less(rhs, lhs):
                raise UsageError(f"rule {shown} is not shortlex-reducing")
            parsed.append((lhs, rhs))
        self.rules = tuple(parsed)
        self._by_last: dict[int, list] = {}
        for lhs, rhs in self.rules:
            self._by_last.setdefault(lhs[-1], []).append((lhs, rhs))
        self._check_confluence()

    def _show(self, w):
        return join_symbols([self.alphabet[i] for i in w])

    def __eq__(self, other):
        return (
            isinstance(other, RewritingEngine)
            and self.alphabet == other.alphabet
            and self.rules == other.rules
            and self.monoid == other.monoid
        )

    def __hash__(self):
        return hash((self.alphabet, self.rules, self.monoid))

    def __repr__(self):
        rules = ", ".join(f"{self._show(l)}->{self._show(r)}" for l, r in self.rules)
        return f"RewritingEngine({list(self.alphabet)}, [{rules}], monoid={self.monoid})"

    @property
    def has_identity(self):
        return self.monoid

    @property
    def identity(self):
        return ()

    @property
    def symbols(self):
        return self.alphabet

    def reduce(self, word, prefix=()):
        """Normal form of ``prefix + word``; ``prefix`` must be irreducible."""
        out = list(prefix)
        todo = list(reversed(word))
        by_last = self._by_last
        while todo:
            out.append(todo.pop())
            for lhs, rhs in by_last.get(out[-1], ()):
                n = len(lhs)
                if len(out) >= n and tuple(out[-n:]) == lhs:
                    del out[-n:]
                    todo.extend(reversed(rhs))
                    break
        return tuple(out)

    def critical_pairs(self):
        """Yield (word, left_result, right_result) for every overlap."""
        for (l1, r1), (l2, r2) in itertools.product(self.rules, repeat=2):
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    yield l1 + l2[k:], r1 + l2[k:], l1[:-k] + r2
            if (l1, r1) != (l2, r2) and len(l2) <= len(l1):
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p:p + len(l2)] == l2:
                        yield l1, r1, l1[:p] + r2 + l1[p + len(l2):]

    def _check_confluence(self):
        for word, a, b in self.critical_pairs():
            na, nb = self.reduce(a), self.reduce(b)
            if na != nb:
                raise ConfluenceError(
                    f"critical pair on {self._show(word)} does not resolve: "
                    f"{self._show(na)} != {self._show(nb)}",
                    pair=(self._show(word), self._show(na), self._show(nb)),
                )

    def mul(self, s, t):
        return self.reduce(t, prefix=s)

    def canonical(self, s):
        return self._show(s)

    def contains(self, s):
        return (
            isinstance(s, tuple)
            and all(isinstance(i, int) and 0 <= i < len(self.alphabet) for i in s)
            and self.reduce(s) == s
        )

    def length(self, s):
        if all(len(l) == len(r) for l, r in self.rules):
            return len(s)
        return None

    def default_generators(self):
        return GeneratorChoice(self.alphabet, [(i,) for i in range(len(self.alphabet))])


class OppositeEngine(SemigroupEngine):
    """S^op: same elements, multiplication reversed."""

    def __init__(self, base: SemigroupEngine):
        self.base = base
        self.kind = base.kind
        self.has_identity = base.has_identity
        self.identity = base.identity

    def __eq__(self, other):
        return isinstance(other, OppositeEngine) and self.base == other.base

    def __hash__(self):
        return hash(("op", self.base))

    def __repr__(self):
        return f"OppositeEngine({self.base!r})"

    def mul(self, s, t):
        return self.base.mul(t, s)

    def canonical(self, s):
        return self.base.canonical(s)

    def contains(self, s):
        return self.base.contains(s)

    def length(self, s):
        return self.base.length(s)

    def elements(self):
        return self.base.elements()

    def default_generators(self):
        return self.base.default_generators()


class MonoidClosure(SemigroupEngine):
    """S^1 for a non-monoid S, reusing the adjoined identity S already carries."""

    has_identity = True

    def __init__(self, base: SemigroupEngine):
        if base.has_identity:
            raise DomainError("MonoidClosure expects a non-monoid engine")
        self.base = base
        self.kind = base.kind
        self.identity = base.identity

    def __eq__(self, other):
        return isinstance(other, MonoidClosure) and self.base == other.base

    def __hash__(self):
        return hash(("S1", self.base))

    def __repr__(self):
        return f"MonoidClosure({self.base!r})"

    def mul(self, s, t):
        return self.base.mul(s, t)

    def canonical(self, s):
        return self.base.canonical(s)

    def contains(self, s):
        return s == self.identity or self.base.contains(s)

    def length(self, s):
        return self.base.length(s)

    def elements(self):
        elems = self.base.elements()
        if elems is None:
            return None
        return elems + [self.identity]

    def default_generators(self):
        return self.base.default_generators()


# -- public operations -------------------------------------------------------

def mul(engine: SemigroupEngine, s, t):
    for x in (s, t):
        if not engine.contains(x):
            raise UsageError(f"{x!r} is not an element of {engine!r}")
    return engine.mul(s, t)


def eval_word(engine: SemigroupEngine, gens: GeneratorChoice, word: Sequence[int] | str):
    if isinstance(word, str):
        word = gens.parse_word(word)
    if not word:
        if not engine.has_identity:
            raise DomainError("the empty word does not represent an element of a non-monoid")
        return engine.identity
    k = len(gens)
    for i in word:
        if not 0 <= i < k:
            raise UsageError(f"letter index {i} out of range for {k} generators")
    targets = gens.targets
    s = targets[word[0]]
    for i in word[1:]:
        s = engine.mul(s, targets[i])
    return s


def parse_element(engine: SemigroupEngine, gens: GeneratorChoice, text: str):
    """Element named by a word over ``gens``; ``1`` names the identity of S^1."""
    word = gens.parse_word(text)
    if not word:
        return engine.identity
    return eval_word(engine, gens, word)


def make_family(kind: str, **params) -> tuple[SemigroupEngine, GeneratorChoice]:
    """Build a built-in family with its standard generators.

    ``free`` and ``free_commutative`` take ``rank``; ``integer_lattice``
    takes ``dim`` and optionally ``gens`` (a list of integer vectors, or of
    ``(name, vector)`` pairs).
    """
    if kind == "free":
        engine = FreeEngine(params.get("rank", 2))
    elif kind == "free_commutative":
        engine = FreeCommutativeEngine(params.get("rank", 2))
    elif kind == "bicyclic":
        engine = BicyclicEngine()
    elif kind == "integer_lattice":
        engine = IntegerLatticeEngine(params.get("dim", 1))
        gens = params.get("gens")
        if gens is not None:
            gens = list(gens)
            if not gens:
                raise UsageError("integer lattice needs at least one generator")
            if all(isinstance(g, tuple) and len(g) == 2 and isinstance(g[0], str) for g in gens):
                names = [g[0] for g in gens]
                return engine, engine.generators([g[1] for g in gens], names)
            return engine, engine.generators(gens)
    else:
        raise UsageError(f"unknown family {kind!r}")
    return engine, engine.default_generators()


def make_rewriting(alphabet: Sequence[str], rules, monoid: bool = False) -> RewritingEngine:
    return RewritingEngine(alphabet, rules, monoid=monoid)


def adjoin_identity(engine: SemigroupEngine, gens: GeneratorChoice, symbol: str = "e"):
    """Return S^1 and the generators extended by one identity symbol."""
    s1 = engine if engine.has_identity else MonoidClosure(engine)
    while symbol in gens.symbols:
        symbol += "'"
    return s1, GeneratorChoice(gens.symbols + (symbol,), gens.targets + (s1.identity,))


def power_generators(
    engine: SemigroupEngine, gens: GeneratorChoice, p: int, cap: int = DEFAULT_POWER_CAP
) -> GeneratorChoice:
    """One generator per word of length ``p`` over ``gens``, in lexicographic order."""
    if not isinstance(p, int) or p < 1:
        raise UsageError(f"power must be a positive integer, got {p!r}")
    if not engine.has_identity:
        raise DomainError("power_generators applies to monoids; adjoin an identity first")
    size = len(gens) ** p
    if size > cap:
        raise ResourceError(f"{len(gens)}^{p} = {size} generators exceeds cap {cap}")
    symbols, targets = [], []
    for word in itertools.product(range(len(gens)), repeat=p):
        symbols.append(join_symbols([gens.symbols[i] for i in word]) if p > 1 else gens.symbols[word[0]])
        targets.append(eval_word(engine, gens, word))
    if len(set(symbols)) != len(symbols):
        symbols = [".".join(gens.symbols[i] for i in w) for w in itertools.product(range(len(gens)), repeat=p)]
    return GeneratorChoice(symbols, targets)


def opposite(engine: SemigroupEngine, gens: GeneratorChoice):
    if isinstance(engine, OppositeEngine):
        return engine.base, gens
    return OppositeEngine(engine), gens
