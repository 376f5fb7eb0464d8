"""Line-oriented text format describing a semigroup and its generators.

Example::

    kind = rewriting
    monoid = false
    alphabet = a b c
    rule = bc -> ac

Keys may appear in any order when parsing; serialization always writes
them in the fixed order kind, monoid, kind-specific fields, gens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import (
    KINDS,
    FiniteTableEngine,
    GeneratorChoice,
    RewritingEngine,
    SemigroupEngine,
    eval_word,
    join_symbols,
    make_family,
    tokenize,
)
from .errors import UsageError

FAMILY_MONOID = {
    "free": False,
    "free_commutative": True,
    "bicyclic": True,
    "integer_lattice": True,
}


class SpecError(UsageError):
    pass


@dataclass
class SemigroupSpec:
    kind: str
    monoid: bool
    rows: list[list[int]] = field(default_factory=list)  # 1-based
    alphabet: list[str] = field(default_factory=list)
    rules: list[tuple[str, str]] = field(default_factory=list)
    dim: int | None = None
    lattice_gens: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    rank: int | None = None
    gens: list[tuple[str, str]] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"kind = {self.kind}", f"monoid = {'true' if self.monoid else 'false'}"]
        if self.kind == "finite_table":
            lines.append(f"order = {len(self.rows)}")
            lines += ["row = " + " ".join(str(x) for x in r) for r in self.rows]
        elif self.kind == "rewriting":
            lines.append("alphabet = " + " ".join(self.alphabet))
            lines += [f"rule = {l} -> {r}" for l, r in self.rules]
        elif self.kind == "integer_lattice":
            lines.append(f"dim = {self.dim}")
            lines += [
                f"gen = {name} (" + ",".join(str(x) for x in vec) + ")"
                for name, vec in self.lattice_gens
            ]
        elif self.kind in ("free", "free_commutative"):
            lines.append(f"rank = {self.rank}")
        if self.gens:
            lines.append("gens = " + " ".join(f"{s}:{w}" for s, w in self.gens))
        return "\n".join(lines) + "\n"

    def build(self) -> tuple[SemigroupEngine, GeneratorChoice]:
        if self.kind == "finite_table":
            engine = FiniteTableEngine.from_one_based(self.rows)
            default = engine.default_generators()
        elif self.kind == "rewriting":
            engine = RewritingEngine(self.alphabet, self.rules, monoid=self.monoid)
            default = engine.default_generators()
        elif self.kind == "integer_lattice":
            engine, default = make_family("integer_lattice", dim=self.dim, gens=self.lattice_gens or None)
        elif self.kind in ("free", "free_commutative"):
            engine, default = make_family(self.kind, rank=self.rank)
        else:
            engine, default = make_family(self.kind)
        if not self.gens:
            return engine, default
        symbols, targets = [], []
        for sym, word in self.gens:
            symbols.append(sym)
            targets.append(eval_word(engine, default, tokenize(word, default.symbols)))
        return engine, GeneratorChoice(symbols, targets)


def _parse_bool(value, lineno):
    if value == "true":
        return True
    if value == "false":
        return False
    raise SpecError(f"line {lineno}: expected true or false, got {value!r}")


def _parse_int(value, lineno, what):
    try:
        return int(value)
    except ValueError:
        raise SpecError(f"line {lineno}: {what} must be an integer, got {value!r}") from None


_VECTOR = re.compile(r"^(\S+)\s+\(?\s*([-+]?\d+(?:\s*,\s*[-+]?\d+)*)\s*\)?$")


def parse_vector(text: str) -> tuple[int, ...]:
    text = text.strip().strip("()")
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SpecError(f"bad integer vector {text!r}") from None


def parse_spec(text: str) -> SemigroupSpec:
    fields: dict[str, object] = {}
    rows, rules, lattice_gens, gens = [], [], [], []
    order = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "row":
            rows.append([_parse_int(x, lineno, "table entry") for x in value.split()])
        elif key == "rule":
            if "->" not in value:
                raise SpecError(f"line {lineno}: rule needs '->'")
            lhs, rhs = (part.strip() for part in value.split("->", 1))
            rules.append((lhs, rhs))
        elif key == "gen":
            m = _VECTOR.match(value)
            if not m:
                raise SpecError(f"line {lineno}: expected 'gen = name (x1,...,xd)', got {value!r}")
            lattice_gens.append((m.group(1), parse_vector(m.group(2))))
        elif key == "gens":
            for item in value.split():
                if ":" not in item:
                    raise SpecError(f"line {lineno}: generator {item!r} must be symbol:word")
                sym, word = item.split(":", 1)
                gens.append((sym, word))
        elif key in ("kind", "monoid", "order", "alphabet", "dim", "rank"):
            if key in fields:
                raise SpecError(f"line {lineno}: duplicate key {key!r}")
            fields[key] = (value, lineno)
        else:
            raise SpecError(f"line {lineno}: unknown key {key!r}")

    if "kind" not in fields:
        raise SpecError("missing 'kind'")
    kind, _ = fields["kind"]
    if kind not in KINDS:
        raise SpecError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    declared = None
    if "monoid" in fields:
        declared = _parse_bool(*fields["monoid"])

    def require(key):
        if key not in fields:
            raise SpecError(f"kind {kind} requires '{key} = ...'")
        return fields[key]

    def forbid(*keys, present=()):
        for k in keys:
            if k in fields:
                raise SpecError(f"line {fields[k][1]}: key {k!r} does not apply to kind {kind}")
        for name, items in present:
            if items:
                raise SpecError(f"'{name}' lines do not apply to kind {kind}")

    spec = SemigroupSpec(kind=kind, monoid=False, gens=gens)
    if kind == "finite_table":
        forbid("alphabet", "dim", "rank", present=[("rule", rules), ("gen", lattice_gens)])
        order = _parse_int(*require("order"), "order")
        if order < 1 or len(rows) != order:
            raise SpecError(f"order = {order} but {len(rows)} rows given")
        spec.rows = rows
        try:
            engine = FiniteTableEngine.from_one_based(rows)
        except UsageError as exc:
            raise SpecError(str(exc)) from None
        spec.monoid = engine.has_identity
    elif kind == "rewriting":
        forbid("order", "dim", "rank", present=[("row", rows), ("gen", lattice_gens)])
        spec.alphabet = require("alphabet")[0].split()
        spec.rules = rules
        spec.monoid = bool(declared)
    elif kind == "integer_lattice":
        forbid("order", "alphabet", "rank", present=[("row", rows), ("rule", rules)])
        spec.dim = _parse_int(*require("dim"), "dim")
        spec.lattice_gens = lattice_gens
        spec.monoid = True
    elif kind in ("free", "free_commutative"):
        forbid("order", "alphabet", "dim", present=[("row", rows), ("rule", rules), ("gen", lattice_gens)])
        spec.rank = _parse_int(*require("rank"), "rank")
        spec.monoid = FAMILY_MONOID[kind]
    else:
        forbid("order", "alphabet", "dim", "rank", present=[("row", rows), ("rule", rules), ("gen", lattice_gens)])
        spec.monoid = FAMILY_MONOID[kind]
    if declared is not None and declared != spec.monoid and kind != "rewriting":
        raise SpecError(f"monoid = {str(declared).lower()} contradicts kind {kind}")
    return spec


def load_spec(path) -> SemigroupSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_spec(fh.read())
    except OSError as exc:
        raise SpecError(f"cannot read spec file {path}: {exc.strerror}") from None


def spec_from_engine(engine: SemigroupEngine, gens: GeneratorChoice | None = None) -> SemigroupSpec:
    """Serialize a built engine.  Generator overrides are written only when
    ``gens`` differs from the engine's default generators and each target is
    a default generator or the identity."""
    if isinstance(engine, FiniteTableEngine):
        spec = SemigroupSpec("finite_table", engine.has_identity, rows=engine.one_based_rows())
    elif isinstance(engine, RewritingEngine):
        spec = SemigroupSpec(
            "rewriting",
            engine.monoid,
            alphabet=list(engine.alphabet),
            rules=[(engine._show(l), engine._show(r)) for l, r in engine.rules],
        )
    elif engine.kind == "integer_lattice":
        if gens is None:
            gens = engine.default_generators()
        spec = SemigroupSpec(
            "integer_lattice", True, dim=engine.dim,
            lattice_gens=list(zip(gens.symbols, gens.targets)),
        )
        return spec
    elif engine.kind in ("free", "free_commutative"):
        spec = SemigroupSpec(engine.kind, FAMILY_MONOID[engine.kind], rank=engine.rank)
    elif engine.kind == "bicyclic":
        spec = SemigroupSpec("bicyclic", True)
    else:
        raise UsageError(f"cannot serialize engine {engine!r}")
    default = engine.default_generators()
    if gens is not None and gens != default:
        lookup = {t: s for s, t in zip(default.symbols, default.targets)}
        for sym, target in zip(gens.symbols, gens.targets):
            if target == engine.identity and engine.has_identity:
                spec.gens.append((sym, "1"))
            elif target in lookup:
                spec.gens.append((sym, lookup[target]))
            else:
                raise UsageError(f"generator {sym} has no single-letter name over the defaults")
    return spec
