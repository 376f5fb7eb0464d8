from __future__ import annotations

import pytest

from cogrowthkit.algebra import FiniteTableEngine, make_family, make_rewriting

ACCEPTANCE_LINES: list[str] = []


def acbc():
    engine = make_rewriting(["a", "b", "c"], [("bc", "ac")])
    return engine, engine.default_generators()


def builtin_engines():
    """Every engine the acceptance criteria call 'built-in', keyed by name."""
    band = FiniteTableEngine([[0, 0, 0], [0, 1, 0], [0, 0, 2]])  # semilattice with zero, no identity
    return {
        "free2": make_family("free", rank=2),
        "free3": make_family("free", rank=3),
        "freecomm2": make_family("free_commutative", rank=2),
        "bicyclic": make_family("bicyclic"),
        "z_sym": make_family("integer_lattice", dim=1, gens=[1, -1]),
        "z_asym": make_family("integer_lattice", dim=1, gens=[1, 1, -1]),
        "z2": make_family("integer_lattice", dim=2),
        "acbc": acbc(),
        "bicyclic_rw": (lambda e: (e, e.default_generators()))(make_rewriting(["b", "c"], [("bc", "1")], monoid=True)),
        "c3": (lambda e: (e, e.default_generators()))(FiniteTableEngine([[(i + j) % 3 for j in range(3)] for i in range(3)])),
        "band3": (band, band.default_generators()),
    }


@pytest.fixture(params=sorted(builtin_engines()))
def builtin(request):
    engine, gens = builtin_engines()[request.param]
    return request.param, engine, gens


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
