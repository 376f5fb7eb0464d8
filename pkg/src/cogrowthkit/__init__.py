"""Cogrowth of finitely generated semigroups: exact counts, rates and random-walk operators."""

__version__ = "0.1.0"

from .algebra import (
    GeneratorChoice,
    adjoin_identity,
    eval_word,
    make_family,
    make_rewriting,
    mul,
    opposite,
    power_generators,
)
from .cayley import ball, finite_structure, folner_defect, right_indegree_stats
from .cogrowth import (
    CogrowthTable,
    count_vectors,
    gamma,
    gamma_prime,
    gamma_rate,
    local_cogrowth,
    local_rate,
    verify_convolution,
)
from .errors import ConfluenceError, DomainError, ResourceError, UsageError
