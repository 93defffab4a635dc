"""Syntactic complexity toolkit for bifix-free regular languages.

Transformations compose left to right: ``(s * t)(q) == t(s(q))``. States of an
``n``-state bifix-free DFA are normalized to initial ``0``, final ``n-2`` and
empty ``n-1``; ``1..n-3`` are the middle states.
"""
from .automata import Dfa, is_bifix_free, is_minimal, transition_semigroup
from .conflicts import conflict, greedy_matching, maximal_matching, prune
from .errors import BifixError, DimensionError, DomainError, PreconditionError, ResourceGuardError
from .phimap import audit_injectivity, classify, phi
from .semigroups import (
    Semigroup,
    close,
    enumerate_bbf,
    enumerate_wge6,
    enumerate_wle5,
    irreducible_elements,
    pair_statuses,
    witness_dfa,
    witness_letters,
)
from .transmap import Transformation, compose, identity

__version__ = "0.1.0"

__all__ = [
    "Dfa", "is_bifix_free", "is_minimal", "transition_semigroup",
    "conflict", "greedy_matching", "maximal_matching", "prune",
    "BifixError", "DimensionError", "DomainError", "PreconditionError", "ResourceGuardError",
    "audit_injectivity", "classify", "phi",
    "Semigroup", "close", "enumerate_bbf", "enumerate_wge6", "enumerate_wle5",
    "irreducible_elements", "pair_statuses", "witness_dfa", "witness_letters",
    "Transformation", "compose", "identity",
]
