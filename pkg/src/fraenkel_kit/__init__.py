"""Finitely supported predicates over atoms and a checker for choice in the basic Fraenkel model."""

from .atoms import FinPerm, fresh_atoms, transposition
from .evaluation import Assignment, Bounds, TriBool, enumerate_predicates, eval_nominal
from .nominal import FinSuppPredicate, SupportError
from .oracle import FiniteStructure, check_finite_choice, eval_finite
from .partition import Cell, SetPartition, classify, enumerate_cells, enumerate_partitions, representative
from .transporter import transport_perm

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "Bounds",
    "Cell",
    "FinPerm",
    "FinSuppPredicate",
    "FiniteStructure",
    "SetPartition",
    "SupportError",
    "TriBool",
    "check_finite_choice",
    "classify",
    "enumerate_cells",
    "enumerate_partitions",
    "enumerate_predicates",
    "eval_finite",
    "eval_nominal",
    "fresh_atoms",
    "representative",
    "transport_perm",
    "transposition",
]
