"""Proof-labeling schemes, adversarial certificates and error-sensitivity oracles."""
from .graph import (AdjList, Bool, Graph, InstanceError, LabeledGraph, Pointer, Raw,
                    edit_distance_between, parse_instance, serialize_instance)
from .languages import BudgetExceeded, Language, decide_membership, edit_distance_to_language
from .engine import (Certificate, LocalView, ProverRefused, Scheme, Verdict, build_views,
                     check_completeness, run_verifier)
from .schemes import make_scheme

__all__ = [
    "AdjList", "Bool", "BudgetExceeded", "Certificate", "Graph", "InstanceError", "LabeledGraph",
    "Language", "LocalView", "Pointer", "ProverRefused", "Raw", "Scheme", "Verdict",
    "build_views", "check_completeness", "decide_membership", "edit_distance_between",
    "edit_distance_to_language", "make_scheme", "parse_instance", "run_verifier",
    "serialize_instance",
]

__version__ = "0.1.0"
