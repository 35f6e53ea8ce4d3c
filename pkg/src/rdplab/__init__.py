"""Rational double points over finite fields: Tjurina numbers, resolutions,
derivation lifting and equisingular families."""

from .fields import GF, field
from .poly import MultiPoly, parse_poly
from .local import colength, tjurina, derivation_kernel, derivation_space, monomial_fields, Inconclusive
from .resolution import ResolutionTree, DualGraph, SingularityClass, resolve, dual_graph, graph_type
from .derivations import (
    Derivation, LiftResult, is_derivation_of, lifts_to_resolution, lifts_through_first_blowup,
    nonlifting_dimension,
)
from .families import (
    DeformationFamily, SimultaneousResolutionReport, check_simultaneous_resolution, classify_singularity,
    equisingular_count,
)
from .catalog import CatalogEntry, catalog_entries, find_entry, reproduce_theorem_tables, verify_entry

__version__ = "0.1.0"

__all__ = [
    "GF", "field", "MultiPoly", "parse_poly", "colength", "tjurina", "derivation_kernel", "derivation_space",
    "monomial_fields", "Inconclusive", "ResolutionTree", "DualGraph", "SingularityClass", "resolve",
    "dual_graph", "graph_type", "Derivation", "LiftResult", "is_derivation_of", "lifts_to_resolution",
    "lifts_through_first_blowup", "nonlifting_dimension", "DeformationFamily",
    "SimultaneousResolutionReport", "check_simultaneous_resolution", "classify_singularity",
    "equisingular_count", "CatalogEntry", "catalog_entries", "find_entry", "reproduce_theorem_tables",
    "verify_entry",
]
