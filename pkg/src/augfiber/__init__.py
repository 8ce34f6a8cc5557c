"""Fiberedness of flat augmented links.

The standard checkerboard surface of a flat augmented link is a fiber
exactly when the graph G_B (C-regions joined by B-circles) is a tree.
"""

from __future__ import annotations

from .augment import FillingInstruction, TwistRegion, augment, find_twist_regions, flatten
from .diagram import PlanarDiagram, format_pd, parse_pd, standard_surface
from .errors import AugFiberError
from .fibergraph import (FIBERED, INAPPLICABLE, NOT_FIBERED, Certificate, FiberGraph, Verdict,
                         analyze, build_gb, is_tree)
from .freegroup import Move, NielsenTrace, Word, nielsen_generates
from .generate import random_ald, random_flat_diagram
from .model import (ACircle, BCircle, CRegion, FlatAugmentedLink, Incidence, classify,
                    rank_counts, validate)
from .moves import (deplumb, fill_a_circle, fill_b_circles, lift_alternating,
                    make_locally_alternating, replay_program)
from .stallings import (GeneratorMap, HomologyMatrix, OracleVerdict, abelianize, build_fstar,
                        build_fstar_filled, homology_obstruction, verify)

__all__ = [
    "ACircle", "AugFiberError", "BCircle", "CRegion", "Certificate", "FIBERED", "FiberGraph",
    "FillingInstruction", "FlatAugmentedLink", "GeneratorMap", "HomologyMatrix", "INAPPLICABLE",
    "Incidence", "Move", "NOT_FIBERED", "NielsenTrace", "OracleVerdict", "PlanarDiagram",
    "TwistRegion", "Verdict", "Word", "abelianize", "analyze", "augment", "build_fstar",
    "build_fstar_filled", "build_gb", "classify", "deplumb", "fill_a_circle", "fill_b_circles",
    "find_twist_regions", "flatten", "format_pd", "homology_obstruction", "is_tree",
    "lift_alternating", "make_locally_alternating", "nielsen_generates", "parse_pd",
    "random_ald", "random_flat_diagram", "rank_counts", "replay_program", "standard_surface",
    "validate", "verify",
]
__version__ = "0.1.0"
