"""Many-valued modal logic over finite lattices: evaluation, translations
to two-valued modal logic, frame definability and a K decision procedure."""

from .algebra import (
    LatticeAlgebra, UnaryTerm, boolean_power, find_boolean_interpretation, godel_chain,
    is_boolean_interpretation, kleene_chain, load_algebra, lukasiewicz_chain, product,
    resolve_algebra,
)
from .framelab import (
    closure_check, compare_definability, defined_class, enumerate_frames,
)
from .polytrans import e_axioms, reduce_consequence, reduce_validity
from .semantics import (
    Frame, Model, consequence_on_frames, evaluate, evaluate_all, frame_validates,
    load_frame, load_model,
)
from .syntax import CLASSICAL, Formula, parse, to_text
from .tableau import k_tableau_sat, k_valid
from .translation import phi_star, switch_check, translate_value

__all__ = [
    "LatticeAlgebra", "UnaryTerm", "boolean_power", "find_boolean_interpretation",
    "godel_chain", "is_boolean_interpretation", "kleene_chain", "load_algebra",
    "lukasiewicz_chain", "product", "resolve_algebra",
    "closure_check", "compare_definability", "defined_class", "enumerate_frames",
    "e_axioms", "reduce_consequence", "reduce_validity",
    "Frame", "Model", "consequence_on_frames", "evaluate", "evaluate_all",
    "frame_validates", "load_frame", "load_model",
    "CLASSICAL", "Formula", "parse", "to_text",
    "k_tableau_sat", "k_valid",
    "phi_star", "switch_check", "translate_value",
]

__version__ = "0.1.0"
