"""Proof checker for the isosceles-triangle base-angle theorems in
neutral geometry, with dependency analysis and numeric model checking."""

from __future__ import annotations

__version__ = "0.1.0"

from .depgraph import CYCLIC, EUCLIDEAN_ONLY, NEUTRAL, Graph, graph_from_blocks
from .elaborate import collect_statements, elaborate_script
from .geometry import EUCLIDEAN, MODELS, POINCARE, SPHERE, get_model
from .kernel import CheckReport, TheoremStatement, check_proof
from .models import ModelCheckReport, eval_fact, model_check, sample_instance
from .rules import RULES
from .script import ParseError, ScriptAst, parse

__all__ = [
    "__version__",
    "CYCLIC",
    "EUCLIDEAN_ONLY",
    "NEUTRAL",
    "Graph",
    "graph_from_blocks",
    "collect_statements",
    "elaborate_script",
    "EUCLIDEAN",
    "MODELS",
    "POINCARE",
    "SPHERE",
    "get_model",
    "CheckReport",
    "TheoremStatement",
    "check_proof",
    "ModelCheckReport",
    "eval_fact",
    "model_check",
    "sample_instance",
    "RULES",
    "ParseError",
    "ScriptAst",
    "parse",
]
