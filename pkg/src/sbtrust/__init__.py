"""Support, belief and trust: a logic toolkit.

Submodules: :mod:`formula` (syntax), :mod:`model` (trust models),
:mod:`checker` (model checking), :mod:`proofkit` (proof checking),
:mod:`aqvist` (the flat deontic fragment), :mod:`search` (bounded model
search) and :mod:`cli`.
"""
from .checker import evaluate, is_trusted, label, label_mask, valid_in
from .formula import Formula, LayerError, ParseError, desugar, parse, parse_prop, render, skeletonize
from .model import InvalidModel, ModelError, TrustModel, ValidatedModel, load, validate

__version__ = "0.1.0"

__all__ = [
    "Formula", "InvalidModel", "LayerError", "ModelError", "ParseError", "TrustModel", "ValidatedModel",
    "desugar", "evaluate", "is_trusted", "label", "label_mask", "load", "parse", "parse_prop", "render",
    "skeletonize", "valid_in",
]
