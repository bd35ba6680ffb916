"""Hilbert-style proof checking for the support/belief calculus."""
from .check import Lemma, LineVerdict, ProofResult, as_lemma, check_proof
from .library import bundled_dir, bundled_scripts, check_library, load_registry
from .schemas import AXIOMS, EXTRA_SCHEMATA, UnknownAxiom, match, match_axiom, parse_schema
from .script import Justification, ProofLine, ProofScript, ScriptError, load_script, parse_justification, parse_script
from .taut import TooManyAtoms, is_tautology, taut_skeleton

__all__ = [
    "AXIOMS", "EXTRA_SCHEMATA", "Justification", "Lemma", "LineVerdict", "ProofLine", "ProofResult",
    "ProofScript", "ScriptError", "TooManyAtoms", "UnknownAxiom", "as_lemma", "bundled_dir",
    "bundled_scripts", "check_library", "check_proof", "is_tautology", "load_registry", "load_script",
    "match", "match_axiom", "parse_justification", "parse_schema", "parse_script", "taut_skeleton",
]
