"""The bundled lemma library: proof scripts checked in dependency order."""
from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional

from ..formula import Formula
from .check import Lemma, ProofResult, as_lemma, check_proof
from .script import ProofScript, load_script, parse_script


class LibraryError(ValueError):
    pass


def bundled_dir() -> Path:
    return Path(str(resources.files("sbtrust") / "fixtures" / "proofs"))


def bundled_scripts() -> List[ProofScript]:
    return [load_script(p) for p in sorted(bundled_dir().glob("*.prf"))]


def _order(scripts: Iterable[ProofScript]) -> List[ProofScript]:
    """Topological order by LEMMA references; ties keep name order."""
    by_name = {s.name: s for s in scripts}
    deps = {
        s.name: {ln.justification.name for ln in s.lines if ln.justification.kind == "LEMMA"} & set(by_name)
        for s in by_name.values()
    }
    out, state = [], {}

    def visit(name, trail):
        if state.get(name) == "done":
            return
        if state.get(name) == "active":
            raise LibraryError("circular lemma references: " + " -> ".join(trail + [name]))
        state[name] = "active"
        for d in sorted(deps[name]):
            visit(d, trail + [name])
        state[name] = "done"
        out.append(by_name[name])

    for name in sorted(by_name):
        visit(name, [])
    return out


def check_library(scripts: Iterable[ProofScript], extra_axioms: Optional[Mapping[str, Formula]] = None,
                  base: Optional[Mapping[str, Lemma]] = None) -> Dict[str, ProofResult]:
    """Check scripts in dependency order, registering each accepted theorem or rule as a lemma.

    Scripts whose conclusion still depends on hypotheses are checked but not registered.
    """
    registry: Dict[str, Lemma] = dict(base or {})
    results = {}
    for script in _order(scripts):
        result = check_proof(script, registry, extra_axioms)
        results[script.name] = result
        if result.accepted and not result.hypset:
            registry[script.name] = as_lemma(script, result)
    return results


def load_registry(extra_axioms: Optional[Mapping[str, Formula]] = None) -> Dict[str, Lemma]:
    """Lemmas proved by the bundled scripts.  Scripts that need extra axioms join only if those are given."""
    registry: Dict[str, Lemma] = {}
    scripts = {s.name: s for s in bundled_scripts()}
    for name, result in check_library(scripts.values(), extra_axioms).items():
        if result.accepted and not result.hypset:
            registry[name] = as_lemma(scripts[name], result)
    return registry


__all__ = ["LibraryError", "bundled_dir", "bundled_scripts", "check_library", "load_registry", "parse_script"]
