"""Deterministic Graphviz DOT text for categories and naturality squares."""

from __future__ import annotations

from ..core.category import FinCat
from ..twogroup import NaturalitySquare


def _q(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _category_dot(C: FinCat, identities: bool, name: str) -> str:
    lines = [f"digraph {_q(name)} {{"]
    for X in sorted(C.objects):
        lines.append(f"  {_q(X)};")
    edges = sorted(
        (s, t, f) for f, s, t in C.morphisms if identities or f not in C.identities
    )
    for s, t, f in edges:
        lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(f)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _square_dot(sq: NaturalitySquare, name: str) -> str:
    top, bottom, left, right = sq.edges
    lines = [f"digraph {_q(name)} {{"]
    for key, corner in zip(("c00", "c01", "c10", "c11"), sq.corners):
        lines.append(f"  {key} [label={_q(corner)}];")
    for s, t, label in (
        ("c00", "c01", top),
        ("c00", "c10", left),
        ("c01", "c11", right),
        ("c10", "c11", bottom),
    ):
        lines.append(f"  {s} -> {t} [label={_q(label)}];")
    verdict = "commutes" if sq.commutes else "does not commute"
    cell = ", ".join(map(str, sq.cell))
    lines.append(f"  label={_q(f'{sq.label} = ({cell}), {verdict}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(obj, identities: bool = False, name: str = "C") -> str:
    """Render ``obj`` as DOT.  Nodes and edges are sorted, so equal inputs give
    byte-identical text; identity arrows are left out unless requested."""
    if isinstance(obj, NaturalitySquare):
        return _square_dot(obj, "square" if name == "C" else name)
    return _category_dot(obj, identities, name)
