"""Command line surface.  Exit codes: 0 success, 1 validation failure, 2 usage or parse error."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..algebra.perm import PermGroup, blocks_of, preserves_blocks, standard_group, wreath_product
from ..core.category import FinCat, ValidationReport
from ..core.constructions import connected_components
from ..core.iso import default_budget
from ..errors import (
    BudgetExceeded,
    FibratoError,
    PresentationSyntaxError,
    SchemaError,
)
from ..geometry import check_groupoid_geometry, check_klein
from ..grothendieck import (
    Variant,
    check_split_fibration,
    contravariant_action,
    covariant_action,
    grothendieck_complete,
    iso_report,
    transformation_groupoid,
)
from ..hierarchy import build_hierarchy, check_composite_fibration, compare_models, presentation_stats
from ..twogroup import aut_2group, check_two_group, naturality_square
from .dot import emit_dot
from .parse import Document, parse

PARSE_ERRORS = (PresentationSyntaxError, SchemaError)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


# ---------------------------------------------------------------- input helpers


def read_document(path: str, fmt: str | None = None) -> Document:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    if fmt is None:
        fmt = "dsl" if p.suffix == ".dsl" else "json"
    return parse(text, fmt)


def _want(doc: Document, *kinds) -> Document:
    if doc.kind not in kinds:
        raise _Usage(f"expected a {' or '.join(kinds)} document, got {doc.kind}")
    return doc


def _category_of(doc: Document) -> FinCat:
    """Categories are taken as is; group actions give their transformation groupoid."""
    if doc.kind == "category":
        return doc.payload
    if doc.kind == "action":
        return transformation_groupoid(doc.payload)
    raise _Usage(f"expected a category or action document, got {doc.kind}")


def group_from_spec(text: str) -> PermGroup:
    """``kind:n`` (for example ``dihedral:3``) or a path to a group document."""
    if ":" in text and not Path(text).exists():
        kind, _, n = text.partition(":")
        try:
            return standard_group(kind, int(n))
        except ValueError as exc:
            raise _Usage(f"bad group spec {text!r}: {exc}") from None
    doc = read_document(text)
    if doc.kind != "group":
        raise _Usage(f"{text} is not a group document")
    return doc.payload


def parse_blocks(text: str) -> list:
    return [[p.strip() for p in block.split(",") if p.strip()] for block in text.split("/")]


# ---------------------------------------------------------------- output helpers


class Out:
    def __init__(self, stream, fmt: str):
        self.stream, self.fmt = stream, fmt

    def emit(self, data: dict, lines):
        if self.fmt == "json":
            self.stream.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
        else:
            for line in lines:
                self.stream.write(line + "\n")


def _report_lines(report: ValidationReport, title: str):
    if report.ok:
        return [f"{title}: ok"]
    lines = [f"{title}: {len(report.violations)} violation(s)"]
    lines += [f"  {v.law}: {list(v.witness)}" for v in report.violations]
    return lines


def _status(report: ValidationReport) -> int:
    return 0 if report.ok else 1


# ---------------------------------------------------------------- subcommands


def cmd_check(args, out: Out) -> int:
    doc = read_document(args.file, args.input_format)
    data = {"kind": doc.kind, "ok": True}
    lines = [f"{doc.kind}: ok"]
    if doc.kind == "category":
        C = doc.payload
        data.update(objects=len(C.objects), morphisms=len(C.morphisms))
        lines = [f"category: ok ({len(C.objects)} objects, {len(C.morphisms)} morphisms)"]
    elif doc.kind == "group":
        data["order"] = doc.payload.order
        lines = [f"group: ok (order {doc.payload.order}, degree {doc.payload.degree})"]
    out.emit(data, lines)
    return 0


def _action_for(doc: Document, variant: Variant):
    if doc.kind == "action":
        return contravariant_action(doc.payload) if not variant.is_left else covariant_action(doc.payload)
    return doc.payload


def cmd_complete(args, out: Out) -> int:
    doc = _want(read_document(args.file, args.input_format), "action", "set_valued_action", "cat_valued_action")
    variant = Variant.parse(args.variant)
    FC = grothendieck_complete(_action_for(doc, variant), variant)
    report = check_split_fibration(FC)
    T = FC.total
    data = {
        "variant": variant.short,
        "objects": len(T.objects),
        "morphisms": len(T.morphisms),
        "split_fibration": report.to_dict(),
    }
    lines = [f"{variant.short}: {len(T.objects)} objects, {len(T.morphisms)} morphisms"]
    lines += _report_lines(report, "split fibration")
    out.emit(data, lines)
    return _status(report)


def cmd_transform(args, out: Out) -> int:
    doc = _want(read_document(args.file, args.input_format), "action")
    XG = transformation_groupoid(doc.payload)
    comps = connected_components(XG)
    word = "connected" if len(comps) == 1 else f"{len(comps)} components"
    data = {
        "objects": len(XG.objects),
        "morphisms": len(XG.morphisms),
        "components": [list(b) for b in comps],
        "connected": len(comps) == 1,
    }
    out.emit(data, [f"{len(XG.objects)} objects, {len(XG.morphisms)} morphisms, {word}"])
    return 0


def cmd_wreath(args, out: Out) -> int:
    G, P = group_from_spec(args.inner), group_from_spec(args.outer)
    W = wreath_product(G, P)
    blocks = [sorted(b) for b in blocks_of(G.degree, P.degree)]
    preserved = all(preserves_blocks(w, blocks) for w in W.elements)
    data = {
        "order": W.order,
        "degree": W.degree,
        "blocks": blocks,
        "preserves_blocks": preserved,
    }
    block_text = " ".join("{" + ",".join(map(str, b)) + "}" for b in blocks)
    lines = [
        f"order {W.order}, degree {W.degree}",
        f"blocks {block_text} {'preserved' if preserved else 'NOT preserved'} by every element",
    ]
    out.emit(data, lines)
    return 0 if preserved else 1


def cmd_hierarchy(args, out: Out) -> int:
    doc = _want(read_document(args.file, args.input_format), "hierarchy")
    H = build_hierarchy(doc.payload)
    report = check_composite_fibration(H.P, H.Q)
    E = H.total.total
    data = {
        "total": {"objects": len(E.objects), "morphisms": len(E.morphisms)},
        "middle": {"objects": len(H.middle.total.objects), "morphisms": len(H.middle.total.morphisms)},
        "composite_fibration": report.to_dict(),
    }
    lines = [
        f"total: {len(E.objects)} objects, {len(E.morphisms)} morphisms",
        f"middle: {len(H.middle.total.objects)} objects, {len(H.middle.total.morphisms)} morphisms",
    ]
    lines += _report_lines(report, "composite fibration")
    out.emit(data, lines)
    return _status(report)


def cmd_compare(args, out: Out) -> int:
    inner, outer = group_from_spec(args.inner), group_from_spec(args.outer)
    blocks = parse_blocks(args.blocks) if args.blocks else [sorted(b) for b in blocks_of(inner.degree, outer.degree)]
    rep = compare_models(blocks, inner, outer)
    out.emit(rep.to_dict(), rep.notes + [f"morphism counts coincide: {rep.morphism_counts_coincide}"])
    return 0


def cmd_aut2(args, out: Out) -> int:
    C = _category_of(read_document(args.file, args.input_format))
    T = aut_2group(C, budget=args.budget)
    report = check_two_group(T)
    s = T.summary()
    data = {**s, "laws": report.to_dict()}
    lines = [f"{s['one_cells']} one-cells, {s['two_cells']} two-cells"]
    lines += _report_lines(report, "2-group laws")
    out.emit(data, lines)
    return _status(report)


def cmd_square(args, out: Out) -> int:
    C = _category_of(read_document(args.file, args.input_format))
    T = aut_2group(C, budget=args.budget)
    cells = T.all_two_cells
    if args.cell is not None or args.morphism is not None:
        if args.cell is None or args.morphism is None:
            raise _Usage("--cell and --morphism go together")
        if not 0 <= args.cell < len(cells):
            raise _Usage(f"--cell must be in 0..{len(cells) - 1}")
        if args.morphism not in C.index:
            raise _Usage(f"unknown morphism {args.morphism!r}")
        sq = naturality_square(T, cells[args.cell], args.morphism)
        if args.dot:
            out.stream.write(emit_dot(sq))
        else:
            top, bottom, left, right = sq.edges
            out.emit(sq.to_dict(), [
                f"corners {', '.join(sq.corners)}",
                f"top {top}, bottom {bottom}, left {left}, right {right}",
                "commutes" if sq.commutes else "does not commute",
            ])
        return 0 if sq.commutes else 1
    failures = [
        [k, f]
        for k, chi in enumerate(cells)
        for f in C.names
        if not naturality_square(T, chi, f).commutes
    ]
    total = len(cells) * len(C.names)
    data = {"squares": total, "failures": failures}
    out.emit(data, [f"{total - len(failures)}/{total} naturality squares commute"])
    return 0 if not failures else 1


def cmd_klein(args, out: Out) -> int:
    doc = _want(read_document(args.file, args.input_format), "klein")
    rep = check_klein(doc.payload, budget=args.budget)
    d = rep.to_dict()
    lines = [f"{k}: {v}" for k, v in d.items() if k != "obstruction"]
    if rep.obstruction:
        lines.append(f"obstruction: {rep.obstruction}")
    out.emit(d, lines)
    return 0


def cmd_geometry(args, out: Out) -> int:
    doc = _want(read_document(args.file, args.input_format), "groupoid_geometry")
    report, rows = check_groupoid_geometry(doc.payload)
    lines = [f"{k}: {v}" for k, v in rows.items()] + _report_lines(report, "geometry laws")
    out.emit({"rows": rows, "laws": report.to_dict()}, lines)
    return _status(report)


def cmd_stats(args, out: Out) -> int:
    C = _category_of(read_document(args.file, args.input_format))
    s = presentation_stats(C)
    out.emit(s.to_dict(), [f"{s.objects} objects, {s.morphisms} morphisms, {s.composable_pairs} composable pairs"])
    return 0


def cmd_iso(args, out: Out) -> int:
    C = _category_of(read_document(args.left, args.input_format))
    D = _category_of(read_document(args.right, args.input_format))
    rep = iso_report(C, D, args.budget)
    d = rep.to_dict()
    (lo, lm), (ro, rm) = rep.count_summary
    lines = [
        "isomorphic" if rep.isomorphic else "not isomorphic",
        f"left: {lo} objects, {lm} morphisms; right: {ro} objects, {rm} morphisms",
    ]
    if rep.isomorphic:
        lines.append("objects: " + ", ".join(f"{k} -> {v}" for k, v in rep.witness[0].object_map.items()))
    out.emit(d, lines)
    return 0


def cmd_dot(args, out: Out) -> int:
    C = _category_of(read_document(args.file, args.input_format))
    out.stream.write(emit_dot(C, identities=args.identities, name=Path(args.file).stem))
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    def common(default):
        p = _Parser(add_help=False)
        p.add_argument("--format", choices=("text", "json"), default=default or "text",
                       help="report format")
        p.add_argument("--input-format", choices=("json", "dsl"), default=default,
                       help="input format (default: by file extension)")
        return p

    # options are accepted before or after the subcommand
    parser = _Parser(prog="fibrato", description="Finite categories, completions and fibrations.",
                     parents=[common(None)])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    shared = common(argparse.SUPPRESS)

    def add(name, func, help, file=True):
        p = sub.add_parser(name, help=help, parents=[shared])
        if file:
            p.add_argument("file")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "validate any document")
    add("complete", cmd_complete, "Grothendieck completion of an action").add_argument(
        "--variant", required=True, choices=[v.short for v in Variant])
    add("transform", cmd_transform, "transformation groupoid of a group action")
    p = add("wreath", cmd_wreath, "wreath product and its block system", file=False)
    p.add_argument("--inner", required=True, help="kind:n or group document")
    p.add_argument("--outer", required=True, help="kind:n or group document")
    add("hierarchy", cmd_hierarchy, "build a two-level hierarchy and check the composite fibration")
    p = add("compare-models", cmd_compare, "wreath group model against groupoid hierarchy", file=False)
    p.add_argument("--inner", required=True)
    p.add_argument("--outer", required=True)
    p.add_argument("--blocks", help="blocks like 1,2,3/4,5,6 (default: consecutive)")
    add("aut2", cmd_aut2, "automorphism 2-group").add_argument("--budget", type=int, default=None)
    p = add("square", cmd_square, "naturality squares of the automorphism 2-group")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--cell", type=int, help="2-cell index")
    p.add_argument("--morphism", help="morphism of the category")
    p.add_argument("--dot", action="store_true", help="print the chosen square as DOT")
    add("klein", cmd_klein, "Klein geometry report").add_argument("--budget", type=int, default=None)
    add("geometry", cmd_geometry, "groupoid geometry report")
    add("stats", cmd_stats, "presentation size")
    p = add("iso", cmd_iso, "search for an isomorphism", file=False)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--budget", type=int, default=None)
    add("dot", cmd_dot, "DOT text of a category").add_argument(
        "--identities", action="store_true", help="include identity arrows")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _Usage("a subcommand is required")
        if getattr(args, "budget", None) is None and hasattr(args, "budget"):
            args.budget = default_budget()
        return args.func(args, Out(stdout, args.format))
    except _Usage as exc:
        stderr.write(f"usage error: {exc}\n")
        return 2
    except PARSE_ERRORS as exc:
        stderr.write(f"{exc.code}: {exc}\n")
        return 2
    except BudgetExceeded as exc:
        stderr.write(f"{exc.code}: {exc}\n")
        return 1
    except FibratoError as exc:
        stderr.write(f"{exc.code}: {exc}\n")
        report = getattr(exc, "report", None)
        if report is not None:
            for v in report.violations:
                stderr.write(f"  {v.law}: {list(v.witness)}\n")
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
