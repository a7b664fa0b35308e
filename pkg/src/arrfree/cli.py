"""Command-line surface.

Subcommands: build, lattice, charpoly, check-if, check-hif, verify-table,
classify.  Exit codes: 0 verified/true, 1 refuted/false, 2 unknown (budget
exhausted), 3 usage or parse error.  All output is deterministic; forms
print in canonical order with coordinates x1..xl and zeta as ``z``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import catalog, formats
from .freeness import (
    CertificateError,
    SearchEngine,
    Status,
    check_hif,
    replay_certificate,
)
from .geometry import Arrangement
from .lattice import exponents_from_factorization, intersection_lattice, poincare_polynomial

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")

_CATALOG_ID = re.compile(r"^(braid|full|rr|paper|monomial):")


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _superscript(n: int) -> str:
    return str(n).translate(_SUPERSCRIPTS)


def _poly_text(poly) -> str:
    if not poly:
        return "0"
    parts = []
    for k, c in enumerate(poly):
        if c == 0:
            continue
        if k == 0:
            body = str(c)
        else:
            mag = "" if abs(c) == 1 else str(abs(c))
            tpow = "t" if k == 1 else f"t{_superscript(k)}"
            body = f"{mag}{tpow}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts) if parts else "0"


def _factorization_text(exponents) -> str:
    counts: dict[int, int] = {}
    for b in exponents:
        if b > 0:
            counts[b] = counts.get(b, 0) + 1
    if not counts:
        return "1"
    pieces = []
    for b in sorted(counts):
        factor = "(1+t)" if b == 1 else f"(1+{b}t)"
        if counts[b] > 1:
            factor += _superscript(counts[b])
        pieces.append(factor)
    return "".join(pieces)


def _exponent_text(exponents) -> str:
    return ", ".join(str(e) for e in exponents)


def _load_arrangement(source: str) -> Arrangement:
    if _CATALOG_ID.match(source):
        return catalog.from_identifier(source)
    try:
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise _CliError(f"cannot read {source!r}: {exc}") from None
    return formats.parse_arrangement_text(text)


def _load_table(source: str):
    if source.startswith("cert:"):
        try:
            return catalog.table_certificate(source[5:])
        except ValueError as exc:
            raise _CliError(str(exc)) from None
    try:
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise _CliError(f"cannot read {source!r}: {exc}") from None
    return formats.parse_table_text(text)


def _describe(arrangement: Arrangement) -> str:
    return (
        f"dim {arrangement.dim}, order {arrangement.order}, "
        f"{len(arrangement)} hyperplanes"
    )


def _emit(payload: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(payload, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


# -- subcommands ---------------------------------------------------------------


def _cmd_build(args) -> int:
    arrangement = _load_arrangement(args.source)
    text = formats.write_arrangement_text(arrangement)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    payload = {
        "written": args.out,
        "dim": arrangement.dim,
        "order": arrangement.order,
        "hyperplanes": len(arrangement),
    }
    _emit(payload, args.format == "json", [
        f"arrangement: {_describe(arrangement)}",
        f"written: {args.out}",
    ])
    return EXIT_TRUE


def _cmd_lattice(args) -> int:
    arrangement = _load_arrangement(args.source)
    elements = intersection_lattice(arrangement)
    by_codim: dict[int, list[int]] = {}
    for element in elements:
        by_codim.setdefault(element.codim, []).append(element.mobius)
    rows = [
        {
            "codim": codim,
            "count": len(values),
            "mobius_sum": sum(values),
        }
        for codim, values in sorted(by_codim.items())
    ]
    payload = {"arrangement": _describe(arrangement), "total": len(elements), "levels": rows}
    lines = [f"arrangement: {_describe(arrangement)}"]
    for row in rows:
        lines.append(
            f"codim {row['codim']}: {row['count']} elements, mobius sum {row['mobius_sum']}"
        )
    lines.append(f"total: {len(elements)} lattice elements")
    _emit(payload, args.format == "json", lines)
    return EXIT_TRUE


def _cmd_charpoly(args) -> int:
    arrangement = _load_arrangement(args.source)
    poly = poincare_polynomial(arrangement)
    exponents = exponents_from_factorization(poly, arrangement.dim)
    if exponents is not None:
        rendered = f"{_poly_text(poly)} = {_factorization_text(exponents)}"
    else:
        rendered = f"{_poly_text(poly)} (no factorization into nonnegative integer linear terms)"
    payload = {
        "arrangement": _describe(arrangement),
        "polynomial": list(poly),
        "rendered": rendered,
        "exponents": list(exponents) if exponents is not None else None,
    }
    _emit(payload, args.format == "json", [rendered])
    return EXIT_TRUE


def _cmd_check_if(args) -> int:
    arrangement = _load_arrangement(args.source)
    engine = SearchEngine(budget=args.budget, threads=args.threads)
    verdict = engine.search(arrangement)
    payload = {
        "arrangement": _describe(arrangement),
        "verdict": verdict.status.value,
        "exponents": (
            list(verdict.certificate.final_exponents)
            if verdict.certificate is not None
            else None
        ),
        "reason": verdict.reason or None,
        "nodes_explored": engine.nodes_explored,
    }
    lines = [f"arrangement: {_describe(arrangement)}", f"verdict: {verdict.status.value}"]
    if verdict.is_inductively_free:
        lines.append(f"exponents: {_exponent_text(verdict.certificate.final_exponents)}")
    elif verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    if args.emit_table:
        if not verdict.is_inductively_free:
            raise _CliError("--emit-table needs an inductively free arrangement")
        with open(args.emit_table, "w", encoding="utf-8") as handle:
            handle.write(formats.write_table_text(verdict.certificate))
        lines.append(f"table written: {args.emit_table}")
        payload["table_written"] = args.emit_table
    _emit(payload, args.format == "json", lines)
    if verdict.status is Status.INDUCTIVELY_FREE:
        return EXIT_TRUE
    if verdict.status is Status.UNKNOWN:
        return EXIT_UNKNOWN
    return EXIT_FALSE


def _cmd_check_hif(args) -> int:
    arrangement = _load_arrangement(args.source)
    report = check_hif(arrangement, budget=args.budget)
    lines = [f"arrangement: {_describe(arrangement)}"]
    counts: dict[str, int] = {}
    for entry in report.entries:
        counts[entry.verdict.status.value] = counts.get(entry.verdict.status.value, 0) + 1
    lines.append(
        "lattice elements checked: "
        + ", ".join(f"{v} {k}" for k, v in sorted(counts.items()))
    )
    payload = {
        "arrangement": _describe(arrangement),
        "hereditarily_inductively_free": report.hereditarily_inductively_free,
        "elements": len(report.entries),
        "counts": counts,
        "failing": None,
    }
    if report.hereditarily_inductively_free:
        lines.append("verdict: hereditarily inductively free")
        _emit(payload, args.format == "json", lines)
        return EXIT_TRUE
    if report.failing is None:
        lines.append("verdict: unknown (budget exhausted)")
        _emit(payload, args.format == "json", lines)
        return EXIT_UNKNOWN
    entry = report.failing
    restriction = entry.restriction
    span_forms = " , ".join(
        formats.render_linear_form(f)
        for f in arrangement.forms
        if f in entry.element.members
    )
    lines.append("verdict: not hereditarily inductively free")
    lines.append(
        f"failing element: codim {entry.element.codim}, intersection of [{span_forms}]"
    )
    lines.append(
        f"restriction: dim {restriction.dim}, {len(restriction)} hyperplanes, "
        f"{entry.verdict.status.value}"
    )
    failing_payload = {
        "codim": entry.element.codim,
        "element_forms": span_forms,
        "restriction_size": len(restriction),
        "status": entry.verdict.status.value,
    }
    if entry.verdict.witness is not None:
        witness = entry.verdict.witness
        lines.append(
            "witness: H = "
            f"{formats.render_linear_form(witness.pivot)}, "
            f"exp deleted = {_exponent_text(witness.deleted_exponents)}, "
            f"exp restricted = {_exponent_text(witness.restricted_exponents)} "
            "(not contained)"
        )
        failing_payload["witness"] = {
            "pivot": formats.render_linear_form(witness.pivot),
            "deleted_exponents": list(witness.deleted_exponents),
            "restricted_exponents": list(witness.restricted_exponents),
        }
    payload["failing"] = failing_payload
    _emit(payload, args.format == "json", lines)
    return EXIT_FALSE


def _cmd_verify_table(args) -> int:
    arrangement = _load_arrangement(args.source)
    cert = _load_table(args.table)
    engine = SearchEngine(budget=args.budget)
    try:
        result = replay_certificate(arrangement, cert, engine=engine)
    except CertificateError as exc:
        payload = {"verified": False, "error": str(exc), "row": exc.row}
        _emit(payload, args.format == "json", [f"verification failed: {exc}"])
        return EXIT_FALSE
    lines = ["exp A' | alpha_H | exp A''"]
    for row in result.rows:
        lines.append(
            f"{_exponent_text(row.exponents_before)} | "
            f"{formats.render_linear_form(row.form)} | "
            f"{_exponent_text(row.restriction_exponents)}"
        )
    lines.append(f"final exponents: {_exponent_text(result.final_exponents)}")
    lines.append(f"rows verified: {len(result.rows)}")
    payload = {
        "verified": True,
        "rows": len(result.rows),
        "final_exponents": list(result.final_exponents),
    }
    _emit(payload, args.format == "json", lines)
    return EXIT_TRUE


def _cmd_classify(args) -> int:
    try:
        descriptor = catalog.parse_descriptor(args.descriptor)
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    reason = catalog.excluded_reason(descriptor)
    payload = {
        "descriptor": descriptor.label(),
        "inductively_free": reason is None,
        "reason": reason,
    }
    lines = [f"descriptor: {descriptor.label()}"]
    if reason is None:
        lines.append("inductively free: yes")
    else:
        lines.append("inductively free: no")
        lines.append(f"reason: {reason}")
    _emit(payload, args.format == "json", lines)
    return EXIT_TRUE if reason is None else EXIT_FALSE


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="arrfree",
        description="Exact computations with complex hyperplane arrangements "
        "and inductive-freeness certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_build = sub.add_parser("build", help="resolve a source and write an arrangement file")
    p_build.add_argument("source", help="catalog id (braid:4, full:3,2, rr:3,3, paper:g26) or file")
    p_build.add_argument("--out", required=True)
    add_common(p_build)

    p_lattice = sub.add_parser("lattice", help="intersection lattice sizes and Moebius sums")
    p_lattice.add_argument("source")
    add_common(p_lattice)

    p_charpoly = sub.add_parser("charpoly", help="Poincare polynomial and its factorization")
    p_charpoly.add_argument("source")
    add_common(p_charpoly)

    p_checkif = sub.add_parser("check-if", help="search for an inductive-freeness certificate")
    p_checkif.add_argument("source")
    p_checkif.add_argument("--budget", type=int, default=None)
    p_checkif.add_argument("--threads", type=int, default=1)
    p_checkif.add_argument("--emit-table", default=None)
    add_common(p_checkif)

    p_checkhif = sub.add_parser("check-hif", help="check every lattice restriction")
    p_checkhif.add_argument("source")
    p_checkhif.add_argument("--budget", type=int, default=None)
    add_common(p_checkhif)

    p_verify = sub.add_parser("verify-table", help="replay an induction table")
    p_verify.add_argument("source")
    p_verify.add_argument("table", help="table file or cert:<table1|g26|g32|monomial:r,l>")
    p_verify.add_argument("--budget", type=int, default=None)
    add_common(p_verify)

    p_classify = sub.add_parser("classify", help="inductive-freeness classification lookup")
    p_classify.add_argument("descriptor", help="e.g. rr:3,3, full:5,4, g31, braid:4 * g26")
    add_common(p_classify)

    return parser


_HANDLERS = {
    "build": _cmd_build,
    "lattice": _cmd_lattice,
    "charpoly": _cmd_charpoly,
    "check-if": _cmd_check_if,
    "check-hif": _cmd_check_hif,
    "verify-table": _cmd_verify_table,
    "classify": _cmd_classify,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _CliError as exc:
        print(f"arrfree: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except formats.FormatError as exc:
        print(f"arrfree: parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"arrfree: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
