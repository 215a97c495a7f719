"""Command line interface over the document formats.

Every subcommand reads JSON documents, runs the requested computation, and
prints one verdict line per checked property plus a final PASS or FAIL.  A
full machine-readable report can be written with --report; generated
artifacts (multicomplexes, resolution bundles, relation chains) go to --out
so they can be fed back into `recheck` or `verify-chain`.

Exit status: 0 when every verdict passes, 1 on a verification failure
(including refused preconditions such as a non-acyclic input), 2 on input
errors (unreadable files, malformed documents, bad arguments).

Reports are deterministic: rerunning a command on the same input with the
same seed reproduces the verdict section byte for byte.  Only the timing
field varies; `verdict_bytes` strips it for comparisons.
"""
from __future__ import annotations

import argparse
import os
import random
import re
import sys
import time

from .cofinal import complement, diagonal_represent, rel_class
from .complexes import homology
from .errors import (BinmcError, CertificateError, MembershipRefusal,
                     NotAcyclic, NotDiagonal, ParseError, RingError,
                     ShapeError)
from .gen import random_multicomplex
from .kgroups import tn_membership_certificate, torsion, verify_chain
from .matrix import smith
from .multicomplex import diagonality_report, direct_sum_multi, validate
from .resolve import resolve_binary, resolve_multi, verify_resolution
from .rings import PolynomialRing, PrimeField, QQ, ZZ
from .serialize import (CHAIN_SCHEMA, CLASS_SCHEMA, MATRIX_SCHEMA,
                        MULTICOMPLEX_SCHEMA, REPORT_SCHEMA, RESOLUTION_SCHEMA,
                        canonical_dumps, chain_from_doc, chain_to_doc,
                        class_from_document, digest, load_text,
                        matrix_from_document, matrix_to_doc,
                        multicomplex_from_doc, multicomplex_to_doc, parse_any,
                        resolution_from_doc, resolution_to_doc)

_RING_NAMES = "Z, Q, F<p>, or F<p>[x]"


def ring_from_name(name: str):
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    m = re.fullmatch(r"F(\d+)(\[x\])?", name)
    if m:
        try:
            base = PrimeField(int(m.group(1)))
        except RingError as e:
            raise ParseError(str(e), "--ring")
        return PolynomialRing(base) if m.group(2) else base
    raise ParseError(f"unknown ring {name!r}, expected {_RING_NAMES}", "--ring")


def _read_doc(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return load_text(fh.read())


def _write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _new_report(command: str, input_digest, seed: int) -> dict:
    return {"schema": REPORT_SCHEMA, "command": command,
            "input_digest": input_digest, "seed": seed,
            "verdicts": [], "witnesses": {}, "_t0": time.monotonic()}


def _verdict(report: dict, name: str, ok: bool, detail: str = ""):
    report["verdicts"].append({"name": name, "ok": bool(ok), "detail": detail})


def verdict_bytes(report: dict) -> bytes:
    """The byte-compared portion of a report: everything except timing."""
    stable = {k: v for k, v in report.items() if k not in ("timing_ms", "_t0")}
    return canonical_dumps(stable).encode("utf-8")


def _emit(report: dict, args) -> int:
    report["timing_ms"] = int((time.monotonic() - report.pop("_t0")) * 1000)
    if getattr(args, "report", None):
        _write_text(args.report, canonical_dumps(report))
    for v in report["verdicts"]:
        mark = "[ok]  " if v["ok"] else "[FAIL]"
        line = f"{mark} {v['name']}"
        if v["detail"]:
            line += f": {v['detail']}"
        print(line)
    ok = all(v["ok"] for v in report["verdicts"])
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _describe_axes(axes) -> str:
    axes = sorted(axes)
    return ", ".join(str(a) for a in axes) if axes else "none"


# -- subcommands -------------------------------------------------------------


def cmd_check(args) -> int:
    doc = _read_doc(args.file)
    M = multicomplex_from_doc(doc)
    report = _new_report("check", digest(doc), args.seed)
    rep = validate(M, "fp")
    detail = f"dim {M.dim}, shape {list(M.shape)}"
    if not rep.ok:
        f = rep.first()
        detail = f"{f.kind} failure ({f.family}) axis {f.axis} at {f.coord}: {f.detail}"
    _verdict(report, "validates", rep.ok, detail)
    diag = diagonality_report(M)
    _verdict(report, "diagonal-directions", True, _describe_axes(diag.directions))
    return _emit(report, args)


def cmd_homology(args) -> int:
    doc = _read_doc(args.file)
    M = multicomplex_from_doc(doc)
    report = _new_report("homology", digest(doc), args.seed)
    if M.dim == 0:
        _verdict(report, "degenerate", True, "dimension 0, no lines to check")
        return _emit(report, args)
    for axis in range(M.dim):
        for which in ("top", "bottom"):
            checked = 0
            bad = None
            for rest in sorted(M.rest_coords(axis)):
                line = M.line(axis, rest, which)
                for k in range(line.length):
                    checked += 1
                    if not homology(line, k).is_zero_module():
                        bad = bad or f"H_{k} nonzero on the line through {rest}"
            _verdict(report, f"axis-{axis}-{which}", bad is None,
                     bad or f"{checked} homology groups vanish")
    return _emit(report, args)


def cmd_snf(args) -> int:
    doc = _read_doc(args.file)
    A = matrix_from_document(doc)
    report = _new_report("snf", digest(doc), args.seed)
    dec = smith(A)
    product_ok = dec.U @ A @ dec.V == dec.S
    diag_ok = all(A.ring.is_zero(dec.S.get(i, j))
                  for i in range(dec.S.rows) for j in range(dec.S.cols) if i != j)
    _verdict(report, "decomposition", product_ok, "U * A * V equals S")
    _verdict(report, "diagonal-form", diag_ok, f"rank {dec.rank}")
    to = A.ring.element_to_doc
    report["witnesses"] = {
        "U": matrix_to_doc(dec.U), "S": matrix_to_doc(dec.S),
        "V": matrix_to_doc(dec.V),
        "invariants": [to(d) for d in dec.diagonal() if not A.ring.is_zero(d)]}
    return _emit(report, args)


def _run_resolution(args, command, resolver) -> int:
    doc = _read_doc(args.file)
    M = multicomplex_from_doc(doc)
    report = _new_report(command, digest(doc), args.seed)
    res = resolver(M, check=False)
    rep = verify_resolution(res)
    detail = (f"cover shape {list(res.P.shape)}, diagonal axes kept: "
              f"{_describe_axes(res.diagonal_axes)}")
    if not rep.ok:
        detail = str(rep.first())
    _verdict(report, "resolution-verifies", rep.ok, detail)
    bundle = resolution_to_doc(res)
    report["witnesses"] = {"resolution": bundle}
    if args.out:
        _write_text(args.out, canonical_dumps(bundle))
    return _emit(report, args)


def cmd_resolve(args) -> int:
    return _run_resolution(args, "resolve", resolve_binary)


def cmd_resolve_multi(args) -> int:
    return _run_resolution(args, "resolve-multi", resolve_multi)


def cmd_cofinalize(args) -> int:
    doc = _read_doc(args.file)
    M = multicomplex_from_doc(doc)
    report = _new_report("cofinalize", digest(doc), args.seed)
    i = args.direction
    if not 0 <= i < M.dim:
        raise ParseError(f"direction {i} is not an axis of a {M.dim}-dimensional input",
                         "--direction")
    before = rel_class(M)
    T = complement(M, i)
    after = rel_class(direct_sum_multi([M, T]))
    _verdict(report, "complement-diagonal", T.is_diagonal_in(i), f"direction {i}")
    _verdict(report, "sum-ranks-even", after.is_zero(),
             f"{len(before.odd_coords)} odd-rank spots before, "
             f"{len(after.odd_coords)} after")
    kept = M.diagonal_directions() - {i}
    _verdict(report, "keeps-diagonality", kept <= T.diagonal_directions(),
             f"inherited directions: {_describe_axes(kept)}")
    tdoc = multicomplex_to_doc(T)
    report["witnesses"] = {"complement": tdoc,
                           "odd-ranks-before": [list(c) for c in sorted(before.odd_coords)]}
    if args.out:
        _write_text(args.out, canonical_dumps(tdoc))
    return _emit(report, args)


def cmd_represent_diagonal(args) -> int:
    doc = _read_doc(args.file)
    x, wits = class_from_document(doc)
    report = _new_report("represent-diagonal", digest(doc), args.seed)
    ring = ring_from_name(args.ring) if args.ring else (x.ring or ZZ)
    cert = tn_membership_certificate(x, wits)
    _verdict(report, "certificate", cert.ok, cert.reason or f"{len(wits)} generators")
    if not cert.ok:
        return _emit(report, args)
    t, chain = diagonal_represent(x, wits, i=args.direction, ring=ring)
    i_used = args.direction
    if i_used is None:
        i_used = wits[0] if wits else 0
    rep = verify_chain(chain)
    _verdict(report, "chain-verifies", rep.ok,
             rep.reason if not rep.ok else f"{len(chain.steps)} steps")
    _verdict(report, "result-diagonal", t.is_diagonal_in(i_used),
             f"direction {i_used}, shape {list(t.shape)}")
    cdoc = chain_to_doc(chain)
    report["witnesses"] = {"representative": multicomplex_to_doc(t), "chain": cdoc}
    if args.out:
        _write_text(args.out, canonical_dumps(cdoc))
    return _emit(report, args)


def cmd_verify_chain(args) -> int:
    doc = _read_doc(args.file)
    chain = chain_from_doc(doc)
    report = _new_report("verify-chain", digest(doc), args.seed)
    rep = verify_chain(chain)
    detail = f"{len(chain.steps)} steps"
    if not rep.ok:
        where = "global" if rep.step is None else f"step {rep.step}"
        detail = f"{where}: {rep.reason}"
    _verdict(report, "chain-verifies", rep.ok, detail)
    return _emit(report, args)


def cmd_torsion(args) -> int:
    doc = _read_doc(args.file)
    M = multicomplex_from_doc(doc)
    report = _new_report("torsion", digest(doc), args.seed)
    if M.dim != 1:
        raise ParseError(f"torsion needs a 1-dimensional input, got dimension {M.dim}",
                         "torsion")
    value = torsion(M)
    vdoc = M.ring.element_to_doc(value)
    _verdict(report, "unit-torsion", True, f"torsion {vdoc!r}")
    report["witnesses"] = {"torsion": vdoc}
    return _emit(report, args)


def cmd_gen(args) -> int:
    ring = ring_from_name(args.ring)
    for a in args.diagonal:
        if not 0 <= a < args.dim:
            raise ParseError(f"diagonal axis {a} is not an axis in dimension {args.dim}",
                             "--diagonal")
    rng = random.Random(args.seed)
    M = random_multicomplex(rng, ring, args.dim, length=args.length,
                            max_rank=args.max_rank,
                            diagonal_axes=tuple(args.diagonal),
                            allow_fp=args.fp)
    doc = multicomplex_to_doc(M)
    report = _new_report("gen", None, args.seed)
    _verdict(report, "generated", True,
             f"dim {M.dim}, shape {list(M.shape)}, digest {digest(doc)}")
    text = canonical_dumps(doc)
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return _emit(report, args)


def cmd_recheck(args) -> int:
    doc = _read_doc(args.file)
    schema, obj = parse_any(doc)
    report = _new_report("recheck", digest(doc), args.seed)
    if schema == MULTICOMPLEX_SCHEMA:
        rep = validate(obj, "fp")
        detail = "" if rep.ok else str(rep.first())
        _verdict(report, "validates", rep.ok, detail)
        _verdict(report, "diagonal-directions", True,
                 _describe_axes(diagonality_report(obj).directions))
    elif schema == MATRIX_SCHEMA:
        dec = smith(obj)
        _verdict(report, "decomposition", dec.U @ obj @ dec.V == dec.S,
                 f"rank {dec.rank}")
    elif schema == RESOLUTION_SCHEMA:
        rep = verify_resolution(obj)
        _verdict(report, "resolution-verifies", rep.ok,
                 "" if rep.ok else str(rep.first()))
    elif schema == CHAIN_SCHEMA:
        rep = verify_chain(obj)
        _verdict(report, "chain-verifies", rep.ok,
                 "" if rep.ok else f"step {rep.step}: {rep.reason}")
    elif schema == CLASS_SCHEMA:
        x, wits = obj
        cert = tn_membership_certificate(x, wits)
        _verdict(report, "certificate", cert.ok,
                 cert.reason or f"{len(wits)} generators")
    return _emit(report, args)


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binmc",
        description="Check, resolve, and certify acyclic binary multicomplexes.")
    sub = parser.add_subparsers(dest="command", required=True)
    default_seed = int(os.environ.get("BINMC_SEED", "0"))

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--seed", type=int, default=default_seed,
                       help="seed recorded in the report (default: BINMC_SEED or 0)")
        p.add_argument("--report", metavar="PATH",
                       help="write the full JSON report here")
        p.set_defaults(func=fn)
        return p

    p = add("check", cmd_check, help="validate a multicomplex document")
    p.add_argument("file")

    p = add("homology", cmd_homology, help="check every axis line is acyclic")
    p.add_argument("file")

    p = add("snf", cmd_snf, help="diagonalize a matrix document")
    p.add_argument("file")

    p = add("resolve", cmd_resolve,
            help="resolve a binary complex by free modules")
    p.add_argument("file")
    p.add_argument("--out", metavar="PATH", help="write the resolution bundle here")

    p = add("resolve-multi", cmd_resolve_multi,
            help="resolve a binary multicomplex by free modules")
    p.add_argument("file")
    p.add_argument("--out", metavar="PATH", help="write the resolution bundle here")

    p = add("cofinalize", cmd_cofinalize,
            help="build a diagonal complement making all ranks even")
    p.add_argument("file")
    p.add_argument("--direction", type=int, required=True,
                   help="axis the complement must be diagonal in")
    p.add_argument("--out", metavar="PATH", help="write the complement here")

    p = add("represent-diagonal", cmd_represent_diagonal,
            help="rewrite a certified class into a single diagonal member")
    p.add_argument("file")
    p.add_argument("--direction", type=int, default=None,
                   help="axis for the result (default: first witnessed axis)")
    p.add_argument("--ring", default=None,
                   help=f"ring for an empty class ({_RING_NAMES})")
    p.add_argument("--out", metavar="PATH", help="write the relation chain here")

    p = add("verify-chain", cmd_verify_chain,
            help="re-verify a relation chain document")
    p.add_argument("file")

    p = add("torsion", cmd_torsion,
            help="torsion unit of an acyclic complex of free modules")
    p.add_argument("file")

    p = add("gen", cmd_gen, help="generate a random valid multicomplex")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--ring", default="Z", help=f"one of {_RING_NAMES}")
    p.add_argument("--length", type=int, default=3)
    p.add_argument("--max-rank", type=int, default=2)
    p.add_argument("--diagonal", type=int, nargs="*", default=[],
                   help="axes the output must be diagonal in")
    p.add_argument("--fp", action="store_true",
                   help="allow non-free finitely presented objects")
    p.add_argument("--out", metavar="PATH",
                   help="write the document here (default: stdout)")

    p = add("recheck", cmd_recheck,
            help="re-verify any recognized document by its schema tag")
    p.add_argument("file")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except (ParseError, OSError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (ShapeError, RingError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (NotAcyclic, NotDiagonal, MembershipRefusal, CertificateError) as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return 1
    except BinmcError as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
