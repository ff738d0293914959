"""Command-line front end.

Exit codes: 0 success, 2 verification failure, 3 invalid input,
4 retries exhausted.  All machine output is versioned JSON
(schema "secant3/1"); pass --json to suppress the human summary lines.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import serialize
from .decompose import (decompose_border3, decompose_curvilinear,
                        rank_bound_border3, rank_bound_curvilinear)
from .errors import (InvalidInput, RetriesExhausted, Secant3Error,
                     VerificationFailed)
from .scalars import parse_scalar
from .sylvester import sylvester_from_jet, sylvester_general
from .tensorspace import MultiJet, embed, verify_decomposition
from .witness import border_family, make_witness, residual_slope

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_INVALID = 3
EXIT_RETRIES = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _load_json(path_or_inline):
    if path_or_inline.lstrip().startswith(("{", "[")):
        return json.loads(path_or_inline)
    with open(path_or_inline) as fh:
        return json.load(fh)


def _emit(doc, out_path, as_json, summary=None):
    text = serialize.dumps(doc)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
        if not as_json and summary:
            print(summary)
    else:
        sys.stdout.write(text)
        if not as_json and summary:
            print(summary, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="secant3", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--out", default=None)
        sp.add_argument("--json", action="store_true", dest="as_json")

    sp = sub.add_parser("bound", help="rank upper bounds for a format")
    sp.add_argument("--format", required=True)
    sp.add_argument("--c", type=int, default=None, help="curvilinear degree")
    sp.add_argument("--alpha", type=int, default=None,
                    help="curvilinear component count")
    sp.add_argument("--json", action="store_true", dest="as_json")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("embed", help="embed a product point")
    sp.add_argument("--format", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--json", action="store_true", dest="as_json")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("decompose", help="decompose a presented tensor")
    sp.add_argument("--in", dest="infile", required=True,
                    help="JSON with 'presentation' and 'tensor'")
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--numeric", action="store_true")
    sp.add_argument("--dec-out", default=None)
    common(sp)

    sp = sub.add_parser("curvilinear", help="decompose against a multi-jet")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--dec-out", default=None)
    common(sp)

    sp = sub.add_parser("witness", help="product-of-lines witness bundle")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--x", type=int, required=True)
    common(sp)

    sp = sub.add_parser("sylvester", help="decompose a binary point")
    sp.add_argument("--q", default=None, help="coefficient list JSON")
    sp.add_argument("--a", type=int, default=None)
    sp.add_argument("--c", type=int, default=None)
    sp.add_argument("--jet", default=None, help="jet coordinates JSON")
    common(sp)

    sp = sub.add_parser("verify", help="re-verify a decomposition")
    sp.add_argument("--p", dest="tensor", required=True)
    sp.add_argument("--dec", required=True)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--numeric", action="store_true")
    common(sp)

    sp = sub.add_parser("family", help="rank-3 family exhibiting the limit")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--slope", action="store_true",
                    help="also fit the residual slope over an eps ladder")
    common(sp)

    sp = sub.add_parser("batch", help="run a manifest of requests")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    return p


def _cmd_bound(args):
    fmt = serialize.format_from_json(_load_json(args.format))
    if (args.c is None) != (args.alpha is None):
        raise InvalidInput("--c and --alpha go together")
    if args.c is not None:
        value = rank_bound_curvilinear(fmt, args.c, args.alpha)
    else:
        value = rank_bound_border3(fmt)
    if args.as_json or args.out:
        _emit({"schema": serialize.SCHEMA, "bound": value}, args.out,
              args.as_json)
    else:
        print(value)
    return EXIT_OK


def _cmd_embed(args):
    fmt = serialize.format_from_json(_load_json(args.format))
    point = tuple(tuple(parse_scalar(c) if isinstance(c, (str, list)) else c
                        for c in v) for v in _load_json(args.point))
    t = embed(fmt, point)
    _emit(serialize.tensor_to_json(t), args.out, args.as_json)
    return EXIT_OK


def _load_instance(path):
    doc = _load_json(path)
    if "presentation" not in doc or "tensor" not in doc:
        raise InvalidInput("input needs 'presentation' and 'tensor' members")
    pres = serialize.presentation_from_json(doc["presentation"])
    tensor = serialize.tensor_from_json(doc["tensor"])
    return pres, tensor


def _cmd_decompose(args):
    pres, tensor = _load_instance(args.infile)
    if isinstance(pres, MultiJet):
        dec, cert = decompose_curvilinear(pres, tensor, seed=args.seed,
                                          tol=args.tol)
    else:
        dec, cert = decompose_border3(pres, tensor, seed=args.seed,
                                      tol=args.tol)
    if args.exact:
        verify_decomposition(tensor, dec, mode="exact")
        cert.mode = "exact"
        cert.residual = 0.0
    doc = serialize.certificate_to_json(cert)
    doc["decomposition"] = serialize.decomposition_to_json(dec)
    summary = (f"size {cert.size} <= bound {cert.bound}; residual "
               f"{cert.residual:.2e}; flattening lower bound "
               f"{cert.flattening_max_rank}")
    _emit(doc, args.out, args.as_json, summary)
    if args.dec_out:
        with open(args.dec_out, "w") as fh:
            fh.write(serialize.dumps(serialize.decomposition_to_json(dec)))
    return EXIT_OK


def _cmd_curvilinear(args):
    pres, tensor = _load_instance(args.infile)
    if not isinstance(pres, MultiJet):
        raise InvalidInput("curvilinear expects a multijet presentation")
    args.exact = False
    return _cmd_decompose(args)


def _cmd_witness(args):
    wb = make_witness(args.k, args.x, seed=args.seed)
    slope = residual_slope(wb.presentation, wb.tensor, seed=args.seed)
    wb.certificate.border_slope = slope
    doc = {"schema": serialize.SCHEMA,
           "format": serialize.format_to_json(wb.format),
           "rank": wb.rank,
           "tensor": serialize.tensor_to_json(wb.tensor),
           "presentation": serialize.presentation_to_json(wb.presentation),
           "decomposition": serialize.decomposition_to_json(wb.decomposition),
           "certificate": serialize.certificate_to_json(wb.certificate),
           "paddedFactors": [list(u) for u in wb.padded_factors]}
    summary = (f"rank {wb.rank} witness on {args.k} factors; residual "
               f"{wb.certificate.residual:.2e}; family slope {slope:.3f}")
    _emit(doc, args.out, args.as_json, summary)
    return EXIT_OK


def _cmd_sylvester(args):
    if args.q is not None:
        q = [parse_scalar(v) if isinstance(v, (str, list)) else v
             for v in _load_json(args.q)]
        dec = sylvester_general(q, seed=args.seed, tol=args.tol)
    elif args.a is not None and args.c is not None and args.jet is not None:
        w = [parse_scalar(v) if isinstance(v, (str, list)) else v
             for v in _load_json(args.jet)]
        dec = sylvester_from_jet(args.a, args.c, w, seed=args.seed,
                                 tol=args.tol)
    else:
        raise InvalidInput("pass --q, or --a/--c/--jet")
    _emit(serialize.rnc_to_json(dec), args.out, args.as_json,
          f"size {dec.size} on the degree-{dec.degree} curve")
    return EXIT_OK


def _cmd_verify(args):
    tensor = serialize.tensor_from_json(_load_json(args.tensor))
    dec = serialize.decomposition_from_json(_load_json(args.dec))
    mode = "exact" if args.exact else ("numeric" if args.numeric else "auto")
    record = verify_decomposition(tensor, dec, mode=mode, tol=args.tol)
    _emit({"schema": serialize.SCHEMA, "size": record.size,
           "mode": record.mode, "residual": record.residual},
          args.out, args.as_json,
          f"verified size {record.size}, residual {record.residual:.2e}")
    return EXIT_OK


def _cmd_family(args):
    pres, tensor = _load_instance(args.infile)
    dec, resid = border_family(pres, tensor, args.eps, seed=args.seed,
                               tol=args.tol)
    doc = {"schema": serialize.SCHEMA, "eps": args.eps, "residual": resid,
           "decomposition": serialize.decomposition_to_json(dec)}
    if args.slope:
        doc["slope"] = residual_slope(pres, tensor, seed=args.seed)
    _emit(doc, args.out, args.as_json,
          f"family residual {resid:.2e} at eps {args.eps:g}")
    return EXIT_OK


def _batch_entry(entry):
    argv = [entry["cmd"]]
    for key, value in entry.items():
        if key == "cmd":
            continue
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        else:
            argv.append(flag)
            argv.append(json.dumps(value) if isinstance(value, (dict, list))
                        else str(value))
    argv.append("--json")
    code = main(argv)
    return code


def _cmd_batch(args):
    doc = _load_json(args.manifest)
    entries = doc["entries"] if isinstance(doc, dict) else doc
    results = []
    if args.workers > 1 and entries:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            codes = list(pool.map(_batch_entry_safe, entries))
    else:
        codes = [_batch_entry_safe(e) for e in entries]
    passed = sum(1 for c in codes if c == EXIT_OK)
    for entry, code in zip(entries, codes):
        results.append({"cmd": entry.get("cmd"), "exit": code})
    report = {"schema": serialize.SCHEMA, "total": len(entries),
              "passed": passed, "failed": len(entries) - passed,
              "entries": results}
    _emit(report, args.out, args.as_json,
          f"{passed}/{len(entries)} entries passed")
    return EXIT_OK if passed == len(entries) else EXIT_VERIFY


def _batch_entry_safe(entry):
    try:
        return _batch_entry(dict(entry))
    except Exception:
        return EXIT_INVALID


_HANDLERS = {
    "bound": _cmd_bound,
    "embed": _cmd_embed,
    "decompose": _cmd_decompose,
    "curvilinear": _cmd_curvilinear,
    "witness": _cmd_witness,
    "sylvester": _cmd_sylvester,
    "verify": _cmd_verify,
    "family": _cmd_family,
    "batch": _cmd_batch,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.cmd](args)
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except RetriesExhausted as exc:
        print(f"retries exhausted: {exc}", file=sys.stderr)
        return EXIT_RETRIES
    except (InvalidInput, Secant3Error, json.JSONDecodeError, OSError,
            KeyError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
