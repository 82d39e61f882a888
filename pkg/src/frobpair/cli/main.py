"""``frobpair`` command line.

    frobpair run FILE [--seed N] [--max-random-tries N] [--grid-threshold N]
                      [--emit-cert PATH] [--query NAME ...]
    frobpair verify CERT FILE
    frobpair canon FILE

Exit codes: 0 all queries certified yes or pass, 1 some certified no (or a
rejected certificate), 2 some inconclusive, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..bimodule import GRID_THRESHOLD, MAX_RANDOM_TRIES
from .queries import HashMismatch, QueryError, certificate_for, run_query, verify_certificate
from .registry import instance_hash, parse_definition, serialize
from .syntax import DefinitionError

EXIT_INPUT = 3


def _load(path: str):
    text = Path(path).read_text(encoding="utf-8")
    return parse_definition(text)


def dump_certificates(certs: list[dict]) -> str:
    return json.dumps(certs, indent=1, sort_keys=True) + "\n"


def cmd_run(args, out) -> int:
    reg = _load(args.file)
    names = args.query or list(reg.queries)
    code = 0
    certs = []
    print(f"instance {instance_hash(reg)}", file=out)
    print(f"seed {args.seed}", file=out)
    for name in names:
        try:
            res = run_query(reg, name, args.seed, max_random_tries=args.max_random_tries,
                            grid_threshold=args.grid_threshold)
        except QueryError as err:
            print(f"query {name}\n  error: {err}", file=out)
            code = max(code, EXIT_INPUT)
            continue
        print("\n".join(res.lines), file=out)
        code = max(code, res.exit_code)
        cert = certificate_for(res, reg, args.seed)
        if cert is not None:
            certs.append(cert)
    if args.emit_cert:
        Path(args.emit_cert).write_text(dump_certificates(certs), encoding="utf-8")
        print(f"wrote {len(certs)} certificate(s)", file=out)
    return code


def cmd_verify(args, out) -> int:
    reg = _load(args.file)
    data = json.loads(Path(args.cert).read_text(encoding="utf-8"))
    certs = data if isinstance(data, list) else [data]
    code = 0
    for cert in certs:
        rep = verify_certificate(cert, reg)
        status = "verified" if rep.ok else "REJECTED"
        print(f"certificate {cert.get('query_name', '?')}: {status}", file=out)
        for f in rep.failures:
            print(f"  failing: {f}", file=out)
        if not rep.ok:
            code = 1
    return code


def cmd_canon(args, out) -> int:
    out.write(serialize(_load(args.file)))
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not "inconclusive"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="frobpair", description="Exact Frobenius-pair decisions with certificates.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="run the queries of a definition file")
    run.add_argument("file")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--max-random-tries", type=int, default=MAX_RANDOM_TRIES)
    run.add_argument("--grid-threshold", type=int, default=GRID_THRESHOLD)
    run.add_argument("--emit-cert", metavar="PATH")
    run.add_argument("--query", action="append", metavar="NAME", help="run only this query (repeatable)")
    run.set_defaults(func=cmd_run)
    ver = sub.add_parser("verify", help="re-check certificates against a definition file")
    ver.add_argument("cert")
    ver.add_argument("file")
    ver.set_defaults(func=cmd_verify)
    can = sub.add_parser("canon", help="print the canonical serialization")
    can.add_argument("file")
    can.set_defaults(func=cmd_canon)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except DefinitionError as err:
        print(f"{getattr(args, 'file', '?')}:{err.line}:{err.col}: error: {err.msg}", file=sys.stderr)
    except HashMismatch as err:
        print(f"error: {err}", file=sys.stderr)
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
    return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
