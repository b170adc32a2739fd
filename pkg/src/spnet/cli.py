"""Command-line interface: one `spnet` entry point for every module.

JSON payloads go to stdout, human diagnostics to stderr.  Exit codes:
0 success, 1 malformed input, 2 semantic violation (cycle, not an
extension, not series-parallel), 3 size limit exceeded, 4 counterexample
found by `conjecture check` (kept distinct so sweeps can trap it).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import conjecture, extensions, msp, network, serialize, slowdown, spalgebra
from .errors import (MalformedInputError, SizeLimitExceeded, SpnetError)

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_SEMANTIC = 2
EXIT_SIZE = 3
EXIT_COUNTEREXAMPLE = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise _UsageError(message)


def _load_net(spec: str) -> tuple[network.ActivityNetwork, network.Workload | None]:
    """Network from a file path, '-' for stdin, or inline 'ns:d,w,degree'."""
    if spec.startswith("ns:"):
        try:
            d, w, deg = (int(x) for x in spec[3:].split(","))
        except ValueError:
            raise MalformedInputError(f"bad inline NS spec {spec!r}") from None
        return extensions.ns_network(extensions.NsSpec(d, w, deg)), None
    if spec == "-":
        return serialize.load_network(sys.stdin)
    try:
        with open(spec, encoding="utf-8") as fp:
            return serialize.load_network(fp)
    except OSError as exc:
        raise MalformedInputError(f"cannot read {spec}: {exc}") from None


def _need_workload(net, workload, override: str | None):
    if override is not None:
        with open(override, encoding="utf-8") as fp:
            doc = json.load(fp)
        values = doc["workload"] if isinstance(doc, dict) else doc
        return serialize.workload_from_doc(values, net.n)
    if workload is None:
        raise MalformedInputError(
            "no workload: supply one in the document or via --workload")
    return workload


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _build_parser() -> _Parser:
    top = _Parser(prog="spnet", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    net_cmd = sub.add_parser("net", help="validate or display networks")
    net_sub = net_cmd.add_subparsers(dest="subcommand", required=True)
    p = net_sub.add_parser("validate")
    p.add_argument("network")
    p = net_sub.add_parser("show")
    p.add_argument("network")
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("makespan", help="heaviest chain weight")
    p.add_argument("network")
    p.add_argument("--workload")

    sp_cmd = sub.add_parser("sp", help="series-parallel recognition")
    sp_sub = sp_cmd.add_subparsers(dest="subcommand", required=True)
    p = sp_sub.add_parser("check")
    p.add_argument("network")
    p = sp_sub.add_parser("decompose")
    p.add_argument("network")

    gen_cmd = sub.add_parser("gen", help="generate networks")
    gen_sub = gen_cmd.add_subparsers(dest="subcommand", required=True)
    p = gen_sub.add_parser("ns")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)

    ext_cmd = sub.add_parser("extend", help="construct extensions")
    ext_sub = ext_cmd.add_subparsers(dest="subcommand", required=True)
    p = ext_sub.add_parser("lc")
    p.add_argument("network")

    exts_cmd = sub.add_parser("extensions", help="enumerate extensions")
    exts_sub = exts_cmd.add_subparsers(dest="subcommand", required=True)
    p = exts_sub.add_parser("minimal-sp")
    p.add_argument("network")
    p.add_argument("--limit", type=int)

    p = sub.add_parser("slowdown", help="makespan ratio of an extension")
    p.add_argument("--base", required=True)
    p.add_argument("--extension", required=True)
    p.add_argument("--workload")

    p = sub.add_parser("adversary",
                       help="forced-triple adversarial slowdown report")
    p.add_argument("--base", required=True)
    p.add_argument("--extension", required=True)
    p.add_argument("--epsilon", default="1/10")

    conj_cmd = sub.add_parser("conjecture", help="4/3 bound verification")
    conj_sub = conj_cmd.add_subparsers(dest="subcommand", required=True)
    p = conj_sub.add_parser("check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", default="4/3")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", help="report file; doubles as resume checkpoint")

    msp_cmd = sub.add_parser("msp", help="minimum series-parallelisation")
    msp_sub = msp_cmd.add_subparsers(dest="subcommand", required=True)
    p = msp_sub.add_parser("solve")
    p.add_argument("network")
    p.add_argument("--method", choices=["brute", "bnb", "lc"], required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--workload")

    return top


def _run(args) -> int:
    if args.command == "net":
        net, workload = _load_net(args.network)
        if args.subcommand == "validate":
            _emit({"n": net.n, "edges": len(network.transitive_reduction(net)),
                   "closure_pairs": len(net.closure_pairs()), "valid": True})
        else:
            if args.dot:
                sys.stdout.write(serialize.to_dot(net, workload))
            else:
                _emit(serialize.network_to_doc(net, workload))
        return EXIT_OK

    if args.command == "makespan":
        net, workload = _load_net(args.network)
        t = _need_workload(net, workload, args.workload)
        _emit(serialize.format_rational(network.makespan(net, t)))
        return EXIT_OK

    if args.command == "sp":
        net, _ = _load_net(args.network)
        if args.subcommand == "check":
            witness = spalgebra.find_n_witness(net)
            _emit({"sp": witness is None,
                   "witness": None if witness is None
                   else [net.label(i) for i in witness]})
        else:
            expr = spalgebra.sp_decompose(net)
            _emit({"expression": spalgebra.render_sp_expr(expr)})
        return EXIT_OK

    if args.command == "gen":
        spec = extensions.NsSpec(args.depth, args.width, args.degree)
        _emit(serialize.network_to_doc(extensions.ns_network(spec)))
        return EXIT_OK

    if args.command == "extend":
        net, workload = _load_net(args.network)
        _emit(serialize.network_to_doc(extensions.lc_extension(net), workload))
        return EXIT_OK

    if args.command == "extensions":
        net, _ = _load_net(args.network)
        nets = extensions.minimal_sp_extensions(net, args.limit)
        _emit([serialize.network_to_doc(h) for h in nets])
        return EXIT_OK

    if args.command == "slowdown":
        base, workload = _load_net(args.base)
        ext, _ = _load_net(args.extension)
        t = _need_workload(base, workload, args.workload)
        report = slowdown.extension_report(base, ext, t)
        _emit(report.to_jsonable(base))
        return EXIT_OK

    if args.command == "adversary":
        base, _ = _load_net(args.base)
        ext, _ = _load_net(args.extension)
        eps = serialize.parse_rational(args.epsilon)
        report = slowdown.adversary_report(base, ext, eps)
        _emit(report.to_jsonable(base))
        return EXIT_OK

    if args.command == "conjecture":
        bound = serialize.parse_rational(args.bound)
        report = conjecture.check_conjecture(
            args.n, bound, jobs=args.jobs, checkpoint_path=args.report,
            log=lambda msg: print(msg, file=sys.stderr))
        payload = report.to_jsonable()
        if args.report:
            with open(args.report, "w", encoding="utf-8") as fp:
                json.dump(payload, fp, indent=2, sort_keys=True)
        _emit(payload)
        print(f"elapsed: {report.elapsed_seconds:.2f}s", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE if report.counterexample_found else EXIT_OK

    if args.command == "msp":
        net, workload = _load_net(args.network)
        t = _need_workload(net, workload, args.workload)
        solution = msp.solve(net, t, args.method, args.limit)
        payload = solution.to_jsonable()
        if spalgebra.is_series_parallel(solution.extension):
            expr = spalgebra.sp_decompose(solution.extension)
            payload["expression"] = spalgebra.render_sp_expr(expr)
        _emit(payload)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except SizeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (SpnetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
