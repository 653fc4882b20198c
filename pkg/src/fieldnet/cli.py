"""Command-line front door. JSON goes to stdout (or --out), diagnostics to stderr.

Exit codes: 0 success, 1 a yes/no query answered "no", 2 usage error,
3 capacity limit hit, 4 internal inconsistency. Every JSON document carries
"schema": 1 and is printed with sorted keys, so output is byte-deterministic.

The brute-force oracle size cap is read from FIELDNET_ORACLE_LIMIT.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Sequence

from . import criterion, lnc, netmodel, solvability, zn
from .errors import CapacityError, InconsistencyError
from .netmodel import NetworkParams

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAPACITY, EXIT_INCONSISTENT = 0, 1, 2, 3, 4
SCHEMA = 1


class _UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _params(args) -> NetworkParams:
    if args.omega is None or args.d is None:
        raise _UsageError("--omega and --d are both required")
    return NetworkParams(args.omega, tuple(args.d))


def _doc(**fields) -> dict:
    return {"schema": SCHEMA, **fields}


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
        return
    # write beside the target and rename, so an interrupted run leaves nothing half-written
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fieldnet-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# -- subcommands -----------------------------------------------------------------


def _export_network(net, fmt: str) -> str:
    if fmt == "dot":
        return netmodel.to_dot(net)
    return _dump(netmodel.to_json(net))


def cmd_construct(args):
    net = netmodel.build_general_network(_params(args), max_receivers=args.max_receivers)
    return _export_network(net, args.export), EXIT_OK


def cmd_construct_nq(args):
    net = netmodel.build_prescribed_qmin_network(args.q, complete=args.complete)
    return _export_network(net, args.export), EXIT_OK


def cmd_construct_comb(args):
    net = netmodel.build_combination_network(args.n, extended=args.extended)
    return _export_network(net, args.export), EXIT_OK


def _solvable_one(params: NetworkParams, q: int, oracle: bool, witness: bool) -> dict:
    report = solvability.solvable_closed_form(params, q)
    out = report.to_json()
    if oracle:
        brute = solvability.brute_force_solvable(params, q)
        if brute != report.solvable:
            raise InconsistencyError(f"closed form says {report.solvable}, oracle says {brute} at q={q}")
        out["oracle"] = brute
    if witness and report.solvable:
        w = lnc.construct_solution(params, q)
        net = netmodel.build_general_network(params)
        check = lnc.is_solution(net, lnc.sets_to_code(params, w, net))
        if not check:
            raise InconsistencyError(f"synthesized code fails at receivers {list(check.failing)}")
        out["witness"] = {**w.to_json(), "divisor": w.divisor, "shift": w.shift, "verified": True}
    return out


def cmd_solvable(args):
    params = _params(args)
    if len(args.q) == 1:
        out = _solvable_one(params, args.q[0], args.oracle, args.witness)
        return _dump(out), EXIT_OK if out["solvable"] else EXIT_NO
    if args.oracle or args.witness:
        docs = [_solvable_one(params, q, args.oracle, args.witness) for q in args.q]
    else:
        docs = [r.to_json() for r in solvability.scan(params, args.q, jobs=args.jobs)]
    return _dump(_doc(reports=docs)), EXIT_OK


def cmd_qrange(args):
    params = _params(args)
    rng = solvability.field_range(params)
    return _dump({**rng.to_json(), **params.to_json()}), EXIT_OK


def cmd_criterion(args):
    res = criterion.criterion_search(args.q, args.qprime)
    return _dump(res.to_json()), EXIT_OK if res.satisfied else EXIT_NO


def cmd_synthesize(args):
    order = args.order
    if order is None:
        res = criterion.criterion_search(args.q, args.qprime)
        if not res.satisfied:
            return _dump(res.to_json()), EXIT_NO
        order = res.valid_orders[0]
    elif not criterion.satisfies_star(args.q, args.qprime, order):
        return _dump(_doc(q=args.q, q_prime=args.qprime, d=order, satisfied=False)), EXIT_NO
    found = criterion.theorem3_network(args.q, args.qprime, order)
    return _dump(found.to_json()), EXIT_OK


def cmd_theorem4(args):
    return _dump(criterion.theorem4_instance(args.k).to_json()), EXIT_OK


def cmd_crosschar(args):
    plan = criterion.cross_char_plan(args.p, args.pprime)
    try:
        hits = criterion.discover_cross_char(args.p, args.pprime, max_bits=args.max_bits, max_hits=args.max_hits)
    except CapacityError as exc:
        exc.partial = _dump(_doc(plan=plan.to_json(), hits=[h.to_json() for h in exc.partial], complete=False))
        raise
    doc = _doc(plan=plan.to_json(), hits=[h.to_json() for h in hits], complete=True)
    return _dump(doc), EXIT_OK if hits else EXIT_NO


def cmd_cdbound(args):
    n, cards = args.n, args.cards
    doc = _doc(n=n, cards=list(cards), cd_bound=zn.cd_bound(n, cards))
    if args.exact:
        m = zn.exact_min_sumset(n, cards)
        doc["exact"] = {"size": m.size, "divisor": m.divisor, "witness": [sorted(s) for s in m.witness]}
    if args.brute:
        doc["brute"] = zn.brute_min_sumset(n, cards)
    return _dump(doc), EXIT_OK


def cmd_stats(args):
    if args.nq is not None:
        if args.omega is not None or args.d is not None:
            raise _UsageError("use either --nq or --omega/--d")
        q = args.nq
        built = {
            "prescribed": netmodel.build_prescribed_qmin_network(q),
            "prescribed-complete": netmodel.build_prescribed_qmin_network(q, complete=True),
            "combination": netmodel.build_combination_network(q + 1),
            "extended": netmodel.build_combination_network(q + 1, extended=True),
        }
        formulas = netmodel.table_sizes(q)
        doc = _doc(
            q=q,
            built={k: netmodel.size_stats(v).to_json() for k, v in built.items()},
            formulas={k: v.to_json() for k, v in formulas.items()},
        )
        return _dump(doc), EXIT_OK
    params = _params(args)
    net = netmodel.build_general_network(params)
    return _dump(_doc(**{**params.to_json(), **netmodel.size_stats(net).to_json()})), EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fieldnet", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for scans")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, func, help: str):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    def net_args(p, required: bool = True):
        p.add_argument("--omega", type=int, required=required)
        p.add_argument("--d", type=_int_list, required=required, metavar="D1,...,DW")

    def export_arg(p):
        p.add_argument("--export", choices=("json", "dot"), default="json")

    p = add("construct", cmd_construct, "build the general network")
    net_args(p)
    export_arg(p)
    p.add_argument("--max-receivers", type=int, default=netmodel.RECEIVER_LIMIT)

    p = add("construct-nq", cmd_construct_nq, "build the network with prescribed minimum field size")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--complete", action="store_true", help="include every maxflow-3 receiver")
    export_arg(p)

    p = add("construct-comb", cmd_construct_comb, "build the (n,2)-combination network")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--extended", action="store_true")
    export_arg(p)

    p = add("solvable", cmd_solvable, "decide linear solvability over GF(q)")
    net_args(p)
    p.add_argument("--q", type=_int_list, required=True, metavar="Q[,Q...]")
    p.add_argument("--oracle", action="store_true", help="cross-check with the brute-force sumset oracle")
    p.add_argument("--witness", action="store_true", help="synthesize and verify a linear solution")

    p = add("qrange", cmd_qrange, "smallest solvable and largest unsolvable field size")
    net_args(p)

    p = add("criterion", cmd_criterion, "subgroup orders of GF(q)^x passing the pair criterion")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--qprime", type=int, required=True)

    p = add("synthesize", cmd_synthesize, "network solvable over GF(q) but not GF(q')")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--qprime", type=int, required=True)
    p.add_argument("--order", type=int)

    p = add("theorem4", cmd_theorem4, "pair (4^k, 2*4^k) with its network")
    p.add_argument("--k", type=int, required=True)

    p = add("crosschar", cmd_crosschar, "search pairs across two characteristics")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--pprime", type=int, required=True)
    p.add_argument("--max-bits", type=int, default=64)
    p.add_argument("--max-hits", type=int, default=1)

    p = add("cdbound", cmd_cdbound, "lower bound and exact minimum sumset size in Z_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cards", type=_int_list, required=True, metavar="C1,...,CK")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--brute", action="store_true")

    p = add("stats", cmd_stats, "network sizes")
    p.add_argument("--nq", type=int, metavar="Q")
    net_args(p, required=False)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        text, code = args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fieldnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"fieldnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"fieldnet: capacity: {exc}", file=sys.stderr)
        if isinstance(exc.partial, str):
            _emit(exc.partial, args.out)
        return EXIT_CAPACITY
    except InconsistencyError as exc:
        print(f"fieldnet: inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    _emit(text, args.out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
