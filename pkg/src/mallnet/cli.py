"""Command-line entry point: ``mallnet <command> ...``.

Exit status is 0 when the input is accepted, 1 when it is well formed but
rejected, 2 when it cannot be parsed and 3 when an erasure runs past its
step budget.
"""
from __future__ import annotations

import argparse
import sys

from . import circuits, conflict_erasure, slice_nets
from .coherence import cotree
from .errors import (
    InvalidCircuit,
    InvalidLinking,
    MallnetError,
    NotANet,
    NotContractible,
    ParseError,
    RuleMismatch,
    StepLimitExceeded,
)
from .linking import detect_kind, format_conflict_net, parse_conflict_net
from .proofs import check_proof, parse_proof, random_proof, render_proof
from .rewrite import ERROR
from .translate import to_circuit, to_conflict_net, to_slice_net

OK, REJECTED, MALFORMED, BUDGET = 0, 1, 2, 3


class Rejected(Exception):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_proof(path):
    p = parse_proof(_read(path))
    try:
        check_proof(p)
    except RuleMismatch as e:
        raise Rejected(f"invalid proof: {e}") from None
    return p


def load_net(path):
    """``(kind, net)`` for a net file of any kind."""
    text = _read(path)
    kind = detect_kind(text)
    if kind == "conflict":
        return kind, parse_conflict_net(text)
    if kind == "circuit":
        return kind, circuits.parse_circuit(text)
    return kind, slice_nets.parse_slice_net(text)


# -- commands ---------------------------------------------------------------


def cmd_check_proof(args):
    p = _load_proof(args.file)
    print(f"proof OK: {check_proof(p)}")
    return OK


def cmd_translate(args):
    p = _load_proof(args.proof)
    if args.to == "conflict":
        text = format_conflict_net(to_conflict_net(p))
    elif args.to == "circuit":
        text = circuits.format_circuit(to_circuit(p))
    else:
        text = slice_nets.format_slice_net(to_slice_net(p))
    _write(args.output, text)
    return OK


def _verdict(kind, net):
    if kind == "conflict":
        return conflict_erasure.net_verdict(net)
    if kind == "slices":
        return slice_nets.net_verdict(net)
    msg = circuits.circuit_problem(net)
    if msg:
        return False, "invalid circuit: " + msg
    if circuits.is_boxless_net(net):
        return True, f"boxless net: OK ({len(net.nodes)} nodes)"
    return False, "stuck: no ready node"


def cmd_check_net(args):
    kind, net = load_net(args.file)
    ok, message = _verdict(kind, net)
    print(message)
    return OK if ok else REJECTED


def cmd_sequentialize(args):
    kind, net = load_net(args.file)
    try:
        if kind == "conflict":
            p = conflict_erasure.sequentialize(net)
        elif kind == "circuit":
            p = circuits.sequentialize_circuit(net)
        else:
            p = slice_nets.sequentialize_slice_net(net)
    except (NotANet, InvalidCircuit) as e:
        raise Rejected(str(e)) from None
    _write(args.output, render_proof(p) + "\n")
    return OK


def cmd_erase(args):
    kind, net = load_net(args.file)
    if kind == "conflict":
        msg = conflict_erasure.slicing_problem(net)
        if msg:
            raise Rejected("not a slicing: " + msg)
        form, trace = conflict_erasure.normalize(frozenset({net}))
        line = lambda t: t.text()
    elif kind == "slices":
        msg = slice_nets.linking_set_problem(net)
        if msg:
            raise Rejected("not a linking-set: " + msg)
        form, trace = slice_nets.normalize_ls(frozenset({net}))
        line = lambda t: t.text()
    else:
        circuits.validate_circuit(net)
        form, trace = circuits.normalize_circuits(frozenset({net}))
        line = circuits.circuit_trace_line
    if args.trace:
        for t in trace:
            print(t.json() if args.trace == "json" else line(t))
    status = OK
    if form == frozenset():
        print("∅")
    elif form is ERROR:
        print("ERROR")
        status = REJECTED
    else:
        print(f"stuck: {len(form)} item{'s' if len(form) != 1 else ''} left")
        status = REJECTED
    if args.all_orders:
        forms = _all_orders(kind, net)
        if len(forms) == 1:
            print("confluent: unique normal form")
        else:
            print(f"not confluent: {len(forms)} normal forms")
            status = REJECTED
    return status


def _all_orders(kind, net):
    start = frozenset({net})
    if kind == "conflict":
        return conflict_erasure.normal_forms(start)
    if kind == "slices":
        return slice_nets.normal_forms_ls(start)
    seen, todo, forms = {start}, [start], set()
    while todo:
        s = todo.pop()
        nxt = circuits.circuit_successors(s)
        if not nxt:
            forms.add(s)
        for t in nxt - seen:
            seen.add(t)
            todo.append(t)
    return forms


def cmd_cotree(args):
    kind, net = load_net(args.file)
    if kind != "conflict":
        raise Rejected(f"cotree needs a conflict net, got a {kind} net")
    try:
        print(cotree(net.space))
    except NotContractible as e:
        raise Rejected(str(e)) from None
    return OK


def cmd_gen(args):
    p = random_proof(args.seed, args.rules)
    _write(args.output, render_proof(p) + "\n")
    return OK


# -- driver --------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="mallnet", description="MALL proofs and proof nets.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-proof", help="check a proof and print its conclusion")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_proof)

    s = sub.add_parser("translate", help="translate a proof to a net")
    s.add_argument("--to", choices=("conflict", "circuit", "slices"), required=True)
    s.add_argument("proof")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("check-net", help="decide whether a net file is correct")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_net)

    s = sub.add_parser("sequentialize", help="extract a proof from a correct net")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_sequentialize)

    s = sub.add_parser("erase", help="run erasure and report the normal form")
    s.add_argument("file")
    s.add_argument("--trace", nargs="?", const="text", choices=("text", "json"))
    s.add_argument("--all-orders", action="store_true", help="explore every erasure order")
    s.set_defaults(func=cmd_erase)

    s = sub.add_parser("cotree", help="print the cotree of a conflict net's links")
    s.add_argument("file")
    s.set_defaults(func=cmd_cotree)

    s = sub.add_parser("gen", help="generate a random proof")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--rules", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return MALFORMED
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return MALFORMED
    except Rejected as e:
        print(str(e), file=sys.stderr)
        return REJECTED
    except (InvalidCircuit, InvalidLinking) as e:
        print(str(e), file=sys.stderr)
        return REJECTED
    except StepLimitExceeded as e:
        print(f"internal error: {e}", file=sys.stderr)
        return BUDGET
    except MallnetError as e:
        print(str(e), file=sys.stderr)
        return REJECTED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
