"""Command line interface.

Subcommands: check, reduce, unfold, sem, translate, simulate.  Exit codes:
0 success, 1 criterion failure, 2 parse/validation error, 3 fuel exhausted.
The environment variable PLLK_FUEL overrides reduction fuel defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from pllk import checkers, cutelim, proofcore, proofio, relsem, specs, translate
from pllk.relsem import RAtom, RMSet, RPair, RStar, Web, sort_key
from pllk.sexpr import SexprError

CRITERIA = {
    "wp": checkers.check_weak_progressing,
    "p": checkers.check_progressing,
    "fe": checkers.check_finitely_expandable,
}


def _load(path):
    with open(path) as fh:
        return proofio.parse_proof(fh.read())


def _emit(node, path):
    text = proofio.print_proof(node) + "\n"
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _addr(text):
    if text in ("e", ""):
        return ()
    return tuple(int(c) for c in text)


def _addr_str(addr):
    return "".join(map(str, addr)) or "e"


def _fuel(default=None):
    env = os.environ.get("PLLK_FUEL")
    return int(env) if env else default


def cmd_check(args):
    try:
        d = _load(args.file)
    except (SexprError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    rep = proofcore.validate(d, args.system)
    print(f"validity[{args.system}]: {'ok' if rep else rep}")
    if not rep:
        return 2
    if args.emit_dot:
        _emit_dot(d, args.emit_dot)
    bad = False
    wanted = [c for c in (args.criteria or "").split(",") if c]
    for c in wanted:
        if c in CRITERIA:
            r = CRITERIA[c](d)
            print(f"{c}: {r!r}")
            bad = bad or not r.holds
        elif c in ("reg", "wreg"):
            reg, wreg = checkers.check_regularity(d)
            r = reg if c == "reg" else wreg
            print(f"{c}: {r!r}")
            bad = bad or not r.holds
        else:
            print(f"unknown criterion {c!r}", file=sys.stderr)
            return 2
    return 1 if bad else 0


def cmd_reduce(args):
    try:
        d = _load(args.file)
    except (SexprError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    fuel = _fuel(args.fuel)
    try:
        if proofcore.is_open_derivation(d):
            if args.trace:
                _print_trace(cutelim.run_trace(d, 10_000))
            out = cutelim.normalize_finite(d, fuel)
        else:
            if args.trace:
                _print_trace(cutelim.run_trace(d, args.trace_steps))
            out = cutelim.reduce_stream(d, args.height, fuel=fuel)
    except cutelim.FuelExhausted as e:
        print(f"fuel exhausted: {e}", file=sys.stderr)
        if e.best is not None:
            _emit(e.best, args.emit)
        return 3
    _emit(out, args.emit)
    return 0


def _print_trace(trace):
    for idx, (r, deriv) in enumerate(trace.steps):
        m = cutelim.measure(deriv)
        print(f"step {idx}: {r.kind} @ {_addr_str(r.addr)}; "
              f"measure=({m.ncp},{m.size},{m.hcut})")


def cmd_unfold(args):
    try:
        d = _load(args.file)
    except (SexprError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    _emit(specs.unfold(d, args.depth), args.emit)
    return 0


def _parse_bases(text):
    bases = {}
    for part in text.split(","):
        if not part:
            continue
        name, _, num = part.partition("=")
        bases[name] = tuple(f"{name.lower()}{i}" for i in range(int(num)))
    return Web(bases)


def _to_json(v):
    if isinstance(v, RAtom):
        return v.name
    if isinstance(v, RStar):
        return "*"
    if isinstance(v, RPair):
        return ["pair", _to_json(v.left), _to_json(v.right)]
    if isinstance(v, RMSet):
        return ["mset"] + [_to_json(x) for x in v.items]
    raise TypeError(v)


def cmd_sem(args):
    try:
        d = _load(args.file)
    except (SexprError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    web = _parse_bases(args.base)
    if not proofcore.is_open_derivation(d):
        d = specs.unfold(d, args.unfold)
    out = relsem.interp_trunc(d, args.trunc, web)
    elems = sorted(out, key=lambda t: tuple(sort_key(v) for v in t))
    payload = [[_to_json(v) for v in t] for t in elems]
    if args.emit_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for t in payload:
            print(t)
    return 0


def cmd_translate(args):
    try:
        d = _load(args.file)
    except (SexprError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    try:
        if args.to == "pllinf":
            if proofcore.validate(d, "pll"):
                out = translate.pll_to_pllinf(d)
            else:
                out = translate.nupll_to_pllinf(d)
        elif args.to == "mell":
            out = translate.pll_to_mell(d)
        else:
            out = translate.finitize(d)
    except (proofcore.ProofError, translate.NotWeaklyProgressing) as e:
        print(f"translation error: {e}", file=sys.stderr)
        return 2
    _emit(out, args.emit)
    return 0


def cmd_simulate(args):
    try:
        d = _load(args.file)
    except (SexprError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    addr = _addr(args.redex)
    wanted = [r for r in cutelim.redexes(d)
              if r.addr == addr and r.kind.startswith("fp")]
    if not wanted:
        print(f"no fp redex at {args.redex}", file=sys.stderr)
        return 2
    trace = translate.simulate_square(d, wanted[0])
    for idx, (r, deriv) in enumerate(trace.steps):
        (m, dh) = translate.measure_mell(deriv)
        print(f"step {idx}: {r.kind} @ {_addr_str(r.addr)}; m={m} d={dh}")
    return 0


def _emit_dot(node, path):
    lines = ["digraph proof {"]
    for addr, n in proofcore.iter_nodes(node):
        nid = "n" + ("".join(map(str, addr)) or "e")
        label = n.kind
        lines.append(f'  {nid} [label="{label}"];')
        if addr:
            pid = "n" + ("".join(map(str, addr[:-1])) or "e")
            lines.append(f"  {pid} -> {nid};")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="pllk")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="validate and run global criteria")
    p.add_argument("file")
    p.add_argument("--system", default="pllinf",
                   choices=sorted(proofcore.SYSTEMS))
    p.add_argument("--criteria", default="",
                   help="comma list from wp,p,fe,reg,wreg")
    p.add_argument("--emit-dot", default=None,
                   help="write the proof graph in dot format")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("reduce", help="normalize or stream-reduce")
    p.add_argument("file")
    p.add_argument("--height", type=int, default=4)
    p.add_argument("--fuel", type=int, default=None)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--trace-steps", type=int, default=32)
    p.add_argument("--emit", default=None)
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("unfold", help="finite approximation of a spec")
    p.add_argument("file")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--emit", default=None)
    p.set_defaults(fn=cmd_unfold)

    p = sub.add_parser("sem", help="relational interpretation")
    p.add_argument("file")
    p.add_argument("--base", required=True, help="e.g. X=2,Y=1")
    p.add_argument("--trunc", type=int, required=True)
    p.add_argument("--unfold", type=int, default=8)
    p.add_argument("--emit-json", action="store_true")
    p.set_defaults(fn=cmd_sem)

    p = sub.add_parser("translate", help="pllinf / mell / pll images")
    p.add_argument("file")
    p.add_argument("--to", required=True, choices=["pllinf", "mell", "pll"])
    p.add_argument("--emit", default=None)
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("simulate", help="replay a PLL step in MELL")
    p.add_argument("file")
    p.add_argument("--redex", required=True, help="address digits, e for root")
    p.set_defaults(fn=cmd_simulate)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
