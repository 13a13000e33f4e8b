"""Command-line front end.

Exit codes: 0 success, 1 a verification claim failed, 2 usage error,
3 malformed scenario/family/file, 4 scale guard.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bell, verify
from .polytope import HPolytope, VPolytope, facet_enum, membership, vertex_enum
from .polytope.io import read_polytope, write_hrep, write_vrep
from .quantum import born_behaviour, born_probabilities, ch_demo_setup, parse_setup, sequential_behaviour
from .scenario import Behaviour, Scenario, format_fraction
from .verify import ScaleError, check_scale

EXIT_FAIL, EXIT_USAGE, EXIT_SPEC, EXIT_SCALE = 1, 2, 3, 4


class SpecError(ValueError):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise SpecError(f"expected a comma-separated integer list, got {text!r}") from exc


def scenario_from_args(args) -> Scenario:
    if args.alice_outcomes or args.bob_outcomes:
        base = Scenario.parse(args.scenario) if args.scenario else None
        alice = _int_list(args.alice_outcomes) if args.alice_outcomes else base.alice_outcomes if base else None
        bob = _int_list(args.bob_outcomes) if args.bob_outcomes else base.bob_outcomes if base else None
        if alice is None or bob is None:
            raise SpecError("give --scenario or both --alice-outcomes and --bob-outcomes")
        return Scenario(alice, bob)
    if not args.scenario:
        raise SpecError("a scenario is required (--scenario MA,NA,MB,NB)")
    return Scenario.parse(args.scenario)


def parse_family(text: str) -> tuple[str, tuple]:
    name, _, arg = text.partition(":")
    if name in ("ld", "ns", "lf") and not arg:
        return name, ()
    if name == "pd":
        ix, sep, iy = arg.partition(";")
        if not sep:
            raise SpecError("pd family is written pd:IX;IY, e.g. 'pd:0,1;'")
        return name, (frozenset(_int_list(ix)), frozenset(_int_list(iy)))
    if name == "sw":
        try:
            rounds = int(arg)
        except ValueError:
            raise SpecError("sw family is written sw:R") from None
        if rounds < 1:
            raise SpecError("sw needs R >= 1")
        return name, (rounds,)
    raise SpecError(f"unknown family {text!r} (ld, ns, pd:IX;IY, lf, sw:R)")


def build_family(args) -> tuple[Scenario, VPolytope]:
    name, params = parse_family(args.family)
    if name == "sw":
        (rounds,) = params
        if args.alice_outcomes:
            alph = _int_list(args.alice_outcomes)
            if len(alph) != rounds + 1:
                raise SpecError(f"sw:{rounds} needs {rounds + 1} Alice alphabets (friend rounds, then final)")
            friend, final = alph[:rounds], alph[rounds]
        else:
            na = Scenario.parse(args.scenario).alice_outcomes[0] if args.scenario else 2
            friend, final = na, na
        if args.bob_outcomes:
            bob = _int_list(args.bob_outcomes)
        elif args.scenario:
            bob = Scenario.parse(args.scenario).bob_outcomes
        else:
            bob = (2, 2)
        s = bell.sw_scenario(rounds, friend, final, bob)
        check_scale(s.dim)
        return s, bell.sw_vertices(rounds, friend, final, bob)
    s = scenario_from_args(args)
    check_scale(s.dim)
    if name == "ld":
        return s, bell.ld_vertices(s)
    if name == "ns":
        return s, bell.ns_vertices(s)
    if name == "lf":
        return s, bell.lf_vertices(s)
    ix, iy = params
    return s, bell.pd_vertices(bell.PDSpec(s, ix, iy))


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _ch_extremes(s: Scenario, points) -> str | None:
    if s.alice_inputs < 2 or s.bob_inputs < 2 or s.alice_outcomes[:2] != (2, 2) or s.bob_outcomes[:2] != (2, 2):
        return None
    row = bell.ch_row(s)
    values = [row.evaluate(p) for p in points]
    return f"CH expression over vertices: min {format_fraction(min(values))}, max {format_fraction(max(values))}"


def cmd_vertices(args) -> int:
    s, v = build_family(args)
    _emit(write_vrep(v), args.output)
    if args.summary:
        print(f"scenario: {s.header()}", file=sys.stderr)
        print(f"vertices: {len(v)}", file=sys.stderr)
        ext = _ch_extremes(s, v.vertices)
        if ext:
            print(ext, file=sys.stderr)
    return 0


def _load(path: str):
    try:
        return read_polytope(Path(path).read_text())
    except OSError as exc:
        raise SpecError(str(exc)) from exc


def cmd_facets(args) -> int:
    if args.input:
        v = _load(args.input)
        if not isinstance(v, VPolytope):
            raise SpecError("facets needs a V-representation")
        check_scale(v.dim)
        s = None
    else:
        s, v = build_family(args)
    h = facet_enum(v)
    _emit(write_hrep(h), args.output)
    if args.summary:
        print(f"facets: {len(h.inequalities)}, equalities: {len(h.equalities)}", file=sys.stderr)
        if s is not None:
            ext = _ch_extremes(s, v.vertices)
            if ext:
                print(ext, file=sys.stderr)
    return 0


def _behaviour(path: str) -> Behaviour:
    try:
        return Behaviour.from_text(Path(path).read_text())
    except OSError as exc:
        raise SpecError(str(exc)) from exc


def cmd_member(args) -> int:
    p = _behaviour(args.behaviour)
    if args.vrep:
        v = _load(args.vrep)
        if not isinstance(v, VPolytope):
            raise SpecError("--vrep must hold a V-representation")
    else:
        if not (args.scenario or args.alice_outcomes):
            args.alice_outcomes = ",".join(map(str, p.scenario.alice_outcomes))
            args.bob_outcomes = ",".join(map(str, p.scenario.bob_outcomes))
        _, v = build_family(args)
    facets = facet_enum(v).inequalities if args.sharpen else None
    res = membership(p, v, facets)
    lines = []
    if res.inside:
        lines.append("INSIDE")
        lines += [f"{i} {format_fraction(w)}" for i, w in enumerate(res.weights) if w]
    else:
        lines.append("OUTSIDE")
        lines.append(" ".join(format_fraction(c) for c in res.separator.row))
        lines.append(f"value {format_fraction(res.separator.evaluate(p.coords))}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_eval(args) -> int:
    p = _behaviour(args.behaviour)
    if args.hrep:
        h = _load(args.hrep)
        if not isinstance(h, HPolytope):
            raise SpecError("--hrep must hold an H-representation")
        rows = list(h.equalities) + list(h.inequalities)
    else:
        rows = [bell.ch_row(p.scenario)]
    out = [format_fraction(bell.evaluate_inequality(r, p)) for r in rows]
    _emit("\n".join(out) + "\n", args.output)
    return 0


def cmd_quantum(args) -> int:
    if args.action == "ch-demo":
        state, alice, bob = ch_demo_setup()
        s, values = born_probabilities(state, alice, bob)
        value = bell.ch_row(s).evaluate_float(values)
        print(f"CH value {value:.16f}")
        print(f"(sqrt(2)-1)/2 = {(2 ** 0.5 - 1) / 2:.16f}")
        if args.output:
            Path(args.output).write_text(born_behaviour(state, alice, bob).to_text())
        return 0
    if not args.setup:
        raise SpecError("quantum born needs --setup FILE")
    setup = parse_setup(Path(args.setup).read_text())
    _emit(born_behaviour(setup.state, setup.alice, setup.bob).to_text(), args.output)
    return 0


def cmd_sequential(args) -> int:
    setup = parse_setup(Path(args.setup).read_text())
    _emit(sequential_behaviour(setup.protocol()).to_text(), args.output)
    return 0


def cmd_verify(args) -> int:
    claim = args.claim
    if claim == "theorem5":
        reports = [verify.verify_theorem5(args.R, _int_list(args.bob), jobs=args.jobs)]
    elif claim == "woodhead":
        s = Scenario.parse(args.scenario or "2,2,2,2")
        reports = [verify.verify_woodhead(s, args.k, _int_list(args.det_bob), jobs=args.jobs)]
    elif claim == "lf-gap":
        reports = [verify.verify_lf_gap(args.M)]
    elif claim == "quantum":
        reports = [verify.verify_quantum_violation(sequential=args.sequential)]
    else:
        reports = verify.verify_all()
    ok = True
    for i, rep in enumerate(reports):
        witness = "-"
        if args.witness_dir:
            d = Path(args.witness_dir)
            d.mkdir(parents=True, exist_ok=True)
            path = d / f"{rep.claim_id}-{i}.json"
            path.write_text(rep.to_json())
            witness = str(path)
        sys.stdout.write(rep.to_text(timing=False))
        print(f"{rep.claim_id}: {rep.wall_time:.3f} s", file=sys.stderr)
        print(rep.summary_line(witness))
        ok &= rep.passed
    return 0 if ok else EXIT_FAIL


def cmd_convert(args) -> int:
    poly = _load(args.input)
    check_scale(poly.dim)
    if isinstance(poly, VPolytope):
        _emit(write_hrep(facet_enum(poly)), args.output)
    else:
        _emit(write_vrep(vertex_enum(poly)), args.output)
    return 0


def _scenario_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="homogeneous scenario MA,NA,MB,NB")
    p.add_argument("--alice-outcomes", help="outcome count per Alice input, e.g. 2,2,3")
    p.add_argument("--bob-outcomes", help="outcome count per Bob input")
    p.add_argument("--family", default="ld", help="ld | ns | pd:IX;IY | lf | sw:R (0-based inputs)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lfpoly", description=__doc__.splitlines()[0])
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for membership checks")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("vertices", help="emit the V-representation of a polytope family")
    _scenario_opts(p)
    p.add_argument("-o", "--output")
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("facets", help="emit the H-representation of a family or a V-rep file")
    _scenario_opts(p)
    p.add_argument("--input", help="V-representation file")
    p.add_argument("-o", "--output")
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("member", help="decide membership of a behaviour, with a certificate")
    _scenario_opts(p)
    p.add_argument("--behaviour", required=True)
    p.add_argument("--vrep", help="V-representation file instead of a family")
    p.add_argument("--sharpen", action="store_true", help="report the most violated facet as the separator")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("eval", help="evaluate H-rep rows (default: the CH expression) on a behaviour")
    p.add_argument("--behaviour", required=True)
    p.add_argument("--hrep")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("quantum", help="Born-rule behaviours")
    p.add_argument("action", choices=["ch-demo", "born"])
    p.add_argument("--setup")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("sequential", help="simulate the sequential friend protocol")
    p.add_argument("--setup", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sequential)

    p = sub.add_parser("verify", help="run a verification claim")
    p.add_argument("claim", choices=["theorem5", "woodhead", "lf-gap", "quantum", "all"])
    p.add_argument("--R", type=int, default=1)
    p.add_argument("--bob", default="2,2", help="Bob outcome counts per input")
    p.add_argument("--scenario")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--det-bob", default="")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--sequential", action="store_true")
    p.add_argument("--witness-dir")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="V-rep to H-rep or back")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ScaleError as exc:
        print(f"lfpoly: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (ValueError, OSError) as exc:
        print(f"lfpoly: {exc}", file=sys.stderr)
        return EXIT_SPEC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
