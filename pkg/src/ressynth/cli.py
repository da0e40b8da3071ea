"""Command-line front end.

Every command prints one JSON report on stdout; diagnostics go to stderr.
Exit status: 0 positive verdict, 1 negative verdict, 2 usage error,
3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .attack import AttackError, all_enable_attacker
from .automata import AutomatonError
from .encoding import Encoder, emit_dimacs, emit_qdimacs, emit_varmap
from .encoding.cnf import CnfBuilder
from .encoding.formula import conj
from .instance import InstanceError
from .io import InstanceParseError, parse_instance, supervisor_file, write_supervisor
from .sat import SolverConfig, SolverError
from .solve import bound_schedule, find_attacker
from .supervision import SupervisorError, build_obfuscation_bounds, check_range_control, validate_supervisor

EXIT_POSITIVE, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3

INPUT_ERRORS = (InstanceParseError, InstanceError, AutomatonError, AttackError, SupervisorError)


class UsageError(Exception):
    pass


def _note(msg):
    print(msg, file=sys.stderr)


def _load(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    inst = parse_instance(text)
    for line in inst.notes:
        _note(line)
    return inst


def _supervisor(args, file):
    if args.supervisor:
        other = _load(args.supervisor)
        sup = other.supervisor
        if tuple(sup.alphabet) != tuple(file.alphabet):
            raise InstanceError("supervisor file uses a different alphabet")
    else:
        sup = file.supervisor
    bad = validate_supervisor(sup, file.control)
    if bad:
        raise SupervisorError("; ".join(map(str, bad)))
    return sup


def _config(args):
    return SolverConfig(command=args.solver, timeout=args.timeout)


def _report(command, verdict, **extra):
    out = {"command": command, "verdict": verdict}
    out.update(extra)
    return out


def _outcome_report(command, outcome, start, outputs):
    s = outcome.stats
    rep = _report(command, "found" if outcome.found else "not-found", n=outcome.n, m=outcome.m,
                  iterations=s.iterations, sat_calls=s.sat_calls,
                  per_bound=[{"n": n, "verdict": v, "sat_calls": c} for n, v, c in s.per_bound],
                  seconds=round(time.monotonic() - start, 4), outputs=outputs)
    if outcome.found:
        rep["supervisor"] = write_supervisor(outcome.supervisor)
    return rep


def _synthesize(args, inst, command):
    start = time.monotonic()
    outputs = []
    if args.method == "qbf-export":
        if not args.qdimacs:
            raise UsageError("--method qbf-export needs --qdimacs PATH")
        qbf, vm = Encoder(inst).assemble_resilient_qbf()
        Path(args.qdimacs).write_text(emit_qdimacs(qbf))
        Path(args.qdimacs + ".map").write_text(emit_varmap(vm, inst.observations))
        outputs += [args.qdimacs, args.qdimacs + ".map"]
        method = "direct"  # the exported formula is for external solvers; decide it ourselves too
    else:
        method = args.method
    n_max = args.n_max if args.n_max is not None else inst.n
    if n_max < inst.n:
        raise UsageError("--n-max is below --n")
    outcome = bound_schedule(inst, n_max, method=method, config=_config(args))
    if outcome.found and args.output:
        Path(args.output).write_text(supervisor_file(outcome.supervisor))
        outputs.append(args.output)
    rep = _outcome_report(command, outcome, start, outputs)
    return rep, EXIT_POSITIVE if outcome.found else EXIT_NEGATIVE


def cmd_synthesize(args):
    file = _load(args.instance)
    inst = file.to_instance(n=args.n, m=args.m)
    return _synthesize(args, inst, "synthesize")


def cmd_obfuscate(args):
    file = _load(args.instance)
    ref = _supervisor(args, file)
    file.require("plant", "damage")
    lower, upper = build_obfuscation_bounds(ref, file.automata["plant"])
    file.automata["lower"], file.automata["upper"] = lower, upper
    inst = file.to_instance(n=args.n, m=args.m)
    return _synthesize(args, inst, "obfuscate")


def cmd_verify(args):
    start = time.monotonic()
    file = _load(args.instance)
    inst = file.to_instance(m=args.m)
    sup = _supervisor(args, file)
    in_range = check_range_control(sup, inst.plant, inst.lower, inst.upper)
    atk = find_attacker(sup, inst, m=args.m)
    ok = in_range and atk is None
    rep = _report("verify", "holds" if ok else "violated", m=args.m, range_control=in_range,
                  attacker=atk.describe() if atk else "none", seconds=round(time.monotonic() - start, 4))
    return rep, EXIT_POSITIVE if ok else EXIT_NEGATIVE


def cmd_attack(args):
    start = time.monotonic()
    file = _load(args.instance)
    inst = file.to_instance(m=args.m)
    sup = _supervisor(args, file)
    atk = find_attacker(sup, inst, m=args.m, max_steps=args.max_steps, general=args.general, config=_config(args))
    rep = _report("attack", "violated" if atk else "holds", m=args.m,
                  attacker=atk.describe() if atk else "none", seconds=round(time.monotonic() - start, 4))
    return rep, EXIT_NEGATIVE if atk else EXIT_POSITIVE


def cmd_check(args):
    file = _load(args.instance)
    inst = file.to_instance()
    sup = _supervisor(args, file)
    ok = check_range_control(sup, inst.plant, inst.lower, inst.upper)
    return _report("check", "holds" if ok else "violated"), EXIT_POSITIVE if ok else EXIT_NEGATIVE


def cmd_encode(args):
    file = _load(args.instance)
    inst = file.to_instance(n=args.n, m=args.m)
    enc = Encoder(inst)
    if args.format == "qdimacs":
        qbf, vm = enc.assemble_resilient_qbf()
        text = emit_qdimacs(qbf)
        nv, nc = qbf.matrix.num_vars, len(qbf.matrix.clauses)
    else:
        b = CnfBuilder(enc.varmap.copy(), extend=True)
        b.add(conj(enc.synthesis_base(), enc.build_safety(all_enable_attacker(inst.attack, inst.observations))))
        cnf, vm = b.cnf(), b.varmap
        text = emit_dimacs(cnf)
        nv, nc = cnf.num_vars, len(cnf.clauses)
    Path(args.output).write_text(text)
    Path(args.output + ".map").write_text(emit_varmap(vm, inst.observations))
    outputs = [args.output, args.output + ".map"]
    rep = _report("encode", "holds", format=args.format, n=args.n, m=args.m, variables=nv, clauses=nc,
                  outputs=outputs)
    return rep, EXIT_POSITIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ressynth", description="Bounded synthesis of attack-resilient supervisors.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, bounds=True, sup=False):
        sp.add_argument("instance", help="instance file")
        if bounds:
            sp.add_argument("--n", type=int, default=1, help="supervisor states")
        sp.add_argument("--m", type=int, default=1, help="attacker states")
        if sup:
            sp.add_argument("--supervisor", help="file with a supervisor block (default: the instance's own)")
        sp.add_argument("--solver", help="external SAT solver command (DIMACS on stdin)")
        sp.add_argument("--timeout", type=float, default=60.0, help="seconds per SAT call")

    for name, fn, sup in (("synthesize", cmd_synthesize, False), ("obfuscate", cmd_obfuscate, True)):
        sp = sub.add_parser(name)
        common(sp, sup=sup)
        sp.add_argument("--method", choices=["direct", "cegis", "qbf-export"], default="direct")
        sp.add_argument("--n-max", type=int, help="raise n up to this bound until a supervisor is found")
        sp.add_argument("--qdimacs", help="where --method qbf-export writes the formula")
        sp.add_argument("-o", "--output", help="write the supervisor here")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("verify")
    common(sp, bounds=False, sup=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("attack")
    common(sp, bounds=False, sup=True)
    sp.add_argument("--max-steps", type=int, help="run length bound for --general")
    sp.add_argument("--general", action="store_true", help="symbolic search over m-state attackers")
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("encode")
    common(sp)
    sp.add_argument("--format", choices=["dimacs", "qdimacs"], default="qdimacs")
    sp.add_argument("-o", "--output", required=True, help="formula file; a variable map goes to <output>.map")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("check")
    common(sp, bounds=False, sup=True)
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_POSITIVE
    if getattr(args, "n", 1) < 1 or args.m < 1:
        _note("error: bounds must be at least 1")
        return EXIT_USAGE
    try:
        report, code = args.func(args)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except INPUT_ERRORS as exc:
        _note(f"invalid input: {exc}")
        return EXIT_INVALID
    except SolverError as exc:
        _note(f"solver error: {exc}")
        return EXIT_USAGE
    print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
