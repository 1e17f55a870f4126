"""Command line: ``defcsp {solve,orbits,certify,export-dimacs,export-dot} FILE``.

Exit codes: ``solve`` 0 = SAT, 1 = UNSAT; ``certify`` 0 = verified
certificate, 1 = none within the pool bound; 2 = any error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .certificates import certificate_json, find_certificate, verify
from .csp_model import ground, to_dot, vertex_label
from .defsets import orbits
from .dsl import DslError, load
from .finite_solver import DEFAULT_BRUTE_BOUND, encode_tsc, to_dimacs
from .orbit_solver import decide, solution_json

EQUALITY_NOTE = ("note: equality atoms are decided over (Q,<); reported orbits refine "
                 "the equality-atom orbits\n")


def _emit(text: str, path: str | None, out):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_solve(args, out, err) -> int:
    f = load(args.file)
    inst = f.instance
    if inst.atoms == "equality":
        err.write(EQUALITY_NOTE)
    sol = decide(inst)
    _emit(solution_json(inst, sol), args.json, out)
    return 0 if sol is not None else 1


def cmd_orbits(args, out, err) -> int:
    inst = load(args.file).instance
    listing = orbits(inst.variables)
    if args.json:
        doc = [{"builder": o.builder, "orbit": str(o.otype)} for o in listing]
        _emit(json.dumps(doc, indent=2) + "\n", args.json, out)
    else:
        out.write("".join(f"{o}\n" for o in listing))
    return 0


def cmd_certify(args, out, err) -> int:
    f = load(args.file)
    inst = f.instance
    max_pool = args.max_pool if args.max_pool is not None else f.options.get("max_pool", 6)
    bound = args.brute_bound if args.brute_bound is not None else f.options.get("brute_bound", DEFAULT_BRUTE_BOUND)
    cert = find_certificate(inst, max_pool, bound)
    if cert is None:
        _emit(certificate_json(None), args.json, out)
        return 1
    ok = verify(cert, inst, bound)
    _emit(certificate_json(cert, ok), args.json, out)
    if args.dot:
        _emit(cert.to_dot(), args.dot, out)
    if args.json:
        out.write(f"certificate: pool size {len(cert.pool)}, {len(cert.ground.vertices)} vertices, "
                  f"verified={ok}\n")
    if not ok:
        raise RuntimeError("certificate failed independent verification")
    return 0


def cmd_export_dimacs(args, out, err) -> int:
    inst = load(args.file).instance
    g = ground(inst, range(1, args.pool + 1))
    cnf = encode_tsc(g, inst.domain)
    _emit(to_dimacs(cnf, [vertex_label(v) for v in g.vertices], inst.domain.elements), args.dimacs, out)
    return 0


def cmd_export_dot(args, out, err) -> int:
    inst = load(args.file).instance
    g = ground(inst, range(1, args.pool + 1))
    _emit(to_dot(g), args.dot, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="defcsp", description=__doc__.splitlines()[0])
    p.add_argument("--seedless", action="store_true", help="reserved; rejected")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide an instance and print the JSON solution")
    s.add_argument("file")
    s.add_argument("--json")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("orbits", help="list the orbits of the variable set")
    s.add_argument("file")
    s.add_argument("--json")
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("certify", help="find, shrink and verify a finite unsatisfiability witness")
    s.add_argument("file")
    s.add_argument("--max-pool", type=int)
    s.add_argument("--brute-bound", type=int)
    s.add_argument("--json")
    s.add_argument("--dot")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("export-dimacs", help="T/S/C encoding of the grounding over atoms 1..N")
    s.add_argument("file")
    s.add_argument("--pool", type=int, required=True)
    s.add_argument("--dimacs")
    s.set_defaults(func=cmd_export_dimacs)

    s = sub.add_parser("export-dot", help="grounded graph over atoms 1..N as Graphviz")
    s.add_argument("file")
    s.add_argument("--pool", type=int, required=True)
    s.add_argument("--dot")
    s.set_defaults(func=cmd_export_dot)
    return p


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if args.seedless:
        err.write("error: --seedless is reserved (the solver uses no randomness)\n")
        return 2
    try:
        return args.func(args, out, err)
    except DslError as e:
        err.write("".join(f"error: {d}\n" for d in e.diagnostics))
    except Exception as e:  # every failure maps to exit code 2
        err.write(f"error: {e}\n")
    return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
