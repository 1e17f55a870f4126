"""Decide the pairs-of-atoms colouring instance and print its finite witness."""
import pathlib
import time

from defcsp.certificates import find_certificate, verify
from defcsp.csp_model import vertex_label
from defcsp.dsl import load
from defcsp.orbit_solver import decide, reduce

ROOT = pathlib.Path(__file__).resolve().parents[1]


def main():
    inst = load(ROOT / "corpus" / "example1.csp").instance
    ocsp = reduce(inst)
    print(f"orbit CSP: {len(ocsp.variables)} variables, {len(ocsp.constraints)} constraints")
    print("decision:", "sat" if decide(inst) else "unsat")
    cert = find_certificate(inst, max_pool=5)
    t0 = time.perf_counter()
    ok = verify(cert, inst)
    print(f"witness over pool {[str(a) for a in cert.pool]}: {len(cert.ground.vertices)} vertices, "
          f"{len(cert.ground.constraints)} constraints, verified={ok} in {time.perf_counter() - t0:.3f}s")
    for v in cert.ground.vertices:
        print("  ", vertex_label(v))


if __name__ == "__main__":
    main()
