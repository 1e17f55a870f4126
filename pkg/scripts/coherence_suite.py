"""Cross-check the orbit decision against finite groundings for every corpus instance."""
import argparse
import pathlib
import time

from defcsp.certificates import candidate_pools, find_certificate, verify
from defcsp.csp_model import ground
from defcsp.dsl import load
from defcsp.orbit_solver import decide, verify_on_ground

ROOT = pathlib.Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default=ROOT / "corpus", type=pathlib.Path)
    ap.add_argument("--sat-pool", type=int, default=5)
    ap.add_argument("--unsat-pool", type=int, default=6)
    args = ap.parse_args()
    failures = 0
    for path in sorted(args.corpus.glob("*.csp")):
        t0 = time.perf_counter()
        inst = load(path).instance
        sol = decide(inst)
        if sol is not None:
            ok = all(verify_on_ground(sol, ground(inst, pool))
                     for m in range(args.sat_pool + 1) for pool in candidate_pools(inst, m))
            what = f"sat, checked on pools <= {args.sat_pool}"
        else:
            cert = find_certificate(inst, args.unsat_pool)
            ok = cert is not None and verify(cert, inst)
            what = (f"unsat, witness pool {len(cert.pool)} / {len(cert.ground.vertices)} vertices"
                    if cert else "unsat, no witness")
        failures += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {path.name:28s} {what} ({time.perf_counter() - t0:.2f}s)")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
