"""Compile the access-control register machine and compare it with direct simulation."""
import argparse

from defcsp.machines import (access_control_machine, canonical_form, compile_machine, ground_graph,
                             simulate_ground)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-pool", type=int, default=3)
    args = ap.parse_args()
    m = access_control_machine()
    cg = compile_machine(m)
    print(f"{len(m.states)} states, {len(m.transitions)} transitions -> "
          f"{len(cg.variables.builders)} builders, {len(cg.edges)} edge families")
    for n in range(args.max_pool + 1):
        pool = range(1, n + 1)
        v, e = ground_graph(cg, pool)
        same = canonical_form((v, e)) == canonical_form(simulate_ground(m, pool))
        print(f"pool {n}: {len(v)} configurations, {len(e)} edges, matches simulation: {same}")


if __name__ == "__main__":
    main()
