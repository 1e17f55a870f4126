"""Prime ideals of small free Boolean algebras found as CSP solutions."""
import itertools

from defcsp.finite_solver import free_boolean_algebra, is_homomorphism, prime_ideal


def main():
    for gens in (1, 2, 3):
        ba = free_boolean_algebra(gens)
        h = prime_ideal(ba)
        ideal = [a for a in range(ba.size) if h[a] == 0]
        shown = ideal if len(ideal) <= 8 else f"{len(ideal)} elements"
        line = f"{gens} generators, |B| = {ba.size}: ideal {shown}"
        if ba.size <= 16:
            homs = sum(is_homomorphism(ba, c) for c in itertools.product((0, 1), repeat=ba.size))
            line += f", {homs} homomorphisms to 2 in total"
        print(line)


if __name__ == "__main__":
    main()
