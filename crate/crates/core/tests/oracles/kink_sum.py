"""Brute-force kink energy of two horizontally adjacent cells.

Each cell has four dots at (+-d, +-d) nm from its centre. A polarized cell
holds two electrons on one diagonal; every dot also carries +e/2 of
neutralizing background. Prints U(anti-aligned) - U(aligned) in joules.
"""
import math

E = 1.602176634e-19
EPS0 = 8.8541878128e-12


def charges(p):
    occupied = (0, 2) if p > 0 else (1, 3)
    return [(-E if i in occupied else 0.0) + E / 2 for i in range(4)]


def energy(pa, pb, pitch, d, eps_r):
    dots = [(d, -d), (d, d), (-d, d), (-d, -d)]
    k = 1 / (4 * math.pi * EPS0 * eps_r)
    qa, qb = charges(pa), charges(pb)
    u = 0.0
    for i, (ax, ay) in enumerate(dots):
        for j, (bx, by) in enumerate(dots):
            r = math.hypot(pitch + bx - ax, by - ay) * 1e-9
            u += k * qa[i] * qb[j] / r
    return u


if __name__ == "__main__":
    # 20 nm pitch, 18 nm cell, 5 nm dots: dot centres 4 nm from the cell centre
    args = (20.0, 18.0 / 2 - 5.0, 12.9)
    print(repr(energy(1, -1, *args) - energy(1, 1, *args)))
