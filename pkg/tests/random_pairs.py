"""Seeded random pairs A <= B of small Borel-presented Hopf algebras.

B has at most three generators, all primitive, so any choice of powers
g^{p^j} generates a sub-Hopf algebra A.
"""

import random

from aqhopf.borel import EXT, POLY, TRUNC, AlgebraMap, BorelGenerator, BorelPresentation


def random_pair(seed: int):
    rng = random.Random(seed)
    p = rng.choice([2, 3])
    cap = rng.randint(12, 30)
    gens = []
    for i in range(rng.randint(1, 3)):
        kind = rng.choice([POLY, TRUNC, EXT] if p != 2 else [POLY, TRUNC])
        if p != 2:
            deg = rng.choice([1, 3, 5]) if kind == EXT else rng.choice([2, 4, 6])
        else:
            deg = rng.randint(1, 6)
        height = rng.randint(1, 3) if kind == TRUNC else None
        gens.append(BorelGenerator(f"g{i}", deg, kind, height))
    B = BorelPresentation(p, cap, gens, None)
    a_gens, images = [], {}
    for g in gens:
        if g.kind == EXT:
            choices = [None, 0]
        elif g.kind == TRUNC:
            choices = [None] + list(range(g.height))
        else:
            choices = [None, 0, 1, 2]
        j = rng.choice(choices)
        if j is None or p**j * g.degree > cap:
            continue
        lab = f"a{g.label}"
        if g.kind == TRUNC:
            a_gens.append(BorelGenerator(lab, p**j * g.degree, TRUNC, g.height - j))
        else:
            a_gens.append(BorelGenerator(lab, p**j * g.degree, g.kind))
        images[lab] = B.power(B.gen(g.label), p**j)
    A = BorelPresentation(p, cap, a_gens, None)
    return B, A, AlgebraMap(A, B, images)
