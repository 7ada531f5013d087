"""Indecomposables, Frobenius images, Hopf quotients and kernels of
Borel-presented algebras.

Coproducts are never stored.  Sub- and quotient algebras are computed with
degreewise linear algebra on monomial bases; the Hopf property enters through
the freeness identity P_B = P_A * P_{B//A}, which every quotient verifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .borel import (
    EXT,
    POLY,
    TRUNC,
    AlgebraMap,
    BorelGenerator,
    BorelPresentation,
    PresentationError,
)
from .steenrod import letter_degree, letters_up_to
from .unstable import GradedModule


class HopfError(ValueError):
    pass


def _height_label(g: BorelGenerator):
    if g.kind == TRUNC:
        return g.height
    return "ext" if g.kind == EXT else "poly"


def linear_part(P: BorelPresentation, x: dict, d: int) -> np.ndarray:
    """Coordinates in QP_d (generators of degree d, in presentation order)."""
    gens = [i for i, g in enumerate(P.generators) if g.degree == d]
    pos = {i: k for k, i in enumerate(gens)}
    v = np.zeros(len(gens), dtype=np.int64)
    for m, c in x.items():
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1 and m[nz[0]] == 1 and nz[0] in pos:
            v[pos[nz[0]]] = (v[pos[nz[0]]] + c) % P.p
    return v


def indecomposables(P: BorelPresentation, with_action: bool = True) -> GradedModule:
    """QP: one class per generator, with the action projected to linear parts."""
    p = P.p
    basis: dict = {}
    for g in P.generators:
        basis.setdefault(g.degree, []).append(g.label)
    heights = {g.label: _height_label(g) for g in P.generators}
    action = {}
    if with_action and P.has_action:
        for letter in letters_up_to(p, P.cap):
            step = letter_degree(letter, p)
            for d, labs in basis.items():
                t = d + step
                if t > P.cap or t not in basis:
                    continue
                rows = [linear_part(P, P.act_letter(letter, P.gen(lab)), t) for lab in labs]
                action[(letter, d)] = linalg.as_matrix(rows, len(basis[t]), p)
    meta = {"source": "indecomposables"}
    if not (with_action and P.has_action):
        meta["action"] = "absent"
    return GradedModule(p, P.cap, basis, action, heights=heights, meta=meta)


# -- sub-algebras ------------------------------------------------------------------


def _solve_in_image(inclusion: AlgebraMap, y: dict, d: int, cache: dict):
    """Element x of the source with inclusion(x) == y, or None."""
    S, T = inclusion.source, inclusion.target
    if d not in cache:
        cache[d] = linalg.LinearSystem(inclusion.matrix(d), S.p)
    if S.dim(d) == 0:
        return {} if not T.clean(y) else None
    x = cache[d].solve(T.to_vector(y, d))
    return None if x is None else S.from_vector(x, d)


def induced_action(sub: BorelPresentation, inclusion: AlgebraMap) -> dict:
    """Action table of a subalgebra, pulled back through an injective map.

    Raises HopfError if some operation leaves the image.
    """
    T = inclusion.target
    p = sub.p
    cache: dict = {}
    table = {}
    for g in sub.generators:
        img = inclusion.images[g.label]
        for letter in letters_up_to(p, sub.cap - g.degree):
            t = g.degree + letter_degree(letter, p)
            y = T.act_letter(letter, img)
            x = _solve_in_image(inclusion, y, t, cache)
            if x is None:
                raise HopfError(f"operation {letter} on {g.label} leaves the subalgebra")
            table[(g.label, letter)] = x
    return table


def check_injective(f: AlgebraMap, through=None) -> list:
    """Degrees in which ``f`` fails to be injective."""
    S = f.source
    top = S.cap if through is None else through
    return [d for d in range(top + 1) if S.dim(d) and linalg.rank(f.matrix(d), S.p) < S.dim(d)]


def frobenius_label(label: str) -> str:
    return f"xi_{label}"


def _frobenius_element(B: BorelPresentation, A: BorelPresentation, pos: dict, x: dict) -> dict:
    """x^p written in A's monomials (pos maps B generator index -> A index)."""
    out: dict = {}
    for m, c in x.items():
        new = [0] * len(A.generators)
        dead = False
        for i, e in enumerate(m):
            if not e:
                continue
            if i not in pos:
                dead = True
                break
            new[pos[i]] = e
        if dead:
            continue
        r = A.mono_mul(tuple(new), (0,) * len(A.generators))
        if r is None:
            continue
        out = A.add(out, {r[1]: c})
    return out


def frobenius_image(B: BorelPresentation):
    """The sub-Hopf algebra generated by p-th powers of generators.

    Returns ``(A, inclusion)``.  Polynomial generators y give polynomial
    generators of degree p|y|, height p^k (k >= 2) drops to p^(k-1), exterior
    and height-p generators die.
    """
    p = B.p
    gens = []
    pos = {}
    images = {}
    for i, g in enumerate(B.generators):
        if g.kind == EXT or (g.kind == TRUNC and g.height == 1):
            continue
        if p * g.degree > B.cap:
            continue
        kind, height = (POLY, None) if g.kind == POLY else (TRUNC, g.height - 1)
        lab = frobenius_label(g.label)
        pos[i] = len(gens)
        gens.append(BorelGenerator(lab, p * g.degree, kind, height))
        images[lab] = B.power(B.gen(i), p)
    A = BorelPresentation(p, B.cap, gens, {} if B.has_action else None,
                          notes={"frobenius_of": repr(B)})
    if B.has_action:
        # P^{pm}(y^p) = (P^m y)^p; all other letters kill y^p
        table = {}
        for i, ai in pos.items():
            ga = gens[ai]
            for letter in letters_up_to(p, B.cap - ga.degree):
                if letter == 0 or letter % p:
                    table[(ga.label, letter)] = {}
                    continue
                y = B.act_letter(letter // p, B.gen(i))
                table[(ga.label, letter)] = _frobenius_element(B, A, pos, y)
        A = BorelPresentation(p, B.cap, gens, table, notes=A.notes)
    return A, AlgebraMap(A, B, images)


# -- quotients -----------------------------------------------------------------------


@dataclass
class CoexactSequence:
    """A -> B -> C = B//A with maps given on generators."""

    A: BorelPresentation
    B: BorelPresentation
    C: BorelPresentation
    inclusion: AlgebraMap
    projection: AlgebraMap
    ambiguous: list = field(default_factory=list)
    lifts: dict = field(default_factory=dict)  # C label -> element of B


def _ideal_spans(B: BorelPresentation, A: BorelPresentation, inclusion: AlgebraMap) -> dict:
    """RREF of the ideal generated by the images of A's generators, per degree."""
    p = B.p
    gen_imgs = [(g.degree, B.clean(inclusion.images[g.label])) for g in A.generators]
    spans = {}
    for d in range(B.cap + 1):
        rows = []
        for a_deg, img in gen_imgs:
            if a_deg > d or not img:
                continue
            for m in B.monomial_basis(d - a_deg):
                prod = B.mul(img, {m: 1})
                if prod:
                    rows.append(B.to_vector(prod, d))
        R, piv = linalg.row_reduce(linalg.as_matrix(rows, B.dim(d), p), p)
        spans[d] = (R, piv)
    return spans


def hopf_quotient(B: BorelPresentation, A: BorelPresentation, inclusion: AlgebraMap) -> CoexactSequence:
    """B//A = B / (A_+ B) with a recovered Borel presentation and action.

    Generators of the quotient are generators of B not hit linearly by A;
    heights are the least k with x^{p^k} in the ideal.  A generator whose
    p-th power lies beyond the cap gets kind Polynomial and is listed in
    ``ambiguous``.
    """
    p = B.p
    if A.p != p or A.cap != B.cap:
        raise HopfError("prime or cap mismatch")
    bad = check_injective(inclusion)
    if bad:
        raise HopfError(f"inclusion not injective in degrees {bad}")
    ideal = _ideal_spans(B, A, inclusion)

    def in_ideal(x, d):
        R, piv = ideal[d]
        return not linalg.reduce_vector(B.to_vector(x, d), R, piv, p).any()

    # generators of Q(B//A): QB modulo the linear parts of A's generators
    chosen = []
    for d in sorted({g.degree for g in B.generators}):
        rows = [linear_part(B, inclusion.images[g.label], d) for g in A.generators if g.degree == d]
        labs = [g.label for g in B.generators if g.degree == d]
        R, piv = linalg.row_reduce(linalg.as_matrix(rows, len(labs), p), p)
        for k, lab in enumerate(labs):
            if k not in piv:
                chosen.append(lab)

    gens = []
    ambiguous = []
    for lab in chosen:
        g = B.generators[B.index[lab]]
        if p != 2 and g.degree % 2:
            gens.append(BorelGenerator(lab, g.degree, EXT))
            continue
        k, x, found = 0, B.gen(lab), False
        while True:
            k += 1
            if p**k * g.degree > B.cap:
                break
            x = B.power(x, p)
            if not x or in_ideal(x, p**k * g.degree):
                found = True
                break
        if found:
            gens.append(BorelGenerator(lab, g.degree, TRUNC, k))
        else:
            gens.append(BorelGenerator(lab, g.degree, POLY))
            ambiguous.append(lab)

    C0 = BorelPresentation(p, B.cap, gens, None)
    lift = AlgebraMap(C0, B, {g.label: B.gen(g.label) for g in gens})

    # the monomials of C must map to a basis of B / ideal
    quotient_dim = [B.dim(d) - len(ideal[d][1]) for d in range(B.cap + 1)]
    systems = {}
    for d in range(B.cap + 1):
        R, piv = ideal[d]
        rows = [linalg.reduce_vector(v, R, piv, p) for v in lift.matrix(d)]
        M = linalg.as_matrix(rows, B.dim(d), p)
        if C0.dim(d) != quotient_dim[d] or linalg.rank(M, p) != quotient_dim[d]:
            raise HopfError(f"quotient presentation inconsistent in degree {d}")
        systems[d] = linalg.LinearSystem(M, p)
    series_A = A.poincare_series()
    series_C = C0.poincare_series()
    for d, b in enumerate(B.poincare_series()):
        prod = sum(series_A[i] * series_C[d - i] for i in range(d + 1))
        if prod != b:
            raise HopfError(f"freeness identity fails in degree {d}: {b} != {prod}")

    def to_quotient(y: dict, d: int) -> dict:
        R, piv = ideal[d]
        v = linalg.reduce_vector(B.to_vector(y, d), R, piv, p) if B.dim(d) else np.zeros(0, dtype=np.int64)
        if C0.dim(d) == 0:
            return {}
        x = systems[d].solve(v)
        if x is None:
            raise HopfError(f"class in degree {d} not expressible in the quotient")
        return C0.from_vector(x, d)

    action = None
    if B.has_action:
        action = {}
        for g in gens:
            for letter in letters_up_to(p, B.cap - g.degree):
                t = g.degree + letter_degree(letter, p)
                action[(g.label, letter)] = to_quotient(B.act_letter(letter, B.gen(g.label)), t)
    C = BorelPresentation(p, B.cap, gens, action, notes={"quotient_of": repr(B), "ambiguous": ambiguous})
    proj_images = {g.label: to_quotient(B.gen(g.label), g.degree) for g in B.generators}
    projection = AlgebraMap(B, C, proj_images)
    return CoexactSequence(A, B, C, inclusion, projection, ambiguous,
                           {g.label: B.gen(g.label) for g in gens})


def coexact_sequence(B: BorelPresentation, A: BorelPresentation, inclusion: AlgebraMap) -> CoexactSequence:
    return hopf_quotient(B, A, inclusion)


def trivial_subalgebra(B: BorelPresentation):
    """F_p inside B."""
    A = BorelPresentation(B.p, B.cap, [], {} if B.has_action else None)
    return A, AlgebraMap(A, B, {})


def whole_subalgebra(B: BorelPresentation):
    """B inside itself."""
    return B, AlgebraMap(B, B, {g.label: B.gen(g.label) for g in B.generators})


# -- kernels ---------------------------------------------------------------------------


def hopf_kernel(B: BorelPresentation, generators: list, pi: AlgebraMap | None = None):
    """Sub-Hopf algebra of B on supplied generators, checked against ``pi``.

    ``generators`` is a list of ``(label, element of B, kind, height)``.  The
    result is verified to be a free graded-commutative algebra on those
    classes through the cap (degreewise injectivity), to be annihilated by
    ``pi`` on generators, and to be closed under the Steenrod action.
    Returns ``(K, inclusion)``.
    """
    p = B.p
    gens = []
    images = {}
    for lab, elem, kind, height in generators:
        elem = B.clean(elem)
        d = B.degree_of(elem)
        if d is None:
            raise HopfError(f"kernel generator {lab} is zero")
        gens.append(BorelGenerator(lab, d, kind, height))
        images[lab] = elem
    K0 = BorelPresentation(p, B.cap, gens, None)
    inc0 = AlgebraMap(K0, B, images)
    bad = check_injective(inc0)
    if bad:
        raise HopfError(f"supplied generators are not free in degrees {bad}")
    if pi is not None:
        for lab, elem in images.items():
            if pi.apply(elem):
                raise HopfError(f"generator {lab} is not in the kernel")
    action = induced_action(K0, inc0) if B.has_action else None
    K = BorelPresentation(p, B.cap, gens, action)
    return K, AlgebraMap(K, B, images)


def exterior_on(M: GradedModule, shift: int = -1, prefix: str = "s") -> BorelPresentation:
    """Exterior algebra on the classes of M shifted by ``shift`` (no action)."""
    gens = []
    for d in M.degrees():
        if d + shift <= 0:
            raise PresentationError("shifted class in nonpositive degree")
        for lab in M.basis[d]:
            gens.append(BorelGenerator(f"{prefix}{lab}", d + shift, EXT if M.p != 2 else TRUNC, None if M.p != 2 else 1))
    return BorelPresentation(M.p, M.cap, gens, None)
