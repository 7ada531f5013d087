"""Andre-Quillen homology of Borel-presented Hopf algebras.

For A = S(V)/I with I generated by the powers x^{p^k} of truncated
generators, H_0 = QA and H_1 = I / S_+ I has one class xi^k x per truncated
generator, in degree p^k |x|.  Higher H_n vanish.  The Steenrod action on
H_1 is the k-fold Frobenius twist of the action on the height-k stratum of
QA.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .borel import TRUNC, AlgebraMap, BorelPresentation
from .hopf import CoexactSequence, HopfError, _solve_in_image, indecomposables, linear_part
from .steenrod import BETA, letter_degree, letters_up_to
from .unstable import GradedModule, ModuleError, even_part, height_strata

VANISHING_NOTE = "H^Q_n vanishes for n >= 2 on Borel-presented Hopf algebras"
BETA_NOTE = "beta acts as 0 on H^Q_1"


def h1_label(label: str, k: int) -> str:
    return f"xi{k}_{label}"


def aq_h0(A: BorelPresentation) -> GradedModule:
    return indecomposables(A)


def _h1_classes(A: BorelPresentation):
    """(label, generator label, k, degree) for each truncated generator within the cap."""
    out = []
    for g in A.generators:
        if g.kind != TRUNC:
            continue
        e = A.p**g.height * g.degree
        if e <= A.cap:
            out.append((h1_label(g.label, g.height), g.label, g.height, e))
    return out


def aq_h1(A: BorelPresentation, with_action: bool = True) -> GradedModule:
    """One class per truncated generator of height p^k, in degree p^k |x|."""
    p = A.p
    classes = _h1_classes(A)
    basis: dict = {}
    for lab, _, _, e in classes:
        basis.setdefault(e, []).append(lab)
    heights = {lab: k for lab, _, k, _ in classes}
    source = {lab: (g, k) for lab, g, k, _ in classes}
    meta = {
        "tensor_labels": {lab: f"{g}^(x){p ** k}" for lab, g, k, _ in classes},
        "frobenius_labels": {lab: f"xi^{k} {g}" for lab, g, k, _ in classes},
        "beta": BETA_NOTE,
        "vanishing": VANISHING_NOTE,
    }
    action = {}
    if with_action and A.has_action:
        index = {lab: (e, basis[e].index(lab)) for lab, _, _, e in classes}
        for letter in letters_up_to(p, A.cap):
            step = letter_degree(letter, p)
            for d, labs in basis.items():
                t = d + step
                if t > A.cap or t not in basis:
                    continue
                M = linalg.zeros(len(labs), len(basis[t]))
                for i, lab in enumerate(labs):
                    g, k = source[lab]
                    if letter == BETA and p != 2:
                        continue
                    if letter % p**k:
                        continue
                    m = letter // p**k
                    gd = A.generators[A.index[g]].degree
                    y = A.act_letter(m, A.gen(g))
                    v = linear_part(A, y, gd + letter_degree(m, p))
                    tgt = [x for x in A.generators if x.degree == gd + letter_degree(m, p)]
                    for c, x in zip(v, tgt):
                        if c and x.kind == TRUNC and x.height == k:
                            e, j = index[h1_label(x.label, k)]
                            M[i, j] = (M[i, j] + c) % p
                action[(letter, d)] = M
    return GradedModule(p, A.cap, basis, action, heights=heights, meta=meta)


def aq_h1_action(A: BorelPresentation) -> dict:
    return aq_h1(A).action


def aq_hn(A: BorelPresentation, n: int) -> GradedModule:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return aq_h0(A)
    if n == 1:
        return aq_h1(A)
    return GradedModule(A.p, A.cap, {}, {}, meta={"vanishing": VANISHING_NOTE})


def stratum_module(A: BorelPresentation) -> GradedModule:
    """Even part of QA restricted to truncated classes, for height bookkeeping."""
    Q = even_part(indecomposables(A))
    keep = {d: [lab for lab in labs if isinstance(Q.heights.get(lab), int)] for d, labs in Q.basis.items()}
    basis = {d: v for d, v in keep.items() if v}
    return GradedModule(Q.p, Q.cap, basis, {}, heights={k: v for k, v in Q.heights.items()
                                                        if any(k in b for b in basis.values())},
                        meta={"action": "absent"})


@dataclass
class AQResult:
    h0: GradedModule
    h1: GradedModule
    strata: dict
    vanishing: str = VANISHING_NOTE

    def to_dict(self) -> dict:
        return {
            "h0": {"dims": self.h0.to_dict()["dims"], "generators": self.h0.to_dict()["basis"]},
            "h1": {"dims": self.h1.to_dict()["dims"], "generators": self.h1.to_dict()["basis"],
                   "heights": {str(k): v for k, v in sorted(self.h1.heights.items())}},
            "strata": {str(k): list(v) for k, v in sorted(self.strata.items())},
            "hn_for_n_ge_2": 0,
            "notes": [self.vanishing, BETA_NOTE],
        }


def aq(A: BorelPresentation) -> AQResult:
    return AQResult(aq_h0(A), aq_h1(A), height_strata(stratum_module(A)).strata)


# -- maps between H_1 terms -------------------------------------------------------


def h1_map(f: AlgebraMap, H_src: GradedModule, H_tgt: GradedModule) -> dict:
    """Degreewise matrices of the map on H_1 induced by an algebra map.

    The class xi^k a goes to the sum over target generators g of height p^j
    (j >= k) of the coefficient of g^{p^(j-k)} in f(a), times xi^j g.
    """
    S, T = f.source, f.target
    p = S.p
    src = {lab: (g, k) for g, k, lab in _class_list(S)}
    tgt = {}
    for g, k, lab in _class_list(T):
        tgt[(g, k)] = lab
    out = {}
    for d in H_src.degrees():
        M = linalg.zeros(H_src.dim(d), H_tgt.dim(d))
        tlabs = H_tgt.labels(d)
        for i, lab in enumerate(H_src.basis[d]):
            a, k = src[lab]
            img = f.images[a]
            for m, c in img.items():
                nz = [j for j, e in enumerate(m) if e]
                if len(nz) != 1:
                    continue
                j = nz[0]
                g = T.generators[j]
                if g.kind != TRUNC or g.height < k:
                    continue
                if m[j] != p ** (g.height - k):
                    continue
                tl = tgt[(g.label, g.height)]
                if tl in tlabs:
                    col = tlabs.index(tl)
                    M[i, col] = (M[i, col] + c) % p
        out[d] = M
    return out


def _class_list(A: BorelPresentation):
    return [(g.label, g.height, h1_label(g.label, g.height)) for g in A.generators
            if g.kind == TRUNC and A.p**g.height * g.degree <= A.cap]


def q_map(f: AlgebraMap, Q_src: GradedModule, Q_tgt: GradedModule) -> dict:
    """Degreewise matrices of Qf (linear parts of generator images)."""
    out = {}
    for d in Q_src.degrees():
        rows = []
        for lab in Q_src.basis[d]:
            img = f.images[lab]
            rows.append(linear_part(f.target, img, d) if Q_tgt.dim(d) else np.zeros(0, dtype=np.int64))
        out[d] = linalg.as_matrix(rows, Q_tgt.dim(d), f.source.p)
    return out


def les_connecting(seq: CoexactSequence, lifts: dict | None = None) -> dict:
    """H_1(B//A) -> QA: lift x to B, raise to the p^k-th power, read in QA.

    ``lifts`` may override the default lift (the generator of B) per label.
    """
    A, B, C = seq.A, seq.B, seq.C
    p = B.p
    lifts = dict(seq.lifts, **(lifts or {}))
    H = aq_h1(C, with_action=False)
    QA = indecomposables(A, with_action=False)
    cache: dict = {}
    out = {}
    for d in H.degrees():
        rows = []
        for lab in H.basis[d]:
            g, k = _h1_source(C, lab)
            y = B.power(lifts[g], p**k)
            x = _solve_in_image(seq.inclusion, y, d, cache) if y else {}
            if x is None:
                raise HopfError(f"power of the lift of {g} is not in the subalgebra")
            rows.append(linear_part(A, x, d) if QA.dim(d) else np.zeros(0, dtype=np.int64))
        out[d] = linalg.as_matrix(rows, QA.dim(d), p)
    return out


def _h1_source(A: BorelPresentation, lab: str):
    for g, k, l2 in _class_list(A):
        if l2 == lab:
            return g, k
    raise KeyError(lab)


# -- exactness --------------------------------------------------------------------


@dataclass
class LESReport:
    degrees: dict  # degree -> {"dims": [...], "failures": [...]}

    @property
    def passed(self) -> bool:
        return all(not v["failures"] for v in self.degrees.values())

    def failures(self) -> dict:
        return {d: v["failures"] for d, v in self.degrees.items() if v["failures"]}

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "degrees": {str(d): v for d, v in sorted(self.degrees.items())}}


def _mat(maps: dict, d: int, rows: int, cols: int) -> np.ndarray:
    M = maps.get(d)
    if M is None or M.shape != (rows, cols):
        if M is not None and M.size:
            raise ModuleError("map matrix has the wrong shape")
        return linalg.zeros(rows, cols)
    return M


def les_check(seq: CoexactSequence) -> LESReport:
    """Degreewise exactness of
    0 -> H1(A) -> H1(B) -> H1(B//A) -> QA -> QB -> Q(B//A) -> 0."""
    A, B, C = seq.A, seq.B, seq.C
    p = B.p
    H = [aq_h1(X, with_action=False) for X in (A, B, C)]
    Q = [indecomposables(X, with_action=False) for X in (A, B, C)]
    maps = [
        h1_map(seq.inclusion, H[0], H[1]),
        h1_map(seq.projection, H[1], H[2]),
        les_connecting(seq),
        q_map(seq.inclusion, Q[0], Q[1]),
        q_map(seq.projection, Q[1], Q[2]),
    ]
    nodes = ["H1(A)", "H1(B)", "H1(B//A)", "QA", "QB", "Q(B//A)"]
    terms = H + Q
    report = {}
    for d in range(B.cap + 1):
        dims = [t.dim(d) for t in terms]
        if not any(dims):
            continue
        mats = [_mat(maps[i], d, dims[i], dims[i + 1]) for i in range(5)]
        ranks = [linalg.rank(M, p) if M.size else 0 for M in mats]
        fails = []
        for i in range(4):
            if (mats[i] @ mats[i + 1] % p).any():
                fails.append(f"composite through {nodes[i + 1]} is nonzero")
            elif dims[i + 1] - ranks[i + 1] != ranks[i]:
                fails.append(f"not exact at {nodes[i + 1]}")
        if ranks[0] != dims[0]:
            fails.append("H1(A) -> H1(B) not injective")
        if ranks[4] != dims[5]:
            fails.append("QB -> Q(B//A) not surjective")
        if sum((-1) ** i * x for i, x in enumerate(dims)):
            fails.append("alternating sum of dimensions is nonzero")
        report[d] = {"dims": dims, "ranks": ranks, "failures": fails}
    return LESReport(report)


# -- the odd-to-even map --------------------------------------------------------------


def coker_odd_to_even(Q: GradedModule) -> GradedModule:
    """Cokernel on the even part of x -> beta P^t x (|x| = 2t + 1).

    At p = 2 the analogous operation is Sq^{2t+1}, i.e. x -> x^2, which
    vanishes on indecomposables; the cokernel is then the whole even part.
    """
    p = Q.p
    images: dict = {}
    for d in Q.degrees():
        if d % 2 == 0:
            continue
        t = (d - 1) // 2
        word = (d,) if p == 2 else (BETA, t)
        tgt = d + sum(letter_degree(x, p) for x in word)
        if tgt > Q.cap or not Q.dim(tgt):
            continue
        for i in range(Q.dim(d)):
            v = np.zeros(Q.dim(d), dtype=np.int64)
            v[i] = 1
            images.setdefault(tgt, []).append(Q.apply_word(word, d, v))
    basis = {}
    for d in Q.degrees():
        if d % 2:
            continue
        R, piv = linalg.row_reduce(linalg.as_matrix(images.get(d, []), Q.dim(d), p), p)
        keep = [lab for i, lab in enumerate(Q.basis[d]) if i not in set(piv)]
        if keep:
            basis[d] = keep
    return GradedModule(p, Q.cap, basis, {}, meta={"action": "absent", "source": "cokernel"})


def coker_beta_p0(Q: GradedModule) -> GradedModule:
    if Q.p == 2:
        raise ValueError("beta P_0 is defined only for odd p")
    return coker_odd_to_even(Q)
