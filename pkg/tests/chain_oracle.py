"""Brute-force Andre-Quillen homology from the free simplicial resolution.

X_{-1} = A and X_m = S(Xbar_{m-1}) (polynomial on a basis of the positive
part).  The indecomposables are Q X_n = Xbar_{n-1} with differential
sum_i (-1)^i Q(d_i), where Q(d_0) takes the linear part and, for i >= 1,
Q(d_i) = d_{i-1} on X_{n-1}.  Faces of X_m: d_0 multiplies letters out in
X_{m-1}, and d_j = S(d_{j-1}) for j >= 1.

Only algebras whose free graded-commutative algebras are plain polynomial
rings are supported (p = 2, or all degrees even), so no Koszul signs arise.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from aqhopf import linalg


class ChainOracle:
    def __init__(self, A):
        if A.p != 2 and any(g.degree % 2 for g in A.generators):
            raise ValueError("oracle needs p = 2 or an evenly graded algebra")
        self.A = A
        self.p = A.p
        self.cap = A.cap
        self._basis: dict = {}

    # -- bases -------------------------------------------------------------------

    def basis(self, level: int, d: int) -> list:
        """Basis keys of Xbar_level in degree d (level -1 is Abar)."""
        key = (level, d)
        if key in self._basis:
            return self._basis[key]
        if d <= 0:
            out = []
        elif level == -1:
            out = [("a", m) for m in self.A.monomial_basis(d)]
        else:
            items = []
            for e in range(1, d + 1):
                items.extend((e, k) for k in self.basis(level - 1, e))
            out = []

            def rec(start, left, acc):
                if left == 0:
                    out.append(tuple(sorted(acc, key=repr)))
                    return
                for i in range(start, len(items)):
                    e, k = items[i]
                    if e <= left:
                        acc.append(k)
                        rec(i, left - e, acc)
                        acc.pop()

            rec(0, d, [])
            out = [("s", t) for t in out]
        self._basis[key] = out
        return out

    def degree(self, key) -> int:
        if key[0] == "a":
            return self.A.mono_degree(key[1])
        return sum(self.degree(k) for k in key[1])

    # -- elements ------------------------------------------------------------------

    def _add(self, out, k, c):
        v = (out.get(k, 0) + c) % self.p
        if v:
            out[k] = v
        else:
            out.pop(k, None)

    def _poly_mul(self, x: dict, y: dict) -> dict:
        """Product in a polynomial ring on keys; monomials are ('s', sorted tuple)."""
        out: dict = {}
        for (_, m1), c1 in x.items():
            for (_, m2), c2 in y.items():
                self._add(out, ("s", tuple(sorted(m1 + m2, key=repr))), c1 * c2)
        return out

    def _letters_product(self, level: int, factors: list) -> dict:
        """Product in X_level of elements of Xbar_{level-1} given as letter combinations."""
        out = {("s", ()): 1}
        for f in factors:
            poly = {("s", (k,)): c for k, c in f.items()}
            out = self._poly_mul(out, poly)
            if not out:
                break
        return out

    def face(self, level: int, i: int, key) -> dict:
        """d_i of X_level applied to a basis key of Xbar_level, as an element of X_{level-1}."""
        return self._face(level, i, key)

    @lru_cache(maxsize=None)
    def _face_cached(self, level, i, key):
        return tuple(sorted(self._face_raw(level, i, key).items(), key=repr))

    def _face(self, level, i, key):
        return dict(self._face_cached(level, i, key))

    def _face_raw(self, level: int, i: int, key) -> dict:
        letters = key[1]
        if i == 0:
            if level == 0:
                x = self.A.one()
                for ak in letters:
                    x = self.A.mul(x, {ak[1]: 1})
                return {("a", m): c for m, c in x.items()}
            # multiply out: union of the multisets
            merged = []
            for k in letters:
                merged.extend(k[1])
            return {("s", tuple(sorted(merged, key=repr))): 1}
        images = [self._face(level - 1, i - 1, k) for k in letters]
        return self._letters_product(level, images)

    # -- complex ---------------------------------------------------------------------

    def boundary(self, n: int, d: int) -> np.ndarray:
        """Matrix of QX_n -> QX_{n-1} in degree d, rows = images of Xbar_{n-1} basis."""
        src = self.basis(n - 1, d)
        tgt = self.basis(n - 2, d)
        index = {k: j for j, k in enumerate(tgt)}
        M = linalg.zeros(len(src), len(tgt))
        for r, key in enumerate(src):
            letters = key[1]
            if len(letters) == 1:
                j = index[letters[0]]
                M[r, j] = (M[r, j] + 1) % self.p
            for i in range(1, n + 1):
                img = self._face(n - 1, i - 1, key)
                sign = -1 if i % 2 else 1
                for k, c in img.items():
                    M[r, index[k]] = (M[r, index[k]] + sign * c) % self.p
        return M

    def homology_dim(self, n: int, d: int) -> int:
        """dim H_n in degree d; H_n sits at QX_n = Xbar_{n-1}."""
        dim = len(self.basis(n - 1, d))
        if dim == 0:
            return 0
        out_rank = linalg.rank(self.boundary(n, d), self.p) if n >= 1 and self.basis(n - 2, d) else 0
        inc = self.boundary(n + 1, d)
        in_rank = linalg.rank(inc, self.p) if inc.size else 0
        return dim - out_rank - in_rank

    def check_complex(self, n: int, d: int) -> bool:
        """boundary_n composed with boundary_{n-1} is zero in degree d."""
        a = self.boundary(n, d)
        b = self.boundary(n - 1, d)
        if not a.size or not b.size:
            return True
        return not (a @ b % self.p).any()
