"""Unstable modules truncated at a degree cap.

A ``GradedModule`` stores, for every single letter (beta and each P^i, or
Sq^i at p = 2) and every degree, the matrix of that letter.  Words act letter
by letter; general elements act termwise.  Finite-generation certificates
only use the algebra generators (beta and P^{p^k}, resp. Sq^{2^k}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import re
from typing import Callable, Iterable

import numpy as np

from . import linalg
from .borel import ActionTableIncomplete
from .steenrod import (
    BETA,
    SteenrodElement,
    adem_normalize,
    admissibles,
    check_prime,
    excess,
    format_word,
    generator_letters,
    letter_degree,
    letters_up_to,
    parse_element,
    scalar_mul,
)


class ModuleError(ValueError):
    pass


class GradedModule:
    """Degreewise F_p vector spaces ``0..cap`` with a Steenrod action table.

    ``basis`` maps a degree to its list of labels (missing degrees are zero).
    ``action`` maps ``(letter, degree)`` to a matrix whose rows are the images
    of the basis in ``degree``; absent entries with a nonzero source and target
    are an error on use.  ``complete_through`` is the largest degree for which
    the module is claimed to be the honest truncation.
    """

    def __init__(self, p, cap, basis, action, complete_through=None, heights=None, meta=None):
        check_prime(p)
        self.p = p
        self.cap = cap
        self.basis = {d: list(v) for d, v in basis.items() if v and 0 <= d <= cap}
        self.action = {k: np.asarray(m, dtype=np.int64) % p for k, m in action.items()}
        self.complete_through = cap if complete_through is None else complete_through
        self.heights = dict(heights or {})
        self.meta = dict(meta or {})

    # -- shape -----------------------------------------------------------------

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def dims(self) -> list:
        return [self.dim(d) for d in range(self.cap + 1)]

    def degrees(self) -> list:
        return sorted(self.basis)

    def labels(self, d: int) -> list:
        return list(self.basis.get(d, ()))

    def locate(self, label):
        """(degree, index) of a basis label."""
        for d, labs in self.basis.items():
            if label in labs:
                return d, labs.index(label)
        raise KeyError(label)

    def unit(self, label) -> tuple:
        d, i = self.locate(label)
        v = np.zeros(self.dim(d), dtype=np.int64)
        v[i] = 1
        return d, v

    def is_zero(self) -> bool:
        return not any(self.dims())

    # -- action ----------------------------------------------------------------

    def letter_matrix(self, letter: int, d: int) -> np.ndarray:
        t = d + letter_degree(letter, self.p)
        if t > self.cap:
            raise ActionTableIncomplete(f"letter {letter} from degree {d} leaves the cap {self.cap}")
        key = (letter, d)
        if key in self.action:
            return self.action[key]
        if self.dim(d) == 0 or self.dim(t) == 0:
            return linalg.zeros(self.dim(d), self.dim(t))
        raise ActionTableIncomplete(f"no action entry for letter {letter} in degree {d}")

    def apply_letter(self, letter: int, d: int, v) -> np.ndarray:
        if self.p == 2 and letter == 0:
            return np.asarray(v, dtype=np.int64) % 2
        M = self.letter_matrix(letter, d)
        v = np.asarray(v, dtype=np.int64)
        if M.shape[0] == 0:
            return np.zeros(M.shape[1], dtype=np.int64)
        return v @ M % self.p

    def apply_word(self, word, d: int, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        for letter in reversed(tuple(word)):
            v = self.apply_letter(letter, d, v)
            d += letter_degree(letter, self.p)
        return v

    def act(self, op, d: int, v) -> np.ndarray:
        """Apply a word or a SteenrodElement to a vector in degree ``d``."""
        if isinstance(op, SteenrodElement):
            if op.is_zero():
                raise ModuleError("zero operation has no degree")
            out = np.zeros(self.dim(d + op.degree), dtype=np.int64)
            for w, c in op:
                out = (out + c * self.apply_word(w, d, v)) % self.p
            return out
        return self.apply_word(op, d, v)

    def act_on_label(self, op, label) -> np.ndarray:
        d, v = self.unit(label)
        return self.act(op, d, v)

    # -- consistency checks ----------------------------------------------------

    def instability_violations(self, max_op_degree=None) -> list:
        """(label, word) pairs where an admissible of excess > |label| acts nonzero."""
        bad = []
        for d in self.degrees():
            top = self.cap - d if max_op_degree is None else min(self.cap - d, max_op_degree)
            for k in range(1, top + 1):
                for w in admissibles(k, self.p):
                    if excess(w, self.p) <= d:
                        continue
                    for i, lab in enumerate(self.basis[d]):
                        v = np.zeros(self.dim(d), dtype=np.int64)
                        v[i] = 1
                        if self.apply_word(w, d, v).any():
                            bad.append((lab, w))
        return bad

    def adem_violations(self, max_op_degree: int) -> list:
        """Two-letter words whose action differs from that of their normal form."""
        p = self.p
        bad = []
        letters = letters_up_to(p, max_op_degree)
        for a in letters:
            for b in letters:
                w = (a, b)
                deg = letter_degree(a, p) + letter_degree(b, p)
                if deg > max_op_degree:
                    continue
                nf = adem_normalize(w, p)
                for d in self.degrees():
                    if d + deg > self.cap:
                        continue
                    for i in range(self.dim(d)):
                        v = np.zeros(self.dim(d), dtype=np.int64)
                        v[i] = 1
                        lhs = self.apply_word(w, d, v)
                        if nf.is_zero():
                            rhs = np.zeros_like(lhs)
                        else:
                            rhs = self.act(nf, d, v)
                        if not np.array_equal(lhs % p, rhs % p):
                            bad.append((self.basis[d][i], w))
        return bad

    # -- export ----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "cap": self.cap,
            "complete_through": self.complete_through,
            "dims": {str(d): self.dim(d) for d in self.degrees()},
            "basis": {str(d): [str(x) for x in self.basis[d]] for d in self.degrees()},
            "heights": {str(k): v for k, v in sorted(self.heights.items(), key=lambda kv: str(kv[0]))},
        }

    def __repr__(self):
        nz = {d: self.dim(d) for d in self.degrees()}
        return f"GradedModule(p={self.p}, cap={self.cap}, dims={nz})"


def module_from_rule(p, cap, basis, rule: Callable, letters=None, **kw) -> GradedModule:
    """Build a module from ``rule(letter, degree, index) -> vector`` in the target degree.

    ``letters`` defaults to every letter whose degree fits under the cap.
    """
    basis = {d: list(v) for d, v in basis.items() if v and 0 <= d <= cap}
    letters = letters_up_to(p, cap) if letters is None else letters
    action = {}
    for letter in letters:
        step = letter_degree(letter, p)
        for d, labs in basis.items():
            t = d + step
            if t > cap or not basis.get(t):
                continue
            rows = [np.asarray(rule(letter, d, i), dtype=np.int64) for i in range(len(labs))]
            action[(letter, d)] = linalg.as_matrix(rows, len(basis[t]), p)
    return GradedModule(p, cap, basis, action, **kw)


# -- free unstable modules ------------------------------------------------------


def f_basis(n: int, d: int, p: int) -> list:
    """Admissible words of degree ``d - n`` and excess <= n: a basis of F(n)_d."""
    check_prime(p)
    if d < n:
        return []
    return [w for w in admissibles(d - n, p) if excess(w, p) <= n]


def _project_free(elem: SteenrodElement, n: int, index: dict, size: int, p: int) -> np.ndarray:
    """Coordinates of ``elem * iota_n`` in F(n); terms of excess > n vanish."""
    v = np.zeros(size, dtype=np.int64)
    for w, c in elem:
        if excess(w, p) <= n:
            v[index[w]] = (v[index[w]] + c) % p
    return v


def free_module(n: int, p: int, cap: int) -> GradedModule:
    """F(n) through ``cap`` with labels the admissible words."""
    basis = {d: f_basis(n, d, p) for d in range(n, cap + 1)}
    index = {d: {w: i for i, w in enumerate(ws)} for d, ws in basis.items()}

    def rule(letter, d, i):
        w = basis[d][i]
        t = d + letter_degree(letter, p)
        nf = adem_normalize((letter,) + w, p)
        return _project_free(nf, n, index[t], len(basis[t]), p)

    return module_from_rule(p, cap, basis, rule, meta={"free_on": n})


@dataclass
class ModulePresentation:
    """Generators ``(label, degree)`` and relations, each a map label -> SteenrodElement."""

    p: int
    generators: list
    relations: list = field(default_factory=list)

    def generator_degree(self, label) -> int:
        for lab, d in self.generators:
            if lab == label:
                return d
        raise ModuleError(f"relation references unknown generator {label!r}")

    def relation_degree(self, rel: dict):
        degs = set()
        for lab, th in rel.items():
            if not th.is_zero():
                degs.add(self.generator_degree(lab) + th.degree)
        if len(degs) > 1:
            raise ModuleError("inhomogeneous relation")
        return degs.pop() if degs else None


def _free_sum_basis(pres: ModulePresentation, cap: int):
    basis = {}
    for d in range(cap + 1):
        labs = []
        for g, n in pres.generators:
            labs.extend((g, w) for w in f_basis(n, d, pres.p))
        if labs:
            basis[d] = labs
    return basis


def realize(pres: ModulePresentation, cap: int) -> GradedModule:
    """The presented module through ``cap``: a sum of F(n)'s modulo the
    submodule generated by the relations."""
    p = pres.p
    gdeg = dict(pres.generators)
    if len(gdeg) != len(pres.generators):
        raise ModuleError("duplicate generator labels")
    free = _free_sum_basis(pres, cap)
    index = {d: {b: i for i, b in enumerate(labs)} for d, labs in free.items()}

    def element_vector(parts: dict, d: int) -> np.ndarray:
        """Coordinates in the free sum of sum_g theta_g * g."""
        v = np.zeros(len(free.get(d, ())), dtype=np.int64)
        for g, th in parts.items():
            n = gdeg[g]
            for w, c in th:
                if excess(w, p) <= n:
                    k = index[d][(g, w)]
                    v[k] = (v[k] + c) % p
        return v

    rel_rows: dict = {d: [] for d in free}
    for rel in pres.relations:
        rd = pres.relation_degree(rel)
        if rd is None:
            continue
        if rd > cap:
            raise ModuleError(f"relation in degree {rd} beyond cap {cap}")
        for k in range(0, cap - rd + 1):
            if rd + k not in free:
                continue
            for theta in admissibles(k, p):
                parts = {}
                for g, th in rel.items():
                    if th.is_zero():
                        continue
                    prod = adem_normalize(tuple(theta), p) * th if theta else th
                    if not prod.is_zero():
                        parts[g] = prod
                rel_rows[rd + k].append(element_vector(parts, rd + k))

    reduced = {}
    basis = {}
    for d, labs in free.items():
        R, piv = linalg.row_reduce(linalg.as_matrix(rel_rows[d], len(labs), p), p)
        keep = [i for i in range(len(labs)) if i not in set(piv)]
        reduced[d] = (R, piv, keep)
        if keep:
            basis[d] = [labs[i] for i in keep]

    def rule(letter, d, i):
        g, w = basis[d][i]
        t = d + letter_degree(letter, p)
        nf = adem_normalize((letter,) + w, p)
        v = element_vector({g: nf} if not nf.is_zero() else {}, t)
        R, piv, keep = reduced[t]
        v = linalg.reduce_vector(v, R, piv, p)
        return v[keep]

    return module_from_rule(p, cap, basis, rule, meta={"presented": True})


# -- even part -------------------------------------------------------------------


def even_part(M: GradedModule) -> GradedModule:
    """Even degrees only, with beta acting as zero.  Unchanged at p = 2."""
    if M.p == 2:
        return M
    basis = {d: labs for d, labs in M.basis.items() if d % 2 == 0}
    action = {}
    for (letter, d), mat in M.action.items():
        if letter == BETA or d % 2:
            continue
        action[(letter, d)] = mat
    heights = {k: v for k, v in M.heights.items() if any(k in labs for labs in basis.values())}
    meta = dict(M.meta)
    meta["even_part"] = True
    return GradedModule(M.p, M.cap, basis, action, M.complete_through, heights, meta)


# -- finite generation -------------------------------------------------------------


@dataclass
class FGCertificate:
    generated_through_D: bool
    gen_cut: int
    cap: int
    chosen_generators: list
    first_failure_degree: int | None
    failure_degrees: list

    def to_dict(self) -> dict:
        return {
            "generated_through_D": self.generated_through_D,
            "gen_cut": self.gen_cut,
            "cap": self.cap,
            "chosen_generators": [[d, str(lab)] for d, lab in self.chosen_generators],
            "first_failure_degree": self.first_failure_degree,
            "failure_degrees": list(self.failure_degrees),
        }


def span_closure(M: GradedModule, seeds: dict, D: int, letters=None):
    """Degreewise span of the submodule generated by ``seeds`` (degree -> list
    of vectors) through ``D``, closed under the generator letters."""
    p = M.p
    letters = generator_letters(p, D) if letters is None else letters
    spans: dict = {}
    for d in range(D + 1):
        rows = [np.asarray(v, dtype=np.int64) for v in seeds.get(d, ())]
        for letter in letters:
            s = d - letter_degree(letter, p)
            if s < 0 or s not in spans or not len(spans[s][0]):
                continue
            M_ = M.letter_matrix(letter, s)
            img = spans[s][0] @ M_ % p
            rows.extend(img)
        R, piv = linalg.row_reduce(linalg.as_matrix(rows, M.dim(d), p), p)
        spans[d] = (R, piv)
    return spans


def fg_check(M: GradedModule, g: int, D: int | None = None) -> FGCertificate:
    """Greedy generator choice in degrees <= g, then saturation check through D.

    Degrees are processed upwards; in each degree the span generated by the
    classes chosen so far is computed from the lower spans with the algebra
    generators.  Up to ``g`` missing basis vectors are added as generators in
    label order; above ``g`` every degree where the span is proper is a failure.
    """
    p = M.p
    D = M.cap if D is None else D
    if g > D:
        raise ModuleError("generator cut exceeds the degree bound")
    if D > M.complete_through:
        raise ActionTableIncomplete(f"module complete only through {M.complete_through}, asked {D}")
    letters = generator_letters(p, D)
    spans: dict = {}
    chosen = []
    failures = []
    for d in range(D + 1):
        n = M.dim(d)
        rows = []
        for letter in letters:
            s = d - letter_degree(letter, p)
            if s < 0 or s not in spans or not len(spans[s][0]):
                continue
            rows.extend(spans[s][0] @ M.letter_matrix(letter, s) % p)
        R, piv = linalg.row_reduce(linalg.as_matrix(rows, n, p), p)
        if len(piv) < n:
            if d <= g:
                for i in range(n):
                    e = np.zeros(n, dtype=np.int64)
                    e[i] = 1
                    if linalg.reduce_vector(e, R, piv, p).any():
                        chosen.append((d, M.basis[d][i]))
                        rows = list(R) + [e]
                        R, piv = linalg.row_reduce(linalg.as_matrix(rows, n, p), p)
            else:
                failures.append(d)
        spans[d] = (R, piv)
    return FGCertificate(
        generated_through_D=not failures,
        gen_cut=g,
        cap=D,
        chosen_generators=chosen,
        first_failure_degree=failures[0] if failures else None,
        failure_degrees=failures,
    )


# -- height strata ------------------------------------------------------------------


@dataclass
class HeightStrata:
    strata: dict
    max_height: int

    def to_dict(self) -> dict:
        return {"strata": {str(k): [str(x) for x in v] for k, v in sorted(self.strata.items())},
                "max_height": self.max_height}


def height_strata(N: GradedModule) -> HeightStrata:
    """Group basis labels by height exponent k (height p^k).

    ``N.heights`` maps labels to an integer k, to ``"ext"`` (skipped: exterior
    classes are not in the even part) or to ``"poly"`` (rejected).
    """
    strata: dict = {}
    for d in N.degrees():
        for lab in N.basis[d]:
            h = N.heights.get(lab)
            if h is None:
                raise ModuleError(f"no height recorded for {lab!r}")
            if h == "poly":
                raise ModuleError(f"{lab!r} has infinite height")
            if h == "ext":
                continue
            strata.setdefault(int(h), []).append(lab)
    return HeightStrata(strata, max(strata) if strata else 0)


def parse_relation(text: str, p: int, generators: Iterable) -> dict:
    """``"Sq1 y + P1 x"`` -> {"y": Sq1, "x": P1}.

    Each summand is an operation text followed by a generator label; a bare
    label means the identity operation.
    """
    gens = set(generators)
    out: dict = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        coeff = 1
        m = re.match(r"^(\d+)\*(.*)$", chunk)
        if m:
            coeff, chunk = int(m.group(1)), m.group(2)
        toks = chunk.split()
        if not toks:
            raise ModuleError(f"empty summand in relation {text!r}")
        lab = toks[-1]
        if lab not in gens:
            raise ModuleError(f"relation references unknown generator {lab!r}")
        op = " ".join(toks[:-1]) or "1"
        th = scalar_mul(parse_element(op, p), coeff)
        out[lab] = out[lab] + th if lab in out else th
    return out


def format_relation(rel: dict, p: int) -> str:
    parts = []
    for lab, th in rel.items():
        for w, c in th:
            s = format_word(w, p)
            s = lab if s == "1" else f"{s} {lab}"
            parts.append(s if c == 1 else f"{c}*{s}")
    return " + ".join(parts)
