"""Mod-p cohomology of Eilenberg-Mac Lane spaces as Borel presentations.

H*(K(Z/p, n)) is free graded-commutative on the classes P^I iota_n with I
admissible and e(I) < n, together (at odd p) with the classes of excess
exactly n that begin with a Bockstein.  An admissible class of excess n not
beginning with a Bockstein is the p-th power of the class obtained by
dropping its first letter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .borel import EXT, POLY, BorelGenerator, BorelPresentation, PresentationError
from .steenrod import BETA, adem_normalize, admissibles, check_prime, excess, format_letter, letter_degree, letters_up_to

INT, CYCLIC, PRUFER = "Z", "Z/p^r", "Z/p^inf"


@dataclass(frozen=True)
class EMSpec:
    group: str
    n: int
    p: int
    cap: int
    r: int = 1

    def __post_init__(self):
        check_prime(self.p)
        if self.group not in (INT, CYCLIC, PRUFER):
            raise ValueError(f"unknown coefficient group {self.group!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.r < 1:
            raise ValueError("r must be at least 1")


def parse_group(text: str) -> tuple:
    """``Z``, ``Z/p``, ``Z/p^r`` (e.g. ``Z/p^2``) or ``Z/p^inf`` -> (group, r)."""
    t = text.strip()
    if t == "Z":
        return INT, 1
    if t in ("Z/p", "Z/p^1"):
        return CYCLIC, 1
    if t in ("Z/p^inf", "Prufer"):
        return PRUFER, 1
    if t.startswith("Z/p^"):
        return CYCLIC, int(t[4:])
    raise ValueError(f"unknown coefficient group {text!r}")


def group_text(spec: EMSpec) -> str:
    if spec.group == CYCLIC:
        return "Z/p" if spec.r == 1 else f"Z/p^{spec.r}"
    return spec.group


def loop_shift(spec: EMSpec) -> EMSpec:
    """K(A, n) -> K(A, n-1)."""
    if spec.n <= 2:
        raise ValueError("loop_shift needs n >= 3")
    return EMSpec(spec.group, spec.n - 1, spec.p, spec.cap, spec.r)


def word_label(word, base: str, p: int) -> str:
    if not word:
        return base
    return "".join(format_letter(x, p) for x in word) + "_" + base


def _is_generator(word, n, p, kill_beta) -> bool:
    if kill_beta and word and word[-1] == (BETA if p != 2 else 1):
        return False
    e = excess(word, p)
    if e < n:
        return True
    return p != 2 and e == n and bool(word) and word[0] == BETA


class _Family:
    """Generators P^I x for one fundamental class x of degree n."""

    def __init__(self, base, n, p, cap, kill_beta):
        self.base, self.n, self.p, self.cap, self.kill_beta = base, n, p, cap, kill_beta
        self.words = []
        for d in range(0, cap - n + 1):
            for w in admissibles(d, p):
                if _is_generator(w, n, p, kill_beta):
                    self.words.append(w)

    def label(self, word) -> str:
        return word_label(word, self.base, self.p)


def em_cohomology(spec: EMSpec) -> BorelPresentation:
    p, cap = spec.p, spec.cap
    if spec.group == PRUFER:
        n_eff = spec.n + 1
        families = [("i%d" % n_eff, n_eff, True)]
    elif spec.group == INT:
        families = [("i%d" % spec.n, spec.n, True)]
    elif spec.r == 1:
        families = [("i%d" % spec.n, spec.n, False)]
    else:
        families = [("i%d" % spec.n, spec.n, True), ("b%d_i%d" % (spec.r, spec.n), spec.n + 1, True)]
    for _, n, _ in families:
        if n > cap:
            raise PresentationError(f"cap {cap} too small to hold the fundamental class of degree {n}")
    fams = [_Family(b, n, p, cap, kb) for b, n, kb in families]

    gens = []
    owner = {}
    for f in fams:
        for w in f.words:
            d = f.n + sum(letter_degree(x, p) for x in w)
            kind = POLY if (p == 2 or d % 2 == 0) else EXT
            lab = f.label(w)
            gens.append(BorelGenerator(lab, d, kind))
            owner[lab] = (f, w)
    gens.sort(key=lambda g: (g.degree, g.label))
    B0 = BorelPresentation(p, cap, gens, None)

    def express(f: _Family, w) -> dict:
        """The class P^w x as an element of B0."""
        if f.kill_beta and w and w[-1] == (BETA if p != 2 else 1):
            return {}
        lab = f.label(w)
        if lab in B0.index:
            return B0.gen(lab)
        e = excess(w, p)
        if e > f.n:
            return {}
        if e == f.n and (p == 2 or w[0] != BETA):
            return B0.power(express(f, w[1:]), p)
        raise PresentationError(f"unexpected class {lab}")

    action = {}
    for g in gens:
        f, w = owner[g.label]
        for letter in letters_up_to(p, cap - g.degree):
            nf = adem_normalize((letter,) + w, p)
            val: dict = {}
            for word, c in nf:
                val = B0.add(val, B0.scale(express(f, word), c))
            action[(g.label, letter)] = val
    words = {lab: [owner[lab][0].base, list(owner[lab][1])] for lab in owner}
    return BorelPresentation(p, cap, gens, action,
                             notes={"em": [group_text(spec), spec.n, p], "words": words})
