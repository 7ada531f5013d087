"""Mod-p Steenrod algebra in the admissible basis.

An operation word is a tuple of letters, read left to right as composition
(the rightmost letter acts first).  At p = 2 the letter ``i >= 1`` stands for
Sq^i.  At odd p the letter ``0`` is the Bockstein and ``i >= 1`` is P^i.

Normal forms are computed by rewriting with the Adem relations.  A word is
normalized by first normalizing its tail and then multiplying a single letter
onto admissible monomials (``_mul_letter``).  Each Adem rewrite strictly
lowers the moment sum_k k*deg(letter_k) of a word while fixing its degree, so
the recursion terminates; both functions are memoized (insert-only caches).
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import comb

BETA = 0


class SteenrodError(ValueError):
    pass


def check_prime(p: int) -> int:
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise SteenrodError(f"{p} is not prime")
    return p


def letter_degree(letter: int, p: int) -> int:
    if p == 2:
        return letter
    return 1 if letter == BETA else 2 * letter * (p - 1)


def degree(word, p: int) -> int:
    return sum(letter_degree(x, p) for x in word)


def is_admissible(word, p: int) -> bool:
    if p == 2:
        return all(x >= 1 for x in word) and all(
            a >= 2 * b for a, b in zip(word, word[1:])
        )
    if any(x < 0 for x in word):
        return False
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a == BETA and b == BETA:
            return False
        if a == BETA:
            continue
        if b != BETA:
            if a < p * b:
                return False
        elif i + 2 < len(word) and a < p * word[i + 2] + 1:
            return False
    return True


def to_sequence(word, p: int) -> tuple:
    """The sequence (e0, i1, e1, ..., in, en) of an odd-primary word, or the
    plain tuple (i1, ..., in) at p = 2."""
    if p == 2:
        return tuple(word)
    seq = [0]
    for x in word:
        if x == BETA:
            if seq[-1]:
                raise SteenrodError("two consecutive Bocksteins")
            seq[-1] = 1
        else:
            seq += [x, 0]
    return tuple(seq)


def from_sequence(seq, p: int) -> tuple:
    if p == 2:
        return tuple(seq)
    if len(seq) % 2 == 0:
        raise SteenrodError("odd-primary sequences have odd length")
    word = []
    for k, x in enumerate(seq):
        if k % 2 == 0:
            if x not in (0, 1):
                raise SteenrodError("Bockstein exponents must be 0 or 1")
            if x:
                word.append(BETA)
        elif x > 0:
            word.append(x)
        else:
            raise SteenrodError("reduced powers must be positive")
    return tuple(word)


def excess(word, p: int) -> int:
    """Excess of an admissible word: the least n such that the operation is
    nonzero on a degree-n generator of a free unstable module."""
    if not is_admissible(word, p):
        raise SteenrodError(f"{format_word(word, p)} is not admissible")
    if not word:
        return 0
    if p == 2:
        return word[0] - sum(word[1:])
    seq = to_sequence(word, p)
    if len(seq) == 1:
        return seq[0]
    tail = from_sequence((seq[2],) + tuple(seq[3:]), p)
    return 2 * seq[1] + seq[0] - degree(tail, p)


def _binom(n: int, k: int, p: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k) % p


@lru_cache(maxsize=None)
def adem(a: int, b: int, p: int, beta_between: bool = False) -> tuple:
    """Adem expansion of Sq^a Sq^b (p = 2), P^a P^b or P^a b P^b (odd p).

    Only valid in the inadmissible range.  Returns ``((word, coeff), ...)``.
    """
    out: dict = {}

    def add(word, c):
        c %= p
        if c:
            w = tuple(x for x in word if not (p == 2 and x == 0))
            out[w] = (out.get(w, 0) + c) % p
            if not out[w]:
                del out[w]

    if p == 2:
        assert 0 < a < 2 * b
        for c in range(a // 2 + 1):
            add((a + b - c, c), _binom(b - c - 1, a - 2 * c, 2))
    elif not beta_between:
        assert 0 < a < p * b
        for c in range(a // p + 1):
            sign = -1 if (a + c) % 2 else 1
            w = (a + b - c, c) if c else (a + b - c,)
            add(w, sign * _binom((p - 1) * (b - c) - 1, a - p * c, p))
    else:
        assert 0 < a <= p * b
        for c in range(a // p + 1):
            sign = -1 if (a + c) % 2 else 1
            w = (BETA, a + b - c, c) if c else (BETA, a + b - c)
            add(w, sign * _binom((p - 1) * (b - c), a - p * c, p))
        for c in range((a - 1) // p + 1):
            sign = -1 if (a + c + 1) % 2 else 1
            w = (a + b - c, BETA, c) if c else (a + b - c, BETA)
            add(w, sign * _binom((p - 1) * (b - c) - 1, a - p * c - 1, p))
    return tuple(sorted(out.items()))


def _accumulate(out: dict, terms, scale: int, p: int) -> None:
    for w, c in terms:
        v = (out.get(w, 0) + scale * c) % p
        if v:
            out[w] = v
        else:
            out.pop(w, None)


@lru_cache(maxsize=None)
def _mul_letter(letter: int, m: tuple, p: int) -> tuple:
    """letter * m in normal form, for m admissible."""
    if not m:
        return (((letter,), 1),)
    out: dict = {}
    if p == 2:
        b = m[0]
        if letter >= 2 * b:
            return (((letter,) + m, 1),)
        for w, c in adem(letter, b, 2):
            _accumulate(out, _normalize(w + m[1:], 2), c, 2)
        return tuple(sorted(out.items()))
    if letter == BETA:
        if m[0] == BETA:
            return ()
        return (((BETA,) + m, 1),)
    a = letter
    if m[0] == BETA:
        if len(m) == 1 or a >= p * m[1] + 1:
            return (((a,) + m, 1),)
        for w, c in adem(a, m[1], p, True):
            _accumulate(out, _normalize(w + m[2:], p), c, p)
    else:
        if a >= p * m[0]:
            return (((a,) + m, 1),)
        for w, c in adem(a, m[0], p):
            _accumulate(out, _normalize(w + m[1:], p), c, p)
    return tuple(sorted(out.items()))


@lru_cache(maxsize=None)
def _normalize(word: tuple, p: int) -> tuple:
    if is_admissible(word, p):
        return ((word, 1),)
    out: dict = {}
    for m, c in _normalize(word[1:], p):
        _accumulate(out, _mul_letter(word[0], m, p), c, p)
    return tuple(sorted(out.items()))


def clean_word(word, p: int) -> tuple:
    """Drop identity letters (Sq^0); reject letters invalid for ``p``."""
    word = tuple(int(x) for x in word)
    if any(x < 0 for x in word):
        raise SteenrodError("negative letter")
    if p == 2:
        return tuple(x for x in word if x)
    return word


def adem_normalize(word, p: int) -> "SteenrodElement":
    """Admissible normal form of a word (or of a SteenrodElement)."""
    if isinstance(word, SteenrodElement):
        return word
    return SteenrodElement(p, dict(_normalize(clean_word(word, p), p)))


class SteenrodElement:
    """A homogeneous F_p-combination of admissible monomials."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=None):
        self.p = p
        terms = {tuple(w): c % p for w, c in (terms or {}).items()}
        self.terms = {w: c for w, c in sorted(terms.items()) if c}
        degs = {degree(w, p) for w in self.terms}
        if len(degs) > 1:
            raise SteenrodError("Steenrod elements must be homogeneous")

    @classmethod
    def word(cls, word, p: int) -> "SteenrodElement":
        return adem_normalize(word, p)

    @classmethod
    def identity(cls, p: int) -> "SteenrodElement":
        return cls(p, {(): 1})

    @property
    def degree(self):
        for w in self.terms:
            return degree(w, self.p)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, SteenrodElement):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, tuple(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        _accumulate(out, other.terms.items(), 1, self.p)
        return SteenrodElement(self.p, out)

    def __neg__(self):
        return SteenrodElement(self.p, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar: int):
        return SteenrodElement(self.p, {w: scalar * c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return scalar_mul(self, other)
        return compose(self, other)

    def __repr__(self):
        return f"SteenrodElement({self.p}, {format_element(self)!r})"

    def __str__(self):
        return format_element(self)


def scalar_mul(a: SteenrodElement, c: int) -> SteenrodElement:
    return SteenrodElement(a.p, {w: c * x for w, x in a.terms.items()})


def compose(a: SteenrodElement, b: SteenrodElement) -> SteenrodElement:
    """The product a∘b in normal form."""
    if a.p != b.p:
        raise SteenrodError("primes differ")
    p = a.p
    out: dict = {}
    for u, c in a.terms.items():
        for v, d in b.terms.items():
            _accumulate(out, _normalize(u + v, p), c * d, p)
    return SteenrodElement(p, out)


@lru_cache(maxsize=None)
def admissibles(deg: int, p: int) -> tuple:
    """All admissible words of the given degree, sorted."""
    return tuple(sorted(_admissible_words(deg, p, None, False)))


def _admissible_words(deg, p, bound, after_beta):
    # words of degree deg whose first P-letter is <= bound
    if deg == 0:
        yield ()
        return
    if deg < 0:
        return
    if p == 2:
        top = deg if bound is None else min(bound, deg)
        for i in range(1, top + 1):
            for rest in _admissible_words(deg - i, 2, i // 2, False):
                yield (i,) + rest
        return
    if not after_beta:
        for rest in _admissible_words(deg - 1, p, bound, True):
            if not rest or rest[0] != BETA:
                yield (BETA,) + rest
    step = 2 * (p - 1)
    top = deg // step if bound is None else min(bound, deg // step)
    for i in range(1, top + 1):
        rem = deg - i * step
        # the next P-letter must satisfy i >= p*j (+1 if a Bockstein sits between)
        for rest in _admissible_words(rem, p, i // p, False):
            if rest and rest[0] == BETA and len(rest) > 1 and i < p * rest[1] + 1:
                continue
            yield (i,) + rest


def generator_letters(p: int, max_degree: int) -> list:
    """The algebra generators (Bockstein and P^{p^k} resp. Sq^{2^k}) up to a degree."""
    out = [] if p == 2 else ([BETA] if max_degree >= 1 else [])
    k = 1
    while letter_degree(k, p) <= max_degree:
        out.append(k)
        k *= p
    return out


def letters_up_to(p: int, max_degree: int) -> list:
    """All single letters of degree <= max_degree."""
    out = [] if p == 2 else ([BETA] if max_degree >= 1 else [])
    i = 1
    while letter_degree(i, p) <= max_degree:
        out.append(i)
        i += 1
    return out


# -- text syntax -------------------------------------------------------------

_TOKEN = re.compile(r"^(?:Sq(\d+)|P(\d+)|(b))$")


def parse_word(text: str, p: int) -> tuple:
    """Parse ``Sq2 Sq1``, ``b P3 b`` or ``1`` into a word."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    word = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise SteenrodError(f"bad operation token {tok!r}")
        sq, pw, b = m.groups()
        if b:
            if p == 2:
                raise SteenrodError("use Sq1 for the Bockstein at p = 2")
            word.append(BETA)
        elif sq is not None:
            if p != 2:
                raise SteenrodError("Sq letters only exist at p = 2")
            word.append(int(sq))
        else:
            if int(pw):
                word.append(int(pw))
    return clean_word(word, p)


def format_letter(letter: int, p: int) -> str:
    if p == 2:
        return f"Sq{letter}"
    return "b" if letter == BETA else f"P{letter}"


def format_word(word, p: int) -> str:
    if not word:
        return "1"
    return " ".join(format_letter(x, p) for x in word)


def format_element(a: SteenrodElement) -> str:
    if not a.terms:
        return "0"
    parts = []
    for w, c in a.terms.items():
        parts.append(format_word(w, a.p) if c == 1 else f"{c}*{format_word(w, a.p)}")
    return " + ".join(parts)


def parse_element(text: str, p: int) -> SteenrodElement:
    """Parse a sum such as ``Sq3 Sq1 + 2*P1`` (terms need not be admissible)."""
    text = text.strip()
    if text == "0":
        return SteenrodElement(p)
    out = SteenrodElement(p)
    for term in text.split("+"):
        term = term.strip()
        c = 1
        m = re.match(r"^(\d+)\*(.*)$", term)
        if m:
            c, term = int(m.group(1)), m.group(2)
        out = out + scalar_mul(adem_normalize(parse_word(term, p), p), c)
    return out
