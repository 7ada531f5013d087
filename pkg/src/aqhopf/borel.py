"""Borel-presented graded commutative algebras over F_p with a Steenrod action.

An algebra is a tensor product of monogenic pieces (polynomial, exterior,
truncated polynomial of height p^k), truncated at a degree cap.  Elements are
dicts mapping exponent tuples (one exponent per generator) to coefficients.
The Steenrod action is stored on generators only, one entry per letter (the
Bockstein or a single P^i / Sq^i); it extends to products by the Cartan
formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .steenrod import (
    BETA,
    SteenrodElement,
    adem_normalize,
    letter_degree,
    letters_up_to,
)

POLY, EXT, TRUNC = "poly", "ext", "trunc"


class ActionTableIncomplete(KeyError):
    pass


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class BorelGenerator:
    label: str
    degree: int
    kind: str = POLY
    height: int | None = None  # exponent k of the height p^k for truncated generators

    def __post_init__(self):
        if self.degree <= 0:
            raise PresentationError(f"generator {self.label} must have positive degree")
        if self.kind not in (POLY, EXT, TRUNC):
            raise PresentationError(f"unknown kind {self.kind!r}")
        if self.kind == TRUNC and (self.height is None or self.height < 1):
            raise PresentationError(f"truncated generator {self.label} needs height >= 1")

    def exponent_bound(self, p: int):
        """Largest allowed exponent, or None if unbounded."""
        if self.kind == EXT:
            return 1
        if self.kind == TRUNC:
            return p**self.height - 1
        return None


class BorelPresentation:
    """A Borel-presented algebra truncated at ``cap``.

    ``action`` maps ``(label, letter)`` to an element.  Entries forced by
    instability (top operation is the p-th power, higher ones vanish) and
    entries landing in a zero group need not be stored.  ``action=None``
    means the algebra carries no Steenrod data at all.
    """

    def __init__(self, p, cap, generators, action=None, notes=None):
        self.p = p
        self.cap = cap
        gens = []
        for g in generators:
            if p == 2 and g.kind == EXT:
                g = BorelGenerator(g.label, g.degree, TRUNC, 1)
            if p != 2 and g.kind == EXT and g.degree % 2 == 0:
                raise PresentationError(f"exterior generator {g.label} must have odd degree")
            if p != 2 and g.kind != EXT and g.degree % 2 == 1:
                raise PresentationError(f"generator {g.label} of odd degree must be exterior")
            gens.append(g)
        self.generators = tuple(gens)
        self.index = {g.label: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise PresentationError("duplicate generator labels")
        self.action = None if action is None else {
            k: self.clean(v) for k, v in action.items()
        }
        self.notes = dict(notes or {})
        self._basis_cache: dict = {}
        self._power_cache: dict = {}
        self._n = len(self.generators)

    # -- structure -----------------------------------------------------------

    @property
    def has_action(self) -> bool:
        return self.action is not None

    def zero(self) -> dict:
        return {}

    def one(self) -> dict:
        return {(0,) * self._n: 1}

    def gen(self, label) -> dict:
        i = self.index[label] if isinstance(label, str) else label
        m = [0] * self._n
        m[i] = 1
        if self.generators[i].kind == TRUNC and self.generators[i].exponent_bound(self.p) < 1:
            return {}
        return {tuple(m): 1}

    def mono_degree(self, m) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators))

    def degree_of(self, x: dict):
        degs = {self.mono_degree(m) for m in x}
        if len(degs) > 1:
            raise PresentationError("inhomogeneous element")
        return degs.pop() if degs else None

    def monomial_basis(self, d: int) -> list:
        """Exponent tuples of degree ``d``, in a fixed order."""
        if d in self._basis_cache:
            return self._basis_cache[d]
        out = []
        gens = self.generators
        p = self.p

        def rec(i, rem, acc):
            if i == len(gens):
                if rem == 0:
                    out.append(tuple(acc))
                return
            g = gens[i]
            bound = g.exponent_bound(p)
            top = rem // g.degree if bound is None else min(bound, rem // g.degree)
            for e in range(top + 1):
                acc.append(e)
                rec(i + 1, rem - e * g.degree, acc)
                acc.pop()

        if d >= 0:
            rec(0, d, [])
        self._basis_cache[d] = out
        return out

    def basis_index(self, d: int) -> dict:
        key = ("index", d)
        if key not in self._basis_cache:
            self._basis_cache[key] = {m: i for i, m in enumerate(self.monomial_basis(d))}
        return self._basis_cache[key]

    def dim(self, d: int) -> int:
        return len(self.monomial_basis(d)) if 0 <= d <= self.cap else 0

    def poincare_series(self) -> list:
        """Coefficients 0..cap of the product of the monogenic series."""
        D = self.cap
        series = [1] + [0] * D
        for g in self.generators:
            bound = g.exponent_bound(self.p)
            factor = [0] * (D + 1)
            e = 0
            while e * g.degree <= D and (bound is None or e <= bound):
                factor[e * g.degree] = 1
                e += 1
            new = [0] * (D + 1)
            for i, a in enumerate(series):
                if a:
                    for j in range(0, D + 1 - i):
                        if factor[j]:
                            new[i + j] += a * factor[j]
            series = new
        return series

    # -- arithmetic ----------------------------------------------------------

    def clean(self, x: dict) -> dict:
        """Reduce coefficients mod p and drop monomials past a truncation."""
        p = self.p
        bounds = [g.exponent_bound(p) for g in self.generators]
        out = {}
        for m, c in x.items():
            m = tuple(m)
            if c % p and all(b is None or e <= b for e, b in zip(m, bounds)):
                out[m] = c % p
        return out

    def add(self, *xs) -> dict:
        out: dict = {}
        for x in xs:
            for m, c in x.items():
                v = (out.get(m, 0) + c) % self.p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def scale(self, x: dict, c: int) -> dict:
        return self.clean({m: c * v for m, v in x.items()})

    def mono_mul(self, a, b):
        """Product of two monomials as ``(sign, monomial)``, or ``None`` if zero
        (or beyond the cap)."""
        gens = self.generators
        out = []
        for e1, e2, g in zip(a, b, gens):
            e = e1 + e2
            bound = g.exponent_bound(self.p)
            if bound is not None and e > bound:
                return None
            out.append(e)
        out = tuple(out)
        if self.mono_degree(out) > self.cap:
            return None
        sign = 1
        if self.p != 2:
            # moving odd generators of b past odd generators of a with larger index
            odd_a = 0
            for i in range(len(gens) - 1, -1, -1):
                if gens[i].kind == EXT:
                    if b[i] and odd_a % 2:
                        sign = -sign
                    odd_a += a[i]
        return sign, out

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        p = self.p
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                r = self.mono_mul(m1, m2)
                if r is None:
                    continue
                s, m = r
                v = (out.get(m, 0) + s * c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def power(self, x: dict, e: int) -> dict:
        out = self.one()
        for _ in range(e):
            out = self.mul(out, x)
            if not out:
                break
        return out

    def monomial_element(self, m) -> dict:
        return {tuple(m): 1}

    def to_vector(self, x: dict, d: int) -> np.ndarray:
        idx = self.basis_index(d)
        v = np.zeros(len(idx), dtype=np.int64)
        for m, c in x.items():
            if self.mono_degree(m) != d:
                raise PresentationError("element not in requested degree")
            v[idx[m]] = (v[idx[m]] + c) % self.p
        return v

    def from_vector(self, v, d: int) -> dict:
        basis = self.monomial_basis(d)
        return {basis[i]: int(c) for i, c in enumerate(v) if c % self.p}

    # -- Steenrod action -----------------------------------------------------

    def generator_action(self, i: int, letter: int) -> dict:
        """The letter applied to generator ``i`` (table lookup plus instability)."""
        g = self.generators[i]
        p = self.p
        target = g.degree + letter_degree(letter, p)
        if target > self.cap:
            raise ActionTableIncomplete(f"{g.label}: target degree {target} beyond cap {self.cap}")
        if letter != BETA:
            top = g.degree if p == 2 else g.degree / 2
            if letter == top:
                return self.power(self.gen(i), p)
            if letter > top:
                return {}
        if self.action is None:
            raise ActionTableIncomplete("algebra carries no Steenrod action")
        key = (g.label, letter)
        if key in self.action:
            return self.action[key]
        if self.dim(target) == 0:
            return {}
        raise ActionTableIncomplete(f"action table incomplete: no entry for letter {letter} on {g.label}")

    def _total_power(self, i: int, nmax: int) -> list:
        """[P^0 g, ..., P^nmax g] for generator ``i`` (cut at the cap)."""
        out = self._power_cache.setdefault(("gen", i), [self.gen(i)])
        g = self.generators[i]
        step = letter_degree(1, self.p)
        while len(out) <= nmax and g.degree + len(out) * step <= self.cap:
            out.append(self.generator_action(i, len(out)))
        return out[: nmax + 1]

    def _power_of_generator(self, i: int, e: int, n: int) -> list:
        """[P^0(g^e), ..., P^n(g^e)] for generator ``i``, memoized."""
        key = ("genpow", i, e)
        cached = self._power_cache.get(key)
        if cached is not None and len(cached) > n:
            return cached[: n + 1]
        tot = self._total_power(i, n)
        if e == 1:
            out = list(tot)
        else:
            lower = self._power_of_generator(i, e - 1, n)
            out = []
            for k in range(n + 1):
                acc: dict = {}
                for k1 in range(min(k, len(lower) - 1) + 1):
                    k2 = k - k1
                    if k2 < len(tot) and lower[k1] and tot[k2]:
                        acc = self.add(acc, self.mul(lower[k1], tot[k2]))
                out.append(acc)
        self._power_cache[key] = out
        return out

    def _reduced_power_mono(self, n: int, m) -> dict:
        """P^n (Sq^n at p = 2) of a monomial, by the Cartan formula."""
        key = ("mono", n, m)
        if key in self._power_cache:
            return self._power_cache[key]
        step = letter_degree(1, self.p)
        if self.mono_degree(m) + n * step > self.cap:
            raise ActionTableIncomplete("result beyond cap")
        # partial[k] = P^k of the product of the factors treated so far
        partial = [self.one()] + [{}] * n
        for i, e in enumerate(m):
            if not e:
                continue
            factor = self._power_of_generator(i, e, n)
            new = [{} for _ in range(n + 1)]
            for k1, x in enumerate(partial):
                if not x:
                    continue
                for k2 in range(0, min(n - k1, len(factor) - 1) + 1):
                    if factor[k2]:
                        new[k1 + k2] = self.add(new[k1 + k2], self.mul(x, factor[k2]))
            partial = new
        self._power_cache[key] = partial[n]
        return partial[n]

    def _beta_mono(self, m) -> dict:
        out: dict = {}
        for i, e in enumerate(m):
            if not e:
                continue
            g = self.generators[i]
            prefix = tuple(m[:i]) + (0,) * (self._n - i)
            rest = [0] * self._n
            rest[i + 1:] = m[i + 1:]
            bg = self.generator_action(i, BETA)
            if g.kind == EXT:
                mid = bg
            else:
                lower = [0] * self._n
                lower[i] = e - 1
                mid = self.scale(self.mul({tuple(lower): 1}, bg), e)
            sign = -1 if self.mono_degree(prefix) % 2 else 1
            term = self.mul(self.mul({prefix: sign}, mid), {tuple(rest): 1})
            out = self.add(out, term)
        return out

    def act_letter(self, letter: int, x: dict) -> dict:
        out: dict = {}
        for m, c in x.items():
            if letter == BETA and self.p != 2:
                y = self._beta_mono(m)
            else:
                y = self._reduced_power_mono(letter, m)
            out = self.add(out, self.scale(y, c))
        return out

    def act(self, op, x: dict) -> dict:
        """Apply a word or SteenrodElement to an element."""
        if isinstance(op, SteenrodElement):
            out: dict = {}
            for w, c in op:
                out = self.add(out, self.scale(self.act(w, x), c))
            return out
        for letter in reversed(tuple(op)):
            if letter == 0 and self.p == 2:
                continue
            x = self.act_letter(letter, x)
            if not x:
                break
        return x

    # -- display -------------------------------------------------------------

    def format_monomial(self, m) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.label)
            elif e:
                parts.append(f"{g.label}^{e}")
        return "*".join(parts) if parts else "1"

    def format_element(self, x: dict) -> str:
        if not x:
            return "0"
        terms = []
        for m in sorted(x):
            c = x[m]
            s = self.format_monomial(m)
            terms.append(s if c == 1 else f"{c}*{s}")
        return " + ".join(terms)

    def __repr__(self):
        gens = ", ".join(f"{g.label}:{g.degree}{g.kind[0]}" for g in self.generators)
        return f"BorelPresentation(p={self.p}, cap={self.cap}, [{gens}])"


def cartan_action(op, x: dict, algebra: BorelPresentation) -> dict:
    """Apply a Steenrod operation to an element of a Borel-presented algebra."""
    if not isinstance(op, SteenrodElement):
        op = tuple(op)
    return algebra.act(op, x)


def full_action_table(algebra: BorelPresentation, rule) -> dict:
    """Build an action table from ``rule(generator_index, letter) -> element``
    for every letter whose target stays within the cap."""
    table = {}
    for i, g in enumerate(algebra.generators):
        for letter in letters_up_to(algebra.p, algebra.cap - g.degree):
            table[(g.label, letter)] = rule(i, letter)
    return table


def tensor(*algebras: BorelPresentation) -> BorelPresentation:
    """Tensor product (generator labels must be disjoint)."""
    p = algebras[0].p
    cap = min(a.cap for a in algebras)
    gens = [g for a in algebras for g in a.generators if g.degree <= cap]
    labels = [g.label for g in gens]
    action = {} if all(a.has_action for a in algebras) else None
    pos = {lab: i for i, lab in enumerate(labels)}
    for a in algebras:
        if a.action is None or action is None:
            continue
        for (label, letter), val in a.action.items():
            if label not in pos:
                continue
            if a.generators[a.index[label]].degree + letter_degree(letter, p) > cap:
                continue
            new = {}
            for m, c in val.items():
                full = [0] * len(gens)
                for j, e in enumerate(m):
                    if e:
                        full[pos[a.generators[j].label]] = e
                new[tuple(full)] = c
            action[(label, letter)] = new
    return BorelPresentation(p, cap, gens, action)


def steenrod_word(op, p) -> SteenrodElement:
    return adem_normalize(op, p)


@dataclass
class AlgebraMap:
    """An algebra map given on generators; extended multiplicatively."""

    source: BorelPresentation
    target: BorelPresentation
    images: dict = field(default_factory=dict)  # source label -> target element

    def image_of_monomial(self, m) -> dict:
        out = self.target.one()
        for i, e in enumerate(m):
            if e:
                img = self.images[self.source.generators[i].label]
                out = self.target.mul(out, self.target.power(img, e))
                if not out:
                    break
        return out

    def apply(self, x: dict) -> dict:
        out: dict = {}
        for m, c in x.items():
            out = self.target.add(out, self.target.scale(self.image_of_monomial(m), c))
        return out

    def matrix(self, d: int) -> np.ndarray:
        """Rows = images of the source monomial basis in degree ``d``."""
        rows = [
            self.target.to_vector(self.image_of_monomial(m), d)
            for m in self.source.monomial_basis(d)
        ]
        if not rows:
            return np.zeros((0, self.target.dim(d)), dtype=np.int64)
        return np.array(rows, dtype=np.int64).reshape(len(rows), self.target.dim(d))
