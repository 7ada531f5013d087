"""Text formats for Borel presentations and module presentations.

Borel presentation::

    hopf p=3 cap=60
    gen z 3 ext
    gen x 2 trunc 1
    gen y 2 poly
    act P1 x = x^3
    act b z = x

A header token ``action=none`` marks an algebra without Steenrod data.

Module presentation::

    module p=3 cap=60
    gen x 2
    gen y 6
    rel P1 x + y

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import json
import re

from .borel import EXT, POLY, TRUNC, BorelGenerator, BorelPresentation, PresentationError
from .steenrod import SteenrodError, check_prime, format_letter, parse_word
from .unstable import ModuleError, ModulePresentation, format_relation, parse_relation

LABEL = re.compile(r"^[A-Za-z][A-Za-z0-9_']*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, body


def _col(line: str, token: str, start: int = 0) -> int:
    i = line.find(token, start)
    return (i if i >= 0 else len(line.rstrip())) + 1


def _header(no, line, kind):
    toks = line.split()
    if not toks or toks[0] != kind:
        raise ParseError(f"expected header starting with {kind!r}", no, 1)
    opts = {}
    for tok in toks[1:]:
        if "=" not in tok:
            raise ParseError(f"malformed header option {tok!r}", no, _col(line, tok))
        k, v = tok.split("=", 1)
        opts[k] = (v, _col(line, tok))
    for key in ("p", "cap"):
        if key not in opts:
            raise ParseError(f"header lacks {key}=", no, len(line.rstrip()) + 1)
    try:
        p = check_prime(int(opts["p"][0]))
    except (ValueError, SteenrodError) as exc:
        raise ParseError(f"bad prime: {exc}", no, opts["p"][1]) from None
    try:
        cap = int(opts["cap"][0])
    except ValueError:
        raise ParseError("cap must be an integer", no, opts["cap"][1]) from None
    return p, cap, opts


def _int(tok, no, line, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", no, _col(line, tok)) from None


def _label(tok, no, line):
    if not LABEL.match(tok):
        raise ParseError(f"invalid label {tok!r}", no, _col(line, tok))
    return tok


# -- elements ---------------------------------------------------------------------


def parse_algebra_element(text: str, algebra_gens: list, p: int) -> dict:
    """``2*x^3*y + z`` -> {exponent tuple: coefficient} (factors in generator order)."""
    index = {lab: i for i, lab in enumerate(algebra_gens)}
    out: dict = {}
    text = text.strip()
    if text == "0":
        return out
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise ValueError("empty term")
        c = 1
        m = re.match(r"^(\d+)\*(.*)$", term)
        if m:
            c, term = int(m.group(1)), m.group(2).strip()
        exps = [0] * len(algebra_gens)
        if term != "1":
            for factor in term.split("*"):
                factor = factor.strip()
                lab, _, e = factor.partition("^")
                if lab not in index:
                    raise ValueError(f"unknown generator {lab!r}")
                exps[index[lab]] += int(e) if e else 1
        key = tuple(exps)
        out[key] = (out.get(key, 0) + c) % p
        if not out[key]:
            del out[key]
    return out


# -- Borel presentations --------------------------------------------------------------


def parse_hopf(text: str) -> BorelPresentation:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    no, line = lines[0]
    p, cap, opts = _header(no, line, "hopf")
    has_action = opts.get("action", ("table", 0))[0] != "none"
    gens = []
    acts = []
    for no, line in lines[1:]:
        toks = line.split()
        if toks[0] == "gen":
            if len(toks) < 4:
                raise ParseError("expected: gen LABEL DEGREE KIND [HEIGHT]", no, len(line.rstrip()) + 1)
            lab = _label(toks[1], no, line)
            deg = _int(toks[2], no, line, "degree")
            kind = toks[3]
            if kind not in (POLY, EXT, TRUNC):
                raise ParseError(f"unknown kind {kind!r} (poly, ext, trunc)", no, _col(line, kind, len(toks[0]) + len(toks[1])))
            height = None
            if kind == TRUNC:
                if len(toks) != 5:
                    raise ParseError("trunc needs a height exponent", no, len(line.rstrip()) + 1)
                height = _int(toks[4], no, line, "height")
            elif len(toks) != 4:
                raise ParseError("unexpected trailing tokens", no, _col(line, toks[4]))
            try:
                gens.append(BorelGenerator(lab, deg, kind, height))
            except PresentationError as exc:
                raise ParseError(str(exc), no, 1) from None
        elif toks[0] == "act":
            if "=" not in line:
                raise ParseError("expected: act LETTER LABEL = ELEMENT", no, len(line.rstrip()) + 1)
            lhs, rhs = line.split("=", 1)
            lt = lhs.split()
            if len(lt) != 3:
                raise ParseError("expected: act LETTER LABEL = ELEMENT", no, 1)
            acts.append((no, line, lt[1], lt[2], rhs))
        else:
            raise ParseError(f"unknown directive {toks[0]!r}", no, _col(line, toks[0]))
    labels = [g.label for g in gens]
    action = {} if has_action else None
    for no, line, letter_tok, lab, rhs in acts:
        if not has_action:
            raise ParseError("act line in an algebra declared action=none", no, 1)
        try:
            word = parse_word(letter_tok, p)
        except (ValueError, SteenrodError) as exc:
            raise ParseError(str(exc), no, _col(line, letter_tok, 3)) from None
        if len(word) != 1:
            raise ParseError("act takes a single letter", no, _col(line, letter_tok, 3))
        if lab not in labels:
            raise ParseError(f"unknown generator {lab!r}", no, _col(line, lab, 3 + len(letter_tok)))
        try:
            val = parse_algebra_element(rhs, labels, p)
        except ValueError as exc:
            raise ParseError(str(exc), no, line.index("=") + 2) from None
        action[(lab, word[0])] = val
    try:
        return BorelPresentation(p, cap, gens, action)
    except PresentationError as exc:
        raise ParseError(str(exc), lines[0][0], 1) from None


def format_hopf(P: BorelPresentation) -> str:
    head = f"hopf p={P.p} cap={P.cap}"
    if not P.has_action:
        head += " action=none"
    out = [head]
    for g in P.generators:
        if g.kind == TRUNC:
            out.append(f"gen {g.label} {g.degree} trunc {g.height}")
        else:
            out.append(f"gen {g.label} {g.degree} {g.kind}")
    if P.has_action:
        order = {g.label: i for i, g in enumerate(P.generators)}
        for (lab, letter) in sorted(P.action, key=lambda k: (order[k[0]], k[1])):
            out.append(f"act {format_letter(letter, P.p)} {lab} = {P.format_element(P.action[(lab, letter)])}")
    return "\n".join(out) + "\n"


def hopf_to_dict(P: BorelPresentation) -> dict:
    return {
        "p": P.p,
        "cap": P.cap,
        "generators": [
            {"label": g.label, "degree": g.degree, "kind": g.kind, "height": g.height}
            for g in P.generators
        ],
        "poincare_series": P.poincare_series(),
    }


# -- module presentations ----------------------------------------------------------------


def parse_module(text: str):
    """Returns ``(ModulePresentation, cap)``."""
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    no, line = lines[0]
    p, cap, _ = _header(no, line, "module")
    gens = []
    rels = []
    for no, line in lines[1:]:
        toks = line.split()
        if toks[0] == "gen":
            if len(toks) != 3:
                raise ParseError("expected: gen LABEL DEGREE", no, 1)
            gens.append((_label(toks[1], no, line), _int(toks[2], no, line, "degree")))
        elif toks[0] == "rel":
            rels.append((no, line, line.split(None, 1)[1] if len(toks) > 1 else ""))
        else:
            raise ParseError(f"unknown directive {toks[0]!r}", no, _col(line, toks[0]))
    labels = [g for g, _ in gens]
    relations = []
    for no, line, body in rels:
        try:
            relations.append(parse_relation(body, p, labels))
        except (ValueError, SteenrodError) as exc:
            raise ParseError(str(exc), no, _col(line, body)) from None
    pres = ModulePresentation(p, gens, relations)
    try:
        for r in relations:
            pres.relation_degree(r)
    except ModuleError as exc:
        raise ParseError(str(exc), lines[0][0], 1) from None
    return pres, cap


def format_module(pres: ModulePresentation, cap: int) -> str:
    out = [f"module p={pres.p} cap={cap}"]
    out += [f"gen {g} {d}" for g, d in pres.generators]
    out += [f"rel {format_relation(r, pres.p)}" for r in pres.relations]
    return "\n".join(out) + "\n"


def parse_presentation(text: str):
    """Dispatch on the header keyword."""
    for no, line in _lines(text):
        head = line.split()[0]
        if head == "hopf":
            return parse_hopf(text)
        if head == "module":
            return parse_module(text)
        raise ParseError(f"unknown header {head!r}", no, 1)
    raise ParseError("empty input", 1, 1)


def dumps(obj) -> str:
    """Deterministic JSON."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"

