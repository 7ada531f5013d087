"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from .aq import aq, aq_h1, les_check
from .borel import EXT, POLY, TRUNC, AlgebraMap, BorelGenerator, BorelPresentation, PresentationError
from .em import EMSpec, em_cohomology, parse_group
from .hopf import HopfError, frobenius_image, hopf_kernel, hopf_quotient, indecomposables, trivial_subalgebra
from .scenarios import SCENARIOS, run_scenario
from .steenrod import SteenrodError, format_element, format_word, parse_element
from .textio import ParseError, dumps, format_hopf, hopf_to_dict, parse_hopf, parse_presentation
from .unstable import even_part, f_basis, fg_check, realize

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _load_hopf(path: str) -> BorelPresentation:
    return parse_hopf(_read(path))


# -- subcommands --------------------------------------------------------------------


def cmd_adem(args) -> int:
    p = args.p
    elem = parse_element(" ".join(args.word), p)
    if args.format == "json":
        _emit(args, dumps({"p": p, "input": " ".join(args.word), "normal_form": format_element(elem),
                           "degree": elem.degree}))
    else:
        _emit(args, format_element(elem) + "\n")
    return OK


def cmd_fbasis(args) -> int:
    p, n = args.p, args.n
    degrees = [args.d] if args.d is not None else list(range(n, args.cap + 1))
    table = {d: [format_word(w, p) for w in f_basis(n, d, p)] for d in degrees}
    if args.format == "json":
        _emit(args, dumps({"p": p, "n": n, "basis": {str(d): v for d, v in table.items() if v or args.d is not None}}))
    else:
        lines = [f"{d}: {', '.join(v)}" for d, v in table.items() if v or args.d is not None]
        _emit(args, "\n".join(lines) + "\n")
    return OK


def cmd_em(args) -> int:
    group, r = parse_group(args.group)
    B = em_cohomology(EMSpec(group, args.n, args.p, args.cap, r))
    _emit(args, dumps(hopf_to_dict(B)) if args.format == "json" else format_hopf(B))
    return OK


def _frobenius_pair(B):
    A, inc = frobenius_image(B)
    return hopf_quotient(B, A, inc)


def cmd_hopf(args) -> int:
    B = _load_hopf(args.file)
    if args.action == "frobenius":
        out, _ = frobenius_image(B)
    elif args.action == "quotient":
        if args.by == "trivial":
            A, inc = trivial_subalgebra(B)
            seq = hopf_quotient(B, A, inc)
        else:
            seq = _frobenius_pair(B)
        out = seq.C
    else:
        out = _kernel_of_detection(B, args.detect)
    _emit(args, dumps(hopf_to_dict(out)) if args.format == "json" else format_hopf(out))
    return OK


def _kernel_of_detection(B: BorelPresentation, label: str) -> BorelPresentation:
    """Kernel of the map sending ``label`` to a height-p class and the rest to 0."""
    if label not in B.index:
        raise UsageError(f"unknown generator {label!r}")
    g = B.generators[B.index[label]]
    odd = B.p != 2 and g.degree % 2 == 1
    E = BorelPresentation(B.p, B.cap, [BorelGenerator("s", g.degree, EXT if odd else TRUNC, None if odd else 1)], None)
    pi = AlgebraMap(B, E, {h.label: (E.gen("s") if h.label == label else {}) for h in B.generators})
    gens = [(h.label, B.gen(h.label), h.kind, h.height) for h in B.generators if h.label != label]
    if not odd and B.p * g.degree <= B.cap:
        power = B.power(B.gen(label), B.p)
        if power:
            gens.append((f"{label}_pow", power, POLY if g.kind == POLY else TRUNC,
                         None if g.kind == POLY else g.height - 1))
    K, _ = hopf_kernel(B, gens, pi)
    return K


def cmd_aq(args) -> int:
    B = _load_hopf(args.file)
    if args.action == "h0":
        res = aq(B).to_dict()["h0"]
    elif args.action == "h1":
        res = aq(B).to_dict()["h1"]
    else:
        rep = les_check(_frobenius_pair(B))
        _emit(args, dumps(rep.to_dict()) if args.format == "json" else _les_text(rep))
        return OK if rep.passed else FAILED
    if args.format == "json":
        _emit(args, dumps(res))
    else:
        lines = [f"{d}: {', '.join(labs)}" for d, labs in res["generators"].items()]
        _emit(args, "\n".join(lines) + "\n" if lines else "0\n")
    return OK


def _les_text(rep) -> str:
    lines = []
    for d, v in sorted(rep.degrees.items()):
        status = "ok" if not v["failures"] else "FAIL " + "; ".join(v["failures"])
        lines.append(f"{d}: dims {v['dims']} {status}")
    lines.append("exact" if rep.passed else "not exact")
    return "\n".join(lines) + "\n"


def cmd_fg(args) -> int:
    obj = parse_presentation(_read(args.file))
    if isinstance(obj, tuple):
        pres, cap = obj
        M = realize(pres, cap)
    else:
        M = aq_h1(obj) if args.target == "h1" else indecomposables(obj)
    if args.target == "even":
        M = even_part(M)
    cap = args.cap if args.cap is not None else M.cap
    cert = fg_check(M, args.g, cap)
    if args.format == "json":
        _emit(args, dumps(cert.to_dict()))
    else:
        gens = ", ".join(f"{lab} ({d})" for d, lab in cert.chosen_generators)
        verdict = "generated" if cert.generated_through_D else f"not generated; failures at {cert.failure_degrees}"
        _emit(args, f"generators: {gens}\n{verdict} through {cap}\n")
    return OK if cert.generated_through_D else FAILED


def cmd_scenario(args) -> int:
    if args.action == "list":
        _emit(args, "\n".join(sorted(SCENARIOS)) + "\n")
        return OK
    names = sorted(SCENARIOS) if args.name == "all" else [args.name]
    code = OK
    lines = []
    for name in names:
        if name not in SCENARIOS:
            raise UsageError(f"unknown scenario {name!r}")
        res = run_scenario(name, regenerate=args.regenerate)
        if args.format == "json" and len(names) == 1:
            _emit(args, res["output"])
        lines.append(f"{name}: {'match' if res['match'] else 'MISMATCH at ' + res['divergence']}")
        if not res["match"]:
            code = FAILED
    if not (args.format == "json" and len(names) == 1):
        _emit(args, "\n".join(lines) + "\n")
    elif code:
        sys.stderr.write(lines[0] + "\n")
    return code


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="prime (default 2)")
    common.add_argument("--cap", type=int, default=None, help="degree cap")
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--out", default=None, help="write output to this file")

    ap = argparse.ArgumentParser(prog="aqhopf", description="Andre-Quillen homology of unstable Hopf algebras")
    sub = ap.add_subparsers(dest="command", required=True)

    adem = sub.add_parser("adem", help="Steenrod algebra normal forms")
    adem_sub = adem.add_subparsers(dest="action", required=True)
    norm = adem_sub.add_parser("normalize", parents=[common], help="admissible normal form of a word or sum")
    norm.add_argument("word", nargs="+", help="e.g. Sq2 Sq2, or b P3 b")
    norm.set_defaults(func=cmd_adem)

    fb = sub.add_parser("fbasis", parents=[common], help="basis of the free unstable module F(n)")
    fb.add_argument("--n", type=int, required=True)
    fb.add_argument("--d", type=int, default=None, help="single degree")
    fb.set_defaults(func=cmd_fbasis)

    em = sub.add_parser("em", help="Eilenberg-Mac Lane cohomology")
    em_sub = em.add_subparsers(dest="action", required=True)
    gen = em_sub.add_parser("gen", parents=[common], help="emit a Borel presentation")
    gen.add_argument("--group", default="Z/p", help="Z, Z/p, Z/p^r or Z/p^inf")
    gen.add_argument("--n", type=int, required=True)
    gen.set_defaults(func=cmd_em)

    hopf = sub.add_parser("hopf", help="Hopf algebra constructions")
    hopf_sub = hopf.add_subparsers(dest="action", required=True)
    for name, text in (("quotient", "quotient B//A"), ("frobenius", "Frobenius image"), ("kernel", "kernel of a detection map")):
        sp = hopf_sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("file")
        if name == "quotient":
            sp.add_argument("--by", choices=["frobenius", "trivial"], default="frobenius")
        if name == "kernel":
            sp.add_argument("--detect", required=True, help="generator sent to the detecting class")
        sp.set_defaults(func=cmd_hopf)

    aqp = sub.add_parser("aq", help="Andre-Quillen homology")
    aq_sub = aqp.add_subparsers(dest="action", required=True)
    for name in ("h0", "h1", "les"):
        sp = aq_sub.add_parser(name, parents=[common])
        sp.add_argument("file")
        sp.set_defaults(func=cmd_aq)

    fg = sub.add_parser("fg", help="finite generation")
    fg_sub = fg.add_subparsers(dest="action", required=True)
    chk = fg_sub.add_parser("check", parents=[common], help="certify generation through the cap")
    chk.add_argument("file", help="module or hopf presentation")
    chk.add_argument("--g", type=int, required=True, help="generator cut")
    chk.add_argument("--target", choices=["q", "h1", "even"], default="q",
                     help="for hopf input: indecomposables, H_1, or even part")
    chk.set_defaults(func=cmd_fg)

    sc = sub.add_parser("scenario", help="golden scenarios")
    sc_sub = sc.add_subparsers(dest="action", required=True)
    run = sc_sub.add_parser("run", parents=[common])
    run.add_argument("name", help="scenario name or 'all'")
    run.add_argument("--regenerate", action="store_true", help="rewrite the golden file")
    run.set_defaults(func=cmd_scenario)
    ls = sc_sub.add_parser("list", parents=[common])
    ls.set_defaults(func=cmd_scenario)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is None and getattr(args, "func", None) in (cmd_fbasis, cmd_em):
        args.cap = 40
    try:
        return args.func(args)
    except (ParseError, UsageError, SteenrodError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except (HopfError, PresentationError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
