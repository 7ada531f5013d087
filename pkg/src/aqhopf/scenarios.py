"""Golden end-to-end scenarios.

Each scenario builds its inputs from the library, runs a fixed pipeline and
returns a JSON-able report.  Reports are compared byte-for-byte with the
files in ``golden/``; ``run_scenario(name, regenerate=True)`` rewrites them.

Degree caps are chosen so each scenario finishes in a few seconds.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .aq import aq_h1, coker_beta_p0, coker_odd_to_even, les_check
from .borel import EXT, POLY, TRUNC, AlgebraMap, BorelGenerator, BorelPresentation, tensor
from .em import CYCLIC, INT, EMSpec, em_cohomology
from .hopf import exterior_on, frobenius_image, hopf_kernel, hopf_quotient, indecomposables
from .textio import dumps
from .unstable import even_part, fg_check, module_from_rule

SCHEMA_VERSION = 1


def series_from_fraction(num: dict, den_degree: int, cap: int) -> list:
    """Coefficients of num(t) / (1 - t^den_degree) through ``cap``."""
    out = [0] * (cap + 1)
    for e, c in num.items():
        for d in range(e, cap + 1, den_degree):
            out[d] += c
    return out


# -- sphere ---------------------------------------------------------------------------


def sphere_report(p: int, cap: int = 40) -> dict:
    """Coexact assembly for the 3-connected cover of S^3."""
    K = em_cohomology(EMSpec(INT, 3, p, cap))
    u = "i3"
    kernel_gens = [(g.label, K.gen(g.label), g.kind, g.height) for g in K.generators if g.label != u]
    if p == 2:
        kernel_gens.append(("i3sq", K.power(K.gen(u), 2), POLY, None))
    sphere = BorelPresentation(p, cap, [BorelGenerator("s3", 3, EXT)], None)
    pi = AlgebraMap(K, sphere, {g.label: (sphere.gen("s3") if g.label == u else {}) for g in K.generators})
    kernel, _ = hopf_kernel(K, kernel_gens, pi)
    Q = indecomposables(kernel)
    coker = coker_beta_p0(Q) if p != 2 else coker_odd_to_even(Q)
    Lam = exterior_on(coker, -1, prefix="s")
    S, _ = frobenius_image(em_cohomology(EMSpec(INT, 2, p, cap)))
    R = tensor(Lam, BorelPresentation(p, cap, S.generators, None))
    series = R.poincare_series()
    expected = series_from_fraction({0: 1, 2 * p + 1: 1}, 2 * p, cap)
    return {
        "p": p,
        "cap": cap,
        "kernel_generators": [[g.label, g.degree, g.kind] for g in kernel.generators],
        "cokernel": {str(d): coker.basis[d] for d in coker.degrees()},
        "exterior_generators": [[g.label, g.degree] for g in Lam.generators],
        "subalgebra_generators": [[g.label, g.degree, g.kind] for g in S.generators],
        "poincare_series": series,
        "expected_series": expected,
        "match": series == expected,
    }


def sphere() -> dict:
    return {"p2": sphere_report(2), "p3": sphere_report(3)}


# -- oddprimes -------------------------------------------------------------------------


def oddprimes_report(p: int = 3, cap: int = 50) -> dict:
    B = em_cohomology(EMSpec(CYCLIC, 2, p, cap))
    A, inc = frobenius_image(B)
    seq = hopf_quotient(B, A, inc)
    C = seq.C
    determinable = [g for g in C.generators if g.label not in seq.ambiguous]
    kinds_ok = all(g.kind == EXT or (g.kind == TRUNC and g.height == 1) for g in determinable)
    H1 = aq_h1(C)
    cert_h1 = fg_check(H1, cap, cap)
    QB = indecomposables(B)
    cert_qb = fg_check(QB, 2, cap)
    cert_even = fg_check(even_part(QB), cap, cap)
    les = les_check(seq)
    return {
        "p": p,
        "cap": cap,
        "B_generators": [[g.label, g.degree, g.kind] for g in B.generators],
        "A_generators": [[g.label, g.degree, g.kind] for g in A.generators],
        "quotient_generators": [[g.label, g.degree, g.kind, g.height] for g in C.generators],
        "ambiguous_beyond_cap": list(seq.ambiguous),
        "quotient_exterior_or_height_p": kinds_ok,
        "h1_dims": H1.to_dict()["dims"],
        "h1_certificate": cert_h1.to_dict(),
        "qb_certificate": cert_qb.to_dict(),
        "qb_even_certificate": cert_even.to_dict(),
        "les_passed": les.passed,
    }


def oddprimes() -> dict:
    return oddprimes_report()


# -- henn -------------------------------------------------------------------------------


def square_zero_ideal_module(cap: int = 66):
    """QK for K = F_2 + (y) inside F_2[x] (x) E(y), |x| = |y| = 2.

    Products of positive-degree elements of K vanish, so QK has basis
    y x^k in degree 2 + 2k; the action is read off the Cartan formula in
    the ambient algebra.
    """
    p = 2
    amb = BorelPresentation(p, cap, [BorelGenerator("x", 2), BorelGenerator("y", 2, TRUNC, 1)], {
        ("x", 1): {}, ("y", 1): {},
    })
    basis = {2 + 2 * k: [f"y*x^{k}" if k else "y"] for k in range(0, (cap - 2) // 2 + 1)}

    def rule(letter, d, i):
        k = (d - 2) // 2
        img = amb.act_letter(letter, {(k, 1): 1})
        t = d + letter
        kt = (t - 2) // 2
        return [img.get((kt, 1), 0)] if t % 2 == 0 else []

    return module_from_rule(p, cap, basis, rule)


def henn_report(cap: int = 66) -> dict:
    M = square_zero_ideal_module(cap)
    certs = {}
    for g in range(2, cap - 1):
        c = fg_check(M, g, cap)
        certs[str(g)] = {
            "generated_through_D": c.generated_through_D,
            "first_failure_degree": c.first_failure_degree,
            "failure_degrees": c.failure_degrees,
        }
    full = fg_check(M, cap, cap)
    return {
        "p": 2,
        "cap": cap,
        "dims_nonzero": {str(d): M.dim(d) for d in M.degrees()},
        "generator_degrees": [d for d, _ in full.chosen_generators],
        "certificates": certs,
        "cuts_failing": [int(g) for g, c in certs.items() if not c["generated_through_D"]],
        "cuts_certifying": [int(g) for g, c in certs.items() if c["generated_through_D"]],
    }


def henn() -> dict:
    return henn_report()


# -- frobenius-les ------------------------------------------------------------------------


def polynomial_pair(p: int, dy: int, cap: int = 40):
    B = BorelPresentation(p, cap, [BorelGenerator("y", dy)], None)
    A, inc = frobenius_image(B)
    return hopf_quotient(B, A, inc)


def frobenius_les() -> dict:
    out = {}
    for p in (2, 3):
        for dy in (2, 4, 6):
            r = les_check(polynomial_pair(p, dy))
            out[f"p{p}_y{dy}"] = {"passed": r.passed, "dims": {str(d): v["dims"] for d, v in sorted(r.degrees.items())}}
    B = em_cohomology(EMSpec(CYCLIC, 2, 3, 50))
    A, inc = frobenius_image(B)
    r = les_check(hopf_quotient(B, A, inc))
    out["oddprimes_pair"] = {"passed": r.passed, "dims": {str(d): v["dims"] for d, v in sorted(r.degrees.items())}}
    return out


SCENARIOS = {
    "sphere": sphere,
    "oddprimes": oddprimes,
    "henn": henn,
    "frobenius-les": frobenius_les,
}


def golden_path(name: str) -> Path:
    return Path(str(resources.files("aqhopf") / "golden" / f"{name}.json"))


def scenario_json(name: str) -> str:
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}")
    return dumps({"scenario": name, "schema": SCHEMA_VERSION, "report": SCENARIOS[name]()})


def first_divergence(a, b, path="$"):
    """JSON path of the first difference between two decoded documents, or None."""
    if type(a) is not type(b):
        return path
    if isinstance(a, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                return f"{path}.{k}"
            r = first_divergence(a[k], b[k], f"{path}.{k}")
            if r:
                return r
        return None
    if isinstance(a, list):
        for i, (x, y) in enumerate(zip(a, b)):
            r = first_divergence(x, y, f"{path}[{i}]")
            if r:
                return r
        return None if len(a) == len(b) else f"{path}[{min(len(a), len(b))}]"
    return None if a == b else path


def run_scenario(name: str, regenerate: bool = False) -> dict:
    """Run and diff against golden.  Returns {name, match, divergence, output}."""
    text = scenario_json(name)
    path = golden_path(name)
    if regenerate:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    if not path.exists():
        return {"name": name, "match": False, "divergence": "no golden file", "output": text}
    golden = path.read_text()
    if golden == text:
        return {"name": name, "match": True, "divergence": None, "output": text}
    div = first_divergence(json.loads(golden), json.loads(text)) or "formatting"
    return {"name": name, "match": False, "divergence": div, "output": text}
