"""JSON encodings of the library objects.

Rationals are strings "p/q" in lowest terms (or "p" for integers), never
floats. Decoders assume their input already passed schema validation but
still raise ValueError on semantic problems.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from . import linalg as la
from .excursion import ExcursionDatum, TraceFunction, trace_datum
from .groups import FPGroup, RepresentationPoint, Word, parse_word
from .lattice import GL, SL, LatticeMap, Product, RootDatum, Torus
from .semisimplify import EigenvalueRecord
from .tensorword import Det, Dual, Exterior, Irrep, Std, Sum, Tensor, TensorWord
from .twisted import GroupAutomorphism, automorphism

# --------------------------------------------------------------------------
# encoding


def rational(x) -> str:
    return la.fmt(la.to_fraction(x))


def matrix(M) -> list:
    M = np.asarray(M, dtype=object)
    return [[rational(x) for x in row] for row in M]


def vector(v) -> list:
    return [rational(x) for x in v]


def int_matrix(M) -> list:
    if isinstance(M, LatticeMap):
        return [list(r) for r in M.matrix]
    return [[int(x) for x in row] for row in M]


def word(w: Word, names) -> str:
    return w.format(names) if len(w) else "1"


def root_datum(G: RootDatum) -> dict:
    if G.family in ("GL", "SL"):
        return {"family": G.family, "n": G.factors[0][1]}
    if G.family == "Torus":
        return {"family": "Torus", "rank": len(G.factors)}
    return {"family": "Product", "factors": [{"family": k, "n": n} for k, n in G.factors]}


def group_automorphism(phi: GroupAutomorphism) -> dict:
    out = {
        "theta": phi.theta,
        "h": matrix(phi.h_matrix),
        "lattice_action": int_matrix(phi.lattice_action),
    }
    if phi.permutation is not None:
        out["permutation"] = list(phi.permutation)
    if phi.weyl_word:
        out["weyl_word"] = list(phi.weyl_word)
    return out


def tensor_word(w: TensorWord) -> Any:
    if isinstance(w, Std):
        return "std" if w.factor == 0 else {"std": w.factor}
    if isinstance(w, Dual):
        return {"dual": tensor_word(w.arg)}
    if isinstance(w, Tensor):
        return {"tensor": [tensor_word(a) for a in w.args]}
    if isinstance(w, Sum):
        return {"sum": [tensor_word(a) for a in w.args]}
    if isinstance(w, Exterior):
        return {"exterior": {"of": tensor_word(w.arg), "r": w.r}}
    if isinstance(w, Det):
        if w.factor is None:
            return {"det": w.power}
        return {"det": {"power": w.power, "factor": w.factor}}
    if isinstance(w, Irrep):
        return {"irrep": list(w.weight)}
    raise TypeError(f"cannot encode {w!r}")


def fp_group(G: FPGroup) -> dict:
    out = {"generators": list(G.generators), "relators": [word(r, G.generators) for r in G.relators]}
    if G.degree is not None:
        out["degree"] = list(G.degree)
    return out


def point(sigma: RepresentationPoint) -> dict:
    return {
        "group": fp_group(sigma.group),
        "images": {g: matrix(M) for g, M in zip(sigma.group.generators, sigma.images)},
    }


def eigenvalue_record(r: EigenvalueRecord) -> dict:
    return {"k": r.k, "N": r.N, "w": r.w}


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# decoding


def parse_root_datum(d: dict) -> RootDatum:
    fam = d["family"]
    if fam == "GL":
        return GL(d["n"])
    if fam == "SL":
        return SL(d["n"])
    if fam == "Torus":
        return Torus(d["rank"])
    if fam == "Product":
        return Product(*[parse_root_datum(f) for f in d["factors"]])
    raise ValueError(f"unknown family {fam!r}")


def parse_matrix(rows) -> np.ndarray:
    return la.qmat(rows)


def parse_lattice_map(rows) -> LatticeMap:
    return LatticeMap(tuple(tuple(int(x) for x in r) for r in rows))


def parse_automorphism(G: RootDatum, d: dict) -> GroupAutomorphism:
    lattice = parse_lattice_map(d["lattice_action"]) if "lattice_action" in d else None
    return automorphism(G, d.get("theta", "identity"), d.get("h"), d.get("permutation"), lattice)


def parse_tensor_word(d) -> TensorWord:
    if d == "std":
        return Std()
    if isinstance(d, str):
        raise ValueError(f"unknown tensor word {d!r}")
    if len(d) != 1:
        raise ValueError("a tensor word node has exactly one key")
    (key, val), = d.items()
    if key == "std":
        return Std(int(val))
    if key == "dual":
        return Dual(parse_tensor_word(val))
    if key == "tensor":
        return Tensor(tuple(parse_tensor_word(x) for x in val))
    if key == "sum":
        return Sum(tuple(parse_tensor_word(x) for x in val))
    if key == "exterior":
        return Exterior(parse_tensor_word(val["of"]), int(val["r"]))
    if key == "det":
        if isinstance(val, int):
            return Det(val)
        return Det(int(val.get("power", 1)), val.get("factor"))
    if key == "irrep":
        return Irrep(tuple(int(x) for x in val))
    raise ValueError(f"unknown tensor word node {key!r}")


def parse_fp_group(d: dict) -> FPGroup:
    return FPGroup(tuple(d["generators"]), tuple(d.get("relators", ())), d.get("degree"))


def parse_point(d: dict, group: FPGroup | None = None) -> RepresentationPoint:
    G = group or parse_fp_group(d["group"])
    images = d["images"]
    missing = [g for g in G.generators if g not in images]
    if missing:
        raise ValueError(f"no image for generator(s) {', '.join(missing)}")
    return RepresentationPoint(G, tuple(la.qmat(images[g]) for g in G.generators))


def parse_group_word(text, G: FPGroup) -> Word:
    return parse_word(text, G.generators)


def parse_trace_function(d: dict, G: FPGroup, special: bool) -> TraceFunction:
    return TraceFunction(parse_tensor_word(d.get("rep", "std")), parse_group_word(d["word"], G), special)


def parse_datum(d: dict, G: FPGroup, n: int, special: bool) -> ExcursionDatum:
    if "trace" in d:
        t = d["trace"]
        return trace_datum(parse_tensor_word(t.get("rep", "std")), parse_group_word(t["word"], G), n, special)
    words = tuple(parse_tensor_word(w) for w in d["words"])
    gammas = tuple(parse_group_word(w, G) for w in d["gammas"])
    return ExcursionDatum(words, gammas, la.qvec(d["v"]), la.qvec(d["xi"]), n, special)


def parse_eigenvalue_record(d: dict) -> EigenvalueRecord:
    return EigenvalueRecord(int(d["w"]), int(d["k"]), int(d["N"]))


def datum(d: ExcursionDatum, names) -> dict:
    return {
        "n": d.n,
        "special": d.special,
        "words": [tensor_word(w) for w in d.words],
        "gammas": [word(g, names) for g in d.gammas],
        "v": vector(d.v),
        "xi": vector(d.xi),
    }


def polynomial(poly: dict) -> list:
    """Sorted monomial list [{"exponents": [...], "coefficient": "p/q"}]."""
    items = sorted(poly.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0])))
    return [{"exponents": list(e), "coefficient": rational(c)} for e, c in items]


def polynomial_text(poly: dict, names) -> str:
    if not poly:
        return "0"
    parts = []
    for item in polynomial(poly):
        c = Fraction(item["coefficient"])
        mono = "*".join(
            (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(item["exponents"]) if e
        )
        if not mono:
            term = la.fmt(abs(c))
        elif abs(c) == 1:
            term = mono
        else:
            term = f"{la.fmt(abs(c))}*{mono}"
        parts.append(("-" if c < 0 else "+", term))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        text += f" {sign} {term}"
    return text
