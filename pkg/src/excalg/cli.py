"""Command-line front end: one JSON job in, one deterministic report out.

    excalg --job job.json [--format json|md] [--out PATH] [--seed N]
           [--length-bound N] [--degree-bound N] [--budget N] [--threads N] [--timing]

Exit codes: 0 success, 2 mathematical negative result, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

import jsonschema

from . import __version__
from . import linalg as la
from . import serialize as ser
from .excursion import excursion_value, fricke_generators, gl2_trace_generators, hecke_value, span_fit_many
from .semisimplify import (
    enveloping_algebra,
    frobenius_intertwiners,
    radical,
    same_component,
    semisimplification,
    weight_partition,
)
from .groups import check_representation
from .twisted import (
    NotFixedError,
    equivariance_intertwiner,
    fixed_dominant_weights,
    levi_finiteness_check,
    normalize_automorphism,
    torus_twisted_basis,
    twisted_trace,
    valuation_certificate,
)

COMMANDS = (
    "twisted-basis",
    "fixed-weights",
    "intertwiner",
    "twisted-trace",
    "finiteness-step1",
    "finiteness-step2",
    "excursion-eval",
    "hecke-eval",
    "span-fit",
    "semisimplify",
    "same-component",
    "frobenius-intertwiners",
    "weight-partition",
)

DEFAULTS = {"seed": 0, "length_bound": 6, "degree_bound": 6, "budget": 500, "weight_bound": 3}

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


class JobError(ValueError):
    def __init__(self, message: str, pointer: str = "", command: str = "unknown"):
        super().__init__(message)
        self.pointer = pointer
        self.command = command


@dataclass
class JobSpec:
    command: str
    input: dict
    seed: int = 0
    length_bound: int = 6
    degree_bound: int = 6
    budget: int = 500
    weight_bound: int = 3

    def parameters(self) -> dict:
        return {k: getattr(self, k) for k in DEFAULTS}


@dataclass
class Report:
    command: str
    parameters: dict
    result: dict
    verdict: str
    exit_code: int = EXIT_OK
    certificates: list = field(default_factory=list)
    timing: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "version": __version__,
            "seed": self.parameters["seed"],
            "parameters": self.parameters,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "result": self.result,
            "certificates": self.certificates,
            "timing": self.timing,
        }


# --------------------------------------------------------------------------
# parsing


def _schema() -> dict:
    text = resources.files("excalg").joinpath("schemas/job.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _deepest(error: jsonschema.ValidationError) -> jsonschema.ValidationError:
    """Follow oneOf/anyOf branches to the most specific failure."""
    while error.context:
        error = max(error.context, key=lambda e: (len(e.absolute_path), -len(e.context or [])))
    return error


def validate_job(data: Any) -> None:
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        best = _deepest(jsonschema.exceptions.best_match(errors))
        ptr = _pointer(best.absolute_path)
        raise JobError(f"schema violation at {ptr or '/'}: {best.message}", ptr)


def parse_job(source, overrides: Optional[dict] = None) -> JobSpec:
    """Read a job from a path, a file object or '-' (standard input)."""
    if hasattr(source, "read"):
        text = source.read()
    elif str(source) == "-":
        text = sys.stdin.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"invalid JSON: {exc}") from exc
    if isinstance(data, dict) and "command" in data and data["command"] not in COMMANDS:
        raise JobError(f"unknown command {data['command']!r}", "/command")
    try:
        validate_job(data)
    except JobError as exc:
        if isinstance(data, dict) and isinstance(data.get("command"), str):
            exc.command = data["command"]
        raise
    params = {k: data.get(k, v) for k, v in DEFAULTS.items()}
    for k, v in (overrides or {}).items():
        if v is not None:
            params[k] = v
    return JobSpec(data["command"], data["input"], **params)


# --------------------------------------------------------------------------
# dispatch


def _group_and_phi(inp):
    G = ser.parse_root_datum(inp["group"])
    return G, ser.parse_automorphism(G, inp["automorphism"])


def _twisted_basis(job, inp):
    G, phi = _group_and_phi(inp)
    if not G.is_torus:
        raise JobError("twisted-basis needs a torus", "/input/group")
    basis = torus_twisted_basis(G, phi)
    res = {"rank": len(basis), "basis": [list(b) for b in basis],
           "lattice_action": ser.int_matrix(phi.lattice_action)}
    return res, f"rank {len(basis)}", EXIT_OK


def _fixed_weights(job, inp):
    G, phi = _group_and_phi(inp)
    norm = normalize_automorphism(G, phi)
    ws = fixed_dominant_weights(G, norm, job.weight_bound)
    res = {"normalized_automorphism": ser.group_automorphism(norm), "bound": job.weight_bound,
           "weights": [list(w) for w in ws]}
    return res, f"{len(ws)} fixed dominant weights", EXIT_OK


def _intertwiner(job, inp):
    G, phi = _group_and_phi(inp)
    V = ser.parse_tensor_word(inp["rep"])
    phi = normalize_automorphism(G, phi)
    try:
        a = equivariance_intertwiner(G, phi, V, seed=job.seed)
    except NotFixedError as exc:
        return {"fixed": False, "message": str(exc)}, "not fixed", EXIT_NEGATIVE
    res = {"fixed": True, "rep": str(V), "matrix": ser.matrix(a.matrix),
           "normalized_automorphism": ser.group_automorphism(phi), "report": a.report}
    return res, "fixed", EXIT_OK


def _twisted_trace(job, inp):
    G, phi = _group_and_phi(inp)
    phi = normalize_automorphism(G, phi)
    V = ser.parse_tensor_word(inp["rep"])
    try:
        a = equivariance_intertwiner(G, phi, V, seed=job.seed)
    except NotFixedError as exc:
        return {"fixed": False, "message": str(exc)}, "not fixed", EXIT_NEGATIVE
    g = ser.parse_matrix(inp["g"])
    res = {"value": ser.rational(twisted_trace(a, g)), "intertwiner": ser.matrix(a.matrix)}
    verdict = "evaluated"
    if "h" in inp:
        h = ser.parse_matrix(inp["h"])
        moved = h @ g @ la.inverse(phi(h))
        other = twisted_trace(a, moved)
        res["twisted_conjugate_value"] = ser.rational(other)
        res["invariant"] = other == twisted_trace(a, g)
        verdict = "invariant" if res["invariant"] else "not invariant"
    return res, verdict, EXIT_OK


def _step1(job, inp):
    G, phi = _group_and_phi(inp)
    V = ser.parse_tensor_word(inp["rep"])
    c = valuation_certificate(G, phi, V, inp["functional"])
    res = {
        "functional": [ser.rational(x) for x in c.functional],
        "weights": [{"weight": list(w), "multiplicity": m, "orbit_size": c.orbit_sizes[w],
                     "value": ser.rational(c.values[w])} for w, m in c.weights],
        "v0": ser.rational(c.v0),
        "r": c.r,
        "lambda0": list(c.lambda0),
        "exterior_multiplicity": c.multiplicity,
        "strictly_minimal": c.strict,
        "phi_invariant": c.phi_invariant,
        "stabilized": c.stabilized,
        "failures": c.failures,
    }
    return res, "certificate ok" if c.ok else "certificate failed", EXIT_OK if c.ok else EXIT_NEGATIVE


def _step2(job, inp):
    r = levi_finiteness_check(ser.parse_lattice_map(inp["restriction"]),
                              ser.parse_lattice_map(inp["phi_big"]),
                              ser.parse_lattice_map(inp["phi_small"]))
    res = {"finite": r.finite, "free_rank": r.free_rank, "invariant_factors": r.invariant_factors,
           "fixed_big": [list(b) for b in r.fixed_big], "fixed_small": [list(b) for b in r.fixed_small],
           "restriction_on_fixed": r.restriction_on_fixed}
    return res, "finite" if r.finite else "infinite", EXIT_OK if r.finite else EXIT_NEGATIVE


def _point(d):
    return check_representation(ser.parse_point(d))


def _excursion_eval(job, inp):
    sigma = _point(inp["point"])
    special = inp.get("special", False)
    d = ser.parse_datum(inp["datum"], sigma.group, sigma.dimension, special)
    val = excursion_value(d, sigma)
    res = {"value": ser.rational(val), "invariant_datum": d.is_invariant(),
           "datum": ser.datum(d, sigma.group.generators)}
    return res, f"value {ser.rational(val)}", EXIT_OK


def _hecke_eval(job, inp):
    sigma = _point(inp["point"])
    V = ser.parse_tensor_word(inp.get("rep", "std"))
    w = ser.parse_group_word(inp["word"], sigma.group)
    val = hecke_value(V, w, sigma, inp.get("special", False))
    return {"rep": str(V), "word": ser.word(w, sigma.group.generators), "value": ser.rational(val)}, \
        f"value {ser.rational(val)}", EXIT_OK


def _span_fit(job, inp, threads=1):
    G = ser.parse_fp_group(inp["group"])
    n, special = inp["n"], inp.get("special", False)
    gens = inp["generators"]
    if gens == "fricke":
        gens = fricke_generators(G, special)
    elif gens == "gl2-traces":
        gens = gl2_trace_generators(G)
    else:
        gens = [ser.parse_trace_function(g, G, special) for g in gens]
    targets = [ser.parse_datum(t, G, n, special) for t in inp["targets"]]
    fits = span_fit_many(targets, gens, G, n, degree=job.degree_bound, budget=job.budget,
                         seed=job.seed, special=special, workers=threads)
    names = [f"x{i + 1}" for i in range(len(gens))]
    out = []
    for t, f in zip(targets, fits):
        out.append({
            "status": f.status,
            "polynomial": ser.polynomial(f.polynomial),
            "text": ser.polynomial_text(f.polynomial, names) if f.status == "fit" else None,
            "samples_used": f.samples_used,
            "rank_history": f.rank_history,
            "verified_samples": f.verified_samples,
            "monomials": f.monomials_considered,
            "message": f.message,
        })
    generators = [{"name": nm, "rep": ser.tensor_word(g.rep), "word": ser.word(g.word, G.generators)}
                  for nm, g in zip(names, gens)]
    ok = all(f.status == "fit" for f in fits)
    counts = {s: sum(f.status == s for f in fits) for s in ("fit", "not-in-span", "inconclusive")}
    verdict = ", ".join(f"{v} {k}" for k, v in counts.items() if v)
    return {"generators": generators, "fits": out}, verdict, EXIT_OK if ok else EXIT_NEGATIVE


def _semisimplify(job, inp):
    sigma = _point(inp["point"])
    r = semisimplification(sigma, job.length_bound)
    res = {
        "block_sizes": r.block_sizes,
        "radical_dimension": r.radical_dimension,
        "output_radical_dimension": r.output_radical_dimension,
        "base_change": ser.matrix(r.base_change),
        "semisimplification": ser.point(r.point),
        "trace_certificate": {"length_bound": r.length_bound, "classes_checked": r.words_checked,
                              "traces_agree": r.traces_agree},
    }
    return res, "semisimple" if r.radical_dimension == 0 else "not semisimple", EXIT_OK


def _same_component(job, inp):
    s1 = _point(inp["left"])
    if inp["right"] == "semisimplification":
        s2 = semisimplification(s1, job.length_bound).point
    else:
        s2 = _point(inp["right"])
    c = same_component(s1, s2, job.length_bound)
    res = {"same": c.same, "length_bound": c.length_bound, "classes_checked": c.words_checked,
           "witness": ser.word(c.witness, s1.group.generators) if c.witness is not None else None,
           "charpolys": [ser.vector(p) for p in c.charpolys] if c.charpolys else None}
    return res, "same" if c.same else "different", EXIT_OK if c.same else EXIT_NEGATIVE


def _frobenius(job, inp):
    sigma = _point(inp["point"])
    endo = [inp["endomorphism"].get(g, g) for g in sigma.group.generators]
    semisimplified = radical(enveloping_algebra(sigma)).dim > 0
    if semisimplified:
        sigma = semisimplification(sigma, job.length_bound).point
    F = frobenius_intertwiners(sigma, endo, seed=job.seed, length_bound=job.length_bound)
    res = {
        "nonempty": F.nonempty,
        "certified": F.certified,
        "certificate": F.certificate,
        "semisimplified_first": semisimplified,
        "sample": ser.matrix(F.sample) if F.sample is not None else None,
        "solution_dimension": F.solution_dimension,
        "solution_basis": [ser.matrix(B) for B in F.solution_basis],
        "commutant_dimension": F.commutant.dim,
        "commutant_basis": [ser.matrix(B) for B in F.commutant.basis],
        "torsor": F.torsor,
    }
    verdict = "nonempty" if F.nonempty else "empty"
    return res, verdict, EXIT_OK if F.nonempty else EXIT_NEGATIVE


def _weight_partition(job, inp):
    E1 = [ser.parse_eigenvalue_record(d) for d in inp["left"]]
    E2 = [ser.parse_eigenvalue_record(d) for d in inp["right"]]
    p = weight_partition(E1, E2)
    res = {"equal": p.equal, "weights": [
        {"w": c.weight, "equal": c.equal,
         "left": [ser.eigenvalue_record(r) for r in c.left],
         "right": [ser.eigenvalue_record(r) for r in c.right]} for c in p.weights]}
    return res, "equal" if p.equal else "unequal", EXIT_OK if p.equal else EXIT_NEGATIVE


HANDLERS = {
    "twisted-basis": _twisted_basis,
    "fixed-weights": _fixed_weights,
    "intertwiner": _intertwiner,
    "twisted-trace": _twisted_trace,
    "finiteness-step1": _step1,
    "finiteness-step2": _step2,
    "excursion-eval": _excursion_eval,
    "hecke-eval": _hecke_eval,
    "span-fit": _span_fit,
    "semisimplify": _semisimplify,
    "same-component": _same_component,
    "frobenius-intertwiners": _frobenius,
    "weight-partition": _weight_partition,
}


def dispatch(job: JobSpec, threads: int = 1, timing: bool = False) -> Report:
    start = time.perf_counter()
    handler = HANDLERS[job.command]
    if job.command == "span-fit":
        result, verdict, code = handler(job, job.input, threads)
    else:
        result, verdict, code = handler(job, job.input)
    elapsed = round(time.perf_counter() - start, 3) if timing else None
    return Report(job.command, job.parameters(), result, verdict, code, [], elapsed)


def error_report(command: str, exc: Exception, pointer: str = "") -> dict:
    return {
        "command": command,
        "version": __version__,
        "verdict": "error",
        "exit_code": EXIT_ERROR,
        "error": {"type": type(exc).__name__, "message": str(exc), "pointer": pointer or None},
    }


# --------------------------------------------------------------------------
# output


def _md_value(v) -> str:
    if isinstance(v, (list, dict)):
        return "`" + json.dumps(v, sort_keys=True) + "`"
    return str(v) if v is not None else "null"


def render_markdown(report: dict) -> str:
    lines = [f"# excalg report: {report['command']}", ""]
    lines.append(f"**Verdict:** {report['verdict']}")
    lines.append("")
    lines.append(f"- version: {report['version']}")
    lines.append(f"- exit code: {report['exit_code']}")
    if "seed" in report:
        lines.append(f"- seed: {report['seed']}")
    if "error" in report:
        err = report["error"]
        lines += ["", "## Error", "", f"- type: {err['type']}", f"- message: {err['message']}"]
        if err.get("pointer"):
            lines.append(f"- pointer: `{err['pointer']}`")
    if "parameters" in report:
        lines += ["", "## Parameters", ""]
        lines += [f"- {k}: {v}" for k, v in sorted(report["parameters"].items())]
    if "result" in report:
        lines += ["", "## Result", ""]
        lines += [f"- {k}: {_md_value(v)}" for k, v in sorted(report["result"].items())]
    if "certificates" in report:
        lines += ["", "## Certificates", "", _md_value(report["certificates"]) if report["certificates"] else "[]"]
    return "\n".join(lines) + "\n"


def emit_report(report: dict, fmt: str = "json", out: Optional[str] = None) -> bytes:
    text = ser.dumps(report) if fmt == "json" else render_markdown(report)
    data = text.encode("utf-8")
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return data


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="excalg", description="Run one excursion-algebra job.")
    p.add_argument("--job", required=True, help="path to the JSON job file, or - for standard input")
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--seed", type=int, help="override the job's sampling seed")
    p.add_argument("--length-bound", type=int, help="override the word-length bound L")
    p.add_argument("--degree-bound", type=int, help="override the degree bound D")
    p.add_argument("--budget", type=int, help="override the sample budget")
    p.add_argument("--threads", type=int, default=1, help="worker threads for sample evaluation")
    p.add_argument("--timing", action="store_true", help="record wall-clock time (breaks byte-identity)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"seed": args.seed, "length_bound": args.length_bound,
                 "degree_bound": args.degree_bound, "budget": args.budget}
    command = "unknown"
    try:
        job = parse_job(args.job, overrides)
        command = job.command
        report = dispatch(job, threads=max(1, args.threads), timing=args.timing).to_json()
    except JobError as exc:
        report = error_report(exc.command if command == "unknown" else command, exc, exc.pointer)
    except (ValueError, ArithmeticError, KeyError, OSError) as exc:
        report = error_report(command, exc)
    try:
        emit_report(report, args.format, args.out)
    except OSError as exc:
        print(f"excalg: cannot write report: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if report["exit_code"] == EXIT_ERROR:
        print(f"excalg: {report['error']['message']}", file=sys.stderr)
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
