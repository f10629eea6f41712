"""JSON encoding of specs and reports. Rationals travel as "p/q" strings."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Mapping

from .arrangement import GENERAL, Arrangement, EdgeFlat, SVariable, kn_arrangement
from .errors import MalformedInputError
from .numerics import EvalResult
from .ratpoly import AffineForm, Flat
from .zeta import (
    ATOM_TYPES,
    Atom,
    ConvergenceCondition,
    Domain,
    FlatRecord,
    PolarReport,
    WitnessPoint,
)

SCHEMA = "kn-polar/1"

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def rat_to_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rat_from_str(text: Any) -> Fraction:
    if isinstance(text, bool):
        raise MalformedInputError(f"expected a rational string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text.strip()):
        raise MalformedInputError(f"expected a rational string like '3/4', got {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError as exc:
        raise MalformedInputError(f"zero denominator in {text!r}") from exc


def _require(obj: Mapping, key: str, kind=None):
    if not isinstance(obj, Mapping) or key not in obj:
        raise MalformedInputError(f"missing field {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise MalformedInputError(f"field {key!r} has the wrong type")
    return value


def _int(obj: Mapping, key: str) -> int:
    v = _require(obj, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedInputError(f"field {key!r} must be an integer")
    return v


def form_to_json(f: AffineForm) -> dict:
    return {"coeffs": [rat_to_str(c) for c in f.coeffs], "const": rat_to_str(f.constant)}


def form_from_json(obj: Mapping, dim: int | None = None) -> AffineForm:
    coeffs = _require(obj, "coeffs", list)
    f = AffineForm([rat_from_str(c) for c in coeffs], rat_from_str(obj.get("const", "0/1")))
    if dim is not None and f.dim != dim:
        raise MalformedInputError(f"form has {f.dim} coefficients, expected {dim}")
    return f


# -- specs --------------------------------------------------------------------------

def arrangement_to_json(A: Arrangement) -> dict:
    if A.kind == "kn":
        return {"kind": "kn", "N": A.N}
    hs = []
    for h in A.hyperplanes:
        d = form_to_json(h.form)
        d["label"] = str(h.label)
        hs.append(d)
    return {"kind": "general", "hyperplanes": hs}


def arrangement_from_json(obj: Mapping) -> Arrangement:
    kind = _require(obj, "kind", str)
    if kind == "kn":
        return kn_arrangement(_int(obj, "N"))
    if kind != "general":
        raise MalformedInputError(f"unknown arrangement kind {kind!r}")
    hs = _require(obj, "hyperplanes", list)
    if not hs:
        raise MalformedInputError("an arrangement needs at least one hyperplane")
    dim = len(_require(hs[0], "coeffs", list))
    forms = [form_from_json(h, dim) for h in hs]
    labels = [h.get("label") for h in hs]
    for lab in labels:
        if lab is not None and not isinstance(lab, str):
            raise MalformedInputError("hyperplane labels must be strings")
    return Arrangement.general(forms, labels)


def domain_to_json(D: Domain) -> dict:
    if D.is_kn:
        atoms = []
        for a in D.atoms:
            d = {"type": a.type, "i": a.i}
            if a.j is not None:
                d["j"] = a.j
            atoms.append(d)
        return {"kind": "kn-atoms", "N": D.N, "atoms": atoms}
    return {"kind": "general", "N": D.N,
            "inequalities": [form_to_json(f) for f in D.polyhedron.inequalities]}


def _atom_from_json(obj: Mapping) -> Atom:
    t = _require(obj, "type", str)
    if t not in ATOM_TYPES:
        raise MalformedInputError(f"unknown atom type {t!r}")
    i = _int(obj, "i")
    j = _int(obj, "j") if t == "ge" else None
    return Atom(t, i, j)


def domain_from_json(obj: Mapping, N: int | None = None) -> Domain:
    """Parse a DomainSpec; ``N`` from the command line wins over a missing field."""
    if not isinstance(obj, Mapping):
        raise MalformedInputError("a domain spec must be a JSON object")
    if "N" in obj:
        n = _int(obj, "N")
        if N is not None and n != N:
            raise MalformedInputError(f"domain spec is for N={n}, not N={N}")
        N = n
    if N is None or N < 1:
        raise MalformedInputError("domain needs a positive N")
    kind = obj.get("kind", "kn-atoms")
    name = obj.get("name")
    if kind == "kn-atoms":
        atoms = [_atom_from_json(a) for a in obj.get("atoms", [])]
        return Domain.from_atoms(N, atoms, name if name else (None if atoms else f"R^{N}"))
    if kind == "general":
        ineqs = [form_from_json(f, N) for f in _require(obj, "inequalities", list)]
        return Domain.general(N, ineqs, name)
    raise MalformedInputError(f"unknown domain kind {kind!r}")


# -- variables ----------------------------------------------------------------------

class VariableCodec:
    """String names <-> SVariable for one arrangement."""

    def __init__(self, N: int | None = None, arrangement: Arrangement | None = None):
        self.N = N
        self.table = None
        if arrangement is not None and arrangement.kind == GENERAL:
            self.table = {str(v): v for v in arrangement.labels()}

    def parse(self, text: Any) -> SVariable:
        if not isinstance(text, str):
            raise MalformedInputError(f"variable names are strings, got {text!r}")
        if self.table is not None:
            if text not in self.table:
                raise MalformedInputError(f"unknown hyperplane label {text!r}")
            return self.table[text]
        return SVariable.parse(text, self.N)

    def support(self, names) -> frozenset:
        return frozenset(self.parse(n) for n in names)


def _names(vs) -> list[str]:
    return [str(v) for v in sorted(vs)]


def condition_to_json(c: ConvergenceCondition) -> dict:
    return {"support": _names(c.support), "sense": c.sense, "rhs": c.bound, "text": str(c)}


def condition_from_json(obj: Mapping, codec: VariableCodec) -> ConvergenceCondition:
    return ConvergenceCondition(codec.support(_require(obj, "support", list)),
                                _int(obj, "rhs"), _require(obj, "sense", str))


def flat_to_json(e: EdgeFlat) -> dict:
    out = {"locus": e.locus, "dim": e.dim, "text": str(e)}
    if e.is_affine:
        out["equations"] = [form_to_json(f) for f in e.flat.equations]
        out["containing"] = _names(e.containing)
    else:
        out["J"] = sorted(e.infinity)
    return out


def flat_from_json(obj: Mapping, ambient_dim: int, codec: VariableCodec) -> EdgeFlat:
    locus = _require(obj, "locus", str)
    if locus == "infinity":
        return EdgeFlat(ambient_dim, None, frozenset(), frozenset(_require(obj, "J", list)))
    if locus != "affine":
        raise MalformedInputError(f"unknown locus {locus!r}")
    eqs = tuple(form_from_json(f, ambient_dim) for f in _require(obj, "equations", list))
    flat = Flat.from_equations(ambient_dim, eqs)
    if flat is None:
        raise MalformedInputError("inconsistent flat equations")
    return EdgeFlat(ambient_dim, flat, codec.support(obj.get("containing", [])))


# -- documents ----------------------------------------------------------------------

def _header(command: str, **fields) -> dict:
    return {"schema": SCHEMA, "command": command, **fields}


def _check_header(obj: Mapping, command: str):
    if not isinstance(obj, Mapping) or obj.get("schema") != SCHEMA:
        raise MalformedInputError(f"expected a {SCHEMA} document")
    if obj.get("command") != command:
        raise MalformedInputError(f"expected a {command!r} document")


def _codec_for(obj: Mapping) -> tuple[VariableCodec, Arrangement]:
    A = arrangement_from_json(_require(obj, "arrangement_spec", Mapping))
    return VariableCodec(A.N, A), A


def flats_to_json(A: Arrangement, flats, infinity=(), command: str = "dense-edges") -> dict:
    doc = _header(command, arrangement=A.ident, arrangement_spec=arrangement_to_json(A))
    doc["dense_edges"] = [flat_to_json(e) for e in flats]
    doc["infinity_flats"] = [flat_to_json(e) for e in infinity]
    counts = {"affine": len(doc["dense_edges"]), "infinity": len(doc["infinity_flats"])}
    if A.kind == "kn":
        N = A.N
        counts["expected_affine"] = 3 * 2 ** N - N - 3
        counts["expected_infinity"] = 2 ** N - 1
        counts["identity_holds"] = (counts["affine"] == counts["expected_affine"]
                                    and counts["infinity"] == counts["expected_infinity"])
    doc["counts"] = counts
    return doc


def flats_from_json(obj: Mapping) -> tuple[list[EdgeFlat], list[EdgeFlat]]:
    _check_header(obj, "dense-edges")
    codec, A = _codec_for(obj)
    aff = [flat_from_json(e, A.ambient_dim, codec) for e in _require(obj, "dense_edges", list)]
    inf = [flat_from_json(e, A.ambient_dim, codec) for e in obj.get("infinity_flats", [])]
    return aff, inf


def conditions_to_json(N: int, conds) -> dict:
    doc = _header("conditions", N=N, arrangement_spec={"kind": "kn", "N": N})
    doc["conditions"] = [dict(index=k, **condition_to_json(c)) for k, c in enumerate(conds, 1)]
    doc["count"] = len(doc["conditions"])
    doc["expected_count"] = 2 ** (N + 2) - N - 4
    return doc


def conditions_from_json(obj: Mapping) -> list[ConvergenceCondition]:
    _check_header(obj, "conditions")
    codec = VariableCodec(_int(obj, "N"))
    return [condition_from_json(c, codec) for c in _require(obj, "conditions", list)]


def polar_to_json(report: PolarReport, A: Arrangement, D: Domain) -> dict:
    doc = _header("polar", arrangement=report.arrangement,
                  arrangement_spec=arrangement_to_json(A), N=report.N,
                  domain=report.domain, domain_spec=domain_to_json(D), variant=report.variant)
    recs = []
    for r in report.records:
        recs.append({"flat": flat_to_json(r.flat), "condition": condition_to_json(r.condition),
                     "intersection_dim": r.intersection_dim, "flat_dim": r.flat_dim,
                     "contributes": r.contributes})
    doc["flats"] = recs
    doc["leading_polar_hyperplanes"] = [
        {"support": _names(c.support), "rhs": c.bound} for c in report.region()]
    doc["pole_families"] = [
        {"support": _names(p.condition.support), "rhs": p.condition.bound, "step": p.step}
        for p in report.pole_families]
    doc["gamma_skeleton"] = [str(g) for g in report.gamma_factors]
    doc["summary"] = {"flats": len(recs), "contributing": len(report.contributing)}
    return doc


def polar_from_json(obj: Mapping) -> PolarReport:
    _check_header(obj, "polar")
    codec, A = _codec_for(obj)
    n = A.ambient_dim
    recs = []
    for r in _require(obj, "flats", list):
        flat = flat_from_json(_require(r, "flat", Mapping), n, codec)
        cond = condition_from_json(_require(r, "condition", Mapping), codec)
        recs.append(FlatRecord(flat, cond, _int(r, "intersection_dim"), _int(r, "flat_dim"),
                               bool(_require(r, "contributes", bool))))
    return PolarReport(_require(obj, "arrangement", str), _require(obj, "domain", str),
                       _int(obj, "N"), tuple(recs), obj.get("variant", "plain"))


def witnesses_to_json(N: int, rows) -> dict:
    """rows: (index, condition, WitnessPoint, verified)."""
    doc = _header("witness", N=N)
    doc["witnesses"] = [
        {"index": k, "condition": condition_to_json(c),
         "assignment": {str(v): rat_to_str(q) for v, q in w.items()}, "verified": ok}
        for k, c, w, ok in rows]
    doc["all_verified"] = all(ok for *_, ok in rows)
    return doc


def witnesses_from_json(obj: Mapping) -> list[tuple[int, ConvergenceCondition, WitnessPoint, bool]]:
    _check_header(obj, "witness")
    codec = VariableCodec(_int(obj, "N"))
    out = []
    for w in _require(obj, "witnesses", list):
        assign = {codec.parse(k): rat_from_str(v)
                  for k, v in _require(w, "assignment", Mapping).items()}
        out.append((_int(w, "index"), condition_from_json(_require(w, "condition", Mapping), codec),
                    WitnessPoint(assign), bool(_require(w, "verified", bool))))
    return out


def eval_to_json(N: int, D: Domain, r: EvalResult) -> dict:
    doc = _header("eval", N=N, domain=D.ident, domain_spec=domain_to_json(D))
    doc.update(estimate=r.estimate, stderr=r.stderr, samples=r.samples, seed=r.seed)
    return doc


def eval_from_json(obj: Mapping) -> EvalResult:
    _check_header(obj, "eval")
    est, err = _require(obj, "estimate"), _require(obj, "stderr")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (est, err)):
        raise MalformedInputError("estimate and stderr must be numbers")
    return EvalResult(float(est), float(err), _int(obj, "samples"), _int(obj, "seed"))


def params_from_json(obj: Mapping, N: int) -> dict[SVariable, float]:
    """Either {"params": {"s01": 1.0, ...}} or {"selberg": {"alpha", "beta", "gamma"}}."""
    from .numerics import selberg_params

    if not isinstance(obj, Mapping):
        raise MalformedInputError("a params file must be a JSON object")
    if "selberg" in obj:
        sel = _require(obj, "selberg", Mapping)
        vals = [_require(sel, k) for k in ("alpha", "beta", "gamma")]
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in vals):
            raise MalformedInputError("Selberg parameters must be numbers")
        return selberg_params(N, *map(float, vals))
    raw = _require(obj, "params", Mapping)
    codec = VariableCodec(N)
    out = {}
    for k, v in raw.items():
        if isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise MalformedInputError(f"value for {k} must be a number")
        out[codec.parse(k)] = float(rat_from_str(v)) if isinstance(v, str) else float(v)
    return out
