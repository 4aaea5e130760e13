"""JSON encodings.  Every number is an exact rational (``int`` or ``"num/den"``)
or a Gaussian rational ``{"re": .., "im": ..}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .coalgebra import BilinearWitness, DefectReport, PiNormResult, TensorDecomposition, TensorElement
from .free_space import (Decomposition, FreeElement, LinearOperator, LipschitzWitness, NormResult,
                         SeparatingMap)
from .normed_set import CoordinateSpace, NormedSet, validate_normed_set
from .scalars import format_rational, format_scalar, parse_rational, parse_scalar


class ParseError(ValueError):
    """Input is not well-formed (as opposed to being mathematically invalid)."""


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def load_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON: {exc}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing key {key!r}")
    return obj[key]


# --- normed sets ---------------------------------------------------------------


def normed_set_to_json(X: NormedSet) -> dict:
    return {
        "points": list(X.points),
        "rho": [[format_rational(v) for v in row] for row in X.rho],
        "alpha": [format_rational(v) for v in X.alpha],
    }


def parse_normed_set_fields(obj, where="space", need_alpha=True):
    points = _require(obj, "points", where)
    rho = _require(obj, "rho", where)
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise ParseError(f"{where}: 'points' must be a list of strings")
    if not isinstance(rho, list) or not all(isinstance(r, list) for r in rho):
        raise ParseError(f"{where}: 'rho' must be a list of lists")
    try:
        rho = [[parse_rational(v) for v in row] for row in rho]
        alpha = None
        if need_alpha:
            alpha = _require(obj, "alpha", where)
            if not isinstance(alpha, list):
                raise ParseError(f"{where}: 'alpha' must be a list")
            alpha = [parse_rational(v) for v in alpha]
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{where}: {exc}") from None
    return points, rho, alpha


def normed_set_from_json(obj, where="space") -> NormedSet:
    """Parse and validate; raises :class:`ParseError` or ``NormedSetError``."""
    points, rho, alpha = parse_normed_set_fields(obj, where)
    return validate_normed_set(points, rho, alpha)


def target_to_json(target):
    if isinstance(target, CoordinateSpace):
        return {"coordinate_dim": target.dim}
    return normed_set_to_json(target)


def target_from_json(obj, where="target"):
    if isinstance(obj, dict) and "coordinate_dim" in obj:
        k = obj["coordinate_dim"]
        if not isinstance(k, int) or k < 1:
            raise ParseError(f"{where}: coordinate_dim must be a positive integer")
        return CoordinateSpace(k)
    return normed_set_from_json(obj, where)


# --- elements ------------------------------------------------------------------


def element_to_json(x: FreeElement, include_space=False) -> dict:
    out = {"coeffs": {p: format_scalar(v) for p, v in x.coeffs.items()}}
    if include_space:
        out = {"space": normed_set_to_json(x.base), **out}
    return out


def resolve_space(obj, base: NormedSet | None, relative_to: Path | None = None) -> NormedSet:
    """The element's normed set: the ``base`` argument, else the inline or referenced ``space``."""
    space = obj.get("space") if isinstance(obj, dict) else None
    if base is not None:
        if isinstance(space, dict) and normed_set_from_json(space) != base:
            raise ParseError("element's inline space differs from the given space")
        return base
    if isinstance(space, dict):
        return normed_set_from_json(space)
    if isinstance(space, str):
        path = Path(space)
        if relative_to is not None and not path.is_absolute():
            path = relative_to / path
        return normed_set_from_json(load_json(path), str(path))
    raise ParseError("element has no 'space' and none was given")


def element_from_json(obj, base: NormedSet | None = None, relative_to: Path | None = None) -> FreeElement:
    base = resolve_space(obj, base, relative_to)
    coeffs = _require(obj, "coeffs", "element")
    if not isinstance(coeffs, dict):
        raise ParseError("element: 'coeffs' must be an object")
    try:
        parsed = {p: parse_scalar(v) for p, v in coeffs.items()}
    except ValueError as exc:
        raise ParseError(f"element: {exc}") from None
    unknown = set(parsed) - set(base.points)
    if unknown:
        raise ParseError(f"element: coefficients on unknown point(s) {sorted(unknown)}")
    try:
        return FreeElement(base, parsed)
    except ValueError as exc:
        raise ParseError(f"element: {exc}") from None


def tensor_to_json(t: TensorElement) -> dict:
    return {"coeffs": {f"{p}|{q}": format_scalar(v) for (p, q), v in t.coeffs.items()}}


def tensor_from_json(obj, base: NormedSet | None = None, relative_to: Path | None = None) -> TensorElement:
    base = resolve_space(obj, base, relative_to)
    coeffs = _require(obj, "coeffs", "tensor")
    out = {}
    for key, v in coeffs.items():
        parts = key.split("|")
        if len(parts) != 2:
            raise ParseError(f"tensor: key {key!r} is not of the form 'p|q'")
        if any(p not in base for p in parts):
            raise ParseError(f"tensor: unknown point in {key!r}")
        try:
            out[tuple(parts)] = parse_scalar(v)
        except ValueError as exc:
            raise ParseError(f"tensor: {exc}") from None
    return TensorElement(base, out)


# --- certificates ----------------------------------------------------------------


def decomposition_to_json(d: Decomposition) -> dict:
    return {
        "molecules": [{"p": p, "q": q, "lambda": format_rational(lam)} for p, q, lam in d.molecules],
        "atoms": [{"z": z, "mu": format_rational(mu)} for z, mu in d.atoms],
        "cost": format_rational(d.cost),
    }


def decomposition_from_json(obj) -> Decomposition:
    return Decomposition(
        tuple((m["p"], m["q"], parse_rational(m["lambda"])) for m in obj["molecules"]),
        tuple((a["z"], parse_rational(a["mu"])) for a in obj["atoms"]),
        parse_rational(obj["cost"]),
    )


def witness_to_json(w: LipschitzWitness) -> dict:
    return {p: format_rational(v) for p, v in w.values}


def witness_from_json(obj) -> LipschitzWitness:
    return LipschitzWitness(tuple((p, parse_rational(v)) for p, v in obj.items()))


def norm_result_to_json(r: NormResult) -> dict:
    return {
        "value": format_rational(r.value),
        "decomposition": decomposition_to_json(r.decomposition),
        "witness": witness_to_json(r.witness),
    }


def norm_result_from_json(obj) -> NormResult:
    return NormResult(parse_rational(obj["value"]), decomposition_from_json(obj["decomposition"]),
                      witness_from_json(obj["witness"]))


def _gen_to_json(key):
    return list(key)


def _gen_from_json(obj):
    return tuple(obj)


def pi_result_to_json(r: PiNormResult) -> dict:
    return {
        "value": format_rational(r.value),
        "decomposition": [{"c": format_rational(c), "left": _gen_to_json(g), "right": _gen_to_json(h)}
                          for c, g, h in r.decomposition.terms],
        "witness": {f"{p}|{q}": format_rational(v) for (p, q), v in r.witness.values},
    }


def pi_result_from_json(obj) -> PiNormResult:
    value = parse_rational(obj["value"])
    terms = tuple((parse_rational(t["c"]), _gen_from_json(t["left"]), _gen_from_json(t["right"]))
                  for t in obj["decomposition"])
    witness = BilinearWitness(tuple((tuple(k.split("|")), parse_rational(v)) for k, v in obj["witness"].items()))
    return PiNormResult(value, TensorDecomposition(terms, value), witness)


def defect_to_json(rep: DefectReport) -> dict:
    out = {
        "tensor_defect": tensor_to_json(rep.tensor_defect),
        "counit_defect": format_scalar(rep.counit_defect),
        "is_zero": rep.is_zero,
    }
    if rep.norm is not None:
        out["defect_norm"] = format_rational(rep.norm)
    if rep.norm_bounds is not None:
        out["defect_norm_bounds"] = {"lower": format_rational(rep.norm_bounds[0]),
                                     "upper": format_rational(rep.norm_bounds[1])}
    if rep.pi is not None:
        out["pi_norm_certificate"] = pi_result_to_json(rep.pi)
    return out


def operator_to_json(T: LinearOperator) -> dict:
    return {
        "source": normed_set_to_json(T.source),
        "target": target_to_json(T.target),
        "matrix": [[format_rational(v) for v in row] for row in T.matrix],
    }


def operator_from_json(obj) -> LinearOperator:
    try:
        src = normed_set_from_json(_require(obj, "source", "operator"), "operator.source")
        tgt = target_from_json(_require(obj, "target", "operator"))
        mat = [[parse_rational(v) for v in row] for row in _require(obj, "matrix", "operator")]
        return LinearOperator(src, tgt, mat)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"operator: {exc}") from None


def separating_to_json(sm: SeparatingMap) -> dict:
    return {
        "coordinates": list(sm.coordinates),
        "k": len(sm.coordinates),
        "diameter": format_rational(sm.diameter),
        "images": {p: [format_rational(c) for c in v] for p, v in sm.images.items()},
        "K": normed_set_to_json(sm.K),
        "f": dict(sm.f),
        "fbar": operator_to_json(sm.fbar),
    }
