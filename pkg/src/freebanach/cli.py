"""Command-line interface.

Exit codes: 0 success, 1 mathematical negative (invalid input set, failed
check, Lipschitz violation), 2 usage or parse error.  JSON goes to stdout or
``--out``; a one-line human summary goes to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import coalgebra as co
from . import free_space as fs
from .normed_set import NormedSet, NormedSetError, truncation_structures
from .scalars import FieldError, format_rational, format_scalar
from .serialize import (ParseError, defect_to_json, dumps, element_from_json, element_to_json, load_json,
                        normed_set_from_json, normed_set_to_json, norm_result_to_json, operator_to_json,
                        parse_normed_set_fields, separating_to_json, target_from_json)
from .verify import N_GUARD, run_suite

OK, NEGATIVE, USAGE = 0, 1, 2


class Negative(Exception):
    """A well-formed input with a mathematically negative outcome (exit 1)."""


def _emit(args, payload, summary):
    text = dumps(payload)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)


def _space(path):
    return normed_set_from_json(load_json(path), str(path))


def _element(path, base):
    return element_from_json(load_json(path), base, Path(path).parent)


def cmd_validate(args):
    obj = load_json(args.space)
    try:
        X = normed_set_from_json(obj, str(args.space))
    except NormedSetError as exc:
        _emit(args, {"valid": False, "violations": [v.to_json() for v in exc.violations]},
              f"invalid: {exc.violations[0]}")
        return NEGATIVE
    _emit(args, {"valid": True, "space": normed_set_to_json(X)}, f"valid normed set with {len(X)} point(s)")
    return OK


def cmd_norm(args):
    X = _space(args.space)
    x = _element(args.element, X)
    field = args.field or ("rational" if x.is_real() else "complex")
    if field == "rational":
        if not x.is_real():
            raise FieldError("element has complex coefficients; use --field complex")
        res = fs.norm(x)
        payload = {"field": "rational", "element": element_to_json(x), **norm_result_to_json(res)}
        if args.check:
            errs = fs.check_norm_certificates(x, res)
            payload["check"] = {"passed": not errs, "failures": errs}
            if errs:
                _emit(args, payload, f"norm = {res.value}; certificate check FAILED")
                return NEGATIVE
        _emit(args, payload, f"norm = {res.value}" + (" (certificates re-verified)" if args.check else ""))
        return OK
    lo, hi = fs.complex_norm_bounds(x)
    payload = {"field": "complex", "element": element_to_json(x), "exact": False,
               "bounds": {"lower": format_rational(lo), "upper": format_rational(hi)}}
    if args.check:
        parts = {"real_part": x.real(), "imag_part": x.imag()}
        certs = {k: fs.norm(v) for k, v in parts.items()}
        errs = [e for k in parts for e in fs.check_norm_certificates(parts[k], certs[k])]
        payload["certificates"] = {k: norm_result_to_json(v) for k, v in certs.items()}
        payload["check"] = {"passed": not errs, "failures": errs}
        if errs:
            _emit(args, payload, "certificate check FAILED")
            return NEGATIVE
    _emit(args, payload, f"norm bounds: lower = {lo}, upper = {hi}")
    return OK


def cmd_dist(args):
    X = _space(args.space)
    x = _element(args.element, X)
    subset = args.subset.split(",") if args.subset else None
    d, p = fs.distance_to_points(x, subset)
    _emit(args, {"distance": format_rational(d), "argmin": p, "subset": subset or list(X.points)},
          f"dist = {d} attained at {p}")
    return OK


def _coalgebra(X):
    try:
        return co.make_coalgebra(X)
    except co.CoalgebraError as exc:
        raise Negative(f"coalgebra precondition: {exc}") from None


def cmd_defect(args):
    X = _space(args.space)
    C = _coalgebra(X)
    x = _element(args.element, X)
    if args.field == "rational" and not x.is_real():
        raise FieldError("element has complex coefficients; use --field complex")
    rep = co.grouplike_defect(C, x)
    payload = {"element": element_to_json(x), **defect_to_json(rep)}
    if args.check and rep.pi is not None:
        errs = co.check_pi_certificates(rep.tensor_defect, rep.pi)
        payload["check"] = {"passed": not errs, "failures": errs}
        if errs:
            _emit(args, payload, "certificate check FAILED")
            return NEGATIVE
    if rep.norm is not None:
        summary = f"defect norm = {rep.norm}"
    else:
        summary = f"defect norm bounds: [{rep.norm_bounds[0]}, {rep.norm_bounds[1]}]"
    _emit(args, payload, summary + ("; group-like" if rep.is_zero else ""))
    return OK


def cmd_grouplikes(args):
    X = _space(args.space)
    C = _coalgebra(X)
    sols = co.solve_grouplikes(C)
    payload = {
        "grouplikes": [element_to_json(x) for x in sols],
        "equals_points": sols == [fs.FreeElement.delta(X, p) for p in X.points],
        "counit_identities": C.counit_identities_hold(),
    }
    _emit(args, payload, f"{len(sols)} group-like element(s)")
    return OK


def cmd_extend(args):
    obj = load_json(args.map)
    if not isinstance(obj, dict) or not {"source", "target", "L", "images"} <= set(obj):
        raise ParseError("map file needs keys 'source', 'target', 'L', 'images'")
    src = normed_set_from_json(obj["source"], "source")
    tgt = target_from_json(obj["target"])
    images = {}
    for p, img in obj["images"].items():
        if isinstance(img, dict):
            if not isinstance(tgt, NormedSet):
                raise ParseError(f"image of {p!r}: coordinate targets take lists")
            images[p] = element_from_json({"coeffs": img}, tgt)
        else:
            images[p] = img
    try:
        T = fs.extend_lipschitz(src, images, tgt, obj["L"])
    except fs.LipschitzError as exc:
        _emit(args, {"accepted": False, "reason": str(exc), "worst": list(exc.worst[1])}, str(exc))
        return NEGATIVE
    opn = fs.operator_norm(T)
    _emit(args, {"accepted": True, "operator": operator_to_json(T), "operator_norm": format_rational(opn)},
          f"extension accepted, operator norm = {opn}")
    return OK


def cmd_separate(args):
    X = _space(args.space)
    y = _element(args.element, X)
    sm = fs.separating_map(X, y)
    dy, py = fs.distance_to_points(y)
    fy = sm.fbar.apply(y)
    dfy, pfy = fs.distance_to_points(fy)
    payload = {
        **separating_to_json(sm),
        "fbar_y": element_to_json(fy),
        "dist_y_X": {"value": format_rational(dy), "argmin": py},
        "dist_fbar_y_K": {"value": format_rational(dfy), "argmin": pfy},
        "inequality_holds": dfy <= dy,
    }
    _emit(args, payload, f"dist(fbar y, f(X)) = {dfy} <= dist(y, X) = {dy}")
    return OK if dfy <= dy else NEGATIVE


def cmd_truncate(args):
    obj = load_json(args.metric)
    points, rho, _ = parse_normed_set_fields(obj, str(args.metric), need_alpha=False)
    x0 = args.basepoint or (points[0] if points else None)
    if x0 not in points:
        raise ParseError(f"basepoint {x0!r} is not a point")
    T = fs.truncation_operator(points, rho, x0)
    rich, unit = truncation_structures(points, rho, x0)
    opn = fs.operator_norm(T)
    _emit(args, {"basepoint": x0, "rich": normed_set_to_json(rich), "unit": normed_set_to_json(unit),
                 "operator": operator_to_json(T), "operator_norm": format_rational(opn)},
          f"truncation operator norm = {opn}")
    return OK


def cmd_verify(args):
    if not 1 <= args.n <= N_GUARD:
        raise ParseError(f"--n must be between 1 and {N_GUARD}")
    report = run_suite(seed=args.seed, n_max=args.n, trials=args.trials, jobs=args.jobs)
    s = report["summary"]
    _emit(args, report, f"verify seed={args.seed} n<={args.n} trials={args.trials}: "
                        f"{s['passed']} passed, {s['failed']} failed")
    return OK if s["failed"] == 0 else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freebanach", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        return p

    p = add("validate", cmd_validate, "check the normed-set axioms")
    p.add_argument("space")
    for name, fn, help in [("norm", cmd_norm, "exact free-space norm with certificates"),
                           ("dist", cmd_dist, "distance from an element to the points"),
                           ("defect", cmd_defect, "group-like defect of an element"),
                           ("separate", cmd_separate, "separating map into a max-norm space")]:
        p = add(name, fn, help)
        p.add_argument("space")
        p.add_argument("element")
        if name in ("norm", "defect"):
            p.add_argument("--check", action="store_true", help="re-verify certificates without the solver")
            p.add_argument("--field", choices=["rational", "complex"])
        if name == "dist":
            p.add_argument("--subset", help="comma-separated point labels (default: all)")
    p = add("grouplikes", cmd_grouplikes, "solve for all group-like elements")
    p.add_argument("space")
    p = add("extend", cmd_extend, "linear extension of a Lipschitz point map")
    p.add_argument("map")
    p = add("truncate", cmd_truncate, "truncation operator for a metric and base point")
    p.add_argument("metric")
    p.add_argument("--basepoint")
    p = add("verify", cmd_verify, "run the randomized property suite")
    p.add_argument("--n", type=int, default=6, help="largest instance size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1, help="worker processes (report is unaffected)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (ParseError, FieldError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (NormedSetError, Negative) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
