"""Randomized verification suite.

Each trial draws its own instances from ``rng_for(seed, trial, ...)`` and runs
every property check on them, so trials are independent and the report is a
pure function of ``(seed, n_max, trials)``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable

from . import coalgebra as co
from . import free_space as fs
from .instances import (random_element, random_lp, random_metric, random_normed_set, random_sum_one,
                        random_unit_set, rng_for)
from .lp import brute_force_oracle, check_solution, lp_solve
from .normed_set import (NormedSetError, compress_to_unit, induced_subset,
                         truncation_structures, validate_normed_set)
from .scalars import format_rational
from .serialize import (defect_to_json, element_to_json, normed_set_to_json, norm_result_to_json,
                        pi_result_to_json)

log = logging.getLogger(__name__)

N_GUARD = 8
PI_POINTS = 6

STATEMENTS = (
    "normed_set.validate",
    "normed_set.truncation_structures",
    "normed_set.compress",
    "normed_set.induced",
    "lp.oracle_agreement",
    "free.duality",
    "free.isometric_embedding",
    "free.support_restriction",
    "free.canonical_embedding",
    "free.triangle_homogeneity",
    "free.extend_lipschitz",
    "free.truncation",
    "free.separating_map",
    "coalgebra.counit",
    "coalgebra.pi_duality_cross_norm",
    "coalgebra.grouplikes",
    "coalgebra.defect_zero_locus",
    "coalgebra.multiplicativity",
    "metric_recovery.zero_locus",
)


class Check:
    def __init__(self, statement):
        self.statement = statement
        self.failures: list[str] = []
        self.certificates: dict = {}
        self.instance = ""

    def require(self, cond, message):
        if not cond:
            self.failures.append(message)

    def to_json(self):
        return {
            "statement": self.statement,
            "instance": self.instance,
            "passed": not self.failures,
            "failures": self.failures[:10],
            "certificates": self.certificates,
        }


# --- individual checks -----------------------------------------------------------


def check_validate(ck: Check, rng, X):
    ck.instance = f"random normed set, n={len(X)}"
    ck.require(validate_normed_set(X.points, X.rho, X.alpha) == X, "generated set does not re-validate")
    n = len(X)
    # push one entry past the nearest bound; validation must flip to rejection
    rho = [list(r) for r in X.rho]
    alpha = list(X.alpha)
    if n >= 2 and rng.random() < 0.6:
        p, q = rng.sample(range(n), 2)
        if rng.random() < 0.5:
            v = alpha[p] + alpha[q] + Fraction(1, rng.randint(1, 4))
        else:
            v = abs(alpha[p] - alpha[q]) - Fraction(1, rng.randint(1, 4))
        rho[p][q] = rho[q][p] = v
        what = f"rho({X.points[p]},{X.points[q]}) := {v}"
    else:
        p = rng.randrange(n)
        others = [q for q in range(n) if q != p]
        hi = min((alpha[q] + rho[p][q] for q in others), default=None)
        if hi is None or rng.random() < 0.5:
            v = Fraction(-1, rng.randint(1, 4))
        else:
            v = hi + Fraction(1, rng.randint(1, 4))
        alpha[p] = v
        what = f"alpha({X.points[p]}) := {v}"
    try:
        validate_normed_set(X.points, rho, alpha)
        ck.require(False, f"perturbation {what} was accepted")
    except NormedSetError as exc:
        ck.certificates = {"perturbation": what, "violations": [v.to_json() for v in exc.violations[:3]]}


def check_truncation_structures(ck: Check, rng, n):
    pts, rho = random_metric(rng, n, radius=6)
    x0 = rng.choice(pts)
    ck.instance = f"random metric, n={len(pts)}, basepoint {x0}"
    rich, unit = truncation_structures(pts, rho, x0)
    i0 = pts.index(x0)
    ck.require(all(rich.alpha[i] == 1 + rho[i][i0] for i in range(len(pts))), "alpha != 1 + rho(., x0)")
    ck.require(all(unit.rho[i][j] == min(rho[i][j], 1) for i in range(len(pts)) for j in range(len(pts))),
               "d != min(rho, 1)")
    ck.require(all(a == 1 for a in unit.alpha), "beta != 1")
    ck.certificates = {"rich": normed_set_to_json(rich), "unit": normed_set_to_json(unit)}


def check_compress(ck: Check, rng, n):
    dim = rng.randint(1, 3)
    pts = [tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 2)) for _ in range(dim)) for _ in range(n)]
    K, L = compress_to_unit(pts)
    ck.instance = f"{len(pts)} rational points in max-norm R^{dim}"
    ck.require(all(v <= 2 for row in K.rho for v in row), "rho_K > 2")
    ck.require(all(a == 1 for a in K.alpha), "alpha_K != 1")
    ck.require(L >= 1, "L < 1")
    ck.certificates = {"L": format_rational(L), "K": normed_set_to_json(K)}


def check_induced(ck: Check, rng, X):
    k = rng.randint(1, len(X))
    S = rng.sample(list(X.points), k)
    Y = induced_subset(X, S)
    ck.instance = f"subset of size {k} of n={len(X)}"
    ck.require(validate_normed_set(Y.points, Y.rho, Y.alpha) == Y, "induced subset fails validation")


def check_lp(ck: Check, rng, count=5):
    agreements = []
    for _ in range(count):
        lp = random_lp(rng, rng.randint(1, 4), rng.randint(1, 7))
        s, o = lp_solve(lp), brute_force_oracle(lp)
        ck.require(s.status == o.status, f"status {s.status} vs oracle {o.status}")
        ck.require(s.value == o.value, f"value {s.value} vs oracle {o.value}")
        errs = check_solution(lp, s)
        ck.require(not errs, f"certificate: {errs[:2]}")
        agreements.append({"status": s.status, "value": None if s.value is None else format_rational(s.value)})
    ck.instance = f"{count} random LPs"
    ck.certificates = {"solves": agreements}


def check_duality(ck: Check, rng, X):
    x = random_element(rng, X)
    r = fs.norm(x)
    ck.instance = f"random element, |supp|={len(x.support())}, n={len(X)}"
    errs = fs.check_norm_certificates(x, r)
    ck.require(not errs, f"certificates: {errs[:3]}")
    ck.certificates = {"element": element_to_json(x), "norm": norm_result_to_json(r)}


def check_isometry(ck: Check, X):
    ck.instance = f"all points and pairs, n={len(X)}"
    P = X.points
    d = {p: fs.FreeElement.delta(X, p) for p in P}
    for i, p in enumerate(P):
        v = fs.norm(d[p]).value
        ck.require(v == X.alpha[i], f"||d_{p}|| = {v} != alpha = {X.alpha[i]}")
        for j in range(i + 1, len(P)):
            v = fs.norm(d[p] - d[P[j]]).value
            ck.require(v == X.rho[i][j], f"||d_{p} - d_{P[j]}|| = {v} != rho = {X.rho[i][j]}")
    ck.certificates = {"pairs_checked": len(P) * (len(P) - 1) // 2, "points_checked": len(P)}


def check_support(ck: Check, rng, X):
    usable = [p for p, a in zip(X.points, X.alpha) if a > 0]
    k = rng.randint(1, max(1, len(usable) - 1)) if usable else 0
    x = random_element(rng, X, rng.sample(usable, min(k, len(usable))))
    full, restricted = fs.norm(x).value, fs.norm_supported_only(x)
    ck.instance = f"|supp|={len(x.support())} of n={len(X)}"
    ck.require(full == restricted, f"restricted LP {restricted} != norm {full}")
    ck.certificates = {"element": element_to_json(x), "norm": format_rational(full)}


def check_embedding(ck: Check, rng, X):
    S = rng.sample(list(X.points), rng.randint(1, len(X)))
    Y = induced_subset(X, S)
    J = fs.canonical_embedding(Y, X)
    x = random_element(rng, Y)
    a, b = fs.norm(x).value, fs.norm(J.apply(x)).value
    ck.instance = f"subset of size {len(Y)} in n={len(X)}"
    ck.require(a == b, f"norm in subset {a} != norm in parent {b}")
    ck.certificates = {"subset": list(Y.points), "element": element_to_json(x), "norm": format_rational(a)}


def check_triangle(ck: Check, rng, X):
    x, y = random_element(rng, X), random_element(rng, X)
    c = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
    nx, ny, nxy = fs.norm(x).value, fs.norm(y).value, fs.norm(x + y).value
    ncx = fs.norm(x * c).value
    ck.instance = f"two random elements, scalar {c}"
    ck.require(nxy <= nx + ny, f"||x+y|| = {nxy} > {nx + ny}")
    ck.require(ncx == abs(c) * nx, f"||cx|| = {ncx} != |c| ||x|| = {abs(c) * nx}")


def check_extend(ck: Check, rng, X):
    Y = random_normed_set(rng, rng.randint(1, 4))
    images = {}
    for p, a in zip(X.points, X.alpha):
        images[p] = fs.FreeElement(Y, {}) if a == 0 else random_element(rng, Y)
    # smallest admissible constant, computed pointwise
    lmin = Fraction(0)
    for i, p in enumerate(X.points):
        if X.alpha[i]:
            lmin = max(lmin, fs.norm(images[p]).value / X.alpha[i])
        for j in range(i + 1, len(X)):
            lmin = max(lmin, fs.norm(images[p] - images[X.points[j]]).value / X.rho[i][j])
    slack = Fraction(rng.randint(0, 2), 2)
    T = fs.extend_lipschitz(X, images, Y, lmin + slack)
    opn = fs.operator_norm(T)
    ck.instance = f"random map n={len(X)} -> B(Y), |Y|={len(Y)}"
    ck.require(opn <= lmin + slack, f"operator norm {opn} > L = {lmin + slack}")
    ck.require(opn == lmin, f"operator norm {opn} != pointwise Lipschitz constant {lmin}")
    cert = {"L": format_rational(lmin + slack), "operator_norm": format_rational(opn)}
    if lmin > 0:
        bad = lmin - Fraction(1, rng.randint(2, 6)) * lmin
        try:
            fs.extend_lipschitz(X, images, Y, bad)
            ck.require(False, f"L = {bad} below the Lipschitz constant {lmin} was accepted")
        except fs.LipschitzError as exc:
            cert["rejected_L"] = format_rational(bad)
            cert["worst"] = list(exc.worst[1])
    ck.certificates = cert


def check_truncation(ck: Check, rng, n):
    pts, rho = random_metric(rng, n, radius=6)
    x0 = rng.choice(pts)
    T = fs.truncation_operator(pts, rho, x0)
    opn = fs.operator_norm(T)
    ck.instance = f"random metric n={len(pts)}, basepoint {x0}"
    ck.require(opn <= 1, f"operator norm {opn} > 1")
    ck.require(all(T.column(p) == fs.FreeElement.delta(T.target, p) for p in pts), "i(d_p) != d_p")
    ck.certificates = {"operator_norm": format_rational(opn)}


def check_separating(ck: Check, rng, X):
    y = random_element(rng, X)
    sm = fs.separating_map(X, y)
    space = sm.space
    for i, p in enumerate(X.points):
        ck.require(space.norm(sm.images[p]) <= X.alpha[i], f"|f({p})| > alpha({p})")
        for j in range(i + 1, len(X)):
            q = X.points[j]
            ck.require(space.distance(sm.images[p], sm.images[q]) <= X.rho[i][j], f"f expands ({p},{q})")
    dy, _ = fs.distance_to_points(y)
    dfy, _ = fs.distance_to_points(sm.fbar.apply(y))
    ck.instance = f"random y, |supp|={len(y.support())}, n={len(X)}"
    ck.require(dfy <= dy, f"dist(fbar y, f(X)) = {dfy} > dist(y, X) = {dy}")
    ck.certificates = {"k": len(sm.coordinates), "dist_y_X": format_rational(dy),
                       "dist_fbar_y_K": format_rational(dfy)}


def check_counit(ck: Check, C):
    ck.instance = f"unit normed set n={len(C.base)}"
    ck.require(C.counit_identities_hold(), "counit identities fail")
    ck.require(C.coassociative(), "coassociativity fails")


def check_pi(ck: Check, rng, U):
    u, v = random_element(rng, U), random_element(rng, U)
    t = co.TensorElement.tensor(u, v)
    r = co.pi_norm(t)
    errs = co.check_pi_certificates(t, r)
    nu, nv = fs.norm(u).value, fs.norm(v).value
    ck.instance = f"u (x) v over n={len(U)}"
    ck.require(not errs, f"certificates: {errs[:3]}")
    ck.require(r.value == nu * nv, f"pi(u(x)v) = {r.value} != {nu} * {nv}")
    ck.certificates = {"u": element_to_json(u), "v": element_to_json(v), "pi": pi_result_to_json(r)}


def check_grouplikes(ck: Check, C):
    sols = co.solve_grouplikes(C)
    expected = [fs.FreeElement.delta(C.base, p) for p in C.base.points]
    ck.instance = f"n={len(C.base)}"
    ck.require(sols == expected, f"group-likes {sols} != indicators")
    for x in sols:
        rep = co.grouplike_defect(C, x, with_norm=False)
        ck.require(rep.is_zero, f"nonzero defect at {x}")
    ck.certificates = {"grouplikes": [element_to_json(x) for x in sols]}


def check_defect(ck: Check, rng, C, count=10):
    if len(C.base) < 2:
        ck.instance = "n=1: the only coefficient vector with sum 1 is the indicator (vacuous)"
        return
    for complex_field in (False, True):
        for _ in range(count):
            x = random_sum_one(rng, C.base, complex_field)
            rep = co.grouplike_defect(C, x, with_norm=False)
            ck.require(not rep.is_zero, f"zero defect at non-indicator {x}")
    x = random_sum_one(rng, C.base)
    rep = co.grouplike_defect(C, x)
    ck.require(rep.norm is not None and rep.norm > 0, "defect norm not positive")
    ck.require(not co.check_pi_certificates(rep.tensor_defect, rep.pi), "defect pi-norm certificate fails")
    ck.instance = f"{2 * count} non-indicators with coefficient sum 1, n={len(C.base)}"
    ck.certificates = {"element": element_to_json(x), "defect": defect_to_json(rep)}


def check_multiplicativity(ck: Check, rng, C):
    P = C.base.points
    g = {p: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for p in P}
    h = {p: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for p in P}
    for p in P:
        x = fs.FreeElement.delta(C.base, p)
        a = co.pair_tensor(C.comultiply(x), g, h)
        b = co.pair_tensor(co.TensorElement.tensor(x, x), g, h)
        ck.require(a == b, f"group-like {p}: <Dx,g(x)h> = {a} != <x(x)x,g(x)h> = {b}")
    ck.instance = f"n={len(P)}"
    if len(P) < 2:
        return
    x = random_sum_one(rng, C.base)
    witnessed = None
    for p in P:
        ind = {q: Fraction(int(q == p)) for q in P}
        if co.pair_tensor(C.comultiply(x), ind, ind) != co.pair_tensor(co.TensorElement.tensor(x, x), ind, ind):
            witnessed = p
            break
    ck.require(witnessed is not None, f"no indicator witnesses non-multiplicativity of {x}")
    ck.certificates = {"element": element_to_json(x), "witness_point": witnessed}


def check_main(ck: Check, rng, n):
    pts, rho = random_metric(rng, n, radius=6)
    x0 = pts[0]
    T = fs.truncation_operator(pts, rho, x0)
    rich = T.source
    C = co.make_coalgebra(T.target)
    for i, p in enumerate(pts):
        dp = fs.FreeElement.delta(rich, p)
        ck.require(co.grouplike_defect(C, T.apply(dp), with_norm=False).is_zero, f"defect(i(d_{p})) != 0")
        for j in range(i + 1, len(pts)):
            v = fs.norm(dp - fs.FreeElement.delta(rich, pts[j])).value
            ck.require(v == rho[i][j], f"||d_{p} - d_{pts[j]}|| = {v} != rho")
    for _ in range(5 if len(pts) > 1 else 0):
        x = random_sum_one(rng, rich)
        ck.require(not co.grouplike_defect(C, T.apply(x), with_norm=False).is_zero,
                   f"composite defect vanishes at non-point {x}")
    ck.instance = f"metric n={len(pts)}, diameter {max(max(r) for r in rho)}"


# --- driver ---------------------------------------------------------------------


def run_trial(seed: int, trial: int, n_max: int = 6) -> dict:
    def rng(tag):
        return rng_for(seed, trial, tag)

    n = rng("n").randint(1, n_max)
    X = random_normed_set(rng("X"), n)
    U = random_unit_set(rng("U"), min(n, PI_POINTS))
    C = co.make_coalgebra(U)
    plan: list[tuple[str, Callable[[Check], None]]] = [
        ("normed_set.validate", lambda ck: check_validate(ck, rng("validate"), X)),
        ("normed_set.truncation_structures", lambda ck: check_truncation_structures(ck, rng("truncation_structures"), n)),
        ("normed_set.compress", lambda ck: check_compress(ck, rng("compress"), n)),
        ("normed_set.induced", lambda ck: check_induced(ck, rng("induced"), X)),
        ("lp.oracle_agreement", lambda ck: check_lp(ck, rng("lp"))),
        ("free.duality", lambda ck: check_duality(ck, rng("duality"), X)),
        ("free.isometric_embedding", lambda ck: check_isometry(ck, X)),
        ("free.support_restriction", lambda ck: check_support(ck, rng("support"), X)),
        ("free.canonical_embedding", lambda ck: check_embedding(ck, rng("embedding"), X)),
        ("free.triangle_homogeneity", lambda ck: check_triangle(ck, rng("triangle"), X)),
        ("free.extend_lipschitz", lambda ck: check_extend(ck, rng("extend"), X)),
        ("free.truncation", lambda ck: check_truncation(ck, rng("truncation"), n)),
        ("free.separating_map", lambda ck: check_separating(ck, rng("separating"), X)),
        ("coalgebra.counit", lambda ck: check_counit(ck, C)),
        ("coalgebra.pi_duality_cross_norm", lambda ck: check_pi(ck, rng("pi"), U)),
        ("coalgebra.grouplikes", lambda ck: check_grouplikes(ck, C)),
        ("coalgebra.defect_zero_locus", lambda ck: check_defect(ck, rng("defect"), C)),
        ("coalgebra.multiplicativity", lambda ck: check_multiplicativity(ck, rng("mult"), C)),
        ("metric_recovery.zero_locus", lambda ck: check_main(ck, rng("main"), n)),
    ]
    checks = []
    for statement, fn in plan:
        ck = Check(statement)
        try:
            fn(ck)
        except Exception as exc:  # a crash is a failed check, not an aborted run
            ck.failures.append(f"{type(exc).__name__}: {exc}")
        checks.append(ck.to_json())
    return {"trial": trial, "n": n, "space": normed_set_to_json(X), "unit_space": normed_set_to_json(U),
            "checks": checks}


def _trial_args(args):
    return run_trial(*args)


def run_suite(seed: int = 0, n_max: int = 6, trials: int = 100, jobs: int = 1) -> dict:
    if not 1 <= n_max <= N_GUARD:
        raise ValueError(f"--n must be between 1 and {N_GUARD}")
    args = [(seed, t, n_max) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_trial_args, args))
    else:
        results = [run_trial(*a) for a in args]
    by_statement = {s: {"passed": 0, "failed": 0} for s in STATEMENTS}
    for r in results:
        for ck in r["checks"]:
            by_statement[ck["statement"]]["passed" if ck["passed"] else "failed"] += 1
    passed = sum(v["passed"] for v in by_statement.values())
    failed = sum(v["failed"] for v in by_statement.values())
    return {
        "seed": seed,
        "n_max": n_max,
        "trials": trials,
        "summary": {"passed": passed, "failed": failed, "by_statement": by_statement},
        "results": results,
    }
