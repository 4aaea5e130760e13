"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` (the lines are printed either way).
All comparisons are exact rational equalities or inequalities.
"""

import time
from fractions import Fraction as F

import pytest

from conftest import beale, degenerate_corpus, kuhn, oracle_norm
from freebanach import coalgebra as co
from freebanach import free_space as fs
from freebanach.free_space import FreeElement
from freebanach.instances import (random_element, random_lp, random_metric, random_normed_set, random_sum_one,
                                  random_unit_set, rng_for)
from freebanach.lp import brute_force_oracle, check_solution, lp_solve
from freebanach.normed_set import induced_subset, validate_normed_set
from freebanach.serialize import dumps
from freebanach.verify import run_suite


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})")
        assert ok, detail
    return emit


def sets(tag, count, n_max):
    return [random_normed_set(rng_for("acc", tag, i), rng_for("acc", tag, i, "n").randint(1, n_max))
            for i in range(count)]


_NORM_SETS = sets("norm", 500, 8)


def test_01_norm_duality(report):
    t0 = time.perf_counter()
    bad = 0
    for i, X in enumerate(_NORM_SETS):
        x = random_element(rng_for("acc", "norm-x", i), X)
        r = fs.norm(x)
        if fs.check_norm_certificates(x, r) or r.decomposition.recomputed_cost(X) != r.witness.pair(x):
            bad += 1
    elapsed = time.perf_counter() - t0
    report(1, "norm duality", bad == 0 and elapsed < 60,
           f"{len(_NORM_SETS)} instances n<=8, {bad} certificate failures, {elapsed:.1f}s of 60s")


def test_02_isometric_embedding(report):
    pairs = points = bad = 0
    for X in _NORM_SETS:
        P = X.points
        for i, p in enumerate(P):
            points += 1
            bad += fs.norm(FreeElement.delta(X, p)).value != X.alpha[i]
            for j in range(i + 1, len(P)):
                pairs += 1
                bad += fs.norm(FreeElement.delta(X, p) - FreeElement.delta(X, P[j])).value != X.rho[i][j]
    report(2, "isometric embedding", bad == 0, f"{points} points, {pairs} pairs, {bad} mismatches")


def test_03_support_restriction(report):
    done = bad = 0
    i = 0
    while done < 500:
        rng = rng_for("acc", "support", i)
        i += 1
        X = random_normed_set(rng, rng.randint(2, 8))
        usable = [p for p, a in zip(X.points, X.alpha) if a > 0]
        if not usable:
            continue
        k = rng.randint(1, min(len(usable), len(X) - 1))
        x = random_element(rng, X, rng.sample(usable, k))
        if len(x.support()) >= len(X):
            continue
        done += 1
        bad += fs.norm_supported_only(x) != fs.norm(x).value
    report(3, "support restriction", bad == 0, f"{done} elements with strict support, {bad} mismatches")


def test_04_canonical_embedding(report):
    bad = 0
    for i, X in enumerate(sets("embed", 200, 8)):
        rng = rng_for("acc", "embed-x", i)
        Y = induced_subset(X, rng.sample(list(X.points), rng.randint(1, len(X))))
        x = random_element(rng, Y)
        bad += fs.norm(fs.canonical_embedding(Y, X).apply(x)).value != fs.norm(x).value
    report(4, "canonical embedding", bad == 0, f"200 (parent, subset, element) triples, {bad} mismatches")


def _worst_excess(X, images, Y, L):
    """Largest violation of the Lipschitz condition, norms from the brute-force oracle."""
    worst = (F(0), None)
    P = X.points
    for i, p in enumerate(P):
        e = oracle_norm(Y, images[p].coeffs) - L * X.alpha[i]
        if e > worst[0]:
            worst = (e, (p,))
        for j in range(i + 1, len(P)):
            e = oracle_norm(Y, (images[p] - images[P[j]]).coeffs) - L * X.rho[i][j]
            if e > worst[0]:
                worst = (e, (p, P[j]))
    return worst


def test_05_extend_lipschitz(report):
    accepted = rejected = bad = 0
    i = 0
    while accepted < 100 or rejected < 20:
        rng = rng_for("acc", "extend", i)
        i += 1
        X = random_normed_set(rng, rng.randint(1, 5))
        Y = random_normed_set(rng, rng.randint(1, 3))
        images = {p: FreeElement(Y) if a == 0 else random_element(rng, Y) for p, a in zip(X.points, X.alpha)}
        L = F(rng.randint(0, 8), rng.randint(1, 4))
        expected = _worst_excess(X, images, Y, L)
        try:
            T = fs.extend_lipschitz(X, images, Y, L)
        except fs.LipschitzError as exc:
            rejected += 1
            bad += (exc.worst[0], exc.worst[1]) != expected
            continue
        accepted += 1
        bad += expected[1] is not None or fs.operator_norm(T) > L
    report(5, "Lipschitz extension", bad == 0 and accepted >= 100 and rejected >= 20,
           f"{accepted} accepted with operator norm <= L, {rejected} rejected, {bad} wrong")


def test_06_truncation(report):
    bad = 0
    for i in range(100):
        rng = rng_for("acc", "trunc", i)
        pts, rho = random_metric(rng, rng.randint(1, 6), radius=6)
        bad += fs.operator_norm(fs.truncation_operator(pts, rho, rng.choice(pts))) > 1
    worked = fs.operator_norm(fs.truncation_operator(["p", "q"], [[0, 5], [5, 0]], "p"))
    report(6, "truncation operator", bad == 0 and worked == 1,
           f"100 metrics, {bad} with norm > 1; worked example norm = {worked}")


def _fmt(vec):
    return "(" + ", ".join(str(v) for v in vec) + ")"


def test_07_separating_map(report):
    bad = 0
    for i, X in enumerate(sets("sep", 200, 6)):
        y = random_element(rng_for("acc", "sep-y", i), X)
        sm = fs.separating_map(X, y)
        P = X.points
        for a, p in enumerate(P):
            bad += sm.space.norm(sm.images[p]) > X.alpha[a]
            for b in range(a + 1, len(P)):
                bad += sm.space.distance(sm.images[p], sm.images[P[b]]) > X.rho[a][b]
        bad += fs.distance_to_points(sm.fbar.apply(y))[0] > fs.distance_to_points(y)[0]
    two = validate_normed_set(["p", "q"], [[0, 1], [1, 0]], [1, 1])
    sm = fs.separating_map(two, FreeElement(two, {"p": F(1, 2), "q": F(1, 2)}))
    worked = sm.images == {"p": (1, -1, 0), "q": (1, 0, -1)}
    report(7, "separating map", bad == 0 and worked,
           f"200 instances, {bad} violations; worked f(p)={_fmt(sm.images['p'])}, f(q)={_fmt(sm.images['q'])}")


def test_08_pi_norm(report):
    calls = bad = 0
    for i in range(200):
        rng = rng_for("acc", "pi", i)
        U = random_unit_set(rng, rng.randint(1, 6))
        u, v = random_element(rng, U), random_element(rng, U)
        t = co.TensorElement.tensor(u, v)
        r = co.pi_norm(t)
        calls += 1
        bad += bool(co.check_pi_certificates(t, r)) or r.value != fs.norm(u).value * fs.norm(v).value
    report(8, "projective tensor norm", bad == 0,
           f"{calls} cross-norm pairs n<=6, duality certified on every call, {bad} failures")


def test_09_grouplikes_and_defect(report):
    nonind = {False: 0, True: 0}
    bad = 0
    i = 0
    while min(nonind.values()) < 1000 or i < 100:
        rng = rng_for("acc", "gl", i)
        i += 1
        U = random_unit_set(rng, rng.randint(1, 6))
        C = co.make_coalgebra(U)
        pts = [FreeElement.delta(U, p) for p in U.points]
        bad += co.solve_grouplikes(C) != pts
        bad += not C.counit_identities_hold()
        bad += sum(not co.grouplike_defect(C, x, with_norm=False).is_zero for x in pts)
        if len(U) < 2:
            continue
        for field in (False, True):
            for _ in range(15):
                x = random_sum_one(rng, U, field)
                bad += co.grouplike_defect(C, x, with_norm=False).is_zero
                nonind[field] += 1
    two = validate_normed_set(["p", "q"], [[0, 1], [1, 0]], [1, 1])
    rep = co.grouplike_defect(co.make_coalgebra(two), FreeElement(two, {"p": F(1, 2), "q": F(1, 2)}))
    ok = bad == 0 and rep.norm == F(1, 4) and not co.check_pi_certificates(rep.tensor_defect, rep.pi)
    report(9, "group-likes and defect zero locus", ok,
           f"{i} unit instances; non-indicators: {nonind[False]} rational, {nonind[True]} complex; "
           f"{bad} failures; worked defect = {rep.norm}")


def test_10_lp_engine(report):
    lps = [random_lp(rng_for("acc", "lp", i), rng_for("acc", "lp", i, "m").randint(1, 4),
                     rng_for("acc", "lp", i, "n").randint(1, 7)) for i in range(1000)]
    corpus = [beale(), kuhn()] + degenerate_corpus()
    bad = 0
    for lp in lps + corpus:
        s, o = lp_solve(lp), brute_force_oracle(lp)
        bad += s.status != o.status or s.value != o.value or bool(check_solution(lp, s))
    report(10, "LP engine vs oracle", bad == 0,
           f"{len(lps)} random + {len(corpus)} degenerate/cycling programs, {bad} disagreements")


def test_11_determinism(report):
    a = dumps(run_suite(seed=11, n_max=6, trials=20))
    b = dumps(run_suite(seed=11, n_max=6, trials=20))
    report(11, "deterministic verify report", a == b, f"two runs with seed 11, {len(a)} bytes each")
