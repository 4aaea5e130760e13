
import pytest

from freebanach import free_space as fs
from freebanach.lp import LinearProgram
from freebanach.serialize import dumps
from freebanach.verify import STATEMENTS, run_suite, run_trial


def test_trial_covers_every_statement():
    r = run_trial(0, 0, 4)
    assert [c["statement"] for c in r["checks"]] == list(STATEMENTS)
    assert all(c["passed"] for c in r["checks"]), [c for c in r["checks"] if not c["passed"]]


def test_report_is_deterministic():
    a = dumps(run_suite(seed=3, n_max=4, trials=4))
    b = dumps(run_suite(seed=3, n_max=4, trials=4))
    assert a == b
    assert a != dumps(run_suite(seed=4, n_max=4, trials=4))


def test_parallel_matches_serial():
    assert dumps(run_suite(seed=1, n_max=4, trials=4, jobs=2)) == dumps(run_suite(seed=1, n_max=4, trials=4))


def test_guard():
    with pytest.raises(ValueError):
        run_suite(n_max=9, trials=1)


def test_injected_off_by_one_is_caught(monkeypatch):
    original = fs._norm_lp

    def faulty(base, x, idx):
        lp, labels = original(base, x, idx)
        cost = [c + 1 if lab[0] == "mol" else c for c, lab in zip(lp.c, labels)]
        return LinearProgram(cost, lp.A, lp.b, lp.free), labels

    monkeypatch.setattr(fs, "_norm_lp", faulty)
    report = run_suite(seed=0, n_max=6, trials=10)
    assert report["summary"]["by_statement"]["free.isometric_embedding"]["failed"] > 0


def test_default_run_passes():
    report = run_suite(seed=0, n_max=6, trials=100)
    s = report["summary"]
    assert s["failed"] == 0, {k: v for k, v in s["by_statement"].items() if v["failed"]}
    assert s["passed"] == 100 * len(STATEMENTS)
