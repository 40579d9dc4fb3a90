"""Acceptance gate: one test per criterion, one printed verdict line each
(run with -s or look at captured output to read them all).

Criterion 5 is expected to stay red: its first inequality, the constant-1
Cartesian energy claim E(BxB) <= |B|^2 E_+(B), is false as stated.  The
exact identity is E(BxB) = 2|B|^2 E_+(B) - |B|^4, which exceeds
|B|^2 E_+(B) whenever E_+(B) > |B|^4 / |B|^2, i.e. for every B with
|B| >= 2 (already B = {0,1}: E = 32 > 24).  The claim is implemented and
tested exactly as stated rather than weakened to match; the companion
identity tests live in test_counts.py, and the second half of the
criterion (the T3 estimate) does hold on the whole corpus.
"""

import time

import hyperlab.verify as suites
from hyperlab.bounds import CSV_HEADER
from hyperlab.cli import main


def _verdict(n: int, ok: bool, detail: str) -> bool:
    print(f"criterion {n:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def _suite_verdict(n: int, res, extra: str = "") -> bool:
    detail = f"{res.name}: {res.cases} checks, {len(res.failures)} failures{extra}"
    for witness in res.failures[:3]:
        detail += f"; e.g. {witness}"
    return _verdict(n, res.passed, detail)


def test_criterion_01_oracle_equivalence():
    t0 = time.monotonic()
    res = suites.oracle_equivalence(seed=0, trials=100)
    dt = time.monotonic() - t0
    ok = _suite_verdict(1, res, extra=f", {dt:.1f}s")
    assert ok and dt < 60.0


def test_criterion_02_algebraic_identities():
    res = suites.algebraic_identities(seed=0, trials=100_000)
    assert _suite_verdict(2, res)


def test_criterion_03_t3_exact_constants():
    res = suites.lemma_t3(seed=0, trials=200)
    assert _suite_verdict(3, res)


def test_criterion_04_borel_bounds():
    res = suites.borel(seed=0, trials=200)
    assert _suite_verdict(4, res)


def test_criterion_05_cartesian_constant_one():
    res = suites.lemma_sh_cartesian(seed=0, trials=100)
    energy_bad = sum(1 for f in res.failures if f.startswith("energy"))
    t3_bad = sum(1 for f in res.failures if f.startswith("t3"))
    ok = _suite_verdict(
        5, res, extra=f" ({energy_bad} energy, {t3_bad} t3; the energy half is false as stated)"
    )
    assert t3_bad == 0  # the T3 half genuinely holds
    assert ok  # known red: see the module docstring


def test_criterion_06_character_sum_constant():
    res = suites.charsum(seed=0, trials=200)
    assert _suite_verdict(6, res)


def test_criterion_07_minkowski_rotation():
    res = suites.minkowski_rotation(seed=0, trials=50)
    assert _suite_verdict(7, res)


def test_criterion_08_cross_algorithm_mk():
    res = suites.cross_algorithm_mk(seed=0, trials=20)
    assert _suite_verdict(8, res)


def test_criterion_09_t4_chain():
    res = suites.t4_chain(seed=0, trials=50)
    assert _suite_verdict(9, res)


def test_criterion_10_scan_worker_determinism(tmp_path):
    f1 = tmp_path / "w1.csv"
    f8 = tmp_path / "w8.csv"
    rc1 = main(["scan", "--family", "demo", "--workers", "1", "--seed", "3", "--out", str(f1)])
    rc8 = main(["scan", "--family", "demo", "--workers", "8", "--seed", "3", "--out", str(f8)])
    same = f1.read_bytes() == f8.read_bytes()
    ok = rc1 == 0 and rc8 == 0 and same
    assert _verdict(10, ok, f"workers 1 vs 8 byte-identical: {same}")


def test_criterion_11_ap_family_ratio_report(tmp_path):
    out = tmp_path / "ap.csv"
    rc = main(["scan", "--family", "ap-main", "--out", str(out)])
    lines = out.read_text().strip().splitlines()
    ok = rc == 0 and lines[0] == CSV_HEADER
    mk_rows = {}
    sigma_rows = {}
    for line in lines[1:]:
        cells = line.split(",")
        if cells[0] == "mk":
            mk_rows[int(cells[2])] = cells
        elif cells[0] == "sigma":
            sigma_rows[int(cells[2])] = cells
    ok = ok and sorted(mk_rows) == [8, 16, 32, 64] and sorted(sigma_rows) == [8, 16, 32, 64]
    for n, cells in mk_rows.items():
        k = int(cells[5])
        ok = ok and k == -(-n ** 0.75 // 1)  # ceil
        # on this family the |A|^7/k^5 branch is the min, so the ratio
        # column is exactly m_k k^5 / |A|^7
        ok = ok and cells[9] == "branch-A7k5"
        want = int(cells[6]) * k**5 / n**7
        got = float(cells[8])
        ok = ok and abs(got - want) <= 1e-9 * max(1.0, want)
    for n, cells in sigma_rows.items():
        emp, bound, ratio = int(cells[6]), float(cells[7]), float(cells[8])
        ok = ok and emp > 0 and bound > 0 and abs(ratio - emp / bound) <= 1e-9 * ratio
    assert _verdict(
        11, ok, f"schema + m_k k^5/|A|^7 and sigma/bound columns for |A| in {sorted(mk_rows)}"
    )
