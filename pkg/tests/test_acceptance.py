"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import math
import time

import pytest

from shiftrec.cli import main as cli_main
from shiftrec.families import LANGUAGE, EndsWith, StartsWith
from shiftrec.moran import (attach_measure, build_levels, build_schedule,
                            conservation_errors, holder_audit, make_params,
                            materialize_point)
from shiftrec.recurrence import (PsiFunction, cover_crossing, dimension_R_f,
                                 dimension_R_psi)
from shiftrec.shifts import FullShift, SGapShift, golden_mean_shift
from shiftrec.structure import check_free_concatenation, check_w_specification
from shiftrec.thermo import Potential, bowen_root, entropy_estimate
from shiftrec.words import edit_ball_census, edit_ball_log_bound, edit_distance

from oracles import all_words, script_distances

LOG2 = math.log(2)
LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


@pytest.fixture
def verdict(capsys, request):
    def emit(ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_closed_form_bowen_roots(verdict):
    worst_err = worst_spread = worst_time = 0.0
    for p, alpha in [(2, 1.0), (2, 3.0), (3, 0.5)]:
        t0 = time.perf_counter()
        sol = bowen_root(FullShift(p), None, Potential.constant(alpha), range(1, 21), 1e-12)
        worst_time = max(worst_time, time.perf_counter() - t0)
        worst_err = max(worst_err, abs(sol.limit - math.log(p) / (1 + alpha)))
        vals = list(sol.per_level.values())
        worst_spread = max(worst_spread, max(vals) - min(vals), sol.spread)
    ok = worst_err < 1e-9 and worst_spread < 1e-9 and worst_time < 1.0
    verdict(ok, f"max error {worst_err:.2e}, max spread {worst_spread:.2e}, "
                f"slowest {worst_time:.3f}s")


def _cli_dimension(tmp_path, space, psi):
    import json
    cfg = tmp_path / "c.json"
    out = tmp_path / "o.json"
    cfg.write_text(json.dumps({"space": space, "psi": psi}))
    assert cli_main(["dim-rpsi", str(cfg), "--out", str(out), "--horizon", "30"]) == 0
    return json.loads(out.read_text())


def test_criterion_02_recurrence_dimension_formula(tmp_path, verdict):
    t0 = time.perf_counter()
    a = _cli_dimension(tmp_path, {"kind": "full", "p": 2}, {"form": "exponential", "alpha": 2})
    b = _cli_dimension(tmp_path, {"kind": "beta", "beta": "(1+sqrt5)/2"},
                       {"form": "polynomial", "kappa": 2})
    elapsed = time.perf_counter() - t0
    err_a = abs(a["dimension"] - LOG2 / 3)
    err_b = abs(b["dimension"] - LOG_PHI)
    ok = (err_a < 1e-9 and b["branch"] == "C2" and b["b"] == 0
          and b["dimension"] == b["h"] and err_b < 1e-3 and elapsed < 10)
    verdict(ok, f"full-shift error {err_a:.2e}; golden C2 b={b['b']} error {err_b:.2e}; "
                f"{elapsed:.2f}s")


def test_criterion_03_cross_theorem_consistency(verdict):
    worst = 0.0
    for space in (FullShift(2), golden_mean_shift()):
        for alpha in (0.5, 1.0, 2.0):
            d_f = dimension_R_f(space, Potential.constant(alpha)).dimension
            d_psi = dimension_R_psi(space, PsiFunction.exponential(alpha)).dimension
            worst = max(worst, abs(d_f - d_psi))
    verdict(worst < 1e-6, f"max |dim R(f) - dim R(psi)| = {worst:.2e}")


def test_criterion_04_language_oracles(verdict):
    g = golden_mean_shift()
    fib = [1, 1]
    while len(fib) < 23:
        fib.append(fib[-1] + fib[-2])
    counts_ok = all(g.count_words(n) == fib[n + 1] for n in range(0, 21))
    est = entropy_estimate(SGapShift([], ("ap", 0, 2)), None, 30).estimate
    err = abs(est - LOG_PHI)
    verdict(counts_ok and err < 1e-2,
            f"Fibonacci counts n<=20 {'exact' if counts_ok else 'MISMATCH'}; "
            f"even-gap ratio error {err:.2e}")


def test_criterion_05_moran_recurrence_witness(verdict):
    t0 = time.perf_counter()
    checks = failures = 0
    setups = [(FullShift(2), LANGUAGE, 1), (golden_mean_shift(), EndsWith(0), 8)]
    for space, family, M in setups:
        params = make_params(space, family, M, 0.1, psi=PsiFunction.exponential(1))
        schedule = build_schedule(params, 4)
        levels = build_levels(params, schedule, branch_budget=2000, seed=0)
        for seed in range(100):
            pt = materialize_point(params, schedule, seed, levels)
            x = pt.symbols
            for chk in pt.log:
                checks += 1
                # integer prefix comparison and e^{-t} < e^{-n̂} on exponents
                matched = all(x[chk.shift + j] == x[j] for j in range(chk.t))
                if not (matched and chk.ok and chk.t > chk.shift):
                    failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and checks == 2 * 100 * 4 and elapsed < 30
    verdict(ok, f"{checks - failures}/{checks} level checks pass; {elapsed:.2f}s")


def test_criterion_06_measure_audits(verdict):
    # psi variant: exact conservation on two constructions
    psi_err = 0.0
    exact_levels = 0
    for space, family, M, alpha in [(FullShift(2), LANGUAGE, 1, 2.0),
                                    (golden_mean_shift(), EndsWith(0), 8, 1.0)]:
        params = make_params(space, family, M, 0.1, psi=PsiFunction.exponential(alpha))
        schedule = build_schedule(params, 3)
        levels = build_levels(params, schedule, branch_budget=200000)
        mu = attach_measure(params, schedule, levels)
        errs = conservation_errors(levels, mu)
        exact_levels += len(errs)
        psi_err = max([psi_err, *errs.values()])
    # f variant: conservation up to the solver tolerance on s
    tol = 1e-10
    f = Potential(1, table={(0,): 0.5, (1,): 1.5})
    fparams = make_params(golden_mean_shift(), StartsWith(0), 2, 0.9, f=f)
    fsched = build_schedule(fparams, 2)
    flevels = build_levels(fparams, fsched, branch_budget=10**6)
    fmu = attach_measure(fparams, fsched, flevels, tol)
    f_err = max(conservation_errors(flevels, fmu).values())
    # |d/ds log Λ_m| ≤ m (1 + ‖f‖), so a tol-accurate root leaves this much
    f_allow = tol * max(lv.m for lv in fsched.levels) * (1 + f.max)
    # Hölder audit on the ψ = e^{-2n} full-shift construction
    params = make_params(FullShift(2), LANGUAGE, 1, 0.1, psi=PsiFunction.exponential(2))
    audit = holder_audit(params, build_schedule(params, 7), slack=0.02)
    deep = {k: v for k, v in audit.min_by_level().items() if k >= 6}
    target = 0.81 * LOG2 / 3 - 0.02
    ok = (exact_levels >= 4 and psi_err < 1e-12 and f_err <= f_allow
          and audit.clears(last_levels=2) and min(deep.values()) >= target)
    verdict(ok, f"psi conservation {psi_err:.1e} over {exact_levels} exact levels; "
                f"f conservation {f_err:.1e} (allowed {f_allow:.1e}); deepest-two "
                f"min exponent {min(deep.values()):.5f} vs {target:.5f}")


def test_criterion_07_cover_sum_crossing(verdict):
    full2 = FullShift(2)
    grid = [round(0.01 * k, 10) for k in range(1, 101)]
    rows = []
    for target, expected in [(PsiFunction.exponential(2), LOG2 / 3),
                             (Potential.constant(1), LOG2 / 2)]:
        lo, hi = cover_crossing(full2, target, grid, range(5, 31))["crossing"]
        rows.append((lo, hi, expected, lo - 0.01 <= expected <= hi + 0.01))
    verdict(all(r[3] for r in rows),
            "; ".join(f"crossing [{lo:.2f}, {hi:.2f}] vs {e:.5f}" for lo, hi, e, _ in rows))


def test_criterion_08_edit_ball_bound(verdict):
    t0 = time.perf_counter()
    rows, C = edit_ball_census(FullShift(2), range(1, 13), [0.1, 0.25, 0.5], 10**8)
    elapsed = time.perf_counter() - t0
    holds = all(math.log(r.count) <= edit_ball_log_bound(C, len(r.center), r.radius_fraction) + 1e-12
                for r in rows)
    centers = len({r.center for r in rows})
    ok = C <= 10 and holds and centers == 2 ** 13 - 2 and elapsed < 60
    verdict(ok, f"C = {C:.4f} over {centers} centers x 3 radii; bound "
                f"{'holds' if holds else 'FAILS'}; {elapsed:.1f}s")


def test_criterion_09_structure_checks(verdict):
    golden = golden_mean_shift()
    cert_g = check_w_specification(golden, LANGUAGE, tau_max=2, horizon=8)
    cert_f = check_w_specification(FullShift(2), LANGUAGE, tau_max=2, horizon=8)
    free = check_free_concatenation(golden, LANGUAGE, 8)
    ok = (cert_g.gap_length == 1 and cert_f.gap_length == 0 and not free.ok
          and free.counterexample == ((1,), (1,)))
    verdict(ok, f"golden tau={cert_g.gap_length}, full tau={cert_f.gap_length}, "
                f"counterexample={free.counterexample}")


def test_criterion_10_edit_distance_oracle(verdict):
    words = [w for n in range(7) for w in all_words(2, n)]
    mismatches = pairs = 0
    for v in words:
        dist = script_distances(v, 2, max_len=8)
        for w in words:
            pairs += 1
            if edit_distance(v, w) != dist[w]:
                mismatches += 1
    verdict(mismatches == 0, f"{pairs - mismatches}/{pairs} pairs agree")
