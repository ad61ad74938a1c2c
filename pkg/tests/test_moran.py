import io
import json
import math
from fractions import Fraction

import pytest

from shiftrec.errors import AdmissibilityViolation, HypothesisViolated
from shiftrec.families import LANGUAGE, EndsWith, PredicateFamily, StartsWith
from shiftrec.moran import (attach_measure, build_levels, build_schedule,
                            conservation_errors, holder_audit, levels_to_jsonl,
                            make_params, mass_distribution_check, materialize_point,
                            periodic_extend, psi_log_mass, schedule_violations)
from shiftrec.recurrence import PsiFunction
from shiftrec.shifts import FullShift, SGapShift, golden_mean_shift
from shiftrec.thermo import Potential
from shiftrec.words import common_prefix_length

LOG2 = math.log(2)


def psi_params(space=None, family=None, M=1, alpha=1.0, eta=0.1, n1=None, **kw):
    space = space or FullShift(2)
    return make_params(space, family, M, eta, psi=PsiFunction.exponential(alpha), n1=n1, **kw)


def test_schedule_example_psi():
    p = psi_params(M=2, n1=5)
    lv = build_schedule(p, 1)[1]
    assert (lv.l, lv.i, lv.n_hat, lv.t_hat, lv.t) == (2, 1, 4, 5, 6)
    assert lv.r == Fraction(5, 2)


def test_schedule_m1_forces_t_hat():
    p = psi_params(M=1)
    sched = build_schedule(p, 4)
    for lv in sched.levels:
        assert lv.t_hat == lv.n_hat + 1 == lv.t
        assert lv.i == 0


def test_schedule_example_f():
    p = make_params(FullShift(2), None, 2, 0.5, f=Potential.constant(1), n1=2)
    lv = build_schedule(p, 1)[1]
    assert (lv.n, lv.m, lv.t_hat, lv.t) == (2, 2, 3, 4)
    assert lv.r == 3


@pytest.mark.parametrize("M,alpha,n1", [(1, 1, 1), (2, 1, 5), (3, 0.5, 4), (2, 2, 2)])
def test_psi_schedule_invariants(M, alpha, n1):
    p = psi_params(M=M, alpha=alpha, n1=n1)
    sched = build_schedule(p, 5)
    assert schedule_violations(p, sched) == []
    for lv in sched.levels:
        assert lv.l >= 1
        assert -lv.t_hat < p.psi.log(lv.n_hat) <= -lv.t_hat + 1


def test_f_schedule_invariants(golden):
    f = Potential(1, table={(0,): 0.5, (1,): 1.5})
    p = make_params(golden, StartsWith(0), 2, 0.5, f=f)
    sched = build_schedule(p, 3)
    assert schedule_violations(p, sched) == []
    assert not sched.uniform


def test_f_schedule_skips_empty_lengths():
    space = SGapShift([2])
    fam = PredicateFamily(lambda w: w[0] == 1 and w[-1] == 1, "s-e-1")
    p = make_params(space, fam, 1, 0.5, f=Potential.constant(1), h=0.2)
    sched = build_schedule(p, 3)
    for lv in sched.levels:
        assert fam.count(space, lv.m) > 0


def test_params_validation(golden):
    with pytest.raises(HypothesisViolated):
        # F_1 = {0}: a single block carries no entropy
        make_params(golden, EndsWith(0), 1, 0.1, psi=PsiFunction.exponential(1))
    p = make_params(golden, EndsWith(0), 8, 0.1, psi=PsiFunction.exponential(1))
    assert p.n_blocks == 34 and p.block_entropy_ratio >= 0.9
    with pytest.raises(HypothesisViolated):
        make_params(golden, None, 2, 0.1, psi=PsiFunction.from_table([0.1, 0.5, 0.01, 0.005]))
    with pytest.raises(ValueError):
        make_params(golden, None, 2, 1.5, psi=PsiFunction.exponential(1))


def test_full_shift_level_one_count():
    p = psi_params(M=1, n1=3)
    sched = build_schedule(p, 1)
    (level,) = build_levels(p, sched)
    lv = sched[1]
    assert len(level.cylinders) == 2 ** lv.n_hat
    assert len({c.word for c in level.cylinders}) == 2 ** lv.n_hat
    for c in level.cylinders:
        assert len(c.word) == lv.n_hat + lv.t
        assert c.word[lv.n_hat:] == periodic_extend(c.word[:lv.n_hat], lv.n_hat + lv.t)[lv.n_hat:]


def test_golden_levels_admissible(golden):
    p = make_params(golden, EndsWith(0), 8, 0.1, psi=PsiFunction.exponential(1))
    sched = build_schedule(p, 2)
    levels = build_levels(p, sched, branch_budget=5000, seed=1)
    for level in levels:
        for c in level.cylinders:
            assert golden.is_admissible(c.word[:200])
            assert "11" not in "".join(map(str, c.word))


def test_nesting_and_overhang(golden):
    p = make_params(golden, EndsWith(0), 2, 0.5, psi=PsiFunction.exponential(0.5), check_entropy=False)
    sched = build_schedule(p, 3)
    levels = build_levels(p, sched)
    assert not any(lv.sampled for lv in levels)
    for k in (1, 2):
        parents = levels[k - 1].cylinders
        for c in levels[k].cylinders:
            par = parents[c.parent]
            assert c.word[:len(par.word)] == par.word
    for level in levels:
        for c in level.cylinders:
            t = c.t
            assert c.word[c.n:c.n + t] == c.word[:t]


def test_single_block_single_cylinder():
    space = FullShift(2)
    fam = PredicateFamily(lambda w: all(a == 0 for a in w), "zeros")
    p = make_params(space, fam, 3, 0.1, psi=PsiFunction.exponential(1), check_entropy=False)
    sched = build_schedule(p, 3)
    levels = build_levels(p, sched)
    assert [len(lv.cylinders) for lv in levels] == [1, 1, 1]
    pt = materialize_point(p, sched, seed=0)
    assert pt.symbols == (0,) * sched[3].end and pt.ok


def test_bad_family_detected():
    g = golden_mean_shift()
    # L is not closed under concatenation here: 01·10 contains 11
    p = make_params(g, LANGUAGE, 2, 0.5, psi=PsiFunction.exponential(0.5), check_entropy=False)
    with pytest.raises(AdmissibilityViolation):
        build_levels(p, build_schedule(p, 3))


def test_measure_uniform_split():
    space = FullShift(3)
    p = make_params(space, None, 1, 0.1, psi=PsiFunction.exponential(1), n1=2)
    sched = build_schedule(p, 1)
    levels = build_levels(p, sched)
    mu = attach_measure(p, sched, levels)
    assert sched[1].l == 2
    assert all(lm == pytest.approx(math.log(1 / 9)) for lm in mu.log_masses[0])


def test_measure_two_levels_product():
    # ♯F_M = 2 (blocks 00, 01); α = 4 makes the sparsity jump give l_2 = 2
    p = psi_params(M=2, alpha=4.0, n1=2, family=StartsWith(0), check_entropy=False)
    sched = build_schedule(p, 2)
    assert (sched[1].l, sched[2].l) == (1, 2)
    levels = build_levels(p, sched)
    mu = attach_measure(p, sched, levels)
    assert all(lm == pytest.approx(math.log(1 / 8)) for lm in mu.log_masses[1])


def test_measure_f_variant_closed_form(full2):
    p = make_params(full2, None, 4, 0.5, f=Potential.constant(1))
    sched = build_schedule(p, 1)
    levels = build_levels(p, sched)
    mu = attach_measure(p, sched, levels)
    assert sched[1].m == 4 and len(levels[0].cylinders) == 16
    assert mu.s_levels[1] == pytest.approx(LOG2 / 2, abs=1e-10)
    assert all(lm == pytest.approx(math.log(1 / 16), abs=1e-9) for lm in mu.log_masses[0])


@pytest.mark.parametrize("space,family", [(FullShift(2), LANGUAGE), (golden_mean_shift(), EndsWith(0))],
                         ids=["full-L", "golden-ends0"])
def test_conservation(space, family):
    p = make_params(space, family, 2, 0.5, psi=PsiFunction.exponential(0.5), check_entropy=False)
    sched = build_schedule(p, 3)
    levels = build_levels(p, sched, branch_budget=10**6)
    mu = attach_measure(p, sched, levels)
    errs = conservation_errors(levels, mu)
    assert set(errs) == {1, 2, 3} and max(errs.values()) < 1e-12
    assert abs(mu.level_total(3)) < 1e-12


def test_conservation_f_variant(golden):
    f = Potential(1, table={(0,): 0.5, (1,): 1.5})
    p = make_params(golden, StartsWith(0), 2, 0.9, f=f)
    sched = build_schedule(p, 2)
    levels = build_levels(p, sched, branch_budget=10**6)
    mu = attach_measure(p, sched, levels, tol=1e-12)
    errs = conservation_errors(levels, mu)
    assert max(errs.values()) < 1e-9


def test_psi_log_mass_matches_measure():
    p = make_params(FullShift(2), None, 2, 0.5, psi=PsiFunction.exponential(0.7), n1=3, check_entropy=False)
    sched = build_schedule(p, 3)
    levels = build_levels(p, sched, branch_budget=10**6)
    mu = attach_measure(p, sched, levels)
    for level, masses in zip(levels, mu.log_masses):
        for c, lm in list(zip(level.cylinders, masses))[:5]:
            got, k, case = psi_log_mass(p, sched, len(c.word), prefix=c.word)
            assert got == pytest.approx(lm, abs=1e-12) and k == level.k and case == "overhang"


def test_psi_log_mass_is_worst_case(golden):
    # the analytic maximum over cylinders agrees with enumeration over built words
    p = make_params(golden, EndsWith(0), 3, 0.5, psi=PsiFunction.exponential(0.5), check_entropy=False)
    sched = build_schedule(p, 2)
    levels = build_levels(p, sched)
    words = [c.word for c in levels[-1].cylinders]
    for n in range(1, sched[2].end + 1):
        best, _, _ = psi_log_mass(p, sched, n)
        exact = max(psi_log_mass(p, sched, n, prefix=w)[0] for w in words)
        assert best == pytest.approx(exact, abs=1e-12)


def test_holder_audit_grid_contains_minimum():
    p = psi_params(M=2, alpha=2.0, n1=2, check_entropy=False)
    sched = build_schedule(p, 3)
    coarse = holder_audit(p, sched)
    full = holder_audit(p, sched, n_grid=range(1, sched[3].end + 1))
    assert coarse.min_by_level() == pytest.approx(full.min_by_level())


def test_holder_audit_deep_levels():
    p = psi_params(M=1, alpha=2.0, eta=0.1)
    sched = build_schedule(p, 7)
    audit = holder_audit(p, sched)
    assert audit.target == pytest.approx(0.81 * LOG2 / 3)
    assert audit.clears(last_levels=2)
    js = audit.to_json()
    assert set(js["min_by_level"]) == {str(k) for k in range(1, 8)}


def test_holder_f_variant_from_below(full2):
    p = make_params(full2, None, 2, 0.5, f=Potential.constant(1))
    sched = build_schedule(p, 3)
    levels = build_levels(p, sched, branch_budget=3000, seed=2)
    mu = attach_measure(p, sched, levels)
    audit = holder_audit(p, sched, mu, levels)
    mins = audit.min_by_level()
    assert all(v <= LOG2 / 2 + 1e-9 for v in mins.values())
    assert mins[1] <= mins[2] <= mins[3]


def test_mass_distribution_examples():
    rows = [(n, -n * LOG2) for n in range(1, 40)]
    assert mass_distribution_check(rows, LOG2, 1.0).ok
    bad = mass_distribution_check(rows, LOG2 + 0.1, 1.0)
    assert not bad.ok and bad.failures
    p = psi_params(M=1, alpha=2.0, eta=0.1)
    audit = holder_audit(p, build_schedule(p, 7))
    deep = [r for r in audit.rows if r.level >= 6]
    s = 0.81 * LOG2 / 3 - 0.02
    rep = mass_distribution_check([(r.n, r.log_mass) for r in deep], s, 1.0)
    assert rep.ok and "evidence" in rep.to_json()["conclusion"]


@pytest.mark.parametrize("seed", range(10))
def test_points_recur(golden, seed):
    p = make_params(golden, EndsWith(0), 8, 0.1, psi=PsiFunction.exponential(1))
    sched = build_schedule(p, 3)
    pt = materialize_point(p, sched, seed)
    assert pt.ok and len(pt.log) == 3
    x = pt.symbols
    for chk in pt.log:
        assert common_prefix_length(x[chk.shift:], x) >= chk.t
        assert -chk.t < -chk.shift


def test_points_from_levels_f_variant(full2):
    p = make_params(full2, None, 2, 0.5, f=Potential.constant(1))
    sched = build_schedule(p, 2)
    levels = build_levels(p, sched, branch_budget=2000, seed=0)
    for seed in range(5):
        pt = materialize_point(p, sched, seed, levels)
        assert pt.ok
        for chk in pt.log:
            assert chk.log_target == -chk.shift


def test_points_deterministic(golden):
    p = make_params(golden, EndsWith(0), 8, 0.1, psi=PsiFunction.exponential(1))
    sched = build_schedule(p, 2)
    assert materialize_point(p, sched, 7).symbols == materialize_point(p, sched, 7).symbols


def test_jsonl_roundtrip():
    p = psi_params(M=1, n1=2)
    sched = build_schedule(p, 2)
    levels = build_levels(p, sched)
    mu = attach_measure(p, sched, levels)
    buf = io.StringIO()
    n = levels_to_jsonl(levels, mu, buf)
    recs = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert n == len(recs) == sum(len(lv.cylinders) for lv in levels)
    assert {"word", "level", "log_mass", "parent"} <= set(recs[0])
