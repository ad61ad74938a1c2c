"""Moran subsets of R(ψ) and R(f), their measures, and audits.

Two variants are supported.

``psi``: level k appends l_k blocks from F_M to the parent cylinder, giving
a prefix of length n̂_k, then repeats that prefix periodically for t_k more
symbols.  Every point of the level-k cylinder then satisfies
d(σ^{n̂_k}x, x) ≤ e^{-t_k} < ψ(n̂_k).  Mass is split evenly among children.

``f``: level k appends one block from F_{m_k}; the overhang t_k depends on
the inf of S_{n_k} f over the new prefix, so lengths vary per cylinder.
Masses follow exp(-s_k (m_k + inf S_{m_k} f(block))) with s_k = s_{m_k}(F).

Schedules are integer-exact; r_k is kept as a Fraction.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AdmissibilityViolation, BudgetExceeded, HypothesisViolated
from .families import LANGUAGE, WordFamily
from .recurrence import PsiFunction, recurrence_exponent
from .thermo import (NEG_INF, Potential, birkhoff_inf, entropy_estimate,
                     logsumexp, partition_sum, solve_sn)
from .words import common_prefix_length, format_word


def _ceil_multiple(x: int, M: int) -> int:
    return -(-x // M) * M


def _t_hat(neg_log_target: float) -> int:
    # e^{-t̂} < target ≤ e^{-t̂+1}  ⟺  t̂ - 1 ≤ -log target < t̂
    return max(1, math.floor(neg_log_target) + 1)


@dataclass
class MoranParams:
    space: object
    family: WordFamily
    M: int
    eta: float
    variant: str = "psi"
    psi: PsiFunction | None = None
    f: Potential | None = None
    n1: int | None = None
    blocks: tuple = ()
    h: float | None = None
    block_entropy_ratio: float | None = None

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)


def make_params(space, family: WordFamily | None, M: int, eta: float,
                psi: PsiFunction | None = None, f: Potential | None = None,
                n1: int | None = None, h: float | None = None,
                check_entropy: bool = True, entropy_horizon: int = 30
                ) -> MoranParams:
    """Validate a construction's inputs and collect F_M.

    For the psi variant the block set must carry most of the entropy:
    log ♯F_M ≥ (1-η) M h.  The achieved ratio log ♯F_M / (M h) is stored.
    """
    family = family or LANGUAGE
    if (psi is None) == (f is None):
        raise ValueError("give exactly one of psi or f")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if M < 1:
        raise ValueError("M must be positive")
    variant = "psi" if psi is not None else "f"
    blocks = tuple(family.enumerate(space, M)) if variant == "psi" else ()
    if variant == "psi" and not blocks:
        raise HypothesisViolated(f"F_{M} is empty")
    if variant == "f":
        if f.min <= 0:
            raise HypothesisViolated("f must be positive")
        if family.count(space, M) == 0:
            raise HypothesisViolated(f"F_{M} is empty")
    if h is None:
        h = entropy_estimate(space, None, entropy_horizon).estimate
    ratio = None
    if variant == "psi":
        if psi.monotone_from() != 1:
            raise HypothesisViolated("the Moran schedule needs ψ nonincreasing")
        ratio = math.log(len(blocks)) / (M * h) if h > 0 else math.inf
        if check_entropy and math.log(len(blocks)) < (1 - eta) * M * h - 1e-12:
            raise HypothesisViolated(
                f"log ♯F_M = {math.log(len(blocks)):.6g} < (1-η)Mh = "
                f"{(1 - eta) * M * h:.6g}; increase M")
    n1 = M if n1 is None else n1
    if n1 < M:
        raise ValueError("n1 must be at least M")
    return MoranParams(space, family, M, eta, variant, psi, f, n1, blocks, h, ratio)


# ---------------------------------------------------------------------------
# schedules

@dataclass
class LevelSchedule:
    k: int
    n: int
    t_hat: int
    t: int
    r: Fraction
    n_hat: int | None = None   # psi variant
    l: int | None = None
    i: int | None = None
    m: int | None = None       # f variant

    @property
    def end(self) -> int:
        base = self.n_hat if self.n_hat is not None else self.n
        return base + self.t

    def to_json(self) -> dict:
        out = {"k": self.k, "n": self.n, "t_hat": self.t_hat, "t": self.t,
               "r": f"{self.r.numerator}/{self.r.denominator}"}
        for key in ("n_hat", "l", "i", "m"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out


@dataclass
class MoranSchedule:
    variant: str
    M: int
    levels: list
    uniform: bool = True

    def __getitem__(self, k: int) -> LevelSchedule:
        return self.levels[k - 1]

    def __len__(self):
        return len(self.levels)

    def to_json(self) -> dict:
        return {"variant": self.variant, "M": self.M, "uniform": self.uniform,
                "levels": [lv.to_json() for lv in self.levels]}


def build_schedule(params: MoranParams, levels: int,
                   max_length: int = 10**15) -> MoranSchedule:
    """The least schedule meeting the sparsity and overhang constraints.

    psi: n_k is the least integer with n_k ≥ k·Σ_{j<k} n_j,
    n_k ≥ k·(-log ψ(n_{k-1})) and room for at least one block after the
    previous level; t_k is the least multiple of M above t̂_k.

    f: m_k is the least multiple of M with m_k η/2 ≥ (n_{k-1}+t_{k-1})‖f‖,
    m_k ≥ k Σ_{j<k} m_j and F_{m_k} ≠ ∅.  For non-constant f the overhang
    varies by cylinder; the schedule then carries the largest possible t_k
    (from S_n f ≤ n‖f‖), which is what the m_k constraint needs.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    M = params.M
    rows: list[LevelSchedule] = []
    if params.variant == "psi":
        psi = params.psi
        prev_end = 0
        ns: list[int] = []
        for k in range(1, levels + 1):
            if k == 1:
                n = params.n1
            else:
                n = max(k * sum(ns),
                        math.ceil(k * psi.neg_log(ns[-1]) - 1e-9),
                        prev_end + M)
            ns.append(n)
            l, i = divmod(n - prev_end, M)
            n_hat = prev_end + l * M
            t_hat = _t_hat(psi.neg_log(n_hat))
            t = _ceil_multiple(t_hat, M)
            if n_hat + t > max_length:
                raise BudgetExceeded(f"level {k} length {n_hat + t} exceeds {max_length}")
            rows.append(LevelSchedule(k, n, t_hat, t, Fraction(n_hat + t, n_hat),
                                      n_hat=n_hat, l=l, i=i))
            prev_end = n_hat + t
        return MoranSchedule("psi", M, rows, True)

    f = params.f
    norm = f.max
    ms: list[int] = []
    prev_end = 0
    for k in range(1, levels + 1):
        if k == 1:
            m = M
        else:
            need = max(2 * prev_end * norm / params.eta, k * sum(ms))
            m = _ceil_multiple(max(M, math.ceil(need - 1e-9)), M)
        for _ in range(M + 1):
            if params.family.count(params.space, m) > 0:
                break
            m += 1
        else:
            raise HypothesisViolated(f"F is empty on [{m - M - 1}, {m}]")
        ms.append(m)
        n = prev_end + m
        t_hat = _t_hat(n * norm)
        t = _ceil_multiple(t_hat, M)
        if n + t > max_length:
            raise BudgetExceeded(f"level {k} length {n + t} exceeds {max_length}")
        rows.append(LevelSchedule(k, n, t_hat, t, Fraction(n + t, n), m=m))
        prev_end = n + t
    return MoranSchedule("f", M, rows, f.is_constant)


def schedule_violations(params: MoranParams, schedule: MoranSchedule) -> list[str]:
    """Every defining constraint re-checked; empty list means valid."""
    out = []
    M = params.M
    prev_end = 0
    acc = 0
    prev_n = None
    for lv in schedule.levels:
        k = lv.k
        if lv.t % M or not lv.t_hat <= lv.t <= lv.t_hat + M:
            out.append(f"k={k}: t not the right multiple of M")
        if schedule.variant == "psi":
            psi = params.psi
            if lv.n_hat != prev_end + lv.l * M or not 0 <= lv.i < M:
                out.append(f"k={k}: n_hat/l/i inconsistent")
            if lv.n - lv.n_hat != lv.i or not lv.n - M <= lv.n_hat <= lv.n:
                out.append(f"k={k}: n_k - M ≤ n̂_k ≤ n_k fails")
            nl = psi.neg_log(lv.n_hat)
            if not (lv.t_hat > nl >= lv.t_hat - 1) and lv.t_hat != 1:
                out.append(f"k={k}: t_hat does not bracket ψ(n̂_k)")
            if lv.r * lv.n_hat != lv.n_hat + lv.t:
                out.append(f"k={k}: r_k wrong")
            if k > 1 and lv.n < k * max(acc, psi.neg_log(prev_n)) - 1e-9:
                out.append(f"k={k}: sparsity fails")
            acc += lv.n
            prev_n = lv.n
            prev_end = lv.n_hat + lv.t
        else:
            if lv.m % M or lv.n != lv.m + prev_end:
                out.append(f"k={k}: n_k = m_k + n_(k-1) + t_(k-1) fails")
            if k > 1 and (prev_end * params.f.max > lv.m * params.eta / 2 + 1e-9
                          or lv.m < k * acc):
                out.append(f"k={k}: m_k growth condition fails")
            if lv.r * lv.n != lv.n + lv.t:
                out.append(f"k={k}: r_k wrong")
            acc += lv.m
            prev_end = lv.n + lv.t
    return out


# ---------------------------------------------------------------------------
# levels

@dataclass
class Cylinder:
    word: tuple
    parent: int | None
    n: int                 # n̂_k (psi) or n_k (f): where the overhang starts
    t: int
    block: tuple = ()
    inf_block: float | None = None   # f variant: inf S_{m_k} f over [block]
    inf_prefix: float | None = None  # f variant: inf S_{n_k} f over the prefix


@dataclass
class MoranLevel:
    k: int
    cylinders: list
    sampled: bool = False


def periodic_extend(prefix: tuple, length: int) -> tuple:
    n = len(prefix)
    return prefix + tuple(prefix[j % n] for j in range(n, length))


def _check(space, word, k):
    if not space.accepts(word):
        raise AdmissibilityViolation(
            f"level {k} word {format_word(word[:60])}… left the language")


def _psi_child(params, lv, parent_word, blocks):
    prefix = parent_word + tuple(itertools.chain.from_iterable(blocks))
    return periodic_extend(prefix, lv.n_hat + lv.t), prefix


def _f_child(params, lv, parent_word, block):
    space, f, M = params.space, params.f, params.M
    prefix = parent_word + block
    s_inf = birkhoff_inf(space, f, prefix)
    t = _ceil_multiple(_t_hat(s_inf), M)
    return periodic_extend(prefix, len(prefix) + t), prefix, t, s_inf


def build_levels(params: MoranParams, schedule: MoranSchedule,
                 levels: int | None = None, branch_budget: int = 100000,
                 seed: int = 0) -> list[MoranLevel]:
    """Materialise the level cylinders.

    A level is built exactly when its total number of children fits the
    branch budget; otherwise each parent gets a seeded random sample of
    children and the level is flagged ``sampled``.
    """
    levels = len(schedule) if levels is None else levels
    rng = random.Random(seed)
    space, F, M = params.space, params.family, params.M
    out: list[MoranLevel] = []
    parents = [Cylinder((), None, 0, 0)]
    for k in range(1, levels + 1):
        lv = schedule[k]
        children: list[Cylinder] = []
        if params.variant == "psi":
            per_parent = params.n_blocks ** lv.l
            exact = per_parent * len(parents) <= branch_budget
            quota = max(1, branch_budget // len(parents))
            for pi, par in enumerate(parents):
                if exact:
                    choices = itertools.product(params.blocks, repeat=lv.l)
                else:
                    choices = (tuple(rng.choice(params.blocks) for _ in range(lv.l))
                               for _ in range(min(quota, per_parent)))
                for blocks in choices:
                    word, _ = _psi_child(params, lv, par.word, blocks)
                    _check(space, word, k)
                    children.append(Cylinder(word, pi, lv.n_hat, lv.t,
                                             tuple(itertools.chain.from_iterable(blocks))))
        else:
            m = lv.m
            per_parent = F.count(space, m)
            exact = per_parent * len(parents) <= branch_budget
            quota = max(1, branch_budget // len(parents))
            block_list = list(F.enumerate(space, m)) if exact else None
            for pi, par in enumerate(parents):
                choices = block_list if exact else [
                    F.sample(space, m, rng) for _ in range(min(quota, per_parent))]
                for block in choices:
                    word, prefix, t, s_inf = _f_child(params, lv, par.word, block)
                    _check(space, word, k)
                    children.append(Cylinder(word, pi, len(prefix), t, block,
                                             birkhoff_inf(space, params.f, block), s_inf))
        level = MoranLevel(k, children, sampled=not exact or
                           (bool(out) and out[-1].sampled))
        out.append(level)
        parents = children
    return out


# ---------------------------------------------------------------------------
# measure

@dataclass
class CylinderMeasure:
    log_masses: list          # per level, aligned with level.cylinders
    s_levels: dict = field(default_factory=dict)
    exact: list = field(default_factory=list)

    def level_total(self, k: int) -> float:
        return logsumexp(self.log_masses[k - 1])


def attach_measure(params: MoranParams, schedule: MoranSchedule,
                   levels: list[MoranLevel], tol: float = 1e-12) -> CylinderMeasure:
    """Log masses for every built cylinder."""
    out: list[list[float]] = []
    s_levels = {}
    parent_mass = [0.0]
    for level in levels:
        lv = schedule[level.k]
        masses = []
        if params.variant == "psi":
            step = -lv.l * math.log(params.n_blocks)
            for cyl in level.cylinders:
                masses.append(parent_mass[cyl.parent] + step)
        else:
            s_k = solve_sn(params.space, params.family, params.f, lv.m, tol)
            s_levels[level.k] = s_k
            for cyl in level.cylinders:
                masses.append(parent_mass[cyl.parent] - s_k * (lv.m + cyl.inf_block))
        out.append(masses)
        parent_mass = masses
    return CylinderMeasure(out, s_levels, [not lv.sampled for lv in levels])


def conservation_errors(levels: list[MoranLevel], measure: CylinderMeasure) -> dict:
    """max |log Σ children - log parent| per exactly built level."""
    errs = {}
    parent_mass = [0.0]
    for level, masses, exact in zip(levels, measure.log_masses, measure.exact):
        if exact:
            groups: dict = {}
            for cyl, lm in zip(level.cylinders, masses):
                groups.setdefault(cyl.parent, []).append(lm)
            errs[level.k] = max(abs(logsumexp(v) - parent_mass[p])
                                for p, v in groups.items())
        parent_mass = masses
    return errs


# ---------------------------------------------------------------------------
# Hölder audit

@dataclass
class HolderRow:
    n: int
    level: int
    case: str
    log_mass: float        # largest log μ(I_n) over cylinders at this n

    @property
    def exponent(self) -> float:
        return -self.log_mass / self.n


@dataclass
class HolderAudit:
    rows: list
    target: float | None
    slack: float
    levels: int

    def min_by_level(self) -> dict:
        out: dict = {}
        for r in self.rows:
            out[r.level] = min(out.get(r.level, math.inf), r.exponent)
        return out

    def clears(self, last_levels: int | None = None) -> bool:
        if self.target is None:
            raise ValueError("no target exponent")
        lo = self.levels - last_levels + 1 if last_levels else 1
        return all(r.exponent >= self.target - self.slack
                   for r in self.rows if r.level >= lo)

    def to_json(self) -> dict:
        return {"target": self.target, "slack": self.slack, "levels": self.levels,
                "min_by_level": {str(k): v for k, v in self.min_by_level().items()},
                "rows": [{"n": r.n, "level": r.level, "case": r.case,
                          "log_mass": r.log_mass, "exponent": r.exponent}
                         for r in self.rows]}


def _prefix_fractions(blocks: Sequence[tuple], M: int) -> list[float]:
    """max over length-i prefixes of ♯{blocks with that prefix}/♯F_M."""
    out = [1.0]
    for i in range(1, M):
        counts: dict = {}
        for b in blocks:
            counts[b[:i]] = counts.get(b[:i], 0) + 1
        out.append(max(counts.values()) / len(blocks))
    out.append(1.0 / len(blocks))
    return out


def psi_log_mass(params: MoranParams, schedule: MoranSchedule, n: int,
                 prefix: Sequence[int] | None = None) -> tuple[float, int, str]:
    """log μ(I_n) for the psi variant.

    With ``prefix`` (a prefix of some level word, |prefix| ≥ n) the exact
    mass of that cylinder; without it the largest mass over all cylinders.
    Returns (log mass, level, case).
    """
    logF = math.log(params.n_blocks)
    M = params.M
    fracs = _prefix_fractions(params.blocks, M)
    acc = 0.0
    start = 0
    for lv in schedule.levels:
        if n <= lv.n_hat + lv.t:
            if n > lv.n_hat:
                return acc - lv.l * logF, lv.k, "overhang"
            j, i = divmod(n - start, M)
            base = acc - j * logF
            if i == 0:
                return base, lv.k, "block-boundary"
            if prefix is None:
                frac = fracs[i]
            else:
                part = tuple(prefix[start + j * M:n])
                frac = sum(1 for b in params.blocks if b[:i] == part) / params.n_blocks
                if frac == 0:
                    return NEG_INF, lv.k, "interior"
            return base + math.log(frac), lv.k, "interior"
        acc -= lv.l * logF
        start = lv.n_hat + lv.t
    raise ValueError(f"n = {n} lies beyond the built schedule")


def holder_target(params: MoranParams) -> float | None:
    if params.variant == "psi":
        b = recurrence_exponent(params.psi).b
        return params.h * (1 - params.eta) ** 2 / (1 + b)
    return None


def holder_audit(params: MoranParams, schedule: MoranSchedule,
                 measure: CylinderMeasure | None = None,
                 levels: list[MoranLevel] | None = None,
                 n_grid: Iterable[int] | None = None, slack: float = 0.02,
                 paths: int = 4) -> HolderAudit:
    """Worst-case local exponents -log μ(I_n)/n.

    psi variant: the uniform split makes μ(I_n) a function of n and of the
    partial block at n only, so the worst case over all cylinders is exact
    without enumerating levels.  With no ``n_grid`` the audited lengths are
    the end of each overhang and, for every in-block offset i, the first and
    last block of each level; the exponent is monotone between those
    points, so this set contains the minimum over all n.

    f variant: exponents along up to ``paths`` built cylinders of the
    deepest level, using the attached masses at level ends and partition
    sums over block completions inside a block.
    """
    if params.variant == "psi":
        if n_grid is None:
            grid = set()
            start = 0
            for lv in schedule.levels:
                for i in range(1, params.M + 1):
                    grid.add(start + i)
                    grid.add(start + (lv.l - 1) * params.M + i)
                grid.add(lv.n_hat + lv.t)
                start = lv.n_hat + lv.t
            n_grid = grid
        rows = []
        for n in sorted(x for x in n_grid if x >= 1):
            lm, k, case = psi_log_mass(params, schedule, n)
            rows.append(HolderRow(n, k, case, lm))
        return HolderAudit(rows, holder_target(params), slack, len(schedule))

    if measure is None or levels is None:
        raise ValueError("the f variant audit needs built levels and their measure")
    rows = []
    deepest = levels[-1]
    grid = set(n_grid) if n_grid is not None else None
    for ci in range(min(paths, len(deepest.cylinders))):
        chain = []
        idx = ci
        for level in reversed(levels):
            chain.append((level, idx))
            idx = level.cylinders[idx].parent
        chain.reverse()
        parent_lm = 0.0
        parent_end = 0
        for level, idx in chain:
            cyl = level.cylinders[idx]
            lm = measure.log_masses[level.k - 1][idx]
            s_k = measure.s_levels[level.k]
            m = schedule[level.k].m
            for l in range(1, m):
                n = parent_end + l
                if grid is not None and n not in grid:
                    continue
                part = partition_sum(params.space, params.family, params.f, s_k, m,
                                     prefix=cyl.block[:l])
                rows.append(HolderRow(n, level.k, "interior", parent_lm + part))
            for n in (cyl.n, len(cyl.word)):
                if grid is None or n in grid:
                    rows.append(HolderRow(n, level.k,
                                          "block-boundary" if n == cyl.n else "overhang", lm))
            parent_lm, parent_end = lm, len(cyl.word)
    return HolderAudit(rows, None, slack, len(levels))


@dataclass
class MassDistributionReport:
    ok: bool
    s: float
    c: float
    checked: int
    worst_margin: float
    failures: list

    def to_json(self) -> dict:
        return {"ok": self.ok, "s": self.s, "c": self.c, "checked": self.checked,
                "worst_log_margin": self.worst_margin,
                "failures": self.failures[:20],
                "conclusion": (f"evidence for dim_H ≥ {self.s} on the audited family"
                               if self.ok else None)}


def mass_distribution_check(rows, s: float, c: float = 1.0,
                            eta_diam: float = 1.0) -> MassDistributionReport:
    """μ(I_n) ≤ c·diam(I_n)^s with diam(I_n) = e^{-n}, for e^{-n} < η_diam.

    ``rows`` is a HolderAudit or an iterable of (n, log μ(I_n)).
    """
    if isinstance(rows, HolderAudit):
        pairs = [(r.n, r.log_mass) for r in rows.rows]
    else:
        pairs = list(rows)
    logc = math.log(c)
    checked, fails, worst = 0, [], math.inf
    for n, lm in pairs:
        if math.exp(-n) >= eta_diam:
            continue
        checked += 1
        margin = logc - s * n - lm
        worst = min(worst, margin)
        if margin < -1e-12 * max(1.0, abs(lm)):
            fails.append({"n": n, "log_mass": lm, "log_bound": logc - s * n})
    return MassDistributionReport(not fails, s, c, checked, worst, fails)


# ---------------------------------------------------------------------------
# points

@dataclass
class RecurrenceCheck:
    level: int
    shift: int
    t: int
    matched: int
    log_target: float
    ok: bool

    def to_json(self) -> dict:
        return {"level": self.level, "shift": self.shift, "t": self.t,
                "matched": self.matched, "log_distance_bound": -self.t,
                "log_target": self.log_target, "ok": self.ok}


@dataclass
class PointWitness:
    symbols: tuple
    log: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.log)


def _walk_levels(levels, rng):
    idx = None
    path = []
    for level in levels:
        options = [i for i, c in enumerate(level.cylinders) if c.parent == idx] \
            if idx is not None else list(range(len(level.cylinders)))
        idx = rng.choice(options)
        path.append(level.cylinders[idx])
    return path


def _walk_schedule(params, schedule, rng):
    path = []
    word: tuple = ()
    for lv in schedule.levels:
        if params.variant == "psi":
            blocks = [rng.choice(params.blocks) for _ in range(lv.l)]
            word, _ = _psi_child(params, lv, word, blocks)
            _check(params.space, word, lv.k)
            path.append(Cylinder(word, None, lv.n_hat, lv.t))
        else:
            block = params.family.sample(params.space, lv.m, rng)
            word, prefix, t, s_inf = _f_child(params, lv, word, block)
            _check(params.space, word, lv.k)
            path.append(Cylinder(word, None, len(prefix), t, block, None, s_inf))
    return path


def materialize_point(params: MoranParams, schedule: MoranSchedule,
                      seed: int, levels: list[MoranLevel] | None = None
                      ) -> PointWitness:
    """A seeded point of the deepest cylinder with its recurrence log.

    The path either walks the built levels or, without them, draws blocks
    directly (uniformly from F_M, or uniformly from F_{m_k}).  For each
    level the log records |σ^{n}x ∧ x| ≥ t and e^{-t} < target, both
    checked on integers / exact logs of the emitted prefix.
    """
    rng = random.Random(seed)
    path = _walk_levels(levels, rng) if levels else _walk_schedule(params, schedule, rng)
    x = path[-1].word
    log = []
    for k, cyl in enumerate(path, 1):
        shift, t = cyl.n, cyl.t
        matched = common_prefix_length(x[shift:shift + t], x[:t])
        if params.variant == "psi":
            log_target = params.psi.log(shift)
        else:
            s_inf = cyl.inf_prefix if cyl.inf_prefix is not None else \
                birkhoff_inf(params.space, params.f, x[:shift])
            log_target = -s_inf
        log.append(RecurrenceCheck(k, shift, t, matched, log_target,
                                   matched >= t and -t < log_target))
    return PointWitness(x, log)


# ---------------------------------------------------------------------------
# serialisation

def levels_to_jsonl(levels: list[MoranLevel], measure: CylinderMeasure | None,
                    fh) -> int:
    lines = 0
    for li, level in enumerate(levels):
        for ci, cyl in enumerate(level.cylinders):
            rec = {"level": level.k, "index": ci, "word": format_word(cyl.word),
                   "parent": cyl.parent, "n": cyl.n, "t": cyl.t,
                   "log_mass": measure.log_masses[li][ci] if measure else None,
                   "sampled": level.sampled}
            fh.write(json.dumps(rec) + "\n")
            lines += 1
    return lines
