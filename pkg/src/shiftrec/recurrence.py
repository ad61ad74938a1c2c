"""Dimension formulas for the recurrence sets R(ψ) and R(f).

R(ψ) = {x : d(σⁿx, x) < ψ(n) infinitely often} has dimension h/(1+b) with
b = liminf -log ψ(n)/n when ψ is nonincreasing, and h when liminf ψ > 0.
R(f) (targets e^{-S_n f(x)}) has dimension equal to the root of the
Bowen equation P(-s(f+1)) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ConfigError, HypothesisViolated
from .families import LANGUAGE, WordFamily
from .thermo import (BowenSolution, Potential, bowen_root, entropy_estimate,
                     log_partition, logsumexp)


@dataclass(frozen=True)
class PsiFunction:
    """ψ(n) = c · n^{-κ} · e^{-αn}, or an explicit table ψ(1), ψ(2), ...

    Closed forms cover exponential (κ = 0), polynomial (α = 0) and constant
    targets.  Tables are taken as given and their liminf is only estimated.
    """

    c: float = 1.0
    kappa: float = 0.0
    alpha: float = 0.0
    table: tuple | None = None

    def __post_init__(self):
        if self.table is None:
            if self.c <= 0:
                raise ValueError("ψ must be positive")
            if self.alpha < 0 or (self.alpha == 0 and self.kappa < 0):
                raise ValueError("ψ must not grow without bound")
        elif any(v <= 0 for v in self.table):
            raise ValueError("ψ must be positive")

    @classmethod
    def exponential(cls, alpha: float, c: float = 1.0) -> "PsiFunction":
        return cls(c=c, alpha=alpha)

    @classmethod
    def polynomial(cls, kappa: float, c: float = 1.0) -> "PsiFunction":
        return cls(c=c, kappa=kappa)

    @classmethod
    def constant(cls, c: float) -> "PsiFunction":
        return cls(c=c)

    @classmethod
    def from_table(cls, values: Sequence[float]) -> "PsiFunction":
        return cls(table=tuple(float(v) for v in values))

    @classmethod
    def from_config(cls, spec: Mapping) -> "PsiFunction":
        try:
            form = spec.get("form", "product")
            if form == "exponential":
                return cls.exponential(float(spec["alpha"]), float(spec.get("c", 1.0)))
            if form == "polynomial":
                return cls.polynomial(float(spec["kappa"]), float(spec.get("c", 1.0)))
            if form == "constant":
                return cls.constant(float(spec["c"]))
            if form == "table":
                return cls.from_table(spec["values"])
            if form == "product":
                return cls(float(spec.get("c", 1.0)), float(spec.get("kappa", 0.0)),
                           float(spec.get("alpha", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad psi {spec!r}: {exc}") from exc
        raise ConfigError(f"unknown psi form {form!r}")

    def to_json(self) -> dict:
        if self.table is not None:
            return {"form": "table", "values": list(self.table)}
        return {"form": "product", "c": self.c, "kappa": self.kappa, "alpha": self.alpha}

    @property
    def closed_form(self) -> bool:
        return self.table is None

    def log(self, n: int) -> float:
        """log ψ(n), n ≥ 1, without underflow."""
        if n < 1:
            raise ValueError("ψ is defined on n ≥ 1")
        if self.table is not None:
            if n > len(self.table):
                raise ValueError(f"ψ table has no value at n = {n}")
            return math.log(self.table[n - 1])
        return math.log(self.c) - self.kappa * math.log(n) - self.alpha * n

    def __call__(self, n: int) -> float:
        return math.exp(self.log(n))

    def neg_log(self, n: int) -> float:
        """-log ψ(n); exact for integer α and κ = 0, c = 1."""
        if self.table is None and self.kappa == 0 and self.c == 1.0:
            return self.alpha * n
        return -self.log(n)

    def monotone_from(self) -> int | None:
        """Smallest n0 with ψ nonincreasing on [n0, ∞), None if unknown/never."""
        if self.table is not None:
            # a table is trivially monotone on its last entry; demand that
            # the nonincreasing stretch covers at least its second half
            vals = self.table
            n0 = len(vals)
            while n0 > 1 and vals[n0 - 1] <= vals[n0 - 2]:
                n0 -= 1
            return n0 if n0 <= (len(vals) + 1) // 2 else None
        # d/dn log ψ = -κ/n - α ≤ 0  ⟺  n ≥ -κ/α
        if self.kappa >= 0:
            return 1
        return max(1, math.ceil(-self.kappa / self.alpha))

    @property
    def nonincreasing(self) -> bool:
        return self.monotone_from() == 1

    def liminf_positive(self, horizon: int = 1000) -> bool | None:
        if self.table is None:
            return self.alpha == 0 and self.kappa == 0
        return None


@dataclass
class RecurrenceExponent:
    b: float
    analytic: bool
    window: tuple | None = None


def recurrence_exponent(psi: PsiFunction, horizon: int = 1000,
                        tail_fraction: float = 0.3) -> RecurrenceExponent:
    """b = liminf -log ψ(n)/n.

    Exact for closed forms (the polynomial factor vanishes in the limit).
    For tables it is the minimum over the last 30% of the sampled range,
    a finite-horizon estimate and flagged as such.
    """
    if psi.closed_form:
        return RecurrenceExponent(psi.alpha, True)
    top = min(horizon, len(psi.table))
    start = max(1, top - max(1, math.ceil(tail_fraction * top)) + 1)
    b = min(-psi.log(n) / n for n in range(start, top + 1))
    return RecurrenceExponent(b, False, (start, top))


@dataclass
class DimensionReport:
    set_kind: str
    h: float | None
    dimension: float
    b: float | None = None
    branch: str | None = None
    bowen: BowenSolution | None = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"set_kind": self.set_kind, "dimension": self.dimension,
               "h": self.h, "b": self.b, "branch": self.branch,
               "provenance": self.provenance}
        if self.bowen is not None:
            out["bowen"] = self.bowen.to_json()
        return out


def dimension_R_psi(space, psi: PsiFunction, horizon: int = 30,
                    entropy=None, branch: str | None = None) -> DimensionReport:
    """dim_H R(ψ): h when liminf ψ > 0, h/(1+b) when ψ is nonincreasing.

    ψ that is only eventually nonincreasing is accepted: R(ψ) does not see
    finitely many values.  Anything else with liminf ψ = 0 is refused.
    ``branch`` forces "C1" or "C2"; the forced branch must still apply.
    """
    if branch not in (None, "C1", "C2"):
        raise ConfigError(f"unknown branch {branch!r}")
    est = entropy if entropy is not None else entropy_estimate(space, None, horizon)
    h = est.estimate
    prov = {"entropy_horizon": horizon, "entropy_finite_horizon": True,
            "psi": psi.to_json()}
    positive = psi.liminf_positive()
    if branch == "C1" and not positive:
        raise HypothesisViolated("C1 needs liminf ψ > 0")
    if positive and branch != "C2":
        return DimensionReport("R(psi)", h, h, 0.0, "C1", provenance=prov)
    n0 = psi.monotone_from()
    if n0 is None:
        raise HypothesisViolated(
            "ψ is neither nonincreasing nor bounded away from 0; not covered")
    rb = recurrence_exponent(psi, horizon=max(horizon, 1000))
    prov.update({"b_analytic": rb.analytic, "monotone_from": n0})
    if rb.window is not None:
        prov["b_window"] = list(rb.window)
    return DimensionReport("R(psi)", h, h / (1 + rb.b), rb.b, "C2", provenance=prov)


def dimension_R_f(space, f: Potential, n_schedule: Sequence[int] | None = None,
                  tol: float = 1e-10, family: WordFamily | None = None,
                  horizon: int = 30) -> DimensionReport:
    """dim_H R(f) as the Bowen root over D = L (or a family F with s(F) = s(X))."""
    if f.min <= 0:
        raise HypothesisViolated("f must be strictly positive")
    f.validate(space)
    schedule = list(n_schedule) if n_schedule is not None else list(range(1, horizon + 1))
    sol = bowen_root(space, family or LANGUAGE, f, schedule, tol)
    h = entropy_estimate(space, family, max(max(schedule), 2)).estimate
    prov = {"schedule": [schedule[0], schedule[-1]], "finite_horizon": True,
            "potential": f.to_json(), "family": (family or LANGUAGE).name}
    return DimensionReport("R(f)", h, sol.limit, bowen=sol, provenance=prov)


# ---------------------------------------------------------------------------
# covering audit

@dataclass
class CoverAudit:
    s: float
    log_terms: dict
    ratios: dict
    decays: bool
    grows: bool

    def to_json(self) -> dict:
        return {"s": self.s,
                "log_terms": {str(n): v for n, v in self.log_terms.items()},
                "ratios": {str(n): v for n, v in self.ratios.items()},
                "decays": self.decays, "grows": self.grows,
                "tail_partial_sum_log": logsumexp(self.log_terms.values())}


def cover_sum_audit(space, target, s: float, N_range: Sequence[int],
                    tail_fraction: float = 0.3) -> CoverAudit:
    """Per-n terms Σ_{w ∈ L_n} diam(J(w))^s of the natural cover.

    ``target`` is a PsiFunction (diam ≤ e^{-n} ψ(n)) or a Potential
    (diam ≤ e^{-n - inf S_n f}).  ``decays``/``grows`` report whether the
    tail ratio of consecutive terms sits below/above 1.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    N = sorted(set(N_range))
    log_terms = {}
    for n in N:
        if isinstance(target, PsiFunction):
            log_terms[n] = math.log(space.count_words(n)) + s * (-n + target.log(n))
        else:
            # e^{s·sup S_n g} with g = -(f+1) equals (e^{-n - inf S_n f})^s
            log_terms[n] = log_partition(space, LANGUAGE, target.tilted(s), n)
    ratios = {n: (log_terms[m] - log_terms[n]) / (m - n)
              for n, m in zip(N, N[1:])}
    k = max(1, math.ceil(tail_fraction * len(ratios)))
    tail = list(ratios.values())[-k:]
    mean_log_ratio = sum(tail) / len(tail)
    return CoverAudit(s, log_terms, {n: math.exp(r) for n, r in ratios.items()},
                      mean_log_ratio < 0, mean_log_ratio > 0)


def cover_crossing(space, target, s_grid: Sequence[float],
                   N_range: Sequence[int]) -> dict:
    """Scan s over a grid and locate where the tail ratio crosses 1."""
    rows = [(s, cover_sum_audit(space, target, s, N_range)) for s in s_grid]
    crossing = None
    for (s0, a0), (s1, a1) in zip(rows, rows[1:]):
        if not a0.decays and a1.decays:
            crossing = (s0, s1)
            break
    return {"grid": [{"s": s, "decays": a.decays, "grows": a.grows,
                      "tail_ratio": list(a.ratios.values())[-1]} for s, a in rows],
            "crossing": crossing}
