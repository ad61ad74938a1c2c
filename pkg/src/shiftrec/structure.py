"""Finite-horizon checkers for the structural hypotheses on a language.

Each check certifies a property only up to the stated horizon; none of
them proves the global statement.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import BudgetExceeded
from .families import LANGUAGE, WordFamily, words_up_to
from .words import Word, edit_distance, format_word


@dataclass
class SpecificationCertificate:
    gap_length: int | None
    horizon: int
    tau_max: int
    witness_table: dict = field(default_factory=dict)
    uncovered: tuple | None = None
    pairs_checked: int = 0

    @property
    def ok(self) -> bool:
        return self.uncovered is None

    def to_json(self, sample: int = 20) -> dict:
        items = sorted(self.witness_table.items(),
                       key=lambda kv: (-len(kv[1]), kv[0]))[:sample]
        out = {
            "ok": self.ok,
            "tau": self.gap_length,
            "tau_max": self.tau_max,
            "horizon": self.horizon,
            "pairs_checked": self.pairs_checked,
            "finite_horizon": True,
            "witness_samples": [
                {"v": format_word(v), "w": format_word(w), "u": format_word(u)}
                for (v, w), u in items],
        }
        if self.uncovered is not None:
            out["uncovered"] = [format_word(x) for x in self.uncovered]
        return out


def _gluing_words(p: int, length: int):
    return product(range(p), repeat=length)


def check_w_specification(space, G: WordFamily = LANGUAGE, tau_max: int = 2,
                          horizon: int = 8, budget: int = 10**7
                          ) -> SpecificationCertificate:
    """Smallest τ ≤ τ_max such that v, w ∈ G (|v|,|w| ≤ horizon) glue as vuw ∈ G.

    For every pair the shortest connector is searched by length, so the
    reported τ is the maximum of the per-pair minima.  On failure the first
    uncovered pair (in (length, lex) order) is reported and τ is None.
    """
    words = words_up_to(space, G, horizon)
    if len(words) ** 2 > budget:
        raise BudgetExceeded(f"{len(words) ** 2} pairs exceed budget {budget}")
    connectors = [list(_gluing_words(space.alphabet_size, k))
                  for k in range(tau_max + 1)]
    cert = SpecificationCertificate(None, horizon, tau_max)
    tau = 0
    for v in words:
        for w in words:
            cert.pairs_checked += 1
            found = None
            for k in range(tau_max + 1):
                for u in connectors[k]:
                    if G.contains(space, v + u + w):
                        found = u
                        break
                if found is not None:
                    break
            if found is None:
                cert.uncovered = (v, w)
                return cert
            cert.witness_table[(v, w)] = found
            tau = max(tau, len(found))
    cert.gap_length = tau
    return cert


def revalidate_certificate(space, G: WordFamily,
                           cert: SpecificationCertificate) -> bool:
    return all(len(u) <= cert.gap_length and G.contains(space, v + u + w)
               and space.is_admissible(v + u + w)
               for (v, w), u in cert.witness_table.items())


@dataclass
class FreeConcatenationReport:
    ok: bool
    horizon: int
    counterexample: tuple | None = None
    pairs_checked: int = 0

    def to_json(self) -> dict:
        out = {"ok": self.ok, "horizon": self.horizon,
               "pairs_checked": self.pairs_checked, "finite_horizon": True}
        if self.counterexample is not None:
            out["counterexample"] = {"u": format_word(self.counterexample[0]),
                                     "w": format_word(self.counterexample[1])}
        return out


def check_free_concatenation(space, F: WordFamily, horizon: int,
                             budget: int = 10**7) -> FreeConcatenationReport:
    """uw ∈ F for all u, w ∈ F with |u|, |w| ≤ horizon."""
    words = words_up_to(space, F, horizon)
    if len(words) ** 2 > budget:
        raise BudgetExceeded(f"{len(words) ** 2} pairs exceed budget {budget}")
    checked = 0
    for u in words:
        for w in words:
            checked += 1
            if not F.contains(space, u + w):
                return FreeConcatenationReport(False, horizon, (u, w), checked)
    return FreeConcatenationReport(True, horizon, None, checked)


def populated_lengths(space, F: WordFamily, horizon: int) -> list[int]:
    """N(F) ∩ [1, horizon], recorded empirically."""
    return [n for n in range(1, horizon + 1) if F.count(space, n) > 0]


@dataclass
class MistakeProfile:
    samples: dict
    exact: dict
    decreasing_ratio_evidence: list

    def to_json(self) -> dict:
        return {"samples": {str(n): v for n, v in self.samples.items()},
                "exact": {str(n): v for n, v in self.exact.items()},
                "ratios": self.decreasing_ratio_evidence,
                "finite_horizon": True}


def distance_to_family(space, F: WordFamily, w: Word,
                       max_radius: int | None = None,
                       ball_budget: int = 200000) -> int:
    """min_{v ∈ F} d̂(v, w), by growing edit balls around w.

    Intermediate words in the ball need not be admissible; only the final
    candidate is tested for membership in F.
    """
    w = tuple(w)
    if F.contains(space, w):
        return 0
    p = space.alphabet_size
    limit = max_radius if max_radius is not None else len(w) + 1
    seen = {w}
    shell = {w}
    for r in range(1, limit + 1):
        nxt = set()
        for x in shell:
            for i in range(len(x) + 1):
                if i < len(x):
                    nxt.add(x[:i] + x[i + 1:])
                    for a in range(p):
                        if a != x[i]:
                            nxt.add(x[:i] + (a,) + x[i + 1:])
                for a in range(p):
                    nxt.add(x[:i] + (a,) + x[i:])
        nxt -= seen
        for x in sorted(nxt, key=lambda y: (len(y), y)):
            if F.contains(space, x):
                return r
        seen |= nxt
        shell = nxt
        if len(seen) > ball_budget:
            return _distance_scan(space, F, w, r + 1, limit)
    raise ValueError(f"no member of {F.name} within distance {limit} of {w}")


def _distance_scan(space, F, w, r_lo, r_hi):
    # exhaustive fallback; the answer is already known to be ≥ r_lo
    best = None
    for n in range(max(0, len(w) - r_hi), len(w) + r_hi + 1):
        for v in F.enumerate(space, n):
            d = edit_distance(v, w)
            if best is None or d < best:
                best = d
        if best is not None and best == r_lo:
            break
    if best is None:
        raise ValueError("family empty in the search window")
    return best


def mistake_profile(space, F: WordFamily, n_list: Sequence[int],
                    sample_budget: int = 5000, seed: int = 0) -> MistakeProfile:
    """max over w ∈ L_n of the edit distance from w to F, for each n.

    Exact when ♯L_n ≤ sample_budget; otherwise a uniform random sample of
    size sample_budget gives a lower estimate, flagged in ``exact``.
    """
    rng = random.Random(seed)
    samples, exact = {}, {}
    for n in n_list:
        size = space.count_words(n)
        if size <= sample_budget:
            pool = space.enumerate_words(n)
            exact[n] = True
        else:
            pool = (LANGUAGE.sample(space, n, rng) for _ in range(sample_budget))
            exact[n] = False
        samples[n] = max(distance_to_family(space, F, w) for w in pool)
    ratios = [samples[n] / n for n in n_list if n > 0]
    return MistakeProfile(samples, exact, ratios)
