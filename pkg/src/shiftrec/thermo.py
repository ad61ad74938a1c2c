"""Entropy, partition sums, pressure and Bowen-equation roots.

Potentials are locally constant: a depth-d potential is a table indexed by
admissible words of length d (d = 0 is a constant).  With that restriction
the sup and inf of a Birkhoff sum over a cylinder are exact: the terms
fully inside the word are fixed and the last d - 1 terms are optimised over
the admissible extensions of the word.

All sums are carried in log space.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, EmptyLevel, NonExtendableWord
from .families import LANGUAGE, WordFamily
from .words import Word, format_word, parse_word

NEG_INF = float("-inf")


def logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def logsumexp(values: Iterable[float]) -> float:
    vals = [v for v in values if v != NEG_INF]
    if not vals:
        return NEG_INF
    top = max(vals)
    return top + math.log(math.fsum(math.exp(v - top) for v in vals))


class Potential:
    """A depth-d locally constant function on the shift space."""

    def __init__(self, depth: int = 0, value: float | None = None,
                 table: Mapping | None = None, positive: bool = True):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.depth = depth
        if depth == 0:
            if value is None:
                raise ValueError("depth-0 potential needs a value")
            self.value = float(value)
            self.table = {(): self.value}
        else:
            if not table:
                raise ValueError("depth-d potential needs a table")
            self.table = {tuple(k): float(v) for k, v in table.items()}
            if any(len(k) != depth for k in self.table):
                raise ValueError("table keys must have length equal to depth")
            self.value = None
        if positive and any(v <= 0 for v in self.table.values()):
            raise ValueError("potential must be strictly positive")
        self.positive = positive

    @classmethod
    def constant(cls, c: float) -> "Potential":
        return cls(0, value=c)

    @classmethod
    def from_config(cls, spec: Mapping) -> "Potential":
        try:
            depth = int(spec.get("depth", 0))
            if depth == 0:
                return cls(0, value=float(spec["value"]))
            table = {parse_word(k): float(v) for k, v in spec["values"].items()}
            return cls(depth, table=table)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad potential {spec!r}: {exc}") from exc

    def to_json(self) -> dict:
        if self.depth == 0:
            return {"depth": 0, "value": self.value}
        return {"depth": self.depth,
                "values": {format_word(k): v for k, v in sorted(self.table.items())}}

    @property
    def is_constant(self) -> bool:
        return len(set(self.table.values())) == 1

    @property
    def max(self) -> float:
        return max(self.table.values())

    @property
    def min(self) -> float:
        return min(self.table.values())

    def __call__(self, window: Sequence[int]) -> float:
        if self.depth == 0:
            return self.value
        try:
            return self.table[tuple(window)]
        except KeyError:
            raise KeyError(f"potential undefined on {format_word(window)}") from None

    def tilted(self, s: float) -> "Potential":
        """s·g with g = -(f + 1)."""
        if self.depth == 0:
            return Potential(0, value=-s * (self.value + 1), positive=False)
        return Potential(self.depth, table={k: -s * (v + 1) for k, v in self.table.items()},
                         positive=False)

    def validate(self, space) -> None:
        """Table must cover exactly L_d of ``space``."""
        if self.depth == 0:
            return
        words = set(space.enumerate_words(self.depth))
        if set(self.table) != words:
            missing = sorted(words - set(self.table))
            extra = sorted(set(self.table) - words)
            raise ConfigError(f"potential table mismatch: missing {missing[:5]}, "
                              f"extra {extra[:5]}")

    def __repr__(self):
        return f"Potential({self.to_json()})"


def _birkhoff_terms(phi: Potential, word: Word, ext: Word) -> float:
    d = phi.depth
    if d == 0:
        return phi.value * len(word)
    seq = word + ext
    return math.fsum(phi(seq[k:k + d]) for k in range(len(word)))


def _birkhoff_extremum(space, phi: Potential, w: Sequence[int], pick) -> float:
    w = tuple(w)
    if len(w) < 1:
        raise ValueError("need |w| ≥ 1")
    if phi.depth <= 1:
        if not space.accepts(w):
            raise NonExtendableWord(f"{format_word(w)} is not in the language")
        return _birkhoff_terms(phi, w, ())
    exts = list(space.extensions(w, phi.depth - 1))
    if not exts:
        raise NonExtendableWord(f"{format_word(w)} has no admissible extension")
    return pick(_birkhoff_terms(phi, w, e) for e in exts)


def birkhoff_sup(space, phi: Potential, w: Sequence[int]) -> float:
    """sup of S_{|w|} φ over the cylinder [w]."""
    return _birkhoff_extremum(space, phi, w, max)


def birkhoff_inf(space, phi: Potential, w: Sequence[int]) -> float:
    """inf of S_{|w|} φ over the cylinder [w]."""
    return _birkhoff_extremum(space, phi, w, min)


# ---------------------------------------------------------------------------
# partition sums

def _trailing_best(space, phi: Potential):
    d = phi.depth
    memo: dict = {}

    def best(state, last):
        key = (state, last)
        if key in memo:
            return memo[key]
        top = NEG_INF
        stack = [((), state)]
        while stack:
            ext, st = stack.pop()
            if len(ext) == d - 1:
                seq = last + ext
                val = math.fsum(phi(seq[i:i + d]) for i in range(len(last)))
                top = max(top, val)
                continue
            for a, st2 in space.successors(st):
                stack.append((ext + (a,), st2))
        memo[key] = top
        return top

    return best


def log_partition(space, D: WordFamily, phi: Potential, n: int,
                  prefix: Sequence[int] = ()) -> float:
    """log Σ_{w ∈ D_n, w starts with prefix} exp(sup_{[w]} S_n φ).

    A dynamic programme over (space state, family state, last d-1 symbols).
    Returns -inf when no word qualifies.
    """
    D = D or LANGUAGE
    if not D.has_automaton:
        return log_partition_enum(space, D, phi, n, prefix)
    d = phi.depth
    keep = max(d - 1, 0)
    prefix = tuple(prefix)
    if len(prefix) > n:
        return NEG_INF
    start = (space.start(), D.fstart(), ())
    layer = {start: 0.0}

    def advance(layer, symbols):
        nxt: dict = {}
        for (st, fs, last), lw in layer.items():
            for a, st2 in space.successors(st):
                if symbols is not None and a != symbols:
                    continue
                fs2 = D.fstep(fs, a)
                if fs2 is False:
                    continue
                add = 0.0
                if d == 0:
                    add = phi.value
                elif len(last) == d - 1:
                    add = phi(last + (a,))
                last2 = (last + (a,))[-keep:] if keep else ()
                key = (st2, fs2, last2)
                nxt[key] = logaddexp(nxt.get(key, NEG_INF), lw + add)
        return nxt

    for a in prefix:
        layer = advance(layer, a)
    for _ in range(n - len(prefix)):
        layer = advance(layer, None)
    best = _trailing_best(space, phi) if d >= 2 else None
    total = NEG_INF
    for (st, fs, last), lw in layer.items():
        if not D.faccept(fs, n):
            continue
        if best is not None and n > 0:
            tail = best(st, last)
            if tail == NEG_INF:
                raise NonExtendableWord("word with no admissible extension")
            lw += tail
        total = logaddexp(total, lw)
    return total


def log_partition_enum(space, D: WordFamily, phi: Potential, n: int,
                       prefix: Sequence[int] = ()) -> float:
    """Same sum by enumerating D_n; the independent route for tests."""
    D = D or LANGUAGE
    return logsumexp(birkhoff_sup(space, phi, w)
                     for w in D.enumerate(space, n, prefix=prefix))


def partition_sum(space, D: WordFamily, f: Potential, s: float, n: int,
                  prefix: Sequence[int] = ()) -> float:
    """log Λ_n(D, s·g) with g = -(f + 1); raises EmptyLevel if D_n = ∅."""
    val = log_partition(space, D, f.tilted(s), n, prefix)
    if val == NEG_INF:
        raise EmptyLevel(f"D_{n} is empty")
    return val


# ---------------------------------------------------------------------------
# entropy

def tail_window(values: Sequence, fraction: float = 0.3) -> list:
    if not values:
        return []
    k = max(1, math.ceil(fraction * len(values)))
    return list(values[-k:])


@dataclass
class EntropyEstimate:
    estimate: float
    counts: dict
    per_level: dict
    ratios: dict
    finite_horizon: bool = True

    def to_json(self) -> dict:
        return {"estimate": self.estimate,
                "counts": {str(n): c for n, c in self.counts.items()},
                "per_level": {str(n): v for n, v in self.per_level.items()},
                "ratios": {str(n): v for n, v in self.ratios.items()},
                "finite_horizon": self.finite_horizon}


def entropy_estimate(space, D: WordFamily | None = None, n_max: int = 30
                     ) -> EntropyEstimate:
    """Growth rate of ♯D_n: per-level (1/n) log ♯D_n and ratio estimates.

    The headline is the median of the last 30% of the ratio estimates
    log(♯D_m/♯D_n)/(m-n) taken between consecutive populated lengths.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    D = D or LANGUAGE
    counts = {n: D.count(space, n) for n in range(1, n_max + 1)}
    populated = [n for n, c in counts.items() if c > 0]
    per_level = {n: math.log(counts[n]) / n for n in populated}
    ratios = {}
    for n, m in zip(populated, populated[1:]):
        ratios[n] = (math.log(counts[m]) - math.log(counts[n])) / (m - n)
    if ratios:
        est = statistics.median(tail_window(list(ratios.values())))
    elif per_level:
        est = per_level[populated[-1]]
    else:
        raise EmptyLevel("family empty at every tested length")
    return EntropyEstimate(est, counts, per_level, ratios)


# ---------------------------------------------------------------------------
# Bowen equation

def _bisect_decreasing(func, lo: float, hi: float, tol: float,
                       max_iter: int = 200) -> float:
    flo, fhi = func(lo), func(hi)
    if flo < 0 or fhi > 0:
        raise ValueError(f"bracket [{lo}, {hi}] does not straddle the root "
                         f"({flo}, {fhi})")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = func(mid)
        if fm == 0:
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sn_bracket(count: int, n: int, f: Potential) -> tuple[float, float]:
    """Bounds on s_n from ♯D_n and the extremes of f + 1."""
    lc = math.log(count)
    return lc / (n * (f.max + 1)), lc / (n * (f.min + 1))


def solve_sn(space, D: WordFamily | None, f: Potential, n: int,
             tol: float = 1e-10) -> float:
    """The unique s with Σ_{w ∈ D_n} exp(s · sup S_n g) = 1, g = -(f+1)."""
    D = D or LANGUAGE
    count = D.count(space, n)
    if count == 0:
        raise EmptyLevel(f"D_{n} is empty")
    lo, hi = sn_bracket(count, n, f)
    if lo == hi:
        return lo
    return _bisect_decreasing(lambda s: partition_sum(space, D, f, s, n), lo, hi, tol)


def solve_ratio(space, D: WordFamily, f: Potential, n: int, m: int,
                tol: float = 1e-10) -> float | None:
    """Root of log Λ_m(s) - log Λ_n(s) = 0 (growth-rate form of the Bowen equation)."""
    cn, cm = D.count(space, n), D.count(space, m)
    if cn == 0 or cm == 0:
        raise EmptyLevel(f"D_{n} or D_{m} is empty")
    if f.is_constant:
        return (math.log(cm) - math.log(cn)) / ((m - n) * (f.max + 1))

    def growth(s):
        return partition_sum(space, D, f, s, m) - partition_sum(space, D, f, s, n)

    hi = max(1.0, 2 * math.log(space.alphabet_size) / (f.min + 1))
    try:
        return _bisect_decreasing(growth, 0.0, hi, tol)
    except ValueError:
        return None


@dataclass
class BowenSolution:
    per_level: dict
    limit: float
    spread: float
    bracket: tuple
    tolerance: float
    ratio_levels: dict = field(default_factory=dict)
    per_level_tail_median: float | None = None
    per_level_spread: float | None = None
    populated: list = field(default_factory=list)
    finite_horizon: bool = True

    def to_json(self) -> dict:
        return {"limit": self.limit, "spread": self.spread,
                "bracket": list(self.bracket), "tolerance": self.tolerance,
                "per_level": {str(n): v for n, v in self.per_level.items()},
                "ratio_levels": {str(n): v for n, v in self.ratio_levels.items()},
                "per_level_tail_median": self.per_level_tail_median,
                "per_level_spread": self.per_level_spread,
                "populated_lengths": self.populated,
                "finite_horizon": self.finite_horizon}


def bowen_root(space, D: WordFamily | None, f: Potential,
               n_schedule: Sequence[int], tol: float = 1e-10) -> BowenSolution:
    """Per-level solutions s_n and a limit estimate for P(-s(f+1)) = 0.

    ``per_level`` holds s_n for every populated n in the schedule.  The
    limit is the median over the last 30% of the growth-rate solutions
    between consecutive populated levels, which removes the O(1/n) bias of
    (1/n) log Λ_n; the plain per-level tail median is reported alongside.
    """
    D = D or LANGUAGE
    schedule = sorted(set(int(n) for n in n_schedule))
    if any(n < 1 for n in schedule):
        raise ValueError("schedule entries must be ≥ 1")
    populated = [n for n in schedule if D.count(space, n) > 0]
    if not populated:
        raise EmptyLevel("family empty on the whole schedule")
    per_level = {n: solve_sn(space, D, f, n, tol) for n in populated}
    ratio_levels = {}
    for n, m in zip(populated, populated[1:]):
        r = solve_ratio(space, D, f, n, m, tol)
        if r is not None:
            ratio_levels[n] = r
    tail_pl = tail_window(list(per_level.values()))
    pl_median = statistics.median(tail_pl)
    pl_spread = max(tail_pl) - min(tail_pl)
    if ratio_levels:
        tail = tail_window(list(ratio_levels.values()))
        limit = statistics.median(tail)
        spread = max(tail) - min(tail)
    else:
        limit, spread = pl_median, pl_spread
    h = entropy_estimate(space, D, max(populated[-1], 2)).estimate
    bracket = (h / (f.max + 1), h / (f.min + 1))
    return BowenSolution(per_level, limit, spread, bracket, tol, ratio_levels,
                         pl_median, pl_spread, populated)


@dataclass
class PressureEstimate:
    family: str
    values: dict
    ratio_values: dict
    extrapolated: float
    direction: str = "limsup"

    def to_json(self) -> dict:
        return {"family": self.family, "direction": self.direction,
                "values": {str(n): v for n, v in self.values.items()},
                "ratio_values": {str(n): v for n, v in self.ratio_values.items()},
                "extrapolated": self.extrapolated, "finite_horizon": True}


def pressure_estimate(space, D: WordFamily | None, phi: Potential,
                      n_max: int) -> PressureEstimate:
    """(1/n) log Λ_n(D, φ) for n ≤ n_max with a tail-median growth estimate."""
    D = D or LANGUAGE
    logs = {}
    for n in range(1, n_max + 1):
        v = log_partition(space, D, phi, n)
        if v != NEG_INF:
            logs[n] = v
    if not logs:
        raise EmptyLevel("family empty at every tested length")
    values = {n: v / n for n, v in logs.items()}
    keys = sorted(logs)
    ratios = {n: (logs[m] - logs[n]) / (m - n) for n, m in zip(keys, keys[1:])}
    src = list(ratios.values()) or list(values.values())
    return PressureEstimate(D.name, values, ratios, statistics.median(tail_window(src)))
