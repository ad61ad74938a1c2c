"""Finite words, the shift metric and the edit metric.

A word is a plain tuple of non-negative ints.  Tuples are hashable and
immutable, which is all the toolkit needs from a word type.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import islice
from typing import Iterable, Sequence

from .errors import BudgetExceeded

MAX_ALPHABET = 65536

Word = tuple


def parse_word(text: str | Sequence[int]) -> Word:
    """Parse "0110" (alphabets up to 10 symbols) or a list of ints."""
    if isinstance(text, str):
        text = text.strip()
        if text.startswith("["):
            return parse_word(json.loads(text))
        if not text.isdigit() and text != "":
            raise ValueError(f"not a compact digit string: {text!r}")
        return tuple(int(c) for c in text)
    word = tuple(int(a) for a in text)
    if any(a < 0 or a >= MAX_ALPHABET for a in word):
        raise ValueError(f"symbol out of range in {word!r}")
    return word


def format_word(word: Sequence[int]) -> str:
    if all(a < 10 for a in word):
        return "".join(str(a) for a in word)
    return json.dumps(list(word))


def word_to_json(word: Sequence[int]) -> list[int]:
    return [int(a) for a in word]


def check_word(word: Sequence[int], p: int) -> None:
    for a in word:
        if not 0 <= a < p:
            raise ValueError(f"symbol {a} outside alphabet of size {p}")


def common_prefix_length(u: Iterable[int], v: Iterable[int]) -> int:
    """|u ∧ v|; works on finite words and on (lazy) symbol streams."""
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def shift_metric(u, v, equal: bool = False) -> float:
    """d(u, v) = exp(-|u ∧ v|).

    Set ``equal=True`` to declare two infinite streams identical; the
    distance is then exactly 0.  Streams are compared lazily, so pass
    finite prefixes for infinite points.
    """
    if equal:
        return 0.0
    return math.exp(-common_prefix_length(u, v))


def edit_distance(v: Sequence[int], w: Sequence[int]) -> int:
    """Levenshtein distance (substitution, insertion, deletion), O(|v||w|)."""
    if len(v) < len(w):
        v, w = w, v
    prev = list(range(len(w) + 1))
    for i, a in enumerate(v, 1):
        cur = [i] + [0] * len(w)
        for j, b in enumerate(w, 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a != b))
        prev = cur
    return prev[-1]


def _lev_start(n: int, cap: int) -> tuple:
    return tuple(min(j, cap) for j in range(n + 1))


def _lev_step(state: tuple, w: Sequence[int], a: int, cap: int) -> tuple:
    prev = state[0] + 1
    if prev > cap:
        prev = cap
    out = [prev]
    diag = state[0]
    for j in range(1, len(state)):
        up = state[j]
        v = diag if a == w[j - 1] else diag + 1
        if up + 1 < v:
            v = up + 1
        if prev + 1 < v:
            v = prev + 1
        if v > cap:
            v = cap
        out.append(v)
        prev, diag = v, up
    return tuple(out)


def edit_ball_radius(n: int, delta: float) -> int:
    # floor(delta*n) with a guard against 0.1*10 = 0.99999...
    return int(math.floor(delta * n + 1e-9))


@dataclass(frozen=True)
class EditBallCensus:
    center: Word
    radius_fraction: float
    radius: int
    count: int
    bound_constant: float | None = None


def edit_ball_count(space, w: Sequence[int], delta: float,
                    budget: int = 10**7) -> EditBallCensus:
    """Exact ♯{v ∈ L : d̂(v, w) ≤ δ|w|}.

    Walks the language up to length |w| + r in aggregated form: words that
    reach the same (shift state, Levenshtein column) are merged, so the
    cost is the number of distinct pairs, not the number of words.
    ``budget`` caps the size of that frontier.
    """
    w = tuple(w)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    r = edit_ball_radius(len(w), delta)
    cap = r + 1
    frontier = {(_lev_start(len(w), cap), space.start()): 1}
    total = 0
    for length in range(len(w) + r + 1):
        nxt: dict = {}
        for (lev, st), cnt in frontier.items():
            if lev[-1] <= r:
                total += cnt
            if length == len(w) + r:
                continue
            for a in range(space.alphabet_size):
                st2 = space.step(st, a)
                if st2 is None:
                    continue
                lev2 = _lev_step(lev, w, a, cap)
                if min(lev2) > r:
                    continue
                key = (lev2, st2)
                nxt[key] = nxt.get(key, 0) + cnt
        if len(nxt) > budget:
            raise BudgetExceeded(f"edit-ball frontier {len(nxt)} > {budget}")
        frontier = nxt
    return EditBallCensus(w, delta, r, total)


def edit_ball_count_bruteforce(space, w: Sequence[int], delta: float,
                               budget: int = 10**6) -> int:
    w = tuple(w)
    r = edit_ball_radius(len(w), delta)
    seen = 0
    count = 0
    for n in range(max(0, len(w) - r), len(w) + r + 1):
        for v in space.enumerate_words(n, budget=budget):
            seen += 1
            if seen > budget:
                raise BudgetExceeded("brute-force edit ball over budget")
            if edit_distance(v, w) <= r:
                count += 1
    return count


def _xlogx(delta: float) -> float:
    return 0.0 if delta == 0 else delta * math.log(delta)


def edit_ball_log_bound(C: float, n: int, delta: float) -> float:
    """log of C n^C (e^{Cδ} e^{-δ log δ})^n, with δ log δ := 0 at δ = 0."""
    return math.log(C) + C * math.log(n) + n * (C * delta - _xlogx(delta))


def fit_edit_ball_constant(census: Iterable[EditBallCensus],
                           c_max: float = 1e3, tol: float = 1e-9) -> float:
    """Smallest C > 0 making the edit-ball bound hold on every census row.

    The bound is increasing in C for n ≥ 1, so bisection finds the
    threshold.  Rows with n = 0 are skipped (n^C is degenerate there).
    """
    rows = [(len(c.center), c.radius_fraction, c.count) for c in census
            if len(c.center) >= 1]

    def ok(C: float) -> bool:
        return all(math.log(cnt) <= edit_ball_log_bound(C, n, d) + 1e-12
                   for n, d, cnt in rows)

    if not rows:
        return 0.0
    if not ok(c_max):
        raise ValueError(f"no C ≤ {c_max} satisfies the bound")
    lo, hi = 0.0, c_max
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid > 0 and ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def edit_ball_census(space, lengths: Iterable[int], deltas: Iterable[float],
                     budget: int = 10**7) -> tuple[list[EditBallCensus], float]:
    """Exhaustive census over every admissible center of the given lengths.

    Returns the rows (each tagged with the common fitted C) and C itself.
    """
    deltas = list(deltas)
    rows = []
    seen: dict = {}
    for n in lengths:
        for w in space.enumerate_words(n, budget=budget):
            key = space.census_key(w)
            for d in deltas:
                r = edit_ball_radius(n, d)
                if (key, r) not in seen:
                    seen[key, r] = edit_ball_count(space, w, d, budget=budget).count
                rows.append(EditBallCensus(w, d, r, seen[key, r]))
    C = fit_edit_ball_constant(rows)
    rows = [EditBallCensus(r.center, r.radius_fraction, r.radius, r.count, C)
            for r in rows]
    return rows, C


def take(stream: Iterable[int], n: int) -> Word:
    return tuple(islice(stream, n))
