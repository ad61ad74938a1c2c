"""Shift spaces and their languages.

Every space exposes two routes to its language:

* ``is_admissible`` checks a word directly against the defining rule
  (lexicographic condition, gap scan, forbidden-factor scan);
* ``start``/``step`` is a right-resolving automaton used for enumeration,
  counting and the transfer-style sums in :mod:`shiftrec.thermo`.

Tests compare the two routes against each other.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import BudgetExceeded, ConfigError, PrecisionExhausted
from .words import MAX_ALPHABET, Word, check_word


class ShiftSpace:
    """Base class: one-sided subshift given by an automaton."""

    kind = "abstract"
    alphabet_size: int

    def start(self):
        raise NotImplementedError

    def step(self, state, a: int):
        """Next state after appending ``a``, or None if that leaves L."""
        raise NotImplementedError

    def is_admissible(self, word: Sequence[int]) -> bool:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def census_key(self, word: Sequence[int]) -> tuple:
        """A key shared by words whose edit balls have equal size.

        The default is the word itself; spaces whose language is invariant
        under some symbol relabelling or reversal may return a coarser key.
        """
        return tuple(word)

    # -- automaton helpers -------------------------------------------------
    def run(self, word: Sequence[int], state=None):
        st = self.start() if state is None else state
        for a in word:
            if st is None:
                return None
            st = self.step(st, a)
        return st

    def accepts(self, word: Sequence[int]) -> bool:
        """Membership through the automaton route."""
        return self.run(word) is not None

    def successors(self, state):
        for a in range(self.alphabet_size):
            st = self.step(state, a)
            if st is not None:
                yield a, st

    def enumerate_words(self, n: int, budget: int | None = None,
                        prefix: Sequence[int] = ()) -> Iterator[Word]:
        """L_n (optionally restricted to a prefix) in lexicographic order."""
        if n < 0:
            raise ValueError("n must be non-negative")
        prefix = tuple(prefix)
        st = self.run(prefix)
        if st is None or len(prefix) > n:
            return
        emitted = 0
        stack = [(prefix, st)]
        while stack:
            word, st = stack.pop()
            if len(word) == n:
                emitted += 1
                if budget is not None and emitted > budget:
                    raise BudgetExceeded(f"more than {budget} words of length {n}")
                yield word
                continue
            children = list(self.successors(st))
            for a, st2 in reversed(children):
                stack.append((word + (a,), st2))

    def count_words(self, n: int) -> int:
        """♯L_n by a dynamic programme over automaton states."""
        if n < 0:
            raise ValueError("n must be non-negative")
        counts = {self.start(): 1}
        for _ in range(n):
            nxt: dict = {}
            for st, c in counts.items():
                for _, st2 in self.successors(st):
                    nxt[st2] = nxt.get(st2, 0) + c
            counts = nxt
        return sum(counts.values())

    def extensions(self, word: Sequence[int], k: int) -> Iterator[Word]:
        """All e of length k with word·e admissible."""
        word = tuple(word)
        for ext in self.enumerate_words(len(word) + k, prefix=word):
            yield ext[len(word):]

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"


class FullShift(ShiftSpace):
    kind = "full"

    def __init__(self, p: int):
        if not 1 <= p <= MAX_ALPHABET:
            raise ValueError(f"alphabet size {p} out of range")
        self.alphabet_size = p
        self.p = p

    def start(self):
        return 0

    def step(self, state, a):
        return 0 if 0 <= a < self.p else None

    def is_admissible(self, word):
        check_word(word, self.p)
        return True

    def count_words(self, n):
        return self.p ** n

    def describe(self):
        return {"kind": "full", "p": self.p}

    def census_key(self, word):
        # L is invariant under every symbol permutation and under reversal,
        # and both act isometrically on the edit metric
        return min(_relabel(word), _relabel(tuple(reversed(word))))


def _relabel(word):
    names: dict = {}
    return tuple(names.setdefault(a, len(names)) for a in word)


class ForbiddenWordsShift(ShiftSpace):
    """Shift of finite type given by a finite list of forbidden words.

    L(X) only contains words that continue to infinite points, so states
    from which every path dies are pruned.
    """

    kind = "forbidden"

    def __init__(self, forbidden: Sequence[Sequence[int]], p: int | None = None):
        self.forbidden = sorted({tuple(f) for f in forbidden})
        if not self.forbidden or any(len(f) == 0 for f in self.forbidden):
            raise ValueError("need at least one non-empty forbidden word")
        top = max(max(f) for f in self.forbidden)
        self.alphabet_size = p if p is not None else max(2, top + 1)
        self.p = self.alphabet_size
        self.memory = max(len(f) for f in self.forbidden) - 1
        self._forbidden_set = set(self.forbidden)
        self._lengths = sorted({len(f) for f in self.forbidden})
        self._live_cache: dict = {}
        self._horizon = self.p ** self.memory + self.memory + 1

    def _raw_step(self, state, a):
        window = state + (a,)
        for L in self._lengths:
            if L <= len(window) and window[-L:] in self._forbidden_set:
                return None
        return window[-self.memory:] if self.memory else ()

    def _live(self, state) -> bool:
        # a state is live iff a path of length _horizon leaves it; any such
        # path must revisit a full-memory state, hence continues forever
        return self._live_depth(state, self._horizon)

    def _live_depth(self, state, depth):
        key = (state, depth)
        if key in self._live_cache:
            return self._live_cache[key]
        if depth == 0:
            res = True
        else:
            res = any(self._live_depth(st, depth - 1)
                      for st in (self._raw_step(state, a) for a in range(self.p))
                      if st is not None)
        self._live_cache[key] = res
        return res

    def start(self):
        return ()

    def step(self, state, a):
        if not 0 <= a < self.p:
            return None
        st = self._raw_step(state, a)
        if st is None or not self._live(st):
            return None
        return st

    def is_admissible(self, word):
        check_word(word, self.p)
        word = tuple(word)
        for i in range(len(word)):
            for L in self._lengths:
                if word[i:i + L] in self._forbidden_set and i + L <= len(word):
                    return False
        tail = word[-self.memory:] if self.memory else ()
        if len(word) < self.memory:
            tail = word
        return self._live(tail)

    def describe(self):
        from .words import format_word
        return {"kind": "forbidden", "words": [format_word(f) for f in self.forbidden],
                "p": self.p}


# ---------------------------------------------------------------------------
# S-gap shifts

@dataclass(frozen=True)
class GapSet:
    """S ⊂ ℕ as a finite list plus an optional tail.

    tail is None, ("min", m) meaning every integer ≥ m, or ("ap", a, d)
    meaning a, a+d, a+2d, ...
    """

    gaps: frozenset = frozenset()
    tail: tuple | None = None

    def __contains__(self, r: int) -> bool:
        if r in self.gaps:
            return True
        if self.tail is None:
            return False
        if self.tail[0] == "min":
            return r >= self.tail[1]
        _, a, d = self.tail
        return r >= a and (r - a) % d == 0

    @property
    def infinite(self) -> bool:
        return self.tail is not None

    def fold(self) -> tuple[int, int]:
        """(threshold T, period q): membership of r ≥ T is q-periodic."""
        top = max(self.gaps, default=-1) + 1
        if self.tail is None:
            return top, 1
        if self.tail[0] == "min":
            return max(top, self.tail[1]), 1
        return max(top, self.tail[1]), self.tail[2]

    def describe(self) -> dict:
        tail = None
        if self.tail is not None and self.tail[0] == "min":
            tail = {"min": self.tail[1]}
        elif self.tail is not None:
            tail = {"start": self.tail[1], "step": self.tail[2]}
        return {"gaps": sorted(self.gaps), "tail": tail}


class SGapShift(ShiftSpace):
    """Binary shift whose interior 0-runs between two 1s have length in S.

    Runs before the first 1 and after the last 1 of a finite word are
    unconstrained.  Finite S is allowed for testing and flagged via
    ``finite_s``.
    """

    kind = "sgap"

    def __init__(self, gaps: Sequence[int] = (), tail: tuple | None = None):
        if tail is not None:
            if tail[0] == "ap" and tail[2] <= 0:
                raise ValueError("arithmetic tail needs a positive step")
            if tail[1] < 0:
                raise ValueError("tail start must be non-negative")
        if any(g < 0 for g in gaps):
            raise ValueError("gaps must be non-negative")
        self.S = GapSet(frozenset(int(g) for g in gaps), tail)
        if not self.S.gaps and tail is None:
            raise ValueError("S must be non-empty")
        self.alphabet_size = 2
        self.p = 2
        self.finite_s = not self.S.infinite
        self._T, self._q = self.S.fold()

    def _fold(self, r):
        if r >= self._T:
            return self._T + (r - self._T) % self._q
        return r

    # state: (seen_one, folded run of 0s since the last 1)
    def start(self):
        return (False, 0)

    def step(self, state, a):
        seen, run = state
        if a == 0:
            return (seen, self._fold(run + 1))
        if a == 1:
            if seen and run not in self.S:
                return None
            return (True, 0)
        return None

    def is_admissible(self, word):
        check_word(word, 2)
        ones = [i for i, a in enumerate(word) if a == 1]
        return all((j - i - 1) in self.S for i, j in zip(ones, ones[1:]))

    def describe(self):
        return {"kind": "sgap", **self.S.describe()}


# ---------------------------------------------------------------------------
# beta-shifts

class QuadNumber:
    """Exact p + q·√d with rational p, q and square-free-free integer d ≥ 0."""

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q=0, d=0):
        self.p = Fraction(p)
        self.q = Fraction(q) if d else Fraction(0)
        self.d = d if self.q else 0

    def _coerce(self, other):
        if isinstance(other, QuadNumber):
            if self.d and other.d and self.d != other.d:
                raise ValueError("mixed radicands")
            return other
        return QuadNumber(other)

    def _d(self, other):
        return self.d or other.d

    def __add__(self, other):
        o = self._coerce(other)
        return QuadNumber(self.p + o.p, self.q + o.q, self._d(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.p, -self.q, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._d(o)
        return QuadNumber(self.p * o.p + self.q * o.q * d,
                          self.p * o.q + self.q * o.p, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        d = self._d(o)
        den = o.p * o.p - o.q * o.q * d
        if den == 0:
            raise ZeroDivisionError
        conj = QuadNumber(o.p, -o.q, d)
        num = self * conj
        return QuadNumber(num.p / den, num.q / den, d)

    def sign(self) -> int:
        a, b = self.p, self.q
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * self.d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other):
        return (self - other).sign() == 0

    def __hash__(self):
        return hash((self.p, self.q, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def floor(self) -> int:
        # exact: (a + b√d)/m with integer a, b and m > 0
        m = self.p.denominator * self.q.denominator // math.gcd(
            self.p.denominator, self.q.denominator)
        a = int(self.p * m)
        b = int(self.q * m)
        r = math.isqrt(b * b * self.d)
        if b >= 0:
            fb = r
        else:
            fb = -r if r * r == b * b * self.d else -r - 1
        return (a + fb) // m

    def ceil(self) -> int:
        f = self.floor()
        return f if self == f else f + 1

    def bits(self) -> int:
        return max(x.denominator.bit_length() + abs(x.numerator).bit_length()
                   for x in (self.p, self.q))

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def __repr__(self):
        if not self.q:
            return str(self.p)
        return f"{self.p} + {self.q}*sqrt({self.d})"


_SYMBOLIC = re.compile(
    r"^\(?\s*(?P<a>-?\d+)?\s*(?P<sign>[+-])?\s*(?:(?P<m>\d+)\s*\*?\s*)?sqrt\s*\(?\s*(?P<b>\d+)\s*\)?\s*\)?\s*(?:/\s*(?P<c>\d+))?$")


def parse_beta(value) -> QuadNumber:
    """Parse β from a number, a decimal string, or "(a+sqrt b)/c"."""
    if isinstance(value, QuadNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return QuadNumber(value)
    if isinstance(value, float):
        return QuadNumber(Fraction(repr(value)))
    text = str(value).strip().replace(" ", "")
    m = _SYMBOLIC.match(text)
    if m and "sqrt" in text:
        a = int(m.group("a") or 0)
        sign = -1 if m.group("sign") == "-" else 1
        mult = int(m.group("m") or 1)
        b = int(m.group("b"))
        c = int(m.group("c") or 1)
        root = math.isqrt(b)
        if root * root == b:
            return QuadNumber(Fraction(a + sign * mult * root, c))
        return QuadNumber(Fraction(a, c), Fraction(sign * mult, c), b)
    try:
        return QuadNumber(Fraction(text))
    except ValueError as exc:
        raise ConfigError(f"cannot parse beta {value!r}") from exc


@dataclass
class BetaExpansion:
    """Quasi-greedy expansion w* of 1 in base β.

    ``digits`` holds the generated prefix.  When the expansion is known to
    be eventually periodic, ``preperiod``/``period`` describe it and digits
    can be produced for any index.
    """

    beta: QuadNumber
    digits: list = field(default_factory=list)
    precision_bits: int = 4096
    preperiod: int | None = None
    period: int | None = None
    greedy_finite: tuple | None = None
    _orbit: list = field(default_factory=list, repr=False)
    _seen: dict = field(default_factory=dict, repr=False)

    def digit(self, j: int) -> int:
        """w*_{j+1} (0-based index j)."""
        if self.period is not None and j >= self.preperiod:
            j = self.preperiod + (j - self.preperiod) % self.period
            return self.digits[j]
        while j >= len(self.digits):
            self._extend()
            if self.period is not None:
                return self.digit(j)
        return self.digits[j]

    def prefix(self, n: int) -> Word:
        return tuple(self.digit(j) for j in range(n))

    def _extend(self):
        x = self._orbit[-1]
        if x in self._seen:
            start = self._seen[x]
            self.preperiod, self.period = start, len(self._orbit) - 1 - start
            return
        self._seen[x] = len(self._orbit) - 1
        y = self.beta * x
        d = y.floor()
        rem = y - d
        if rem.bits() > self.precision_bits:
            raise PrecisionExhausted(
                f"beta orbit exceeds {self.precision_bits} bits at digit {len(self.digits) + 1}")
        self.digits.append(d)
        self._orbit.append(rem)

    def partial_sum(self, n: int) -> float:
        b = float(self.beta)
        return sum(self.digit(j) * b ** -(j + 1) for j in range(n))

    def is_shift_maximal(self, horizon: int) -> bool:
        """σ^j(w*) ≼ w* on the first ``horizon`` digits, for 1 ≤ j < horizon."""
        ref = self.prefix(2 * horizon)
        for j in range(1, horizon):
            if ref[j:j + horizon] > ref[:horizon]:
                return False
        return True


def quasi_greedy_expansion(beta, horizon: int = 64,
                           precision_bits: int = 4096) -> BetaExpansion:
    """Quasi-greedy expansion of 1 in base β, computed in exact arithmetic.

    The greedy orbit T_β^j(1) lives in Q(√d) and is tracked exactly, so a
    finite greedy expansion d_1…d_m is recognised and replaced by
    (d_1…d_{m-1}(d_m − 1))^∞, and a repeating orbit gives an eventually
    periodic expansion.  β is accepted as anything :func:`parse_beta` reads.
    """
    beta = parse_beta(beta)
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    greedy: list[int] = []
    x = QuadNumber(1)
    seen: dict = {}
    orbit = [x]
    while len(greedy) < horizon:
        if x in seen:
            break
        seen[x] = len(orbit) - 1
        y = beta * x
        d = y.floor()
        x = y - d
        if x.bits() > precision_bits:
            raise PrecisionExhausted(f"beta orbit exceeds {precision_bits} bits")
        greedy.append(d)
        orbit.append(x)
        if x.sign() == 0:
            digits = greedy[:-1] + [greedy[-1] - 1]
            return BetaExpansion(beta, digits, precision_bits, 0, len(digits),
                                 greedy_finite=tuple(greedy))
    exp = BetaExpansion(beta, greedy[:], precision_bits)
    if orbit[-1] in seen:
        start = seen[orbit[-1]]
        exp.preperiod, exp.period = start, len(orbit) - 1 - start
    else:
        exp._orbit = orbit
        exp._seen = seen
    return exp


class BetaShift(ShiftSpace):
    """Σ_β: sequences x with σ^j(x) ≼ w* for all j ≥ 0."""

    kind = "beta"

    def __init__(self, beta, horizon: int = 64, precision_bits: int = 4096,
                 label: str | None = None):
        self.expansion = quasi_greedy_expansion(beta, horizon, precision_bits)
        self.beta = self.expansion.beta
        self.alphabet_size = self.beta.ceil()
        self.p = self.alphabet_size
        self.label = label if label is not None else str(beta)
        exp = self.expansion
        self._fold_at = (exp.preperiod + exp.period) if exp.period else None

    def _fold(self, i):
        exp = self.expansion
        if self._fold_at is not None and i >= self._fold_at:
            return exp.preperiod + (i - exp.preperiod) % exp.period
        return i

    # state: length of the longest suffix still equal to a prefix of w*
    def start(self):
        return 0

    def step(self, state, a):
        if not 0 <= a < self.p:
            return None
        target = self.expansion.digit(state)
        if a < target:
            return 0
        if a == target:
            return self._fold(state + 1)
        return None

    def is_admissible(self, word):
        check_word(word, self.p)
        word = tuple(word)
        ref = self.expansion.prefix(len(word))
        return all(word[j:] <= ref[:len(word) - j] for j in range(len(word)))

    @property
    def is_integer(self) -> bool:
        return self.beta.q == 0 and self.beta.p.denominator == 1

    def describe(self):
        return {"kind": "beta", "beta": self.label}


# ---------------------------------------------------------------------------

GOLDEN = "(1+sqrt5)/2"


def golden_mean_shift() -> BetaShift:
    return BetaShift(GOLDEN)


def shift_from_config(spec: dict) -> ShiftSpace:
    """Build a space from its JSON declaration."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("space declaration needs a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "full":
            return FullShift(int(spec.get("p", 2)))
        if kind == "beta":
            return BetaShift(spec["beta"], int(spec.get("horizon", 64)),
                             int(spec.get("precision_bits", 4096)),
                             label=str(spec["beta"]))
        if kind == "sgap":
            tail = spec.get("tail")
            if tail is None:
                t = None
            elif "min" in tail:
                t = ("min", int(tail["min"]))
            else:
                t = ("ap", int(tail["start"]), int(tail["step"]))
            return SGapShift(spec.get("gaps", []), t)
        if kind == "forbidden":
            from .words import parse_word
            words = [parse_word(w) for w in spec["words"]]
            return ForbiddenWordsShift(words, spec.get("p"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad space declaration {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown space kind {kind!r}")
