"""Word families D ⊂ L used as G (specification) and F (free concatenation).

A family is the language of the space intersected with a condition on the
first and last symbol.  The condition is itself a tiny automaton, so counts,
partition sums and uniform sampling over D_n run as dynamic programmes over
(space state, family state) pairs instead of by enumeration.
"""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .errors import BudgetExceeded, ConfigError
from .words import Word


class WordFamily:
    """The language itself; subclasses add first/last symbol conditions."""

    name = "L"
    has_automaton = True

    def fstart(self):
        return None

    def fstep(self, fs, a: int):
        return fs

    def faccept(self, fs, n: int) -> bool:
        return True

    def contains(self, space, word: Sequence[int]) -> bool:
        return space.is_admissible(word) and self._condition(tuple(word))

    def _condition(self, word: Word) -> bool:
        return True

    def describe(self) -> dict:
        return {"name": self.name}

    def __repr__(self):
        return f"WordFamily({self.describe()})"

    # -- language services -------------------------------------------------
    def enumerate(self, space, n: int, budget: int | None = None,
                  prefix: Sequence[int] = ()) -> Iterator[Word]:
        for w in space.enumerate_words(n, budget=budget, prefix=prefix):
            if self._condition(w):
                yield w

    def _layers(self, space, n: int, start=None):
        st0 = (space.start(), self.fstart()) if start is None else start
        layer = {st0: 1}
        for _ in range(n):
            nxt: dict = {}
            for (st, fs), c in layer.items():
                for a, st2 in space.successors(st):
                    fs2 = self.fstep(fs, a)
                    if fs2 is False:
                        continue
                    key = (st2, fs2)
                    nxt[key] = nxt.get(key, 0) + c
            layer = nxt
        return layer

    def count(self, space, n: int) -> int:
        """♯D_n."""
        return sum(c for (st, fs), c in self._layers(space, n).items()
                   if self.faccept(fs, n))

    def count_with_prefix(self, space, prefix: Sequence[int], n: int) -> int:
        prefix = tuple(prefix)
        if len(prefix) > n:
            return 0
        st = space.run(prefix)
        if st is None:
            return 0
        fs = self.fstart()
        for a in prefix:
            fs = self.fstep(fs, a)
            if fs is False:
                return 0
        layer = self._layers(space, n - len(prefix), start=(st, fs))
        return sum(c for (s, f), c in layer.items() if self.faccept(f, n))

    def sample(self, space, n: int, rng: random.Random) -> Word:
        """A uniformly random element of D_n (by completion counts)."""
        completions = _completion_counter(space, self, n)
        st, fs = space.start(), self.fstart()
        if completions(st, fs, n) == 0:
            raise ValueError(f"family {self.name} is empty at length {n}")
        word = []
        for remaining in range(n, 0, -1):
            options = []
            for a, st2 in space.successors(st):
                fs2 = self.fstep(fs, a)
                if fs2 is False:
                    continue
                c = completions(st2, fs2, remaining - 1)
                if c:
                    options.append((a, st2, fs2, c))
            total = sum(o[3] for o in options)
            pick = rng.randrange(total)
            for a, st2, fs2, c in options:
                if pick < c:
                    break
                pick -= c
            word.append(a)
            st, fs = st2, fs2
        return tuple(word)


def _completion_counter(space, family, n):
    @lru_cache(maxsize=None)
    def completions(st, fs, remaining):
        if remaining == 0:
            return 1 if family.faccept(fs, n) else 0
        total = 0
        for a, st2 in space.successors(st):
            fs2 = family.fstep(fs, a)
            if fs2 is not False:
                total += completions(st2, fs2, remaining - 1)
        return total
    return completions


class Language(WordFamily):
    name = "L"


class StartsWith(WordFamily):
    def __init__(self, symbol: int):
        self.symbol = symbol
        self.name = f"starts-with-{symbol}"

    # family state: "first symbol seen" flag
    def fstart(self):
        return 0

    def fstep(self, fs, a):
        if fs == 0:
            return 1 if a == self.symbol else False
        return fs

    def faccept(self, fs, n):
        return fs == 1

    def _condition(self, word):
        return len(word) > 0 and word[0] == self.symbol


class EndsWith(WordFamily):
    def __init__(self, symbol: int):
        self.symbol = symbol
        self.name = f"ends-with-{symbol}"

    # family state: last symbol (-1 before any)
    def fstart(self):
        return -1

    def fstep(self, fs, a):
        return a

    def faccept(self, fs, n):
        return fs == self.symbol

    def _condition(self, word):
        return len(word) > 0 and word[-1] == self.symbol


class StartsAndEndsWith(WordFamily):
    def __init__(self, symbol: int):
        self.symbol = symbol
        self.name = f"starts-and-ends-with-{symbol}"

    # family state: (started correctly, last symbol)
    def fstart(self):
        return (False, -1)

    def fstep(self, fs, a):
        started, _ = fs
        if not started:
            return (True, a) if a == self.symbol else False
        return (True, a)

    def faccept(self, fs, n):
        return fs[0] and fs[1] == self.symbol

    def _condition(self, word):
        return len(word) > 0 and word[0] == self.symbol and word[-1] == self.symbol


class PredicateFamily(WordFamily):
    """Arbitrary Python predicate; only the enumeration route is available."""

    has_automaton = False

    def __init__(self, predicate: Callable[[Word], bool], name: str = "custom"):
        self.predicate = predicate
        self.name = name

    def _condition(self, word):
        return bool(self.predicate(word))

    def count(self, space, n):
        return sum(1 for _ in self.enumerate(space, n))

    def count_with_prefix(self, space, prefix, n):
        return sum(1 for _ in self.enumerate(space, n, prefix=prefix))

    def sample(self, space, n, rng):
        words = list(self.enumerate(space, n, budget=10**6))
        if not words:
            raise ValueError(f"family {self.name} is empty at length {n}")
        return rng.choice(words)


LANGUAGE = Language()

_NAMED = {
    "starts-with": StartsWith,
    "ends-with": EndsWith,
    "starts-and-ends-with": StartsAndEndsWith,
    "ends-and-starts-with": StartsAndEndsWith,
}


def family_from_name(name: str | dict | None) -> WordFamily:
    """"L", "ends-with-0", {"name": "starts-with", "symbol": 1}, ..."""
    if name is None or name == "L":
        return LANGUAGE
    if isinstance(name, WordFamily):
        return name
    if isinstance(name, dict):
        base = name.get("name")
        if base == "L":
            return LANGUAGE
        if base in _NAMED:
            return _NAMED[base](int(name.get("symbol", 0)))
        raise ConfigError(f"unknown family {name!r}")
    head, _, sym = name.rpartition("-")
    if head in _NAMED and sym.isdigit():
        return _NAMED[head](int(sym))
    raise ConfigError(f"unknown family {name!r}")


def words_up_to(space, family: WordFamily, horizon: int,
                budget: int | None = None) -> list[Word]:
    """Members of D of lengths 1..horizon, ordered by (length, lex)."""
    out: list[Word] = []
    for n in range(1, horizon + 1):
        out.extend(family.enumerate(space, n))
        if budget is not None and len(out) > budget:
            raise BudgetExceeded(f"more than {budget} family words up to length {horizon}")
    return out
