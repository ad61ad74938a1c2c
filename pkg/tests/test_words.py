import math

import pytest
from hypothesis import given, settings, strategies as st

from shiftrec.shifts import FullShift, golden_mean_shift
from shiftrec.words import (common_prefix_length, edit_ball_census, edit_ball_count,
                            edit_ball_count_bruteforce, edit_ball_log_bound,
                            edit_distance, fit_edit_ball_constant, format_word,
                            parse_word, shift_metric, EditBallCensus)

from oracles import all_words, script_distances

words2 = st.lists(st.integers(0, 1), max_size=9).map(tuple)


@pytest.mark.parametrize("u,v,expected", [
    ("101", "101", 3),
    ("101", "110", 1),
    ("0110", "0111", 3),
    ("", "01", 0),
])
def test_common_prefix_length(u, v, expected):
    assert common_prefix_length(parse_word(u), parse_word(v)) == expected


def test_common_prefix_on_streams():
    def ones():
        while True:
            yield 1
    assert common_prefix_length(ones(), (1, 1, 0)) == 2


def test_shift_metric():
    assert shift_metric((0, 1), (0, 1), equal=True) == 0
    assert shift_metric((0,), (1,)) == 1.0
    assert shift_metric((0, 0, 0, 0, 1), (0, 0, 0, 0, 0)) == pytest.approx(0.0183156388887342)


@given(words2, words2, st.integers(0, 9))
def test_shift_metric_cylinder_characterisation(u, v, n):
    m = min(len(u), len(v))
    if n > m:
        return
    agree = u[:n] == v[:n]
    assert (shift_metric(u, v) <= math.exp(-n)) == agree


@pytest.mark.parametrize("v,w,d", [("11", "11", 0), ("0110", "010", 1), ("", "101", 3)])
def test_edit_distance_examples(v, w, d):
    assert edit_distance(parse_word(v), parse_word(w)) == d


def test_edit_distance_matches_script_search_small():
    # full exhaustive check lives in the acceptance suite
    words = [w for n in range(5) for w in all_words(2, n)]
    for v in words:
        dist = script_distances(v, max_len=7)
        for w in words:
            assert edit_distance(v, w) == dist[w]


@given(words2, words2, words2)
def test_edit_distance_is_a_metric(u, v, w):
    assert edit_distance(u, v) == edit_distance(v, u)
    assert (edit_distance(u, v) == 0) == (u == v)
    assert edit_distance(u, w) <= edit_distance(u, v) + edit_distance(v, w)


@given(words2, words2)
def test_edit_distance_length_bounds(u, v):
    d = edit_distance(u, v)
    assert abs(len(u) - len(v)) <= d <= max(len(u), len(v))


def test_parse_and_format_roundtrip():
    assert parse_word("0110") == (0, 1, 1, 0)
    assert parse_word([3, 12]) == (3, 12)
    assert parse_word("[3, 12]") == (3, 12)
    assert format_word((0, 1)) == "01"
    assert format_word((3, 12)) == "[3, 12]"
    with pytest.raises(ValueError):
        parse_word("01a")


def test_edit_ball_examples():
    full = FullShift(2)
    assert edit_ball_count(full, (0, 0), 0).count == 1
    assert edit_ball_count(full, (0, 0), 0.5).count == 8


def test_edit_ball_golden_matches_bruteforce():
    g = golden_mean_shift()
    # radius 1 around 00: {0, 00, 000, 001, 010, 01, 10, 100}, all avoid 11
    brute = edit_ball_count_bruteforce(g, (0, 0), 0.5)
    assert edit_ball_count(g, (0, 0), 0.5).count == brute == 8


@pytest.mark.parametrize("space_name", ["full", "golden"])
def test_edit_ball_automaton_vs_bruteforce(space_name):
    space = FullShift(2) if space_name == "full" else golden_mean_shift()
    for n in range(1, 7):
        for w in space.enumerate_words(n):
            for d in (0.1, 0.25, 0.5):
                assert edit_ball_count(space, w, d).count == \
                    edit_ball_count_bruteforce(space, w, d)


def test_edit_ball_monotone_in_delta():
    full = FullShift(2)
    w = (0, 1, 1, 0, 1, 0)
    counts = [edit_ball_count(full, w, d).count for d in (0, 0.1, 0.2, 0.34, 0.5, 0.67)]
    assert counts == sorted(counts) and counts[0] == 1


def test_fit_constant_is_tight():
    rows = [EditBallCensus((0,) * 6, 0.5, 3, 200), EditBallCensus((0,) * 4, 0.25, 1, 9)]
    C = fit_edit_ball_constant(rows)
    for r in rows:
        n = len(r.center)
        assert math.log(r.count) <= edit_ball_log_bound(C, n, r.radius_fraction) + 1e-9
    assert any(math.log(r.count) > edit_ball_log_bound(C * 0.999, len(r.center),
                                                       r.radius_fraction) for r in rows)


def test_bound_at_delta_zero_uses_continuous_extension():
    assert edit_ball_log_bound(2.0, 3, 0.0) == pytest.approx(math.log(2) + 2 * math.log(3))


class _NoSymmetry(FullShift):
    def census_key(self, word):
        return tuple(word)


@pytest.mark.parametrize("p", [2, 3])
def test_census_symmetry_shortcut(p):
    fast, c_fast = edit_ball_census(FullShift(p), range(1, 6 if p == 2 else 5), [0.25, 0.5])
    slow, c_slow = edit_ball_census(_NoSymmetry(p), range(1, 6 if p == 2 else 5), [0.25, 0.5])
    assert [r.count for r in fast] == [r.count for r in slow]
    assert c_fast == c_slow
