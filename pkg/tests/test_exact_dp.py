import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edx.core import Counters, normalize_pair
from edx.exact_dp import (OVER_BOUND, banded_edit_distance, batch_small_ed, bounded_edit_distance,
                          edit_distance_full, small_ed)

tokens = st.lists(st.integers(0, 3), max_size=24)


def recursive_ed(a, b):
    """Textbook recursion with memoization; independent of the row-vectorized DP."""
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def f(i, j):
        if i == 0 or j == 0:
            return i + j
        return min(f(i - 1, j) + 1, f(i, j - 1) + 1, f(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return f(len(a), len(b))


class TestFull:
    def test_examples(self):
        assert edit_distance_full("kitten", "sitting") == 3
        assert edit_distance_full("abc", "abc") == 0
        assert edit_distance_full("", "abcd") == 4
        assert edit_distance_full([1, 2], []) == 2

    @given(tokens, tokens)
    def test_matches_recursion(self, a, b):
        assert edit_distance_full(a, b) == recursive_ed(a, b)

    @given(tokens, tokens, tokens)
    def test_triangle(self, a, b, c):
        assert edit_distance_full(a, c) <= edit_distance_full(a, b) + edit_distance_full(b, c)

    @given(tokens, tokens)
    def test_symmetric(self, a, b):
        assert edit_distance_full(a, b) == edit_distance_full(b, a)

    @settings(max_examples=200)
    @given(st.data())
    def test_symmetric_difference(self, data):
        x = data.draw(st.lists(st.integers(0, 2), min_size=1, max_size=20))
        y = data.draw(st.lists(st.integers(0, 2), min_size=2, max_size=20))
        i_lo = data.draw(st.integers(0, len(x)))
        i_hi = data.draw(st.integers(i_lo, len(x)))
        bounds = sorted(data.draw(st.lists(st.integers(0, len(y)), min_size=4, max_size=4)))
        j1, j2 = (bounds[0], bounds[2]), (bounds[1], bounds[3])
        d1 = edit_distance_full(x[i_lo:i_hi], y[j1[0]:j1[1]])
        d2 = edit_distance_full(x[i_lo:i_hi], y[j2[0]:j2[1]])
        sym = len(set(range(*j1)) ^ set(range(*j2)))
        assert abs(d1 - d2) <= sym


class TestSmallEd:
    def test_examples(self):
        assert small_ed("abc", "abc", 0) == 0
        assert small_ed("abcd", "abed", Fraction(1, 4)) == 1
        assert small_ed("abcd", "wxyz", Fraction(1, 4)) is OVER_BOUND

    def test_unequal_lengths(self):
        with pytest.raises(ValueError):
            small_ed("ab", "abc", 1)

    def test_counts_cells(self):
        c = Counters()
        small_ed("abcdefgh", "abcdefgh", Fraction(1, 4), c)
        assert 0 < c.dp_cells <= (2 * 2 + 1) * (8 + 1)

    @pytest.mark.parametrize("w", range(1, 9))
    def test_exhaustive_binary(self, w):
        strings = list(itertools.product((0, 1), repeat=w))
        for a in strings:
            for b in strings:
                d = edit_distance_full(a, b)
                for k in range(w + 1):
                    got = small_ed(a, b, Fraction(k, w))
                    assert got == (d if d <= k else OVER_BOUND), (a, b, k)

    @given(st.lists(st.integers(0, 3), min_size=4, max_size=64), st.integers(0, 70),
           st.integers(1, 8))
    def test_batch_matches_full(self, data, budget, w):
        arr = np.asarray(data, dtype=np.int32)
        if w > arr.size:
            return
        offs = np.arange(0, arr.size - w + 1, dtype=np.int64)
        got = batch_small_ed(arr, 0, arr[::-1].copy(), offs, w, budget)
        rev = arr[::-1]
        for o, g in zip(offs, got):
            d = edit_distance_full(arr[:w], rev[o:o + w])
            assert g == (d if d <= budget else budget + 1)


class TestBounded:
    def test_examples(self):
        x, y, _ = normalize_pair("abc", "abd")
        assert bounded_edit_distance(x, x, 0) == 0
        assert bounded_edit_distance(x, y, 1) == 1
        assert bounded_edit_distance("aaaa", "bbbb", 2) is None

    def test_negative(self):
        with pytest.raises(ValueError):
            bounded_edit_distance("a", "a", -1)
        with pytest.raises(ValueError):
            banded_edit_distance("a", "a", -1)

    @given(tokens, tokens)
    def test_full_cap_is_exact(self, a, b):
        assert bounded_edit_distance(a, b, max(len(a), len(b))) == edit_distance_full(a, b)

    @given(tokens, tokens, st.integers(0, 30))
    def test_banded_contract(self, a, b, k):
        d = edit_distance_full(a, b)
        got = banded_edit_distance(a, b, k)
        assert got == (d if d <= k else None)
        got = bounded_edit_distance(a, b, k)
        assert got == (d if d <= k else None)

    def test_long_random(self):
        rng = np.random.default_rng(5)
        x = rng.integers(0, 4, 3000)
        y = x.copy()
        y[rng.choice(3000, 40, replace=False)] += 1
        y = np.delete(y, [10, 200])
        c = Counters()
        d = bounded_edit_distance(x, y, 500, c)
        assert d == edit_distance_full(x, y)
        assert c.dp_cells < 3000 * 3000 // 4
