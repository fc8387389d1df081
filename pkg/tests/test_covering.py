import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edx.core import (BoxSpec, Counters, Interval, OutOfRange, ParamInfeasible, TokenString,
                      aligned_starts)
from edx.covering import (BoxSet, SparseSet, Window, audit_boxes, covering_algorithm,
                          diagonal_extension, dsr, iteration_levels, select_params, sses,
                          windows)
from edx.exact_dp import OVER_BOUND, edit_distance_full, small_ed
from edx.harness import gen_planted

Q = Fraction(1, 4)


def ts(arr, sentinel=256):
    return TokenString(np.asarray(arr, dtype=np.int32), sentinel)


def box(ilo, ihi, jlo, jhi):
    return BoxSpec(Interval(ilo, ihi, "x"), Interval(jlo, jhi, "y"))


class TestSelectParams:
    def test_examples(self):
        p = select_params(2 ** 20, Q)
        assert (p.w1, p.w2, p.d) == (8, 256, 16)
        p = select_params(2 ** 14, 1)
        assert (p.w1, p.w2, p.d) == (4, 64, 16)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            select_params(2 ** 20, Fraction(1, 32))

    def test_not_power_of_two(self):
        with pytest.raises(OutOfRange):
            select_params(2 ** 12, Fraction(1, 3))

    def test_infeasible_tiny_n(self):
        with pytest.raises(ParamInfeasible):
            select_params(2, 1)

    @given(st.integers(10, 40), st.integers(0, 8))
    def test_bounds_hold_and_are_tight(self, L, t):
        if 5 * t > L:
            return
        n, theta = 2 ** L, Fraction(1, 2 ** t)
        try:
            p = select_params(n, theta)
        except ParamInfeasible:
            return
        # largest power of two under each bound, compared as seventh powers
        assert p.w1 ** 7 <= 2 ** (2 * t) * n and (2 * p.w1) ** 7 > 2 ** (2 * t) * n
        assert p.w2 ** 7 * 2 ** t <= n ** 3 and (2 * p.w2) ** 7 * 2 ** t > n ** 3
        assert p.d ** 7 * 2 ** (3 * t) <= n ** 2 and (2 * p.d) ** 7 * 2 ** (3 * t) > n ** 2
        assert p.violations() == []


class TestWindows:
    def test_count_and_clamp(self):
        ws = windows(2 ** 12, Q)
        assert len(ws) == 17
        m = 2 ** 12 // 16
        assert ws[0].I == Interval(0, 8 * m)
        assert ws[-1].I == Interval(16 * m, 2 ** 12)
        assert all(w.I.hi <= 2 ** 12 and (w.I.lo, w.I.hi) == (w.J.lo, w.J.hi)
                   for w in ws)

    def test_theta_one(self):
        ws = windows(2 ** 10, 1)
        assert len(ws) == 5
        assert iteration_levels(1) == [0]
        assert iteration_levels(Fraction(1, 8)) == [3, 2, 1, 0]

    def test_cover_band(self):
        n, theta = 2 ** 10, Q
        ws = windows(n, theta)
        band = int(theta * n)
        for i in range(0, n + 1, 7):
            for j in range(max(0, i - band), min(n, i + band) + 1, 5):
                assert any(w.I.lo <= i <= w.I.hi and w.J.lo <= j <= w.J.hi for w in ws)


class TestDiagonalExtension:
    def test_examples(self):
        outer = Interval(0, 8), Interval(0, 16, "y")
        assert diagonal_extension(box(4, 6, 5, 7), *outer) == box(0, 8, 1, 9)
        assert diagonal_extension(box(0, 2, 0, 2), Interval(0, 8), Interval(0, 8, "y")) == \
            box(0, 8, 0, 8)
        assert diagonal_extension(box(4, 6, 1, 3), *outer) == box(0, 8, 0, 8)

    def test_clamp_high(self):
        assert diagonal_extension(box(0, 2, 14, 16), Interval(0, 8), Interval(0, 16, "y")) == \
            box(0, 8, 8, 16)

    def test_rejections(self):
        with pytest.raises(ValueError):
            diagonal_extension(box(0, 2, 0, 3), Interval(0, 8), Interval(0, 16, "y"))
        with pytest.raises(ValueError):
            diagonal_extension(box(0, 2, 0, 2), Interval(0, 8), Interval(0, 4, "y"))
        with pytest.raises(ValueError):
            diagonal_extension(box(8, 10, 0, 2), Interval(0, 8), Interval(0, 16, "y"))

    @given(st.integers(1, 8), st.integers(0, 40), st.integers(0, 40), st.integers(0, 40))
    def test_diagonal_or_touching(self, w, a, b, c):
        outer_i = Interval(a, a + 2 * w + b % 9)
        outer_j = Interval(0, outer_i.width + c)
        i_lo = a + (b % (outer_i.width - w + 1))
        j_lo = c % (outer_j.width - w + 1)
        out = diagonal_extension(box(i_lo, i_lo + w, j_lo, j_lo + w), outer_i, outer_j)
        assert out.I == outer_i and out.J.width == outer_i.width
        assert outer_j.contains(out.J)
        on_diag = out.J.lo - out.I.lo == j_lo - i_lo
        assert on_diag or out.J.lo == outer_j.lo or out.J.hi == outer_j.hi


class TestDsr:
    def run(self, x, y, win, w=4, d=4, eps=Q, seed=0, c0=12):
        c = Counters()
        S, blocks = dsr(ts(x), ts(y), win, w, d, eps / 8, eps, np.random.default_rng(seed), c,
                        c0=c0)
        return S, blocks, c

    def test_constant_window_all_dense(self):
        n = 64
        win = Window(0, Interval(0, 32), Interval(0, 32, "y"))
        S, blocks, c = self.run(np.zeros(n), np.zeros(n), win)
        assert len(S) == 0 and len(blocks) == 1
        b = blocks[0]
        assert b.pivot_lo == 0 and b.kappa_num == 5 and b.kappa_den == 4
        assert list(b.x_los) == list(range(0, 29, 4))
        assert list(b.y_los) == list(range(29))
        assert c.pivots_processed == 1

    def test_disjoint_alphabets_all_sparse(self):
        n = 64
        win = Window(0, Interval(0, 32), Interval(0, 32, "y"))
        S, blocks, c = self.run(np.zeros(n), np.ones(n), win)
        assert S.members == list(range(0, 29, 4)) and blocks == []
        assert c.pivots_processed == 0

    def test_no_candidates(self):
        win = Window(0, Interval(0, 8), Interval(0, 3, "y"))
        S, blocks, _ = self.run(np.zeros(16), np.zeros(16), win)
        assert S.members == [0, 4] and blocks == []

    def test_pivot_separation_and_triangle(self):
        inst = gen_planted(2 ** 10, 2 ** 6, 4, 3)
        win = windows(2 ** 10, Q)[3]
        S, blocks, _ = self.run(inst.x.tokens, inst.y.tokens, win, eps=Q)
        assert len(blocks) >= 2
        x, y = inst.x.tokens, inst.y.tokens
        pivots = [b.pivot_lo for b in blocks]
        for a in pivots:
            for b in pivots:
                if a < b:
                    assert small_ed(x[a:a + 4], x[b:b + 4], 2 * Q) is OVER_BOUND
        for b in blocks:
            p = b.pivot_lo
            for j in b.y_los:
                assert small_ed(x[p:p + 4], y[j:j + 4], 3 * Q) is not OVER_BOUND
            for i in b.x_los:
                assert small_ed(x[p:p + 4], x[i:i + 4], 2 * Q) is not OVER_BOUND
        covered = set(S.members)
        for b in blocks:
            assert covered.isdisjoint(b.x_los.tolist())
            covered.update(b.x_los.tolist())
        assert covered == set(range(win.I.lo, win.I.hi, 4))


class TestSses:
    def test_identity_member_gives_exact_bounds(self):
        n = 2 ** 10
        rng = np.random.default_rng(0)
        x = rng.integers(0, 200, n)
        win = windows(n, Q)[2]
        lo = win.I.lo + 20
        S = SparseSet(4, [lo])
        c = Counters()
        rows = sses(ts(x), ts(x), win, S, 4, 16, 4, Q / 8, Q, Q, rng, c)
        assert rows.size == 11
        assert set(rows["I_lo"]) == {win.I.lo + 16} and set(rows["J_lo"]) == {win.I.lo + 16}
        kappas = [Fraction(int(a), int(b)) for a, b in zip(rows["kappa_num"], rows["kappa_den"])]
        assert kappas == [Q + Fraction(1, 2 ** k) for k in range(11)]
        assert all(a > b for a, b in zip(kappas, kappas[1:]))

    def test_empty_sparse_set(self):
        n = 2 ** 10
        x = np.zeros(n, dtype=np.int32)
        win = windows(n, Q)[2]
        rows = sses(ts(x), ts(x), win, SparseSet(4, []), 4, 16, 4, Q / 8, Q, Q,
                    np.random.default_rng(0), Counters())
        assert rows.size == 0

    def test_far_extension_not_emitted(self):
        n = 2 ** 10
        rng = np.random.default_rng(1)
        x = rng.integers(0, 200, n)
        y = rng.integers(0, 200, n)
        win = windows(n, Q)[2]
        lo = win.I.lo + 20
        y[lo:lo + 4] = x[lo:lo + 4]
        # the member matches exactly but its 16-wide extension differs in 12 places > 6
        eps = Fraction(1, 8)
        rows = sses(ts(x), ts(y), win, SparseSet(4, [lo]), 4, 16, 4, eps / 8, eps, Q, rng,
                    Counters())
        assert rows.size == 0


@pytest.fixture(scope="module")
def planted_run():
    inst = gen_planted(2 ** 10, 2 ** 7, 26, 11)
    p = select_params(2 ** 10, Q, seed=5)
    c = Counters()
    return inst, p, covering_algorithm(inst.x, inst.y, p, c), c


class TestCoveringAlgorithm:
    def test_extension_boxes_all_certified(self, planted_run):
        inst, _, R, _ = planted_run
        assert R.n_extension > 0
        e = R.extensions
        # audit each distinct box at its smallest bound
        order = np.lexsort((e["kappa_num"], e["J_lo"], e["I_lo"]))
        seen, sample = set(), []
        for rec in e[order]:
            key = (int(rec["I_lo"]), int(rec["J_lo"]))
            if key not in seen:
                seen.add(key)
                sample.append(rec)
        boxes = BoxSet(extensions=np.array(sample, dtype=e.dtype))
        assert audit_boxes(inst.x, inst.y, boxes) == []

    def test_sampled_boxes_certified(self, planted_run):
        inst, _, R, _ = planted_run
        sample = R.sample(300, np.random.default_rng(0))
        assert len(sample) == 300
        assert audit_boxes(inst.x, inst.y, sample) == []

    def test_dense_blocks_trace_to_pivot(self, planted_run):
        inst, p, R, _ = planted_run
        x, y = inst.x.tokens, inst.y.tokens
        for b in R.blocks[:10]:
            eps = Fraction(1, 2 ** b.level)
            pv = x[b.pivot_lo:b.pivot_lo + b.w]
            for j in b.y_los[:20]:
                assert edit_distance_full(pv, y[j:j + b.w]) <= 3 * eps * b.w
            for i in b.x_los:
                assert edit_distance_full(pv, x[i:i + b.w]) <= 2 * eps * b.w

    def test_replication_and_dedup(self, planted_run):
        _, p, R, _ = planted_run
        e = R.extensions
        key = np.stack([e[f] for f in ("I_lo", "J_lo", "kappa_num")], axis=1)
        assert np.unique(key, axis=0).shape[0] == e.size
        sizes = {}
        for rec in e:
            sizes.setdefault((int(rec["I_lo"]), int(rec["J_lo"]), int(rec["window"]),
                              int(rec["level"])), []).append(rec)
        assert all(len(v) % (p.log_n + 1) == 0 or len(v) <= p.log_n + 1 for v in sizes.values())

    def test_size_bound(self, planted_run):
        _, p, R, _ = planted_run
        # measured ratio |R| / ((n/w1)^2 log^2 n) stays below 0.31 from n=2^10 to 2^13
        assert len(R) <= 1.0 * (p.n / p.w1) ** 2 * p.log_n ** 2

    def test_deterministic(self, planted_run):
        inst, p, R, c = planted_run
        c2 = Counters()
        R2 = covering_algorithm(inst.x, inst.y, p, c2)
        assert c2 == c
        assert np.array_equal(R.extensions, R2.extensions)
        assert [b.pivot_lo for b in R.blocks] == [b.pivot_lo for b in R2.blocks]

    def test_theta_one_dense_bounds(self):
        inst = gen_planted(2 ** 10, 8, 4, 0)
        R = covering_algorithm(inst.x, inst.y, select_params(2 ** 10, 1))
        assert R.blocks and all(Fraction(b.kappa_num, b.kappa_den) == 5 for b in R.blocks)
        assert {b.window for b in R.blocks} <= set(range(5))

    def test_length_mismatch(self):
        p = select_params(2 ** 10, Q)
        with pytest.raises(ValueError):
            covering_algorithm(ts(np.zeros(512)), ts(np.zeros(512)), p)

    def test_dump_format(self):
        blocks_set = BoxSet(extensions=np.zeros(1, dtype=BoxSet().extensions.dtype))
        fh = io.StringIO()
        assert blocks_set.dump(fh) == 1
        assert fh.getvalue() == "0 0 0 0 0 0 E 0 0\n"

    def test_record_and_iter_agree(self, planted_run):
        _, _, R, _ = planted_run
        it = R.iter_records()
        for i in range(50):
            assert R.record(i) == next(it)
        assert R.record(len(R) - 1)[6] == "E"
        with pytest.raises(IndexError):
            R.record(len(R))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from([2, 4, 26]))
def test_random_small_runs_certified(seed, sigma):
    rng = np.random.default_rng(seed)
    inst = gen_planted(2 ** 10, int(rng.integers(0, 300)), sigma, seed)
    R = covering_algorithm(inst.x, inst.y, select_params(2 ** 10, Q, seed=seed))
    assert audit_boxes(inst.x, inst.y, R.sample(40, rng)) == []
    e = R.extensions
    if e.size:
        pick = rng.integers(0, e.size, size=min(40, e.size))
        assert audit_boxes(inst.x, inst.y, BoxSet(extensions=e[pick])) == []


def test_aligned_starts_match_window_lo():
    # window endpoints are multiples of m, so starts are aligned both absolutely and relatively
    for win in windows(2 ** 10, Q):
        s = aligned_starts(win.J.lo, win.J.hi, 4, Q / 8)
        assert s.size == 0 or s[0] == win.J.lo
