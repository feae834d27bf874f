import math

import numpy as np
import pytest

import oracles
from hammctr import core, matmul
from hammctr.errors import BudgetError


def make(rows, sigma=2):
    return core.StringSet.from_rows(rows, sigma)


def random_inst(rng, n, d, sigma):
    rows = rng.integers(0, sigma, size=(n, d))
    return core.StringSet(n=n, d=d, sigma=sigma, data=rows)


class TestIndicator:
    def test_single_string(self):
        ind = matmul.build_indicator(make([[0, 1]]))
        assert ind.cols.tolist() == [[0, 3]]  # (pos 0, '0') and (pos 1, '1')

    def test_row_nonzero_count(self):
        rng = np.random.default_rng(1)
        inst = random_inst(rng, 20, 7, 5)
        ind = matmul.build_indicator(inst)
        assert ind.cols.shape == (20, 7)
        assert all(np.all(np.diff(row) > 0) for row in ind.cols)

    def test_column_counts(self):
        rng = np.random.default_rng(2)
        inst = random_inst(rng, 30, 4, 3)
        counts = matmul.build_indicator(inst).column_counts()
        for k in range(4):
            for a in range(3):
                want = int((inst.data[:, k] == a).sum())
                assert counts[k * 3 + a] == want
        assert int(counts.sum()) == 30 * 4


class TestGram:
    def test_no_heavy_columns(self):
        rng = np.random.default_rng(3)
        inst = random_inst(rng, 8, 5, 4)
        ind = matmul.build_indicator(inst)
        split = matmul.split_columns(ind, tau=10**6)
        gram, h = matmul.gram_heavy(ind, split)
        assert h == 0 and not gram.any()

    def test_all_identical_strings(self):
        inst = make([[1, 0, 1]] * 5)
        ind = matmul.build_indicator(inst)
        split = matmul.split_columns(ind, tau=2)
        gram, h = matmul.gram_heavy(ind, split)
        assert np.all(gram == 3)
        light, inc = matmul.gram_light(ind, split)
        assert not light.any() and inc == 0

    def test_split_bounds(self):
        rng = np.random.default_rng(4)
        inst = random_inst(rng, 64, 16, 4)
        ind = matmul.build_indicator(inst)
        for tau in (2, 8, 64):
            split = matmul.split_columns(ind, tau)
            assert len(split.heavy) <= 64 * 16 / tau
            assert not set(split.heavy.tolist()) & set(split.light.tolist())

    def test_gram_sum_is_match_counts(self):
        rng = np.random.default_rng(5)
        inst = random_inst(rng, 24, 9, 3)
        ind = matmul.build_indicator(inst)
        split = matmul.split_columns(ind, tau=6)
        heavy, _ = matmul.gram_heavy(ind, split)
        light, _ = matmul.gram_light(ind, split)
        gram = heavy + light
        rows = inst.data.tolist()
        for i in range(24):
            for j in range(24):
                assert gram[i, j] == 9 - oracles.hd(rows[i], rows[j])
        assert np.array_equal(gram, gram.T)
        assert np.all(np.diag(gram) == 9)


class TestDistanceMatrix:
    def test_example(self):
        dm, _ = matmul.distance_matrix(make([[0, 0], [0, 1], [1, 1]]), use_popcount=False)
        assert dm.entries.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]

    def test_diagonal_zero(self):
        rng = np.random.default_rng(6)
        inst = random_inst(rng, 30, 12, 4)
        dm, _ = matmul.distance_matrix(inst)
        assert not np.diag(dm.entries).any()

    def test_matches_naive_all_pairs(self):
        rng = np.random.default_rng(7)
        for _ in range(8):
            n = int(rng.integers(2, 40))
            d = int(rng.integers(1, 50))
            sigma = int(rng.integers(2, 9))
            inst = random_inst(rng, n, d, sigma)
            want = np.array(oracles.all_pairs(inst.data.tolist()))
            dm, counters = matmul.distance_matrix(inst, use_popcount=False)
            assert np.array_equal(dm.entries, want)
            assert counters["heavy_columns"] <= counters["heavy_bound"]
            assert counters["light_increments"] <= counters["light_bound"]

    def test_popcount_path_matches(self):
        rng = np.random.default_rng(8)
        inst = random_inst(rng, 25, 70, 2)
        a, ca = matmul.distance_matrix(inst, use_popcount=True)
        b, cb = matmul.distance_matrix(inst, use_popcount=False)
        assert ca["path"] == "popcount" and cb["path"] == "heavy-light"
        assert np.array_equal(a.entries, b.entries)

    def test_tau_invariance(self):
        rng = np.random.default_rng(9)
        inst = random_inst(rng, 20, 15, 3)
        base, _ = matmul.distance_matrix(inst, tau=1, use_popcount=False)
        for tau in (2, 5, 20, 1000):
            dm, _ = matmul.distance_matrix(inst, tau=tau, use_popcount=False)
            assert np.array_equal(dm.entries, base.entries)

    def test_budget_error(self):
        rng = np.random.default_rng(10)
        inst = random_inst(rng, 40, 6, 3)
        with pytest.raises(BudgetError):
            matmul.distance_matrix(inst, budget_bytes=100)

    def test_heavy_densify_budget_names_tau(self):
        rng = np.random.default_rng(11)
        inst = random_inst(rng, 50, 30, 2)
        ind = matmul.build_indicator(inst)
        split = matmul.split_columns(ind, tau=1)
        with pytest.raises(BudgetError, match="tau"):
            matmul.gram_heavy(ind, split, budget_bytes=1)

    def test_auto_tau_formula(self):
        n, d = 100, 50
        delta = math.log(d) / math.log(n)
        want = math.ceil(n ** (1 - 0.3 * min(1.0, delta)))
        assert matmul.auto_tau(n, d) == want
        assert matmul.auto_tau(1, 10) == 1


class TestSolvers:
    def test_examples(self):
        inst = make([[0, 0], [0, 1], [1, 1]])
        res = matmul.matmul_closest(inst)
        assert (res.center_index, res.objective) == (1, 1)
        res = matmul.matmul_remotest(inst)
        assert (res.center_index, res.objective) == (0, 1)

    def test_duplicates_remotest_zero(self):
        inst = make([[0, 1], [0, 1]])
        assert matmul.matmul_remotest(inst).objective == 0

    def test_needs_two_for_remotest(self):
        with pytest.raises(ValueError):
            matmul.matmul_remotest(make([[0, 1]]))

    def test_matches_naive_random(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            n = int(rng.integers(2, 48))
            d = int(rng.integers(1, 80))
            sigma = int(rng.integers(2, 10))
            inst = random_inst(rng, n, d, sigma)
            nv = core.naive_closest(inst)
            mm = matmul.matmul_closest(inst)
            assert (mm.center_index, mm.objective) == (nv.center_index, nv.objective)
            nv = core.naive_remotest(inst)
            mm = matmul.matmul_remotest(inst)
            assert (mm.center_index, mm.objective) == (nv.center_index, nv.objective)

    def test_tau_invariant_solutions(self):
        rng = np.random.default_rng(13)
        inst = random_inst(rng, 32, 24, 4)
        picks = set()
        for tau in (1, 4, 16, 32, 10**6):
            res = matmul.matmul_closest(inst, tau=tau, use_popcount=False)
            picks.add((res.center_index, res.objective))
        assert len(picks) == 1


def test_dump_little_endian():
    dm, _ = matmul.distance_matrix(make([[0, 1], [1, 1]]))
    raw = matmul.dump_distance_matrix(dm)
    assert raw == np.array([[0, 1], [1, 0]], dtype="<i4").tobytes()
    assert len(raw) == 16


def test_scalar_reference_matches():
    rng = np.random.default_rng(14)
    inst = random_inst(rng, 17, 33, 5)
    want = np.array(oracles.all_pairs(inst.data.tolist()))
    assert np.array_equal(matmul.scalar_distance_matrix(inst), want)
