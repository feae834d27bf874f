import numpy as np
import pytest

import oracles
from hammctr import core
from hammctr.errors import BudgetError, FormatError


def make(rows, sigma=2):
    return core.StringSet.from_rows(rows, sigma)


class TestHamming:
    def test_identical(self):
        assert core.hamming("aab", "aab") == 0

    def test_all_differ(self):
        assert core.hamming("000", "111") == 3

    def test_mixed(self):
        assert core.hamming("0102", "0012") == 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            core.hamming("ab", "abc")

    def test_metric_properties(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            d = int(rng.integers(1, 12))
            sigma = int(rng.integers(2, 6))
            x, y, z = (oracles.random_rows(rng, 3, d, sigma))
            assert core.hamming(x, x) == 0
            assert core.hamming(x, y) == core.hamming(y, x)
            if core.hamming(x, y) == 0:
                assert x == y
            assert core.hamming(x, z) <= core.hamming(x, y) + core.hamming(y, z)


class TestStringSet:
    def test_symbol_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            make([[0, 5]], sigma=2)

    def test_dimension_checks(self):
        with pytest.raises(ValueError):
            core.StringSet(n=0, d=1, sigma=2, data=np.zeros((0, 1)))
        with pytest.raises(ValueError):
            core.StringSet(n=1, d=1, sigma=1, data=np.zeros((1, 1)))

    def test_immutable(self):
        inst = make([[0, 1]])
        with pytest.raises(ValueError):
            inst.data[0, 0] = 1

    def test_packed_bits_roundtrip(self):
        rng = np.random.default_rng(5)
        data = rng.integers(0, 2, size=(7, 70))
        inst = core.StringSet(n=7, d=70, sigma=2, data=data)
        packed = inst.packed_bits()
        for i in range(7):
            bits = np.unpackbits(packed[i].view(np.uint8), bitorder="little")[:70]
            assert np.array_equal(bits, data[i])


class TestInstanceIO:
    def test_format_example(self):
        inst = core.read_instance("2 3 2\n0 1 0\n1 1 1\n")
        assert (inst.n, inst.d, inst.sigma) == (2, 3, 2)
        assert inst.data.tolist() == [[0, 1, 0], [1, 1, 1]]

    def test_round_trip(self):
        text = "3 2 3\n0 1\n2 2\n1 0\n"
        assert core.write_instance(core.read_instance(text)) == text

    def test_symbol_out_of_range_with_line(self):
        with pytest.raises(FormatError, match="line 2"):
            core.read_instance("1 2 2\n0 5\n")

    def test_comments_before_header(self):
        inst = core.read_instance("# planted rho=2\n# another\n2 2 2\n0 1\n1 0\n")
        assert inst.n == 2

    def test_bad_header(self):
        with pytest.raises(FormatError, match="header"):
            core.read_instance("2 3\n")

    def test_wrong_row_length(self):
        with pytest.raises(FormatError, match="line 3"):
            core.read_instance("2 3 2\n0 1 0\n1 1\n")

    def test_missing_rows(self):
        with pytest.raises(FormatError):
            core.read_instance("2 3 2\n0 1 0\n")

    def test_whitespace_tolerant_rows(self):
        inst = core.read_instance("2 3 2\n 0  1 0 \n1 1 1\n")
        assert inst.data.tolist() == [[0, 1, 0], [1, 1, 1]]


class TestNaiveSolvers:
    def test_closest_example(self):
        res = core.naive_closest(make([[0, 0], [0, 1], [1, 1]]))
        assert (res.center_index, res.objective) == (1, 1)

    def test_closest_singleton(self):
        res = core.naive_closest(make([[0, 1, 0]]))
        assert (res.center_index, res.objective) == (0, 0)

    def test_closest_tie_lowest_index(self):
        res = core.naive_closest(make([[0, 0, 0], [1, 1, 1]]))
        assert (res.center_index, res.objective) == (0, 3)

    def test_remotest_example(self):
        res = core.naive_remotest(make([[0, 0], [0, 1], [1, 1]]))
        assert (res.center_index, res.objective) == (0, 1)

    def test_remotest_pair(self):
        res = core.naive_remotest(make([[0, 0, 0], [1, 1, 1]]))
        assert (res.center_index, res.objective) == (0, 3)

    def test_remotest_singleton_error(self):
        with pytest.raises(ValueError, match="fewer than two"):
            core.naive_remotest(make([[0, 1]]))

    def test_duplicates_are_multiset(self):
        res = core.naive_remotest(make([[0, 1], [0, 1], [1, 0]]))
        assert res.objective == 2 and res.center_index == 2

    def test_matches_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(40):
            n = int(rng.integers(2, 24))
            d = int(rng.integers(1, 10))
            sigma = int(rng.integers(2, 5))
            rows = oracles.random_rows(rng, n, d, sigma)
            inst = make(rows, sigma)
            want_idx, want_obj = oracles.closest(rows)
            got = core.naive_closest(inst)
            assert (got.center_index, got.objective) == (want_idx, want_obj)
            want_idx, want_obj = oracles.remotest(rows)
            got = core.naive_remotest(inst)
            assert (got.center_index, got.objective) == (want_idx, want_obj)

    def test_center_attains_objective(self):
        rng = np.random.default_rng(9)
        rows = oracles.random_rows(rng, 12, 6, 3)
        res = core.naive_closest(make(rows, 3))
        assert oracles.radius(rows, res.center_index) == res.objective


class TestBruteContinuous:
    def test_closest_pair(self):
        res = core.brute_continuous_closest(make([[0, 0, 0], [1, 1, 1]]))
        assert res.objective == 2
        assert res.center_string == (0, 0, 1)
        assert res.center_index is None

    def test_closest_singleton(self):
        res = core.brute_continuous_closest(make([[1, 0, 1]]))
        assert res.objective == 0 and res.center_string == (1, 0, 1)

    def test_cap_error(self):
        inst = core.StringSet(n=1, d=30, sigma=2, data=np.zeros((1, 30)))
        with pytest.raises(BudgetError, match="cap"):
            core.brute_continuous_closest(inst)

    def test_remotest_pair(self):
        res = core.brute_continuous_remotest(make([[0, 0, 0], [1, 1, 1]]))
        assert res.objective == 1

    def test_remotest_complement(self):
        res = core.brute_continuous_remotest(make([[0, 0, 0, 0]]))
        assert res.objective == 4 and res.center_string == (1, 1, 1, 1)

    def test_remotest_full_cover(self):
        rows = [[a, b] for a in range(2) for b in range(2)]
        res = core.brute_continuous_remotest(make(rows))
        assert res.objective == 0

    def test_matches_oracle_and_lex_tie(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            d = int(rng.integers(1, 6))
            sigma = int(rng.integers(2, 4))
            rows = oracles.random_rows(rng, n, d, sigma)
            inst = make(rows, sigma)
            cand, val = oracles.continuous_closest(rows, sigma)
            got = core.brute_continuous_closest(inst)
            assert got.objective == val and got.center_string == cand
            cand, val = oracles.continuous_remotest(rows, sigma)
            got = core.brute_continuous_remotest(inst)
            assert got.objective == val and got.center_string == cand

    def test_binary_complement_identity(self):
        rng = np.random.default_rng(55)
        for _ in range(25):
            n = int(rng.integers(1, 8))
            d = int(rng.integers(1, 8))
            rows = oracles.random_rows(rng, n, d, 2)
            inst = make(rows)
            c = core.brute_continuous_closest(inst).objective
            r = core.brute_continuous_remotest(inst).objective
            assert c == d - r

    def test_discrete_objective_dominates_specific_rows(self):
        rng = np.random.default_rng(70)
        rows = oracles.random_rows(rng, 10, 7, 3)
        inst = make(rows, 3)
        res = core.naive_closest(inst)
        for i in range(10):
            assert res.objective <= oracles.radius(rows, i)


class TestDistanceMatrixType:
    def test_validate(self):
        rng = np.random.default_rng(2)
        rows = oracles.random_rows(rng, 8, 5, 3)
        entries = np.array(oracles.all_pairs(rows), dtype=np.int32)
        dm = core.DistanceMatrix(n=8, entries=entries)
        from hammctr.rng import SplitMix64

        assert dm.validate(5, rng=SplitMix64(4), triples=200)

    def test_validate_rejects_asymmetry(self):
        entries = np.array([[0, 1], [2, 0]], dtype=np.int32)
        with pytest.raises(ValueError, match="symmetric"):
            core.DistanceMatrix(n=2, entries=entries).validate(3)
