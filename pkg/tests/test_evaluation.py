import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.metrics import adjusted_rand_score

from medshift.evaluation import adjusted_rand_index, contingency
from medshift.exceptions import LengthMismatch, TooFewPoints

from oracles import pair_counting_ari

labelings = st.integers(2, 30).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(-1, 4), min_size=n, max_size=n),
        st.lists(st.integers(-1, 4), min_size=n, max_size=n),
    )
)


class TestContingency:
    def test_relabeled(self):
        t = contingency([0, 0, 1, 1], [1, 1, 0, 0])
        np.testing.assert_array_equal(t.counts, [[2, 0], [0, 2]])

    def test_crossed(self):
        t = contingency([0, 1, 0, 1], [0, 0, 1, 1])
        np.testing.assert_array_equal(t.counts, [[1, 1], [1, 1]])

    def test_identity_is_diagonal(self):
        labels = [3, 3, 1, 7, 1, 7, 7]
        t = contingency(labels, labels)
        np.testing.assert_array_equal(t.counts, np.diag([2, 2, 3]))
        assert t.n == 7
        np.testing.assert_array_equal(t.row_sums, t.col_sums)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            contingency([0, 1], [0, 1, 1])
        with pytest.raises(TooFewPoints):
            contingency([0], [0])


class TestAdjustedRandIndex:
    def test_identical_up_to_relabeling(self):
        assert adjusted_rand_index([0, 0, 1, 1, 2], [5, 5, 3, 3, -1]) == 1.0

    def test_trivial_identical_partitions(self):
        assert adjusted_rand_index([0, 0, 0], [1, 1, 1]) == 1.0
        assert adjusted_rand_index([0, 1, 2], [2, 0, 1]) == 1.0

    def test_noise_counts_as_cluster(self):
        assert adjusted_rand_index([-1, -1, 0, 0], [0, 0, 1, 1]) == 1.0

    def test_pair_counting_oracle(self):
        rng = np.random.default_rng(40)
        for _ in range(500):
            n = int(rng.integers(2, 13))
            pred = rng.integers(0, 3, n).tolist()
            truth = rng.integers(0, 3, n).tolist()
            assert abs(adjusted_rand_index(pred, truth) - pair_counting_ari(pred, truth)) <= 1e-12

    @given(labelings)
    def test_matches_sklearn(self, pair):
        pred, truth = pair
        assert adjusted_rand_index(pred, truth) == pytest.approx(
            adjusted_rand_score(truth, pred), abs=1e-12
        )

    @given(labelings)
    def test_symmetric(self, pair):
        a, b = pair
        assert adjusted_rand_index(a, b) == adjusted_rand_index(b, a)

    @given(labelings, st.permutations(range(6)))
    def test_permutation_invariant(self, pair, perm):
        a, b = pair
        relabel = [perm[x + 1] for x in a]
        assert adjusted_rand_index(relabel, b) == adjusted_rand_index(a, b)

    @given(labelings)
    def test_bounded_and_perfect_only_when_identical(self, pair):
        a, b = pair
        score = adjusted_rand_index(a, b)
        assert score <= 1.0
        same = {frozenset(i for i, x in enumerate(a) if x == v) for v in set(a)} == {
            frozenset(i for i, x in enumerate(b) if x == v) for v in set(b)
        }
        assert (score == 1.0) == same

    @pytest.mark.slow
    def test_chance_level(self):
        rng = np.random.default_rng(41)
        truth = rng.integers(0, 3, 200)
        scores = [adjusted_rand_index(rng.integers(0, 3, 200), truth) for _ in range(1000)]
        assert abs(np.mean(scores)) <= 0.02
