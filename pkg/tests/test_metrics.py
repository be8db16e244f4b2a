import random

import pytest

from dpnia import auc_score, map_score, precision_at_n, precision_recall_f1


class TestPrecisionAtN:
    def test_hand_count(self):
        assert precision_at_n([1, 2, 50], 30) == pytest.approx(2 / 3)

    def test_perfect(self):
        for n in (1, 5, 100):
            assert precision_at_n([1, 1, 1], n) == 1.0

    def test_n_at_least_max_rank(self):
        ranks = [3, 7, 2]
        assert precision_at_n(ranks, max(ranks)) == 1.0

    def test_monotone_in_n(self):
        rng = random.Random(0)
        ranks = [rng.randint(1, 40) for _ in range(25)]
        values = [precision_at_n(ranks, n) for n in range(1, 41)]
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert values[-1] == 1.0

    def test_empty_undefined(self):
        with pytest.raises(ValueError):
            precision_at_n([], 5)


class TestMapScore:
    def test_hand_value(self):
        assert map_score([1, 2, 4]) == pytest.approx((1 + 0.5 + 0.25) / 3)

    def test_all_first(self):
        assert map_score([1, 1]) == 1.0

    def test_single(self):
        assert map_score([10]) == pytest.approx(0.1)

    def test_one_iff_all_rank_one(self):
        rng = random.Random(1)
        for _ in range(20):
            ranks = [rng.randint(1, 6) for _ in range(8)]
            score = map_score(ranks)
            assert 0 < score <= 1
            assert (score == 1.0) == all(r == 1 for r in ranks)


class TestAuc:
    def test_best_rank(self):
        assert auc_score([1], 4) == 1.0

    def test_worst_rank(self):
        assert auc_score([5], 4) == 0.0

    def test_hand_value(self):
        assert auc_score([1, 3], 4) == pytest.approx(0.75)

    def test_boundary_characterization(self):
        rng = random.Random(2)
        for _ in range(20):
            m_n = rng.randint(2, 9)
            ranks = [rng.randint(1, m_n + 1) for _ in range(6)]
            score = auc_score(ranks, m_n)
            assert (score == 1.0) == all(r == 1 for r in ranks)
            assert (score == 0.0) == all(r == m_n + 1 for r in ranks)

    def test_rank_out_of_range(self):
        with pytest.raises(ValueError):
            auc_score([6], 4)


class TestPrf:
    def test_exact_match(self):
        psi = [(1, 1), (2, 2)]
        assert precision_recall_f1(psi, psi) == (1.0, 1.0, 1.0)

    def test_hand_counts(self):
        predicted = [(1, 1), (2, 2), (3, 9)]
        psi = [(1, 1), (2, 2), (4, 4)]
        p, r, f1 = precision_recall_f1(predicted, psi)
        assert (p, r, f1) == (pytest.approx(2 / 3),) * 3

    def test_no_overlap(self):
        assert precision_recall_f1([(1, 2)], [(3, 4)]) == (0.0, 0.0, 0.0)

    def test_f1_between_min_and_max(self):
        rng = random.Random(3)
        for _ in range(30):
            pred = {(rng.randint(0, 5), rng.randint(0, 5)) for _ in range(4)}
            truth = {(rng.randint(0, 5), rng.randint(0, 5)) for _ in range(4)}
            p, r, f1 = precision_recall_f1(pred, truth)
            assert min(p, r) - 1e-12 <= f1 <= max(p, r) + 1e-12
