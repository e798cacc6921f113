import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hcsim.similarity import (cosine_index, divergence_from_counts, hc_sim,
                              power_divergence)
from hcsim.text import FrequencyTable, Vocabulary

from oracles import pearson_two_sample

AB = Vocabulary(("a", "b"))
D1 = FrequencyTable({"a": 3, "b": 1})
D2 = FrequencyTable({"a": 1, "b": 3})

count_pairs = st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), min_size=3, max_size=40)


def _tables(pairs):
    vocab = Vocabulary(tuple(f"w{i}" for i in range(len(pairs))))
    t1 = FrequencyTable({t: a for t, (a, _) in zip(vocab.terms, pairs)})
    t2 = FrequencyTable({t: b for t, (_, b) in zip(vocab.terms, pairs)})
    return t1, t2, vocab


class TestHcSim:
    def test_two_word_example(self):
        sim = hc_sim(D1, D2, AB, 0.5, "star")
        assert [r.pi for r in sim.records] == pytest.approx([13 / 256] * 2, abs=1e-15)
        assert sim.value == pytest.approx(math.sqrt(2) * (0.5 - 13 / 256) / 0.5, abs=1e-12)

    def test_identical_tables(self):
        t = FrequencyTable({"a": 2, "b": 5, "c": 1})
        v = Vocabulary(("a", "b", "c"))
        sim = hc_sim(t, t, v, 0.5, "star")
        assert all(r.pi == 1.0 for r in sim.records)
        assert sim.value < 0 and len(sim.delta) == 3

    def test_empty_side_rejected(self):
        with pytest.raises(ValueError):
            hc_sim(D1, FrequencyTable({"zz": 4}), AB)

    @given(count_pairs, st.sampled_from(["star", "dagger"]))
    def test_symmetric(self, pairs, variant):
        t1, t2, vocab = _tables(pairs)
        try:
            a = hc_sim(t1, t2, vocab, 0.5, variant)
        except ValueError:
            with pytest.raises(ValueError):
                hc_sim(t2, t1, vocab, 0.5, variant)
            return
        b = hc_sim(t2, t1, vocab, 0.5, variant)
        assert a.value == b.value
        assert a.delta.terms == b.delta.terms and a.delta.pvalues == b.delta.pvalues
        assert a.delta.directions == tuple(-d for d in b.delta.directions)


class TestCosine:
    def test_identical(self):
        assert cosine_index(D1, D1, AB).value == 0.0

    def test_orthogonal(self):
        assert cosine_index(FrequencyTable({"a": 1}), FrequencyTable({"b": 1}), AB).value == 1.0

    def test_hand_value(self):
        v = cosine_index(FrequencyTable({"a": 1, "b": 1}), FrequencyTable({"a": 1}), AB).value
        assert v == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-15)

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            cosine_index(D1, FrequencyTable({}), AB)

    @given(count_pairs, st.integers(1, 5))
    def test_scale_invariant(self, pairs, k):
        t1, t2, vocab = _tables(pairs)
        if t1.total == 0 or t2.total == 0:
            return
        t3 = FrequencyTable({w: k * c for w, c in t1.counts.items()})
        assert cosine_index(t3, t2, vocab).value == pytest.approx(
            cosine_index(t1, t2, vocab).value, abs=1e-12)


class TestDivergence:
    def test_pearson_hand_value(self):
        assert power_divergence(D1, D2, AB, 1.0).value == pytest.approx(2.0, abs=1e-12)

    def test_identical_equal_size(self):
        for lam in (0.0, 2 / 3, 1.0):
            assert power_divergence(D1, D1, AB, lam).value == pytest.approx(0.0, abs=1e-12)

    def test_single_term_rejected(self):
        with pytest.raises(ValueError):
            power_divergence(FrequencyTable({"a": 2}), FrequencyTable({"a": 1}), AB, 1.0)

    def test_lambda_at_pole_rejected(self):
        with pytest.raises(ValueError):
            power_divergence(D1, D2, AB, -1.0)

    def test_without_factor(self):
        lam = 2 / 3
        with_f = power_divergence(D1, D2, AB, lam).value
        without = power_divergence(D1, D2, AB, lam, classical_factor=False).value
        assert with_f == pytest.approx(without * 2 / (lam * (lam + 1)), rel=1e-12)

    def test_matches_scipy_g_test(self):
        from scipy.stats import chi2_contingency
        c1 = np.array([10, 4, 7, 0, 3])
        c2 = np.array([3, 9, 7, 2, 5])
        keep = (c1 + c2) > 0
        stat = chi2_contingency(np.vstack([c1, c2])[:, keep], correction=False,
                                lambda_="log-likelihood")[0]
        assert divergence_from_counts(c1, c2, 0.0) == pytest.approx(stat / (keep.sum() - 1),
                                                                    rel=1e-12)

    @given(count_pairs)
    def test_pearson_oracle(self, pairs):
        c1 = [a for a, _ in pairs]
        c2 = [b for _, b in pairs]
        n_prime = sum(1 for a, b in pairs if a + b > 0)
        if sum(c1) == 0 or sum(c2) == 0 or n_prime < 2:
            return
        got = divergence_from_counts(c1, c2, 1.0)
        assert got == pytest.approx(pearson_two_sample(c1, c2) / (n_prime - 1), rel=1e-9, abs=1e-12)

    def test_lambda_limit_consistency(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            c1 = rng.integers(0, 30, size=25)
            c2 = rng.integers(0, 30, size=25)
            g2 = divergence_from_counts(c1, c2, 0.0)
            near = divergence_from_counts(c1, c2, 1e-6)
            assert near == pytest.approx(g2, rel=1e-6)

    @given(count_pairs, st.sampled_from([-0.5, 0.0, 2 / 3, 1.0, 2.0]))
    def test_nonnegative_and_symmetric(self, pairs, lam):
        c1 = [a for a, _ in pairs]
        c2 = [b for _, b in pairs]
        try:
            d = divergence_from_counts(c1, c2, lam)
        except ValueError:
            return
        assert d >= -1e-12
        assert divergence_from_counts(c2, c1, lam) == pytest.approx(d, rel=1e-12, abs=1e-12)
