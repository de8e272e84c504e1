"""
指标性质测试（hypothesis）
"""
import math

from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.scorer import LexicalOracleScorer, ScoreCache
from src.core.types import DatasetExample, Passage, PropositionSet
from src.evaluation.metrics import (
    aggregate_reports,
    evaluate_example,
    rb_precision,
    rb_recall,
    rf_precision,
    rf_recall,
    sentence_baseline,
)
from tests.fixtures.passages import VOCAB, make_sentence

scorer = LexicalOracleScorer()

sentences = st.lists(st.sampled_from(VOCAB), min_size=1, max_size=5, unique=True).map(make_sentence)
proposition_lists = st.lists(sentences, min_size=1, max_size=6)
passages = st.lists(sentences, min_size=1, max_size=4).map(lambda s: Passage.from_text("p", " ".join(s)))

PROPERTY_SETTINGS = settings(max_examples=200, deadline=None)


def _all_metrics(Q, P, passage):
    return (
        rf_precision(Q, passage, scorer),
        rf_recall(Q, passage, scorer),
        rb_precision(Q, P, scorer),
        rb_recall(Q, P, scorer),
    )


class TestMetricProperties:
    """指标的不变性"""

    @PROPERTY_SETTINGS
    @given(passage=passages, gold=proposition_lists, pred=proposition_lists, data=st.data())
    def test_permutation_invariant(self, passage, gold, pred, data):
        """预测命题顺序不影响任何指标"""
        shuffled = data.draw(st.permutations(pred))
        P = PropositionSet.ungrouped(gold)
        assert _all_metrics(PropositionSet.ungrouped(pred), P, passage) == _all_metrics(
            PropositionSet.ungrouped(shuffled), P, passage
        )

    @PROPERTY_SETTINGS
    @given(passage=passages, gold=proposition_lists, pred=proposition_lists)
    def test_duplication_invariant(self, passage, gold, pred):
        """整组预测重复一次不改变任何指标"""
        P = PropositionSet.ungrouped(gold)
        assert _all_metrics(PropositionSet.ungrouped(pred), P, passage) == _all_metrics(
            PropositionSet.ungrouped(pred + pred), P, passage
        )

    @PROPERTY_SETTINGS
    @given(first=proposition_lists, second=proposition_lists)
    def test_precision_recall_mirror(self, first, second):
        """交换预测与标注后精确率与召回率互换"""
        A = PropositionSet.ungrouped(first)
        B = PropositionSet.ungrouped(second)
        assert rb_precision(A, B, scorer) == rb_recall(B, A, scorer)

    @PROPERTY_SETTINGS
    @given(gold=proposition_lists)
    def test_gold_identity(self, gold):
        P = PropositionSet.ungrouped(gold)
        assert rb_precision(P, P, scorer) == 1.0
        assert rb_recall(P, P, scorer) == 1.0

    @PROPERTY_SETTINGS
    @given(passage=passages)
    def test_sentence_baseline_identity(self, passage):
        baseline = sentence_baseline(passage)
        assert rf_precision(baseline, passage, scorer) == 1.0
        assert rf_recall(baseline, passage, scorer) == 1.0

    @PROPERTY_SETTINGS
    @given(items=st.lists(st.tuples(passages, proposition_lists, proposition_lists), min_size=1, max_size=5))
    def test_macro_mean_matches_sequential_fold(self, items):
        """语料指标与按样本顺序逐个累加的 fsum 平均逐位一致"""
        reports = [
            evaluate_example(DatasetExample(passage=p, gold=PropositionSet.ungrouped(g)), PropositionSet.ungrouped(q), scorer)
            for p, g, q in items
        ]
        corpus = aggregate_reports(reports)
        for name in ("rf_p", "rf_r", "rf_f1", "rb_p", "rb_r", "rb_f1"):
            total = []
            for report in reports:
                total.append(getattr(report, name))
            assert getattr(corpus, name) == math.fsum(total) / len(total)
        assert corpus.avg_props == math.fsum(float(r.n_props) for r in reports) / len(reports)
        for name in ("rf_p", "rf_r", "rf_f1", "rb_p", "rb_r", "rb_f1"):
            assert 0.0 <= getattr(corpus, name) <= 1.0

    @PROPERTY_SETTINGS
    @given(passage=passages, gold=proposition_lists, pred=proposition_lists, capacity=st.integers(0, 8))
    def test_cache_is_transparent(self, passage, gold, pred, capacity):
        """带缓存（包括容量很小、频繁淘汰的缓存）与不带缓存的结果逐位一致，重复评估也一致"""
        example = DatasetExample(passage=passage, gold=PropositionSet.ungrouped(gold))
        Q = PropositionSet.ungrouped(pred)
        cached = LexicalOracleScorer(cache=ScoreCache(capacity=capacity))
        expected = evaluate_example(example, Q, scorer)
        assert evaluate_example(example, Q, cached) == expected
        assert evaluate_example(example, Q, cached) == expected
