"""
蕴含打分器测试：词汇 oracle、缓存、批处理、远程客户端与工厂
"""
from unittest.mock import Mock

import pytest
import requests
from hypothesis import given, settings
from hypothesis import strategies as st

from src.config.settings import ScorerBackend, ScorerKind
from src.core.scorer import (
    EmptyInput,
    EntailmentScorer,
    LexicalOracleScorer,
    ProtocolError,
    RemoteScorer,
    ScoreCache,
    ScorerFactory,
    TransportError,
    lexical_oracle_score,
)
from src.monitoring.metrics import get_metrics


class CountingScorer(EntailmentScorer):
    """记录每次后端调用的测试打分器"""

    backend_name = "counting"

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.chunks = []

    def _score_chunk(self, pairs):
        self.chunks.append(list(pairs))
        return [lexical_oracle_score(p, c) for p, c in pairs]


class TestLexicalOracle:
    """测试词汇 oracle 打分"""

    def test_half_overlap(self):
        """claim 词 {the, books, are, cheap} 中有 2 个出现在 premise 中"""
        assert lexical_oracle_score("The books download fast.", "The books are cheap.") == 0.5

    def test_full_containment(self):
        assert lexical_oracle_score("The cat sat on the mat.", "the CAT sat!") == 1.0

    def test_disjoint(self):
        assert lexical_oracle_score("Apples are red.", "Penguins swim.") == 0.0

    def test_strict_all_or_nothing(self):
        assert lexical_oracle_score("The books download fast.", "The books are cheap.", strict=True) == 0.0
        assert lexical_oracle_score("The books are cheap today.", "The books are cheap.", strict=True) == 1.0

    def test_punctuation_only_claim(self):
        assert lexical_oracle_score("Anything.", "...") == 1.0

    def test_score_in_unit_interval(self, oracle):
        scores = oracle.score_batch([("a b c", "a d"), ("x", "x y z w")])
        assert scores == [0.5, 0.25]


ORACLE_TEXT = st.text(alphabet="abcdeABC .,!?'-", max_size=40)


class TestLexicalOracleProperties:
    """词汇 oracle 的性质（hypothesis）"""

    @settings(max_examples=300, deadline=None)
    @given(text=ORACLE_TEXT, strict=st.booleans())
    def test_reflexive(self, text, strict):
        assert lexical_oracle_score(text, text, strict) == 1.0

    @settings(max_examples=300, deadline=None)
    @given(premise=ORACLE_TEXT, extra=ORACLE_TEXT, claim=ORACLE_TEXT, strict=st.booleans())
    def test_monotone_in_premise(self, premise, extra, claim, strict):
        """前提追加内容后分数不会下降"""
        extended = premise + " " + extra
        assert lexical_oracle_score(extended, claim, strict) >= lexical_oracle_score(premise, claim, strict)

    @settings(max_examples=300, deadline=None)
    @given(premise=ORACLE_TEXT, claim=ORACLE_TEXT)
    def test_strict_bounds_graded(self, premise, claim):
        assert lexical_oracle_score(premise, claim, strict=True) <= lexical_oracle_score(premise, claim)


class TestBatching:
    """测试批量打分的去重、切分与错误定位"""

    def test_results_in_input_order(self, oracle):
        pairs = [("a b", "a"), ("a b", "c"), ("a b", "a b c d")]
        assert oracle.score_batch(pairs) == [1.0, 0.0, 0.5]

    def test_duplicates_scored_once(self):
        scorer = CountingScorer(max_batch=10)
        scores = scorer.score_batch([("a", "a"), ("a", "b"), ("a", "a")])
        assert scores == [1.0, 0.0, 1.0]
        assert len(scorer.chunks) == 1
        assert len(scorer.chunks[0]) == 2

    def test_chunked_by_max_batch(self):
        scorer = CountingScorer(max_batch=2)
        scorer.score_batch([("a", str(i)) for i in range(5)])
        assert [len(c) for c in scorer.chunks] == [2, 2, 1]

    def test_empty_claim_rejected_with_index(self, oracle):
        with pytest.raises(EmptyInput) as exc_info:
            oracle.score_batch([("a", "a"), ("a", "  ")])
        assert exc_info.value.failing_index == 1

    def test_empty_premise_rejected(self, oracle):
        with pytest.raises(EmptyInput):
            oracle.score("", "claim")

    def test_wrong_length_is_protocol_error(self):
        class ShortScorer(EntailmentScorer):
            def _score_chunk(self, pairs):
                return [1.0]

        with pytest.raises(ProtocolError) as exc_info:
            ShortScorer().score_batch([("a", "a"), ("b", "b")])
        assert exc_info.value.failing_index == 0

    def test_error_carries_chunk_start(self):
        class FailingSecondChunk(EntailmentScorer):
            backend_name = "failing"

            def __init__(self):
                super().__init__(max_batch=2)
                self.calls = 0

            def _score_chunk(self, pairs):
                self.calls += 1
                if self.calls == 2:
                    raise TransportError("down")
                return [1.0] * len(pairs)

        with pytest.raises(TransportError) as exc_info:
            FailingSecondChunk().score_batch([("a", str(i)) for i in range(4)])
        assert exc_info.value.failing_index == 2
        assert exc_info.value.context["backend"] == "failing"

    def test_invalid_max_batch(self):
        with pytest.raises(ValueError):
            LexicalOracleScorer(max_batch=0)


class TestScoreCache:
    """测试打分缓存"""

    def test_hit_after_put(self):
        cache = ScoreCache(capacity=10)
        assert cache.get("p", "c") is None
        cache.put("p", "c", 0.75)
        assert cache.get("p", "c") == 0.75
        stats = cache.stats()
        assert (stats.hits, stats.misses, stats.size) == (1, 1, 1)

    def test_lru_eviction(self):
        cache = ScoreCache(capacity=2)
        cache.put("a", "x", 0.1)
        cache.put("b", "x", 0.2)
        cache.get("a", "x")
        cache.put("c", "x", 0.3)
        assert cache.get("b", "x") is None
        assert cache.get("a", "x") == 0.1
        assert len(cache) == 2

    def test_zero_capacity_stores_nothing(self):
        cache = ScoreCache(capacity=0)
        cache.put("a", "b", 1.0)
        assert len(cache) == 0

    def test_negative_capacity(self):
        with pytest.raises(ValueError):
            ScoreCache(capacity=-1)

    def test_clear(self):
        cache = ScoreCache()
        cache.put("a", "b", 1.0)
        cache.clear()
        assert cache.stats().size == 0

    def test_scorer_uses_cache(self):
        cache = ScoreCache(capacity=10)
        scorer = CountingScorer(cache=cache)
        scorer.score("a b", "a")
        scorer.score("a b", "a")
        assert len(scorer.chunks) == 1
        assert cache.stats().hits == 1

    def test_cache_metrics_recorded(self):
        cache = ScoreCache(capacity=10)
        cache.get("a", "b")
        output = get_metrics().get_metrics().decode()
        assert "aps_cache_misses_total 1.0" in output


def _response(status=200, payload=None, json_error=False):
    response = Mock()
    response.status_code = status
    if json_error:
        response.json.side_effect = ValueError("bad json")
    else:
        response.json.return_value = payload
    return response


def _remote(session, **kwargs):
    return RemoteScorer("http://nli.test/", session=session, retry_base=0, **kwargs)


class TestRemoteScorer:
    """测试远程打分客户端（使用模拟的 requests.Session）"""

    def test_posts_pairs_and_parses_scores(self):
        session = Mock()
        session.post.return_value = _response(payload={"scores": [0.9, 0.1]})
        scorer = _remote(session)
        assert scorer.score_batch([("p1", "c1"), ("p2", "c2")]) == [0.9, 0.1]
        args, kwargs = session.post.call_args
        assert args[0] == "http://nli.test/score"
        assert kwargs["json"] == {
            "pairs": [{"premise": "p1", "claim": "c1"}, {"premise": "p2", "claim": "c2"}]
        }

    def test_out_of_range_scores_clamped(self):
        session = Mock()
        session.post.return_value = _response(payload={"scores": [1.2, -0.1]})
        assert _remote(session).score_batch([("a", "b"), ("c", "d")]) == [1.0, 0.0]
        assert "aps_scorer_clamped_scores_total 2.0" in get_metrics().get_metrics().decode()

    def test_retries_transport_errors_then_succeeds(self):
        session = Mock()
        session.post.side_effect = [_response(status=503), _response(payload={"scores": [0.5]})]
        assert _remote(session).score("a", "b") == 0.5
        assert session.post.call_count == 2

    def test_gives_up_after_max_retries(self):
        session = Mock()
        session.post.side_effect = requests.ConnectionError("refused")
        with pytest.raises(TransportError) as exc_info:
            _remote(session, max_retries=3).score("a", "b")
        assert session.post.call_count == 4
        assert exc_info.value.failing_index == 0

    def test_rate_limit_is_retryable(self):
        session = Mock()
        session.post.side_effect = [_response(status=429), _response(payload={"scores": [1.0]})]
        assert _remote(session).score("a", "b") == 1.0

    def test_client_error_not_retried(self):
        session = Mock()
        session.post.return_value = _response(status=400)
        with pytest.raises(ProtocolError):
            _remote(session).score("a", "b")
        assert session.post.call_count == 1

    @pytest.mark.parametrize(
        "payload",
        [
            {"scores": [0.5, 0.5]},
            {"scores": ["high"]},
            {"scores": [True]},
            {"scores": [float("nan")]},
            {"result": [0.5]},
            [0.5],
        ],
    )
    def test_malformed_payload_is_protocol_error(self, payload):
        session = Mock()
        session.post.return_value = _response(payload=payload)
        with pytest.raises(ProtocolError):
            _remote(session).score("a", "b")
        assert session.post.call_count == 1

    def test_invalid_json(self):
        session = Mock()
        session.post.return_value = _response(json_error=True)
        with pytest.raises(ProtocolError):
            _remote(session).score("a", "b")

    def test_requires_endpoint(self):
        with pytest.raises(ValueError):
            RemoteScorer("")

    def test_close_closes_session(self):
        session = Mock()
        with _remote(session):
            pass
        session.close.assert_called_once()


class TestScorerFactory:
    """测试打分器工厂"""

    def test_create_oracle_with_cache(self):
        scorer = ScorerFactory.create(ScorerBackend(kind=ScorerKind.LEXICAL_ORACLE, cache_capacity=5, strict=True))
        assert isinstance(scorer, LexicalOracleScorer)
        assert scorer.strict is True
        assert scorer.cache is not None and scorer.cache.capacity == 5

    def test_create_without_cache(self):
        scorer = ScorerFactory.create(ScorerBackend(cache_capacity=0))
        assert scorer.cache is None

    def test_create_remote(self):
        scorer = ScorerFactory.create(ScorerBackend(kind=ScorerKind.REMOTE, endpoint="http://nli.test"))
        assert isinstance(scorer, RemoteScorer)
        assert scorer.url == "http://nli.test/score"
        scorer.close()

    def test_remote_requires_endpoint(self):
        with pytest.raises(ValueError):
            ScorerBackend(kind=ScorerKind.REMOTE)

    def test_supported_backends(self):
        assert set(ScorerFactory.get_supported_backends()) >= {"oracle", "remote"}

    def test_register_rejects_non_scorer(self):
        with pytest.raises(TypeError):
            ScorerFactory.register_backend(ScorerKind.LEXICAL_ORACLE, dict)
