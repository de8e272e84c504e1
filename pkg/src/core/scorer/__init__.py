"""蕴含打分模块"""

from src.core.scorer.base import EntailmentScorer
from src.core.scorer.cache import CacheStats, ScoreCache
from src.core.scorer.errors import EmptyInput, ProtocolError, ScorerError, TransportError
from src.core.scorer.factory import ScorerFactory
from src.core.scorer.lexical_oracle import LexicalOracleScorer, lexical_oracle_score
from src.core.scorer.remote import RemoteScorer

__all__ = [
    "CacheStats",
    "EmptyInput",
    "EntailmentScorer",
    "LexicalOracleScorer",
    "ProtocolError",
    "RemoteScorer",
    "ScoreCache",
    "ScorerError",
    "ScorerFactory",
    "TransportError",
    "lexical_oracle_score",
]
