"""
pytest 配置文件
为所有测试提供共享的fixtures和配置
"""

import os
import sys
from pathlib import Path

import pytest

# 确保可以导入 src 模块
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# 在导入任何src模块之前,设置测试环境变量
os.environ['PYTEST_CURRENT_TEST'] = 'true'
os.environ.setdefault('APS_SCORER', 'oracle')
os.environ.setdefault('APS_CACHE_CAPACITY', '1000')

from src.core.scorer import LexicalOracleScorer, ScoreCache  # noqa: E402
from src.core.types import DatasetExample, Passage, PropositionSet  # noqa: E402
from src.monitoring.metrics import reset_metrics  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "remote: 需要真实的远程 NLI 服务（设置 APS_SCORER_ENDPOINT）")


def pytest_collection_modifyitems(config, items):
    """没有配置远程打分服务时跳过 remote 测试"""
    if os.getenv('APS_SCORER_ENDPOINT'):
        return
    skip_remote = pytest.mark.skip(reason="未设置 APS_SCORER_ENDPOINT")
    for item in items:
        if "remote" in item.keywords:
            item.add_marker(skip_remote)


@pytest.fixture(autouse=True)
def fresh_metrics():
    """每个测试使用独立的运行计数器"""
    reset_metrics()
    yield
    reset_metrics()


@pytest.fixture
def oracle():
    """默认（按比例打分）的词汇 oracle"""
    return LexicalOracleScorer()


@pytest.fixture
def strict_oracle():
    """全有或全无的词汇 oracle"""
    return LexicalOracleScorer(strict=True)


@pytest.fixture
def cached_oracle():
    return LexicalOracleScorer(cache=ScoreCache(capacity=100))


def build_example(example_id, text, propositions, grouped=False):
    """由文本和命题构建 DatasetExample"""
    gold = PropositionSet.grouped(propositions) if grouped else PropositionSet.ungrouped(propositions)
    return DatasetExample(passage=Passage.from_text(example_id, text), gold=gold)


@pytest.fixture
def make_example():
    return build_example
