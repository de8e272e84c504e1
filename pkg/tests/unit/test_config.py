"""
配置管理相关测试
"""
import json
import logging
import os
from pathlib import Path
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from src.config.settings import (
    DEFAULT_DEV_FRACTION,
    FormatConfig,
    PathsConfig,
    ScorerKind,
    Settings,
    ToolConfig,
)


def _settings(**env):
    with patch.dict(os.environ, {k: str(v) for k, v in env.items()}, clear=True):
        return Settings(_env_file=None)


class TestSettings:
    """测试Settings类"""

    def test_settings_defaults(self):
        """测试默认值"""
        s = _settings()
        assert s.APS_SCORER == "oracle"
        assert s.APS_TAU == 0.9
        assert s.APS_DEV_FRACTION == DEFAULT_DEV_FRACTION
        assert s.LOG_LEVEL == logging.INFO

    def test_settings_with_env_vars(self):
        """测试从环境变量读取设置"""
        s = _settings(APS_SCORER="remote", APS_SCORER_ENDPOINT="http://nli", APS_TAU="0.8", LOG_LEVEL="debug")
        assert s.APS_SCORER == "remote"
        assert s.APS_SCORER_ENDPOINT == "http://nli"
        assert s.APS_TAU == 0.8
        assert s.LOG_LEVEL == logging.DEBUG

    @pytest.mark.parametrize(
        "env",
        [
            {"APS_SCORER": "bert"},
            {"APS_GEN_PROVIDER": "pigeon"},
            {"APS_TAU": "0"},
            {"APS_TAU": "1.5"},
            {"APS_CONCURRENCY": "0"},
            {"APS_DEV_FRACTION": "1"},
            {"APS_CACHE_CAPACITY": "-1"},
            {"APS_SCORER_TIMEOUT": "0"},
            {"APS_NGRAM_N": "0"},
            {"LOG_LEVEL": "LOUD"},
        ],
    )
    def test_invalid_values(self, env):
        with pytest.raises(ValidationError):
            _settings(**env)


class TestSubConfigs:
    """测试子配置校验"""

    def test_format_tokens_must_differ(self):
        with pytest.raises(ValidationError):
            FormatConfig(start_token="<s>", end_token="<s>")

    def test_format_bullet_required(self):
        with pytest.raises(ValidationError):
            FormatConfig(bullet="  ")

    def test_paths_input_must_differ_from_output(self, tmp_path):
        with pytest.raises(ValidationError):
            PathsConfig(input=tmp_path / "a.jsonl", output=tmp_path / "a.jsonl")

    def test_paths_distinct_ok(self, tmp_path):
        paths = PathsConfig(input=tmp_path / "a.jsonl", output=tmp_path / "b.jsonl")
        assert paths.output.name == "b.jsonl"

    def test_extra_output_must_differ_from_input(self, tmp_path):
        with pytest.raises(ValidationError):
            PathsConfig(input=tmp_path / "a.jsonl", outputs={"train": tmp_path / "a.jsonl"})

    def test_extra_output_must_differ_from_extra_input(self, tmp_path):
        with pytest.raises(ValidationError):
            PathsConfig(inputs={"dataset": tmp_path / "d.jsonl"}, report=tmp_path / "d.jsonl")

    def test_outputs_must_differ_from_each_other(self, tmp_path):
        with pytest.raises(ValidationError):
            PathsConfig(
                input=tmp_path / "a.jsonl",
                outputs={"train": tmp_path / "s.jsonl", "dev": tmp_path / "s.jsonl"},
            )

    def test_relative_and_absolute_forms_compared(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        with pytest.raises(ValidationError):
            PathsConfig(input=tmp_path / "a.jsonl", outputs={"errors": Path("a.jsonl")})


class TestToolConfig:
    """测试 ToolConfig 的分层加载"""

    def test_from_settings(self):
        cfg = ToolConfig.from_settings(_settings(APS_SEED="7", APS_CONCURRENCY="3"))
        assert cfg.seed == 7
        assert cfg.concurrency == 3
        assert cfg.generation.concurrency == 3
        assert cfg.scorer.kind == ScorerKind.LEXICAL_ORACLE

    def test_file_overrides_settings(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"alignment": {"tau": 0.75}, "seed": 3}), encoding="utf-8")
        with patch.dict(os.environ, {}, clear=True):
            cfg = ToolConfig.load(path, _settings())
        assert cfg.alignment.tau == 0.75
        assert cfg.seed == 3

    def test_overrides_win_over_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"seed": 3, "scorer": {"strict": False}}), encoding="utf-8")
        with patch.dict(os.environ, {}, clear=True):
            cfg = ToolConfig.load(path, _settings(), **{"seed": 11, "scorer.strict": True, "alignment.tau": None})
        assert cfg.seed == 11
        assert cfg.scorer.strict is True
        assert cfg.alignment.scorer.strict is True
        assert cfg.alignment.tau == 0.9

    def test_env_endpoint_overrides_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"scorer": {"kind": "remote", "endpoint": "http://file"}}), encoding="utf-8")
        with patch.dict(os.environ, {"APS_SCORER_ENDPOINT": "http://env"}, clear=True):
            cfg = ToolConfig.load(path, _settings())
        assert cfg.scorer.endpoint == "http://env"

    def test_remote_without_endpoint_rejected(self):
        with patch.dict(os.environ, {}, clear=True):
            with pytest.raises(ValueError):
                ToolConfig.load(None, _settings(), **{"scorer.kind": "remote"})

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ToolConfig.load(tmp_path / "nope.json", _settings())

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValueError):
            ToolConfig.load(path, _settings())

    def test_non_object_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ValueError):
            ToolConfig.load(path, _settings())

    def test_frozen(self):
        cfg = ToolConfig.from_settings(_settings())
        with pytest.raises(ValidationError):
            cfg.seed = 5
