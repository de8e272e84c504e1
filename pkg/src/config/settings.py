import json
import logging
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings

load_dotenv()

# 开发集比例：ROSE 2,500 条中 411 条划入开发集
DEFAULT_DEV_FRACTION = 411 / 2500

DEFAULT_INSTRUCTION = (
    "Split the passage below into propositions: simple, self-contained sentences "
    "that each state a single fact."
)


class Settings(BaseSettings):
    """应用程序设置类，使用Pydantic进行类型验证和环境变量管理"""

    # --- 蕴含打分后端 ---
    APS_SCORER: str = "oracle"  # oracle / remote
    APS_SCORER_ENDPOINT: Optional[str] = None
    APS_SCORER_TIMEOUT: float = 30.0  # 秒
    APS_SCORER_MAX_BATCH: int = 32
    APS_CACHE_CAPACITY: int = 100_000
    APS_ORACLE_STRICT: bool = False

    # --- 生成服务 ---
    APS_GEN_PROVIDER: str = "http"  # http / openai / anthropic
    APS_GEN_ENDPOINT: Optional[str] = None
    APS_GEN_MODEL: str = "teacher"
    APS_GEN_API_KEY: Optional[str] = None
    APS_GEN_TIMEOUT: float = 120.0

    # --- 流水线参数 ---
    APS_TAU: float = 0.9
    APS_CONCURRENCY: int = 8
    APS_SEED: int = 0
    APS_DEV_FRACTION: float = DEFAULT_DEV_FRACTION
    APS_CHECKPOINT_EVERY: int = 100
    APS_NGRAM_N: int = 4

    # --- 日志 ---
    LOG_LEVEL: Union[int, str] = logging.INFO  # 支持字符串(INFO/DEBUG等)或整数
    LOG_FILE: Optional[str] = None

    @field_validator("APS_SCORER")
    @classmethod
    def validate_scorer(cls, v):
        """验证打分后端"""
        valid = ["oracle", "remote"]
        if v not in valid:
            raise ValueError(f"APS_SCORER 必须是 {valid} 之一，当前设置为 {v}")
        return v

    @field_validator("APS_GEN_PROVIDER")
    @classmethod
    def validate_gen_provider(cls, v):
        """验证生成服务提供商"""
        valid = ["http", "openai", "anthropic"]
        if v not in valid:
            raise ValueError(f"APS_GEN_PROVIDER 必须是 {valid} 之一，当前设置为 {v}")
        return v

    @field_validator("APS_SCORER_MAX_BATCH")
    @classmethod
    def validate_max_batch(cls, v):
        """验证批大小"""
        if v < 1:
            raise ValueError(f"APS_SCORER_MAX_BATCH 必须 >= 1，当前设置为 {v}")
        if v > 1024:
            logging.warning(f"APS_SCORER_MAX_BATCH 设置过大 ({v})，远程服务可能拒绝请求")
        return v

    @field_validator("APS_CACHE_CAPACITY")
    @classmethod
    def validate_cache_capacity(cls, v):
        """验证缓存容量（0 表示禁用缓存）"""
        if v < 0:
            raise ValueError(f"APS_CACHE_CAPACITY 不能为负数，当前设置为 {v}")
        return v

    @field_validator("APS_SCORER_TIMEOUT", "APS_GEN_TIMEOUT")
    @classmethod
    def validate_timeout(cls, v):
        """验证超时时间"""
        if v <= 0:
            raise ValueError(f"超时时间必须 > 0 秒，当前设置为 {v}")
        return v

    @field_validator("APS_TAU")
    @classmethod
    def validate_tau(cls, v):
        """验证对齐阈值"""
        if not 0 < v <= 1:
            raise ValueError(f"APS_TAU 必须在 (0, 1] 之间，当前设置为 {v}")
        if v < 0.5:
            logging.warning(f"APS_TAU 设置过低 ({v})，对齐结果可能不可靠")
        return v

    @field_validator("APS_CONCURRENCY")
    @classmethod
    def validate_concurrency(cls, v):
        """验证并发数"""
        if v < 1:
            raise ValueError(f"APS_CONCURRENCY 必须 >= 1，当前设置为 {v}")
        return v

    @field_validator("APS_DEV_FRACTION")
    @classmethod
    def validate_dev_fraction(cls, v):
        """验证开发集比例"""
        if not 0 < v < 1:
            raise ValueError(f"APS_DEV_FRACTION 必须在 (0, 1) 之间，当前设置为 {v}")
        return v

    @field_validator("APS_CHECKPOINT_EVERY", "APS_NGRAM_N")
    @classmethod
    def validate_positive(cls, v):
        """验证正整数参数"""
        if v < 1:
            raise ValueError(f"参数必须 >= 1，当前设置为 {v}")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v):
        """验证日志级别，支持字符串(INFO/DEBUG等)或整数"""
        if isinstance(v, str):
            level_map = {
                "DEBUG": logging.DEBUG,
                "INFO": logging.INFO,
                "WARNING": logging.WARNING,
                "ERROR": logging.ERROR,
                "CRITICAL": logging.CRITICAL,
            }
            level = level_map.get(v.upper())
            if level is None:
                raise ValueError(f"LOG_LEVEL 必须是 DEBUG/INFO/WARNING/ERROR/CRITICAL 之一，当前值: {v}")
            return level
        if isinstance(v, int):
            valid_levels = [logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL]
            if v not in valid_levels:
                raise ValueError(f"LOG_LEVEL 整数值必须是有效的logging级别，当前值: {v}")
            return v
        raise ValueError(f"LOG_LEVEL 必须是字符串或整数，当前类型: {type(v)}")

    model_config = ConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# 创建全局设置实例
settings = Settings()


# ============================================================================
# 结构化配置（ToolConfig 及其子配置）
# ============================================================================


class ScorerKind(str, Enum):
    """蕴含打分后端类型"""

    REMOTE = "remote"
    LEXICAL_ORACLE = "oracle"


class ScorerBackend(BaseModel):
    """蕴含打分后端配置"""

    model_config = ConfigDict(frozen=True)

    kind: ScorerKind = ScorerKind.LEXICAL_ORACLE
    endpoint: Optional[str] = None
    timeout: float = Field(default=30.0, gt=0)
    max_batch: int = Field(default=32, ge=1)
    cache_capacity: int = Field(default=100_000, ge=0)
    strict: bool = False  # 仅对词汇 oracle 生效

    @model_validator(mode="after")
    def check_endpoint(self):
        if self.kind == ScorerKind.REMOTE and not self.endpoint:
            raise ValueError("远程打分后端必须配置 endpoint（--endpoint 或 APS_SCORER_ENDPOINT）")
        return self


class FormatConfig(BaseModel):
    """训练/推理格式配置"""

    model_config = ConfigDict(frozen=True)

    start_token: str = "<s>"
    end_token: str = "</s>"
    bullet: str = "- "
    instruction: str = DEFAULT_INSTRUCTION

    @model_validator(mode="after")
    def check_tokens(self):
        if not self.start_token or not self.end_token:
            raise ValueError("start_token 与 end_token 不能为空")
        if self.start_token == self.end_token:
            raise ValueError(f"start_token 与 end_token 不能相同: {self.start_token!r}")
        if not self.bullet or not self.bullet.strip():
            raise ValueError("bullet 不能为空")
        return self


class AlignmentConfig(BaseModel):
    """命题-句子对齐配置"""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(default=0.9, gt=0, le=1)
    scorer: ScorerBackend = ScorerBackend()


class GenerationConfig(BaseModel):
    """生成服务配置"""

    model_config = ConfigDict(frozen=True)

    provider: str = "http"
    endpoint: Optional[str] = None
    model: str = "teacher"
    api_key: Optional[str] = None
    timeout: float = Field(default=120.0, gt=0)
    concurrency: int = Field(default=8, ge=1)
    checkpoint_every: int = Field(default=100, ge=1)
    domain_temperature: float = Field(default=1.0, ge=0)
    text_temperature: float = Field(default=1.0, ge=0)
    fewshot_temperature: float = Field(default=0.0, ge=0)
    max_attempts: int = Field(default=4, ge=1)


class PathsConfig(BaseModel):
    """输入/输出/报告路径

    inputs / outputs 收集子命令的其余读写路径（--dataset、--train、--errors 等），
    任何写出路径都不能与读入路径相同，写出路径之间也必须互不相同。
    """

    model_config = ConfigDict(frozen=True)

    input: Optional[Path] = None
    output: Optional[Path] = None
    report: Optional[Path] = None
    inputs: Dict[str, Path] = Field(default_factory=dict)
    outputs: Dict[str, Path] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_distinct(self):
        reads = {"input": self.input, **self.inputs}
        reads = {name: Path(p).resolve() for name, p in reads.items() if p is not None}
        writes = {"output": self.output, "report": self.report, **self.outputs}

        seen: Dict[Path, str] = {}
        for name, path in writes.items():
            if path is None:
                continue
            resolved = Path(path).resolve()
            for read_name, read_path in reads.items():
                if resolved == read_path:
                    raise ValueError(f"输入路径 {read_name} 与输出路径 {name} 不能相同: {path}")
            if resolved in seen:
                raise ValueError(f"输出路径 {seen[resolved]} 与 {name} 不能相同: {path}")
            seen[resolved] = name
        return self


class ToolConfig(BaseModel):
    """命令行工具的完整配置

    优先级（低 -> 高）：内置默认值 -> Settings(.env/环境变量) -> --config 文件 -> 环境变量端点覆盖 -> 命令行参数
    """

    model_config = ConfigDict(frozen=True)

    scorer: ScorerBackend = ScorerBackend()
    format: FormatConfig = FormatConfig()
    alignment: AlignmentConfig = AlignmentConfig()
    generation: GenerationConfig = GenerationConfig()
    concurrency: int = Field(default=8, ge=1)
    seed: int = 0
    dev_fraction: float = Field(default=DEFAULT_DEV_FRACTION, gt=0, lt=1)
    ngram_n: int = Field(default=4, ge=1)
    paths: PathsConfig = PathsConfig()

    @classmethod
    def from_settings(cls, s: Optional[Settings] = None) -> "ToolConfig":
        """从全局 Settings 构建默认配置"""
        return cls.model_validate(_settings_dict(s or settings))

    @classmethod
    def load(
        cls,
        path: Optional[Union[str, Path]] = None,
        s: Optional[Settings] = None,
        **overrides: Any,
    ) -> "ToolConfig":
        """加载配置：Settings 默认值 -> JSON 配置文件 -> 环境变量端点 -> 命令行覆盖

        Args:
            path: 配置文件路径（JSON，结构与 ToolConfig 一致），None 表示只用 Settings
            s: Settings 实例，默认使用全局实例
            **overrides: 命令行覆盖，键支持 "scorer.kind" 形式的嵌套写法，值为 None 时忽略

        Raises:
            FileNotFoundError: 配置文件不存在
            ValueError: 配置文件格式无效或校验失败（pydantic.ValidationError 是 ValueError 的子类）
        """
        data = _settings_dict(s or settings)
        if path is not None:
            config_path = Path(path)
            if not config_path.exists():
                raise FileNotFoundError(f"配置文件不存在: {config_path}")
            try:
                overlay = json.loads(config_path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as e:
                raise ValueError(f"配置文件格式无效，必须是合法的JSON: {e}") from e
            if not isinstance(overlay, dict):
                raise ValueError("配置文件顶层必须是 JSON 对象")
            data = _deep_merge(data, overlay)

        # 环境变量中的端点优先于配置文件
        scorer_endpoint = os.getenv("APS_SCORER_ENDPOINT")
        if scorer_endpoint:
            data["scorer"]["endpoint"] = scorer_endpoint
        gen_endpoint = os.getenv("APS_GEN_ENDPOINT")
        if gen_endpoint:
            data["generation"]["endpoint"] = gen_endpoint

        for dotted, value in overrides.items():
            if value is None:
                continue
            node = data
            keys = dotted.split(".")
            for key in keys[:-1]:
                node = node.setdefault(key, {})
            node[keys[-1]] = value

        # 对齐使用的打分后端与全局打分后端保持一致
        data.setdefault("alignment", {})["scorer"] = data["scorer"]
        return cls.model_validate(data)


def _settings_dict(s: Settings) -> Dict[str, Any]:
    scorer = {
        "kind": s.APS_SCORER,
        "endpoint": s.APS_SCORER_ENDPOINT,
        "timeout": s.APS_SCORER_TIMEOUT,
        "max_batch": s.APS_SCORER_MAX_BATCH,
        "cache_capacity": s.APS_CACHE_CAPACITY,
        "strict": s.APS_ORACLE_STRICT,
    }
    return {
        "scorer": scorer,
        "format": {},
        "alignment": {"tau": s.APS_TAU, "scorer": dict(scorer)},
        "generation": {
            "provider": s.APS_GEN_PROVIDER,
            "endpoint": s.APS_GEN_ENDPOINT,
            "model": s.APS_GEN_MODEL,
            "api_key": s.APS_GEN_API_KEY,
            "timeout": s.APS_GEN_TIMEOUT,
            "concurrency": s.APS_CONCURRENCY,
            "checkpoint_every": s.APS_CHECKPOINT_EVERY,
        },
        "concurrency": s.APS_CONCURRENCY,
        "seed": s.APS_SEED,
        "dev_fraction": s.APS_DEV_FRACTION,
        "ngram_n": s.APS_NGRAM_N,
        "paths": {},
    }


def _deep_merge(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged
