"""
生成服务客户端

提供统一的 GenerationClient 接口，支持：
- http:      自建生成服务，POST {endpoint}/generate {"prompt", "temperature"} -> {"text"}
- openai:    OpenAI SDK（可选依赖）
- anthropic: Anthropic SDK（可选依赖）

可重试错误（连接失败、超时、429/5xx）按指数退避重试，最多 max_attempts 次。
"""

import asyncio
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Type

import aiohttp
from tenacity import AsyncRetrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from src.config.settings import GenerationConfig
from src.core.errors import ApsError
from src.monitoring.metrics import get_metrics

# AI SDK导入 (优雅降级)
try:
    import openai
    OPENAI_AVAILABLE = True
except ImportError:
    OPENAI_AVAILABLE = False
    openai = None

try:
    import anthropic
    ANTHROPIC_AVAILABLE = True
except ImportError:
    ANTHROPIC_AVAILABLE = False
    anthropic = None


class GenerationError(ApsError):
    """生成调用失败（不可重试）"""

    def __init__(self, message: str = "生成调用失败", **context: Any):
        super().__init__(message, **context)


class GenerationTransportError(GenerationError):
    """生成服务不可达、超时或限流（可重试）"""

    def __init__(self, message: str = "生成服务连接失败", **context: Any):
        super().__init__(message, **context)


@dataclass(frozen=True)
class GenerationRequest:
    """一次生成请求"""

    prompt: str
    temperature: float = 1.0
    max_attempts: int = 4

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature 不能为负数: {self.temperature}")
        if self.max_attempts < 1:
            raise ValueError(f"max_attempts 必须 >= 1: {self.max_attempts}")


class GenerationClient(ABC):
    """生成服务客户端抽象基类"""

    provider_name: str = "base"

    def __init__(self, model: str = "teacher", timeout: float = 120.0, retry_base: float = 0.5):
        self.model = model
        self.timeout = timeout
        self.retry_base = retry_base
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    async def _generate_once(self, request: GenerationRequest) -> str:
        """发起一次调用并返回生成的文本"""

    async def generate(self, request: GenerationRequest, purpose: str = "text") -> str:
        """
        生成文本（带重试）

        Args:
            request: 生成请求
            purpose: 调用目的，仅用于指标统计（domain, text, distill, fewshot）

        Raises:
            GenerationTransportError: 重试耗尽
            GenerationError: 不可重试的错误
        """
        metrics = get_metrics()
        retrying = AsyncRetrying(
            stop=stop_after_attempt(request.max_attempts),
            wait=wait_exponential(multiplier=self.retry_base, max=30),
            retry=retry_if_exception_type(GenerationTransportError),
            reraise=True,
        )
        try:
            text = await retrying(self._generate_once, request)
        except GenerationError:
            metrics.record_generation(self.provider_name, purpose, "error")
            raise
        metrics.record_generation(self.provider_name, purpose, "success")
        return text

    async def close(self) -> None:
        """释放连接（默认无操作）"""

    async def __aenter__(self) -> "GenerationClient":
        return self

    async def __aexit__(self, *exc) -> None:
        await self.close()


class HttpGenerationClient(GenerationClient):
    """自建 HTTP 生成服务客户端"""

    provider_name = "http"

    def __init__(self, endpoint: str, model: str = "teacher", timeout: float = 120.0, retry_base: float = 0.5):
        super().__init__(model=model, timeout=timeout, retry_base=retry_base)
        if not endpoint:
            raise ValueError("http 生成服务必须配置 endpoint（--gen-endpoint 或 APS_GEN_ENDPOINT）")
        self.url = f"{endpoint.rstrip('/')}/generate"
        self._session: Optional[aiohttp.ClientSession] = None

    def _get_session(self) -> aiohttp.ClientSession:
        if self._session is None or self._session.closed:
            self._session = aiohttp.ClientSession(timeout=aiohttp.ClientTimeout(total=self.timeout))
        return self._session

    async def _generate_once(self, request: GenerationRequest) -> str:
        body = {"prompt": request.prompt, "temperature": request.temperature}
        try:
            async with self._get_session().post(self.url, json=body) as response:
                status = response.status
                if status == 429 or status >= 500:
                    raise GenerationTransportError(f"服务返回 HTTP {status}", endpoint=self.url, status=status)
                if status >= 400:
                    raise GenerationError(f"服务返回 HTTP {status}", endpoint=self.url, status=status)
                try:
                    payload = await response.json(content_type=None)
                except ValueError as e:
                    raise GenerationError("响应不是合法的 JSON", endpoint=self.url) from e
        except (aiohttp.ClientConnectionError, asyncio.TimeoutError) as e:
            raise GenerationTransportError(f"请求失败: {e!r}", endpoint=self.url) from e

        if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
            raise GenerationError("响应缺少 text 字段", endpoint=self.url)
        return payload["text"]

    async def close(self) -> None:
        if self._session is not None and not self._session.closed:
            await self._session.close()


class OpenAIGenerationClient(GenerationClient):
    """OpenAI 兼容接口客户端"""

    provider_name = "openai"

    def __init__(
        self,
        api_key: Optional[str],
        model: str,
        base_url: Optional[str] = None,
        timeout: float = 120.0,
        retry_base: float = 0.5,
        max_tokens: int = 2048,
    ):
        super().__init__(model=model, timeout=timeout, retry_base=retry_base)
        self.max_tokens = max_tokens
        self._client = None
        if not OPENAI_AVAILABLE:
            self.logger.error("OpenAI SDK未安装,无法使用OpenAI")
            return
        if not api_key:
            self.logger.error("未配置 APS_GEN_API_KEY")
            return
        client_kwargs: Dict[str, Any] = {"api_key": api_key, "timeout": timeout}
        if base_url:
            client_kwargs["base_url"] = base_url
        self._client = openai.OpenAI(**client_kwargs)
        self.logger.info(f"OpenAI客户端初始化成功 | Base URL: {base_url or '默认'}")

    async def _generate_once(self, request: GenerationRequest) -> str:
        if self._client is None:
            raise GenerationError("OpenAI 客户端不可用", provider=self.provider_name)
        try:
            response = await asyncio.to_thread(
                self._client.chat.completions.create,
                model=self.model,
                messages=[{"role": "user", "content": request.prompt}],
                temperature=request.temperature,
                max_tokens=self.max_tokens,
            )
        except (openai.APIConnectionError, openai.RateLimitError, openai.InternalServerError) as e:
            raise GenerationTransportError(f"OpenAI API调用失败: {e}", provider=self.provider_name) from e
        except openai.OpenAIError as e:
            raise GenerationError(f"OpenAI API调用失败: {e}", provider=self.provider_name) from e
        return response.choices[0].message.content or ""


class AnthropicGenerationClient(GenerationClient):
    """Anthropic 接口客户端"""

    provider_name = "anthropic"

    def __init__(
        self,
        api_key: Optional[str],
        model: str,
        timeout: float = 120.0,
        retry_base: float = 0.5,
        max_tokens: int = 2048,
    ):
        super().__init__(model=model, timeout=timeout, retry_base=retry_base)
        self.max_tokens = max_tokens
        self._client = None
        if not ANTHROPIC_AVAILABLE:
            self.logger.error("Anthropic SDK未安装,无法使用Claude")
            return
        if not api_key:
            self.logger.error("未配置 APS_GEN_API_KEY")
            return
        self._client = anthropic.Anthropic(api_key=api_key, timeout=timeout)
        self.logger.info("Anthropic客户端初始化成功")

    async def _generate_once(self, request: GenerationRequest) -> str:
        if self._client is None:
            raise GenerationError("Anthropic 客户端不可用", provider=self.provider_name)
        try:
            response = await asyncio.to_thread(
                self._client.messages.create,
                model=self.model,
                max_tokens=self.max_tokens,
                temperature=request.temperature,
                messages=[{"role": "user", "content": request.prompt}],
            )
        except (anthropic.APIConnectionError, anthropic.RateLimitError, anthropic.InternalServerError) as e:
            raise GenerationTransportError(f"Anthropic API调用失败: {e}", provider=self.provider_name) from e
        except anthropic.AnthropicError as e:
            raise GenerationError(f"Anthropic API调用失败: {e}", provider=self.provider_name) from e
        return "".join(block.text for block in response.content if getattr(block, "type", None) == "text")


class GenerationClientFactory:
    """
    生成客户端工厂

    使用示例：
        ```python
        client = GenerationClientFactory.create(tool_config.generation)
        text = await client.generate(GenerationRequest(prompt="...", temperature=0))
        ```
    """

    _logger = logging.getLogger("GenerationClientFactory")

    _CLIENT_REGISTRY: Dict[str, Type[GenerationClient]] = {
        "http": HttpGenerationClient,
        "openai": OpenAIGenerationClient,
        "anthropic": AnthropicGenerationClient,
    }

    @classmethod
    def create(cls, cfg: GenerationConfig) -> GenerationClient:
        """
        根据配置创建客户端

        Raises:
            ValueError: 不支持的提供商或缺少必需配置
        """
        client_class = cls._CLIENT_REGISTRY.get(cfg.provider)
        if client_class is None:
            raise ValueError(
                f"不支持的生成服务提供商: {cfg.provider}\n"
                f"支持的提供商: {cls.get_supported_providers()}"
            )
        cls._logger.info(f"创建生成客户端: {cfg.provider} -> {client_class.__name__}")
        if client_class is HttpGenerationClient:
            return HttpGenerationClient(endpoint=cfg.endpoint, model=cfg.model, timeout=cfg.timeout)
        if client_class is OpenAIGenerationClient:
            return OpenAIGenerationClient(api_key=cfg.api_key, model=cfg.model, base_url=cfg.endpoint, timeout=cfg.timeout)
        if client_class is AnthropicGenerationClient:
            return AnthropicGenerationClient(api_key=cfg.api_key, model=cfg.model, timeout=cfg.timeout)
        return client_class(model=cfg.model, timeout=cfg.timeout)

    @classmethod
    def register_client(cls, provider: str, client_class: type) -> None:
        """注册新的生成客户端（用于扩展和测试）"""
        if not issubclass(client_class, GenerationClient):
            raise TypeError(f"{client_class.__name__} 必须继承自 GenerationClient")
        cls._CLIENT_REGISTRY[provider] = client_class
        cls._logger.info(f"注册生成客户端: {provider} -> {client_class.__name__}")

    @classmethod
    def get_supported_providers(cls) -> List[str]:
        return list(cls._CLIENT_REGISTRY.keys())
