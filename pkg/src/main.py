"""
APS 工具集命令行主程序

路径处理：
- 支持 python -m src.main（推荐）
- 支持 python src/main.py（兼容）
- 安装后通过 aps 命令调用
"""
import platform
import sys
from pathlib import Path
from typing import Optional, Sequence

# 确保项目根目录在 sys.path 中，支持多种运行方式
project_root = Path(__file__).resolve().parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from src.cli.commands import EXIT_CONFIG_ERROR, config_overrides
from src.cli.parser import build_parser
from src.config.settings import ToolConfig, settings
from src.core.errors import ApsError
from src.utils.logging_config import get_logger, setup_structlog

logger = get_logger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    解析参数、加载配置并执行子命令

    Returns:
        退出码：0 成功，1 部分样本出错，2 配置或文件错误
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_structlog(args.log_level or settings.LOG_LEVEL, args.log_file or settings.LOG_FILE)
    command = args.command if args.command != "synth" else f"synth {args.synth_command}"

    try:
        cfg = ToolConfig.load(args.config, **config_overrides(args))
    except (OSError, ValueError) as e:
        logger.error("config_invalid", command=command, error=str(e))
        return EXIT_CONFIG_ERROR

    logger.info("command_started", command=command, platform=platform.system())
    try:
        exit_code = args.handler(args, cfg)
    except (OSError, ValueError, ApsError) as e:
        # 文件缺失、格式错误、数据集无效等统一按配置/IO 错误处理
        logger.error("command_failed", command=command, error=str(e), error_type=type(e).__name__)
        return EXIT_CONFIG_ERROR
    logger.info("command_finished", command=command, exit_code=exit_code)
    return exit_code


def cli() -> None:
    """安装后的 aps 命令入口"""
    sys.exit(main())


if __name__ == "__main__":
    cli()
