"""训练/推理格式模块"""

from src.formats.errors import (
    EmptyGold,
    EmptyGroup,
    FormatError,
    GroupCountMismatch,
    NoPropositionsFound,
    TokenCollision,
    UnbalancedTokens,
)
from src.formats.training_format import (
    DEFAULT_FORMAT,
    TrainingRecord,
    parse_grouped_output,
    parse_ungrouped_output,
    render_grouped,
    render_grouped_input,
    render_records,
    render_ungrouped,
    validate_grouped_input,
)

__all__ = [
    "DEFAULT_FORMAT",
    "EmptyGold",
    "EmptyGroup",
    "FormatError",
    "GroupCountMismatch",
    "NoPropositionsFound",
    "TokenCollision",
    "TrainingRecord",
    "UnbalancedTokens",
    "parse_grouped_output",
    "parse_ungrouped_output",
    "render_grouped",
    "render_grouped_input",
    "render_records",
    "render_ungrouped",
    "validate_grouped_input",
]
