from src.synthgen.corpus import (
    Checkpoint,
    CheckpointWriter,
    CorpusGenerator,
    CorpusResult,
    SyntheticText,
    generate_corpus,
)
from src.synthgen.distill import (
    DistillationRecord,
    DistillationResult,
    QuarantineEntry,
    build_distillation_records,
)
from src.synthgen.fewshot import build_fewshot_prompt, run_fewshot, select_fewshot_examples
from src.synthgen.generation_client import (
    GenerationClient,
    GenerationClientFactory,
    GenerationError,
    GenerationRequest,
    GenerationTransportError,
)
from src.synthgen.ngram_filter import NgramIndex, ngram_overlap_filter
from src.synthgen.prompts import Length, PromptBuilder, SeedExample, build_domain_prompt, build_text_prompt, load_seeds

__all__ = [
    "Checkpoint",
    "CheckpointWriter",
    "CorpusGenerator",
    "CorpusResult",
    "SyntheticText",
    "generate_corpus",
    "DistillationRecord",
    "DistillationResult",
    "QuarantineEntry",
    "build_distillation_records",
    "build_fewshot_prompt",
    "run_fewshot",
    "select_fewshot_examples",
    "GenerationClient",
    "GenerationClientFactory",
    "GenerationError",
    "GenerationRequest",
    "GenerationTransportError",
    "NgramIndex",
    "ngram_overlap_filter",
    "Length",
    "PromptBuilder",
    "SeedExample",
    "build_domain_prompt",
    "build_text_prompt",
    "load_seeds",
]
