"""
合成数据提示词与 n-gram 过滤测试
"""
import json
import random

import pytest

from src.core.errors import DatasetFormatError
from src.core.segmentation import tokenize
from src.synthgen.ngram_filter import NgramIndex, ngram_overlap_filter, ngrams
from src.synthgen.prompts import (
    PROMPT_HEADER,
    Length,
    PromptBuilder,
    SeedExample,
    build_domain_prompt,
    build_text_prompt,
    load_seeds,
    normalize_domain,
)
from tests.fixtures.passages import VOCAB

SEEDS = [
    SeedExample("news article", Length.SHORT, "The council approved the new budget."),
    SeedExample("product review", Length.PARAGRAPH, "Fits well. Light weight. Great for running."),
]


class TestSeedExample:
    def test_blank_domain_rejected(self):
        with pytest.raises(ValueError):
            SeedExample(" ", Length.SHORT, "text")

    def test_unknown_length_rejected(self):
        with pytest.raises(ValueError):
            SeedExample.from_dict({"domain": "a", "length": "novel", "text": "x"})

    def test_load_seeds(self, tmp_path):
        path = tmp_path / "seeds.jsonl"
        path.write_text("\n".join(json.dumps(s.to_dict()) for s in SEEDS) + "\n", encoding="utf-8")
        assert load_seeds(path) == SEEDS

    def test_load_seeds_reports_line(self, tmp_path):
        path = tmp_path / "seeds.jsonl"
        path.write_text(json.dumps(SEEDS[0].to_dict()) + '\n{"domain": "x", "length": "short", "text": ""}\n', encoding="utf-8")
        with pytest.raises(DatasetFormatError) as exc_info:
            load_seeds(path)
        assert exc_info.value.context["line"] == 2


class TestPromptBuilder:
    """测试提示词构建与响应解析"""

    def test_domain_prompt(self):
        prompt = build_domain_prompt(SEEDS)
        assert prompt.startswith(PROMPT_HEADER)
        assert "Domain: news article\nLength: short\nText: The council approved the new budget." in prompt
        assert prompt.index("news article") < prompt.index("product review")
        assert prompt.endswith("\n\nDomain:")

    def test_text_prompt(self):
        prompt = build_text_prompt(SEEDS, "recipes", Length.PARAGRAPH)
        assert prompt.endswith("\n\nDomain: recipes\nLength: paragraph\nText:")

    def test_text_prompt_requires_domain(self):
        with pytest.raises(ValueError):
            build_text_prompt(SEEDS, "", Length.SHORT)

    def test_empty_seeds(self):
        with pytest.raises(ValueError):
            build_domain_prompt([])

    @pytest.mark.parametrize(
        "response,expected",
        [
            (" Recipes\nLength: short", "Recipes"),
            ("\n\nDomain: legal contract.", "legal contract"),
            ('"Sports report"', "Sports report"),
            ("   \n", None),
            ("x" * 200, None),
        ],
    )
    def test_parse_domain_response(self, response, expected):
        assert PromptBuilder.parse_domain_response(response) == expected

    def test_parse_text_response_stops_at_next_block(self):
        response = " Boil the pasta. Drain it.\nDomain: recipes\nLength: short\nText: more"
        assert PromptBuilder.parse_text_response(response) == "Boil the pasta. Drain it."

    def test_parse_empty_text(self):
        assert PromptBuilder.parse_text_response("  \n") is None

    def test_normalize_domain(self):
        assert normalize_domain("  News   Article ") == "news article"


class TestNgramFilter:
    """测试 n-gram 重叠过滤"""

    def test_shared_four_gram_dropped(self):
        seeds = ["The council approved the new budget on Monday."]
        kept, dropped = ngram_overlap_filter(
            ["Yesterday the council approved the plan.", "The council met. It approved nothing."], seeds, n=4
        )
        assert dropped == ["Yesterday the council approved the plan."]
        assert kept == ["The council met. It approved nothing."]

    def test_case_and_punctuation_ignored(self):
        index = NgramIndex(["Fits well, light weight."], n=3)
        assert index.overlaps("FITS WELL LIGHT")

    def test_short_text_never_overlaps(self):
        index = NgramIndex(["a b c d e"], n=4)
        assert not index.overlaps("a b c")

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            NgramIndex([], n=0)

    @pytest.mark.parametrize("n", [1, 3, 4, 7])
    def test_matches_brute_force(self, n):
        """与逐个比较 n 元组的实现一致"""
        rng = random.Random(n)
        seeds = [" ".join(rng.choices(VOCAB[:8], k=rng.randint(3, 12))) for _ in range(5)]
        candidates = [" ".join(rng.choices(VOCAB[:8], k=rng.randint(1, 12))) for _ in range(200)]
        kept, dropped = ngram_overlap_filter(candidates, seeds, n=n)

        seed_grams = set()
        for seed in seeds:
            tokens = tokenize(seed)
            seed_grams |= {tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)}
        expected_dropped = [
            c for c in candidates
            if any(tuple(tokenize(c)[i:i + n]) in seed_grams for i in range(len(tokenize(c)) - n + 1))
        ]
        assert dropped == expected_dropped
        assert kept == [c for c in candidates if c not in expected_dropped]

    def test_ngrams(self):
        assert ngrams(["a", "b", "c"], 2) == {("a", "b"), ("b", "c")}
        assert ngrams(["a"], 2) == set()
