"""
synth 子命令集成测试

生成服务由 ScriptedClient 代替，命令行参数、检查点和输出文件走真实路径。
"""

import json
import re

import pytest

from src.cli.commands import EXIT_ITEM_ERRORS, EXIT_OK
from src.main import main
from src.synthgen.corpus import SyntheticText
from src.synthgen.generation_client import GenerationClientFactory
from src.synthgen.prompts import Length, SeedExample
from tests.fixtures.generation import ScriptedClient
from tests.fixtures.passages import make_corpus_records
from tests.integration.conftest import read_jsonl, write_jsonl

SENTENCE_TAGS = re.compile(r"<s>(.*?)</s>", re.S)

SEEDS = [
    SeedExample("news article", Length.SHORT, "The council approved the new budget."),
    SeedExample("product review", Length.PARAGRAPH, "Fits well. Light weight. Great for running."),
]

# 第二条与种子领域重复，第三条与第一条只差大小写和空白
DOMAIN_REPLIES = ["Recipes", "news article", "recipes ", "Legal contract", "Sports report"]


def corpus_responder():
    domains = list(DOMAIN_REPLIES)

    def _respond(prompt):
        if prompt.endswith("\nDomain:"):
            return domains.pop(0)
        lines = prompt.splitlines()
        domain = lines[-3][len("Domain: "):]
        length = lines[-2][len("Length: "):]
        # 模型继续写下一个示例块时应被截断
        return f" A {length} sample written for {domain}.\nDomain: next"

    return _respond


def teacher_responder(prompt):
    if "Broken" in prompt:
        return "<s>- Broken output."
    return "".join(f"<s>- {s}</s>" for s in SENTENCE_TAGS.findall(prompt))


@pytest.fixture
def seeds_file(tmp_path):
    return write_jsonl(tmp_path / "seeds.jsonl", [s.to_dict() for s in SEEDS])


def _use_client(mocker, client):
    mocker.patch.object(GenerationClientFactory, "create", return_value=client)
    return client


class TestSynthCorpusCommand:
    """测试 synth corpus 子命令"""

    def _run(self, seeds_file, tmp_path):
        return main(
            [
                "synth", "corpus", "--seeds", str(seeds_file), "--n-calls", "5", "--concurrency", "1",
                "--checkpoint", str(tmp_path / "ckpt.json"), "--output", str(tmp_path / "corpus.jsonl"),
                "--dropped", str(tmp_path / "dropped.jsonl"),
            ]
        )

    def test_domains_deduped_and_texts_generated(self, seeds_file, tmp_path, capsys, mocker):
        _use_client(mocker, ScriptedClient(corpus_responder()))
        assert self._run(seeds_file, tmp_path) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {"domains": 3, "kept": 6, "dropped": 0, "failed_calls": 0}

        rows = read_jsonl(tmp_path / "corpus.jsonl")
        assert [(r["domain"], r["length"]) for r in rows] == [
            ("Legal contract", "short"),
            ("Legal contract", "paragraph"),
            ("Recipes", "short"),
            ("Recipes", "paragraph"),
            ("Sports report", "short"),
            ("Sports report", "paragraph"),
        ]
        assert rows[2]["text"] == "A short sample written for Recipes."
        assert read_jsonl(tmp_path / "dropped.jsonl") == []

    def test_rerun_resumes_from_checkpoint(self, seeds_file, tmp_path, capsys, mocker):
        """同一检查点重跑时不再调用生成服务"""
        _use_client(mocker, ScriptedClient(corpus_responder()))
        assert self._run(seeds_file, tmp_path) == EXIT_OK
        first = (tmp_path / "corpus.jsonl").read_text(encoding="utf-8")
        capsys.readouterr()

        client = _use_client(mocker, ScriptedClient(lambda prompt: RuntimeError("不应再调用")))
        assert self._run(seeds_file, tmp_path) == EXIT_OK
        assert client.prompts == []
        assert (tmp_path / "corpus.jsonl").read_text(encoding="utf-8") == first


class TestSynthDistillCommand:
    """测试 synth distill 子命令"""

    def test_broken_teacher_output_quarantined(self, tmp_path, capsys, mocker):
        texts = write_jsonl(
            tmp_path / "texts.jsonl",
            [
                SyntheticText("recipes", Length.SHORT, 0, "Boil water. Add the pasta.").to_dict(),
                SyntheticText("recipes", Length.SHORT, 1, "Broken teacher. Second sentence.").to_dict(),
            ],
        )
        _use_client(mocker, ScriptedClient(teacher_responder))
        output = tmp_path / "distilled.jsonl"
        quarantine = tmp_path / "quarantine.jsonl"
        code = main(
            [
                "synth", "distill", "--input", str(texts), "--output", str(output),
                "--quarantine", str(quarantine), "--teacher-id", "stub-teacher",
            ]
        )
        assert code == EXIT_ITEM_ERRORS
        assert json.loads(capsys.readouterr().out) == {"records": 1, "quarantined": 1}

        [record] = read_jsonl(output)
        assert record["target"] == "<s>- Boil water.</s><s>- Add the pasta.</s>"
        assert record["teacher_id"] == "stub-teacher"
        [entry] = read_jsonl(quarantine)
        assert entry["source_id"] == "recipes/short/1"
        assert entry["error_type"] == "UnbalancedTokens"
        assert entry["raw_response"] == "<s>- Broken output."


class TestSynthFewshotCommand:
    """测试 synth fewshot 子命令"""

    def test_predictions_in_query_order(self, tmp_path, capsys, mocker):
        pool_rows = [dict(r, id=f"pool-{i}") for i, r in enumerate(make_corpus_records(6, seed=6))]
        pool = write_jsonl(tmp_path / "pool.jsonl", pool_rows)
        queries = write_jsonl(tmp_path / "queries.jsonl", make_corpus_records(4, seed=5))
        client = _use_client(mocker, ScriptedClient(lambda prompt: "- First fact.\n- Second fact."))

        output = tmp_path / "predictions.jsonl"
        code = main(
            [
                "synth", "fewshot", "--input", str(queries), "--output", str(output), "--pool", str(pool),
                "--k", "2", "--concurrency", "3",
            ]
        )
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {"predictions": 4, "failed": 0}

        rows = read_jsonl(output)
        assert [r["id"] for r in rows] == ["ex-000", "ex-001", "ex-002", "ex-003"]
        assert all(r["propositions"] == ["First fact.", "Second fact."] for r in rows)
        assert all(r["grouped"] is False for r in rows)
        assert len(client.prompts) == 4
        assert all(prompt.count("Passage: ") == 3 for prompt in client.prompts)
