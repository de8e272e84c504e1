"""
测试用段落与数据集

对齐玩具语料的预期结果是在词汇 oracle、tau=0.9 下手工推算的。
"""

BOOKS_PASSAGE = (
    "The price of the books are all less than ten dollars, "
    "and they download before you can get up for a cup of coffee."
)
BOOKS_PRICE = "The price of the books are all less than ten dollars."
BOOKS_DOWNLOAD = "The books download before you can get up for a cup of coffee."
BOOKS_THEY_DOWNLOAD = "They download before you can get up for a cup of coffee."

BOAR_PASSAGE = (
    "Packs of wild boar are hunting newborn lambs in Britain, experts claim. "
    "Boar at the Forest of Dean usually feed only on plants and dead animals. "
    "But in recent weeks, groups of boar have reportedly killed four lambs. "
    "Serious implications for animal health and spread of disease, vet says."
)

WEMBLEY_PASSAGE = (
    "Wembley was almost full for England's 4-0 win over Lithunia. "
    "Raheem Sterling linked well with Wayne Rooney and Danny Welbeck. "
    "Roy Hodgson must prepare his side for the stiffer tests at Euro 2016. "
    "Italy are a different proposition to the side that beat England last summer."
)

# (id, 段落, 原始 ACU, 预期状态)
TOY_CORPUS = [
    (
        "clean",
        "The cat sat on the mat. The dog barked loudly.",
        ["The cat sat on the mat.", "The dog barked loudly."],
        "aligned",
    ),
    (
        "prefix",
        "Alice bought apples. Bob ate them quickly.",
        ["Alice bought apples.", "Bob ate them quickly.", "Apples Alice bought, Bob ate them."],
        "aligned",
    ),
    (
        "unsupported",
        "The sun is bright. The sky is blue.",
        ["The sun is bright.", "The sky is blue.", "Penguins live in Antarctica."],
        "unsupported",
    ),
    (
        "wembley",
        WEMBLEY_PASSAGE,
        ["Wembley was almost full.", "England's win was 4-0.", "England's win was over Lithunia."],
        "non_comprehensive",
    ),
    (
        "tie",
        "Birds sing at dawn. At dawn, birds sing loudly.",
        ["Birds sing at dawn.", "Birds sing loudly."],
        "aligned",
    ),
    (
        "single",
        "Water boils at high temperatures.",
        ["Water boils.", "Water boils at high temperatures"],
        "aligned",
    ),
]

# 对齐后的分组标注
TOY_ALIGNED_GROUPS = {
    "clean": [["The cat sat on the mat."], ["The dog barked loudly."]],
    "prefix": [["Alice bought apples."], ["Bob ate them quickly.", "Apples Alice bought, Bob ate them."]],
    "tie": [["Birds sing at dawn."], ["Birds sing loudly."]],
    "single": [["Water boils at high temperatures."]],
}

# 生成随机段落用的词表（不含缩写，避免影响分句）
VOCAB = [
    "river", "stone", "garden", "window", "market", "teacher", "engine", "forest",
    "yellow", "quiet", "travel", "winter", "coffee", "planet", "silver", "bridge",
    "music", "harbor", "candle", "orange", "valley", "paper", "rocket", "pencil",
]


def make_sentence(words):
    """把词列表拼成首字母大写、句点结尾的句子"""
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def make_corpus_records(n, seed=0):
    """生成 n 条随机样本记录（JSONL 行）"""
    import random

    rng = random.Random(seed)
    records = []
    for i in range(n):
        sentences = [
            make_sentence(rng.sample(VOCAB, rng.randint(2, 5)))
            for _ in range(rng.randint(1, 4))
        ]
        props = [make_sentence(rng.sample(VOCAB, rng.randint(1, 4))) for _ in range(rng.randint(1, 4))]
        records.append({"id": f"ex-{i:03d}", "text": " ".join(sentences), "propositions": props})
    return records
