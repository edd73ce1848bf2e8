"""Small text helpers shared by several stages.

The simple tokenizer here is deliberately language-agnostic: identifiers and
numbers become single tokens, every other non-space character stands alone.
It is used for shingling, BLEU, greedy windowing and sample token budgets,
which all want robustness to reformatting rather than C-accurate lexing.
"""

from __future__ import annotations

import hashlib
import json
import re
from typing import Iterable, Iterator

_WORD_RE = re.compile(r"[A-Za-z0-9_]+|[^\sA-Za-z0-9_]")


def simple_tokens(text: str) -> list[str]:
    """Split into identifier/number words and single punctuation tokens."""
    return _WORD_RE.findall(text)


def simple_token_spans(text: str) -> list[tuple[int, int]]:
    """Like simple_tokens but returns (start, end) character offsets."""
    return [m.span() for m in _WORD_RE.finditer(text)]


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def hash64(text: str) -> int:
    """Stable 64-bit hash of a string (blake2b truncated)."""
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "big")


def write_jsonl(path, records: Iterable[dict]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True))
            fh.write("\n")
            n += 1
    return n


def read_jsonl(path) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
