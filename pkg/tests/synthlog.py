"""Seeded synthetic completion-log generator.

The generator is designed so the per-entry adoption probability is affine in
the prefix-match length (p = BASE + SLOPE * lcp), day quality drifts upward
over the window, and prediction tails contain partial subsequence matches.
That makes daily mean LCP the true driver of the daily adoption rate, with
LCS/ROUGE-L picking up extra tail noise and EM staying rare and noisy.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from corpusforge.adoption import CompletionLogEntry

ADOPT_BASE = 0.02
ADOPT_SLOPE = 0.012
ALPHABET = "abcdefghijklmnopqrstuvwxyz_();=."


def adoption_probability(lcp_value: int) -> float:
    return min(0.95, max(0.0, ADOPT_BASE + ADOPT_SLOPE * lcp_value))


def generate_entries(seed: int = 11, days: int = 30, per_day: int = 220,
                     start: datetime | None = None) -> list[CompletionLogEntry]:
    rng = random.Random(seed)
    base = start or datetime(2025, 3, 3, tzinfo=timezone.utc)
    entries = []
    for d in range(days):
        quality = 0.2 + 0.6 * d / (days - 1) + rng.uniform(-0.04, 0.04)
        # day-level nuisance factors: they shift reference lengths and tail
        # subsequence matches without touching adoption, so only the prefix
        # metric stays cleanly aligned with the adoption rate
        rlen_center = rng.randint(32, 48)
        tail_match = rng.uniform(0.15, 0.85)
        tail_frac = rng.uniform(0.3, 1.0)
        for i in range(per_day):
            rlen = rng.randint(rlen_center - 12, rlen_center + 12)
            reference = "".join(rng.choice(ALPHABET) for _ in range(rlen))
            frac = max(0.0, min(1.0, quality * rng.uniform(0.5, 1.5)))
            k = min(rlen, int(frac * rlen))
            if rng.random() < 0.04 * quality or k >= rlen:
                prediction = reference
                k = rlen
            else:
                wrong = "#" if reference[k] != "#" else "@"
                rest = reference[k + 1 :]
                tail_budget = int(tail_frac * len(rest))
                tail = [c for c in rest if rng.random() < tail_match][:tail_budget]
                while len(tail) < tail_budget:
                    tail.append(rng.choice(ALPHABET))
                prediction = reference[:k] + wrong + "".join(tail)
            adopted = rng.random() < adoption_probability(k)
            ts = base + timedelta(days=d, seconds=(i * 137) % 86000)
            entries.append(
                CompletionLogEntry(
                    ts=ts,
                    trigger="newline" if i % 3 else "dot",
                    lang="c" if i % 2 else "cpp",
                    prediction=prediction,
                    context=f"void fn_{d}_{i}(void) {{\n    ",
                    reference=reference,
                    adopted=adopted,
                )
            )
    return entries


def entries_to_jsonl_lines(entries: list[CompletionLogEntry]) -> list[str]:
    import json

    lines = []
    for e in entries:
        lines.append(json.dumps({
            "ts": e.ts.isoformat(),
            "trigger": e.trigger,
            "lang": e.lang,
            "prediction": e.prediction,
            "context": e.context,
            "reference": e.reference,
            "adopted": e.adopted,
        }, ensure_ascii=False))
    return lines
