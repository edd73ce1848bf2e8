"""Per-sample completion metrics.

Covers the prefix-based pair (lcp, rouge_lcp), the classic baselines
(lcs, rouge_l, exact match, bleu), and the conditional-probability model
of the prefix-length distribution.  All functions are pure; strings are
compared at Unicode scalar value granularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EmptyReference, IndexOutOfRange
from .textutil import simple_tokens


@dataclass(frozen=True)
class MetricValue:
    """All metric values for one (prediction S, reference R) pair.

    ``em`` is strict equality of S and R (the exact-match component of the
    mixed distribution); the standalone :func:`exact_match` additionally
    forgives trailing whitespace.  ``s_ext_len`` is the length of output
    beyond the reference and is nonzero only when the full reference is a
    proper prefix of the output; in that case ``rouge_lcp`` exceeds 1.
    """

    lcp: int
    rouge_lcp: float
    lcs: int
    rouge_l: float
    em: bool
    bleu: float
    s_ext_len: int = 0


def lcp(s: str, r: str) -> int:
    """Length of the longest common prefix of s and r, in characters."""
    n = min(len(s), len(r))
    i = 0
    while i < n and s[i] == r[i]:
        i += 1
    return i


def rouge_lcp(s: str, r: str) -> float:
    """LCP normalized by reference length, with the extension case.

    Three cases:
      * prefix diverges before the reference ends -> lcp/|R| in [0, 1)
      * S == R                                    -> exactly 1.0
      * R is a proper prefix of S                 -> |S|/|R| > 1.0
    """
    if not r:
        raise EmptyReference("rouge_lcp needs a non-empty reference")
    k = lcp(s, r)
    if k < len(r):
        return k / len(r)
    if s == r:
        return 1.0
    return (k + (len(s) - len(r))) / len(r)


def s_ext_len(s: str, r: str) -> int:
    """Output length beyond the reference when R is a proper prefix of S."""
    if r and s != r and lcp(s, r) == len(r):
        return len(s) - len(r)
    return 0


def lcs_len(s: str, r: str) -> int:
    """Character-level longest common subsequence length (O(|s|*|r|) DP)."""
    if not s or not r:
        return 0
    # one-row DP; iterate the shorter string in the inner loop
    if len(r) > len(s):
        s, r = r, s
    prev = [0] * (len(r) + 1)
    for ch in s:
        cur = [0]
        best = 0
        for j, rch in enumerate(r, start=1):
            if ch == rch:
                best = prev[j - 1] + 1
            else:
                best = max(prev[j], cur[j - 1])
            cur.append(best)
        prev = cur
    return prev[-1]


def rouge_l(s: str, r: str, mode: str = "recall", beta: float = 1.0) -> float:
    """LCS-based score: recall LCS/|R| by default, F-measure behind a flag."""
    if not r:
        raise EmptyReference("rouge_l needs a non-empty reference")
    l = lcs_len(s, r)
    recall = l / len(r)
    if mode == "recall":
        return recall
    if mode == "fmeasure":
        if not s or l == 0:
            return 0.0
        precision = l / len(s)
        b2 = beta * beta
        return (1 + b2) * recall * precision / (recall + b2 * precision)
    raise ValueError(f"unknown rouge_l mode {mode!r}")


def exact_match(s: str, r: str) -> bool:
    """Equality after stripping trailing whitespace from both sides only."""
    return s.rstrip() == r.rstrip()


def _ngram_counts(tokens: list[str], n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i : i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def bleu(s: str, r: str, max_n: int = 4) -> float:
    """Token-level BLEU with uniform weights, brevity penalty, and add-one
    smoothing on n-grams of order >= 2."""
    hyp = simple_tokens(s)
    ref = simple_tokens(r)
    if not hyp or not ref:
        return 1.0 if hyp == ref else 0.0
    log_sum = 0.0
    orders = 0
    for n in range(1, max_n + 1):
        hc = _ngram_counts(hyp, n)
        if not hc:
            break
        rc = _ngram_counts(ref, n)
        match = sum(min(c, rc.get(g, 0)) for g, c in hc.items())
        total = sum(hc.values())
        if n == 1:
            if match == 0:
                return 0.0
            p = match / total
        else:
            p = (match + 1) / (total + 1)
        log_sum += math.log(p)
        orders += 1
    if orders == 0:
        return 0.0
    geo = math.exp(log_sum / orders)
    bp = 1.0 if len(hyp) >= len(ref) else math.exp(1 - len(ref) / len(hyp))
    return bp * geo


def compute_all(s: str, r: str, max_n: int = 4) -> MetricValue:
    """Evaluate every metric for one pair; requires a non-empty reference."""
    k = lcp(s, r)
    return MetricValue(
        lcp=k,
        rouge_lcp=rouge_lcp(s, r),
        lcs=lcs_len(s, r),
        rouge_l=rouge_l(s, r),
        em=s == r,
        bleu=bleu(s, r, max_n=max_n),
        s_ext_len=s_ext_len(s, r),
    )


@dataclass(frozen=True)
class LcpDistributionModel:
    """Conditional per-position correctness probabilities p_t for t = 1..T.

    p_t is the probability that position t matches given all earlier
    positions matched; the prefix-length distribution follows from the
    product of the p_t with a single failure term.
    """

    cond_probs: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for p in self.cond_probs:
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"conditional probability {p} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.cond_probs)


def lcp_pmf(model: LcpDistributionModel, k: int) -> float:
    """P(prefix length == k) = (prod_{t<=k} p_t) * (1 - p_{k+1})."""
    if k < 0 or k >= len(model.cond_probs):
        raise IndexOutOfRange(f"k={k} outside [0, {len(model.cond_probs) - 1}]")
    prod = 1.0
    for t in range(k):
        prod *= model.cond_probs[t]
    return prod * (1.0 - model.cond_probs[k])


def lcp_survival(model: LcpDistributionModel) -> float:
    """Probability that every modeled position matches (no failure in 1..T)."""
    prod = 1.0
    for p in model.cond_probs:
        prod *= p
    return prod
