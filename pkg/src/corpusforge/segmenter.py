"""Semantic-unit extraction and structure-aligned FIM sample construction.

Units are syntactically closed subtrees (functions, record types, branches,
loops, macro definitions).  A FIM sample masks one unit's span; because unit
spans are token- and bracket-aligned, splicing a mask over a whole unit
cannot introduce new parse errors, which keeps sample cutting linear in the
tree size.  The token-window greedy baseline is included for structural
preservation comparisons.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass

from .cparser import CONSTRUCT_KINDS, SyntaxTree, parse
from .errors import UnsupportedLanguage
from .pipeline import RawFile
from .textutil import hash64, simple_token_spans

log = logging.getLogger(__name__)

KIND_FUNCTION = "FunctionDef"
KIND_RECORD = "RecordTypeDef"
KIND_CLASS = "ClassDef"
KIND_BRANCH = "ConditionalBranch"
KIND_LOOP = "LoopBody"
KIND_MACRO = "MacroDef"
KIND_GREEDY = "GreedyWindow"

_LANG_MAP = {"C": "c", "CPP": "cpp"}

# counts one unit of work per token lexed / node visited; used by the
# linear-complexity tests
_ops = 0


def reset_ops() -> None:
    global _ops
    _ops = 0


def get_ops() -> int:
    return _ops


@dataclass(frozen=True)
class SemanticUnit:
    id: str
    kind: str
    file: str
    start: int
    end: int
    name: str | None
    node_count: int
    token_count: int

    @property
    def byte_span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class FimSample:
    prefix: str
    target: str
    suffix: str
    mask_token: str
    source_file: str
    unit_id: str
    unit_kind: str
    unit_span: tuple[int, int]

    @property
    def input_text(self) -> str:
        return self.prefix + self.mask_token + self.suffix

    def reconstruct(self) -> str:
        return self.prefix + self.target + self.suffix


@dataclass(frozen=True)
class GranularityRange:
    theta_min: int
    theta_max: int
    unit: str = "Tokens"  # or "Nodes"

    def __post_init__(self):
        if not (0 < self.theta_min <= self.theta_max):
            raise ValueError("need 0 < theta_min <= theta_max")
        if self.unit not in ("Tokens", "Nodes"):
            raise ValueError(f"unknown granularity unit {self.unit!r}")


def parse_to_ast(file: RawFile) -> SyntaxTree:
    """Parse a cleaned C/C++ file into a concrete syntax tree."""
    global _ops
    lang = _LANG_MAP.get(file.language)
    if lang is None:
        raise UnsupportedLanguage(f"{file.path}: language {file.language!r}")
    tree = parse(file.content, lang)
    _ops += len(tree.tokens) + tree.node_count
    return tree


def extract_semantic_units(tree: SyntaxTree, file_path: str = "") -> list[SemanticUnit]:
    """All semantic units of the tree in document (depth-first) order."""
    global _ops
    units = []
    visited = 0
    for node in tree.root.walk():
        visited += 1
        kind = CONSTRUCT_KINDS.get(node.type)
        if kind is None or node.end <= node.start:
            continue
        units.append(
            SemanticUnit(
                id=f"{file_path}:{node.start}-{node.end}",
                kind=kind,
                file=file_path,
                start=node.start,
                end=node.end,
                name=node.name,
                node_count=node.subtree_size,
                token_count=tree.count_code_tokens(node.start, node.end),
            )
        )
    _ops += visited
    units.sort(key=lambda u: (u.start, -u.end))
    return units


def check_completeness(file_text: str, unit: SemanticUnit, mask_token: str = "<mask>") -> bool:
    """True iff masking the unit's span introduces no new error nodes
    relative to the original parse (pre-existing errors are tolerated)."""
    global _ops
    original = parse(file_text)
    masked_text = file_text[: unit.start] + mask_token + file_text[unit.end :]
    masked = parse(masked_text)
    _ops += len(original.tokens) + original.node_count
    _ops += len(masked.tokens) + masked.node_count
    return masked.error_count <= original.error_count


def _unit_size(unit: SemanticUnit, granularity: GranularityRange) -> int:
    return unit.token_count if granularity.unit == "Tokens" else unit.node_count


def cut_fim_samples(
    file: RawFile,
    granularity: GranularityRange,
    mask_token: str = "<mask>",
    rng_seed: int = 0,
    sample_rate: float = 1.0,
    verify: bool = False,
) -> list[FimSample]:
    """Emit structure-aligned FIM samples for every accepted semantic unit.

    A unit is a candidate when its size lies in [theta_min, theta_max]; each
    candidate is accepted when its size is at most a granularity cap drawn
    uniformly from the range, so small units are favored and the corpus
    mixes scales.  Deterministic for a fixed seed.

    Unit spans are token- and bracket-aligned whole subtrees, so masking them
    cannot create new parse errors; the explicit completeness re-check runs
    only when the file already has error nodes (or when verify=True).
    """
    tree = parse_to_ast(file)
    units = extract_semantic_units(tree, file.path)
    rng = random.Random(rng_seed)
    text = file.content
    must_check = verify or tree.error_count > 0
    samples = []
    for unit in units:
        size = _unit_size(unit, granularity)
        if not (granularity.theta_min <= size <= granularity.theta_max):
            continue
        theta = rng.randint(granularity.theta_min, granularity.theta_max)
        if size > theta:
            continue
        if sample_rate < 1.0 and rng.random() >= sample_rate:
            continue
        if must_check and not check_completeness(text, unit, mask_token):
            continue
        samples.append(
            FimSample(
                prefix=text[: unit.start],
                target=text[unit.start : unit.end],
                suffix=text[unit.end :],
                mask_token=mask_token,
                source_file=file.path,
                unit_id=unit.id,
                unit_kind=unit.kind,
                unit_span=(unit.start, unit.end),
            )
        )
    if not samples:
        log.debug("no eligible units in %s", file.path)
    return samples


def greedy_cut_baseline(text: str, window: int, source_file: str = "") -> list[FimSample]:
    """Token-window baseline: partition the token stream into ceil(L/window)
    contiguous segments, one sample per segment."""
    if window < 1:
        raise ValueError("window must be >= 1")
    spans = simple_token_spans(text)
    total = len(spans)
    if total == 0:
        return []
    k = math.ceil(total / window)
    boundaries = [0]
    boundaries.extend(spans[i * window][0] for i in range(1, k))
    boundaries.append(len(text))
    samples = []
    for i in range(k):
        s, e = boundaries[i], boundaries[i + 1]
        samples.append(
            FimSample(
                prefix=text[:s],
                target=text[s:e],
                suffix=text[e:],
                mask_token="<mask>",
                source_file=source_file,
                unit_id=f"{source_file}#greedy{i}",
                unit_kind=KIND_GREEDY,
                unit_span=(s, e),
            )
        )
    return samples


def structural_preservation_rate(samples: list[FimSample], tree: SyntaxTree) -> float:
    """Fraction of samples whose target coincides with whole semantic-unit
    spans: after trimming edge whitespace the target must start at some
    unit's start, end at some unit's end, and split no unit."""
    if not samples:
        return 1.0
    units = extract_semantic_units(tree)
    starts = {u.start for u in units}
    ends = {u.end for u in units}
    src = tree.source
    preserved = 0
    for sample in samples:
        s = len(sample.prefix)
        e = s + len(sample.target)
        while s < e and src[s].isspace():
            s += 1
        while e > s and src[e - 1].isspace():
            e -= 1
        if s == e or s not in starts or e not in ends:
            continue
        split = False
        for u in units:
            lo = max(s, u.start)
            hi = min(e, u.end)
            if lo >= hi:
                continue
            inside = u.start >= s and u.end <= e
            around = s >= u.start and e <= u.end
            if not (inside or around):
                split = True
                break
        if not split:
            preserved += 1
    return preserved / len(samples)


def segment_corpus(
    files: list[RawFile],
    granularity: GranularityRange,
    mask_token: str = "<mask>",
    seed: int = 0,
    sample_rate: float = 1.0,
) -> tuple[list[FimSample], dict]:
    """Cut FIM samples for every parseable corpus file.

    Per-file seeds derive from (seed, path) so results do not depend on
    file order."""
    samples: list[FimSample] = []
    stats = {"files": 0, "skipped_language": 0, "units_sampled": 0}
    for f in sorted(files, key=lambda f: f.path):
        if f.language not in _LANG_MAP:
            stats["skipped_language"] += 1
            continue
        stats["files"] += 1
        file_seed = hash64(f"{seed}:{f.path}")
        samples.extend(
            cut_fim_samples(f, granularity, mask_token, rng_seed=file_seed,
                            sample_rate=sample_rate)
        )
    stats["units_sampled"] = len(samples)
    return samples, stats
