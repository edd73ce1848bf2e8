"""Corpus pipeline: filter, clean, and deduplicate raw source files.

Stage order is filter -> clean -> exact dedup -> fuzzy dedup; hashes and
MinHash signatures are computed over cleaned content so reformatted
duplicates still collide.  Every decision is deterministic, with
lexicographic path order as the only tie-break, so the pipeline output
does not depend on input file ordering.
"""

from __future__ import annotations

import csv
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .cparser import lex
from .errors import EmptyContent, ParseFailure
from .textutil import hash64, sha256_hex, simple_tokens, write_jsonl

C_EXTENSIONS = {"c", "h"}
CPP_EXTENSIONS = {"cpp", "cc", "cxx", "c++", "hpp", "hh", "hxx", "inl", "ipp"}

REJECT_LINE_LENGTH = "LineLength"
REJECT_AVG_LINE_LENGTH = "AvgLineLength"
REJECT_ALNUM_RATIO = "AlnumRatio"
REJECT_TOTAL_CHARS = "TotalChars"
REJECT_FILE_TYPE = "FileType"

VERDICT_KEEP = "keep"
VERDICT_EXACT = "exact_duplicate"
VERDICT_FUZZY = "fuzzy_duplicate"


def infer_language(path: str) -> str:
    ext = path.rsplit(".", 1)[-1].lower() if "." in path else ""
    if ext in C_EXTENSIONS:
        return "C"
    if ext in CPP_EXTENSIONS:
        return "CPP"
    return "Other"


@dataclass(frozen=True)
class RawFile:
    path: str
    content: str
    language: str = ""
    lossy: bool = False  # content needed lossy decoding

    def __post_init__(self):
        if not self.path:
            raise ValueError("RawFile.path must be non-empty")
        if not self.language:
            object.__setattr__(self, "language", infer_language(self.path))

    @classmethod
    def from_bytes(cls, path: str, data: bytes) -> "RawFile":
        try:
            text = data.decode("utf-8")
            lossy = False
        except UnicodeDecodeError:
            text = data.decode("utf-8", errors="replace")
            lossy = True
        return cls(path=path, content=text, lossy=lossy)


@dataclass(frozen=True)
class FilterConfig:
    max_line_len: int = 1000
    min_line_len: int = 1
    max_avg_line_len: float = 100.0
    min_alnum_ratio: float = 0.25
    min_total_chars: int = 50
    excluded_extensions: frozenset[str] = frozenset({"xml", "html", "json", "md"})

    def violations(self) -> list[str]:
        out = []
        if self.max_line_len <= 0:
            out.append("filter.max_line_len must be positive")
        if self.min_line_len < 0:
            out.append("filter.min_line_len must be non-negative")
        if self.min_line_len > self.max_line_len:
            out.append("filter.min_line_len must not exceed max_line_len")
        if self.max_avg_line_len <= 0:
            out.append("filter.max_avg_line_len must be positive")
        if not (0.0 <= self.min_alnum_ratio <= 1.0):
            out.append("filter.min_alnum_ratio must lie in [0, 1]")
        if self.min_total_chars < 0:
            out.append("filter.min_total_chars must be non-negative")
        return out


@dataclass(frozen=True)
class FilterVerdict:
    passed: bool
    reason: str | None = None


PASS = FilterVerdict(True)


def filter_file(file: RawFile, cfg: FilterConfig) -> FilterVerdict:
    """Apply the five filter rules in fixed order; first failure wins.

    The per-line minimum is not applied to empty lines, otherwise any file
    containing a blank line would be rejected under the defaults.
    """
    lines = file.content.splitlines()
    for line in lines:
        if len(line) > cfg.max_line_len:
            return FilterVerdict(False, REJECT_LINE_LENGTH)
        if line and len(line) < cfg.min_line_len:
            return FilterVerdict(False, REJECT_LINE_LENGTH)
    if lines:
        avg = len(file.content) / len(lines)
        if avg > cfg.max_avg_line_len:
            return FilterVerdict(False, REJECT_AVG_LINE_LENGTH)
    if file.content:
        alnum = sum(1 for ch in file.content if ch.isalnum())
        if alnum / len(file.content) < cfg.min_alnum_ratio:
            return FilterVerdict(False, REJECT_ALNUM_RATIO)
    if len(file.content) < cfg.min_total_chars:
        return FilterVerdict(False, REJECT_TOTAL_CHARS)
    ext = file.path.rsplit(".", 1)[-1].lower() if "." in file.path else ""
    if ext in cfg.excluded_extensions:
        return FilterVerdict(False, REJECT_FILE_TYPE)
    return PASS


@dataclass(frozen=True)
class CleanOptions:
    strip_comments: bool = False


def _strip_comment_tokens(text: str) -> str:
    """Remove comment bodies, keeping their newlines so that no byte outside
    a comment changes line number.  Raises on an unterminated block comment
    (there is no defined end to strip to)."""
    tokens = lex(text)
    for tok in tokens:
        if tok.kind == "error" and tok.note == "unterminated_comment":
            raise ParseFailure(f"unterminated block comment at byte {tok.start}")
    pieces = []
    pos = 0
    for tok in tokens:
        if tok.kind != "comment":
            continue
        pieces.append(text[pos : tok.start])
        body = text[tok.start : tok.end]
        pieces.append("\n" * body.count("\n"))
        pos = tok.end
    pieces.append(text[pos:])
    return "".join(pieces)


def clean_file(file: RawFile, opts: CleanOptions = CleanOptions()) -> RawFile:
    """Normalize line endings, strip trailing whitespace, collapse long blank
    runs, and optionally remove comments.  Idempotent."""
    text = file.content.replace("\r\n", "\n").replace("\r", "\n")
    if opts.strip_comments:
        text = _strip_comment_tokens(text)
    lines = [ln.rstrip() for ln in text.split("\n")]
    out: list[str] = []
    blanks = 0
    for ln in lines:
        if ln == "":
            blanks += 1
            continue
        if blanks:
            out.extend([""] * (1 if blanks > 2 else blanks))
            blanks = 0
        out.append(ln)
    if blanks:
        out.extend([""] * (1 if blanks > 2 else blanks))
    return replace(file, content="\n".join(out))


@dataclass(frozen=True)
class DedupDecision:
    path: str
    verdict: str  # keep | exact_duplicate | fuzzy_duplicate
    duplicate_of: str | None = None
    similarity: float | None = None


def exact_dedup(files: list[RawFile]) -> list[DedupDecision]:
    """Keep one representative per identical-content group (smallest path)."""
    by_hash: dict[str, list[RawFile]] = {}
    for f in files:
        by_hash.setdefault(sha256_hex(f.content), []).append(f)
    decisions: dict[str, DedupDecision] = {}
    for group in by_hash.values():
        group_sorted = sorted(group, key=lambda f: f.path)
        keeper = group_sorted[0]
        decisions[keeper.path] = DedupDecision(keeper.path, VERDICT_KEEP)
        for dup in group_sorted[1:]:
            decisions[dup.path] = DedupDecision(dup.path, VERDICT_EXACT, duplicate_of=keeper.path)
    return [decisions[p] for p in sorted(decisions)]


_MASK64 = (1 << 64) - 1


def _xorshift64star(x: int) -> int:
    x &= _MASK64
    x ^= x >> 12
    x = (x ^ (x << 25)) & _MASK64
    x ^= x >> 27
    return (x * 0x2545F4914F6CDD1D) & _MASK64


@dataclass(frozen=True)
class MinHashConfig:
    shingle_k: int = 5
    num_perms: int = 128
    seed: int = 1

    def violations(self) -> list[str]:
        out = []
        if self.shingle_k < 1:
            out.append("minhash.shingle_k must be >= 1")
        if self.num_perms < 1:
            out.append("minhash.num_perms must be >= 1")
        return out


def _perm_salts(cfg: MinHashConfig) -> list[int]:
    rng = random.Random(cfg.seed)
    return [rng.getrandbits(64) | 1 for _ in range(cfg.num_perms)]


def shingle_hashes(content: str, shingle_k: int) -> set[int]:
    """64-bit hashes of the token k-gram shingle set of content."""
    tokens = simple_tokens(content)
    if len(tokens) < shingle_k:
        raise EmptyContent(f"content has {len(tokens)} tokens, need >= {shingle_k}")
    return {
        hash64("\x00".join(tokens[i : i + shingle_k]))
        for i in range(len(tokens) - shingle_k + 1)
    }


def signature_from_hashes(hashes: set[int], cfg: MinHashConfig) -> list[int]:
    if not hashes:
        raise EmptyContent("empty shingle set")
    # vectorized xorshift64*; uint64 arithmetic wraps exactly like the
    # scalar reference implementation above
    values = np.fromiter(hashes, dtype=np.uint64, count=len(hashes))
    salts = np.array(_perm_salts(cfg), dtype=np.uint64)
    x = values[None, :] ^ salts[:, None]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x2545F4914F6CDD1D)
    return [int(v) for v in x.min(axis=1)]


def minhash_signature(content: str, cfg: MinHashConfig = MinHashConfig()) -> list[int]:
    """Deterministic MinHash signature over token k-gram shingles."""
    return signature_from_hashes(shingle_hashes(content, cfg.shingle_k), cfg)


def estimate_jaccard(sig_a: list[int], sig_b: list[int]) -> float:
    if len(sig_a) != len(sig_b) or not sig_a:
        raise ValueError("signatures must have equal positive length")
    return sum(1 for a, b in zip(sig_a, sig_b) if a == b) / len(sig_a)


def fuzzy_dedup(
    files: list[RawFile],
    cfg: MinHashConfig = MinHashConfig(),
    threshold: float = 0.85,
) -> list[DedupDecision]:
    """Flag files whose estimated Jaccard to an earlier kept file reaches the
    threshold.  "Earlier" is lexicographic path order.  Files too small to
    shingle are kept as-is."""
    decisions = []
    kept: list[tuple[str, list[int]]] = []
    for f in sorted(files, key=lambda f: f.path):
        try:
            sig = minhash_signature(f.content, cfg)
        except EmptyContent:
            decisions.append(DedupDecision(f.path, VERDICT_KEEP))
            continue
        hit = None
        for kept_path, kept_sig in kept:
            sim = estimate_jaccard(sig, kept_sig)
            if sim >= threshold:
                hit = (kept_path, sim)
                break
        if hit is not None:
            decisions.append(
                DedupDecision(f.path, VERDICT_FUZZY, duplicate_of=hit[0], similarity=hit[1])
            )
        else:
            kept.append((f.path, sig))
            decisions.append(DedupDecision(f.path, VERDICT_KEEP))
    return decisions


# ---------------------------------------------------------------------------
# Whole-pipeline driver

@dataclass
class PipelineResult:
    kept: list[RawFile] = field(default_factory=list)
    decisions: list[DedupDecision] = field(default_factory=list)
    stats: dict = field(default_factory=dict)


def load_inputs(source: str | Path) -> list[RawFile]:
    """Load a directory tree or a file-list manifest (one path per line)."""
    src = Path(source)
    files: list[RawFile] = []
    if src.is_dir():
        for p in sorted(src.rglob("*")):
            if not p.is_file():
                continue
            if any(part.startswith(".") for part in p.relative_to(src).parts):
                continue
            files.append(RawFile.from_bytes(str(p.relative_to(src)), p.read_bytes()))
    else:
        base = src.parent
        for line in src.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            p = (base / line) if not Path(line).is_absolute() else Path(line)
            files.append(RawFile.from_bytes(line, p.read_bytes()))
    return files


def run_pipeline(
    files: list[RawFile],
    filter_cfg: FilterConfig = FilterConfig(),
    clean_opts: CleanOptions = CleanOptions(),
    minhash_cfg: MinHashConfig = MinHashConfig(),
    fuzzy_threshold: float = 0.85,
    jobs: int = 1,
) -> PipelineResult:
    stats = {
        "files_seen": len(files),
        "rejected": {},
        "clean_failures": 0,
        "lossy_decoded": sum(1 for f in files if f.lossy),
        "exact_duplicates": 0,
        "fuzzy_duplicates": 0,
    }
    passed = []
    for f in files:
        verdict = filter_file(f, filter_cfg)
        if verdict.passed:
            passed.append(f)
        else:
            stats["rejected"][verdict.reason] = stats["rejected"].get(verdict.reason, 0) + 1

    def _clean(f: RawFile) -> RawFile | None:
        try:
            return clean_file(f, clean_opts)
        except ParseFailure:
            return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cleaned_all = list(pool.map(_clean, passed))
    else:
        cleaned_all = [_clean(f) for f in passed]
    cleaned = [f for f in cleaned_all if f is not None]
    stats["clean_failures"] = len(cleaned_all) - len(cleaned)

    exact = exact_dedup(cleaned)
    exact_by_path = {d.path: d for d in exact}
    survivors = [f for f in cleaned if exact_by_path[f.path].verdict == VERDICT_KEEP]
    stats["exact_duplicates"] = len(cleaned) - len(survivors)

    fuzzy = fuzzy_dedup(survivors, minhash_cfg, fuzzy_threshold)
    fuzzy_by_path = {d.path: d for d in fuzzy}
    final = [f for f in survivors if fuzzy_by_path[f.path].verdict == VERDICT_KEEP]
    stats["fuzzy_duplicates"] = len(survivors) - len(final)
    stats["kept"] = len(final)

    decisions = [
        fuzzy_by_path.get(d.path, d) if d.verdict == VERDICT_KEEP else d for d in exact
    ]
    return PipelineResult(
        kept=sorted(final, key=lambda f: f.path),
        decisions=sorted(decisions, key=lambda d: d.path),
        stats=stats,
    )


def write_outputs(result: PipelineResult, out_dir: str | Path) -> dict:
    """Write corpus.jsonl and dedup_report.csv into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_jsonl(
        out / "corpus.jsonl",
        (
            {
                "path": f.path,
                "content": f.content,
                "language": f.language,
                "sha256": sha256_hex(f.content),
            }
            for f in result.kept
        ),
    )
    with open(out / "dedup_report.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "verdict", "duplicate_of", "similarity"])
        for d in result.decisions:
            writer.writerow([
                d.path,
                d.verdict,
                d.duplicate_of or "",
                "" if d.similarity is None else f"{d.similarity:.6f}",
            ])
    return {"corpus": str(out / "corpus.jsonl"), "report": str(out / "dedup_report.csv")}
