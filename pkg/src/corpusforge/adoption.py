"""Completion-log ingestion, preprocessing, bucketed distributions, and
daily adoption-rate correlation analysis.

Input is line-delimited JSON with fields
{ts, trigger, lang, prediction, context, reference, adopted}; timestamps
are RFC3339.  Day boundaries are UTC calendar dates.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from scipy.special import betainc

from .errors import (
    DegenerateInput,
    EmptyInput,
    InsufficientDays,
    UnreadableSource,
)
from .metrics import lcp, lcs_len, rouge_l, rouge_lcp

METRIC_NAMES = ("LCP", "ROUGE-LCP", "LCS", "ROUGE-L", "EM")


@dataclass(frozen=True)
class CompletionLogEntry:
    ts: datetime
    trigger: str
    lang: str
    prediction: str
    context: str
    reference: str
    adopted: bool


@dataclass
class IngestResult:
    entries: list[CompletionLogEntry]
    malformed: int = 0


def _parse_ts(value: str) -> datetime:
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def ingest_logs(source: str | Path) -> IngestResult:
    """Read a logs.jsonl file; malformed lines are counted and skipped,
    entries come back sorted by timestamp."""
    try:
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UnreadableSource(str(exc)) from exc
    entries = []
    malformed = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
            prediction = rec["prediction"]
            reference = rec["reference"]
            if not isinstance(prediction, str) or not isinstance(reference, str):
                raise ValueError("prediction/reference must be strings")
            if prediction == "" or reference == "":
                raise ValueError("empty prediction or reference")
            entries.append(
                CompletionLogEntry(
                    ts=_parse_ts(rec["ts"]),
                    trigger=str(rec.get("trigger", "")),
                    lang=str(rec.get("lang", "")),
                    prediction=prediction,
                    context=str(rec.get("context", "")),
                    reference=reference,
                    adopted=bool(rec["adopted"]),
                )
            )
        except (KeyError, ValueError, TypeError):
            malformed += 1
    entries.sort(key=lambda e: e.ts)
    return IngestResult(entries=entries, malformed=malformed)


@dataclass
class PreprocessResult:
    entries: list[CompletionLogEntry]
    removed_duplicates: int = 0
    removed_contradictions: int = 0


def preprocess(entries: list[CompletionLogEntry],
               drop_contradictions: bool = True) -> PreprocessResult:
    """Drop exact duplicates (same context, prediction, reference; earliest
    kept) and entries whose context already ends with the reference line.

    The latter is a heuristic for "context contradicts the reference": when
    the logger races ahead, the completed line leaks into the context, so the
    context's last line equals the reference answer.
    """
    seen: set[tuple[str, str, str]] = set()
    kept = []
    dup = 0
    contra = 0
    for e in sorted(entries, key=lambda e: e.ts):
        key = (e.context, e.prediction, e.reference)
        if key in seen:
            dup += 1
            continue
        seen.add(key)
        if drop_contradictions and e.context:
            ctx_lines = e.context.splitlines()
            if ctx_lines and ctx_lines[-1].strip() == e.reference.strip():
                contra += 1
                continue
        kept.append(e)
    return PreprocessResult(kept, removed_duplicates=dup, removed_contradictions=contra)


@dataclass(frozen=True)
class EntryMetrics:
    lcp: int
    rouge_lcp: float
    lcs: int
    rouge_l: float
    em: bool


def entry_metrics(entry: CompletionLogEntry) -> EntryMetrics:
    s, r = entry.prediction, entry.reference
    return EntryMetrics(
        lcp=lcp(s, r),
        rouge_lcp=rouge_lcp(s, r),
        lcs=lcs_len(s, r),
        rouge_l=rouge_l(s, r),
        em=s == r,
    )


@dataclass(frozen=True)
class BucketedStats:
    key: str
    count: int
    adopted_count: int

    @property
    def adoption_rate(self) -> float:
        return self.adopted_count / self.count if self.count else 0.0


@dataclass(frozen=True)
class BinSpec:
    width: float = 0.05
    overflow_width: float = 0.25
    overflow_max: float = 2.0


def _rouge_bucket_labels(spec: BinSpec) -> list[str]:
    labels = []
    nbins = round(1.0 / spec.width)
    for i in range(nbins):
        labels.append(f"{i * spec.width:.2f}-{(i + 1) * spec.width:.2f}")
    labels.append("EM")
    n_over = round((spec.overflow_max - 1.0) / spec.overflow_width)
    for i in range(n_over):
        lo = 1.0 + i * spec.overflow_width
        labels.append(f"{lo:.2f}-{lo + spec.overflow_width:.2f}")
    labels.append(f">{spec.overflow_max:.2f}")
    return labels


def _rouge_bucket_of(value: float, spec: BinSpec) -> str:
    if value == 1.0:
        return "EM"
    if value < 1.0:
        nbins = round(1.0 / spec.width)
        idx = min(int(value / spec.width), nbins - 1)
        return f"{idx * spec.width:.2f}-{(idx + 1) * spec.width:.2f}"
    if value > spec.overflow_max:
        return f">{spec.overflow_max:.2f}"
    n_over = round((spec.overflow_max - 1.0) / spec.overflow_width)
    idx = min(
        max(math.ceil((value - 1.0) / spec.overflow_width) - 1, 0),
        n_over - 1,
    )
    lo = 1.0 + idx * spec.overflow_width
    return f"{lo:.2f}-{lo + spec.overflow_width:.2f}"


def bucket_by_metric(entries: list[CompletionLogEntry], metric: str = "LCP",
                     binning: BinSpec = BinSpec()) -> list[BucketedStats]:
    """Bucketed counts and adoption rates.

    LCP gets one integer bucket per observed value; ROUGE-LCP is a mixed
    grid: fixed-width partial-match bins over [0, 1), an exact-match atom at
    1.0, and overflow bins for the extension component above 1.
    """
    if not entries:
        raise EmptyInput("no entries to bucket")
    if metric == "LCP":
        counts: dict[int, list[int]] = {}
        for e in entries:
            v = lcp(e.prediction, e.reference)
            counts.setdefault(v, [0, 0])
            counts[v][0] += 1
            counts[v][1] += int(e.adopted)
        return [
            BucketedStats(str(v), c, a) for v, (c, a) in sorted(counts.items())
        ]
    if metric == "ROUGE_LCP":
        labels = _rouge_bucket_labels(binning)
        table = {label: [0, 0] for label in labels}
        for e in entries:
            label = _rouge_bucket_of(rouge_lcp(e.prediction, e.reference), binning)
            table[label][0] += 1
            table[label][1] += int(e.adopted)
        return [BucketedStats(label, c, a) for label, (c, a) in table.items()]
    raise ValueError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class CorrelationResult:
    metric_name: str
    r: float
    p_value: float
    n_points: int


def pearson(xs: list[float], ys: list[float], metric_name: str = "") -> CorrelationResult:
    """Sample Pearson correlation with a two-tailed t-test p-value."""
    n = len(xs)
    if n != len(ys):
        raise ValueError("xs and ys must have the same length")
    if n < 3:
        raise DegenerateInput(f"need >= 3 points, got {n}")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise DegenerateInput("zero variance input")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)
    r = max(-1.0, min(1.0, r))
    df = n - 2
    if abs(r) == 1.0:
        p = 0.0
    else:
        t2 = r * r * df / (1.0 - r * r)
        p = float(betainc(df / 2.0, 0.5, df / (df + t2)))
    return CorrelationResult(metric_name=metric_name, r=r, p_value=p, n_points=n)


@dataclass
class DailyRow:
    date: str
    n: int
    adoption_rate: float
    means: dict[str, float] = field(default_factory=dict)  # metric -> daily mean


@dataclass
class DailyCorrelationReport:
    daily: list[DailyRow]
    correlations: dict[str, CorrelationResult]
    degenerate: dict[str, str]
    heatmap_labels: list[str]
    heatmap: list[list[float | None]]
    excluded_days: int = 0


def daily_correlation_suite(entries: list[CompletionLogEntry],
                            min_daily: int = 100) -> DailyCorrelationReport:
    """Per-day metric means vs adoption rate, Pearson r/p per metric, and a
    pairwise correlation heatmap.  Days with fewer than min_daily completions
    are excluded; fewer than 3 qualifying days raises."""
    by_day: dict[str, list[CompletionLogEntry]] = {}
    for e in entries:
        day = e.ts.astimezone(timezone.utc).date().isoformat()
        by_day.setdefault(day, []).append(e)
    qualifying = {d: es for d, es in by_day.items() if len(es) >= min_daily}
    excluded = len(by_day) - len(qualifying)
    if len(qualifying) < 3:
        raise InsufficientDays(
            f"need >= 3 days with >= {min_daily} completions, got {len(qualifying)}"
        )
    daily: list[DailyRow] = []
    for day in sorted(qualifying):
        es = qualifying[day]
        ms = [entry_metrics(e) for e in es]
        n = len(es)
        daily.append(
            DailyRow(
                date=day,
                n=n,
                adoption_rate=sum(e.adopted for e in es) / n,
                means={
                    "LCP": sum(m.lcp for m in ms) / n,
                    "ROUGE-LCP": sum(m.rouge_lcp for m in ms) / n,
                    "LCS": sum(m.lcs for m in ms) / n,
                    "ROUGE-L": sum(m.rouge_l for m in ms) / n,
                    "EM": sum(m.em for m in ms) / n,
                },
            )
        )
    adoption = [row.adoption_rate for row in daily]
    correlations: dict[str, CorrelationResult] = {}
    degenerate: dict[str, str] = {}
    for name in METRIC_NAMES:
        xs = [row.means[name] for row in daily]
        try:
            correlations[name] = pearson(xs, adoption, metric_name=name)
        except DegenerateInput as exc:
            degenerate[name] = str(exc)

    labels = list(METRIC_NAMES) + ["AdoptionRate"]
    series = {name: [row.means[name] for row in daily] for name in METRIC_NAMES}
    series["AdoptionRate"] = adoption
    heatmap: list[list[float | None]] = []
    for a in labels:
        row = []
        for b in labels:
            if a == b:
                row.append(1.0)
                continue
            try:
                row.append(pearson(series[a], series[b]).r)
            except DegenerateInput:
                row.append(None)
        heatmap.append(row)
    return DailyCorrelationReport(
        daily=daily,
        correlations=correlations,
        degenerate=degenerate,
        heatmap_labels=labels,
        heatmap=heatmap,
        excluded_days=excluded,
    )


_README = """# Adoption analysis outputs

- `lcp_distribution.csv`: one row per observed prefix-match length.
  Columns: `bucket` (integer LCP value), `count`, `adopted_count`,
  `adoption_rate` (= adopted_count / count).
- `rouge_lcp_distribution.csv`: mixed-distribution buckets. Partial-match
  bins cover [0, 1); the `EM` row is the exact-match atom at 1.0; bins
  above 1 hold the extension component (output running past the
  reference). Columns as above.
- `daily_metrics.csv`: per qualifying day. Columns: `date` (UTC),
  `n` (completions), `adoption_rate`, `lcp_mean`, `rouge_lcp_mean`,
  `lcs_mean`, `rouge_l_mean`, `em_rate`.
- `correlation_heatmap.csv`: pairwise Pearson r between daily metric
  means and the daily adoption rate; first row/column are labels; empty
  cells mean the pair was degenerate (zero variance).
- `summary.json`: entry counts, preprocessing tallies, and per-metric
  correlation results (r, p, n).
"""


def emit_reports(
    lcp_buckets: list[BucketedStats],
    rouge_buckets: list[BucketedStats],
    report: DailyCorrelationReport | None,
    out_dir: str | Path,
    extra: dict | None = None,
) -> dict:
    """Write the CSV/JSON report artifacts; byte-deterministic for equal inputs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def _write_buckets(path: Path, buckets: list[BucketedStats]):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bucket", "count", "adopted_count", "adoption_rate"])
            for b in buckets:
                w.writerow([b.key, b.count, b.adopted_count, f"{b.adoption_rate:.6f}"])

    _write_buckets(out / "lcp_distribution.csv", lcp_buckets)
    _write_buckets(out / "rouge_lcp_distribution.csv", rouge_buckets)

    with open(out / "daily_metrics.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["date", "n", "adoption_rate", "lcp_mean", "rouge_lcp_mean",
                    "lcs_mean", "rouge_l_mean", "em_rate"])
        for row in (report.daily if report else []):
            w.writerow([
                row.date, row.n, f"{row.adoption_rate:.6f}",
                f"{row.means['LCP']:.6f}", f"{row.means['ROUGE-LCP']:.6f}",
                f"{row.means['LCS']:.6f}", f"{row.means['ROUGE-L']:.6f}",
                f"{row.means['EM']:.6f}",
            ])

    with open(out / "correlation_heatmap.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        if report:
            w.writerow([""] + report.heatmap_labels)
            for label, row in zip(report.heatmap_labels, report.heatmap):
                w.writerow([label] + [
                    "" if v is None else f"{v:.6f}" for v in row
                ])

    summary = {
        "correlations": {
            name: {"r": res.r, "p": res.p_value, "n": res.n_points}
            for name, res in (report.correlations if report else {}).items()
        },
        "degenerate": report.degenerate if report else {},
        "excluded_days": report.excluded_days if report else 0,
        "qualifying_days": len(report.daily) if report else 0,
    }
    if extra:
        summary.update(extra)
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    (out / "README.md").write_text(_README, encoding="utf-8")
    return {name: str(out / name) for name in (
        "lcp_distribution.csv", "rouge_lcp_distribution.csv", "daily_metrics.csv",
        "correlation_heatmap.csv", "summary.json", "README.md",
    )}
