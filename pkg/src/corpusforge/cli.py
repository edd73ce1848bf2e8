"""`forge` command line: pipeline | fim | graph | score | adoption | build.

Exit codes: 0 success, 2 configuration error, 3 stage failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import adoption as adoption_mod
from . import graph as graph_mod
from . import metrics as metrics_mod
from . import pipeline as pipeline_mod
from . import segmenter as segmenter_mod
from .config import ForgeConfig, validate_config
from .errors import ConfigInvalid, ForgeError, StageFailure
from .pipeline import RawFile
from .textutil import write_jsonl

STAGE_ORDER = ("pipeline", "fim", "graph")


def _load_corpus(out_dir: Path) -> list[RawFile]:
    corpus_path = out_dir / "corpus.jsonl"
    if not corpus_path.exists():
        raise FileNotFoundError(f"{corpus_path} not found; run the pipeline stage first")
    files = []
    with open(corpus_path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                files.append(RawFile(path=rec["path"], content=rec["content"],
                                     language=rec.get("language", "")))
    return files


def _corpus_from_arg(in_arg: str) -> list[RawFile]:
    """Accept a corpus.jsonl path or a directory containing one."""
    p = Path(in_arg)
    if p.is_dir():
        return _load_corpus(p)
    files = []
    with open(p, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                files.append(RawFile(path=rec["path"], content=rec["content"],
                                     language=rec.get("language", "")))
    return files


def _run_pipeline_stage(repo_dir: Path, out_dir: Path, cfg: ForgeConfig, jobs: int) -> dict:
    files = pipeline_mod.load_inputs(repo_dir)
    result = pipeline_mod.run_pipeline(
        files,
        filter_cfg=cfg.pipeline.filter,
        clean_opts=cfg.pipeline.clean,
        minhash_cfg=cfg.pipeline.minhash,
        fuzzy_threshold=cfg.pipeline.fuzzy_threshold,
        jobs=jobs,
    )
    pipeline_mod.write_outputs(result, out_dir)
    return result.stats


def _run_fim_stage(out_dir: Path, cfg: ForgeConfig,
                   corpus: list[RawFile] | None = None) -> dict:
    files = corpus if corpus is not None else _load_corpus(out_dir)
    samples, stats = segmenter_mod.segment_corpus(
        files,
        cfg.fim.granularity(),
        mask_token=cfg.fim.mask_token,
        seed=cfg.fim.seed,
        sample_rate=cfg.fim.sample_rate,
    )
    write_jsonl(
        out_dir / "fim_samples.jsonl",
        (
            {
                "input": s.input_text,
                "target": s.target,
                "source_file": s.source_file,
                "unit_kind": s.unit_kind,
                "unit_span": list(s.unit_span),
            }
            for s in samples
        ),
    )
    return stats


def _run_graph_stage(out_dir: Path, cfg: ForgeConfig,
                     corpus: list[RawFile] | None = None) -> dict:
    files = corpus if corpus is not None else _load_corpus(out_dir)
    samples, graph, stats = graph_mod.generate_spsr_corpus(
        files,
        depth=cfg.graph.depth,
        breadth=cfg.graph.breadth,
        strategy=cfg.graph.strategy,
        max_tokens=cfg.graph.max_tokens,
        dependency_first=cfg.graph.dependency_first,
    )
    graph_mod.write_graph_json(graph, out_dir / "graph.json")
    write_jsonl(
        out_dir / "spsr_samples.jsonl",
        (
            {
                "text": s.text,
                "unit_ids": list(s.path.ids),
                "files": s.files,
                "depth": s.path.depth,
            }
            for s in samples
        ),
    )
    return stats


def run_end_to_end(repo_dir: str | Path, out_dir: str | Path, cfg: ForgeConfig,
                   stages: tuple[str, ...] = STAGE_ORDER, jobs: int = 1) -> dict:
    """Run the requested stages in fixed order and write out/manifest.json.

    Raises StageFailure on the first failing stage; outputs of previously
    completed stages stay on disk."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "config_hash": cfg.config_hash(),
        "seed": cfg.fim.seed,
        "stages": {},
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    corpus: list[RawFile] | None = None
    for stage in STAGE_ORDER:
        if stage not in stages:
            continue
        try:
            if stage == "pipeline":
                stats = _run_pipeline_stage(Path(repo_dir), out, cfg, jobs)
                corpus = None  # later stages reload the written corpus
            elif stage == "fim":
                if corpus is None:
                    corpus = _load_corpus(out)
                stats = _run_fim_stage(out, cfg, corpus)
            else:
                if corpus is None:
                    corpus = _load_corpus(out)
                stats = _run_graph_stage(out, cfg, corpus)
        except ForgeError as exc:
            _write_manifest(out, manifest)
            raise StageFailure(stage, exc) from exc
        except OSError as exc:
            _write_manifest(out, manifest)
            raise StageFailure(stage, exc) from exc
        manifest["stages"][stage] = stats
    _write_manifest(out, manifest)
    return manifest


def _write_manifest(out: Path, manifest: dict) -> None:
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# argument parsing

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Structure-aware code corpus construction and completion metrics.",
    )
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--jobs", type=int, default=1, help="worker cap for per-file stages")
    parser.add_argument("--seed", type=int, default=None, help="override the FIM sampling seed")
    # the same flags are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pipeline", parents=[common],
                       help="filter, clean, and deduplicate a repository")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)

    p = sub.add_parser("fim", parents=[common],
                       help="cut structure-aligned FIM samples from a corpus")
    p.add_argument("--in", dest="in_path", required=True, help="corpus.jsonl or its directory")
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("--theta-min", type=int, default=None)
    p.add_argument("--theta-max", type=int, default=None)
    p.add_argument("--mask-token", default=None)
    p.add_argument("--sample-rate", type=float, default=None)
    p.add_argument("--greedy-window", type=int, default=None,
                   help="also emit token-window baseline samples")

    p = sub.add_parser("graph", parents=[common],
                       help="build the code graph and path samples")
    p.add_argument("--in", dest="in_path", required=True, help="corpus.jsonl or its directory")
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("-D", "--depth", type=int, default=None)
    p.add_argument("-k", "--breadth", type=int, default=None)
    p.add_argument("--strategy", default=None,
                   choices=list(graph_mod.STRATEGIES))
    p.add_argument("--dependency-first", action="store_true", default=None)
    p.add_argument("--max-tokens", type=int, default=None)

    p = sub.add_parser("score", parents=[common],
                       help="score prediction/reference pairs")
    p.add_argument("--pred", required=True, help="one prediction per line (JSON string lines allowed)")
    p.add_argument("--ref", required=True, help="one reference per line")
    p.add_argument("--out", dest="out_path", required=True, help="metrics.csv path")

    p = sub.add_parser("adoption", parents=[common],
                       help="bucketed distributions and daily correlations")
    p.add_argument("--logs", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("--min-daily", type=int, default=None)
    p.add_argument("--bin-width", type=float, default=None)
    p.add_argument("--keep-contradictions", action="store_true")

    p = sub.add_parser("build", parents=[common],
                       help="end-to-end: pipeline, fim, graph")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("--stages", default="pipeline,fim,graph")
    return parser


def _apply_overrides(cfg: ForgeConfig, args) -> ForgeConfig:
    fim = cfg.fim
    if getattr(args, "seed", None) is not None:
        fim = dataclasses.replace(fim, seed=args.seed)
    for attr, key in (("theta_min", "theta_min"), ("theta_max", "theta_max"),
                      ("mask_token", "mask_token"), ("sample_rate", "sample_rate")):
        v = getattr(args, attr, None)
        if v is not None:
            fim = dataclasses.replace(fim, **{key: v})
    graph = cfg.graph
    for attr, key in (("depth", "depth"), ("breadth", "breadth"),
                      ("strategy", "strategy"), ("max_tokens", "max_tokens"),
                      ("dependency_first", "dependency_first")):
        v = getattr(args, attr, None)
        if v is not None:
            graph = dataclasses.replace(graph, **{key: v})
    adoption = cfg.adoption
    if getattr(args, "min_daily", None) is not None:
        adoption = dataclasses.replace(adoption, min_daily=args.min_daily)
    if getattr(args, "bin_width", None) is not None:
        adoption = dataclasses.replace(adoption, bin_width=args.bin_width)
    return dataclasses.replace(cfg, fim=fim, graph=graph, adoption=adoption)


def _read_lines_maybe_json(path: str) -> list[str]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith('"'):
                try:
                    decoded = json.loads(line)
                    if isinstance(decoded, str):
                        out.append(decoded)
                        continue
                except json.JSONDecodeError:
                    pass
            out.append(line)
    return out


def _cmd_score(args) -> int:
    import csv

    preds = _read_lines_maybe_json(args.pred)
    refs = _read_lines_maybe_json(args.ref)
    if len(preds) != len(refs):
        print(f"error: {len(preds)} predictions vs {len(refs)} references", file=sys.stderr)
        return 3
    out_path = Path(args.out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "lcp", "rouge_lcp", "lcs", "rouge_l", "em", "bleu", "s_ext_len"])
        for i, (s, r) in enumerate(zip(preds, refs)):
            if not r:
                w.writerow([i, "", "", "", "", "", "", ""])
                continue
            m = metrics_mod.compute_all(s, r)
            w.writerow([i, m.lcp, f"{m.rouge_lcp:.6f}", m.lcs, f"{m.rouge_l:.6f}",
                        int(m.em), f"{m.bleu:.6f}", m.s_ext_len])
    print(f"wrote {out_path}")
    return 0


def _cmd_adoption(args, cfg: ForgeConfig) -> int:
    ingest = adoption_mod.ingest_logs(args.logs)
    pre = adoption_mod.preprocess(ingest.entries,
                                  drop_contradictions=not args.keep_contradictions)
    binning = adoption_mod.BinSpec(width=cfg.adoption.bin_width)
    lcp_buckets = adoption_mod.bucket_by_metric(pre.entries, "LCP", binning)
    rouge_buckets = adoption_mod.bucket_by_metric(pre.entries, "ROUGE_LCP", binning)
    try:
        report = adoption_mod.daily_correlation_suite(pre.entries, cfg.adoption.min_daily)
    except adoption_mod.InsufficientDays as exc:
        print(f"note: daily correlations skipped: {exc}", file=sys.stderr)
        report = None
    extra = {
        "n_entries": len(pre.entries),
        "malformed_lines": ingest.malformed,
        "removed_duplicates": pre.removed_duplicates,
        "removed_contradictions": pre.removed_contradictions,
    }
    paths = adoption_mod.emit_reports(lcp_buckets, rouge_buckets, report,
                                      args.out_path, extra=extra)
    print(f"wrote {len(paths)} report files to {args.out_path}")
    return 0


def _cmd_fim(args, cfg: ForgeConfig) -> int:
    out = Path(args.out_path)
    out.mkdir(parents=True, exist_ok=True)
    corpus = _corpus_from_arg(args.in_path)
    stats = _run_fim_stage(out, cfg, corpus)
    if args.greedy_window is not None:
        greedy = []
        for f in sorted(corpus, key=lambda f: f.path):
            greedy.extend(segmenter_mod.greedy_cut_baseline(f.content, args.greedy_window, f.path))
        write_jsonl(
            out / "greedy_samples.jsonl",
            (
                {
                    "input": s.input_text,
                    "target": s.target,
                    "source_file": s.source_file,
                    "unit_kind": s.unit_kind,
                    "unit_span": list(s.unit_span),
                }
                for s in greedy
            ),
        )
        stats["greedy_samples"] = len(greedy)
    print(json.dumps(stats, sort_keys=True))
    return 0


def _cmd_graph(args, cfg: ForgeConfig) -> int:
    out = Path(args.out_path)
    out.mkdir(parents=True, exist_ok=True)
    corpus = _corpus_from_arg(args.in_path)
    stats = _run_graph_stage(out, cfg, corpus)
    print(json.dumps(stats, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(validate_config(args.config), args)
    except ConfigInvalid as exc:
        for violation in exc.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "pipeline":
            out = Path(args.out_path)
            out.mkdir(parents=True, exist_ok=True)
            stats = _run_pipeline_stage(Path(args.in_path), out, cfg, args.jobs)
            print(json.dumps(stats, sort_keys=True))
            return 0
        if args.command == "fim":
            return _cmd_fim(args, cfg)
        if args.command == "graph":
            return _cmd_graph(args, cfg)
        if args.command == "score":
            return _cmd_score(args)
        if args.command == "adoption":
            return _cmd_adoption(args, cfg)
        if args.command == "build":
            stages = tuple(s.strip() for s in args.stages.split(",") if s.strip())
            unknown = [s for s in stages if s not in STAGE_ORDER]
            if unknown:
                print(f"config error: unknown stages {unknown}", file=sys.stderr)
                return 2
            manifest = run_end_to_end(args.in_path, args.out_path, cfg,
                                      stages=stages, jobs=args.jobs)
            print(json.dumps({"stages": sorted(manifest["stages"]),
                              "config_hash": manifest["config_hash"]}, sort_keys=True))
            return 0
    except StageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ForgeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
