"""Declarative build configuration: one JSON file, nested sections, strict
key checking, and a stable hash over effective values."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .errors import ConfigInvalid
from .graph import STRATEGIES
from .pipeline import CleanOptions, FilterConfig, MinHashConfig
from .segmenter import GranularityRange
from .textutil import sha256_hex


@dataclass(frozen=True)
class PipelineSection:
    filter: FilterConfig = FilterConfig()
    clean: CleanOptions = CleanOptions()
    minhash: MinHashConfig = MinHashConfig()
    fuzzy_threshold: float = 0.85


@dataclass(frozen=True)
class FimSection:
    theta_min: int = 1
    theta_max: int = 256
    size_unit: str = "Tokens"
    mask_token: str = "<mask>"
    seed: int = 0
    sample_rate: float = 1.0

    def granularity(self) -> GranularityRange:
        return GranularityRange(self.theta_min, self.theta_max, self.size_unit)


@dataclass(frozen=True)
class GraphSection:
    # depth 1 / breadth 4 are the established sweet spot for inline completion
    depth: int = 1
    breadth: int = 4
    strategy: str = "forward-call"
    max_tokens: int | None = None
    dependency_first: bool = False


@dataclass(frozen=True)
class AdoptionSection:
    min_daily: int = 100
    bin_width: float = 0.05


@dataclass(frozen=True)
class ForgeConfig:
    pipeline: PipelineSection = PipelineSection()
    fim: FimSection = FimSection()
    graph: GraphSection = GraphSection()
    adoption: AdoptionSection = AdoptionSection()

    def to_dict(self) -> dict:
        data = asdict(self)
        exts = data["pipeline"]["filter"]["excluded_extensions"]
        data["pipeline"]["filter"]["excluded_extensions"] = sorted(exts)
        return data

    def config_hash(self) -> str:
        return sha256_hex(json.dumps(self.to_dict(), sort_keys=True))


_SECTION_FIELDS = {
    "pipeline": {"filter", "clean", "minhash", "fuzzy_threshold"},
    "fim": {"theta_min", "theta_max", "size_unit", "mask_token", "seed", "sample_rate"},
    "graph": {"depth", "breadth", "strategy", "max_tokens", "dependency_first"},
    "adoption": {"min_daily", "bin_width"},
}
_FILTER_FIELDS = {"max_line_len", "min_line_len", "max_avg_line_len",
                  "min_alnum_ratio", "min_total_chars", "excluded_extensions"}
_CLEAN_FIELDS = {"strip_comments"}
_MINHASH_FIELDS = {"shingle_k", "num_perms", "seed"}


def _check_keys(data: dict, allowed: set[str], where: str, errors: list[str]):
    for key in data:
        if key not in allowed:
            errors.append(f"{where}: unknown key {key!r}")


def _num(data: dict, key: str, where: str, errors: list[str], kind=int):
    if key not in data:
        return None
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        errors.append(f"{where}.{key}: expected a number, got {type(v).__name__}")
        return None
    if kind is int and not float(v).is_integer():
        errors.append(f"{where}.{key}: expected an integer, got {v}")
        return None
    return kind(v)


def build_config(data: dict) -> ForgeConfig:
    """Construct a ForgeConfig from a nested dict, collecting every
    violation before raising."""
    errors: list[str] = []
    if not isinstance(data, dict):
        raise ConfigInvalid(["config root must be a JSON object"])
    _check_keys(data, set(_SECTION_FIELDS), "config", errors)

    cfg = ForgeConfig()

    pipe = data.get("pipeline", {})
    if isinstance(pipe, dict):
        _check_keys(pipe, _SECTION_FIELDS["pipeline"], "pipeline", errors)
        filt_data = pipe.get("filter", {})
        filt = cfg.pipeline.filter
        if isinstance(filt_data, dict):
            _check_keys(filt_data, _FILTER_FIELDS, "pipeline.filter", errors)
            kwargs = {}
            for key, kind in (
                ("max_line_len", int), ("min_line_len", int),
                ("max_avg_line_len", float), ("min_alnum_ratio", float),
                ("min_total_chars", int),
            ):
                v = _num(filt_data, key, "pipeline.filter", errors, kind)
                if v is not None:
                    kwargs[key] = v
            if "excluded_extensions" in filt_data:
                exts = filt_data["excluded_extensions"]
                if isinstance(exts, list) and all(isinstance(e, str) for e in exts):
                    kwargs["excluded_extensions"] = frozenset(e.lower().lstrip(".") for e in exts)
                else:
                    errors.append("pipeline.filter.excluded_extensions: expected a list of strings")
            filt = replace(filt, **kwargs)
        else:
            errors.append("pipeline.filter: expected an object")
        clean_data = pipe.get("clean", {})
        clean = cfg.pipeline.clean
        if isinstance(clean_data, dict):
            _check_keys(clean_data, _CLEAN_FIELDS, "pipeline.clean", errors)
            if "strip_comments" in clean_data:
                v = clean_data["strip_comments"]
                if isinstance(v, bool):
                    clean = CleanOptions(strip_comments=v)
                else:
                    errors.append("pipeline.clean.strip_comments: expected a boolean")
        else:
            errors.append("pipeline.clean: expected an object")
        mh_data = pipe.get("minhash", {})
        minhash = cfg.pipeline.minhash
        if isinstance(mh_data, dict):
            _check_keys(mh_data, _MINHASH_FIELDS, "pipeline.minhash", errors)
            kwargs = {}
            for key in ("shingle_k", "num_perms", "seed"):
                v = _num(mh_data, key, "pipeline.minhash", errors, int)
                if v is not None:
                    kwargs[key] = v
            minhash = replace(minhash, **kwargs)
        else:
            errors.append("pipeline.minhash: expected an object")
        threshold = _num(pipe, "fuzzy_threshold", "pipeline", errors, float)
        pipeline = PipelineSection(
            filter=filt, clean=clean, minhash=minhash,
            fuzzy_threshold=cfg.pipeline.fuzzy_threshold if threshold is None else threshold,
        )
    else:
        errors.append("pipeline: expected an object")
        pipeline = cfg.pipeline

    fim_data = data.get("fim", {})
    if isinstance(fim_data, dict):
        _check_keys(fim_data, _SECTION_FIELDS["fim"], "fim", errors)
        kwargs = {}
        for key, kind in (("theta_min", int), ("theta_max", int), ("seed", int),
                          ("sample_rate", float)):
            v = _num(fim_data, key, "fim", errors, kind)
            if v is not None:
                kwargs[key] = v
        for key in ("size_unit", "mask_token"):
            if key in fim_data:
                if isinstance(fim_data[key], str):
                    kwargs[key] = fim_data[key]
                else:
                    errors.append(f"fim.{key}: expected a string")
        fim = replace(cfg.fim, **kwargs)
    else:
        errors.append("fim: expected an object")
        fim = cfg.fim

    graph_data = data.get("graph", {})
    if isinstance(graph_data, dict):
        _check_keys(graph_data, _SECTION_FIELDS["graph"], "graph", errors)
        kwargs = {}
        for key in ("depth", "breadth"):
            v = _num(graph_data, key, "graph", errors, int)
            if v is not None:
                kwargs[key] = v
        if "max_tokens" in graph_data:
            if graph_data["max_tokens"] is None:
                kwargs["max_tokens"] = None
            else:
                v = _num(graph_data, "max_tokens", "graph", errors, int)
                if v is not None:
                    kwargs["max_tokens"] = v
        if "strategy" in graph_data:
            if isinstance(graph_data["strategy"], str):
                kwargs["strategy"] = graph_data["strategy"]
            else:
                errors.append("graph.strategy: expected a string")
        if "dependency_first" in graph_data:
            if isinstance(graph_data["dependency_first"], bool):
                kwargs["dependency_first"] = graph_data["dependency_first"]
            else:
                errors.append("graph.dependency_first: expected a boolean")
        graph = replace(cfg.graph, **kwargs)
    else:
        errors.append("graph: expected an object")
        graph = cfg.graph

    adoption_data = data.get("adoption", {})
    if isinstance(adoption_data, dict):
        _check_keys(adoption_data, _SECTION_FIELDS["adoption"], "adoption", errors)
        kwargs = {}
        v = _num(adoption_data, "min_daily", "adoption", errors, int)
        if v is not None:
            kwargs["min_daily"] = v
        v = _num(adoption_data, "bin_width", "adoption", errors, float)
        if v is not None:
            kwargs["bin_width"] = v
        adoption = replace(cfg.adoption, **kwargs)
    else:
        errors.append("adoption: expected an object")
        adoption = cfg.adoption

    result = ForgeConfig(pipeline=pipeline, fim=fim, graph=graph, adoption=adoption)
    errors.extend(_invariant_violations(result))
    if errors:
        raise ConfigInvalid(errors)
    return result


def _invariant_violations(cfg: ForgeConfig) -> list[str]:
    errors = []
    errors.extend(cfg.pipeline.filter.violations())
    errors.extend(cfg.pipeline.minhash.violations())
    if not (0.0 <= cfg.pipeline.fuzzy_threshold <= 1.0):
        errors.append("pipeline.fuzzy_threshold must lie in [0, 1]")
    if cfg.fim.theta_min <= 0:
        errors.append("fim.theta_min must be positive")
    if cfg.fim.theta_min > cfg.fim.theta_max:
        errors.append("fim.theta_min must not exceed theta_max")
    if cfg.fim.size_unit not in ("Tokens", "Nodes"):
        errors.append("fim.size_unit must be 'Tokens' or 'Nodes'")
    if not cfg.fim.mask_token:
        errors.append("fim.mask_token must be non-empty")
    if not (0.0 < cfg.fim.sample_rate <= 1.0):
        errors.append("fim.sample_rate must lie in (0, 1]")
    if cfg.graph.depth < 0:
        errors.append("graph.depth must be >= 0")
    if cfg.graph.breadth < 1:
        errors.append("graph.breadth must be >= 1")
    if cfg.graph.strategy not in STRATEGIES:
        errors.append(
            f"graph.strategy must be one of {sorted(STRATEGIES)}"
        )
    if cfg.graph.max_tokens is not None and cfg.graph.max_tokens < 1:
        errors.append("graph.max_tokens must be >= 1 when set")
    if cfg.adoption.min_daily < 1:
        errors.append("adoption.min_daily must be >= 1")
    if not (0.0 < cfg.adoption.bin_width <= 1.0):
        errors.append("adoption.bin_width must lie in (0, 1]")
    return errors


def validate_config(path: str | Path | None) -> ForgeConfig:
    """Load, default, and invariant-check a config file.

    A missing path or empty file yields the full defaults; every violation
    found is reported, not just the first."""
    if path is None:
        return build_config({})
    text = Path(path).read_text(encoding="utf-8").strip()
    if not text:
        return build_config({})
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid([f"config: invalid JSON: {exc}"]) from exc
    return build_config(data)
