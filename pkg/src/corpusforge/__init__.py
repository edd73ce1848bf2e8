"""corpusforge: structure-aware code corpus construction and completion
metric analysis.

Stages: corpus pipeline (filter/clean/dedup), AST semantic FIM segmentation,
code-graph path samples, completion metrics, and adoption-rate correlation
reports.  Entry point: the `forge` CLI (see corpusforge.cli).
"""

__version__ = "0.1.0"

from .metrics import (  # noqa: F401
    MetricValue,
    LcpDistributionModel,
    bleu,
    compute_all,
    exact_match,
    lcp,
    lcp_pmf,
    lcs_len,
    rouge_l,
    rouge_lcp,
)
from .pipeline import (  # noqa: F401
    CleanOptions,
    DedupDecision,
    FilterConfig,
    MinHashConfig,
    RawFile,
    clean_file,
    exact_dedup,
    filter_file,
    fuzzy_dedup,
    minhash_signature,
)
from .segmenter import (  # noqa: F401
    FimSample,
    GranularityRange,
    SemanticUnit,
    check_completeness,
    cut_fim_samples,
    extract_semantic_units,
    greedy_cut_baseline,
    parse_to_ast,
    structural_preservation_rate,
)
from .graph import (  # noqa: F401
    CodeGraph,
    GraphPath,
    PathSample,
    build_graph,
    enumerate_paths,
    estimate_complexity,
    generate_spsr_corpus,
    render_sample,
    select_edges,
)
from .adoption import (  # noqa: F401
    BucketedStats,
    CompletionLogEntry,
    CorrelationResult,
    bucket_by_metric,
    daily_correlation_suite,
    emit_reports,
    ingest_logs,
    pearson,
    preprocess,
)
from .config import ForgeConfig, validate_config  # noqa: F401
