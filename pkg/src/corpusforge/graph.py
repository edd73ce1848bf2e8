"""Directed typed code graph over semantic units, with bounded path
enumeration and structure-aware sample rendering.

Reference resolution is name-based: a call site resolves to function units
named like the callee, preferring same-file definitions, then definitions in
files reachable through includes, then global matches (all of them when
ambiguous).  Unresolvable references are dropped and tallied, never fatal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .cparser import lex, include_target
from .errors import MissingSource
from .pipeline import RawFile
from .segmenter import (
    KIND_CLASS,
    KIND_FUNCTION,
    KIND_MACRO,
    KIND_RECORD,
    SemanticUnit,
    extract_semantic_units,
    parse_to_ast,
)
from .textutil import simple_tokens

DIRECT_CALL = "DirectCall"
MEMBER_REFERENCE = "MemberReference"
TYPE_USAGE = "TypeUsage"
MACRO_EXPANSION = "MacroExpansion"
INCLUDE_DEPENDENCY = "IncludeDependency"

EDGE_KINDS = (DIRECT_CALL, MEMBER_REFERENCE, TYPE_USAGE, MACRO_EXPANSION, INCLUDE_DEPENDENCY)

FORWARD_CALL = "forward-call"
FIELD_ACCESS = "field-access"
HEADER_INCLUSION = "header-inclusion"

_STRATEGY_PRIORITY = {
    FORWARD_CALL: (DIRECT_CALL, MACRO_EXPANSION, TYPE_USAGE, MEMBER_REFERENCE, INCLUDE_DEPENDENCY),
    FIELD_ACCESS: (MEMBER_REFERENCE, TYPE_USAGE, DIRECT_CALL, MACRO_EXPANSION, INCLUDE_DEPENDENCY),
    HEADER_INCLUSION: (INCLUDE_DEPENDENCY, DIRECT_CALL, MACRO_EXPANSION, TYPE_USAGE, MEMBER_REFERENCE),
}

STRATEGIES = tuple(sorted(_STRATEGY_PRIORITY))

_NODE_KINDS = (KIND_FUNCTION, KIND_RECORD, KIND_CLASS, KIND_MACRO)

_CALL_KEYWORDS = frozenset((
    "if", "for", "while", "switch", "return", "sizeof", "alignof", "defined",
    "case", "do", "else", "catch", "throw", "new", "delete", "decltype",
    "typeid", "static_assert", "_Static_assert", "__attribute__", "__declspec",
))


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    kind: str
    order_key: int = 0  # byte offset of the first reference inside src's span


@dataclass
class CodeGraph:
    nodes: dict[str, SemanticUnit] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    _adjacency: dict[str, list[Edge]] = field(default_factory=dict, repr=False)
    _node_order: dict[str, int] = field(default_factory=dict, repr=False)

    def finalize(self) -> "CodeGraph":
        ordered = sorted(self.nodes.values(), key=lambda u: (u.file, u.start, u.id))
        self._node_order = {u.id: i for i, u in enumerate(ordered)}
        self._adjacency = {u.id: [] for u in ordered}
        for e in self.edges:
            self._adjacency[e.src].append(e)
        return self

    def ordered_nodes(self) -> list[SemanticUnit]:
        return sorted(self.nodes.values(), key=lambda u: self._node_order[u.id])

    def out_edges(self, node_id: str) -> list[Edge]:
        return self._adjacency.get(node_id, [])

    def node_rank(self, node_id: str) -> int:
        return self._node_order[node_id]

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"id": u.id, "kind": u.kind, "file": u.file,
                 "span": [u.start, u.end], "name": u.name}
                for u in self.ordered_nodes()
            ],
            "edges": [
                {"from": e.src, "to": e.dst, "kind": e.kind}
                for e in sorted(self.edges, key=lambda e: (self._node_order[e.src],
                                                           self._node_order[e.dst], e.kind))
            ],
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class GraphPath:
    units: tuple[SemanticUnit, ...]

    @property
    def depth(self) -> int:
        return len(self.units) - 1

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(u.id for u in self.units)


@dataclass(frozen=True)
class PathSample:
    text: str
    path: GraphPath
    token_count: int

    @property
    def files(self) -> list[str]:
        return [u.file for u in self.path.units]


def graph_node_units(units: list[SemanticUnit]) -> list[SemanticUnit]:
    """Units that become graph nodes: functions, record types, classes and
    macros, excluding anything nested inside a function body."""
    by_file: dict[str, list[SemanticUnit]] = {}
    for u in units:
        by_file.setdefault(u.file, []).append(u)
    keep = []
    for file_units in by_file.values():
        funcs = [u for u in file_units if u.kind == KIND_FUNCTION]
        for u in file_units:
            if u.kind not in _NODE_KINDS:
                continue
            nested = any(
                f.start < u.start and u.end <= f.end for f in funcs if f.id != u.id
            )
            if not nested:
                keep.append(u)
    return sorted(keep, key=lambda u: (u.file, u.start, u.id))


def _include_map(files: dict[str, str]) -> tuple[dict[str, dict[str, int]], int]:
    """file -> {included corpus file: directive byte offset}; also returns the
    count of includes that resolve to nothing in the corpus (system headers)."""
    paths = sorted(files)
    result: dict[str, dict[str, int]] = {p: {} for p in paths}
    unresolved = 0
    for path, content in sorted(files.items()):
        for tok in lex(content):
            if tok.kind != "preproc":
                continue
            target = include_target(content[tok.start : tok.end])
            if target is None:
                continue
            resolved = _resolve_include(target, path, paths)
            if resolved is None:
                unresolved += 1
            elif resolved not in result[path]:
                result[path][resolved] = tok.start
    return result, unresolved


def _resolve_include(target: str, from_path: str, paths: list[str]) -> str | None:
    """Match an include target against corpus paths by longest suffix."""
    target = target.replace("\\", "/").lstrip("./")
    base_dir = str(Path(from_path).parent)
    local = str(Path(base_dir) / target) if base_dir != "." else target
    if local in paths:
        return local
    candidates = [p for p in paths if p == target or p.endswith("/" + target)]
    if not candidates:
        return None
    return sorted(candidates, key=lambda p: (len(p), p))[0]


def _reachable_files(start: str, includes: dict[str, dict[str, int]]) -> set[str]:
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for nxt in includes.get(cur, {}):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    seen.discard(start)
    return seen


class _Resolver:
    def __init__(self, nodes: list[SemanticUnit], includes: dict[str, dict[str, int]]):
        self.includes = includes
        self.funcs: dict[str, list[SemanticUnit]] = {}
        self.records: dict[str, list[SemanticUnit]] = {}
        self.macros: dict[str, list[SemanticUnit]] = {}
        for u in nodes:
            if u.name is None:
                continue
            if u.kind == KIND_FUNCTION:
                self.funcs.setdefault(u.name, []).append(u)
            elif u.kind in (KIND_RECORD, KIND_CLASS):
                self.records.setdefault(u.name, []).append(u)
            elif u.kind == KIND_MACRO:
                self.macros.setdefault(u.name, []).append(u)
        self._reach_cache: dict[str, set[str]] = {}

    def _reach(self, path: str) -> set[str]:
        if path not in self._reach_cache:
            self._reach_cache[path] = _reachable_files(path, self.includes)
        return self._reach_cache[path]

    def resolve(self, index: dict[str, list[SemanticUnit]], name: str,
                from_file: str) -> list[SemanticUnit]:
        candidates = index.get(name, [])
        if not candidates:
            return []
        same = [u for u in candidates if u.file == from_file]
        if same:
            return same
        reach = self._reach(from_file)
        near = [u for u in candidates if u.file in reach]
        if near:
            return near
        return candidates


def build_graph(units: list[SemanticUnit], files: dict[str, str]) -> CodeGraph:
    """Construct the typed dependency graph over node units.

    files maps corpus-relative path to cleaned content.
    """
    nodes = graph_node_units(units)
    includes, unresolved_includes = _include_map(files)
    resolver = _Resolver(nodes, includes)
    graph = CodeGraph(nodes={u.id: u for u in nodes})
    diag = {"unresolved_calls": 0, "unresolved_members": 0, "self_edges": 0,
            "unresolved_includes": unresolved_includes}
    edge_set: dict[tuple[str, str, str], int] = {}

    def add_edge(src: SemanticUnit, dst: SemanticUnit, kind: str, where: int):
        if src.id == dst.id:
            diag["self_edges"] += 1
        key = (src.id, dst.id, kind)
        if key not in edge_set:
            edge_set[key] = where

    nodes_by_file: dict[str, list[SemanticUnit]] = {}
    for u in nodes:
        nodes_by_file.setdefault(u.file, []).append(u)

    for path in sorted(files):
        content = files[path]
        file_nodes = sorted(nodes_by_file.get(path, []), key=lambda u: (u.start, -u.end))
        if not file_nodes:
            continue
        _scan_file_references(content, path, file_nodes, resolver, add_edge, diag)

    # include dependencies: every unit of the including file depends on every
    # node unit of the included file
    for path, incs in includes.items():
        for target, offset in incs.items():
            for u in nodes_by_file.get(path, []):
                for v in nodes_by_file.get(target, []):
                    add_edge(u, v, INCLUDE_DEPENDENCY, offset)

    graph.edges = [
        Edge(src, dst, kind, order_key)
        for (src, dst, kind), order_key in edge_set.items()
    ]
    graph.diagnostics = diag
    return graph.finalize()


def _owner_at(file_nodes: list[SemanticUnit], pos: int) -> SemanticUnit | None:
    """Innermost node unit containing pos (file_nodes sorted by start)."""
    best = None
    for u in file_nodes:
        if u.start <= pos < u.end:
            if best is None or (u.start >= best.start and u.end <= best.end):
                best = u
        elif u.start > pos:
            break
    return best


def _scan_file_references(content, path, file_nodes, resolver, add_edge, diag):
    toks = [t for t in lex(content) if t.kind in ("ident", "punct", "preproc")]
    # expand macro definition bodies so macros can reference other units
    scan_items: list[tuple[int, str, str]] = []  # (abs offset, kind, text)
    for t in toks:
        text = content[t.start : t.end]
        if t.kind == "preproc":
            stripped = text.lstrip("#").lstrip(" \t")
            if stripped.startswith("define"):
                inner = lex(text.lstrip("#"))
                idents_seen = 0
                for it in inner:
                    if it.kind not in ("ident", "punct"):
                        continue
                    itext = text.lstrip("#")[it.start : it.end]
                    if it.kind == "ident" and idents_seen < 2:
                        idents_seen += 1  # skip 'define' and the macro name
                        continue
                    scan_items.append((t.start, it.kind, itext))
            continue
        scan_items.append((t.start, t.kind, text))

    var_types: dict[tuple[str, str], str] = {}  # (owner id, var) -> record name
    sig_seen: set[str] = set()
    n = len(scan_items)
    for i, (pos, kind, text) in enumerate(scan_items):
        if kind != "ident":
            continue
        owner = _owner_at(file_nodes, pos)
        if owner is None:
            continue
        prev_text = scan_items[i - 1][2] if i > 0 else ""
        next_kind, next_text = (scan_items[i + 1][1], scan_items[i + 1][2]) if i + 1 < n else ("", "")

        # member access: var.field / var->field
        if prev_text in (".", "->") and i >= 2:
            var = scan_items[i - 2][2]
            rec_name = var_types.get((owner.id, var))
            if rec_name is not None:
                for v in resolver.resolve(resolver.records, rec_name, path):
                    add_edge(owner, v, MEMBER_REFERENCE, pos)
            else:
                diag["unresolved_members"] += 1
            continue

        # macro usage
        macro_targets = resolver.resolve(resolver.macros, text, path)
        for v in macro_targets:
            if v.id != owner.id:
                add_edge(owner, v, MACRO_EXPANSION, pos)

        # type usage and variable declarations
        record_targets = resolver.resolve(resolver.records, text, path)
        if record_targets:
            for v in record_targets:
                if v.id != owner.id:
                    add_edge(owner, v, TYPE_USAGE, pos)
            j = i + 1
            while j < n and scan_items[j][2] in ("*", "&", "const"):
                j += 1
            if j < n and scan_items[j][1] == "ident":
                var_types[(owner.id, scan_items[j][2])] = text
            continue

        # call site: ident immediately followed by '('
        if next_kind == "punct" and next_text == "(" and text not in _CALL_KEYWORDS:
            if (
                owner.kind == KIND_FUNCTION
                and text == owner.name
                and prev_text not in (".", "->")
                and owner.id not in sig_seen
            ):
                # the unit's own signature; a recursive call repeats later
                sig_seen.add(owner.id)
                continue
            targets = resolver.resolve(resolver.funcs, text, path)
            if targets:
                for v in targets:
                    add_edge(owner, v, DIRECT_CALL, pos)
            elif not macro_targets:
                diag["unresolved_calls"] += 1


def select_edges(node_id: str, graph: CodeGraph, k: int, strategy: str = FORWARD_CALL) -> list[Edge]:
    """Outgoing edges ranked by strategy kind priority, then by reference
    order within the node's span; first k returned."""
    priority = {kind: i for i, kind in enumerate(_STRATEGY_PRIORITY[strategy])}
    edges = sorted(
        graph.out_edges(node_id),
        key=lambda e: (priority[e.kind], e.order_key, graph.node_rank(e.dst)),
    )
    return edges[:k]


def enumerate_paths(graph: CodeGraph, depth: int, breadth: int,
                    strategy: str = FORWARD_CALL) -> list[GraphPath]:
    """All node-simple directed paths of length <= depth, following at most
    `breadth` ranked outgoing edges per expansion step.  Every node is itself
    a depth-0 path."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if breadth < 1:
        raise ValueError("breadth must be >= 1")
    nodes = graph.ordered_nodes()
    paths: list[tuple[str, ...]] = [(u.id,) for u in nodes]
    frontier = list(paths)
    for _ in range(depth):
        nxt: list[tuple[str, ...]] = []
        for p in frontier:
            seen_targets = set()
            for e in select_edges(p[-1], graph, breadth, strategy):
                if e.dst in seen_targets:
                    continue
                seen_targets.add(e.dst)
                if e.dst in p:
                    continue
                nxt.append(p + (e.dst,))
        paths.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return [GraphPath(tuple(graph.nodes[i] for i in p)) for p in paths]


FILE_ANNOTATION = "/* file: {path} */"


def render_sample(path: GraphPath, corpus: dict[str, str],
                  dependency_first: bool = False) -> PathSample:
    """Concatenate unit code in path order, one blank line between segments.

    When the path spans more than one file, every segment whose file differs
    from the previous segment's (including the first) is prefixed with a
    `/* file: ... */` line.
    """
    units = tuple(reversed(path.units)) if dependency_first else path.units
    multi_file = len({u.file for u in units}) > 1
    segments = []
    prev_file = None
    for u in units:
        if u.file not in corpus:
            raise MissingSource(f"no source for {u.file}")
        code = corpus[u.file][u.start : u.end]
        if multi_file and u.file != prev_file:
            code = FILE_ANNOTATION.format(path=u.file) + "\n" + code
        segments.append(code)
        prev_file = u.file
    text = "\n\n".join(segments)
    return PathSample(text=text, path=path, token_count=len(simple_tokens(text)))


def estimate_complexity(graph: CodeGraph, depth: int,
                        mean_path_len: float | None = None) -> dict:
    """Terms of the enumeration cost bound n + n*d + n*d^D*m."""
    n = len(graph.nodes)
    if n == 0:
        return {"node_count": 0, "avg_outdegree": 0.0, "mean_path_len": 0.0,
                "predicted_ops": 0.0}
    d = len(graph.edges) / n
    m = mean_path_len if mean_path_len is not None else (depth + 2) / 2
    predicted = n + n * d + n * (d ** depth) * m
    return {"node_count": n, "avg_outdegree": d, "mean_path_len": m,
            "predicted_ops": predicted}


def generate_spsr_corpus(
    files: list[RawFile],
    depth: int = 1,
    breadth: int = 4,
    strategy: str = FORWARD_CALL,
    max_tokens: int | None = None,
    dependency_first: bool = False,
) -> tuple[list[PathSample], CodeGraph, dict]:
    """Full composition: extract units, build the graph, enumerate paths,
    render samples.  Samples over max_tokens drop tail units, never splitting
    a unit; a single over-budget unit is emitted alone."""
    units: list[SemanticUnit] = []
    contents: dict[str, str] = {}
    parsed = 0
    for f in sorted(files, key=lambda f: f.path):
        if f.language not in ("C", "CPP"):
            continue
        tree = parse_to_ast(f)
        units.extend(extract_semantic_units(tree, f.path))
        contents[f.path] = f.content
        parsed += 1
    graph = build_graph(units, contents)
    paths = enumerate_paths(graph, depth, breadth, strategy)
    samples = []
    for p in paths:
        sample = render_sample(p, contents, dependency_first)
        if max_tokens is not None:
            kept = p.units
            while len(kept) > 1 and sample.token_count > max_tokens:
                kept = kept[:-1]
                sample = render_sample(GraphPath(kept), contents, dependency_first)
        samples.append(sample)
    stats = {
        "files_parsed": parsed,
        "units": len(units),
        "graph_nodes": len(graph.nodes),
        "graph_edges": len(graph.edges),
        "paths": len(paths),
        "samples": len(samples),
        "diagnostics": graph.diagnostics,
    }
    return samples, graph, stats


def write_graph_json(graph: CodeGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
