"""Lightweight concrete-syntax parser for C and C++.

Three layers, all linear in input size:

  1. a lexer producing tokens with byte spans (comments, strings, chars,
     numbers, identifiers, punctuation, whole preprocessor directives);
  2. a bracket-group pass nesting (), [] and {} with error nodes for
     stray or unclosed brackets;
  3. a construct pass that recognizes the syntactic shapes the rest of
     the toolkit cares about: function definitions, record/class
     definitions, if/switch branches, loops, and macro definitions.

The parser is deliberately tolerant: anything it cannot recognize stays
in the tree as plain statements, and malformed input yields error nodes
rather than exceptions, so downstream passes can diff error counts.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field

# ---------------------------------------------------------------------------
# Lexer

_PUNCT3 = ("<<=", ">>=", "->*", "...")
_PUNCT2 = (
    "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "##", ".*",
)

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")
_SPACE = frozenset(" \t\r\n\v\f")

_RAW_PREFIXES = frozenset(("R", "uR", "UR", "LR", "u8R"))


@dataclass(frozen=True)
class Token:
    kind: str  # ident number string char punct comment preproc error
    start: int
    end: int
    note: str = ""  # populated for error tokens only


def _scan_string(src: str, i: int, quote: str) -> tuple[int, bool]:
    """Scan from the opening quote; returns (end, terminated)."""
    n = len(src)
    j = i + 1
    while j < n:
        c = src[j]
        if c == "\\" and j + 1 < n:
            j += 2
            continue
        if c == quote:
            return j + 1, True
        if c == "\n":
            return j, False  # recover at newline
        j += 1
    return n, False


def _scan_raw_string(src: str, i: int) -> tuple[int, bool]:
    """Scan a C++ raw string starting at the opening double quote."""
    n = len(src)
    j = i + 1
    delim = ""
    while j < n and src[j] not in "(\n":
        delim += src[j]
        j += 1
    if j >= n or src[j] != "(":
        return j, False
    closer = ")" + delim + '"'
    k = src.find(closer, j + 1)
    if k == -1:
        return n, False
    return k + len(closer), True


def lex(src: str) -> list[Token]:
    """Tokenize C/C++ source. Total: malformed input yields error tokens."""
    tokens: list[Token] = []
    n = len(src)
    i = 0
    line_start = True  # only whitespace seen since start of line
    while i < n:
        c = src[i]
        if c in _SPACE:
            if c == "\n":
                line_start = True
            i += 1
            continue
        start = i
        if c == "#" and line_start:
            # whole directive, honoring backslash-newline continuations
            j = i
            while j < n:
                if src[j] == "\n":
                    bs = j - 1
                    while bs > i and src[bs] in " \t\r":
                        bs -= 1
                    if bs > i and src[bs] == "\\":
                        j += 1
                        continue
                    break
                j += 1
            tokens.append(Token("preproc", start, j))
            i = j
            continue
        line_start = False
        if c == "/" and i + 1 < n:
            nxt = src[i + 1]
            if nxt == "/":
                j = src.find("\n", i)
                j = n if j == -1 else j
                tokens.append(Token("comment", start, j))
                i = j
                continue
            if nxt == "*":
                j = src.find("*/", i + 2)
                if j == -1:
                    tokens.append(Token("error", start, n, note="unterminated_comment"))
                    i = n
                else:
                    tokens.append(Token("comment", start, j + 2))
                    i = j + 2
                continue
        if c in _IDENT_START:
            j = i + 1
            while j < n and src[j] in _IDENT_CONT:
                j += 1
            word = src[i:j]
            if j < n and src[j] == '"' and word in _RAW_PREFIXES:
                end, ok = _scan_raw_string(src, j)
                tokens.append(Token("string" if ok else "error", start, end,
                                    note="" if ok else "unterminated_string"))
                i = end
                continue
            if j < n and src[j] in "'\"" and word in ("u", "U", "L", "u8"):
                quote = src[j]
                end, ok = _scan_string(src, j, quote)
                kind = ("char" if quote == "'" else "string") if ok else "error"
                tokens.append(Token(kind, start, end,
                                    note="" if ok else "unterminated_string"))
                i = end
                continue
            tokens.append(Token("ident", start, j))
            i = j
            continue
        if c in _DIGITS or (c == "." and i + 1 < n and src[i + 1] in _DIGITS):
            # pp-number: digits, idents, dots, separators, exponent signs
            j = i + 1
            while j < n:
                ch = src[j]
                if ch in _IDENT_CONT or ch == ".":
                    j += 1
                elif ch == "'" and j + 1 < n and src[j + 1] in _IDENT_CONT:
                    j += 2
                elif ch in "+-" and src[j - 1] in "eEpP":
                    j += 1
                else:
                    break
            tokens.append(Token("number", start, j))
            i = j
            continue
        if c == '"':
            end, ok = _scan_string(src, i, '"')
            tokens.append(Token("string" if ok else "error", start, end,
                                note="" if ok else "unterminated_string"))
            i = end
            continue
        if c == "'":
            end, ok = _scan_string(src, i, "'")
            tokens.append(Token("char" if ok else "error", start, end,
                                note="" if ok else "unterminated_char"))
            i = end
            continue
        three = src[i : i + 3]
        if three in _PUNCT3:
            tokens.append(Token("punct", start, i + 3))
            i += 3
            continue
        two = src[i : i + 2]
        if two in _PUNCT2:
            tokens.append(Token("punct", start, i + 2))
            i += 2
            continue
        tokens.append(Token("punct", start, i + 1))
        i += 1
    return tokens


_DEFINE_RE = re.compile(r"#\s*define\s+([A-Za-z_$][A-Za-z0-9_$]*)")
_INCLUDE_RE = re.compile(r'#\s*include\s*[<"]([^>"\n]+)[>"]')


def macro_name(directive_text: str) -> str | None:
    m = _DEFINE_RE.match(directive_text)
    return m.group(1) if m else None


def include_target(directive_text: str) -> str | None:
    m = _INCLUDE_RE.match(directive_text)
    return m.group(1) if m else None


# ---------------------------------------------------------------------------
# Tree

@dataclass
class Node:
    type: str
    start: int
    end: int
    children: list = field(default_factory=list)
    token: Token | None = None
    name: str | None = None
    subtree_size: int = 1

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


_OPENERS = {"(": "paren_group", "[": "bracket_group", "{": "brace_group"}
_CLOSERS = {")": "(", "]": "[", "}": "{"}

ERROR_TYPE = "error"

# construct node type -> semantic unit kind
CONSTRUCT_KINDS = {
    "function_definition": "FunctionDef",
    "record_type_definition": "RecordTypeDef",
    "class_definition": "ClassDef",
    "if_statement": "ConditionalBranch",
    "switch_statement": "ConditionalBranch",
    "loop_statement": "LoopBody",
    "macro_definition": "MacroDef",
}

_TYPE_WORDS = frozenset((
    "void", "int", "char", "long", "short", "float", "double",
    "signed", "unsigned", "bool", "auto", "const", "static", "inline",
))
_NOT_A_CALL = frozenset((
    "if", "for", "while", "switch", "return", "sizeof", "alignof", "alignas",
    "catch", "do", "else", "case", "defined", "decltype", "typeid", "throw",
    "new", "delete", "_Alignof", "_Static_assert", "static_assert",
    "__attribute__", "__declspec", "noexcept",
))
_RECORD_WORDS = frozenset(("struct", "union", "enum", "class"))
_ACCESS_WORDS = frozenset(("public", "private", "protected"))


def _leaf(tok: Token) -> Node:
    return Node(tok.kind, tok.start, tok.end, token=tok)


def _group(tokens: list[Token], src: str) -> Node:
    """Nest bracket pairs; stray closers and unclosed openers become errors."""
    root = Node("translation_unit", 0, len(src))
    stack = [root]
    for tok in tokens:
        if tok.kind == "punct" and tok.end - tok.start == 1:
            ch = src[tok.start]
            if ch in _OPENERS:
                group = Node(_OPENERS[ch], tok.start, tok.end)
                group.children.append(_leaf(tok))
                stack[-1].children.append(group)
                stack.append(group)
                continue
            if ch in _CLOSERS:
                if len(stack) > 1 and src[stack[-1].start] == _CLOSERS[ch]:
                    top = stack.pop()
                    top.children.append(_leaf(tok))
                    top.end = tok.end
                else:
                    stack[-1].children.append(Node(ERROR_TYPE, tok.start, tok.end, token=tok))
                continue
        stack[-1].children.append(_leaf(tok))
    while len(stack) > 1:
        top = stack.pop()
        tail = top.children[-1].end if top.children else top.start
        top.children.append(Node(ERROR_TYPE, tail, tail))
        top.end = tail
    return root


class _Recognizer:
    """Turns flat sibling lists (tokens and bracket groups) into constructs."""

    def __init__(self, src: str):
        self.src = src

    def text(self, node: Node) -> str:
        return self.src[node.start : node.end]

    def word(self, node: Node) -> str | None:
        return self.src[node.start : node.end] if node.type == "ident" else None

    def punct(self, node: Node) -> str | None:
        return self.src[node.start : node.end] if node.type == "punct" else None

    def _skip_comments(self, items, j):
        while j < len(items) and items[j].type == "comment":
            j += 1
        return j

    def _wrap(self, node_type: str, children: list[Node], name: str | None = None) -> Node:
        node = Node(node_type, children[0].start, children[-1].end, children)
        node.name = name
        return node

    def _classify_preproc(self, node: Node) -> Node:
        body = self.text(node)
        stripped = body.lstrip("#").lstrip(" \t")
        if stripped.startswith("define"):
            return Node("macro_definition", node.start, node.end, [node],
                        name=macro_name(body))
        if stripped.startswith("include"):
            return Node("include_directive", node.start, node.end, [node],
                        name=include_target(body))
        return node

    # -- statement-level scanning ------------------------------------------

    def recognize(self, items: list[Node]) -> list[Node]:
        out: list[Node] = []
        i = 0
        n = len(items)
        while i < n:
            it = items[i]
            if it.type == "preproc":
                out.append(self._classify_preproc(it))
                i += 1
                continue
            if it.type in ("comment", ERROR_TYPE):
                out.append(it)
                i += 1
                continue
            if it.type == "brace_group":
                out.append(self._block(it))
                i += 1
                continue
            w = self.word(it)
            if w == "if":
                node, i = self._if(items, i)
                out.append(node)
                continue
            if w in ("for", "while"):
                node, i = self._loop(items, i)
                out.append(node)
                continue
            if w == "do":
                node, i = self._do(items, i)
                out.append(node)
                continue
            if w == "switch":
                node, i = self._switch(items, i)
                out.append(node)
                continue
            if w == "namespace":
                node, i = self._namespace(items, i)
                out.append(node)
                continue
            if w == "extern":
                j = self._skip_comments(items, i + 1)
                if j < n and items[j].type == "string":
                    j2 = self._skip_comments(items, j + 1)
                    if j2 < n and items[j2].type == "brace_group":
                        body = self._block(items[j2])
                        out.append(self._wrap("linkage_block", items[i:j2] + [body]))
                        i = j2 + 1
                        continue
            if w in _ACCESS_WORDS:
                j = self._skip_comments(items, i + 1)
                if j < n and self.punct(items[j]) == ":":
                    out.append(self._wrap("label", items[i : j + 1]))
                    i = j + 1
                    continue
            if w in ("case", "default"):
                j = i + 1
                while j < n and self.punct(items[j]) != ":":
                    if items[j].type == "brace_group" or self.punct(items[j]) == ";":
                        break
                    j += 1
                if j < n and self.punct(items[j]) == ":":
                    out.append(self._wrap("label", items[i : j + 1]))
                    i = j + 1
                    continue
            node, i = self._statementish(items, i)
            out.append(node)
        return out

    def _block(self, brace: Node) -> Node:
        """Re-recognize the interior of a brace group, keeping its brackets."""
        kids = brace.children
        if not kids:
            return brace
        open_leaf = kids[0]
        close_leaf = kids[-1] if len(kids) >= 2 else None
        closed = close_leaf is not None and close_leaf.type == "punct"
        inner = kids[1:-1] if closed else kids[1:]
        rebuilt = self.recognize(inner)
        children = [open_leaf] + rebuilt + ([close_leaf] if closed else [])
        return Node("brace_group", brace.start, brace.end, children)

    def _substatement(self, items, j) -> tuple[list[Node], int]:
        n = len(items)
        collected: list[Node] = []
        while j < n and items[j].type in ("comment", "preproc"):
            collected.append(items[j] if items[j].type == "comment"
                             else self._classify_preproc(items[j]))
            j += 1
        if j >= n:
            return collected, j
        it = items[j]
        if it.type == "brace_group":
            collected.append(self._block(it))
            return collected, j + 1
        w = self.word(it)
        if w == "if":
            node, j = self._if(items, j)
        elif w in ("for", "while"):
            node, j = self._loop(items, j)
        elif w == "do":
            node, j = self._do(items, j)
        elif w == "switch":
            node, j = self._switch(items, j)
        else:
            node, j = self._statementish(items, j)
        collected.append(node)
        return collected, j

    def _head_paren(self, items, j) -> tuple[list[Node], int]:
        """Collect head tokens up to and including the condition parens."""
        n = len(items)
        head: list[Node] = []
        while j < n:
            it = items[j]
            if it.type == "paren_group":
                head.append(it)
                return head, j + 1
            if it.type == "brace_group" or self.punct(it) == ";":
                break
            if it.type in ("ident", "comment") or self.punct(it) is not None:
                head.append(it)
                j += 1
                continue
            break
        return head, j

    def _if(self, items, i) -> tuple[Node, int]:
        children = [items[i]]
        head, j = self._head_paren(items, i + 1)
        children.extend(head)
        body, j = self._substatement(items, j)
        children.extend(body)
        k = self._skip_comments(items, j)
        if k < len(items) and self.word(items[k]) == "else":
            children.extend(items[j : k + 1])
            body2, j = self._substatement(items, k + 1)
            children.extend(body2)
        return self._wrap("if_statement", children), j

    def _switch(self, items, i) -> tuple[Node, int]:
        children = [items[i]]
        head, j = self._head_paren(items, i + 1)
        children.extend(head)
        body, j = self._substatement(items, j)
        children.extend(body)
        return self._wrap("switch_statement", children), j

    def _loop(self, items, i) -> tuple[Node, int]:
        children = [items[i]]
        head, j = self._head_paren(items, i + 1)
        children.extend(head)
        body, j = self._substatement(items, j)
        children.extend(body)
        return self._wrap("loop_statement", children), j

    def _do(self, items, i) -> tuple[Node, int]:
        children = [items[i]]
        body, j = self._substatement(items, i + 1)
        children.extend(body)
        n = len(items)
        k = self._skip_comments(items, j)
        if k < n and self.word(items[k]) == "while":
            children.extend(items[j : k + 1])
            j = k + 1
            k = self._skip_comments(items, j)
            if k < n and items[k].type == "paren_group":
                children.extend(items[j : k + 1])
                j = k + 1
                k = self._skip_comments(items, j)
                if k < n and self.punct(items[k]) == ";":
                    children.extend(items[j : k + 1])
                    j = k + 1
        return self._wrap("loop_statement", children), j

    def _namespace(self, items, i) -> tuple[Node, int]:
        n = len(items)
        j = i + 1
        while j < n and (items[j].type in ("ident", "comment") or self.punct(items[j]) == "::"):
            j += 1
        if j < n and items[j].type == "brace_group":
            body = self._block(items[j])
            return self._wrap("namespace_block", items[i:j] + [body]), j + 1
        return self._statementish(items, i)

    def _func_candidate(self, items, lo, hi) -> tuple[int, str | None] | None:
        """First paren group in items[lo:hi] directly preceded by a plausible
        function name; returns (paren index, name) or None."""
        for j in range(lo, hi):
            if items[j].type != "paren_group":
                continue
            p = j - 1
            while p >= lo and items[p].type == "comment":
                p -= 1
            if p < lo:
                continue
            prev = items[p]
            w = self.word(prev)
            if w is not None and w not in _NOT_A_CALL:
                name = None if w in _TYPE_WORDS or w in _RECORD_WORDS else w
                return j, name
            if prev.type in ("punct", "bracket_group", "paren_group"):
                q = p
                while q >= lo and items[q].type in ("punct", "bracket_group", "paren_group"):
                    q -= 1
                if q >= lo and self.word(items[q]) == "operator":
                    sym = "".join(self.text(items[t]) for t in range(q + 1, p + 1))
                    return j, "operator" + sym
        return None

    def _record_keyword(self, items, lo, hi) -> int | None:
        for j in range(lo, hi):
            if self.word(items[j]) in _RECORD_WORDS:
                return j
        return None

    def _record_name(self, items, kw_idx, brace_idx) -> str | None:
        j = kw_idx + 1
        while j < brace_idx:
            it = items[j]
            w = self.word(it)
            if w in ("__attribute__", "__declspec", "alignas"):
                j += 1
                if j < brace_idx and items[j].type == "paren_group":
                    j += 1
                continue
            if w in ("class", "struct"):  # enum class E
                j += 1
                continue
            if w is not None:
                return w
            if self.punct(it) == ":":
                break
            j += 1
        return None

    def _statementish(self, items, i) -> tuple[Node, int]:
        n = len(items)
        j = i
        seen_eq = False
        while j < n:
            it = items[j]
            p = self.punct(it)
            if p == ";":
                return self._wrap("statement", items[i : j + 1]), j + 1
            if p == "=":
                seen_eq = True
                j += 1
                continue
            if it.type == "brace_group":
                if seen_eq:
                    j += 1  # aggregate initializer; keep scanning to ';'
                    continue
                cand = self._func_candidate(items, i, j)
                if cand is not None:
                    _, name = cand
                    body = self._block(it)
                    return self._wrap("function_definition", items[i:j] + [body], name), j + 1
                kw = self._record_keyword(items, i, j)
                if kw is not None:
                    return self._record_def(items, i, j, kw)
                # generic statement ending in a block (try, asm, ...)
                body = self._block(it)
                return self._wrap("statement", items[i:j] + [body]), j + 1
            j += 1
        return self._wrap("statement", items[i:n]), n

    def _record_def(self, items, i, brace_idx, kw_idx) -> tuple[Node, int]:
        n = len(items)
        body = self._block(items[brace_idx])
        end_idx = brace_idx
        k = brace_idx + 1
        while k < n:  # trailing declarators through ';'
            nxt = items[k]
            pk = self.punct(nxt)
            if pk == ";":
                end_idx = k
                break
            w = self.word(nxt)
            if nxt.type in ("brace_group", "paren_group", "preproc") or (
                w in _RECORD_WORDS or w in _NOT_A_CALL
            ):
                break
            if nxt.type in ("ident", "comment", "bracket_group") or pk in (",", "*", "&"):
                k += 1
                continue
            break
        if end_idx > brace_idx:
            children = items[i:brace_idx] + [body] + items[brace_idx + 1 : end_idx + 1]
            consumed = end_idx + 1
        else:
            children = items[i:brace_idx] + [body]
            consumed = brace_idx + 1
        kind_word = self.word(items[kw_idx])
        node_type = "class_definition" if kind_word == "class" else "record_type_definition"
        name = self._record_name(items, kw_idx, brace_idx)
        if name is None and end_idx > brace_idx:
            for t in range(brace_idx + 1, end_idx):
                w = self.word(items[t])
                if w is not None:
                    name = w
                    break
        return self._wrap(node_type, children, name), consumed


def _finalize(node: Node) -> int:
    size = 1
    for child in node.children:
        size += _finalize(child)
    node.subtree_size = size
    return size


@dataclass
class SyntaxTree:
    """Concrete syntax tree with spans, error nodes, and token index."""

    root: Node
    tokens: list[Token]
    source: str
    language: str = "c"

    error_count: int = 0
    node_count: int = 0
    code_token_starts: list[int] = field(default_factory=list)

    def count_code_tokens(self, start: int, end: int) -> int:
        """Number of non-comment tokens whose start lies in [start, end)."""
        lo = bisect.bisect_left(self.code_token_starts, start)
        hi = bisect.bisect_left(self.code_token_starts, end)
        return hi - lo


def parse(src: str, language: str = "c") -> SyntaxTree:
    tokens = lex(src)
    grouped = _group(tokens, src)
    top = _Recognizer(src).recognize(grouped.children)
    root = Node("translation_unit", 0, len(src), top)
    _finalize(root)
    tree = SyntaxTree(root=root, tokens=tokens, source=src, language=language)
    tree.node_count = root.subtree_size
    tree.error_count = sum(1 for nd in root.walk() if nd.type == ERROR_TYPE)
    tree.code_token_starts = [t.start for t in tokens if t.kind != "comment"]
    return tree
