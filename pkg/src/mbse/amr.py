"""Penman-notation AMR graphs: reading, writing, triples and validation.

An :class:`AmrGraph` keeps the surface form of a parse: inverse roles such as
``:ARG0-of`` stay as written and string constants keep their quotes. Matching
concerns (quote stripping, role lowercasing, the synthetic ``TOP`` triple)
live in :func:`extract_triples`.

    >>> g = parse_penman('(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))')
    >>> sorted(g.nodes.items())
    [('b', 'boy'), ('g', 'go-02'), ('w', 'want-01')]
    >>> len(extract_triples(g))
    7
"""

from __future__ import annotations

import logging
import os
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional

log = logging.getLogger(__name__)

Edge = tuple[str, str, str]
Attribute = tuple[str, str, str]

TOP_ROLE = "TOP"
TOP_VALUE = "top"

_VARIABLE_RE = re.compile(r"^[a-z][0-9]*$")
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<role>:[^\s()"]*)
  | (?P<symbol>[^\s()"]+)
    """,
    re.VERBOSE,
)


class PenmanError(ValueError):
    """Base class for Penman parse errors; carries a 1-based line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line else ""
        super().__init__(f"{message}{where}")


class EmptyInputError(PenmanError):
    pass


class UnbalancedParenthesesError(PenmanError):
    pass


class DuplicateVariableError(PenmanError):
    pass


class UndefinedVariableError(PenmanError):
    pass


class InvalidGraphError(ValueError):
    """Raised when a graph violates the AmrGraph invariants."""


class Triple(NamedTuple):
    kind: str  # 'instance' | 'attribute' | 'relation'
    arg1: str
    rel: str
    arg2: str


TripleSet = tuple[Triple, ...]


@dataclass
class AmrGraph:
    """A rooted, directed, labeled AMR graph.

    ``edges`` and ``attributes`` hold ``(source, role, target)`` with roles
    stored without the leading colon. ``order`` is filled by the parser with a
    sequence number per edge/attribute so that serialization reproduces the
    original child order; graphs built by hand leave it empty.
    """

    root: str
    nodes: dict[str, str]
    edges: list[Edge] = field(default_factory=list)
    attributes: list[Attribute] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)
    comments: list[str] = field(default_factory=list)
    order: dict[tuple[str, int], int] = field(default_factory=dict, compare=False, repr=False)

    @property
    def id(self) -> Optional[str]:
        return self.metadata.get("id")

    @property
    def variables(self) -> list[str]:
        return list(self.nodes)

    def check(self) -> None:
        """Raise :class:`InvalidGraphError` if an invariant is violated."""
        if not self.nodes:
            raise InvalidGraphError("graph has no nodes")
        if self.root not in self.nodes:
            raise InvalidGraphError(f"root {self.root!r} is not a node")
        for var, concept in self.nodes.items():
            if not concept:
                raise InvalidGraphError(f"variable {var!r} has an empty concept")
        for src, role, tgt in self.edges:
            for v in (src, tgt):
                if v not in self.nodes:
                    raise InvalidGraphError(f"edge :{role} refers to undeclared variable {v!r}")
        for src, role, _ in self.attributes:
            if src not in self.nodes:
                raise InvalidGraphError(f"attribute :{role} on undeclared variable {src!r}")

    def copy(self, **changes) -> "AmrGraph":
        fields = dict(
            root=self.root,
            nodes=dict(self.nodes),
            edges=list(self.edges),
            attributes=list(self.attributes),
            metadata=dict(self.metadata),
            comments=list(self.comments),
            order=dict(self.order),
        )
        fields.update(changes)
        return AmrGraph(**fields)


@dataclass
class ValidationReport:
    well_formed: bool
    connected: bool
    issues: list[str] = field(default_factory=list)
    unreachable: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.well_formed and self.connected


# -- parsing ---------------------------------------------------------------


class _Tok(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]
    li = 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        pos = m.start()
        while li + 1 < len(line_starts) and line_starts[li + 1] <= pos:
            li += 1
        toks.append(_Tok(kind, m.group(), li + 1, pos - line_starts[li] + 1))
    return toks


def _split_metadata(text: str) -> tuple[dict[str, str], list[str], str, int]:
    """Separate leading ``#`` lines from the graph body.

    Returns (metadata, other comment lines, body, line offset of body).
    """
    metadata: dict[str, str] = {}
    comments: list[str] = []
    lines = text.split("\n")
    i = 0
    while i < len(lines):
        stripped = lines[i].strip()
        if not stripped:
            i += 1
            continue
        if not stripped.startswith("#"):
            break
        if "::" in stripped:
            metadata.update(parse_metadata_line(stripped))
        else:
            comments.append(lines[i].rstrip())
        i += 1
    return metadata, comments, "\n".join(lines[i:]), i


def parse_metadata_line(line: str) -> dict[str, str]:
    """Parse ``# ::key value ::key2 value2`` into a dict.

    ``snt`` and ``tok`` take the rest of the line, since sentences may contain
    ``::`` themselves.
    """
    body = line.lstrip("#").strip()
    out: dict[str, str] = {}
    m = re.match(r"::(snt|tok)(?:\s+(.*))?$", body)
    if m:
        out[m.group(1)] = (m.group(2) or "").strip()
        return out
    for part in re.split(r"(?:^|\s)::(?=\S)", body):
        if not part.strip():
            continue
        key, _, value = part.partition(" ")
        out[key.strip()] = value.strip()
    return out


class _Parser:
    def __init__(self, toks: list[_Tok], line_offset: int):
        self.toks = toks
        self.i = 0
        self.offset = line_offset
        self.nodes: dict[str, str] = {}
        self.defined_at: dict[str, _Tok] = {}
        # (source, role, raw token, seq)
        self.children: list[tuple[str, str, _Tok, int]] = []
        self.seq = 0

    def _err(self, cls, msg, tok: Optional[_Tok] = None):
        if tok is None:
            tok = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
        return cls(msg, tok.line + self.offset, tok.col)

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise self._err(UnbalancedParenthesesError, "unbalanced parentheses: unexpected end of input")
        self.i += 1
        return tok

    def parse_node(self) -> str:
        open_tok = self.next()
        assert open_tok.kind == "lparen"
        var_tok = self.next()
        if var_tok.kind != "symbol":
            raise self._err(PenmanError, f"expected variable, found {var_tok.text!r}", var_tok)
        var = var_tok.text
        slash = self.next()
        if slash.text != "/":
            raise self._err(PenmanError, f"expected '/' after variable {var!r}", slash)
        concept_tok = self.next()
        if concept_tok.kind not in ("symbol", "string"):
            raise self._err(PenmanError, f"expected concept for {var!r}", concept_tok)
        concept = concept_tok.text
        if var in self.nodes and self.nodes[var] != concept:
            raise self._err(
                DuplicateVariableError,
                f"variable {var!r} redefined as {concept!r} (was {self.nodes[var]!r})",
                var_tok,
            )
        self.nodes.setdefault(var, concept)
        self.defined_at.setdefault(var, var_tok)
        while True:
            tok = self.peek()
            if tok is None:
                raise self._err(UnbalancedParenthesesError, "unbalanced parentheses: missing ')'", open_tok)
            if tok.kind == "rparen":
                self.i += 1
                return var
            if tok.kind != "role":
                raise self._err(PenmanError, f"expected role or ')', found {tok.text!r}", tok)
            self.i += 1
            role = tok.text[1:]
            target = self.peek()
            if target is None:
                raise self._err(UnbalancedParenthesesError, "unbalanced parentheses: missing ')'", open_tok)
            if target.kind == "lparen":
                child = self.parse_node()
                self.children.append((var, role, _Tok("var", child, target.line, target.col), self.seq))
            elif target.kind in ("symbol", "string"):
                self.i += 1
                self.children.append((var, role, target, self.seq))
            else:
                raise self._err(PenmanError, f"missing value for role :{role}", target)
            self.seq += 1


def parse_penman(text: str) -> AmrGraph:
    """Parse one AMR record (metadata lines plus a Penman expression).

    Additional top-level expressions after the first are kept as
    disconnected fragments of the same graph; :func:`validate` reports them.
    """
    if not text or not text.strip():
        raise EmptyInputError("empty input", 1, 1)
    metadata, comments, body, offset = _split_metadata(text)
    toks = _tokenize(body)
    if not toks:
        raise EmptyInputError("no Penman expression found", offset + 1, 1)
    parser = _Parser(toks, offset)
    roots = []
    while parser.peek() is not None:
        tok = parser.peek()
        if tok.kind == "rparen":
            raise parser._err(UnbalancedParenthesesError, "unbalanced parentheses: unexpected ')'", tok)
        if tok.kind != "lparen":
            raise parser._err(PenmanError, f"expected '(', found {tok.text!r}", tok)
        roots.append(parser.parse_node())

    edges: list[Edge] = []
    attributes: list[Attribute] = []
    order: dict[tuple[str, int], int] = {}
    for src, role, tok, seq in parser.children:
        if tok.kind == "var" or (tok.kind == "symbol" and tok.text in parser.nodes):
            order[("e", len(edges))] = seq
            edges.append((src, role, tok.text))
        elif tok.kind == "symbol" and _VARIABLE_RE.match(tok.text):
            raise parser._err(UndefinedVariableError, f"reference to undefined variable {tok.text!r}", tok)
        else:
            order[("a", len(attributes))] = seq
            attributes.append((src, role, tok.text))
    return AmrGraph(
        root=roots[0],
        nodes=parser.nodes,
        edges=edges,
        attributes=attributes,
        metadata=metadata,
        comments=comments,
        order=order,
    )


# -- serialization -----------------------------------------------------------


def _format_constant(value: str) -> str:
    if value.startswith('"') and value.endswith('"') and len(value) >= 2:
        return value
    if not value or re.search(r'[\s()":]', value) or value == "/":
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    return value


def _children(graph: AmrGraph) -> dict[str, list[tuple[str, str, str]]]:
    """Per-source child list of (kind, role, target)."""
    keyed = []
    for i, (src, role, tgt) in enumerate(graph.edges):
        keyed.append((src, graph.order.get(("e", i)), "e", role, tgt))
    for i, (src, role, val) in enumerate(graph.attributes):
        keyed.append((src, graph.order.get(("a", i)), "a", role, val))
    if any(k[1] is None for k in keyed):
        keyed.sort(key=lambda k: (k[0], k[3], k[4], k[2]))
    else:
        keyed.sort(key=lambda k: k[1])
    out: dict[str, list[tuple[str, str, str]]] = defaultdict(list)
    for src, _, kind, role, tgt in keyed:
        out[src].append((kind, role, tgt))
    return out


def serialize_penman(graph: AmrGraph, indent: int = 4, metadata: bool = False) -> str:
    """Render ``graph`` in Penman notation.

    Nodes not reachable from the root along edge direction are written as
    further top-level expressions, so the triple set always survives a
    round trip.
    """
    graph.check()
    children = _children(graph)
    seen: set[str] = set()

    def render(var: str, depth: int) -> str:
        seen.add(var)
        parts = [f"({var} / {graph.nodes[var]}"]
        pad = "\n" + " " * (indent * (depth + 1))
        for kind, role, tgt in children.get(var, ()):
            if kind == "a":
                parts.append(f"{pad}:{role} {_format_constant(tgt)}")
            elif tgt in seen:
                parts.append(f"{pad}:{role} {tgt}")
            else:
                parts.append(f"{pad}:{role} {render(tgt, depth + 1)}")
        return "".join(parts) + ")"

    blocks = [render(graph.root, 0)]
    for var in graph.nodes:
        if var not in seen:
            blocks.append(render(var, 0))
    body = "\n".join(blocks)
    if metadata:
        return "".join(line + "\n" for line in format_metadata(graph)) + body
    return body


def format_metadata(graph: AmrGraph) -> list[str]:
    lines = []
    for key in ("id", "snt"):
        if key in graph.metadata:
            lines.append(f"# ::{key} {graph.metadata[key]}".rstrip())
    for key, value in graph.metadata.items():
        if key not in ("id", "snt"):
            lines.append(f"# ::{key} {value}".rstrip())
    lines.extend(graph.comments)
    return lines


# -- triples & validation ----------------------------------------------------


def _unquote(value: str) -> str:
    if len(value) >= 2 and value.startswith('"') and value.endswith('"'):
        return re.sub(r"\\(.)", r"\1", value[1:-1])
    return value


def extract_triples(graph: AmrGraph) -> TripleSet:
    """Instance, attribute (incl. TOP) and relation triples, duplicates removed."""
    graph.check()
    triples: dict[Triple, None] = {}
    for var, concept in graph.nodes.items():
        triples[Triple("instance", var, "instance", _unquote(concept))] = None
    triples[Triple("attribute", graph.root, TOP_ROLE, TOP_VALUE)] = None
    for src, role, val in graph.attributes:
        triples[Triple("attribute", src, role.lower(), _unquote(val))] = None
    for src, role, tgt in graph.edges:
        triples[Triple("relation", src, role.lower(), tgt)] = None
    return tuple(triples)


def validate(graph: AmrGraph) -> ValidationReport:
    issues: list[str] = []
    well_formed = True
    try:
        graph.check()
    except InvalidGraphError as exc:
        well_formed = False
        issues.append(str(exc))
    if not well_formed or graph.root not in graph.nodes:
        return ValidationReport(False, False, issues)

    adjacency: dict[str, set[str]] = defaultdict(set)
    for src, _, tgt in graph.edges:
        adjacency[src].add(tgt)
        adjacency[tgt].add(src)
    reached = {graph.root}
    stack = [graph.root]
    while stack:
        for nxt in adjacency[stack.pop()]:
            if nxt not in reached:
                reached.add(nxt)
                stack.append(nxt)
    unreachable = [v for v in graph.nodes if v not in reached]
    for v in unreachable:
        issues.append(f"variable {v!r} ({graph.nodes[v]}) is not connected to root {graph.root!r}")
    return ValidationReport(True, not unreachable, issues, unreachable)


# -- files ---------------------------------------------------------------------


@dataclass
class DroppedRecord:
    source: str
    position: int
    sentence_id: Optional[str]
    reason: str


def iter_blocks(data: bytes) -> Iterator[bytes]:
    """Split raw file bytes into records separated by blank lines."""
    block: list[bytes] = []
    for line in data.split(b"\n"):
        if line.strip():
            block.append(line.rstrip(b"\r"))
        elif block:
            yield b"\n".join(block)
            block = []
    if block:
        yield b"\n".join(block)


def _sniff_id(block: bytes) -> Optional[str]:
    m = re.search(rb"::id\s+(\S+)", block)
    return m.group(1).decode("utf-8", errors="replace") if m else None


def read_records(path: "str | os.PathLike", dropped: Optional[list] = None) -> list[Optional[AmrGraph]]:
    """Read an AMR file; one entry per record, ``None`` for dropped ones.

    Records that are not valid UTF-8 or fail to parse are logged and,
    if ``dropped`` is given, appended to it as :class:`DroppedRecord`.
    Records carrying only comments (e.g. a file header) are skipped.
    """
    name = str(path)
    if name == "-":
        import sys

        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    out: list[Optional[AmrGraph]] = []
    for block in iter_blocks(data):
        if all(line.lstrip().startswith(b"#") for line in block.split(b"\n")) and b"::id" not in block:
            continue
        pos = len(out)
        try:
            text = block.decode("utf-8")
        except UnicodeDecodeError as exc:
            reason = f"bad utf-8 encoding ({exc.reason} at byte {exc.start})"
            _drop(dropped, name, pos, _sniff_id(block), reason)
            out.append(None)
            continue
        try:
            out.append(parse_penman(text))
        except PenmanError as exc:
            _drop(dropped, name, pos, _sniff_id(block), f"parse error: {exc}")
            out.append(None)
    return out


def _drop(dropped, source, pos, sid, reason):
    log.warning("dropping record %s of %s (id=%s): %s", pos, source, sid, reason)
    if dropped is not None:
        dropped.append(DroppedRecord(source, pos, sid, reason))


def read_amr_file(path: "str | os.PathLike", dropped: Optional[list] = None) -> list[AmrGraph]:
    return [g for g in read_records(path, dropped) if g is not None]


def format_amr_file(graphs: Iterable[AmrGraph]) -> str:
    return "".join(serialize_penman(g, metadata=True) + "\n\n" for g in graphs)


def write_amr_file(path: "str | os.PathLike", graphs: Iterable[AmrGraph]) -> None:
    from .io import write_text

    write_text(path, format_amr_file(graphs))
