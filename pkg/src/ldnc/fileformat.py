"""Human-writable text formats for networks, codes, and message files.

Parsing is whitespace-insensitive (any run of spaces or newlines
separates tokens) and ``#`` starts a comment.  Serialization is
canonical: nodes sorted, edges sorted by endpoint pair, sessions by id,
and every gain that equals a shift matrix printed in its compact
``shift g=<strength>`` form, so parse/print round trips are stable.

Network files::

    p: 2
    q: 2
    nodes: 1 2 3
    edges:
      1 -> 2 gain shift g=1
      2 -> 3 gain [[1,0],[0,1]]
    sessions:
      1: 1 -> 3 width 1

Code files carry the horizon, then encoder/decoder matrices keyed by
session id and relay matrices keyed by node id::

    T: 2
    C 1: [[1,0],[0,1]]
    D 1: [[1,0],[0,1]]
    F 2: [[1,1],[0,1]]

Message files list one vector per session: ``W 1: [1,0]``.
"""

from __future__ import annotations

import re

from .coding import LinearCode, validate_code
from .errors import CodeBindingError, ParseError
from .gf_linalg import FieldModulus, GfMatrix, as_shift_strength, shift_matrix
from .network import Edge, LayeredNetwork, Network, Session

_RESERVED = {
    "p", "q", "nodes", "edges", "sessions", "gain", "shift", "g", "width",
    "T", "C", "D", "F", "W",
}
_SECTION_KEYWORDS = {"p", "q", "nodes", "edges", "sessions"}
_TOKEN = re.compile(r"->|[:\[\],=]|[A-Za-z0-9_@.]+")


def _tokenize(text: str) -> list[str]:
    tokens = []
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0]
        pos = 0
        for match in _TOKEN.finditer(line):
            if line[pos:match.start()].strip():
                raise ParseError(f"unexpected characters {line[pos:match.start()]!r}")
            tokens.append(match.group())
            pos = match.end()
        if line[pos:].strip():
            raise ParseError(f"unexpected characters {line[pos:].strip()!r}")
    return tokens


class _Stream:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, token: str) -> None:
        got = self.next()
        if got != token:
            raise ParseError(f"expected {token!r}, got {got!r}")

    def integer(self) -> int:
        tok = self.next()
        if not tok.isdigit():
            raise ParseError(f"expected an integer, got {tok!r}")
        return int(tok)

    def node_id(self) -> str:
        tok = self.next()
        if tok in _RESERVED or not re.fullmatch(r"[A-Za-z0-9_@.]+", tok):
            raise ParseError(f"invalid node id {tok!r}")
        return tok

    def matrix_rows(self) -> list[list[int]]:
        self.expect("[")
        rows = []
        while True:
            rows.append(self._row())
            tok = self.next()
            if tok == "]":
                break
            if tok != ",":
                raise ParseError(f"expected ',' or ']' in matrix, got {tok!r}")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ParseError("matrix rows have unequal lengths")
        return rows

    def _row(self) -> list[int]:
        self.expect("[")
        entries = []
        if self.peek() == "]":
            self.next()
            return entries
        while True:
            entries.append(self.integer())
            tok = self.next()
            if tok == "]":
                return entries
            if tok != ",":
                raise ParseError(f"expected ',' or ']' in row, got {tok!r}")

    def vector(self) -> list[int]:
        return self._row()


# ---------------------------------------------------------------------------
# Networks
# ---------------------------------------------------------------------------


def parse_network(text: str) -> Network:
    ts = _Stream(_tokenize(text))
    p = q = None
    field: FieldModulus | None = None
    nodes: list[str] = []
    edges: list[Edge] = []
    sessions: list[Session] = []
    seen: set[str] = set()

    def gain_matrix(field: FieldModulus) -> GfMatrix:
        if ts.peek() == "shift":
            ts.next()
            ts.expect("g")
            ts.expect("=")
            strength = ts.integer()
            if not 0 <= strength <= q:
                raise ParseError(f"shift strength {strength} outside 0..{q}")
            return shift_matrix(field, q, strength)
        return GfMatrix.from_rows(field, ts.matrix_rows())

    while ts.peek() is not None:
        section = ts.next()
        if section not in _SECTION_KEYWORDS:
            raise ParseError(f"expected a section keyword, got {section!r}")
        if section in seen:
            raise ParseError(f"duplicate section {section!r}")
        seen.add(section)
        ts.expect(":")
        if section == "p":
            p = ts.integer()
            try:
                field = FieldModulus(p)
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        elif section == "q":
            q = ts.integer()
        elif section == "nodes":
            while ts.peek() is not None and ts.peek() not in _SECTION_KEYWORDS:
                nodes.append(ts.node_id())
        elif section == "edges":
            if field is None or q is None:
                raise ParseError("edges section requires p and q to come first")
            while ts.peek() is not None and ts.peek() not in _SECTION_KEYWORDS:
                src = ts.node_id()
                ts.expect("->")
                dst = ts.node_id()
                ts.expect("gain")
                edges.append(Edge(src, dst, gain_matrix(field)))
        elif section == "sessions":
            while ts.peek() is not None and ts.peek() not in _SECTION_KEYWORDS:
                sid = ts.integer()
                ts.expect(":")
                src = ts.node_id()
                ts.expect("->")
                dst = ts.node_id()
                ts.expect("width")
                sessions.append(Session(sid, src, dst, ts.integer()))
    if field is None or q is None:
        raise ParseError("network file must declare p and q")
    return Network(
        field=field,
        q=q,
        nodes=tuple(nodes),
        edges=tuple(edges),
        sessions=tuple(sessions),
    )


def _gain_literal(gain: GfMatrix) -> str:
    strength = as_shift_strength(gain)
    if strength is not None:
        return f"shift g={strength}"
    return matrix_literal(gain)


def matrix_literal(m: GfMatrix) -> str:
    return "[" + ",".join("[" + ",".join(map(str, row)) + "]" for row in m.to_rows()) + "]"


def serialize_network(n: Network) -> str:
    lines = [f"p: {n.field.p}", f"q: {n.q}"]
    lines.append("nodes: " + " ".join(sorted(n.nodes)))
    lines.append("edges:")
    for e in sorted(n.edges, key=lambda e: (e.src, e.dst)):
        lines.append(f"  {e.src} -> {e.dst} gain {_gain_literal(e.gain)}")
    lines.append("sessions:")
    for s in sorted(n.sessions, key=lambda s: s.id):
        lines.append(f"  {s.id}: {s.source} -> {s.destination} width {s.width}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Codes
# ---------------------------------------------------------------------------


def parse_code(text: str, ln: LayeredNetwork) -> LinearCode:
    ts = _Stream(_tokenize(text))
    ts.expect("T")
    ts.expect(":")
    horizon = ts.integer()
    if horizon != ln.horizon:
        raise CodeBindingError(
            f"code horizon {horizon} does not match the network horizon {ln.horizon}"
        )
    field = ln.base.field
    encoders: dict[int, GfMatrix] = {}
    decoders: dict[int, GfMatrix] = {}
    relays: dict[str, GfMatrix] = {}
    while ts.peek() is not None:
        kind = ts.next()
        if kind == "C" or kind == "D":
            key = ts.integer()
            ts.expect(":")
            mat = GfMatrix.from_rows(field, ts.matrix_rows())
            target = encoders if kind == "C" else decoders
            if key in target:
                raise ParseError(f"duplicate {kind} record for session {key}")
            target[key] = mat
        elif kind == "F":
            node = ts.node_id()
            ts.expect(":")
            if node in relays:
                raise ParseError(f"duplicate F record for node {node!r}")
            relays[node] = GfMatrix.from_rows(field, ts.matrix_rows())
        else:
            raise ParseError(f"expected C, D or F record, got {kind!r}")
    code = LinearCode(network=ln, encoders=encoders, decoders=decoders, relays=relays)
    validate_code(ln, code)
    return code


def serialize_code(code: LinearCode) -> str:
    lines = [f"T: {code.network.horizon}"]
    for sid in sorted(code.encoders):
        lines.append(f"C {sid}: {matrix_literal(code.encoders[sid])}")
    for sid in sorted(code.decoders):
        lines.append(f"D {sid}: {matrix_literal(code.decoders[sid])}")
    for node in sorted(code.relays):
        lines.append(f"F {node}: {matrix_literal(code.relays[node])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Messages
# ---------------------------------------------------------------------------


def parse_messages(text: str, ln: LayeredNetwork) -> list[GfMatrix]:
    ts = _Stream(_tokenize(text))
    vectors: dict[int, list[int]] = {}
    while ts.peek() is not None:
        ts.expect("W")
        sid = ts.integer()
        ts.expect(":")
        if sid in vectors:
            raise ParseError(f"duplicate message for session {sid}")
        vectors[sid] = ts.vector()
    sessions = ln.base.sessions_sorted()
    missing = [s.id for s in sessions if s.id not in vectors]
    if missing:
        raise ParseError(f"missing message vectors for sessions {missing}")
    extra = set(vectors) - {s.id for s in sessions}
    if extra:
        raise ParseError(f"message vectors for unknown sessions {sorted(extra)}")
    out = []
    field = ln.base.field
    for s in sessions:
        vec = vectors[s.id]
        want = ln.message_length(s)
        if len(vec) != want:
            raise ParseError(
                f"message for session {s.id} has {len(vec)} entries, expected {want}"
            )
        out.append(GfMatrix.from_rows(field, [[v] for v in vec]) if vec
                   else GfMatrix.from_rows(field, [[]]).T)
    return out


def serialize_messages(ln: LayeredNetwork, messages) -> str:
    lines = []
    for s, m in zip(ln.base.sessions_sorted(), messages):
        flat = ",".join(str(m[i, 0]) for i in range(m.rows))
        lines.append(f"W {s.id}: [{flat}]")
    return "\n".join(lines) + "\n"
