"""Network model: directed graph, per-edge gain matrices, unicast sessions.

A :class:`Network` is immutable once built and may hold structurally
invalid data; :func:`validate` reports every violation as data rather
than raising, and the operations that need a valid network call
:func:`require_valid` first.  :func:`detect_layers` upgrades a network
to a :class:`LayeredNetwork` when a consistent layer assignment exists,
and :func:`reciprocal` builds the reversed network with transposed
gains and swapped session roles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InvalidNetworkError, NotLayeredError
from .gf_linalg import FieldModulus, GfMatrix


@dataclass(frozen=True)
class Session:
    """One unicast flow: message k travels from ``source`` to ``destination``.

    ``width`` is the number of fresh message symbols per time instant; a
    scheme over horizon T carries a message of ``width * T`` symbols.
    """

    id: int
    source: str
    destination: str
    width: int


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    gain: GfMatrix


@dataclass(frozen=True, eq=False)
class Network:
    field: FieldModulus
    q: int
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    sessions: tuple[Session, ...]

    # Structural equality: independent of node/edge/session listing order.
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.field == other.field
            and self.q == other.q
            and set(self.nodes) == set(other.nodes)
            and self.edge_map() == other.edge_map()
            and sorted(self.sessions, key=lambda s: s.id)
            == sorted(other.sessions, key=lambda s: s.id)
        )

    def edge_map(self) -> dict[tuple[str, str], GfMatrix]:
        return {(e.src, e.dst): e.gain for e in self.edges}

    def in_edges(self, node: str) -> list[Edge]:
        return [e for e in self.edges if e.dst == node]

    def out_edges(self, node: str) -> list[Edge]:
        return [e for e in self.edges if e.src == node]

    def sessions_sorted(self) -> tuple[Session, ...]:
        return tuple(sorted(self.sessions, key=lambda s: s.id))

    def session(self, session_id: int) -> Session:
        for s in self.sessions:
            if s.id == session_id:
                return s
        raise KeyError(f"no session with id {session_id}")

    def sessions_sourced_at(self, node: str) -> tuple[Session, ...]:
        return tuple(s for s in self.sessions_sorted() if s.source == node)

    def sessions_decoded_at(self, node: str) -> tuple[Session, ...]:
        return tuple(s for s in self.sessions_sorted() if s.destination == node)


def network(
    p: int,
    q: int,
    nodes: Iterable[str],
    edges: Iterable[tuple[str, str, GfMatrix]],
    sessions: Iterable[tuple[int, str, str, int] | Session],
) -> Network:
    """Convenience factory accepting loose tuples."""
    fm = FieldModulus(p)
    sess = tuple(
        s if isinstance(s, Session) else Session(*s) for s in sessions
    )
    return Network(
        field=fm,
        q=q,
        nodes=tuple(nodes),
        edges=tuple(Edge(src, dst, gain) for src, dst, gain in edges),
        sessions=sess,
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def validate(n: Network) -> ValidationReport:
    """Collect every structural violation; an empty report means valid."""
    out: list[Violation] = []
    node_set = set(n.nodes)
    if len(node_set) != len(n.nodes):
        out.append(Violation("duplicate-node", "node list contains repeats"))
    if n.q < 1:
        out.append(Violation("vector-length", f"q must be >= 1, got {n.q}"))

    seen_pairs: set[tuple[str, str]] = set()
    for e in n.edges:
        if e.src == e.dst:
            out.append(Violation("self-loop", f"edge {e.src} -> {e.dst}"))
        if (e.src, e.dst) in seen_pairs:
            out.append(
                Violation("duplicate-edge", f"more than one edge {e.src} -> {e.dst}")
            )
        seen_pairs.add((e.src, e.dst))
        for endpoint in (e.src, e.dst):
            if endpoint not in node_set:
                out.append(
                    Violation("unknown-node", f"edge endpoint {endpoint!r} not declared")
                )
        if e.gain.shape != (n.q, n.q):
            out.append(
                Violation(
                    "gain-shape",
                    f"edge {e.src} -> {e.dst} gain is {e.gain.shape}, expected ({n.q}, {n.q})",
                )
            )
        if e.gain.field != n.field:
            out.append(
                Violation(
                    "gain-modulus",
                    f"edge {e.src} -> {e.dst} gain over GF({e.gain.field.p}), network uses GF({n.field.p})",
                )
            )

    ids = [s.id for s in n.sessions]
    if len(set(ids)) != len(ids):
        out.append(Violation("session-id", "session ids are not unique"))
    elif ids and sorted(ids) != list(range(1, len(ids) + 1)):
        out.append(Violation("session-id", "session ids must be 1..n"))
    for s in n.sessions:
        if s.source == s.destination:
            out.append(
                Violation("session-endpoints", f"session {s.id} has source == destination")
            )
        for endpoint in (s.source, s.destination):
            if endpoint not in node_set:
                out.append(
                    Violation(
                        "session-endpoints",
                        f"session {s.id} endpoint {endpoint!r} not declared",
                    )
                )
        if s.width < 0:
            out.append(Violation("session-width", f"session {s.id} width is negative"))
    return ValidationReport(tuple(out))


def require_valid(n: Network) -> None:
    report = validate(n)
    if not report.ok:
        raise InvalidNetworkError(report)


# ---------------------------------------------------------------------------
# Reciprocal
# ---------------------------------------------------------------------------


def reciprocal(n: Network) -> Network:
    """Reverse every edge, transpose every gain, swap session roles.

    Applying the construction twice returns a network structurally equal
    to the original.
    """
    require_valid(n)
    return Network(
        field=n.field,
        q=n.q,
        nodes=n.nodes,
        edges=tuple(Edge(e.dst, e.src, e.gain.T) for e in n.edges),
        sessions=tuple(
            Session(s.id, s.destination, s.source, s.width) for s in n.sessions
        ),
    )


# ---------------------------------------------------------------------------
# Layer detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LayeredNetwork:
    """A network plus a validated layer assignment.

    Layers run 0..horizon with every session source at layer 0 and every
    session destination at layer ``horizon``; edges only join consecutive
    layers.
    """

    base: Network
    layer_map: Mapping[str, int]
    horizon: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LayeredNetwork):
            return NotImplemented
        return (
            self.base == other.base
            and dict(self.layer_map) == dict(other.layer_map)
            and self.horizon == other.horizon
        )

    def layer_of(self, node: str) -> int:
        return self.layer_map[node]

    def nodes_at(self, layer: int) -> list[str]:
        return sorted(v for v in self.base.nodes if self.layer_map[v] == layer)

    def relay_nodes(self) -> list[str]:
        """All nodes at interior layers 1..horizon-1, sorted by id."""
        return sorted(
            v for v in self.base.nodes if 0 < self.layer_map[v] < self.horizon
        )

    def message_length(self, session: Session) -> int:
        return session.width * self.horizon


def _undirected_components(n: Network) -> list[set[str]]:
    adjacency: dict[str, set[str]] = {v: set() for v in n.nodes}
    for e in n.edges:
        adjacency[e.src].add(e.dst)
        adjacency[e.dst].add(e.src)
    seen: set[str] = set()
    components = []
    for start in n.nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        components.append(comp)
    return components


def _propagate_labels(
    n: Network, starts: dict[str, int], labels: dict[str, int]
) -> None:
    """BFS over the undirected graph with +1/-1 offsets along edge direction."""
    out_adj: dict[str, list[str]] = {v: [] for v in n.nodes}
    in_adj: dict[str, list[str]] = {v: [] for v in n.nodes}
    for e in n.edges:
        out_adj[e.src].append(e.dst)
        in_adj[e.dst].append(e.src)
    queue = list(starts)
    for v, lab in starts.items():
        if v in labels and labels[v] != lab:
            raise NotLayeredError(
                f"node {v!r} is pinned to layers {labels[v]} and {lab}"
            )
        labels[v] = lab
    while queue:
        v = queue.pop()
        for w in out_adj[v]:
            want = labels[v] + 1
            if w in labels:
                if labels[w] != want:
                    raise NotLayeredError(
                        f"edge {v!r} -> {w!r} joins layers {labels[v]} and {labels[w]}"
                    )
            else:
                labels[w] = want
                queue.append(w)
        for w in in_adj[v]:
            want = labels[v] - 1
            if w in labels:
                if labels[w] != want:
                    raise NotLayeredError(
                        f"edge {w!r} -> {v!r} joins layers {labels[w]} and {labels[v]}"
                    )
            else:
                labels[w] = want
                queue.append(w)


def detect_layers(n: Network) -> LayeredNetwork:
    """Compute the layer assignment with all sources at layer 0.

    Labels spread from the session sources (layer 0) through connected
    components; components that contain no source get relative labels
    from their session destinations and are pinned to the final layer.
    When no destination is reachable from a source the final layer is
    the smallest feasible one, which keeps detection symmetric between a
    network and its reciprocal.  Raises :class:`NotLayeredError` when no
    consistent assignment exists: an edge inside a layer or skipping
    one, a cycle, a destination off the final layer, a component with
    neither source nor destination, or a destination that also relays.
    """
    require_valid(n)
    if not n.sessions:
        raise NotLayeredError("a layered network needs at least one session")

    sources = {s.source for s in n.sessions}
    destinations = {s.destination for s in n.sessions}
    if sources & destinations:
        both = sorted(sources & destinations)[0]
        raise NotLayeredError(
            f"node {both!r} is both a session source and a session destination"
        )

    labels: dict[str, int] = {}
    deferred: list[dict[str, int]] = []
    for comp in _undirected_components(n):
        anchor_sources = {v: 0 for v in comp if v in sources}
        if anchor_sources:
            _propagate_labels(n, anchor_sources, labels)
            continue
        comp_dests = sorted(v for v in comp if v in destinations)
        if not comp_dests:
            raise NotLayeredError(
                f"component containing {sorted(comp)[0]!r} holds no source or destination"
            )
        # labels relative to this component's destinations, pinned later
        relative: dict[str, int] = {}
        _propagate_labels(n, {comp_dests[0]: 0}, relative)
        if max(relative.values()) > 0:
            offender = max(relative, key=relative.__getitem__)
            raise NotLayeredError(f"node {offender!r} sits past the final layer")
        deferred.append(relative)

    anchored_dest_layers = [labels[v] for v in destinations if v in labels]
    if anchored_dest_layers:
        horizon = max(anchored_dest_layers)
    else:
        depth = max(labels.values(), default=0)
        reach = max((-min(rel.values()) for rel in deferred), default=0)
        horizon = max(depth, reach, 1)
    for rel in deferred:
        for v, r in rel.items():
            labels[v] = horizon + r

    if min(labels.values()) < 0:
        offender = min(labels, key=labels.__getitem__)
        raise NotLayeredError(f"node {offender!r} would sit before layer 0")
    if max(labels.values()) > horizon:
        offender = max(labels, key=labels.__getitem__)
        raise NotLayeredError(
            f"node {offender!r} sits at layer {labels[offender]}, past the final layer {horizon}"
        )
    if horizon < 1:
        raise NotLayeredError("destinations coincide with the source layer")

    for e in n.edges:
        if labels[e.dst] != labels[e.src] + 1:
            raise NotLayeredError(
                f"edge {e.src!r} -> {e.dst!r} joins layers {labels[e.src]} and {labels[e.dst]}"
            )
    for s in n.sessions:
        if labels[s.source] != 0:
            raise NotLayeredError(f"session {s.id} source is not at layer 0")
        if labels[s.destination] != horizon:
            raise NotLayeredError(f"session {s.id} destination is not at the final layer")
    for d in destinations:
        if n.out_edges(d):
            raise NotLayeredError(f"destination {d!r} also relays")

    return LayeredNetwork(base=n, layer_map=labels, horizon=horizon)


def reciprocal_layered(ln: LayeredNetwork) -> LayeredNetwork:
    """Reciprocal of a layered network, with layer m mapped to horizon - m."""
    flipped = {v: ln.horizon - m for v, m in ln.layer_map.items()}
    return LayeredNetwork(
        base=reciprocal(ln.base), layer_map=flipped, horizon=ln.horizon
    )
