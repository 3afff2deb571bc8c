"""Shared builders and oracles for the test suite."""

import random

import numpy as np

from ldnc.coding import LinearCode, TransferMap
from ldnc.errors import NotLayeredError
from ldnc.gf_linalg import (
    FieldModulus,
    GfMatrix,
    identity,
    random_matrix,
    shift_matrix,
    zeros,
)
from ldnc.network import LayeredNetwork, detect_layers, network

GF2 = FieldModulus(2)


# ---------------------------------------------------------------------------
# Fixed instances
# ---------------------------------------------------------------------------


def two_unicast_network():
    """Two-unicast, three-layer shift network on six nodes.

    Direct links (1-3, 2-4, 3-5, 4-6) run at full strength, crossing links
    at strength one; with q = 2 any doubly-shifted interference term
    vanishes, so the all-identity code solves the instance.
    """
    strong = shift_matrix(GF2, 2, 2)
    weak = shift_matrix(GF2, 2, 1)
    return network(
        2,
        2,
        ["1", "2", "3", "4", "5", "6"],
        [
            ("1", "3", strong),
            ("1", "4", weak),
            ("2", "3", weak),
            ("2", "4", strong),
            ("3", "5", strong),
            ("3", "6", weak),
            ("4", "5", weak),
            ("4", "6", strong),
        ],
        [(1, "1", "5", 1), (2, "2", "6", 1)],
    )


def two_unicast_code(ln=None):
    ln = ln or detect_layers(two_unicast_network())
    eye = identity(GF2, 2)
    return LinearCode(
        network=ln,
        encoders={1: eye, 2: eye},
        decoders={1: eye, 2: eye},
        relays={"3": eye, "4": eye},
    )


def _band_gain(q, band, dst_band, src_band):
    """Gain routing one coordinate band of the sender into one receive band."""
    arr = np.zeros((q, q), dtype=np.int64)
    for i in range(band):
        arr[dst_band * band + i, src_band * band + i] = 1
    return GfMatrix(GF2, arr)


def butterfly_network():
    """Classical two-unicast butterfly, embedded as orthogonal wire bands.

    Ten nodes in four layers; every wire carries a three-symbol band (one
    message worth), and the single bottleneck n1 -> n2 forces coding: the
    relay must add the two message bands for both sessions to get through.
    """
    q, band = 6, 3
    edges = [
        ("s1", "n1", _band_gain(q, band, 0, 0)),
        ("s2", "n1", _band_gain(q, band, 1, 0)),
        ("s1", "u1", _band_gain(q, band, 0, 1)),
        ("s2", "u2", _band_gain(q, band, 0, 1)),
        ("n1", "n2", _band_gain(q, band, 0, 0)),
        ("u1", "v1", _band_gain(q, band, 0, 0)),
        ("u2", "v2", _band_gain(q, band, 0, 0)),
        ("n2", "t1", _band_gain(q, band, 0, 0)),
        ("n2", "t2", _band_gain(q, band, 0, 1)),
        ("v1", "t2", _band_gain(q, band, 1, 0)),
        ("v2", "t1", _band_gain(q, band, 1, 0)),
    ]
    return network(
        2,
        q,
        ["s1", "s2", "n1", "u1", "u2", "n2", "v1", "v2", "t1", "t2"],
        edges,
        [(1, "s1", "t1", 1), (2, "s2", "t2", 1)],
    )


def butterfly_code(ln=None):
    """The classical code: the bottleneck adds, destinations cancel."""
    ln = ln or detect_layers(butterfly_network())
    band = 3
    eye = identity(GF2, band).to_array()
    zero = np.zeros((band, band), dtype=np.int64)

    def blocks(rows_of_blocks):
        return GfMatrix(GF2, np.block(rows_of_blocks))

    both = blocks([[eye], [eye]])           # send the message on both bands
    add_both = blocks([[eye, eye], [zero, zero]])
    forward = blocks([[eye, zero], [zero, zero]])
    fanout = blocks([[eye, zero], [eye, zero]])
    cancel = blocks([[eye, eye]])
    return LinearCode(
        network=ln,
        encoders={1: both, 2: both},
        decoders={1: cancel, 2: cancel},
        relays={
            "n1": add_both,
            "u1": forward,
            "u2": forward,
            "n2": fanout,
            "v1": forward,
            "v2": forward,
        },
    )


def single_edge_identity(p=2, q=2):
    """One edge, identity gain, one session whose message fills the vector."""
    fm = FieldModulus(p)
    n = network(p, q, ["a", "b"], [("a", "b", identity(fm, q))], [(1, "a", "b", q)])
    ln = detect_layers(n)
    code = LinearCode(
        network=ln,
        encoders={1: identity(fm, q)},
        decoders={1: identity(fm, q)},
        relays={},
    )
    return ln, code


# ---------------------------------------------------------------------------
# Random generators (deterministic given the rng)
# ---------------------------------------------------------------------------


def random_layered_instance(
    rng: random.Random,
    p_choices=(2, 3),
    q_choices=(1, 2, 3),
    horizon_choices=(1, 2),
    max_per_layer=5,
    max_sessions=3,
    width_choices=(1, 1, 1, 2, 0),
):
    for _ in range(200):
        p = rng.choice(p_choices)
        q = rng.choice(q_choices)
        horizon = rng.choice(horizon_choices)
        fm = FieldModulus(p)
        sizes = [rng.randint(1, max_per_layer) for _ in range(horizon + 1)]
        layer_nodes = [
            [f"L{m}n{i}" for i in range(sizes[m])] for m in range(horizon + 1)
        ]
        nodes = [v for layer in layer_nodes for v in layer]
        edges = []
        for m in range(1, horizon + 1):
            for v in layer_nodes[m]:
                feeds = rng.sample(
                    layer_nodes[m - 1], rng.randint(1, len(layer_nodes[m - 1]))
                )
                for u in feeds:
                    edges.append((u, v, random_matrix(fm, q, q, rng)))
        sessions = []
        for k in range(1, rng.randint(1, max_sessions) + 1):
            sessions.append(
                (
                    k,
                    rng.choice(layer_nodes[0]),
                    rng.choice(layer_nodes[horizon]),
                    rng.choice(width_choices),
                )
            )
        candidate = network(p, q, nodes, edges, sessions)
        try:
            return detect_layers(candidate)
        except NotLayeredError:
            continue
    raise RuntimeError("could not generate a layered instance")


def random_code(ln: LayeredNetwork, rng: random.Random) -> LinearCode:
    fm = ln.base.field
    q = ln.base.q
    return LinearCode(
        network=ln,
        encoders={
            s.id: random_matrix(fm, q, ln.message_length(s), rng)
            for s in ln.base.sessions
        },
        decoders={
            s.id: random_matrix(fm, ln.message_length(s), q, rng)
            for s in ln.base.sessions
        },
        relays={v: random_matrix(fm, q, q, rng) for v in ln.relay_nodes()},
    )


def random_messages(ln: LayeredNetwork, rng: random.Random, cols=1):
    return [
        random_matrix(ln.base.field, ln.message_length(s), cols, rng)
        for s in ln.base.sessions_sorted()
    ]


def all_message_columns(field: FieldModulus, lengths):
    """One matrix per length, whose shared columns enumerate every tuple."""
    p = field.p
    total = sum(lengths)
    count = p**total
    cols = np.arange(count, dtype=np.int64)
    mats = []
    offset = 0
    for length in lengths:
        arr = np.zeros((length, count), dtype=np.int64)
        for r in range(length):
            arr[r] = (cols // (p ** (offset + r))) % p
        mats.append(GfMatrix(field, arr))
        offset += length
    return mats


def all_message_tuples(ln: LayeredNetwork):
    return all_message_columns(
        ln.base.field, [ln.message_length(s) for s in ln.base.sessions_sorted()]
    )


# ---------------------------------------------------------------------------
# Unlayered schemes
# ---------------------------------------------------------------------------


def random_scheme(net, horizon, rng: random.Random, density=1.0):
    """Uniformly random time-indexed scheme over the given horizon."""
    from ldnc.layering import UnlayeredLinearScheme, message_block_width

    fm = net.field
    q = net.q
    encoders = {}
    for v in net.nodes:
        width = message_block_width(net, horizon, v)
        for m in range(horizon):
            if rng.random() <= density:
                encoders[(v, m)] = random_matrix(fm, q, width + q * m, rng)
    decoders = {
        s.id: random_matrix(fm, s.width * horizon, q * horizon, rng)
        for s in net.sessions
    }
    return UnlayeredLinearScheme(
        horizon=horizon, node_encoders=encoders, decoders=decoders
    )


def schemes_equal(net, a, b):
    """Equality with absent encoders treated as zero maps."""
    from ldnc.layering import message_block_width

    if a.horizon != b.horizon or set(a.decoders) != set(b.decoders):
        return False
    if any(a.decoders[k] != b.decoders[k] for k in a.decoders):
        return False
    fm = net.field
    for v in net.nodes:
        width = message_block_width(net, a.horizon, v)
        for m in range(a.horizon):
            blank = zeros(fm, net.q, width + net.q * m)
            if a.node_encoders.get((v, m), blank) != b.node_encoders.get((v, m), blank):
                return False
    return True


def triangle_network(p=2, q=1):
    """Unlayered three-node demo: the chord a -> c skips the relay layer."""
    fm = FieldModulus(p)
    g = identity(fm, q)
    return network(
        p, q,
        ["a", "b", "c"],
        [("a", "b", g), ("b", "c", g), ("a", "c", g)],
        [(1, "a", "c", 1)],
    )


# ---------------------------------------------------------------------------
# Deterministic instance families for the acceptance sweeps
# ---------------------------------------------------------------------------


def _gain_assignments(possible_edges, palette, stride=1):
    """Every assignment of {absent} | palette to the edge slots, nonempty."""
    import itertools

    choices = len(palette) + 1
    for idx, assign in enumerate(
        itertools.product(range(choices), repeat=len(possible_edges))
    ):
        if stride > 1 and idx % stride:
            continue
        edges = [
            (u, v, palette[c - 1])
            for (u, v), c in zip(possible_edges, assign)
            if c
        ]
        if edges:
            yield edges


def gf2_instance_family(max_entries=20):
    """Deterministic family of small GF(2) layered instances.

    Covers one- and two-session networks over one, two and three hops,
    with shared sources, shared destinations, crossed wirings, and both
    scalar and length-2 vectors; every instance keeps its free-entry
    count at or below ``max_entries`` so its full code space can be
    scanned.
    """
    from ldnc.search import free_entry_count

    fm = FieldModulus(2)
    one = [identity(fm, 1)]
    two = [shift_matrix(fm, 2, 1), identity(fm, 2)]
    two_shift = [shift_matrix(fm, 2, 1)]
    out = []

    def collect(nodes, possible, sessions_list, q, palette, stride=1):
        for edges in _gain_assignments(possible, palette, stride):
            for sessions in sessions_list:
                candidate = network(2, q, nodes, edges, sessions)
                try:
                    ln = detect_layers(candidate)
                except NotLayeredError:
                    continue
                if free_entry_count(ln) <= max_entries:
                    out.append(ln)

    # one session, one hop
    collect(["s", "d"], [("s", "d")], [[(1, "s", "d", 1)]], 1, one)
    collect(["s", "d"], [("s", "d")],
            [[(1, "s", "d", 1)], [(1, "s", "d", 2)]], 2, two)

    # two sessions, one hop, straight and crossed demands
    direct_pairs = [(s, d) for s in ("s1", "s2") for d in ("d1", "d2")]
    wirings = [
        [(1, "s1", "d1", 1), (2, "s2", "d2", 1)],
        [(1, "s1", "d2", 1), (2, "s2", "d1", 1)],
    ]
    collect(["s1", "s2", "d1", "d2"], direct_pairs, wirings, 1, one)
    collect(["s1", "s2", "d1", "d2"], direct_pairs, wirings, 2, two)

    # one session, two hops, widening relay layers
    for m in (1, 2, 3):
        relays = [f"r{i}" for i in range(m)]
        possible = [("s", r) for r in relays] + [(r, "d") for r in relays]
        collect(["s", "d", *relays], possible,
                [[(1, "s", "d", 1)], [(1, "s", "d", 2)]], 1, one)
        if m <= 2:
            collect(["s", "d", *relays], possible, [[(1, "s", "d", 1)]], 2, two)

    # three sessions, one hop, straight demands
    triple = [(s, d) for s in ("s1", "s2", "s3") for d in ("d1", "d2", "d3")]
    collect(
        ["s1", "s2", "s3", "d1", "d2", "d3"], triple,
        [[(1, "s1", "d1", 1), (2, "s2", "d2", 1), (3, "s3", "d3", 1)]],
        1, one, stride=4,
    )

    # two sessions, two hops
    for m, stride in ((1, 1), (2, 1), (3, 4)):
        relays = [f"r{i}" for i in range(m)]
        nodes = ["s1", "s2", *relays, "d1", "d2"]
        possible = [(s, r) for s in ("s1", "s2") for r in relays] + [
            (r, d) for r in relays for d in ("d1", "d2")
        ]
        collect(nodes, possible, wirings, 1, one, stride=stride)
    # the q=2 variant sits exactly at the entry cap
    relays = ["r0"]
    possible = [(s, "r0") for s in ("s1", "s2")] + [("r0", d) for d in ("d1", "d2")]
    collect(["s1", "s2", "r0", "d1", "d2"], possible, wirings, 2, two_shift)

    # shared source and shared destination
    shared_src = [("s", r) for r in ("r0", "r1")] + [
        (r, d) for r in ("r0", "r1") for d in ("d1", "d2")
    ]
    collect(
        ["s", "r0", "r1", "d1", "d2"], shared_src,
        [[(1, "s", "d1", 1), (2, "s", "d2", 1)]], 1, one,
    )
    for m in (1, 2):
        relays = [f"r{i}" for i in range(m)]
        possible = [(s, r) for s in ("s1", "s2") for r in relays] + [
            (r, "d") for r in relays
        ]
        collect(
            ["s1", "s2", *relays, "d"], possible,
            [[(1, "s1", "d", 1), (2, "s2", "d", 1)]], 1, one,
        )

    # one session, three hops
    for (m1, m2), stride in (
        ((1, 1), 1), ((2, 1), 1), ((1, 2), 1), ((2, 2), 1),
        ((3, 1), 1), ((1, 3), 1),
    ):
        front = [f"a{i}" for i in range(m1)]
        back = [f"b{i}" for i in range(m2)]
        possible = (
            [("s", r) for r in front]
            + [(u, v) for u in front for v in back]
            + [(r, "d") for r in back]
        )
        collect(["s", "d", *front, *back], possible,
                [[(1, "s", "d", 1)]], 1, one, stride=stride)

    # one session, four hops
    possible = [("s", "a0"), ("a0", "b0"), ("b0", "c0"), ("c0", "d")]
    collect(["s", "d", "a0", "b0", "c0"], possible,
            [[(1, "s", "d", 1)]], 1, one)

    return out


def three_node_unfolding_family():
    """Every directed graph on three nodes, swept over q and horizon caps.

    Yields (network, horizon) pairs over GF(2) with one session, plus a
    two-session variant in which node b decodes one message and sources
    another, exercising the dual-role case that only unfolding supports.
    """
    names = ["a", "b", "c"]
    pairs = [(u, v) for u in names for v in names if u != v]
    fm = FieldModulus(2)
    for q in (1, 2):
        palette = [shift_matrix(fm, q, q - 1), identity(fm, q)]
        for horizon in (1, 2):
            for mask in range(1 << len(pairs)):
                edges = [
                    (u, v, palette[i % len(palette)])
                    for i, (u, v) in enumerate(pairs)
                    if mask >> i & 1
                ]
                yield network(2, q, names, edges, [(1, "a", "b", 1)]), horizon
                if mask % 4 == 0:
                    yield network(
                        2, q, names, edges,
                        [(1, "a", "b", 1), (2, "b", "c", 1)],
                    ), horizon


# ---------------------------------------------------------------------------
# Independent oracle: explicit sum over all source-destination paths
# ---------------------------------------------------------------------------


def path_sum_transfer(ln: LayeredNetwork, code: LinearCode) -> TransferMap:
    """Transfer grid computed by enumerating every directed path and
    summing the product of decoder, gains, relay matrices and encoder
    along it.  Exponential in path count; used only to check the
    propagation implementation.
    """
    sessions = ln.base.sessions_sorted()
    fm = ln.base.field
    grid = []
    for sl in sessions:
        row = []
        for sk in sessions:
            total = zeros(fm, ln.message_length(sk), ln.message_length(sl))

            def walk(node, acc):
                nonlocal total
                for e in ln.base.out_edges(node):
                    reached = e.gain @ acc
                    if ln.layer_of(e.dst) == ln.horizon:
                        if e.dst == sk.destination:
                            total = total + (code.decoders[sk.id] @ reached)
                    else:
                        walk(e.dst, code.relays[e.dst] @ reached)

            walk(sl.source, code.encoders[sl.id])
            row.append(total)
        grid.append(tuple(row))
    return TransferMap(sessions=sessions, grid=tuple(grid))
