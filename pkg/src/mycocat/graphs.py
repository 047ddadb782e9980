"""Finite attributed multigraphs, their morphisms, and pushouts along monos.

The graph category used throughout the package: objects are finite
(multi)graphs with stable, opaque node and edge identifiers; morphisms are
total incidence-preserving maps. In this category monomorphisms coincide
with componentwise injective maps, and pushouts along monomorphisms exist
and are computed as a quotient of the tagged disjoint union.

All values are immutable after construction and all operations are pure,
so concurrent reads are safe.

JSON wire format (used by the CLI and test fixtures)::

    graph:    {"nodes": [id, ...], "edges": [[eid, [u, v]], ...], "directed": false}
    morphism: {"nodes": [[src_id, dst_id], ...], "edges": [[src_eid, dst_eid], ...]}

Morphism maps may equivalently be JSON objects when all ids are strings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterator, Mapping

from .errors import CompositionError, PreconditionError, ResourceError

NodeId = Any
EdgeId = Any


def _id_key(x: Any) -> tuple[str, str]:
    """Deterministic sort key for opaque ids of mixed types."""
    return (type(x).__name__, repr(x))


def _pair_matches(pair: tuple, u: Any, v: Any, directed: bool) -> bool:
    a, b = pair
    if directed:
        return a == u and b == v
    return (a == u and b == v) or (a == v and b == u)


@dataclass(frozen=True)
class AttributedGraph:
    """A finite multigraph with stable node and edge identifiers.

    ``nodes`` is an ordered tuple of opaque node ids; ``edges`` maps each
    edge id to its endpoint pair. Undirected by default; endpoint pairs of
    undirected edges are compared as unordered pairs. Self-loops and
    parallel edges are allowed.
    """

    nodes: tuple
    edges: tuple  # of (edge_id, (u, v))
    directed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(
            self, "edges", tuple((eid, (u, v)) for eid, (u, v) in self.edges)
        )
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise ValueError("duplicate node ids")
        eids = [eid for eid, _ in self.edges]
        if len(set(eids)) != len(eids):
            raise ValueError("duplicate edge ids")
        for eid, (u, v) in self.edges:
            if u not in node_set or v not in node_set:
                raise ValueError(f"edge {eid!r} has undeclared endpoint")

    # -- lookups ---------------------------------------------------------

    @property
    def node_set(self) -> frozenset:
        return frozenset(self.nodes)

    @property
    def edge_ids(self) -> tuple:
        return tuple(eid for eid, _ in self.edges)

    def endpoints(self, eid: EdgeId) -> tuple:
        for e, pair in self.edges:
            if e == eid:
                return pair
        raise KeyError(eid)

    def edges_between(self, u: NodeId, v: NodeId) -> list:
        """Edge ids joining u and v (unordered for undirected graphs)."""
        return [
            eid
            for eid, pair in self.edges
            if _pair_matches(pair, u, v, self.directed)
        ]

    def incident_edges(self, v: NodeId) -> list:
        return [eid for eid, (a, b) in self.edges if a == v or b == v]

    def is_connected(self) -> bool:
        """Connectivity of the underlying undirected graph; empty graph counts
        as connected only if it has no nodes."""
        if not self.nodes:
            return True
        adj: dict[Any, list] = {v: [] for v in self.nodes}
        for _, (u, v) in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [[eid, [u, v]] for eid, (u, v) in self.edges],
            "directed": self.directed,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "AttributedGraph":
        edges = tuple((eid, (u, v)) for eid, (u, v) in data.get("edges", []))
        return cls(
            nodes=tuple(data["nodes"]),
            edges=edges,
            directed=bool(data.get("directed", False)),
        )


@dataclass(frozen=True)
class GraphMorphism:
    """A total, incidence-preserving map between attributed graphs."""

    source: AttributedGraph
    target: AttributedGraph
    node_map: Mapping
    edge_map: Mapping

    def __post_init__(self):
        object.__setattr__(self, "node_map", dict(self.node_map))
        object.__setattr__(self, "edge_map", dict(self.edge_map))
        if self.source.directed != self.target.directed:
            raise ValueError("source and target disagree on directedness")
        src_nodes = self.source.node_set
        if set(self.node_map) != src_nodes:
            raise ValueError("node map is not total on source nodes")
        tgt_nodes = self.target.node_set
        for v, w in self.node_map.items():
            if w not in tgt_nodes:
                raise ValueError(f"node {v!r} maps outside the target")
        if set(self.edge_map) != set(self.source.edge_ids):
            raise ValueError("edge map is not total on source edges")
        tgt_pairs = dict(self.target.edges)
        for eid, (u, v) in self.source.edges:
            img = self.edge_map[eid]
            if img not in tgt_pairs:
                raise ValueError(f"edge {eid!r} maps outside the target")
            if not _pair_matches(
                tgt_pairs[img],
                self.node_map[u],
                self.node_map[v],
                self.target.directed,
            ):
                raise ValueError(f"edge {eid!r} does not preserve incidence")

    def same_maps(self, other: "GraphMorphism") -> bool:
        return self.node_map == other.node_map and self.edge_map == other.edge_map

    def to_json(self) -> dict:
        return {
            "nodes": [[k, v] for k, v in self.node_map.items()],
            "edges": [[k, v] for k, v in self.edge_map.items()],
        }

    @classmethod
    def from_json(
        cls, data: Mapping, source: AttributedGraph, target: AttributedGraph
    ) -> "GraphMorphism":
        def as_map(entry):
            if isinstance(entry, Mapping):
                return dict(entry)
            return {k: v for k, v in entry}

        return cls(source, target, as_map(data["nodes"]), as_map(data["edges"]))


@dataclass(frozen=True)
class Cospan:
    """Two morphisms out of a shared apex: left: A -> B, right: A -> C."""

    apex: AttributedGraph
    left: GraphMorphism
    right: GraphMorphism

    def __post_init__(self):
        if self.left.source != self.apex or self.right.source != self.apex:
            raise ValueError("cospan legs must start at the apex")


def identity_morphism(g: AttributedGraph) -> GraphMorphism:
    return GraphMorphism(
        g, g, {v: v for v in g.nodes}, {eid: eid for eid in g.edge_ids}
    )


def compose_graph_morphisms(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """Diagrammatic composite: first ``f``, then ``g``.

    Raises :class:`CompositionError` when ``f.target != g.source``.
    """
    if f.target != g.source:
        raise CompositionError("cannot compose: target of f is not source of g")
    return GraphMorphism(
        f.source,
        g.target,
        {v: g.node_map[w] for v, w in f.node_map.items()},
        {e: g.edge_map[d] for e, d in f.edge_map.items()},
    )


def is_monomorphism(f: GraphMorphism) -> bool:
    """True iff both component maps are injective.

    In this category of total incidence-preserving maps, injectivity is
    equivalent to categorical left-cancellability; the test suite checks
    the equivalence against an exhaustive enumeration oracle.
    """
    nvals = list(f.node_map.values())
    evals = list(f.edge_map.values())
    return len(set(nvals)) == len(nvals) and len(set(evals)) == len(evals)


# ---------------------------------------------------------------------------
# Pushout along monomorphisms
# ---------------------------------------------------------------------------


class _UnionFind:
    """Minimal union-find over hashable keys with path compression."""

    def __init__(self):
        self.parent: dict = {}

    def add(self, k):
        self.parent.setdefault(k, k)

    def find(self, k):
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def pushout_along_monos(
    c: Cospan,
) -> tuple[AttributedGraph, GraphMorphism, GraphMorphism]:
    """Glue B and C along the shared apex A.

    Computes the quotient of the tagged disjoint union of ``c.left.target``
    and ``c.right.target`` that identifies the two images of the apex, and
    returns the quotient graph together with the injections of B and C.
    Output ids are deterministic: equivalence classes are renumbered
    0, 1, ... following the sorted order of their tagged members, so
    repeated runs produce identical graphs.

    Raises :class:`PreconditionError` if either leg is not a monomorphism.
    """
    if not is_monomorphism(c.left) or not is_monomorphism(c.right):
        raise PreconditionError("pushout requires both cospan legs to be mono")

    b, cg = c.left.target, c.right.target

    nodes_uf = _UnionFind()
    for v in b.nodes:
        nodes_uf.add(("b", v))
    for v in cg.nodes:
        nodes_uf.add(("c", v))
    for a in c.apex.nodes:
        nodes_uf.union(("b", c.left.node_map[a]), ("c", c.right.node_map[a]))

    edges_uf = _UnionFind()
    for e in b.edge_ids:
        edges_uf.add(("b", e))
    for e in cg.edge_ids:
        edges_uf.add(("c", e))
    for ae in c.apex.edge_ids:
        edges_uf.union(("b", c.left.edge_map[ae]), ("c", c.right.edge_map[ae]))

    def classes(uf: _UnionFind) -> dict:
        """root -> new integer id, numbered by sorted least member."""
        members: dict[Any, list] = {}
        for k in uf.parent:
            members.setdefault(uf.find(k), []).append(k)
        def class_key(ms):
            return min((tag, _id_key(i)) for tag, i in ms)
        ordered = sorted(members.values(), key=class_key)
        out = {}
        for new_id, ms in enumerate(ordered):
            for m in ms:
                out[m] = new_id
        return out

    node_cls = classes(nodes_uf)
    edge_cls = classes(edges_uf)

    new_nodes = tuple(sorted(set(node_cls.values())))
    pair_by_class: dict[int, tuple] = {}
    for tag, graph in (("b", b), ("c", cg)):
        for eid, (u, v) in graph.edges:
            pair_by_class.setdefault(
                edge_cls[(tag, eid)],
                (node_cls[(tag, u)], node_cls[(tag, v)]),
            )
    new_edges = tuple((k, pair_by_class[k]) for k in sorted(pair_by_class))

    result = AttributedGraph(new_nodes, new_edges, directed=b.directed)
    inj_b = GraphMorphism(
        b,
        result,
        {v: node_cls[("b", v)] for v in b.nodes},
        {e: edge_cls[("b", e)] for e in b.edge_ids},
    )
    inj_c = GraphMorphism(
        cg,
        result,
        {v: node_cls[("c", v)] for v in cg.nodes},
        {e: edge_cls[("c", e)] for e in cg.edge_ids},
    )
    return result, inj_b, inj_c


# ---------------------------------------------------------------------------
# Exhaustive morphism enumeration and the universal-property verifier
# ---------------------------------------------------------------------------


def enumerate_morphisms(
    g: AttributedGraph, h: AttributedGraph
) -> Iterator[GraphMorphism]:
    """Yield every morphism g -> h, by backtracking over node images.

    Intended for the small instances used in verification; the search
    prunes as soon as an edge has both endpoints assigned but no
    compatible target edge.
    """
    if g.directed != h.directed:
        return
    gnodes = list(g.nodes)
    # Edges indexed by the position of their later endpoint in gnodes, so
    # each edge is checked as soon as it is fully assigned.
    pos = {v: i for i, v in enumerate(gnodes)}
    edges_at: dict[int, list] = {i: [] for i in range(len(gnodes))}
    for eid, (u, v) in g.edges:
        edges_at[max(pos[u], pos[v])].append((eid, u, v))

    hnodes = list(h.nodes)
    assignment: dict = {}

    def candidates(eid, u, v):
        return h.edges_between(assignment[u], assignment[v])

    def extend(i: int) -> Iterator[dict]:
        if i == len(gnodes):
            yield dict(assignment)
            return
        v = gnodes[i]
        for w in hnodes:
            assignment[v] = w
            if all(candidates(*e) for e in edges_at[i]):
                yield from extend(i + 1)
        assignment.pop(v, None)

    for node_map in extend(0):
        choice_lists = []
        for eid, (u, v) in g.edges:
            choice_lists.append(
                [(eid, t) for t in h.edges_between(node_map[u], node_map[v])]
            )
        for combo in itertools.product(*choice_lists):
            yield GraphMorphism(g, h, node_map, dict(combo))


def are_isomorphic(g: AttributedGraph, h: AttributedGraph) -> bool:
    """Small-instance isomorphism check by exhaustive search."""
    if len(g.nodes) != len(h.nodes) or len(g.edges) != len(h.edges):
        return False
    for m in enumerate_morphisms(g, h):
        if is_monomorphism(m) and len(set(m.node_map.values())) == len(h.nodes):
            return True
    return False


def probe_family(max_nodes: int) -> list[AttributedGraph]:
    """The fixed probe family: all simple undirected graphs on 0..n-1 nodes
    for every n up to ``max_nodes``. Deterministic order."""
    family = []
    for n in range(max_nodes + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for bits in range(2 ** len(pairs)):
            edges = tuple(
                (i, pairs[i]) for i in range(len(pairs)) if bits >> i & 1
            )
            family.append(AttributedGraph(tuple(range(n)), edges))
    return family


def _restriction_key(m: GraphMorphism, through: GraphMorphism) -> tuple:
    """Hashable record of m∘through, used to match cospan-compatible pairs."""
    nodes = tuple(m.node_map[through.node_map[a]] for a in through.source.nodes)
    edges = tuple(m.edge_map[through.edge_map[e]] for e in through.source.edge_ids)
    return nodes, edges


def _full_key(m: GraphMorphism) -> tuple:
    nodes = tuple(m.node_map[v] for v in m.source.nodes)
    edges = tuple(m.edge_map[e] for e in m.source.edge_ids)
    return nodes, edges


def verify_pushout_universal_property(
    c: Cospan,
    candidate: tuple[AttributedGraph, GraphMorphism, GraphMorphism],
    probe_bound: int,
) -> bool:
    """Exhaustively test the universal property of a candidate pushout.

    For every probe graph Z in the fixed family up to ``probe_bound`` nodes
    and every pair (B -> Z, C -> Z) agreeing on the apex, there must exist
    exactly one mediating morphism from the candidate object to Z. The
    check exploits that mediators are determined by composition with the
    candidate injections: it verifies that u |-> (u∘inB, u∘inC) is a
    bijection from hom(P, Z) onto the agreeing pairs.

    Raises :class:`ResourceError` for ``probe_bound > 6`` and
    :class:`PreconditionError` if the candidate square does not commute.
    """
    if probe_bound > 6:
        raise ResourceError("probe_bound above 6 is not supported")
    obj, inj_b, inj_c = candidate
    if inj_b.target != obj or inj_c.target != obj:
        raise PreconditionError("candidate injections must land in the candidate object")
    via_b = compose_graph_morphisms(c.left, inj_b)
    via_c = compose_graph_morphisms(c.right, inj_c)
    if not via_b.same_maps(via_c):
        raise PreconditionError("candidate square does not commute")

    b, cg = c.left.target, c.right.target
    for z in probe_family(probe_bound):
        groups_b: dict[tuple, int] = {}
        for zb in enumerate_morphisms(b, z):
            key = _restriction_key(zb, c.left)
            groups_b[key] = groups_b.get(key, 0) + 1
        groups_c: dict[tuple, int] = {}
        for zc in enumerate_morphisms(cg, z):
            key = _restriction_key(zc, c.right)
            groups_c[key] = groups_c.get(key, 0) + 1
        n_pairs = sum(
            count * groups_c.get(key, 0) for key, count in groups_b.items()
        )

        seen: set[tuple] = set()
        n_mediators = 0
        for u in enumerate_morphisms(obj, z):
            n_mediators += 1
            seen.add(
                (
                    _full_key(compose_graph_morphisms(inj_b, u)),
                    _full_key(compose_graph_morphisms(inj_c, u)),
                )
            )
        if len(seen) != n_mediators:  # two mediators induce the same pair
            return False
        if n_mediators != n_pairs:  # some pair has no (or extra) mediator
            return False
    return True
