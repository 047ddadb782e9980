"""Environmental and mycelial network states and their transformations.

An environmental state couples a substrate graph with a nonnegative
resource field, a vector-valued chemical field, and a constraint record
(interval bounds plus a total resource budget). A mycelial state couples a
connected network graph with edge conductivities and per-node feature
vectors. Admissible transformations of each kind compose, and network
fusion is computed as a pushout of the underlying graphs with explicit
merge rules for the conductivity and feature data.

Everything here is a pure value: applying or composing transformations
never mutates inputs, so concurrent reads are safe.

JSON wire formats extend the graph schema of :mod:`mycocat.graphs` with
``"rho"``, ``"phi"``, ``"chi"`` (environment) and ``"sigma"``, ``"omega"``
(mycelium) maps keyed by stringified node/edge ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import (
    CompositionError,
    ConstraintError,
    NumericError,
    ParameterError,
    PreconditionError,
)
from .graphs import (
    AttributedGraph,
    Cospan,
    GraphMorphism,
    _id_key,
    compose_graph_morphisms,
    identity_morphism,
    is_monomorphism,
    pushout_along_monos,
)

# Slack for floating-point comparisons against interval bounds and budgets.
_BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class Constraints:
    """Interval bounds and a resource budget for an environmental state.

    ``phi_bounds`` holds one (lo, hi) interval per chemical channel; its
    length fixes the channel count k.
    """

    humidity: tuple[float, float] = (0.0, 1.0)
    temperature: tuple[float, float] = (0.0, 40.0)
    phi_bounds: tuple[tuple[float, float], ...] = ((0.0, 1.0),)
    budget: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "phi_bounds", tuple(tuple(b) for b in self.phi_bounds))
        for lo, hi in (self.humidity, self.temperature, *self.phi_bounds):
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")

    @property
    def channels(self) -> int:
        return len(self.phi_bounds)

    def tightens(self, other: "Constraints") -> bool:
        """True iff every interval of self sits inside the matching one of other."""
        def inside(a, b):
            return a[0] >= b[0] - _BOUND_SLACK and a[1] <= b[1] + _BOUND_SLACK

        return (
            inside(self.humidity, other.humidity)
            and inside(self.temperature, other.temperature)
            and len(self.phi_bounds) == len(other.phi_bounds)
            and all(inside(a, b) for a, b in zip(self.phi_bounds, other.phi_bounds))
            and self.budget <= other.budget + _BOUND_SLACK
        )

    def to_json(self) -> dict:
        return {
            "humidity": list(self.humidity),
            "temperature": list(self.temperature),
            "phi_bounds": [list(b) for b in self.phi_bounds],
            "budget": self.budget,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Constraints":
        return cls(
            humidity=tuple(data.get("humidity", (0.0, 1.0))),
            temperature=tuple(data.get("temperature", (0.0, 40.0))),
            phi_bounds=tuple(tuple(b) for b in data.get("phi_bounds", [[0.0, 1.0]])),
            budget=float(data.get("budget", math.inf)),
        )


@dataclass(frozen=True)
class EnvObject:
    """Substrate graph plus resource field, chemical field, and constraints."""

    graph: AttributedGraph
    rho: Mapping  # node -> float >= 0
    phi: Mapping  # node -> tuple of channel values
    chi: Constraints

    def __post_init__(self):
        object.__setattr__(self, "rho", {v: float(x) for v, x in self.rho.items()})
        object.__setattr__(
            self, "phi", {v: tuple(float(x) for x in vec) for v, vec in self.phi.items()}
        )
        nodes = self.graph.node_set
        if set(self.rho) != nodes or set(self.phi) != nodes:
            raise ValueError("rho and phi must be defined on exactly the graph nodes")
        k = self.chi.channels
        for v, vec in self.phi.items():
            if len(vec) != k:
                raise ValueError(f"phi at {v!r} has {len(vec)} channels, expected {k}")
        violation = check_admissibility(self.rho, self.phi, self.chi)
        if violation:
            raise ConstraintError(violation)

    def to_json(self) -> dict:
        return {
            **self.graph.to_json(),
            "rho": {str(v): self.rho[v] for v in self.graph.nodes},
            "phi": {str(v): list(self.phi[v]) for v in self.graph.nodes},
            "chi": self.chi.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EnvObject":
        graph = AttributedGraph.from_json(data)
        by_str = {str(v): v for v in graph.nodes}
        return cls(
            graph=graph,
            rho={by_str[k]: float(x) for k, x in data["rho"].items()},
            phi={by_str[k]: tuple(map(float, vec)) for k, vec in data["phi"].items()},
            chi=Constraints.from_json(data.get("chi", {})),
        )


def check_admissibility(rho: Mapping, phi: Mapping, chi: Constraints) -> str | None:
    """Return a message naming the first violated bound, or None if admissible."""
    for v, r in rho.items():
        if r < -_BOUND_SLACK:
            return f"rho at node {v!r} is negative ({r})"
    total = sum(rho.values())
    if total > chi.budget + _BOUND_SLACK:
        return f"total resource {total} exceeds budget {chi.budget}"
    for v, vec in phi.items():
        for ch, x in enumerate(vec):
            lo, hi = chi.phi_bounds[ch]
            if x < lo - _BOUND_SLACK or x > hi + _BOUND_SLACK:
                return (
                    f"phi channel {ch} at node {v!r} is {x}, "
                    f"outside bounds [{lo}, {hi}]"
                )
    return None


# ---------------------------------------------------------------------------
# Field transformation rules
# ---------------------------------------------------------------------------

PUSHFORWARD = "pushforward"
POINTWISE_ADD = "pointwise_add"
RESCALE = "rescale"


@dataclass(frozen=True)
class FieldRule:
    """How a scalar field transports along a graph map.

    - ``pushforward``: sum the field over each fiber (conserves the total).
    - ``pointwise_add``: pushforward, then add ``delta`` on target nodes.
    - ``rescale``: pushforward, then multiply by ``factor``.
    """

    tag: str
    delta: Mapping | None = None  # target node -> increment
    factor: float = 1.0

    def __post_init__(self):
        if self.tag not in (PUSHFORWARD, POINTWISE_ADD, RESCALE):
            raise ParameterError(f"unknown field rule {self.tag!r}")
        if self.delta is not None:
            object.__setattr__(self, "delta", dict(self.delta))

    def apply(self, values: Mapping, fg: GraphMorphism) -> dict:
        pushed = {w: 0.0 for w in fg.target.nodes}
        for v, x in values.items():
            pushed[fg.node_map[v]] += x
        if self.tag == POINTWISE_ADD:
            for w, d in (self.delta or {}).items():
                if w not in pushed:
                    raise ParameterError(f"delta names unknown target node {w!r}")
                pushed[w] += d
        elif self.tag == RESCALE:
            pushed = {w: x * self.factor for w, x in pushed.items()}
        return pushed

    def to_json(self) -> dict:
        out: dict = {"tag": self.tag}
        if self.delta is not None:
            out["delta"] = {str(k): v for k, v in self.delta.items()}
        if self.tag == RESCALE:
            out["factor"] = self.factor
        return out


def identity_rule() -> FieldRule:
    return FieldRule(PUSHFORWARD)


def _compose_rules(first: FieldRule, second: FieldRule, second_fg: GraphMorphism) -> FieldRule:
    """Rule equal to applying ``first`` along its map, then ``second`` along
    ``second_fg``. Pushforward composes with everything; add and rescale
    compose with themselves; mixing add with rescale is rejected."""
    tags = {first.tag, second.tag}
    if tags <= {PUSHFORWARD}:
        return FieldRule(PUSHFORWARD)
    if tags <= {PUSHFORWARD, POINTWISE_ADD}:
        pushed_delta: dict = {w: 0.0 for w in second_fg.target.nodes}
        for v, d in (first.delta or {}).items():
            pushed_delta[second_fg.node_map[v]] += d
        for w, d in (second.delta or {}).items():
            pushed_delta[w] += d
        delta = {w: d for w, d in pushed_delta.items() if d != 0.0}
        return FieldRule(POINTWISE_ADD, delta=delta)
    if tags <= {PUSHFORWARD, RESCALE}:
        return FieldRule(RESCALE, factor=first.factor * second.factor)
    raise CompositionError(
        f"cannot compose field rules {first.tag!r} and {second.tag!r}"
    )


@dataclass(frozen=True)
class EnvMorphism:
    """Admissible transformation of environmental states.

    Carries the underlying graph map, one rule for the resource field, one
    rule per chemical channel, and the constraint map (``None`` keeps the
    source constraints, otherwise the target constraints must tighten
    them). Admissibility of the transported fields is checked when the
    morphism is applied.
    """

    fg: GraphMorphism
    rho_rule: FieldRule
    phi_rules: tuple[FieldRule, ...]
    chi_map: Constraints | None = None  # None = identity

    def __post_init__(self):
        object.__setattr__(self, "phi_rules", tuple(self.phi_rules))


def identity_env_morphism(e: EnvObject) -> EnvMorphism:
    return EnvMorphism(
        fg=identity_morphism(e.graph),
        rho_rule=identity_rule(),
        phi_rules=tuple(identity_rule() for _ in range(e.chi.channels)),
    )


def apply_env_morphism(e: EnvObject, f: EnvMorphism) -> EnvObject:
    """Transport an environmental state along a morphism.

    Raises :class:`ConstraintError` naming the violated bound when the
    transported fields are inadmissible for the target constraints, and
    :class:`CompositionError` when the graph map does not start at ``e``.
    """
    if f.fg.source != e.graph:
        raise CompositionError("morphism does not start at this environment")
    if len(f.phi_rules) != e.chi.channels:
        raise ParameterError(
            f"{len(f.phi_rules)} phi rules for {e.chi.channels} channels"
        )
    new_rho = f.rho_rule.apply(e.rho, f.fg)
    per_channel = [
        rule.apply({v: vec[ch] for v, vec in e.phi.items()}, f.fg)
        for ch, rule in enumerate(f.phi_rules)
    ]
    new_phi = {
        w: tuple(per_channel[ch][w] for ch in range(len(per_channel)))
        for w in f.fg.target.nodes
    }
    if f.chi_map is None:
        new_chi = e.chi
    else:
        if not f.chi_map.tightens(e.chi):
            raise ConstraintError("constraint map must tighten the source intervals")
        new_chi = f.chi_map
    violation = check_admissibility(new_rho, new_phi, new_chi)
    if violation:
        raise ConstraintError(violation)
    return EnvObject(f.fg.target, new_rho, new_phi, new_chi)


def compose_env_morphisms(f: EnvMorphism, g: EnvMorphism) -> EnvMorphism:
    """Diagrammatic composite: first ``f``, then ``g``.

    Field rules compose componentwise (adds sum after transport, rescales
    multiply); mixing an add with a rescale raises
    :class:`CompositionError`, as does a graph-map mismatch.
    """
    fg = compose_graph_morphisms(f.fg, g.fg)
    if len(f.phi_rules) != len(g.phi_rules):
        raise CompositionError("channel counts differ")
    if f.chi_map is None and g.chi_map is None:
        chi_map = None
    else:
        chi_map = g.chi_map if g.chi_map is not None else f.chi_map
    return EnvMorphism(
        fg=fg,
        rho_rule=_compose_rules(f.rho_rule, g.rho_rule, g.fg),
        phi_rules=tuple(
            _compose_rules(a, b, g.fg) for a, b in zip(f.phi_rules, g.phi_rules)
        ),
        chi_map=chi_map,
    )


def env_distance(
    e1: EnvObject, e2: EnvObject, weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
) -> float:
    """Weighted L1 distance between environmental states on a shared id universe.

    Components: resource field, chemical field (summed over channels), and
    the node/edge symmetric-difference count. Unmatched nodes contribute
    their full field norms. Constraint records are not compared.
    """
    w_rho, w_phi, w_struct = weights
    if min(weights) < 0:
        raise ParameterError("weights must be nonnegative")
    d_rho = 0.0
    d_phi = 0.0
    nodes1, nodes2 = e1.graph.node_set, e2.graph.node_set
    for v in nodes1 | nodes2:
        if v in nodes1 and v in nodes2:
            d_rho += abs(e1.rho[v] - e2.rho[v])
            d_phi += sum(abs(a - b) for a, b in zip(e1.phi[v], e2.phi[v]))
        elif v in nodes1:
            d_rho += abs(e1.rho[v])
            d_phi += sum(abs(a) for a in e1.phi[v])
        else:
            d_rho += abs(e2.rho[v])
            d_phi += sum(abs(a) for a in e2.phi[v])
    struct = len(nodes1 ^ nodes2) + len(
        set(_edge_keys(e1.graph)) ^ set(_edge_keys(e2.graph))
    )
    return w_rho * d_rho + w_phi * d_phi + w_struct * struct


# ---------------------------------------------------------------------------
# Mycelial states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MycObject:
    """Connected network with edge conductivities and node feature vectors."""

    graph: AttributedGraph
    sigma: Mapping  # edge -> float >= 0
    omega: Mapping  # node -> tuple of feature values

    def __post_init__(self):
        object.__setattr__(self, "sigma", {e: float(x) for e, x in self.sigma.items()})
        object.__setattr__(
            self, "omega", {v: tuple(float(x) for x in vec) for v, vec in self.omega.items()}
        )
        if not self.graph.is_connected():
            raise ValueError("mycelial network must be connected")
        if set(self.sigma) != set(self.graph.edge_ids):
            raise ValueError("sigma must be defined on exactly the graph edges")
        if set(self.omega) != self.graph.node_set:
            raise ValueError("omega must be defined on exactly the graph nodes")
        for e, x in self.sigma.items():
            if x < 0:
                raise ValueError(f"sigma at edge {e!r} is negative")
        lengths = {len(v) for v in self.omega.values()}
        if len(lengths) > 1:
            raise ValueError("omega feature vectors must share one length")

    @property
    def feature_count(self) -> int:
        return len(next(iter(self.omega.values()))) if self.omega else 0

    def node_strength(self, v) -> float:
        """Total conductivity of edges incident to v (loops counted once)."""
        return sum(self.sigma[e] for e in self.graph.incident_edges(v))

    def to_json(self) -> dict:
        return {
            **self.graph.to_json(),
            "sigma": {str(e): self.sigma[e] for e in self.graph.edge_ids},
            "omega": {str(v): list(self.omega[v]) for v in self.graph.nodes},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MycObject":
        graph = AttributedGraph.from_json(data)
        nodes_by_str = {str(v): v for v in graph.nodes}
        edges_by_str = {str(e): e for e in graph.edge_ids}
        return cls(
            graph=graph,
            sigma={edges_by_str[k]: float(x) for k, x in data["sigma"].items()},
            omega={nodes_by_str[k]: tuple(map(float, vec)) for k, vec in data["omega"].items()},
        )


def _edge_keys(graph: AttributedGraph):
    """Edge identity for matching across graphs: id plus canonical endpoints."""
    for eid, (u, v) in graph.edges:
        if graph.directed:
            yield (eid, (u, v))
        else:
            a, b = sorted((u, v), key=_id_key)
            yield (eid, (a, b))


@dataclass(frozen=True)
class DistanceWeights:
    omega: float = 1.0
    sigma: float = 1.0
    structure: float = 1.0

    def __post_init__(self):
        if min(self.omega, self.sigma, self.structure) < 0:
            raise ParameterError("distance weights must be nonnegative")


def myc_distance(
    m1: MycObject, m2: MycObject, weights: DistanceWeights | Sequence[float] = DistanceWeights()
) -> float:
    """Weighted L1 distance between mycelial states over a shared id universe.

    Feature vectors are compared on matched nodes, conductivities on
    matched edges (same id and endpoints); unmatched elements contribute
    their full norms plus a symmetric-difference count. This is a metric
    on states over a fixed id universe.
    """
    if not isinstance(weights, DistanceWeights):
        weights = DistanceWeights(*weights)
    d_omega = 0.0
    nodes1, nodes2 = m1.graph.node_set, m2.graph.node_set
    for v in nodes1 | nodes2:
        if v in nodes1 and v in nodes2:
            d_omega += sum(abs(a - b) for a, b in zip(m1.omega[v], m2.omega[v]))
        elif v in nodes1:
            d_omega += sum(abs(a) for a in m1.omega[v])
        else:
            d_omega += sum(abs(a) for a in m2.omega[v])
    keys1 = {k: k[0] for k in _edge_keys(m1.graph)}
    keys2 = {k: k[0] for k in _edge_keys(m2.graph)}
    d_sigma = 0.0
    for k in keys1.keys() | keys2.keys():
        a = m1.sigma[keys1[k]] if k in keys1 else 0.0
        b = m2.sigma[keys2[k]] if k in keys2 else 0.0
        d_sigma += abs(a - b)
    struct = len(nodes1 ^ nodes2) + len(keys1.keys() ^ keys2.keys())
    return weights.omega * d_omega + weights.sigma * d_sigma + weights.structure * struct


# ---------------------------------------------------------------------------
# Mycelial morphisms and fusion
# ---------------------------------------------------------------------------

MERGE_RULES: dict[str, Callable[[float, float, float, float], float]] = {
    "sum": lambda a, b, wa, wb: a + b,
    "max": lambda a, b, wa, wb: max(a, b),
    "mean": lambda a, b, wa, wb: 0.5 * (a + b),
    "weighted_mean": lambda a, b, wa, wb: (
        (wa * a + wb * b) / (wa + wb) if wa + wb > 0 else 0.5 * (a + b)
    ),
}


def _merge_vectors(rule, va, vb, wa, wb):
    return tuple(rule(a, b, wa, wb) for a, b in zip(va, vb))


@dataclass(frozen=True)
class MycMorphism:
    """Structure-compatible update between mycelial states.

    ``kind`` records how the target fields relate to the source:

    - ``"embed"``: the graph map identifies a substructure; fields are
      owned by the target (used for fusion legs).
    - ``"assign"``: the target fields are explicit data (used for induced
      state updates, where the graph map is the identity).
    - ``"transport"``: the target is the source coarse-grained under
      ``sigma_rule`` / ``omega_rule``; construction recomputes the
      transport and rejects mismatching targets.
    """

    source: MycObject
    target: MycObject
    graph_map: GraphMorphism
    kind: str = "assign"
    sigma_rule: str = "sum"
    omega_rule: str = "weighted_mean"

    def __post_init__(self):
        if self.graph_map.source != self.source.graph:
            raise ValueError("graph map must start at the source network")
        if self.graph_map.target != self.target.graph:
            raise ValueError("graph map must end at the target network")
        if self.kind not in ("embed", "assign", "transport"):
            raise ParameterError(f"unknown morphism kind {self.kind!r}")
        if self.kind == "transport":
            recomputed = transport_myc(
                self.source, self.graph_map, self.sigma_rule, self.omega_rule
            )
            if recomputed.sigma != self.target.sigma or recomputed.omega != self.target.omega:
                raise ValueError("target fields do not match the transported source")

    def is_identity(self, tol: float = 0.0) -> bool:
        if self.source.graph != self.target.graph:
            return False
        return myc_distance(self.source, self.target) <= tol


def identity_myc_morphism(m: MycObject) -> MycMorphism:
    return MycMorphism(m, m, identity_morphism(m.graph), kind="assign")


def compose_myc_morphisms(f: MycMorphism, g: MycMorphism) -> MycMorphism:
    """Diagrammatic composite; the result carries explicit target fields."""
    if f.target != g.source:
        raise CompositionError("cannot compose: target of f is not source of g")
    return MycMorphism(
        f.source,
        g.target,
        compose_graph_morphisms(f.graph_map, g.graph_map),
        kind="assign",
    )


def transport_myc(
    m: MycObject, gt: GraphMorphism, sigma_rule: str = "sum", omega_rule: str = "weighted_mean"
) -> MycObject:
    """Coarse-grain a mycelial state along a graph map.

    Fibers of the node map merge feature vectors under ``omega_rule``
    (pairwise, in source declaration order); fibers of the edge map merge
    conductivities under ``sigma_rule``.
    """
    s_rule = MERGE_RULES[sigma_rule]
    o_rule = MERGE_RULES[omega_rule]
    sigma: dict = {}
    for e in m.graph.edge_ids:
        img = gt.edge_map[e]
        if img in sigma:
            sigma[img] = s_rule(sigma[img], m.sigma[e], 1.0, 1.0)
        else:
            sigma[img] = m.sigma[e]
    omega: dict = {}
    strength: dict = {}
    for v in m.graph.nodes:
        img = gt.node_map[v]
        w = m.node_strength(v)
        if img in omega:
            omega[img] = _merge_vectors(o_rule, omega[img], m.omega[v], strength[img], w)
            strength[img] = strength[img] + w
        else:
            omega[img] = m.omega[v]
            strength[img] = w
    return MycObject(gt.target, sigma, omega)


def anastomosis(
    a: MycObject,
    m1: MycMorphism,
    m2: MycMorphism,
    sigma_rule: str = "sum",
    omega_rule: str = "weighted_mean",
) -> MycObject:
    """Fuse two networks along a shared substructure.

    ``m1`` and ``m2`` embed ``a`` into the two networks; both graph maps
    must be monomorphisms. The underlying graph of the result is the
    pushout of the graph cospan. On identified edges the conductivities
    merge under ``sigma_rule`` (default: parallel conductances add); on
    identified nodes the feature vectors merge under ``omega_rule``
    (default: mean weighted by each node's total incident conductivity,
    falling back to the plain mean when both totals are zero).

    Raises :class:`PreconditionError` for non-mono legs and
    :class:`NumericError` if a merge produces a non-finite value. Use
    :func:`anastomosis_with_injections` when the inclusion morphisms of
    the two fused networks are needed as well.
    """
    fused, _, _ = anastomosis_with_injections(a, m1, m2, sigma_rule, omega_rule)
    return fused


def anastomosis_with_injections(
    a: MycObject,
    m1: MycMorphism,
    m2: MycMorphism,
    sigma_rule: str = "sum",
    omega_rule: str = "weighted_mean",
) -> tuple[MycObject, MycMorphism, MycMorphism]:
    """As :func:`anastomosis`, returning the two inclusion morphisms too."""
    if m1.source != a or m2.source != a:
        raise PreconditionError("both legs must start at the shared substructure")
    if not is_monomorphism(m1.graph_map) or not is_monomorphism(m2.graph_map):
        raise PreconditionError("anastomosis requires mono legs")
    if sigma_rule not in MERGE_RULES or omega_rule not in MERGE_RULES:
        raise ParameterError("unknown merge rule")
    b, c = m1.target, m2.target

    cospan = Cospan(a.graph, m1.graph_map, m2.graph_map)
    fused_graph, inj_b, inj_c = pushout_along_monos(cospan)

    s_rule = MERGE_RULES[sigma_rule]
    o_rule = MERGE_RULES[omega_rule]

    from_b_edge = {inj_b.edge_map[e]: e for e in b.graph.edge_ids}
    from_c_edge = {inj_c.edge_map[e]: e for e in c.graph.edge_ids}
    sigma: dict = {}
    for pe in fused_graph.edge_ids:
        eb, ec = from_b_edge.get(pe), from_c_edge.get(pe)
        if eb is not None and ec is not None:
            sigma[pe] = s_rule(b.sigma[eb], c.sigma[ec], 1.0, 1.0)
        elif eb is not None:
            sigma[pe] = b.sigma[eb]
        else:
            sigma[pe] = c.sigma[ec]

    from_b_node = {inj_b.node_map[v]: v for v in b.graph.nodes}
    from_c_node = {inj_c.node_map[v]: v for v in c.graph.nodes}
    omega: dict = {}
    for pv in fused_graph.nodes:
        vb, vc = from_b_node.get(pv), from_c_node.get(pv)
        if vb is not None and vc is not None:
            wb, wc = b.node_strength(vb), c.node_strength(vc)
            omega[pv] = _merge_vectors(o_rule, b.omega[vb], c.omega[vc], wb, wc)
        elif vb is not None:
            omega[pv] = b.omega[vb]
        else:
            omega[pv] = c.omega[vc]

    for vec in omega.values():
        if any(not math.isfinite(x) for x in vec):
            raise NumericError("omega merge produced a non-finite value")
    for x in sigma.values():
        if not math.isfinite(x):
            raise NumericError("sigma merge produced a non-finite value")

    fused = MycObject(fused_graph, sigma, omega)
    into_b = MycMorphism(b, fused, inj_b, kind="embed")
    into_c = MycMorphism(c, fused, inj_c, kind="embed")
    return fused, into_b, into_c
