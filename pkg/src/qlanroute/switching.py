"""Super-node augmentation and the pipelines that switch a network to its complement.

A pair of super-nodes, one per QLAN and joined by an inter-link, is wired
into the client population in one of two ways:

* Case I: each super-node connects to every non-retained client of the
  opposite QLAN.
* Case II: each super-node connects to every non-retained client of its
  own QLAN. That graph intentionally carries intra-QLAN edges, a
  deliberate relaxation of the cross-QLAN-only rule.

Measuring the two super-nodes in the X basis, s2 first and then s1 with a
fixed special neighbor k0, removes them and leaves the clients holding the
complement topology: remote client pairs become adjacent and vice versa.
The cost is constant, two measurements, no matter how many clients or
requests are involved. Clients listed as retained are left out of the
switch simply by not wiring them to the super-nodes.

At graph level an X measurement on vertex ``a`` with special neighbor
``k0`` acts as ``tau_k0( tau_a( tau_k0(G) ) - a )``. The graph rule is
outcome-independent; outcome-dependent local byproducts live at the state
level and are handled by the oracle's correction layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import InternalAssertionError, ValidationError
from .graph import (
    InterQlanGraph,
    LabeledVertex,
    Qlan,
    Role,
    delete_vertex,
    edges_as_names,
    local_complement,
    make_edge,
    neighbors,
    super_node,
    validate_client_graph,
    vertex_sort_key,
)


class AugmentationCase(Enum):
    """How the super-nodes attach to the clients: "I" remote, "II" local."""

    CASE_I = "I"
    CASE_II = "II"


@dataclass(frozen=True)
class AugmentedGraph:
    """A client graph plus two wired super-nodes, ready for the pipeline.

    ``retained`` clients keep their original inter-links: they are
    adjacent to neither super-node and sit out the complement switch.
    The constructor re-validates the full structural contract, so an
    AugmentedGraph is valid however it was built.
    """

    graph: InterQlanGraph
    case: AugmentationCase
    retained: frozenset[LabeledVertex] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "retained", frozenset(self.retained))
        _validate_augmented(self)

    @property
    def s1(self) -> LabeledVertex:
        return _super_of(self.graph, Qlan.Q1)

    @property
    def s2(self) -> LabeledVertex:
        return _super_of(self.graph, Qlan.Q2)

    def client_base(self) -> InterQlanGraph:
        """The client-induced subgraph: the network the pipeline output refers to."""
        clients = frozenset(v for v in self.graph.vertices if not v.is_super)
        edges = frozenset(e for e in self.graph.edges if not (e[0].is_super or e[1].is_super))
        return InterQlanGraph(clients, edges)


def _super_of(g: InterQlanGraph, qlan: Qlan) -> LabeledVertex:
    for v in g.supers():
        if v.qlan is qlan:
            return v
    raise ValidationError(f"QLAN {qlan.value} has no super-node")


def _validate_augmented(aug: AugmentedGraph) -> None:
    g = aug.graph
    supers = g.supers()
    if len(supers) != 2 or {s.qlan for s in supers} != {Qlan.Q1, Qlan.Q2}:
        raise ValidationError("an augmented graph needs exactly one super-node per QLAN")
    s1, s2 = _super_of(g, Qlan.Q1), _super_of(g, Qlan.Q2)
    if not g.has_edge(s1, s2):
        raise ValidationError("super-nodes must be joined by the (s1, s2) inter-link")
    for r in aug.retained:
        if r not in g.vertices or r.is_super:
            raise ValidationError(f"retained vertex {r.name} is not a client of the graph")
        if g.has_edge(r, s1) or g.has_edge(r, s2):
            raise ValidationError(f"retained client {r.name} must not be adjacent to a super-node")
    for c in g.clients():
        own = s1 if c.qlan is Qlan.Q1 else s2
        opposite = s2 if c.qlan is Qlan.Q1 else s1
        want = aug.case is AugmentationCase.CASE_I
        if c in aug.retained:
            continue  # non-adjacency already checked above
        if g.has_edge(c, opposite) != want:
            raise ValidationError(
                f"client {c.name} breaks the Case {aug.case.value} wiring to {opposite.name}"
            )
        if g.has_edge(c, own) == want:
            raise ValidationError(
                f"client {c.name} breaks the Case {aug.case.value} wiring to {own.name}"
            )
    for e in g.edges:
        if not (e[0].is_super or e[1].is_super) and e[0].qlan is e[1].qlan:
            raise ValidationError(
                f"client edge ({e[0].name}, {e[1].name}) stays inside one QLAN"
            )


@dataclass(frozen=True)
class MeasurementRecord:
    """One X measurement step: who was measured, with which k0, and the
    graphs immediately before and after."""

    measured_vertex: LabeledVertex
    special_neighbor: LabeledVertex
    step_index: int
    pre_graph: InterQlanGraph
    post_graph: InterQlanGraph

    def __post_init__(self) -> None:
        if self.special_neighbor not in neighbors(self.pre_graph, self.measured_vertex):
            raise ValidationError(
                f"k0 {self.special_neighbor.name} is not adjacent to "
                f"{self.measured_vertex.name} in the pre-measurement graph"
            )


def _check_augmentable(g: InterQlanGraph, retain: Iterable[LabeledVertex]) -> frozenset[LabeledVertex]:
    validate_client_graph(g)
    if g.n1 == 0 or g.n2 == 0:
        raise ValidationError("empty QLAN: augmentation needs at least one client per QLAN")
    retained = frozenset(retain)
    for r in retained:
        if r not in g.vertices:
            raise ValidationError(f"retained vertex {r.name} is not in the graph")
    return retained


def augment_case1(g: InterQlanGraph, retain: Iterable[LabeledVertex] = ()) -> AugmentedGraph:
    """Add fresh super-nodes wired to the opposite QLAN's non-retained clients."""
    retained = _check_augmentable(g, retain)
    s1, s2 = super_node(Qlan.Q1), super_node(Qlan.Q2)
    edges = set(g.edges)
    edges.add(make_edge(s1, s2))
    for v in g.clients():
        if v in retained:
            continue
        edges.add(make_edge(v, s2 if v.qlan is Qlan.Q1 else s1))
    graph = InterQlanGraph(g.vertices | {s1, s2}, frozenset(edges))
    return AugmentedGraph(graph, AugmentationCase.CASE_I, retained)


def augment_case2(g: InterQlanGraph, retain: Iterable[LabeledVertex] = ()) -> AugmentedGraph:
    """Add fresh super-nodes wired to their own QLAN's non-retained clients."""
    retained = _check_augmentable(g, retain)
    s1, s2 = super_node(Qlan.Q1), super_node(Qlan.Q2)
    edges = set(g.edges)
    edges.add(make_edge(s1, s2))
    for v in g.clients():
        if v in retained:
            continue
        edges.add(make_edge(v, s1 if v.qlan is Qlan.Q1 else s2))
    graph = InterQlanGraph(g.vertices | {s1, s2}, frozenset(edges))
    return AugmentedGraph(graph, AugmentationCase.CASE_II, retained)


def promote_super(
    g: InterQlanGraph,
    v1: LabeledVertex,
    v2: LabeledVertex,
    retain: Iterable[LabeledVertex] = (),
) -> AugmentedGraph:
    """Mark two existing, fully connected clients as the Case I super-nodes.

    When a client already has the Case I connectivity (adjacent to every
    non-retained client of the opposite QLAN, and to its counterpart),
    no fresh vertex is needed; the pair is relabeled in place. Full
    connectivity is validated here rather than trusted.
    """
    retained = _check_augmentable(g, retain)
    for v, q in ((v1, Qlan.Q1), (v2, Qlan.Q2)):
        if v not in g.vertices or v.is_super or v.qlan is not q:
            raise ValidationError(f"promotion target {v.name} must be a QLAN {q.value} client")
        if v in retained:
            raise ValidationError(f"promotion target {v.name} cannot also be retained")
    if not g.has_edge(v1, v2):
        raise ValidationError(f"promotion needs the inter-link ({v1.name}, {v2.name})")
    for v, opposite in ((v1, Qlan.Q2), (v2, Qlan.Q1)):
        partner = v2 if v is v1 else v1
        for c in g.clients(opposite):
            if c == partner:
                continue
            if c in retained:
                if g.has_edge(v, c):
                    raise ValidationError(
                        f"{v.name} is adjacent to retained client {c.name}; retained clients "
                        "must not touch a super-node"
                    )
            elif not g.has_edge(v, c):
                raise ValidationError(
                    f"{v.name} lacks full opposite-QLAN connectivity: no inter-link to {c.name}"
                )
    relabel = {
        v1: LabeledVertex(v1.qlan, v1.index, Role.SUPER),
        v2: LabeledVertex(v2.qlan, v2.index, Role.SUPER),
    }
    vertices = frozenset(relabel.get(v, v) for v in g.vertices)
    edges = frozenset(make_edge(relabel.get(a, a), relabel.get(b, b)) for (a, b) in g.edges)
    return AugmentedGraph(InterQlanGraph(vertices, edges), AugmentationCase.CASE_I, retained)


# -- measurement -------------------------------------------------------


def measure_x(
    g: InterQlanGraph,
    a: LabeledVertex,
    k0: LabeledVertex,
    step_index: int = 0,
) -> tuple[InterQlanGraph, MeasurementRecord]:
    """X-measure vertex ``a`` using neighbor ``k0``: tau_k0(tau_a(tau_k0(g)) - a).

    Deterministic given (g, a, k0); the record captures the step for
    audit, replay and state-level verification.
    """
    nbrs = neighbors(g, a)
    if not len(nbrs):
        raise ValidationError(f"X-measurement requires a neighbor, but {a.name} is isolated")
    if k0 not in nbrs:
        raise ValidationError(f"k0 {k0.name} is not adjacent to the measured vertex {a.name}")
    h = local_complement(g, k0)
    h = local_complement(h, a)
    h = delete_vertex(h, a)
    post = local_complement(h, k0)
    return post, MeasurementRecord(a, k0, step_index, g, post)


def eligible_k0(aug: AugmentedGraph) -> tuple[LabeledVertex, ...]:
    """Clients usable as the special neighbor: non-retained, adjacent to s2.

    Case I draws them from QLAN 1, Case II from QLAN 2.
    """
    source = Qlan.Q1 if aug.case is AugmentationCase.CASE_I else Qlan.Q2
    out = [
        c
        for c in aug.graph.clients(source)
        if c not in aug.retained and aug.graph.has_edge(c, aug.s2)
    ]
    return tuple(sorted(out, key=vertex_sort_key))


def default_k0(aug: AugmentedGraph) -> LabeledVertex:
    """Lowest-index eligible client. The output never depends on the choice."""
    candidates = eligible_k0(aug)
    if not candidates:
        raise ValidationError("no valid k0 exists: every eligible client is retained or missing")
    return candidates[0]


def _run(aug: AugmentedGraph, k0: LabeledVertex | None) -> tuple[InterQlanGraph, list[MeasurementRecord]]:
    if k0 is None:
        k0 = default_k0(aug)
    if k0 not in eligible_k0(aug):
        raise ValidationError(
            f"k0 {k0.name} is not eligible: it must be a non-retained "
            f"{'QLAN 1' if aug.case is AugmentationCase.CASE_I else 'QLAN 2'} client adjacent to s2"
        )
    s1, s2 = aug.s1, aug.s2
    g1, rec1 = measure_x(aug.graph, s2, k0, step_index=0)
    if k0 not in neighbors(g1, s1):
        raise InternalAssertionError(
            f"k0 {k0.name} should be adjacent to s1 after the first measurement; it is not"
        )
    g2, rec2 = measure_x(g1, s1, k0, step_index=1)
    if g2.supers():
        raise InternalAssertionError("pipeline output still contains a super-node")
    for e in g2.edges:
        if e[0].qlan is e[1].qlan:
            raise InternalAssertionError(
                f"pipeline output has intra-QLAN edge ({e[0].name}, {e[1].name})"
            )
    return g2, [rec1, rec2]


def run_case1(aug: AugmentedGraph, k0: LabeledVertex | None = None) -> tuple[InterQlanGraph, list[MeasurementRecord]]:
    """Case I pipeline: measure s2 then s1; with no retained clients the
    result is exactly the complement of the client base graph."""
    if aug.case is not AugmentationCase.CASE_I:
        raise ValidationError("run_case1 needs a Case I augmented graph")
    return _run(aug, k0)


def run_case2(aug: AugmentedGraph, k0: LabeledVertex | None = None) -> tuple[InterQlanGraph, list[MeasurementRecord]]:
    """Case II pipeline: same two-measurement switch on the locally wired graph."""
    if aug.case is not AugmentationCase.CASE_II:
        raise ValidationError("run_case2 needs a Case II augmented graph")
    return _run(aug, k0)


def run_pipeline(aug: AugmentedGraph, k0: LabeledVertex | None = None) -> tuple[InterQlanGraph, list[MeasurementRecord]]:
    """Case-appropriate pipeline, full or partial."""
    if aug.case is AugmentationCase.CASE_I:
        return run_case1(aug, k0)
    return run_case2(aug, k0)


def run_partial(aug: AugmentedGraph, k0: LabeledVertex | None = None) -> tuple[InterQlanGraph, list[MeasurementRecord]]:
    """Partial switch: retained clients sit out, the rest is complemented.

    The adjacency of non-retained pairs is contractually complemented;
    what happens at retained-incident pairs is recorded and certified
    against the state-level oracle rather than asserted a priori (the
    sweeps observe that retained clients keep their original inter-links).
    """
    if not aug.retained:
        raise ValidationError("run_partial needs a non-empty retained set")
    return run_pipeline(aug, k0)


def run_measurement_sequence(
    g: InterQlanGraph,
    steps: Sequence[tuple[LabeledVertex, LabeledVertex]],
) -> tuple[InterQlanGraph, list[MeasurementRecord]]:
    """Experimental: apply X measurements (vertex, k0) in the given order.

    No complement contract attaches to this entry point; it exists so
    alternative orders and per-step k0 choices can be explored and
    compared against the contractual pipelines.
    """
    records = []
    cur = g
    for i, (a, k0) in enumerate(steps):
        cur, rec = measure_x(cur, a, k0, step_index=i)
        records.append(rec)
    return cur, records


# -- trace export ------------------------------------------------------


def _graph_snapshot(g: InterQlanGraph) -> dict:
    return {
        "vertices": [v.name for v in sorted(g.vertices, key=vertex_sort_key)],
        "edges": edges_as_names(g),
    }


def records_to_json(records: Sequence[MeasurementRecord]) -> list[dict]:
    """Ordered trace of a pipeline run, for audit and replay."""
    return [
        {
            "step": r.step_index,
            "measured": r.measured_vertex.name,
            "k0": r.special_neighbor.name,
            "pre": _graph_snapshot(r.pre_graph),
            "post": _graph_snapshot(r.post_graph),
        }
        for r in records
    ]


def replay_records(records: Sequence[MeasurementRecord]) -> InterQlanGraph:
    """Re-apply each recorded step and check it reproduces its post graph.

    Returns the final graph; raises ValidationError on an inconsistent
    chain (gaps between steps or a post graph that does not match).
    """
    if not records:
        raise ValidationError("cannot replay an empty record list")
    cur = records[0].pre_graph
    for r in records:
        if r.pre_graph != cur:
            raise ValidationError(
                f"inconsistent records: step {r.step_index} does not start from the previous result"
            )
        cur, _ = measure_x(cur, r.measured_vertex, r.special_neighbor, r.step_index)
        if cur != r.post_graph:
            raise ValidationError(
                f"inconsistent records: step {r.step_index} does not reproduce its post graph"
            )
    return cur
