"""qlanroute: graph-complement switching for entanglement routing between two QLANs.

The package turns the pathfinding problem "entangle these remote
source-destination pairs" into a single constant-cost graph manipulation:
augment the inter-QLAN graph state with two super-nodes, X-measure them,
and every remote client pair becomes adjacent at once. A dense
state-vector oracle certifies each graph-level step, and a routing
simulator quantifies the strategy against the traditional
swap-along-a-path baseline.
"""

from .errors import (
    CapacityError,
    InternalAssertionError,
    QlanRouteError,
    UnknownVertexError,
    ValidationError,
)
from .graph import (
    InterQlanGraph,
    LabeledVertex,
    Neighborhood,
    Qlan,
    Role,
    client,
    client_graph,
    complement_graph,
    complement_neighborhood,
    delete_vertex,
    graph_from_json,
    graph_to_json,
    local_complement,
    make_edge,
    neighbors,
    super_node,
    to_dot,
    vertex_from_name,
)
from .oracle import (
    MeasurementOutcome,
    QuantumState,
    VerificationReport,
    apply_x_corrections,
    fidelity,
    prepare_graph_state,
    project_x,
    stabilizer_expectation,
    verify_pipeline,
)
from .routing import (
    ComparisonReport,
    PhysicalTopology,
    RequestSet,
    RoutingReport,
    compare,
    execute_complement,
    find_path,
    run_complement,
    run_tqr,
)
from .scenario import (
    Scenario,
    load_bundled_scenario,
    load_scenario,
    parse_scenario,
    random_scenario,
    scenario_graph,
    scenario_requests,
    scenario_topology,
)
from .switching import (
    AugmentationCase,
    AugmentedGraph,
    MeasurementRecord,
    augment_case1,
    augment_case2,
    default_k0,
    eligible_k0,
    measure_x,
    promote_super,
    records_to_json,
    replay_records,
    run_case1,
    run_case2,
    run_measurement_sequence,
    run_partial,
    run_pipeline,
)

__version__ = "0.1.0"
