"""opdist: zero-error discrimination of quantum operations.

Decides whether two channels given by Kraus operators can be told apart
perfectly in finitely many queries, builds and simulates an explicit
protocol, and computes optimal query counts through q-maximal fidelities
and q-numerical ranges.
"""

from .core import (
    DensityOperator,
    DimensionMismatch,
    Measurement,
    PureState,
    QuantumChannel,
    apply_channel,
    channel_from_measurement,
    extend_with_ancilla,
    max_entangled,
    support_projector,
)
from .discrimination import (
    DiscriminationProtocol,
    DistinguishabilityVerdict,
    NotDistinguishable,
    build_protocol,
    check_distinguishable,
    find_final_pair,
    simulate_protocol,
)
from .disjointness import DisjointnessReport, ea_disjoint, verify_witness
from .fidelity import (
    SupportPairDecomposition,
    TransformInfeasible,
    build_transform,
    max_fidelity,
    support_pair_decompose,
    two_pure_transform,
)
from .qfidelity import (
    QFidOptions,
    QFidResult,
    QSequence,
    n_min,
    q_fidelity,
    q_fidelity_ea,
    q_max,
    q_sequence,
    unassisted_disjoint_search,
)
from .qrange import (
    EllipseParams,
    QRangeModel,
    check_tensor_identity,
    inner_radius,
    isometry_q_fidelity,
    numerical_range,
    pd_inner_radius,
    pd_n_min,
    shell_upper,
)
from .spans import OperatorSpan, complement_projection, contains, intersect, span_from

__version__ = "0.1.0"
