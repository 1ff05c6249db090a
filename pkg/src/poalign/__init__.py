"""poalign: align partial orders to maximize adjacencies or minimize
breakpoints, with executable hardness reductions and L-reduction checks."""

from .align import (
    AlignmentInstance,
    AlignmentSolution,
    Block,
    BlockPartition,
    DpTable,
    dp_align_linear_weak,
    dp_recurrence,
    oracle_align,
    partition_blocks,
)
from .errors import (
    CapExceededError,
    DegreeError,
    DuplicateVariableError,
    FamilyMismatchError,
    MarkerSetMismatchError,
    OccurrenceCountError,
    ParseError,
    PoalignError,
    PolarityError,
    SizeExceededError,
    ValidationError,
)
from .generators import GeneratorConfig, gen_graph, gen_instance, gen_sat32
from .lreduction import (
    LRedReport,
    brute_maxsat,
    brute_mis,
    greedy_mis,
    naive_assignment,
    verify_lreduction,
)
from .mis3 import (
    Graph,
    Mis3Certificate,
    extract_independent_set,
    is_independent,
    reduce_mis3,
    solution_from_independent_set,
    vertex_incidence,
)
from .orders import (
    DagOrder,
    IntervalOrder,
    LinearOrder,
    MarkerSet,
    Order,
    OrderFamily,
    WeakOrder,
    adjacency_set,
    classify,
    count_adjacencies,
    count_breakpoints,
    count_linear_extensions,
    enumerate_linear_extensions,
    family_of,
    is_linear_extension,
    precedes,
    random_extension,
    to_interval_representation,
    to_weak,
)
from .sat32 import (
    Sat32Certificate,
    Sat32Instance,
    extract_assignment,
    normalize_sat32,
    reduce_sat32,
    satisfied_count,
    solution_from_assignment,
)

__version__ = "0.1.0"
