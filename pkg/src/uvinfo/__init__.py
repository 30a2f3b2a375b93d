"""Nonstochastic information theory: uncertain variables, maximin information,
zero-error capacity, and state estimation over erroneous channels."""

from .channel import (
    Channel,
    CapacityProfile,
    block_conditional_range,
    c0_lower_profile,
    codebook_witness,
    confusability_graph,
    make_channel,
    reverse_map,
    transmit,
)
from .coder import CoderEstimator, build_coder_estimator, simulate_disturbed, simulate_noiseless
from .estimation import (
    PlantModel,
    feasibility_check,
    make_plant,
    necessity_witness,
    unstable_exponent,
)
from .graphs import Graph, max_independent_set, strong_product
from .intervals import IntervalUnion
from .measures import (
    Partition,
    conditional_entropy0,
    hartley,
    klir_transmission,
    maximin_info,
    overlap_partition,
    renyi0,
    taxicab_partition,
    zero_info,
)
from .uv import (
    Ensemble,
    SetFamily,
    build_ensemble,
    conditional_family,
    conditional_range,
    is_markov_chain,
    is_unrelated,
    joint_range,
    marginal_range,
)

__version__ = "0.1.0"
