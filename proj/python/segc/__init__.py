"""Schema-guided event graph completion.

Thin python surface over the C++ core: event-graph IO, subgraph matching,
path features, synthetic data generation, training, inference, and the two
evaluation protocols.
"""

from segc._core import (
    EventGraph,
    GraphValidationError,
    Link,
    MatchResult,
    Node,
    bag_of_paths,
    build_vocabulary,
    complete,
    enumerate_paths,
    eval_binary,
    eval_complete,
    gen,
    gen_schema,
    grad_check,
    jaccard,
    load_graph,
    match,
    parse_graph,
    perturb_schema,
    save_graph,
    train,
)

__all__ = [
    "EventGraph",
    "GraphValidationError",
    "Link",
    "MatchResult",
    "Node",
    "bag_of_paths",
    "build_vocabulary",
    "complete",
    "enumerate_paths",
    "eval_binary",
    "eval_complete",
    "gen",
    "gen_schema",
    "grad_check",
    "jaccard",
    "load_graph",
    "match",
    "parse_graph",
    "perturb_schema",
    "save_graph",
    "train",
]
