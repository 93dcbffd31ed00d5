"""Python surface of the empirical-measure CLT laboratory.

The heavy lifting (exact optimal transport, functional derivatives,
Poisson equations, Monte Carlo harness) lives in the C++ extension.
"""

from fclt._core import (
    DiscreteMeasure,
    catalog_ids,
    derivative,
    evaluate,
    invariant_weights,
    poisson_solve,
    run_experiment_json,
    wasserstein,
    wasserstein0,
)

__all__ = [
    "DiscreteMeasure",
    "catalog_ids",
    "derivative",
    "evaluate",
    "invariant_weights",
    "poisson_solve",
    "run_experiment_json",
    "wasserstein",
    "wasserstein0",
]
