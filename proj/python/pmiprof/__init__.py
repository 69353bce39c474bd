"""Composable joint distributions with tractable densities, PMI profiles and
mutual-information estimators. Thin wrapper over the compiled core."""

import json as _json

from ._core import (  # noqa: F401
    DimensionError,
    Distribution,
    NumericError,
    SpecError,
    bayes_mi,
    benchmark_tasks,
    canonical_correlations,
    cca_mi,
    derive_seed,
    discrete_profile,
    ground_truth,
    histogram,
    histogram_mi,
    ks_distance,
    ksg,
    load_distribution,
    mi_mc,
    preprocess,
    profile_variance_bounds,
    sample_gaussian_profile,
    sample_profile,
    standard_normal,
    task_info,
    variational_bound,
)
from ._core import gaussian_mi as _gaussian_mi
from ._core import make_distribution as _make_distribution

__version__ = "0.1.0"


def make_distribution(spec):
    """Build a distribution from a spec dict or JSON string."""
    if isinstance(spec, str):
        return _make_distribution(spec)
    return _make_distribution(_json.dumps(spec))


def gaussian_mi(rhos):
    """-1/2 sum log(1 - rho_i^2), in nats. Accepts a scalar or a sequence."""
    if isinstance(rhos, (int, float)):
        rhos = [float(rhos)]
    return _gaussian_mi(list(rhos))
