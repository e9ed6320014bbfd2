"""Persistent H0/H1 of Rips filtrations and the local minima that drive them."""

from .metric_core import (
    FiniteMetricSpace,
    MetricError,
    MetricKind,
    ball,
    circle_sample,
    cluster_sample,
    from_matrix,
    from_points,
    ladder_space,
    witness_triangle,
)
from .rips_complex import Convention, Filtration, build_filtration, complex_at, selective_entry_value
from .persistence import Bar, Barcode, compute_barcode, components_at, extract_spectra, rank_at
from .minima import LocalMinimumRecord, descend, eps_local_minima, group_mc, is_isolated
from .analysis import (
    bound_check,
    converse_criterion,
    crossing_number,
    reconstruction_check,
    selective_detection,
    verify_criterion,
    verify_spectrum_containment,
)

__version__ = "0.1.0"
