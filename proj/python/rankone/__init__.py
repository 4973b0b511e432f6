"""Eigenvalue flow of G_t = H + it vv*.

Thin wrapper over the C++ core: GUE/Wigner sampling, the weighted
resolvent and its deterministic limit, trajectory tracing by Newton
continuation and by the closed ODE, the polynomial root oracle, and the
outlier/local-law diagnostics.
"""

from ._rankone import (
    RNG_ALGORITHM,
    RankoneError,
    SampledSystem,
    classify_outlier,
    integrate_ode,
    limit_points,
    local_law,
    m_frak,
    matched_max_distance,
    oracle_eigen,
    render_svg,
    sample_system,
    t_star,
    trace,
    trajectory_csv,
    weighted_resolvent,
    weighted_resolvent_deriv,
)

__all__ = [
    "RNG_ALGORITHM",
    "RankoneError",
    "SampledSystem",
    "classify_outlier",
    "integrate_ode",
    "limit_points",
    "local_law",
    "m_frak",
    "matched_max_distance",
    "oracle_eigen",
    "render_svg",
    "sample_system",
    "t_star",
    "trace",
    "trajectory_csv",
    "weighted_resolvent",
    "weighted_resolvent_deriv",
]
