"""Steady states, simulation and metrics for the replication model."""

from ._core import (
    BoundaryMode,
    CommunicationPolicy,
    ModelParams,
    ReplicationModelError,
    StudyProfile,
    analytic_total_mass,
    bundled_configs,
    fixed_point,
    growth_factor,
    mass,
    metrics,
    parse_config,
    pr_activity,
    pr_new_given_activity,
    run_command,
    series_distribution,
    simulate,
    suppression_report,
)

__all__ = [
    "BoundaryMode",
    "CommunicationPolicy",
    "ModelParams",
    "ReplicationModelError",
    "StudyProfile",
    "analytic_total_mass",
    "bundled_configs",
    "fixed_point",
    "growth_factor",
    "mass",
    "metrics",
    "parse_config",
    "pr_activity",
    "pr_new_given_activity",
    "run_command",
    "series_distribution",
    "simulate",
    "suppression_report",
]
