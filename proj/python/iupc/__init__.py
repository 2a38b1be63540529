"""Process-constraint engine: identification, unification, design-time
checking and trace replay over process schemas."""

from iupc._core import (  # noqa: F401
    IupcError,
    ProcessSchema,
    ProcessConstraint,
    ResourceModel,
    Trace,
    parse_process_schema,
    parse_constraint,
    parse_resource_model,
    parse_traces,
    enumerate_paths,
    identify,
    check_design_time,
    analyze_data_coverage,
    replay,
)

__all__ = [
    "IupcError",
    "ProcessSchema",
    "ProcessConstraint",
    "ResourceModel",
    "Trace",
    "parse_process_schema",
    "parse_constraint",
    "parse_resource_model",
    "parse_traces",
    "enumerate_paths",
    "identify",
    "check_design_time",
    "analyze_data_coverage",
    "replay",
]
