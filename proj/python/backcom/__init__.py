"""Python access to the backscatter network simulator and analytics."""

from ._backcom import (
    ClusterModel,
    DutyFormula,
    MCEstimate,
    MicroPbFormula,
    NetworkParams,
    TrialConfig,
    Variant,
    analytics,
    csv_header,
    d0_threshold,
    estimate_capacity,
    estimate_laplace,
    estimate_micro_pb_power,
    estimate_power_outage,
    estimate_success,
    estimate_success_sweep,
    figure_names,
    load_config,
    parse_config,
    run_experiment,
    run_figure,
    write_csv_file,
)

__all__ = [name for name in dir() if not name.startswith("_")]
