"""Experiment harness: config files, runners, CSV tables and the CLI."""

from chebgreeks.harness.config import EXPERIMENTS, ExperimentConfig, load_config, parse_config
from chebgreeks.harness.experiments import (
    SCHEMAS,
    run_convergence,
    run_digital_errors,
    run_experiment,
    run_sweep,
    run_variance_scaling,
)
from chebgreeks.harness.results import ResultTable, read_table

__all__ = [
    "EXPERIMENTS",
    "SCHEMAS",
    "ExperimentConfig",
    "ResultTable",
    "load_config",
    "parse_config",
    "read_table",
    "run_convergence",
    "run_digital_errors",
    "run_experiment",
    "run_sweep",
    "run_variance_scaling",
]
