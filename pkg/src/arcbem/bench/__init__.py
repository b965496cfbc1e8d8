"""Benchmark scenarios, iteration tables, convergence studies and the CLI."""

from .scenario import Scenario, ScenarioResult, mesh_size_for, run_scenario

__all__ = ["Scenario", "ScenarioResult", "mesh_size_for", "run_scenario"]
