"""Deterministic discrete-event simulation of Iridium and Chord workloads."""
from cdnlab.sim.engine import EventQueue
from cdnlab.sim.report import CSV_COLUMNS, ChurnRecord, LookupRecord, MetricsReport, format_table
from cdnlab.sim.runner import compare_protocols, expected_failure_rate, run_scenario, sweep
from cdnlab.sim.scenario import (
    Scenario,
    ScenarioError,
    dump_scenario,
    load_scenario,
    parse_scenario,
)

__all__ = [
    "CSV_COLUMNS",
    "ChurnRecord",
    "EventQueue",
    "LookupRecord",
    "MetricsReport",
    "Scenario",
    "ScenarioError",
    "compare_protocols",
    "dump_scenario",
    "expected_failure_rate",
    "format_table",
    "load_scenario",
    "parse_scenario",
    "run_scenario",
    "sweep",
]
