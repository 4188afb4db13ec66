from ._surveyor import (
    AgentMetrics,
    Engine,
    Metrics,
    Scenario,
    exhaustive_mtsp,
    load_scenario,
    scenario_from_json,
    validate_scenario,
)

__all__ = [
    "AgentMetrics",
    "Engine",
    "Metrics",
    "Scenario",
    "exhaustive_mtsp",
    "load_scenario",
    "scenario_from_json",
    "validate_scenario",
]
