from vos_tracking.synthetic.purity import PurityReport, purity
from vos_tracking.synthetic.scenario import (
    NoiseSpec,
    ObjectSpec,
    ScenarioSpec,
    SyntheticScenario,
    generate,
    write_scenario,
)

__all__ = [
    "NoiseSpec",
    "ObjectSpec",
    "ScenarioSpec",
    "SyntheticScenario",
    "generate",
    "write_scenario",
    "PurityReport",
    "purity",
]
