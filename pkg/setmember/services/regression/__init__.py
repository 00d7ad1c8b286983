from setmember.services.regression.model import (
    Measurement,
    RunningSlab,
    Scenario,
    SensorModel,
    generate_scenario,
    measure,
    measurement_set,
    scenario_from_config,
    update_running_slab,
)
from setmember.services.regression.noise import symmetric_noise, uniform_draws

__all__ = [
    "Measurement",
    "RunningSlab",
    "Scenario",
    "SensorModel",
    "generate_scenario",
    "measure",
    "measurement_set",
    "scenario_from_config",
    "symmetric_noise",
    "uniform_draws",
    "update_running_slab",
]
