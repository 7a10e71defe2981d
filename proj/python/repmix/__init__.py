"""Gaussian mixture fitting under repulsive priors.

Thin wrapper over the compiled core: density evaluation, repulsion functions,
tau calibration, slice-sampling chains and full pipeline fits.
"""

from ._core import (
    CalibrationError,
    InputError,
    SamplerError,
    calibrate_tau,
    distance,
    eval_mixture_density,
    fit_config,
    g,
    g_inverse,
    generate_scenario,
    h,
    run_chain_simple,
    sum_extra_weights,
)

__all__ = [
    "CalibrationError",
    "InputError",
    "SamplerError",
    "calibrate_tau",
    "distance",
    "eval_mixture_density",
    "fit_config",
    "g",
    "g_inverse",
    "generate_scenario",
    "h",
    "run_chain_simple",
    "sum_extra_weights",
]
