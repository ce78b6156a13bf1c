"""Purity-weighted quantum fidelity and the speed-limit bound built on it."""
from .densmat import (hs_inner, partial_trace, purity, random_density, random_unitary,
                      sqrt_psd, tensor)
from .dynamics import ReservoirParams, WernerSpec, evolve, g_function, werner_state
from .fidelity import FidelityKind, bures, evaluate, f1, f2, f3, new_f
from .qsl import BoundResult, QuadratureConfig, mt_pure_bound, qsl_time

__all__ = [
    "BoundResult", "FidelityKind", "QuadratureConfig", "ReservoirParams", "WernerSpec",
    "bures", "evaluate", "evolve", "f1", "f2", "f3", "g_function", "hs_inner", "mt_pure_bound",
    "new_f", "partial_trace", "purity", "qsl_time", "random_density", "random_unitary",
    "sqrt_psd", "tensor", "werner_state",
]
