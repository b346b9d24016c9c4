"""Electro-optic transducer front end.

On resonance, a blue-detuned electro-optic device acts as a two-mode
squeezer whose gain is fixed by its cooperativity.  Rates are angular
frequencies (rad/s); only their dimensionless combination matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .activation import ActivationParams, eac_channel
from .channels import q_lower_bound


@dataclass(frozen=True)
class EOParams:
    coupling_g: float
    kappa_o: float
    kappa_e: float

    def __post_init__(self):
        if not self.coupling_g >= 0:
            raise ValueError("coupling strength must be non-negative")
        if not (self.kappa_o > 0 and self.kappa_e > 0):
            raise ValueError("dissipation rates must be positive")


def cooperativity(p: EOParams) -> float:
    c = 4 * p.coupling_g**2 / (p.kappa_o * p.kappa_e)
    if c >= 1:
        raise ValueError(f"cooperativity {c:.6g} >= 1: the device is unstable")
    return c


def gain_from_cooperativity(C_g: float) -> float:
    if not 0 <= C_g < 1:
        raise ValueError(f"cooperativity must lie in [0, 1), got {C_g!r}")
    return ((1 + C_g) / (1 - C_g)) ** 2


def cooperativity_from_gain(G: float) -> float:
    """Inverse of :func:`gain_from_cooperativity`."""
    if not G >= 1:
        raise ValueError(f"gain must be >= 1, got {G!r}")
    s = math.sqrt(G)
    return (s - 1) / (s + 1)


def transduction_qlb(C_g: float, G_p: float, G_pp: float) -> float:
    """Capacity lower bound of the activated microwave-to-optical channel."""
    if not 0 < C_g < 1:
        raise ValueError(f"cooperativity must lie in (0, 1), got {C_g!r}")
    return q_lower_bound(eac_channel(ActivationParams(gain_from_cooperativity(C_g), G_p, G_pp)))
