"""Entanglement activation of the phase-conjugating (anti-degradable) channel.

The three-mode circuit uses mode 0 for the signal ``b``, mode 1 for the
amplifier's idler ``a`` and mode 2 for the ancilla ``alpha``:

1. ``alpha`` is entangled with ``a`` by a squeezer of gain ``Gp``;
2. ``a`` and ``b`` interact through the gain-``G`` amplifier, whose idler
   output ``a_out`` is the phase-conjugated signal;
3. ``a_out`` and ``alpha`` meet in an anti-squeezer of gain ``Gpp``.

The activated channel is ``b -> alpha_out``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import GaussianChannel1M, NonCPTPError
from .symplectic import (
    ANTI_SQUEEZE,
    SQUEEZE,
    SymplecticOp,
    embed,
    tms_symplectic,
)

SIGNAL, IDLER, ANCILLA = 0, 1, 2


@dataclass(frozen=True)
class ActivationParams:
    G: float
    G_p: float = 1.0
    G_pp: float = 1.0

    def __post_init__(self):
        if not self.G > 1:
            raise ValueError(f"amplifier gain G must exceed 1, got {self.G!r}")
        if not self.G_p >= 1:
            raise ValueError(f"entangler gain G' must be >= 1, got {self.G_p!r}")
        if not self.G_pp >= 1:
            raise ValueError(f"anti-squeezer gain G'' must be >= 1, got {self.G_pp!r}")

    @property
    def tau(self) -> float:
        return (self.G - 1) * (self.G_pp - 1)


@dataclass(frozen=True)
class TMSStep:
    gain: float
    sign: str
    modes: tuple[int, int]


@dataclass(frozen=True)
class CircuitSpec:
    n_modes: int
    input_occupations: tuple[float, ...]
    ops: tuple[TMSStep, ...]

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("circuit needs at least one mode")
        if len(self.input_occupations) != self.n_modes:
            raise ValueError("one input occupation per mode is required")
        if any(not n >= 0 for n in self.input_occupations):
            raise ValueError("input occupations must be non-negative")
        for step in self.ops:
            if not step.gain >= 1:
                raise ValueError(f"squeezer gain must be >= 1, got {step.gain!r}")
            a, b = step.modes
            if a == b or not (0 <= a < self.n_modes and 0 <= b < self.n_modes):
                raise ValueError(f"invalid mode pair {step.modes}")

    def symplectic(self) -> SymplecticOp:
        """Total quadrature map, later steps acting on the left."""
        total = np.eye(2 * self.n_modes)
        for step in self.ops:
            op = tms_symplectic(step.gain, step.sign)
            total = embed(op, step.modes, self.n_modes) @ total
        return SymplecticOp(self.n_modes, total)


def _coefficients(p: ActivationParams) -> tuple[float, float, float]:
    """Amplitudes of ``b``, ``alpha`` and ``a^dagger`` in ``alpha_out``."""
    sg, sg1 = math.sqrt(p.G), math.sqrt(p.G - 1)
    sp, sp1 = math.sqrt(p.G_p), math.sqrt(p.G_p - 1)
    spp, spp1 = math.sqrt(p.G_pp), math.sqrt(p.G_pp - 1)
    t = -spp1 * sg1
    c_alpha = sp * spp - sp1 * spp1 * sg
    c_idler = sp1 * spp - sp * spp1 * sg
    return t, c_alpha, c_idler


def eac_noise_m(p: ActivationParams) -> float:
    """Isotropic noise variance of the activated channel."""
    _, c_alpha, c_idler = _coefficients(p)
    return c_alpha**2 + c_idler**2


def eac_channel(p: ActivationParams) -> GaussianChannel1M:
    t, _, _ = _coefficients(p)
    ch = GaussianChannel1M(T=t * np.eye(2), N=eac_noise_m(p) * np.eye(2))
    try:
        ch.check_cptp()
    except NonCPTPError as exc:
        raise RuntimeError(f"activated channel failed its CPTP self-check for {p}") from exc
    return ch


def build_activation_circuit(p: ActivationParams) -> CircuitSpec:
    return CircuitSpec(
        n_modes=3,
        input_occupations=(0.0, 0.0, 0.0),
        ops=(
            TMSStep(p.G_p, SQUEEZE, (IDLER, ANCILLA)),
            TMSStep(p.G, SQUEEZE, (IDLER, SIGNAL)),
            TMSStep(p.G_pp, ANTI_SQUEEZE, (IDLER, ANCILLA)),
        ),
    )


def extract_induced_channel(c: CircuitSpec, in_mode: int, out_mode: int) -> GaussianChannel1M:
    """Read the one-mode channel ``in_mode -> out_mode`` off a circuit.

    Every mode other than ``in_mode`` is environment, prepared in the
    thermal state given by the circuit's input occupations.
    """
    for m in (in_mode, out_mode):
        if not 0 <= m < c.n_modes:
            raise ValueError(f"mode index {m} out of range for {c.n_modes} mode(s)")
    S = c.symplectic().matrix
    rows = slice(2 * out_mode, 2 * out_mode + 2)
    T = S[rows, 2 * in_mode : 2 * in_mode + 2]
    N = np.zeros((2, 2))
    for e in range(c.n_modes):
        if e == in_mode:
            continue
        block = S[rows, 2 * e : 2 * e + 2]
        N += (2 * c.input_occupations[e] + 1) * (block @ block.T)
    return GaussianChannel1M(T=T, N=N)


def rejected_af_channel(p: ActivationParams) -> GaussianChannel1M:
    """The ``b -> a_f`` channel; still phase conjugating for every ``p``."""
    return extract_induced_channel(build_activation_circuit(p), SIGNAL, IDLER)


def eac_environment_photons(p: ActivationParams) -> float:
    """Environment photon number of the activated channel (``tau != 1``)."""
    tau = p.tau
    if tau == 1:
        raise ValueError("environment photon number is undefined at tau == 1")
    return eac_noise_m(p) / (2 * abs(1 - tau)) - 0.5


class BracketError(RuntimeError):
    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message} (last bracket [{bracket[0]:.6g}, {bracket[1]:.6g}])")
        self.bracket = bracket


def optimal_gprime(
    G: float,
    G_pp: float,
    *,
    g_hi: float = 100.0,
    g_max: float = 1e12,
    scan_points: int = 2001,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Entangler gain minimising the activated channel's environment noise.

    A log-spaced scan over ``[1, g_hi]`` locates the basin; the upper end is
    widened by 100x until the minimum is interior or ``g_max`` is passed.
    Bounded Brent refinement then polishes the minimiser.
    """
    if not G_pp > 1:
        raise ValueError(f"G'' must exceed 1, got {G_pp!r}")
    tau = ActivationParams(G, 1.0, G_pp).tau
    if abs(tau - 1) <= 1e-12:
        raise ValueError("tau == 1: noise vanishes only as G' -> infinity")

    def n_e(gp: float) -> float:
        return eac_environment_photons(ActivationParams(G, gp, G_pp))

    hi = g_hi
    while True:
        grid = 1 + np.geomspace(1e-12, hi - 1, scan_points)
        grid = np.concatenate(([1.0], grid))
        values = np.array([n_e(gp) for gp in grid])
        i = int(np.argmin(values))
        if i < len(grid) - 1:
            break
        if hi >= g_max:
            raise BracketError("minimum not bracketed", (float(grid[-2]), float(grid[-1])))
        hi *= 100

    lo_b = float(grid[max(i - 1, 0)])
    hi_b = float(grid[i + 1])
    res = minimize_scalar(
        n_e, bounds=(lo_b, hi_b), method="bounded", options={"xatol": tol * max(1.0, lo_b)}
    )
    best_x, best_v = float(res.x), float(res.fun)
    if values[i] < best_v:
        best_x, best_v = float(grid[i]), float(values[i])
    return best_x, max(best_v, 0.0)

