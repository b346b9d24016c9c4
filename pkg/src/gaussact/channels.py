"""One-mode Gaussian channels: canonical invariants and capacity lower bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .symplectic import CovarianceState

CPTP_TOL = 1e-9
TAU_ONE_TOL = 1e-12
RANK_RTOL = 1e-10
IDENTITY_NOISE_TOL = 1e-12

LOSS = "loss"
AMPLIFICATION = "amplification"
RANDOM_DISPLACEMENT = "random_displacement"
PHASE_CONJUGATION = "phase_conjugation"
IDENTITY = "identity"
DEGENERATE = "degenerate"

_LN2 = math.log(2)

RECORD_FIELDS = ("T11", "T12", "T21", "T22", "N11", "N12", "N22", "d1", "d2")


class NonCPTPError(ValueError):
    """Raised when ``(T, N)`` does not describe a physical channel."""


@dataclass(frozen=True)
class GaussianChannel1M:
    """``x -> T x + d``, ``V -> T V T^T + N`` on a single mode."""

    T: np.ndarray
    N: np.ndarray
    d: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        T = np.array(self.T, dtype=float)
        N = np.array(self.N, dtype=float)
        d = np.array(self.d, dtype=float).reshape(-1)
        if T.shape != (2, 2) or N.shape != (2, 2) or d.shape != (2,):
            raise ValueError("a one-mode channel needs 2x2 T and N and a 2-vector d")
        if abs(N[0, 1] - N[1, 0]) > 1e-12 * max(1.0, float(np.max(np.abs(N)))):
            raise ValueError("noise matrix N must be symmetric")
        N = 0.5 * (N + N.T)
        for arr in (T, N, d):
            arr.setflags(write=False)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "d", d)

    def cptp_margin(self) -> float:
        """Smallest eigenvalue of ``N + i(1 - det T) omega``.

        For a 2x2 ``T`` one has ``T omega T^T = det(T) omega``, which reduces
        the general condition to this Hermitian 2x2 matrix.
        """
        (a, b), (_, d) = self.N
        c = 1 - self.tau
        return 0.5 * (a + d) - math.hypot(0.5 * (a - d), b, c)

    @property
    def tau(self) -> float:
        (t11, t12), (t21, t22) = self.T
        return float(t11 * t22 - t12 * t21)

    def check_cptp(self, tol: float = CPTP_TOL) -> None:
        margin = self.cptp_margin()
        scale = max(1.0, float(np.max(np.abs(self.N))))
        if margin < -tol * scale:
            raise NonCPTPError(
                f"channel is not CPTP: N + i(1-det T)omega has eigenvalue {margin:.6e}"
            )

    def to_record(self) -> dict[str, float]:
        T, N, d = self.T, self.N, self.d
        values = (T[0, 0], T[0, 1], T[1, 0], T[1, 1], N[0, 0], N[0, 1], N[1, 1], d[0], d[1])
        return {k: float(v) for k, v in zip(RECORD_FIELDS, values)}

    @classmethod
    def from_record(cls, record: dict) -> "GaussianChannel1M":
        missing = [k for k in RECORD_FIELDS[:7] if k not in record]
        if missing:
            raise ValueError(f"channel record is missing {', '.join(missing)}")
        r = {k: float(record.get(k, 0.0)) for k in RECORD_FIELDS}
        return cls(
            T=[[r["T11"], r["T12"]], [r["T21"], r["T22"]]],
            N=[[r["N11"], r["N12"]], [r["N12"], r["N22"]]],
            d=[r["d1"], r["d2"]],
        )

    @classmethod
    def identity(cls) -> "GaussianChannel1M":
        return cls(np.eye(2), np.zeros((2, 2)))


@dataclass(frozen=True)
class ChannelInvariants:
    """Canonical invariants of a one-mode channel.

    ``n_e`` is ``None`` on the ``tau == 1`` branch, where only ``sigma2``
    carries the noise.
    """

    tau: float
    r: int
    n_e: float | None
    sigma2: float
    class_label: str

    def to_record(self) -> dict:
        return {
            "tau": self.tau,
            "r": self.r,
            "n_e": self.n_e,
            "sigma2": self.sigma2,
            "class_label": self.class_label,
        }


def apply_channel(ch: GaussianChannel1M, state: CovarianceState) -> CovarianceState:
    if state.n_modes != 1:
        raise ValueError(f"one-mode channel applied to a {state.n_modes}-mode state")
    cov = ch.T @ state.cov @ ch.T.T + ch.N
    return CovarianceState(1, ch.T @ state.mean + ch.d, 0.5 * (cov + cov.T))


def _rank(matrix: np.ndarray) -> int:
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > RANK_RTOL * sv[0]))


def classify(ch: GaussianChannel1M, tol: float = CPTP_TOL) -> ChannelInvariants:
    """Canonical invariants; ``tol`` bounds both the CPTP eigenvalue and ``n_e`` clamping."""
    ch.check_cptp(tol)
    tau = ch.tau
    (n11, n12), (_, n22) = ch.N
    det_n = float(n11 * n22 - n12 * n12)
    sigma2 = math.sqrt(max(det_n, 0.0))
    rank_t = _rank(ch.T)
    r = min(rank_t, _rank(ch.N))

    if abs(tau - 1) <= TAU_ONE_TOL:
        n_e = None
        label = IDENTITY if sigma2 < IDENTITY_NOISE_TOL else RANDOM_DISPLACEMENT
    else:
        n_e = sigma2 / (2 * abs(1 - tau)) - 0.5
        if n_e < -tol:
            raise NonCPTPError(f"negative environment photon number {n_e:.6e}")
        n_e = max(n_e, 0.0)
        if rank_t < 2 or tau == 0:
            label = DEGENERATE
        elif tau < 0:
            label = PHASE_CONJUGATION
        elif tau < 1:
            label = LOSS
        else:
            label = AMPLIFICATION
    return ChannelInvariants(tau=tau, r=r, n_e=n_e, sigma2=sigma2, class_label=label)


def g_entropy(n):
    """Entropy in bits of a thermal state with mean photon number ``n``.

    Evaluated as ``log2(1 + n) + n log2(1 + 1/n)``, which avoids the
    cancellation in ``(n+1) log2(n+1) - n log2(n)`` at large ``n``.
    """
    if isinstance(n, (float, int)):
        if n < 0:
            raise ValueError("photon number must be non-negative")
        if n == 0:
            return 0.0
        tail = n * math.log1p(1 / n) if n >= 1 else n * (math.log1p(n) - math.log(n))
        return (math.log1p(n) + tail) / _LN2
    arr = np.asarray(n, dtype=float)
    if np.any(arr < 0):
        raise ValueError("photon number must be non-negative")
    safe = np.where(arr > 0, arr, 1.0)
    tail = np.where(
        arr >= 1, arr * np.log1p(1 / safe), arr * (np.log1p(arr) - np.log(safe))
    )
    out = (np.log1p(arr) + tail) / _LN2
    return float(out) if out.ndim == 0 else out


def q_lower_bound(ch: GaussianChannel1M, tol: float = CPTP_TOL) -> float:
    """Coherent-information lower bound on the quantum capacity, bits per use.

    Returns ``math.inf`` for the noiseless identity channel.
    """
    return q_lower_bound_from_invariants(classify(ch, tol))


def q_lower_bound_from_invariants(inv: ChannelInvariants) -> float:
    tau = inv.tau
    if inv.n_e is None:
        if inv.sigma2 == 0:
            return math.inf
        return max(0.0, math.log2(2 / (math.e * inv.sigma2)))
    if tau == 0:
        return 0.0
    return max(0.0, math.log2(abs(tau / (1 - tau))) - g_entropy(inv.n_e))


def compose(second: GaussianChannel1M, first: GaussianChannel1M) -> GaussianChannel1M:
    """The channel ``second`` applied after ``first``."""
    T2 = second.T
    return GaussianChannel1M(
        T=T2 @ first.T,
        N=T2 @ first.N @ T2.T + second.N,
        d=T2 @ first.d + second.d,
    )


def amplification(G: float, ancilla_thermal_n: float = 0.0) -> GaussianChannel1M:
    """Phase-insensitive amplifier of gain ``G`` fed by a thermal ancilla."""
    if not G > 1:
        raise ValueError(f"amplifier gain must exceed 1, got {G!r}")
    _check_occupation(ancilla_thermal_n)
    return GaussianChannel1M(
        T=math.sqrt(G) * np.eye(2),
        N=(G - 1) * (2 * ancilla_thermal_n + 1) * np.eye(2),
    )


def phase_conjugation(G: float, ancilla_thermal_n: float = 0.0) -> GaussianChannel1M:
    """Complement of the gain-``G`` amplifier: ``a_out = sqrt(G-1) b^dagger + sqrt(G) a``.

    The ancilla's contribution is carried as noise in ``N`` rather than as a
    displacement.
    """
    if not G > 1:
        raise ValueError(f"amplifier gain must exceed 1, got {G!r}")
    _check_occupation(ancilla_thermal_n)
    t = math.sqrt(G - 1)
    return GaussianChannel1M(
        T=np.diag([t, -t]),
        N=G * (2 * ancilla_thermal_n + 1) * np.eye(2),
    )


def loss(eta: float, thermal_n: float = 0.0) -> GaussianChannel1M:
    if not 0 < eta < 1:
        raise ValueError(f"transmissivity must lie in (0, 1), got {eta!r}")
    _check_occupation(thermal_n)
    return GaussianChannel1M(
        T=math.sqrt(eta) * np.eye(2),
        N=(1 - eta) * (2 * thermal_n + 1) * np.eye(2),
    )


def random_displacement(sigma2: float) -> GaussianChannel1M:
    if not sigma2 > 0:
        raise ValueError(f"noise variance must be positive, got {sigma2!r}")
    return GaussianChannel1M(T=np.eye(2), N=sigma2 * np.eye(2))


def _check_occupation(n: float) -> None:
    if not n >= 0:
        raise ValueError(f"thermal occupation must be non-negative, got {n!r}")
