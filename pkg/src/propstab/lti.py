"""Strictly proper LTI state-space models: frequency evaluation and sampled-time response."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from .errors import DimensionMismatch, NotSISO, SingularAtS

__all__ = [
    "StateSpace",
    "FrequencyGrid",
    "Pole",
    "POLE_TAG_TOL",
    "eval_transfer",
    "eval_transfer_siso",
    "frequency_response",
    "is_hurwitz",
    "poles",
    "spectral_radius",
    "zoh_discretize",
    "foh_discretize",
    "simulate_lti",
    "simulate_lti_foh",
]

# |Re(pole)| at or below this counts as marginal rather than stable/unstable
POLE_TAG_TOL = 1e-9


def _as_matrix(value: object, name: str) -> NDArray[np.float64]:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Triple (A, B, C) for dx/dt = A x + B u, y = C x.

    The model is strictly proper: there is no feedthrough term, so the
    transfer matrix C (sI - A)^-1 B rolls off at high frequency.  Inputs and
    outputs may differ in count (a stacked network reads every vertex while
    driving one), though network subsystems themselves are square.
    """

    A: NDArray[np.float64]
    B: NDArray[np.float64]
    C: NDArray[np.float64]

    def __post_init__(self) -> None:
        A = _as_matrix(self.A, "A")
        B = _as_matrix(self.B, "B")
        C = _as_matrix(self.C, "C")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionMismatch(f"A must be square, got shape {A.shape}")
        if n == 0:
            raise DimensionMismatch("state dimension must be at least 1")
        if B.shape[0] != n:
            raise DimensionMismatch(f"B must have {n} rows, got shape {B.shape}")
        if B.shape[1] == 0:
            raise DimensionMismatch("input dimension must be at least 1")
        if C.shape[1] != n or C.shape[0] == 0:
            raise DimensionMismatch(
                f"C must have {n} columns and at least one row, got shape {C.shape}"
            )
        for name, arr in (("A", A), ("B", B), ("C", C)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        """State dimension."""
        return self.A.shape[0]

    @property
    def m(self) -> int:
        """Input count."""
        return self.B.shape[1]

    @property
    def p(self) -> int:
        """Output count."""
        return self.C.shape[0]

    @property
    def is_siso(self) -> bool:
        return self.m == 1 and self.p == 1

    def __repr__(self) -> str:
        return f"StateSpace(n={self.n}, m={self.m}, p={self.p})"


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing grid of nonnegative angular frequencies."""

    points: NDArray[np.float64]
    spacing: Literal["log", "linear"]

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise DimensionMismatch("frequency grid needs at least two points")
        if pts[0] < 0.0 or np.any(np.diff(pts) <= 0.0):
            raise DimensionMismatch("frequency grid must be nonnegative and strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def omega_min(self) -> float:
        return float(self.points[0])

    @property
    def omega_max(self) -> float:
        return float(self.points[-1])

    def __len__(self) -> int:
        return int(self.points.size)

    @classmethod
    def log_spaced(cls, omega_min: float, omega_max: float, count: int) -> FrequencyGrid:
        if omega_min <= 0.0:
            raise DimensionMismatch("log-spaced grid requires omega_min > 0")
        pts = np.geomspace(omega_min, omega_max, count)
        return cls(points=pts, spacing="log")

    @classmethod
    def linear(cls, omega_min: float, omega_max: float, count: int) -> FrequencyGrid:
        pts = np.linspace(omega_min, omega_max, count)
        return cls(points=pts, spacing="linear")


# relative smallest-singular-value cutoff for declaring (sI - A) singular
_RESOLVENT_TOL = 1e-12


def eval_transfer(ss: StateSpace, s: complex) -> NDArray[np.complex128]:
    """Evaluate the p x m transfer matrix C (sI - A)^-1 B at one complex point.

    The resolvent is applied through an LU solve.  Raises SingularAtS when the
    smallest singular value of (sI - A) drops below 1e-12 of its largest.
    """
    M = s * np.eye(ss.n) - ss.A
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= _RESOLVENT_TOL * sv[0]:
        raise SingularAtS(f"point {s} is numerically a pole of the system")
    return ss.C @ np.linalg.solve(M, ss.B.astype(np.complex128))


def eval_transfer_siso(ss: StateSpace, s: complex) -> complex:
    """Scalar transfer value for single-channel systems."""
    if not ss.is_siso:
        raise NotSISO(f"system has {ss.m} channels")
    return complex(eval_transfer(ss, s)[0, 0])


def frequency_response(ss: StateSpace, omegas: NDArray[np.float64]) -> NDArray[np.complex128]:
    """Transfer matrices along the imaginary axis, shape (len(omegas), p, m)."""
    out = np.empty((len(omegas), ss.p, ss.m), dtype=np.complex128)
    for idx, w in enumerate(omegas):
        out[idx] = eval_transfer(ss, 1j * float(w))
    return out


def is_hurwitz(matrix: NDArray, margin: float = 0.0) -> bool:
    """True when every eigenvalue has real part strictly below -margin."""
    M = np.asarray(matrix)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    return bool(np.all(np.linalg.eigvals(M).real < -margin))


@dataclass(frozen=True)
class Pole:
    value: complex
    tag: Literal["strictly-stable", "marginal", "unstable"]


def poles(ss: StateSpace) -> list[Pole]:
    """Eigenvalues of A tagged by sign of the real part (tolerance 1e-9)."""
    out = []
    for ev in np.linalg.eigvals(ss.A):
        re = ev.real
        if re < -POLE_TAG_TOL:
            tag = "strictly-stable"
        elif re > POLE_TAG_TOL:
            tag = "unstable"
        else:
            tag = "marginal"
        out.append(Pole(value=complex(ev), tag=tag))
    return out


def spectral_radius(matrix: NDArray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(matrix)))))


def zoh_discretize(ss: StateSpace, dt: float) -> tuple[NDArray, NDArray]:
    """Exact zero-order-hold pair (Ad, Bd).

    Both blocks come from one matrix exponential of the augmented matrix
    [[A, B], [0, 0]] * dt, whose top row is [e^{A dt}, int_0^dt e^{A s} ds B].
    """
    if dt <= 0.0:
        raise DimensionMismatch("dt must be positive")
    n, m = ss.n, ss.m
    aug = np.zeros((n + m, n + m))
    aug[:n, :n] = ss.A
    aug[:n, n:] = ss.B
    phi = expm(aug * dt)
    return phi[:n, :n], phi[:n, n:]


def foh_discretize(ss: StateSpace, dt: float) -> tuple[NDArray, NDArray, NDArray]:
    """Triangle-hold pair (Ad, B_now, B_next), exact for piecewise-linear input.

    With S0 = int_0^dt e^{A s} ds B and S1 = int_0^dt e^{A(dt-s)} B s ds, an input
    that ramps linearly from u_k to u_{k+1} over the step propagates as
    x+ = Ad x + (S0 - S1/dt) u_k + (S1/dt) u_{k+1}.  S0 and S1 are read off the
    exponential of the augmented matrix [[A, B, 0], [0, 0, I], [0, 0, 0]] * dt.
    """
    if dt <= 0.0:
        raise DimensionMismatch("dt must be positive")
    n, m = ss.n, ss.m
    aug = np.zeros((n + 2 * m, n + 2 * m))
    aug[:n, :n] = ss.A
    aug[:n, n:n + m] = ss.B
    aug[n:n + m, n + m:] = np.eye(m)
    phi = expm(aug * dt)
    ad = phi[:n, :n]
    s0 = phi[:n, n:n + m]
    s1 = phi[:n, n + m:]
    return ad, s0 - s1 / dt, s1 / dt


def _input_matrix(u: NDArray, m: int) -> NDArray[np.float64]:
    arr = np.asarray(u, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != m:
        raise DimensionMismatch(f"input samples must have {m} columns, got shape {arr.shape}")
    return arr


def simulate_lti(ss: StateSpace, u: NDArray, dt: float) -> NDArray[np.float64]:
    """Zero-state output samples y_k = y(k dt) under zero-order hold of u.

    u[k] is held constant on [k dt, (k+1) dt).  The returned array has one row
    per input sample; y[0] = 0 because the initial state is zero.
    """
    u = _input_matrix(u, ss.m)
    ad, bd = zoh_discretize(ss, dt)
    c = ss.C
    x = np.zeros(ss.n)
    y = np.empty((u.shape[0], ss.p))
    for k in range(u.shape[0]):
        y[k] = c @ x
        x = ad @ x + bd @ u[k]
    return y


def simulate_lti_foh(ss: StateSpace, u: NDArray, dt: float) -> NDArray[np.float64]:
    """Zero-state output samples treating u as piecewise linear between samples."""
    u = _input_matrix(u, ss.m)
    ad, b_now, b_next = foh_discretize(ss, dt)
    c = ss.C
    x = np.zeros(ss.n)
    count = u.shape[0]
    y = np.empty((count, ss.p))
    for k in range(count - 1):
        y[k] = c @ x
        x = ad @ x + b_now @ u[k] + b_next @ u[k + 1]
    y[count - 1] = c @ x
    return y
