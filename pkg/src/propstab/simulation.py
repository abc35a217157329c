"""Time-domain response of the coupled network to a single-source disturbance.

The stacked dynamics place one copy of the subsystem at every vertex, couple
them through the graph Laplacian, and inject the disturbance at one source
vertex only.  Output energies E_i(T) = int_0^T |y_i|^2 dt are the quantity the
frequency-domain certificates constrain: across any separating cutset the far
side can never exceed the loudest cut vertex.  Simulation can refute that
attenuation by exhibiting a violation; absence of violations is evidence, not
proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import cumulative_trapezoid

from .analysis import NetworkModel, local_loop
from .errors import (
    DimensionMismatch,
    NoIncomingEdges,
    SchemaError,
    SourceVertex,
    StepTooLarge,
)
from .graphs import CutsetPartition, graph_distance, laplacian, monotone_path_exists
from .lti import StateSpace, simulate_lti, simulate_lti_foh, spectral_radius

__all__ = [
    "Tone",
    "Pulse",
    "Chirp",
    "SampledSignal",
    "DisturbanceSignal",
    "sample_disturbance",
    "SimulationResult",
    "EnergyProfile",
    "MajorizationViolation",
    "DistanceProfile",
    "FilteringCheck",
    "build_stacked_system",
    "simulate",
    "energy_profile",
    "default_horizons",
    "check_majorization",
    "distance_energy_profile",
    "check_monotone_paths",
    "filtering_identity_check",
    "MAX_STEPS",
    "ENERGY_REL_TOL",
]

# hard cap on horizon / dt
MAX_STEPS = 10**7

# default relative slack for energy comparisons
ENERGY_REL_TOL = 1e-6

# dt must stay below this fraction of the stacked dynamics' inverse spectral radius
_STEP_FRACTION = 0.1


def _per_channel(value, m: int, name: str) -> NDArray[np.float64]:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(m, float(arr))
    if arr.shape != (m,):
        raise DimensionMismatch(f"{name} must be scalar or length {m}, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Tone:
    """Sustained sinusoid amplitude * cos(omega t + phase) on every channel."""

    amplitude: float | Sequence[float]
    omega: float
    phase: float | Sequence[float] = 0.0

    def sample(self, t: NDArray[np.float64], m: int) -> NDArray[np.float64]:
        amp = _per_channel(self.amplitude, m, "amplitude")
        ph = _per_channel(self.phase, m, "phase")
        return amp[None, :] * np.cos(self.omega * t[:, None] + ph[None, :])


@dataclass(frozen=True)
class Pulse:
    """Rectangular pulse: amplitude on [start, start + width), zero elsewhere."""

    amplitude: float | Sequence[float]
    start: float
    width: float

    def sample(self, t: NDArray[np.float64], m: int) -> NDArray[np.float64]:
        if self.width <= 0.0:
            raise SchemaError(f"pulse width must be positive, got {self.width}")
        amp = _per_channel(self.amplitude, m, "amplitude")
        gate = ((t >= self.start) & (t < self.start + self.width)).astype(float)
        return amp[None, :] * gate[:, None]


@dataclass(frozen=True)
class Chirp:
    """Linear frequency sweep from omega_start to omega_end over `duration`.

    Past the sweep the phase keeps advancing at omega_end, so the signal stays
    continuous.
    """

    amplitude: float | Sequence[float]
    omega_start: float
    omega_end: float
    duration: float

    def sample(self, t: NDArray[np.float64], m: int) -> NDArray[np.float64]:
        if self.duration <= 0.0:
            raise SchemaError(f"chirp duration must be positive, got {self.duration}")
        amp = _per_channel(self.amplitude, m, "amplitude")
        rate = (self.omega_end - self.omega_start) / self.duration
        t_in = np.minimum(t, self.duration)
        phase = self.omega_start * t_in + 0.5 * rate * t_in**2
        phase = phase + self.omega_end * np.maximum(t - self.duration, 0.0)
        return amp[None, :] * np.cos(phase)[:, None]


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Explicit samples on a uniform grid that must match the simulation grid."""

    values: NDArray[np.float64]
    dt: float

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise DimensionMismatch(f"samples must be 1-d or 2-d, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if not self.dt > 0.0:
            raise DimensionMismatch(f"sample spacing must be positive, got {self.dt}")

    def sample(self, t: NDArray[np.float64], m: int) -> NDArray[np.float64]:
        if self.values.shape[1] != m:
            raise DimensionMismatch(
                f"samples have {self.values.shape[1]} channels, subsystem expects {m}"
            )
        if len(t) > 1:
            dt = float(t[1] - t[0])
            if abs(dt - self.dt) > 1e-12 * self.dt:
                raise DimensionMismatch(
                    f"sample spacing {self.dt} does not match simulation step {dt}"
                )
        if self.values.shape[0] < len(t):
            raise DimensionMismatch(
                f"{self.values.shape[0]} samples cover fewer than {len(t)} steps"
            )
        return np.asarray(self.values[: len(t)])


DisturbanceSignal = Union[Tone, Pulse, Chirp, SampledSignal]


def sample_disturbance(
    signal: DisturbanceSignal, t: NDArray[np.float64], m: int
) -> NDArray[np.float64]:
    """Evaluate a disturbance on the simulation grid, one column per channel."""
    return signal.sample(np.asarray(t, dtype=float), m)


def build_stacked_system(net: NetworkModel, source: int) -> StateSpace:
    """One state-space system for the whole network with input at `source` only.

    A_stack = I (x) A - alpha L (x) BC couples the copies through the
    Laplacian; the input matrix routes the disturbance to the source block and
    the output stacks every vertex's output.
    """
    net.graph._check(source)
    ss = net.subsystem
    n_v = net.n_vertices
    L = laplacian(net.graph).matrix
    a = np.kron(np.eye(n_v), ss.A) - net.alpha * np.kron(L, ss.B @ ss.C)
    e_s = np.zeros((n_v, 1))
    e_s[source - 1, 0] = 1.0
    b = np.kron(e_s, ss.B)
    c = np.kron(np.eye(n_v), ss.C)
    return StateSpace(A=a, B=b, C=c)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Sampled per-vertex outputs of one disturbance run."""

    net: NetworkModel
    source: int
    dt: float
    horizon: float
    times: NDArray[np.float64]
    outputs: NDArray[np.float64]  # shape (N, samples, m)

    @property
    def sample_count(self) -> int:
        return int(self.times.size)

    def output_of(self, vertex: int) -> NDArray[np.float64]:
        self.net.graph._check(vertex)
        return self.outputs[vertex - 1]


def simulate(
    net: NetworkModel,
    source: int,
    signal: DisturbanceSignal,
    horizon: float,
    dt: float,
) -> SimulationResult:
    """Zero-state response on t in [0, horizon] sampled every dt.

    The horizon is rounded to a whole number of steps.  Raises StepTooLarge
    when dt exceeds a tenth of the stacked dynamics' inverse spectral radius,
    and refuses runs beyond 1e7 steps.
    """
    if not (dt > 0.0 and math.isfinite(dt)):
        raise SchemaError(f"dt must be positive and finite, got {dt}")
    if not (horizon > 0.0 and math.isfinite(horizon)):
        raise SchemaError(f"horizon must be positive and finite, got {horizon}")
    steps = int(round(horizon / dt))
    if steps < 1:
        raise SchemaError(f"horizon {horizon} is shorter than one step {dt}")
    if steps > MAX_STEPS:
        raise SchemaError(f"{steps} steps exceed the cap of {MAX_STEPS}")
    stacked = build_stacked_system(net, source)
    rho = spectral_radius(stacked.A)
    if rho > 0.0 and dt > _STEP_FRACTION / rho:
        raise StepTooLarge(
            f"dt={dt:.6g} exceeds {_STEP_FRACTION}/spectral radius = {_STEP_FRACTION / rho:.6g}"
        )
    t = np.arange(steps + 1) * dt
    u = sample_disturbance(signal, t, net.subsystem.m)
    y_flat = simulate_lti(stacked, u, dt)
    n_v, m = net.n_vertices, net.subsystem.m
    outputs = y_flat.reshape(steps + 1, n_v, m).transpose(1, 0, 2).copy()
    return SimulationResult(
        net=net, source=source, dt=dt, horizon=float(steps * dt), times=t, outputs=outputs,
    )


@dataclass(frozen=True, eq=False)
class EnergyProfile:
    """Per-vertex output energies, cumulative and at the final horizon."""

    times: NDArray[np.float64]
    prefix: NDArray[np.float64]  # shape (N, samples)
    final: NDArray[np.float64]   # shape (N,)

    def at_index(self, vertex: int, idx: int) -> float:
        return float(self.prefix[vertex - 1, idx])

    def final_of(self, vertex: int) -> float:
        return float(self.final[vertex - 1])


def energy_profile(result: SimulationResult) -> EnergyProfile:
    """Trapezoid-rule energies int_0^t |y_i|^2 for every vertex and prefix."""
    integrand = np.sum(result.outputs**2, axis=2)
    prefix = cumulative_trapezoid(integrand, dx=result.dt, axis=1, initial=0.0)
    return EnergyProfile(times=result.times, prefix=prefix, final=prefix[:, -1].copy())


def default_horizons(horizon: float, count: int = 9) -> list[float]:
    """The final horizon plus (count - 1) log-spaced prefix horizons."""
    if count < 1:
        raise DimensionMismatch("need at least one horizon")
    if count == 1:
        return [horizon]
    return list(np.geomspace(horizon / 2**8, horizon, count))


@dataclass(frozen=True)
class MajorizationViolation:
    """A far-side vertex that out-energies every cut vertex at some horizon."""

    cut: frozenset[int]
    vertex: int
    horizon: float
    energy: float
    cut_energy: float


def check_majorization(
    result: SimulationResult,
    cutsets: Iterable[CutsetPartition],
    rel_tol: float = ENERGY_REL_TOL,
    horizons: Sequence[float] | None = None,
) -> list[MajorizationViolation]:
    """Hunt for E_b(t) > (1 + rel_tol) * max_c E_c(t) across cuts and horizons.

    An empty list refutes nothing and proves nothing; any entry is a concrete
    witness that disturbance energy grew across the cut.
    """
    profile = energy_profile(result)
    if horizons is None:
        horizons = default_horizons(result.horizon)
    indices = sorted({
        min(result.sample_count - 1, max(0, int(round(h / result.dt))))
        for h in horizons
    })
    violations = []
    for part in cutsets:
        if part.source != result.source:
            raise SchemaError(
                f"cutset partition was built for source {part.source}, run used {result.source}"
            )
        cut = sorted(part.cut)
        far = sorted(part.far)
        for idx in indices:
            t = float(result.times[idx])
            cut_energy = max((profile.at_index(c, idx) for c in cut), default=0.0)
            bound = (1.0 + rel_tol) * cut_energy
            for b in far:
                e_b = profile.at_index(b, idx)
                if e_b > bound:
                    violations.append(MajorizationViolation(
                        cut=part.cut, vertex=b, horizon=t,
                        energy=e_b, cut_energy=cut_energy,
                    ))
    return violations


@dataclass(frozen=True, eq=False)
class DistanceProfile:
    """Peak final energy at each hop distance from the source."""

    radii: tuple[int, ...]
    energies: tuple[float, ...]
    non_increasing: bool
    unreachable: tuple[int, ...]
    rel_tol: float


def distance_energy_profile(
    result: SimulationResult, rel_tol: float = ENERGY_REL_TOL
) -> DistanceProfile:
    """Max energy per hop shell; flags whether it decays outward from the source."""
    profile = energy_profile(result)
    dist = graph_distance(result.net.graph, result.source)
    by_radius: dict[int, float] = {}
    for v, r in dist.items():
        e = profile.final_of(v)
        by_radius[r] = max(by_radius.get(r, 0.0), e)
    radii = tuple(sorted(by_radius))
    energies = tuple(by_radius[r] for r in radii)
    non_increasing = all(
        energies[i + 1] <= energies[i] * (1.0 + rel_tol) for i in range(len(energies) - 1)
    )
    unreachable = tuple(sorted(set(result.net.graph.vertices) - set(dist)))
    return DistanceProfile(
        radii=radii, energies=energies, non_increasing=non_increasing,
        unreachable=unreachable, rel_tol=rel_tol,
    )


def check_monotone_paths(
    result: SimulationResult, rel_tol: float = ENERGY_REL_TOL
) -> dict[int, bool]:
    """Per reachable vertex: does some source path have non-increasing energies?"""
    profile = energy_profile(result)
    energies = {v: profile.final_of(v) for v in result.net.graph.vertices}
    dist = graph_distance(result.net.graph, result.source)
    return {
        v: monotone_path_exists(result.net.graph, result.source, v, energies, rel_tol)
        for v in sorted(dist)
        if v != result.source
    }


@dataclass(frozen=True)
class FilteringCheck:
    """Reconstruction residual of one vertex's output from its neighborhood average."""

    vertex: int
    horizon: float
    max_error: float
    max_output: float

    @property
    def relative_error(self) -> float:
        if self.max_output == 0.0:
            return 0.0 if self.max_error == 0.0 else math.inf
        return self.max_error / self.max_output


def filtering_identity_check(
    result: SimulationResult, vertex: int, horizon: float | None = None
) -> FilteringCheck:
    """Rebuild y_i by filtering the weighted neighbor average through the local loop.

    Away from the source, vertex i's output is exactly its closed loop applied
    to z_i = sum_j (w_ij / w_i) y_j, and truncating z_i at the horizon cannot
    change the reconstruction before it.  The sampled z_i is filtered with a
    triangle hold (piecewise-linear interpolation), keeping the discretization
    residual at O(dt^2).
    """
    if vertex == result.source:
        raise SourceVertex(f"vertex {vertex} is the disturbance source")
    weights = result.net.graph.incoming_weights(vertex)
    if not weights:
        raise NoIncomingEdges(f"vertex {vertex} has no incoming edges")
    if horizon is None:
        horizon = result.horizon
    idx = min(result.sample_count - 1, max(0, int(round(horizon / result.dt))))
    total = sum(weights.values())
    z = np.zeros((idx + 1, result.net.subsystem.m))
    for j, w in weights.items():
        z += (w / total) * result.output_of(j)[: idx + 1]
    loop = local_loop(result.net, vertex)
    y_rec = simulate_lti_foh(loop.closed_loop, z, result.dt)
    y_true = result.output_of(vertex)[: idx + 1]
    return FilteringCheck(
        vertex=vertex,
        horizon=float(result.times[idx]),
        max_error=float(np.max(np.abs(y_rec - y_true))),
        max_output=float(np.max(np.abs(y_true))),
    )
