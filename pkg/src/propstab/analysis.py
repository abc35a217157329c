"""Frequency-domain certification of disturbance attenuation in coupled networks.

Each vertex of the network runs a copy of one subsystem (A, B, C), coupled by
relative output feedback with strength alpha.  Absorbing its total incoming
weight k = alpha * sum_j w_ij, vertex i sees its neighbors through the local
closed loop H_i(s) = k C (sI - A + k BC)^-1 B.  A network whose coupled modes
are all stable and whose every loop satisfies sup_w sigma_max(H_i(jw)) <= 1
cannot amplify disturbance energy across any source-separating cutset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from .errors import (
    NoIncomingEdges,
    NotPlanarTemplate,
    NotSISO,
    NotStronglyConnected,
    SchemaError,
    SingularAtS,
    UnstableLoop,
)
from .graphs import (
    LaplacianSpectrum,
    WeightedDigraph,
    laplacian,
    is_strongly_connected,
    reachable_from,
)
from .lti import (
    FrequencyGrid,
    StateSpace,
    eval_transfer,
    eval_transfer_siso,
    is_hurwitz,
    spectral_radius,
)

__all__ = [
    "NetworkModel",
    "LocalLoop",
    "GainResult",
    "VertexGainCheck",
    "ManifoldReport",
    "ModalVerdict",
    "RealPartCondition",
    "PlanarThreshold",
    "StabilityReport",
    "ImperviousReport",
    "Counterexample",
    "GAIN_TOL",
    "BISECTION_RTOL",
    "REFINE_RTOL",
    "REALPART_TOL",
    "SCREEN_NEVER",
    "SCREEN_SMALL_ALPHA",
    "SCREEN_INCONCLUSIVE",
    "local_loop",
    "sup_gain",
    "manifold_stable",
    "manifold_stable_dense",
    "check_local_requirement",
    "siso_real_part_condition",
    "real_part_threshold",
    "subsystem_sweep_omegas",
    "is_positive_real",
    "subsystem_pole_screen",
    "planar_subsystem",
    "planar_damping",
    "planar_damping_threshold",
    "certify",
    "certify_impervious",
]

# slack on the sub-unity gain certificate: pass means sup_gain <= 1 + GAIN_TOL
GAIN_TOL = 1e-7

# relative gamma-interval width at which the norm bisection stops
BISECTION_RTOL = 1e-8

# relative bracket width for golden-section refinement of grid extrema
REFINE_RTOL = 1e-9

# slack on pointwise real-part tests (positive realness and the like)
REALPART_TOL = 1e-9

# |Re| of a Hamiltonian eigenvalue below this scale counts as on-axis
_HAM_AXIS_RTOL = 1e-9

SCREEN_NEVER = "never-propagation-stable"
SCREEN_SMALL_ALPHA = "stable-for-small-coupling"
SCREEN_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class NetworkModel:
    """A digraph whose every vertex runs one copy of `subsystem`, coupled at strength alpha."""

    graph: WeightedDigraph
    alpha: float
    subsystem: StateSpace
    source: int | None = None

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise SchemaError(f"alpha must be positive and finite, got {self.alpha}")
        if self.subsystem.p != self.subsystem.m:
            raise SchemaError(
                "network subsystems must expose as many outputs as inputs, got "
                f"{self.subsystem.p} outputs for {self.subsystem.m} inputs"
            )
        if self.source is not None:
            self.graph._check(self.source)

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    def feedback_gain(self, vertex: int) -> float:
        """k = alpha * total incoming weight at `vertex`."""
        return self.alpha * self.graph.weighted_in_degree(vertex)

    def max_feedback_gain(self) -> float:
        return self.alpha * self.graph.max_weighted_in_degree()


@dataclass(frozen=True, eq=False)
class LocalLoop:
    """Closed feedback loop a vertex presents to its neighborhood average.

    The realization is (A - k BC, k B, C); for single-channel subsystems its
    transfer function equals k T / (1 + k T) with T = C (sI - A)^-1 B.
    """

    vertex: int
    gain: float
    subsystem: StateSpace
    closed_loop: StateSpace

    def transfer(self, s: complex) -> NDArray[np.complex128]:
        return eval_transfer(self.closed_loop, s)

    def transfer_from_open_loop(self, s: complex) -> complex:
        """Same value through the scalar formula k T / (1 + k T); SISO only."""
        t = eval_transfer_siso(self.subsystem, s)
        return self.gain * t / (1.0 + self.gain * t)


def local_loop(net: NetworkModel, vertex: int) -> LocalLoop:
    """Build the local closed loop at `vertex`; NoIncomingEdges when isolated."""
    k = net.feedback_gain(vertex)
    if k == 0.0:
        raise NoIncomingEdges(f"vertex {vertex} has no incoming edges")
    ss = net.subsystem
    closed = StateSpace(A=ss.A - k * (ss.B @ ss.C), B=k * ss.B, C=ss.C)
    return LocalLoop(vertex=vertex, gain=k, subsystem=ss, closed_loop=closed)


@dataclass(frozen=True)
class GainResult:
    """Peak singular value of a loop over the imaginary axis and where it occurs."""

    value: float
    omega: float
    method: Literal["bisect", "grid"]


def _axis_sigma(ss: StateSpace, omega: float) -> float:
    """Largest singular value of the transfer matrix at jw."""
    try:
        h = eval_transfer(ss, 1j * omega)
    except SingularAtS:
        return math.inf
    return float(np.linalg.svd(h, compute_uv=False)[0])


def _golden_max(f, lo: float, hi: float, rel_tol: float = REFINE_RTOL) -> tuple[float, float]:
    """Golden-section maximization of a unimodal bracket; returns (argmax, max)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    width_floor = rel_tol * max(abs(hi), 1e-300)
    while (b - a) > width_floor:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    mid = 0.5 * (a + b)
    return mid, f(mid)


def _probe_omegas(ss: StateSpace, points: int) -> NDArray[np.float64]:
    rho = spectral_radius(ss.A)
    scale = rho if rho > 0.0 else 1.0
    grid = FrequencyGrid.log_spaced(1e-4 * scale, 1e4 * scale, points)
    return np.concatenate(([0.0], grid.points))


def _sup_gain_grid(loop: LocalLoop, points: int) -> GainResult:
    ss = loop.closed_loop
    omegas = _probe_omegas(ss, points)
    vals = np.array([_axis_sigma(ss, w) for w in omegas])
    # refine every prominent local maximum, not just the global grid argmax,
    # so twin peaks separated by less than the grid error cannot swap ranks
    peaks = [
        i for i in range(len(vals))
        if (i == 0 or vals[i] >= vals[i - 1])
        and (i + 1 == len(vals) or vals[i] >= vals[i + 1])
    ]
    peaks.sort(key=lambda i: -vals[i])
    best_w = float(omegas[int(np.argmax(vals))])
    best_v = float(np.max(vals))
    for i in peaks[:4]:
        lo = omegas[i - 1] if i > 0 else 0.0
        hi = omegas[i + 1] if i + 1 < len(omegas) else omegas[-1] * 10.0
        w_star, v_star = _golden_max(lambda w: _axis_sigma(ss, w), lo, hi)
        if v_star > best_v:
            best_v, best_w = v_star, w_star
    return GainResult(value=best_v, omega=best_w, method="grid")


def _hamiltonian_crossings(
    A: NDArray, B: NDArray, C: NDArray, gamma: float
) -> list[float]:
    """Nonnegative frequencies where some singular value of the transfer equals gamma.

    jw is an eigenvalue of the Hamiltonian [[A, B B'/g], [-C'C/g, -A']] exactly
    when gamma is a singular value of C (jwI - A)^-1 B, so an empty list means
    the peak gain lies strictly below gamma.
    """
    H = np.block([
        [A, (B @ B.T) / gamma],
        [-(C.T @ C) / gamma, -A.T],
    ])
    ev = np.linalg.eigvals(H)
    scale = max(1.0, float(np.max(np.abs(ev))))
    on_axis = ev[np.abs(ev.real) <= _HAM_AXIS_RTOL * scale]
    return sorted({abs(float(e.imag)) for e in on_axis})


def _sup_gain_bisect(loop: LocalLoop) -> GainResult:
    ss = loop.closed_loop
    A, B, C = ss.A, ss.B, ss.C
    omegas = _probe_omegas(ss, 128)
    vals = np.array([_axis_sigma(ss, w) for w in omegas])
    best = int(np.argmax(vals))
    lo = float(vals[best])
    w_fallback = float(omegas[best])
    if lo == 0.0:
        return GainResult(value=0.0, omega=0.0, method="bisect")

    crossings: list[float] = []
    hi = 2.0 * lo
    while _hamiltonian_crossings(A, B, C, hi):
        lo = hi
        hi *= 2.0
        if hi > 1e12 * vals[best]:
            raise RuntimeError(
                f"gain bisection failed to bracket the peak for vertex {loop.vertex}"
            )
    while (hi - lo) > BISECTION_RTOL * lo:
        mid = 0.5 * (lo + hi)
        ws = _hamiltonian_crossings(A, B, C, mid)
        if ws:
            lo = mid
            crossings = ws
        else:
            hi = mid
    value = 0.5 * (lo + hi)

    if crossings:
        cands = list(crossings)
        cands += [0.5 * (a + b) for a, b in zip(crossings, crossings[1:])]
        sig = [(_axis_sigma(ss, w), w) for w in cands]
        best_sig, best_w = max(sig)
        omega = best_w if best_sig >= vals[best] else w_fallback
    else:
        omega = w_fallback
    return GainResult(value=value, omega=float(omega), method="bisect")


def sup_gain(
    loop: LocalLoop,
    method: Literal["bisect", "grid"] = "bisect",
    points: int = 2000,
) -> GainResult:
    """Peak axis gain sup_w sigma_max(H(jw)) of a stable local loop.

    `bisect` runs a Hamiltonian-eigenvalue bisection on the gain level
    (relative tolerance 1e-8); `grid` scans a 2000-point log grid spanning
    [1e-4, 1e4] times the closed-loop spectral radius, then sharpens the best
    bracket by golden section.  Raises UnstableLoop when the closed loop is
    not asymptotically stable, since the axis supremum is no norm there.
    """
    if not is_hurwitz(loop.closed_loop.A):
        raise UnstableLoop(
            f"closed loop at vertex {loop.vertex} (k={loop.gain:.6g}) is not asymptotically stable"
        )
    if method == "grid":
        return _sup_gain_grid(loop, points)
    if method == "bisect":
        return _sup_gain_bisect(loop)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class ModalVerdict:
    eigenvalue: complex
    hurwitz: bool


@dataclass(frozen=True, eq=False)
class ManifoldReport:
    """Stability of the synchronized motion: all coupled modes strictly decay."""

    stable: bool
    method: Literal["modal", "dense"]
    modes: tuple[ModalVerdict, ...]
    spectrum: LaplacianSpectrum


# absolute eigenvalue-matching tolerance when deflating the stacked spectrum
_DEFLATE_TOL = 1e-6


def manifold_stable(net: NetworkModel) -> ManifoldReport:
    """Check the coupled modes vertex-count-free via the Laplacian spectrum.

    For a diagonalizable Laplacian the stacked dynamics split into the blocks
    A - alpha * lambda * BC, one per eigenvalue; the single structural zero is
    the motion along the synchronized manifold and is skipped.  A defective
    spectrum falls back to the dense stacked check.
    """
    spectrum = laplacian(net.graph)
    if not spectrum.diagonalizable:
        return manifold_stable_dense(net)
    ss = net.subsystem
    bc = ss.B @ ss.C
    modes = []
    for lam in spectrum.eigenvalues[1:]:
        block = ss.A.astype(np.complex128) - net.alpha * lam * bc
        modes.append(ModalVerdict(eigenvalue=complex(lam), hurwitz=is_hurwitz(block)))
    return ManifoldReport(
        stable=all(m.hurwitz for m in modes),
        method="modal",
        modes=tuple(modes),
        spectrum=spectrum,
    )


def manifold_stable_dense(net: NetworkModel) -> ManifoldReport:
    """Dense oracle: eigenvalues of the full stacked matrix, manifold modes deflated.

    Each eigenvalue of A is removed once by nearest match (tolerance 1e-6);
    the verdict requires every remaining eigenvalue to lie strictly in the
    open left half-plane.
    """
    spectrum = laplacian(net.graph)
    ss = net.subsystem
    n = net.n_vertices
    stacked = np.kron(np.eye(n), ss.A) - net.alpha * np.kron(spectrum.matrix, ss.B @ ss.C)
    ev = list(np.linalg.eigvals(stacked))
    for mu in np.linalg.eigvals(ss.A):
        dist = [abs(e - mu) for e in ev]
        idx = int(np.argmin(dist))
        if dist[idx] <= _DEFLATE_TOL:
            ev.pop(idx)
    modes = tuple(ModalVerdict(eigenvalue=complex(e), hurwitz=bool(e.real < 0.0)) for e in ev)
    return ManifoldReport(
        stable=all(m.hurwitz for m in modes),
        method="dense",
        modes=modes,
        spectrum=spectrum,
    )


@dataclass(frozen=True)
class VertexGainCheck:
    """Local gain requirement at one vertex."""

    vertex: int
    gain_k: float
    sup_gain: float | None
    omega: float | None
    passed: bool
    exempt: bool
    boundary: bool
    cause: str | None = None


def check_local_requirement(
    net: NetworkModel,
    method: Literal["bisect", "grid"] = "bisect",
) -> tuple[VertexGainCheck, ...]:
    """Evaluate sup_gain <= 1 + 1e-7 at every vertex.

    Vertices without incoming edges close no loop and are exempt.  A vertex
    whose closed loop is unstable fails with cause "unstable-loop" and an
    infinite recorded gain.
    """
    checks = []
    for v in net.graph.vertices:
        k = net.feedback_gain(v)
        if k == 0.0:
            checks.append(VertexGainCheck(
                vertex=v, gain_k=0.0, sup_gain=None, omega=None,
                passed=True, exempt=True, boundary=False,
            ))
            continue
        loop = local_loop(net, v)
        try:
            res = sup_gain(loop, method=method)
        except UnstableLoop:
            checks.append(VertexGainCheck(
                vertex=v, gain_k=k, sup_gain=math.inf, omega=None,
                passed=False, exempt=False, boundary=False, cause="unstable-loop",
            ))
            continue
        passed = res.value <= 1.0 + GAIN_TOL
        boundary = abs(res.value - 1.0) <= GAIN_TOL
        checks.append(VertexGainCheck(
            vertex=v, gain_k=k, sup_gain=res.value, omega=res.omega,
            passed=passed, exempt=False, boundary=boundary,
            cause=None if passed else "gain-above-one",
        ))
    return tuple(checks)


def real_part_threshold(net: NetworkModel) -> float:
    """The level -1/(2 k_max) that Re T(jw) must stay above, k_max the largest loop gain."""
    k_max = net.max_feedback_gain()
    if k_max == 0.0:
        return -math.inf
    return -1.0 / (2.0 * k_max)


def subsystem_sweep_omegas(ss: StateSpace, points: int = 4000) -> NDArray[np.float64]:
    """Default axis probe grid for a subsystem: log-spaced around its pole scale.

    Spans [1e-6, 1e4] times the spectral radius of A (or 1 when A is
    nilpotent-scale zero) and includes w = 0 only when A is nonsingular.
    """
    rho = spectral_radius(ss.A)
    scale = rho if rho > 0.0 else 1.0
    pts = FrequencyGrid.log_spaced(1e-6 * scale, 1e4 * scale, points).points
    # the origin is a valid probe only when it is not a pole
    sv = np.linalg.svd(ss.A, compute_uv=False)
    if sv[-1] > 1e-12 * max(sv[0], 1.0):
        pts = np.concatenate(([0.0], pts))
    return pts


def _min_axis_real_part(ss: StateSpace, points: int = 4000) -> tuple[float, float]:
    """(min Re T(jw), argmin w) over a refined log sweep; SISO only."""

    def re_at(w: float) -> float:
        try:
            return eval_transfer_siso(ss, 1j * w).real
        except SingularAtS:
            return math.inf

    omegas = subsystem_sweep_omegas(ss, points)
    vals = np.array([re_at(w) for w in omegas])
    best = int(np.argmin(vals))
    lo = omegas[best - 1] if best > 0 else 0.0
    hi = omegas[best + 1] if best + 1 < len(omegas) else omegas[-1] * 10.0
    w_star, neg_val = _golden_max(lambda w: -re_at(w), lo, hi)
    if -neg_val <= vals[best]:
        return float(-neg_val), float(w_star)
    return float(vals[best]), float(omegas[best])


@dataclass(frozen=True)
class RealPartCondition:
    """Outcome of the scalar Nyquist-locus test Re T(jw) >= -1/(2 k_max)."""

    passes: bool
    min_real: float
    omega: float
    threshold: float


def siso_real_part_condition(net: NetworkModel, points: int = 4000) -> RealPartCondition:
    """Graph-free form of the local requirement for single-channel subsystems.

    Checks min_w Re T(jw) against -1/(2 alpha d_max) where d_max is the
    largest weighted in-degree; equivalent to every vertex passing the
    sup-gain test.
    """
    if not net.subsystem.is_siso:
        raise NotSISO("real-part condition applies to single-channel subsystems")
    min_real, omega = _min_axis_real_part(net.subsystem, points)
    threshold = real_part_threshold(net)
    return RealPartCondition(
        passes=bool(min_real >= threshold - REALPART_TOL),
        min_real=min_real,
        omega=omega,
        threshold=threshold,
    )


def is_positive_real(ss: StateSpace, points: int = 4000) -> bool:
    """Whether a stable single-channel transfer keeps Re T(jw) >= 0 on the axis.

    Such subsystems satisfy the local gain requirement for every coupling
    strength and every graph.  Tolerance 1e-9 on the real part; systems with
    a pole in the open right half-plane are rejected outright.
    """
    if not ss.is_siso:
        raise NotSISO("positive realness is checked for single-channel subsystems")
    if any(ev.real > REALPART_TOL for ev in np.linalg.eigvals(ss.A)):
        return False
    min_real, _ = _min_axis_real_part(ss, points)
    return bool(min_real >= -REALPART_TOL)


def subsystem_pole_screen(ss: StateSpace) -> str:
    """Coarse verdict from pole locations alone.

    A pole in the open right half-plane rules out propagation stability for
    every coupling strength and graph; a strictly stable subsystem admits some
    sufficiently small coupling strength that certifies any fixed graph.
    Marginal poles give no verdict.
    """
    ev = np.linalg.eigvals(ss.A)
    if any(e.real > REALPART_TOL for e in ev):
        return SCREEN_NEVER
    if all(e.real < -REALPART_TOL for e in ev):
        return SCREEN_SMALL_ALPHA
    return SCREEN_INCONCLUSIVE


def planar_subsystem(d: float) -> StateSpace:
    """Double integrator with damping d on the rate state; T(s) = 1/(s^2 + d s)."""
    if not (d > 0.0 and math.isfinite(d)):
        raise NotPlanarTemplate(f"damping must be positive and finite, got {d}")
    return StateSpace(A=[[0.0, 1.0], [0.0, -d]], B=[[0.0], [1.0]], C=[[1.0, 0.0]])


def planar_damping(ss: StateSpace) -> float | None:
    """Damping coefficient when `ss` matches the planar template exactly, else None."""
    if ss.n != 2 or ss.m != 1:
        return None
    A, B, C = ss.A, ss.B, ss.C
    d = -A[1, 1]
    if d <= 0.0:
        return None
    template = planar_subsystem(d)
    if (np.array_equal(A, template.A)
            and np.array_equal(B, template.B)
            and np.array_equal(C, template.C)):
        return d
    return None


@dataclass(frozen=True)
class PlanarThreshold:
    """Critical damping level for the planar template on a given network."""

    d: float
    d_star: float
    passes: bool


def planar_damping_threshold(net: NetworkModel) -> PlanarThreshold:
    """Closed-form certification boundary d* = sqrt(2 alpha d_max) for the planar template.

    The template's locus satisfies Re T(jw) = -1/(w^2 + d^2), whose infimum
    -1/d^2 meets the threshold -1/(2 alpha d_max) exactly at d*.  Damping at
    or above d* passes the local requirement at every vertex; below, the
    highest-in-degree vertices fail.
    """
    d = planar_damping(net.subsystem)
    if d is None:
        raise NotPlanarTemplate("subsystem is not the planar damping template")
    d_star = math.sqrt(2.0 * net.max_feedback_gain())
    return PlanarThreshold(d=d, d_star=d_star, passes=bool(d >= d_star))


@dataclass(frozen=True)
class Counterexample:
    """Single-tone witness: a sinusoid at `omega` injected upstream grows past `vertex`."""

    vertex: int
    omega: float
    source: int


CERTIFIED_STABLE = "CERTIFIED_STABLE"
CERTIFIED_UNSTABLE = "CERTIFIED_UNSTABLE"
UNDECIDED = "UNDECIDED"


def _tolerances() -> dict[str, float]:
    return {
        "gain": GAIN_TOL,
        "bisection": BISECTION_RTOL,
        "refine": REFINE_RTOL,
        "real_part": REALPART_TOL,
    }


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Certification outcome with the evidence behind it."""

    status: str
    manifold: ManifoldReport
    checks: tuple[VertexGainCheck, ...]
    counterexample: Counterexample | None
    cause: str | None
    tolerances: dict[str, float] = field(default_factory=_tolerances)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "cause": self.cause,
            "manifold": {
                "stable": self.manifold.stable,
                "method": self.manifold.method,
                "modes": [
                    {
                        "eigenvalue": [m.eigenvalue.real, m.eigenvalue.imag],
                        "hurwitz": m.hurwitz,
                    }
                    for m in self.manifold.modes
                ],
            },
            "vertices": [_check_to_dict(c) for c in self.checks],
            "counterexample": (
                None if self.counterexample is None else {
                    "vertex": self.counterexample.vertex,
                    "omega": self.counterexample.omega,
                    "source": self.counterexample.source,
                }
            ),
            "tolerances": dict(self.tolerances),
        }


def _check_to_dict(c: VertexGainCheck) -> dict:
    gain = c.sup_gain
    if gain is not None and not math.isfinite(gain):
        gain = None
    return {
        "vertex": c.vertex,
        "gain_k": c.gain_k,
        "sup_gain": gain,
        "omega": c.omega,
        "passed": c.passed,
        "exempt": c.exempt,
        "boundary": c.boundary,
        "cause": c.cause,
    }


def _tone_counterexample(
    net: NetworkModel, failing: list[VertexGainCheck]
) -> Counterexample | None:
    """Witness from a failing vertex that is SISO with a single incoming edge.

    Such a vertex filters exactly one upstream output, so a sustained tone at
    the gain-peak frequency is amplified across the cut {its neighbor}; any
    vertex with a path to the failing one serves as the injection source.
    """
    if not net.subsystem.is_siso:
        return None
    for c in failing:
        if c.omega is None or c.sup_gain is None or not math.isfinite(c.sup_gain):
            continue
        if c.sup_gain <= 1.0 + GAIN_TOL:
            continue
        if len(net.graph.in_neighbors(c.vertex)) != 1:
            continue
        ancestors = [
            v for v in net.graph.vertices
            if v != c.vertex and c.vertex in reachable_from(net.graph, v)
        ]
        if not ancestors:
            continue
        if net.source is not None and net.source in ancestors:
            src = net.source
        else:
            src = ancestors[0]
        return Counterexample(vertex=c.vertex, omega=c.omega, source=src)
    return None


def certify(
    net: NetworkModel,
    method: Literal["bisect", "grid"] = "bisect",
) -> StabilityReport:
    """Certify that no separating cutset can see its far-side output energy grow.

    CERTIFIED_STABLE requires stable coupled modes plus the sub-unity gain
    test at every non-exempt vertex.  CERTIFIED_UNSTABLE is issued when the
    coupled modes are unstable, or when a failing vertex admits a single-tone
    witness (single channel, single incoming edge, reachable from a source).
    Everything else is UNDECIDED: the sufficient condition failed without a
    constructive refutation.
    """
    manifold = manifold_stable(net)
    checks = check_local_requirement(net, method=method)
    all_pass = all(c.passed for c in checks)
    if manifold.stable and all_pass:
        return StabilityReport(
            status=CERTIFIED_STABLE, manifold=manifold, checks=checks,
            counterexample=None, cause=None,
        )
    if not manifold.stable:
        return StabilityReport(
            status=CERTIFIED_UNSTABLE, manifold=manifold, checks=checks,
            counterexample=None, cause="manifold-unstable",
        )
    failing = [c for c in checks if not c.passed]
    witness = _tone_counterexample(net, failing)
    if witness is not None:
        return StabilityReport(
            status=CERTIFIED_UNSTABLE, manifold=manifold, checks=checks,
            counterexample=witness, cause="tone-amplified-across-cut",
        )
    return StabilityReport(
        status=UNDECIDED, manifold=manifold, checks=checks,
        counterexample=None, cause="local-gain-exceeds-one",
    )


@dataclass(frozen=True, eq=False)
class ImperviousReport:
    """Whether a strongly connected region rejects disturbances injected outside it."""

    passes: bool
    region: frozenset[int]
    manifold: ManifoldReport
    checks: tuple[VertexGainCheck, ...]
    tolerances: dict[str, float] = field(default_factory=_tolerances)

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "region": sorted(self.region),
            "manifold": {"stable": self.manifold.stable, "method": self.manifold.method},
            "vertices": [_check_to_dict(c) for c in self.checks],
            "tolerances": dict(self.tolerances),
        }


def certify_impervious(
    net: NetworkModel,
    region: frozenset[int] | set[int] | list[int],
    method: Literal["bisect", "grid"] = "bisect",
) -> ImperviousReport:
    """Certify a region whose internal outputs stay at zero under outside disturbances.

    Requires the induced subgraph on `region` to be strongly connected, the
    coupled modes of the full network to be stable, and every region vertex to
    pass the sub-unity gain test (loop gains taken from the full graph).
    """
    reg = frozenset(int(v) for v in region)
    if not reg:
        raise NotStronglyConnected("region is empty")
    for v in reg:
        net.graph._check(v)
    if not is_strongly_connected(net.graph, reg):
        raise NotStronglyConnected(f"region {sorted(reg)} is not strongly connected")
    manifold = manifold_stable(net)
    checks = tuple(
        c for c in check_local_requirement(net, method=method) if c.vertex in reg
    )
    passes = manifold.stable and all(c.passed for c in checks)
    return ImperviousReport(passes=passes, region=reg, manifold=manifold, checks=checks)
