"""Shared builders for the test suite.

Everything here is deterministic given the caller's RNG, so tests stay
reproducible without global seeding.
"""
from __future__ import annotations

import math

import numpy as np

from propstab import (
    Chirp,
    NetworkModel,
    Pulse,
    StateSpace,
    Tone,
    WeightedDigraph,
    planar_subsystem,
)


def unit_path(n: int) -> WeightedDigraph:
    """Bidirectional path 1 - 2 - ... - n with unit weights."""
    edges = []
    for v in range(1, n):
        edges.append((v, v + 1, 1.0))
        edges.append((v + 1, v, 1.0))
    return WeightedDigraph(n, tuple(edges))


def directed_line(n: int) -> WeightedDigraph:
    """One-way chain 1 -> 2 -> ... -> n with unit weights."""
    return WeightedDigraph(n, tuple((v, v + 1, 1.0) for v in range(1, n)))


def directed_cycle(n: int) -> WeightedDigraph:
    """One-way ring 1 -> 2 -> ... -> n -> 1 with unit weights."""
    edges = [(v, v + 1, 1.0) for v in range(1, n)]
    edges.append((n, 1, 1.0))
    return WeightedDigraph(n, tuple(edges))


def complete_graph(n: int) -> WeightedDigraph:
    edges = tuple(
        (a, b, 1.0) for a in range(1, n + 1) for b in range(1, n + 1) if a != b
    )
    return WeightedDigraph(n, edges)


def planar_network(
    graph: WeightedDigraph, d: float, alpha: float = 1.0, source: int | None = None
) -> NetworkModel:
    return NetworkModel(
        graph=graph, alpha=alpha, subsystem=planar_subsystem(d), source=source
    )


def random_sc_digraph(
    rng: np.random.Generator,
    n: int,
    extra_edges: int | None = None,
    w_lo: float = 0.4,
    w_hi: float = 1.5,
) -> WeightedDigraph:
    """Random strongly connected digraph: a random ring plus extra arcs."""
    order = list(rng.permutation(np.arange(1, n + 1)))
    edges: dict[tuple[int, int], float] = {}
    for i in range(n):
        tail = int(order[i])
        head = int(order[(i + 1) % n])
        edges[(tail, head)] = float(rng.uniform(w_lo, w_hi))
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n + 1))
    attempts = 0
    while extra_edges > 0 and attempts < 20 * n:
        attempts += 1
        tail = int(rng.integers(1, n + 1))
        head = int(rng.integers(1, n + 1))
        if tail == head or (tail, head) in edges:
            continue
        edges[(tail, head)] = float(rng.uniform(w_lo, w_hi))
        extra_edges -= 1
    return WeightedDigraph(n, tuple((t, h, w) for (t, h), w in edges.items()))


def random_modal_siso(
    rng: np.random.Generator,
    min_damping: float = 0.1,
    max_order: int = 5,
) -> StateSpace:
    """Random stable SISO system with every mode damped at least `min_damping`.

    Built in modal coordinates so the pole damping is exact, then disguised by
    a well-conditioned similarity transform.
    """
    blocks: list[np.ndarray] = []
    order = 0
    target = int(rng.integers(2, max_order + 1))
    while order < target:
        if target - order >= 2 and rng.random() < 0.6:
            w = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
            zeta = float(rng.uniform(min_damping, 0.95))
            wd = w * math.sqrt(1.0 - zeta * zeta)
            blocks.append(np.array([[-zeta * w, wd], [-wd, -zeta * w]]))
            order += 2
        else:
            p = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
            blocks.append(np.array([[-p]]))
            order += 1
    n = order
    a = np.zeros((n, n))
    at = 0
    for blk in blocks:
        k = blk.shape[0]
        a[at : at + k, at : at + k] = blk
        at += k
    while True:
        s = rng.normal(size=(n, n))
        if np.linalg.cond(s) < 50.0:
            break
    a = s @ a @ np.linalg.inv(s)
    b = rng.normal(size=(n, 1))
    c = rng.normal(size=(1, n))
    return StateSpace(a, b, c)


def random_pr_siso(rng: np.random.Generator, n: int) -> StateSpace:
    """Random positive-real SISO system: sum of r_k / (s + p_k), r_k, p_k > 0."""
    p = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=n))
    r = rng.uniform(0.2, 2.0, size=n)
    a = np.diag(-p)
    b = np.ones((n, 1))
    c = r.reshape(1, n)
    return StateSpace(a, b, c)


def random_disturbance(rng: np.random.Generator):
    kind = rng.integers(0, 3)
    amp = float(rng.uniform(0.5, 2.0))
    if kind == 0:
        return Tone(amplitude=amp, omega=float(rng.uniform(0.2, 3.0)),
                    phase=float(rng.uniform(0.0, 2.0 * math.pi)))
    if kind == 1:
        return Pulse(amplitude=amp, start=float(rng.uniform(0.0, 1.0)),
                     width=float(rng.uniform(0.5, 4.0)))
    lo = float(rng.uniform(0.2, 1.0))
    hi = float(rng.uniform(1.0, 3.0))
    return Chirp(amplitude=amp, omega_start=lo, omega_end=hi,
                 duration=float(rng.uniform(4.0, 12.0)))


def second_order_peak(k: float, d: float) -> tuple[float, float]:
    """Gain peak of k / (s^2 + d s + k) and the frequency attaining it.

    Below the damping knee d = sqrt(2 k) the peak sits at a strictly positive
    frequency; at or above it the response is monotone with maximum k/k = 1
    at zero frequency.
    """
    wn = math.sqrt(k)
    zeta = d / (2.0 * wn)
    if zeta < math.sqrt(0.5):
        peak = 1.0 / (2.0 * zeta * math.sqrt(1.0 - zeta * zeta))
        omega = wn * math.sqrt(1.0 - 2.0 * zeta * zeta)
        return peak, omega
    return 1.0, 0.0


def safe_dt(net: NetworkModel, source: int, upper: float = 0.02) -> float:
    """A step size comfortably inside the stability-margin guard."""
    from propstab import build_stacked_system, spectral_radius

    rho = spectral_radius(build_stacked_system(net, source).A)
    if rho <= 0.0:
        return upper
    return min(upper, 0.09 / rho)
