"""Boundary-length view of the delta-approximation to QLE(8/3, 0).

The unexplored boundary length follows X_t = e(T - t).  At every multiple of
delta (quantum natural time) the tip is redrawn uniformly on the boundary
circle of length X_t; bubbles are swallowed at the downward jumps of X.  Two
clocks run alongside: quantum natural time t itself and the quantum
distance s(t) = int_0^t du / X_u.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .levy import Excursion, StableLaw, base_seed
from .rng import stream
from .sphere import BubbleRecord, _distance_terms, encode_sphere


@dataclass(frozen=True)
class QleConfig:
    delta: float
    law: StableLaw = field(default_factory=StableLaw)
    seed: int = 0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")


@dataclass(frozen=True)
class QleState:
    boundary_length: float
    tip: float
    qnt_elapsed: float
    qd_elapsed: float

    def __post_init__(self):
        if self.boundary_length < 0:
            raise ValueError("boundary length must be non-negative")
        if self.boundary_length > 0 and not (0 <= self.tip < self.boundary_length):
            raise ValueError("tip must lie in [0, boundary_length)")


@dataclass(frozen=True)
class GrowthBubble:
    bubble: BubbleRecord
    segment: int          # index j of the reshuffle interval [j delta, (j+1) delta)
    tip: float            # tip coordinate during that interval
    boundary_before: float

    @property
    def length(self) -> float:
        return self.bubble.length


@dataclass(frozen=True, eq=False)
class GrowthRecord:
    states: tuple
    bubbles: tuple
    total_distance: float
    delta: float
    lifetime: float
    clock_times: np.ndarray = field(repr=False, default=None)
    clock_values: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        t = [b.bubble.time for b in self.bubbles]
        if any(b < a for a, b in zip(t, t[1:])):
            raise ValueError("bubbles must be ordered by swallow time")

    def ledger(self):
        """(swallow time, length) pairs in order."""
        return [(b.bubble.time, b.bubble.length) for b in self.bubbles]

    def to_json(self) -> str:
        return json.dumps({
            "delta": self.delta, "lifetime": self.lifetime, "total_distance": self.total_distance,
            "states": [asdict(s) for s in self.states],
            "bubbles": [dict(asdict(b.bubble), segment=b.segment, tip=b.tip,
                             boundary_before=b.boundary_before) for b in self.bubbles],
        })


def _clock(times: np.ndarray, x: np.ndarray, alpha: float):
    terms = _distance_terms(times, x, alpha)
    cum = np.concatenate(([0.0], np.cumsum(terms)))
    cum[-1] = math.fsum(terms)
    return cum


def qle_delta_run(excursion: Excursion, config: QleConfig) -> GrowthRecord:
    """Run the tip-resampling dynamics along the time reversal of ``excursion``."""
    if excursion.path.reversed_:
        raise ValueError("qle_delta_run expects the forward excursion e")
    law = config.law
    base = base_seed(config.seed)
    sphere = encode_sphere(excursion, base, law=law)
    bp = sphere.boundary_process.path
    T = excursion.lifetime
    times, x = bp.times, bp.values
    cum = _clock(times, x, law.alpha)
    rng = stream(base, "qle_tip")
    n_seg = max(1, int(math.ceil(T / config.delta - 1e-12)))
    states, tips = [], []
    for j in range(n_seg):
        t = min(j * config.delta, T)
        xl = float(bp.at(t))
        u = rng.uniform()
        tip = u * xl if xl > 0 else 0.0
        if xl > 0 and tip >= xl:
            tip = math.nextafter(xl, 0.0)
        tips.append(tip)
        states.append(QleState(xl, tip, t, float(np.interp(t, times, cum))))
    bubbles = []
    for b in sphere.bubbles_by_swallow_time():
        seg = min(int(b.time // config.delta), n_seg - 1)
        # the drop happens right after the grid point carrying the swallow time
        i = min(int(np.searchsorted(times, b.time, side="left")), x.size - 1)
        before = float(x[i])
        bubbles.append(GrowthBubble(b, seg, tips[seg], before))
    return GrowthRecord(tuple(states), tuple(bubbles), float(cum[-1]), float(config.delta), float(T),
                        times, cum)


def distance_clock(record: GrowthRecord, t_qnt: float) -> float:
    """Quantum distance s(t) elapsed by quantum natural time t."""
    if not (0 <= t_qnt <= record.lifetime):
        raise ValueError(f"t_qnt must lie in [0, {record.lifetime}]")
    if t_qnt == record.lifetime:
        return record.total_distance
    return float(np.interp(t_qnt, record.clock_times, record.clock_values))


def hitting_probability(u: float, eps: float) -> float:
    """Probability that a boundary interval of length eps is hit: min(eps / u, 1)."""
    if not u > 0:
        raise ValueError("boundary length u must be positive")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return min(eps / u, 1.0)


@dataclass(frozen=True)
class ComplementCheck:
    passed: bool
    hypothesis_met: bool
    ks_distance: float
    deviation: float
    witness: float | None
    tolerance: float


def check_complement_lemma(F, D: float | None = None, n_grid: int = 2001,
                           tol: float | None = None) -> ComplementCheck:
    """A non-increasing F on [0, D] pushing uniform measure to uniform must be D - d.

    ``F`` is a callable (with ``D`` given) or an array tabulated on a uniform
    grid of [0, D].  The check measures the KS distance of the pushforward
    from uniform; when that is within ``tol`` the hypothesis holds and the
    sup deviation from D - d must also be within ``tol``.  ``witness`` is the
    grid point of largest deviation (None on success).
    """
    if callable(F):
        if D is None:
            raise ValueError("D is required when F is a callable")
        d = np.linspace(0.0, D, n_grid)
        f = np.asarray([F(v) for v in d], dtype=float)
    else:
        f = np.asarray(F, dtype=float)
        if D is None:
            raise ValueError("D is required for tabulated F")
        d = np.linspace(0.0, D, f.size)
    n = f.size
    if np.any(np.diff(f) > 1e-12 * max(1.0, D)):
        raise ValueError("F must be non-increasing")
    tol = 3.0 * D / (n - 1) if tol is None else tol
    # pushforward of the uniform grid measure vs the uniform law on [0, D]
    srt = np.sort(f)
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(0, n) / n
    u = np.clip(srt / D, 0, 1)
    ks = float(max(np.max(np.abs(ecdf_hi - u)), np.max(np.abs(u - ecdf_lo))))
    hyp = ks <= tol / D + 1.0 / n
    dev = np.abs(f - (D - d))
    k = int(np.argmax(dev))
    # middle of the tied block of maximal deviation
    ties = np.flatnonzero(dev >= dev[k] - 1e-12 * max(1.0, D))
    k = int(ties[ties.size // 2]) if np.all(np.diff(ties) == 1) else k
    ok = hyp and float(dev.max()) <= tol
    return ComplementCheck(bool(ok), bool(hyp), ks, float(dev.max()), None if ok else float(d[k]), tol)


@dataclass(frozen=True)
class MeetingConfig:
    U: float
    tau: float
    D: float

    def __post_init__(self):
        if not (0 <= self.U <= 1):
            raise ValueError("U must lie in [0, 1]")
        if not (0 <= self.tau <= self.D):
            raise ValueError("tau must lie in [0, D]")

    @classmethod
    def from_uniform(cls, U: float, D: float) -> "MeetingConfig":
        return cls(float(U), float(U) * float(D), float(D))


def meeting_bookkeeping(record: GrowthRecord, meeting: MeetingConfig):
    """(tau, sigma_bar) with tau = U D and sigma_bar = D - tau."""
    D = record.total_distance
    if abs(meeting.D - D) > 1e-12 * max(1.0, D):
        raise ValueError("meeting config refers to a different total distance")
    tau = meeting.U * D
    sigma_bar = D - tau
    assert 0 <= tau <= D and 0 <= sigma_bar <= D
    return tau, sigma_bar
