"""Levy-excursion encoding of doubly-marked spheres.

An excursion e on [0, T] encodes a sphere: the boundary length of the
unexplored region is X_t = e(T - t), and every upward jump of e is a bubble
(a disk cut off by the exploration) with the jump size as boundary length, a
uniform orientation bit and a uniform marked boundary point.  Disk
interiors are not instantiated.

The quantum distance between the marked points is D = int_0^T dt / X_t.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from .levy import (CadlagPath, Excursion, StableLaw, base_seed, lifetime_mass, sample_lifetimes,
                   sample_normalized_excursions, walk_space_scale, walk_to_excursion)
from .rng import CHUNK, stream


class WeightKind(enum.Enum):
    UNWEIGHTED = "unweighted"
    W = "W"      # weight by lifetime T
    D = "D"      # weight by quantum distance int 1/X


@dataclass(frozen=True)
class BubbleRecord:
    time: float          # swallow time T - tau in boundary-process time
    length: float
    orientation: int
    marked_point: float

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("bubble length must be positive")
        if self.orientation not in (0, 1):
            raise ValueError("orientation must be 0 or 1")
        if not 0.0 <= self.marked_point < 1.0:
            raise ValueError("marked point must lie in [0, 1)")


@dataclass(frozen=True, eq=False)
class SphereSample:
    """Boundary process X_t = e(T - t) plus the bubble ledger.

    ``bubbles`` are listed in the order of the excursion's jump ledger (jump
    time of e increasing); use :meth:`bubbles_by_swallow_time` for the order
    in which an exploration from the first marked point swallows them.
    """

    boundary_process: Excursion
    bubbles: tuple = ()
    weight: float = 1.0
    restriction: str = ""
    weighting: WeightKind = WeightKind.UNWEIGHTED
    law: StableLaw = field(default_factory=StableLaw)

    def __post_init__(self):
        object.__setattr__(self, "bubbles", tuple(self.bubbles))
        if not self.weight >= 0:
            raise ValueError("weight must be non-negative")
        j = self.boundary_process.path.jumps
        if len(self.bubbles) != j.shape[0]:
            raise ValueError("bubble ledger does not match the jump ledger")
        sizes = j[::-1, 1]     # ledger of the encoding excursion, in its own time order
        if self.bubbles and not np.array_equal([b.length for b in self.bubbles], sizes):
            raise ValueError("bubble lengths differ from the jump sizes")

    @property
    def T(self) -> float:
        return self.boundary_process.lifetime

    @property
    def e_star(self) -> float:
        return self.boundary_process.sup

    def excursion(self) -> Excursion:
        """The encoding excursion e (time reversal of the boundary process)."""
        return self.boundary_process.reversed()

    def bubbles_by_swallow_time(self) -> tuple:
        return tuple(sorted(self.bubbles, key=lambda b: b.time))

    def reversed(self) -> "SphereSample":
        """Same sphere with the roles of the marked points swapped at path level."""
        bp = self.boundary_process.reversed()
        T = self.T
        bubbles = tuple(replace(b, time=T - b.time) for b in reversed(self.bubbles))
        return SphereSample(bp, bubbles, self.weight, self.restriction, self.weighting, self.law)


def encode_sphere(excursion: Excursion, seed, restriction: str = "", weight: float = 1.0,
                  law: StableLaw | None = None) -> SphereSample:
    """One bubble per jump of e, with uniform orientation and marked point."""
    if excursion.path.reversed_:
        raise ValueError("encode_sphere expects the forward excursion e")
    rng = stream(base_seed(seed), "encode_sphere")
    j = excursion.path.jumps
    T = excursion.lifetime
    orient = rng.integers(0, 2, j.shape[0])
    mark = rng.uniform(0.0, 1.0, j.shape[0])
    bubbles = tuple(BubbleRecord(float(T - t), float(s), int(o), float(m))
                    for (t, s), o, m in zip(j, orient, mark))
    return SphereSample(excursion.reversed(), bubbles, weight, restriction, WeightKind.UNWEIGHTED,
                        law or StableLaw())


# --------------------------------------------------------------------------
# quantum distance


def _distance_terms(times: np.ndarray, x: np.ndarray, alpha: float) -> list:
    """Quadrature terms for int dt / x: trapezoid inside, power profile at zero ends."""
    h = np.diff(times)
    n = h.size
    edge = 1.0 / (1.0 - 1.0 / alpha)
    terms = []
    for i in range(n):
        a, b = x[i], x[i + 1]
        if a > 0 and b > 0:
            terms.append(0.5 * h[i] / a + 0.5 * h[i] / b)
        elif a == 0 and b > 0:
            terms.append(h[i] * edge / b)
        elif b == 0 and a > 0:
            terms.append(h[i] * edge / a)
        else:
            raise ValueError(f"boundary process vanishes on an interior cell {i}")
    return terms


def quantum_distance(sample, law: StableLaw | None = None) -> float:
    """D = int_0^T dt / X_t for a SphereSample, Excursion or CadlagPath.

    Interior cells use the trapezoid rule; a cell touching a zero endpoint
    uses the local profile X ~ u**(1/alpha), i.e. h / (x (1 - 1/alpha)).  The
    terms are summed with ``math.fsum`` so the result is exactly invariant
    under time reversal.
    """
    if isinstance(sample, SphereSample):
        law = law or sample.law
        path = sample.boundary_process.path
    elif isinstance(sample, Excursion):
        path = sample.path
    else:
        path = sample
    law = law or StableLaw()
    x = path.values
    if np.any(x[1:-1] <= 0) or np.any(x < 0):
        raise ValueError("boundary process must be positive on the interior")
    d = math.fsum(_distance_terms(path.times, x, law.alpha))
    if not math.isfinite(d):
        raise FloatingPointError("quantum distance is not finite")
    return d


def _walk_distance(walks: np.ndarray, alpha: float) -> np.ndarray:
    """Same quadrature on integer excursions with unit time step and unit space."""
    x = walks.astype(float)
    inner = x[:, 1:-1]
    n = x.shape[1] - 1
    edge = 1.0 / (1.0 - 1.0 / alpha)
    if n == 2:
        return 2 * edge / inner[:, 0]
    tr = 0.5 / inner[:, :-1] + 0.5 / inner[:, 1:]
    return tr.sum(axis=1) + edge / inner[:, 0] + edge / inner[:, -1]


# --------------------------------------------------------------------------
# quantum natural time from bubble counts


def clock_constant(law: StableLaw = StableLaw()) -> float:
    """Expected jumps of size in [e^{-j-1}, e^{-j}) per unit time, divided by e^{alpha j}."""
    return law.levy_c / law.alpha * (math.exp(law.alpha) - 1.0)


def calibrate_clock_constant(law: StableLaw, seed, j: int = 4, duration: float = 50.0,
                             step: float | None = None) -> float:
    """Empirical constant from a stable path of known duration (counts at scale j)."""
    if step is None:
        step = (math.exp(-j - 1) / 50.0 / law.sigma) ** law.alpha
    from .levy import sample_stable_path
    p = sample_stable_path(law, duration, step, seed, jump_threshold=math.exp(-j - 1))
    s = p.jumps[:, 1]
    n = np.count_nonzero((s >= math.exp(-j - 1)) & (s < math.exp(-j)))
    return n / (duration * math.exp(law.alpha * j))


def quantum_natural_clock_from_jumps(bubbles: Sequence, j: int, up_to: int | None = None,
                                     c_hat: float | None = None, law: StableLaw = StableLaw()) -> float:
    """N(e^{-j-1}, e^{-j}) among bubbles[0..up_to] divided by c_hat e^{alpha j}."""
    if j < 0:
        raise ValueError("j must be non-negative")
    if c_hat is None:
        c_hat = clock_constant(law)
    if not bubbles:
        return 0.0
    sel = bubbles if up_to is None else bubbles[:up_to + 1]
    lo, hi = math.exp(-j - 1), math.exp(-j)
    n = sum(1 for b in sel if lo <= (b.length if hasattr(b, "length") else b) < hi)
    return n / (c_hat * math.exp(law.alpha * j))


# --------------------------------------------------------------------------
# weighting


def reweight(ensemble: Sequence[SphereSample], kind: WeightKind) -> list:
    """Multiply weights by T (kind W) or D (kind D); UNWEIGHTED leaves them alone."""
    kind = WeightKind(kind)
    out = []
    for s in ensemble:
        if not s.restriction:
            raise ValueError("sample has no declared restriction event")
        if s.weighting is not WeightKind.UNWEIGHTED and kind is not WeightKind.UNWEIGHTED:
            raise ValueError(f"sample already weighted by {s.weighting.value}")
        if kind is WeightKind.UNWEIGHTED:
            out.append(s)
            continue
        f = s.T if kind is WeightKind.W else quantum_distance(s)
        out.append(replace(s, weight=s.weight * f, weighting=kind))
    return out


def weighted_mean(values, weights) -> float:
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    return float(np.sum(values * weights) / np.sum(weights))


# --------------------------------------------------------------------------
# ensembles for tail estimates


class SphereEnsemble(NamedTuple):
    T: np.ndarray
    D: np.ndarray
    e_star: np.ndarray
    n_bubbles: np.ndarray
    weight: np.ndarray
    n_proposed: int
    restriction: str


def sphere_ensemble(law: StableLaw, n_samples: int, n_steps: int, t_min: float, t_max: float,
                    seed, eps: float = 0.0, proposal: str = "loguniform") -> SphereEnsemble:
    """Restricted Ito-measure ensemble, summarised per sample.

    ``n_samples`` lifetimes are proposed on [t_min, t_max] (density
    t**(-1-1/alpha) for ``proposal='power'``, log-uniform otherwise) and the
    weights make ``sum(weight * f)`` an estimate of the integral of f against
    the excursion measure restricted to {t_min <= T <= t_max, e* >= eps}.
    Samples outside the restriction are dropped.
    """
    if not (0 < t_min < t_max):
        raise ValueError("need 0 < t_min < t_max")
    a = law.alpha
    base = base_seed(seed)
    kappa = walk_space_scale(law)
    res = {k: [] for k in ("T", "D", "e", "nb", "w")}
    for j, lo, hi in _chunks(n_samples):
        m = hi - lo
        rng = stream(base, "sphere_T", j)
        if proposal == "power":
            T = sample_lifetimes(law, t_min, t_max, m, rng)
            w = np.full(m, lifetime_mass(law, t_min, t_max))
        elif proposal == "loguniform":
            L = math.log(t_max / t_min)
            T = t_min * np.exp(rng.uniform(0, L, m))
            w = T ** (-1.0 / a) * L
        else:
            raise ValueError(f"unknown proposal {proposal!r}")
        walks = sample_normalized_excursions(law, n_steps, m, stream(base, "sphere_walk", j))
        sp = kappa * (n_steps / T) ** (-1.0 / a)          # space scale per sample
        es = walks.max(axis=1) * sp
        D = _walk_distance(walks, a) * (T / n_steps) / sp
        nb = np.count_nonzero(np.diff(walks, axis=1) > 0, axis=1)
        keep = es >= eps
        for k, v in zip(("T", "D", "e", "nb", "w"), (T, D, es, nb, w)):
            res[k].append(v[keep])
    cat = {k: np.concatenate(v) for k, v in res.items()}
    return SphereEnsemble(cat["T"], cat["D"], cat["e"], cat["nb"], cat["w"] / n_samples, n_samples,
                          f"T in [{t_min:g}, {t_max:g}], e* >= {eps:g}")


def _chunks(n, size=CHUNK):
    for j, a in enumerate(range(0, n, size)):
        yield j, a, min(n, a + size)


def ensemble_samples(law: StableLaw, n: int, n_steps: int, t_min: float, t_max: float, seed,
                     eps: float = 0.0) -> list:
    """Explicit SphereSample objects (power-law lifetimes), for small ensembles."""
    base = base_seed(seed)
    T = sample_lifetimes(law, t_min, t_max, n, stream(base, "samples_T"))
    walks = sample_normalized_excursions(law, n_steps, n, stream(base, "samples_walk"))
    mass = lifetime_mass(law, t_min, t_max)
    tag = f"T in [{t_min:g}, {t_max:g}], e* >= {eps:g}"
    out = []
    for i in range(n):
        e = walk_to_excursion(law, walks[i], float(T[i]))
        if e.sup >= eps:
            out.append(encode_sphere(e, stream(base, "samples_enc", i), tag, mass / n, law))
    return out


# --------------------------------------------------------------------------
# tail exponents


@dataclass(frozen=True)
class TailFit:
    slope: float
    stderr: float
    nonlinearity: float
    n_eff: float
    accepted: bool
    thresholds: tuple = ()
    survival: tuple = ()

    def __iter__(self):
        return iter((self.slope, self.stderr))


def fit_tail_exponent(values, weights=None, decade=(1.0, 10.0), n_thresholds: int = 11,
                      max_nonlinearity: float = 0.05, min_eff: float = 100.0) -> TailFit:
    """Log-log slope of the weighted survival function over ``decade``.

    Survival estimates at log-spaced thresholds are regressed on log t by
    generalised least squares using their estimated covariance (they share
    samples).  A quadratic fit supplies the curvature diagnostic
    ``nonlinearity`` = max |quadratic - linear| in log S over the window;
    fits above ``max_nonlinearity`` are marked not accepted.
    """
    v = np.asarray(values, dtype=float)
    w = np.ones_like(v) if weights is None else np.asarray(weights, dtype=float)
    lo, hi = map(float, decade)
    if not (0 < lo < hi):
        raise ValueError("decade must satisfy 0 < lo < hi")
    inside = (v >= lo) & (v <= hi)
    wi = w[inside]
    n_eff = float(wi.sum() ** 2 / np.sum(wi ** 2)) if wi.size else 0.0
    if n_eff < min_eff:
        raise ValueError(f"only {n_eff:.1f} effective samples in [{lo:g}, {hi:g}] (need {min_eff:g})")
    t = np.geomspace(lo, hi, n_thresholds)
    W = w.sum()
    ge = v[None, :] >= t[:, None]
    S = (ge * w).sum(axis=1) / W
    if np.any(S <= 0):
        raise ValueError("empty survival estimate inside the window")
    # covariance of S(t_a), S(t_b) under independent weighted draws
    w2 = (ge * w ** 2)
    m2 = np.array([[w2[max(a, b)].sum() for b in range(t.size)] for a in range(t.size)]) / W ** 2
    n = v.size
    C = (m2 - np.outer(S, S) / n) / np.outer(S, S)
    C += 1e-15 * np.eye(t.size) * max(1.0, np.trace(C))
    y = np.log(S)
    x = np.log(t)
    Ci = np.linalg.pinv(C)

    def gls(X):
        A = X.T @ Ci @ X
        cov = np.linalg.pinv(A)
        beta = cov @ X.T @ Ci @ y
        return beta, cov

    X1 = np.column_stack((np.ones_like(x), x))
    b1, c1 = gls(X1)
    xc = x - x.mean()
    X2 = np.column_stack((np.ones_like(x), xc, xc ** 2))
    b2, _ = gls(X2)
    lin = X1 @ b1
    quad = X2 @ b2
    nonlin = float(np.max(np.abs(quad - lin)))
    return TailFit(float(b1[1]), float(math.sqrt(max(c1[1, 1], 0.0))), nonlin, n_eff,
                   nonlin <= max_nonlinearity, tuple(t), tuple(S))


# --------------------------------------------------------------------------
# conditional law under the lifetime-weighted measure


def conditional_law_check(law: StableLaw, n: int, n_steps: int, seed, t_min: float = 1e-2,
                          t_max: float = 1e2, t_bin=(0.5, 2.0), x_quantiles=(0.25, 0.75)) -> dict:
    """Compare remaining lifetimes T - t given (t, X_t) in a bin, two ways.

    Weighted side: (T, e) from the restricted measure weighted by T, with
    t = U T.  Unweighted side: t drawn from its marginal inside the bin,
    then (T, e) from the unweighted measure conditioned on T >= t.  Returns
    the two-sample KS p-value and the sample sizes.
    """
    a = law.alpha
    base = base_seed(seed)
    b = 1.0 / a
    kappa = walk_space_scale(law)

    def x_at(walks, T, tt):
        # boundary process X_t = e(T - t) with step interpolation of the walk
        i = np.floor((T - tt) / T * n_steps).astype(int).clip(0, n_steps)
        return walks[np.arange(walks.shape[0]), i] * kappa * (n_steps / T) ** (-b)

    # weighted side: density of T is t * t^{-1-b} = t^{-b} on [t_min, t_max]
    r = stream(base, "cond_w")
    u = r.uniform(0, 1, n)
    T = ((t_max ** (1 - b) - t_min ** (1 - b)) * u + t_min ** (1 - b)) ** (1 / (1 - b))
    tt = r.uniform(0, 1, n) * T
    walks = sample_normalized_excursions(law, n_steps, n, stream(base, "cond_w_walk"))
    X = x_at(walks, T, tt)
    inbin = (tt >= t_bin[0]) & (tt < t_bin[1])
    xlo, xhi = np.quantile(X[inbin], x_quantiles)
    sel = inbin & (X >= xlo) & (X < xhi)
    rem_w = (T - tt)[sel]

    # unweighted side: t marginal ~ t^{-b} (N[T >= t]) restricted to the bin; T | T >= t
    r2 = stream(base, "cond_u")
    m = 4 * n
    u = r2.uniform(0, 1, m)
    p0, p1 = t_bin[0] ** (1 - b), t_bin[1] ** (1 - b)
    tu = (p0 + u * (p1 - p0)) ** (1 / (1 - b))
    v = r2.uniform(0, 1, m)
    lo_, hi_ = tu ** -b, t_max ** -b
    Tu = (lo_ - v * (lo_ - hi_)) ** (-1 / b)
    walks_u = sample_normalized_excursions(law, n_steps, m, stream(base, "cond_u_walk"))
    Xu = x_at(walks_u, Tu, tu)
    selu = (Xu >= xlo) & (Xu < xhi)
    rem_u = (Tu - tu)[selu]
    ks = stats.ks_2samp(rem_w, rem_u)
    return {"pvalue": float(ks.pvalue), "statistic": float(ks.statistic),
            "n_weighted": int(rem_w.size), "n_unweighted": int(rem_u.size),
            "x_bin": (float(xlo), float(xhi)), "t_bin": tuple(t_bin)}
