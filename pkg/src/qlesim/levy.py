"""Spectrally positive stable processes, excursions and stable CSBPs.

Conventions
-----------
A ``StableLaw(alpha, scale)`` describes the Levy process with

    E[exp(-lam * (X_t - X_0))] = exp(t * psi(lam)),   psi(lam) = scale * lam**alpha,

i.e. a zero-mean alpha-stable process with only upward jumps.  Its Levy
density is ``levy_c * x**(-1 - alpha)`` on x > 0 with
``levy_c = scale * alpha * (alpha - 1) / Gamma(2 - alpha)``.

The CSBP with branching mechanism psi is obtained from X by the Lamperti
time change: CSBP time is ``s(t) = int_0^t du / X_u`` (t = Levy time) and
``Y_s = X_{t(s)}``.  In the other direction Levy time is ``int Y ds``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import special

from .rng import CHUNK, stream


# --------------------------------------------------------------------------
# laws and paths


@dataclass(frozen=True)
class StableLaw:
    alpha: float = 1.5
    scale: float = 1.0

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise ValueError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def rho(self) -> float:
        """Positivity parameter 1 - 1/alpha."""
        return 1.0 - 1.0 / self.alpha

    @property
    def sigma(self) -> float:
        """Scale of the unit-time increment in the usual S1 parameterisation."""
        return (self.scale * abs(math.cos(math.pi * self.alpha / 2))) ** (1.0 / self.alpha)

    @property
    def levy_c(self) -> float:
        a = self.alpha
        return self.scale * a * (a - 1.0) / math.gamma(2.0 - a)

    def psi(self, lam):
        return self.scale * np.asarray(lam, dtype=float) ** self.alpha


@dataclass(frozen=True, eq=False)
class CadlagPath:
    """Right-continuous path sampled on a grid, with a ledger of resolved jumps.

    ``jumps`` has shape (k, 2): rows are (time, size), size > 0.  For a
    time-reversed path (``reversed_=True``) the ledger entries are downward
    jumps of the recorded magnitude.
    """

    times: np.ndarray
    values: np.ndarray
    jumps: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    reversed_: bool = False

    def __post_init__(self):
        t = np.ascontiguousarray(self.times, dtype=float)
        v = np.ascontiguousarray(self.values, dtype=float)
        j = np.asarray(self.jumps, dtype=float).reshape(-1, 2)
        if t.ndim != 1 or t.shape != v.shape or t.size < 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        if j.size:
            if np.any(j[:, 1] <= 0):
                raise ValueError("jump ledger sizes must be positive")
            if j[:, 0].min() < t[0] - 1e-12 or j[:, 0].max() > t[-1] + 1e-12:
                raise ValueError("jump ledger times outside the path window")
        for name, arr in (("times", t), ("values", v), ("jumps", j)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.times.size

    @property
    def horizon(self) -> float:
        return float(self.times[-1] - self.times[0])

    def at(self, t):
        """Step-interpolated value (right-continuous)."""
        i = np.searchsorted(self.times, t, side="right") - 1
        return self.values[np.clip(i, 0, None)]

    def reversed(self) -> "CadlagPath":
        """Grid-wise time reversal on the same window: u -> t0 + t1 - u."""
        t0, t1 = self.times[0], self.times[-1]
        tr = (t0 + t1) - self.times[::-1]
        j = self.jumps.copy()
        if j.size:
            j[:, 0] = (t0 + t1) - j[:, 0]
            j = j[::-1]
        return CadlagPath(tr, self.values[::-1].copy(), j, not self.reversed_)


@dataclass(frozen=True, eq=False)
class Excursion:
    path: CadlagPath
    lifetime: float

    def __post_init__(self):
        v = self.path.values
        if v.size < 2:
            raise ValueError("an excursion needs at least two grid points")
        if v[0] != 0 or v[-1] != 0:
            raise ValueError("excursion must start and end at 0")
        if np.any(v[1:-1] <= 0):
            raise ValueError("excursion must be strictly positive on the interior")
        if not self.lifetime > 0 or abs(self.path.horizon - self.lifetime) > 1e-9 * max(1.0, self.lifetime):
            raise ValueError("lifetime must equal the path window")

    @property
    def T(self) -> float:
        return self.lifetime

    @property
    def sup(self) -> float:
        return float(self.path.values.max())

    def reversed(self) -> "Excursion":
        return Excursion(self.path.reversed(), self.lifetime)


@dataclass(frozen=True, eq=False)
class CsbpPath:
    path: CadlagPath
    y0: float
    zeta: float = math.inf

    def __post_init__(self):
        v = self.path.values
        if np.any(v < 0):
            raise ValueError("CSBP values must be non-negative")
        if self.path.times[0] != 0 or v[0] != self.y0:
            raise ValueError("CSBP path must start at (0, y0)")
        if math.isfinite(self.zeta):
            after = self.path.times >= self.zeta
            if not np.all(v[after] == 0):
                raise ValueError("CSBP must be absorbed at 0 after zeta")


# --------------------------------------------------------------------------
# samplers for stable variables


def stable_increments(law: StableLaw, dt, rng: np.random.Generator, size=None) -> np.ndarray:
    """Exact increments X_{t+dt} - X_t (Chambers-Mallows-Stuck, beta = 1)."""
    a = law.alpha
    dt = np.asarray(dt, dtype=float)
    if size is None:
        size = dt.shape
    v = rng.uniform(-math.pi / 2, math.pi / 2, size)
    w = rng.standard_exponential(size)
    tan = math.tan(math.pi * a / 2)
    b = math.atan(tan) / a
    s = (1.0 + tan * tan) ** (1.0 / (2 * a))
    z = (s * np.sin(a * (v + b)) / np.cos(v) ** (1.0 / a)
         * (np.cos(v - a * (v + b)) / w) ** ((1.0 - a) / a))
    return law.sigma * dt ** (1.0 / a) * z


def positive_stable(beta: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """Positive beta-stable variable S with E[exp(-q S)] = exp(-q**beta), 0 < beta < 1 (Kanter)."""
    u = rng.uniform(0.0, math.pi, size)
    e = rng.standard_exponential(size)
    a = (np.sin(beta * u) ** (beta / (1 - beta)) * np.sin((1 - beta) * u)
         / np.sin(u) ** (1 / (1 - beta)))
    return (a / e) ** ((1 - beta) / beta)


def first_passage_time(law: StableLaw, x, rng: np.random.Generator) -> np.ndarray:
    """Levy time for X started at x > 0 to reach 0; Laplace transform exp(-x * phi(q))."""
    x = np.asarray(x, dtype=float)
    s = positive_stable(1.0 / law.alpha, rng, x.shape)
    return (x ** law.alpha) * s / law.scale


def extinction_time(law: StableLaw, x, rng: np.random.Generator) -> np.ndarray:
    """CSBP extinction time from mass x: P[zeta <= t] = exp(-x * u_t(inf))."""
    x = np.asarray(x, dtype=float)
    e = rng.standard_exponential(x.shape)
    a = law.alpha
    return (x / e) ** (a - 1.0) / ((a - 1.0) * law.scale)


# --------------------------------------------------------------------------
# paths


def _jump_threshold(law, horizon, jump_threshold):
    if jump_threshold is None:
        return 1e-6 * law.sigma * horizon ** (1.0 / law.alpha)
    return float(jump_threshold)


def sample_stable_path(law: StableLaw, horizon: float, step: float, seed, x0: float = 0.0,
                       jump_threshold: float | None = None) -> CadlagPath:
    """Stable path on a uniform grid of mesh ``step`` (last cell may be shorter).

    Grid increments larger than ``jump_threshold`` (default 1e-6 times the
    path scale sigma * horizon**(1/alpha)) are entered in the jump ledger at
    the right end of their cell.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    if not (0 < step <= horizon):
        raise ValueError("step must lie in (0, horizon]")
    n = int(math.ceil(horizon / step - 1e-12))
    times = np.minimum(np.arange(n + 1) * step, horizon)
    times[-1] = horizon
    dt = np.diff(times)
    base = base_seed(seed)
    inc = np.empty(n)
    for j, a, b in _chunked(n):
        inc[a:b] = stable_increments(law, dt[a:b], stream(base, "stable_path", j))
    values = x0 + np.concatenate(([0.0], np.cumsum(inc)))
    thr = _jump_threshold(law, horizon, jump_threshold)
    big = np.flatnonzero(inc > thr)
    jumps = np.column_stack((times[big + 1], inc[big]))
    return CadlagPath(times, values, jumps)


def _chunked(n, size=CHUNK * 64):
    for j, a in enumerate(range(0, n, size)):
        yield j, a, min(n, a + size)


def base_seed(seed) -> int:
    """Integer seed; a Generator is consumed once to derive one."""
    if isinstance(seed, np.random.Generator):
        return int(seed.integers(0, 2**63))
    return int(seed)


def sample_adaptive_path(law: StableLaw, x0: float, horizon: float, seed, h_max: float = 1e-3,
                         refine: float = 10.0, x_abs: float | None = None,
                         jump_threshold: float | None = None) -> CadlagPath:
    """Stable path from x0 > 0 with mesh refined near 0, stopped on hitting 0.

    The step is ``min(h_max, (X / (refine * sigma))**alpha)`` so that increments
    stay below X/refine in scale.  Once X drops below ``x_abs`` (default
    1e-6 x0) the remaining first-passage time is drawn exactly and the path is
    closed with a final grid point at value 0.
    """
    if not x0 > 0:
        raise ValueError("x0 must be positive")
    x_abs = 1e-6 * x0 if x_abs is None else x_abs
    rng = stream(base_seed(seed), "adaptive_path")
    a, sig = law.alpha, law.sigma
    t, x = 0.0, float(x0)
    ts, xs, jt, js = [0.0], [x], [], []
    thr = _jump_threshold(law, horizon, jump_threshold)
    buf = np.empty(0)
    k = 0
    while t < horizon:
        if k >= buf.size:
            buf = stable_increments(law, np.ones(4096), rng)
            k = 0
        dt = min(h_max, (x / (refine * sig)) ** a, horizon - t)
        inc = buf[k] * dt ** (1.0 / a)
        k += 1
        xn = x + inc
        if xn <= 0:
            # crossed inside the cell: creep to 0 at the linearly interpolated time
            tn = t + dt * x / (x - xn)
            ts.append(tn), xs.append(0.0)
            break
        t += dt
        if inc > thr:
            jt.append(t), js.append(inc)
        ts.append(t), xs.append(xn)
        x = xn
        if x <= x_abs:
            tn = t + float(first_passage_time(law, x, rng))
            ts.append(tn), xs.append(0.0)
            break
    return CadlagPath(np.array(ts), np.array(xs), np.column_stack((jt, js)) if jt else np.zeros((0, 2)))


# --------------------------------------------------------------------------
# Lamperti time changes


def lamperti_levy_to_csbp(path: CadlagPath, y0: float) -> CsbpPath:
    """CSBP time s(t) = int_0^t du / X_u on the step interpolant; absorb at the first value <= 0."""
    if not y0 > 0:
        raise ValueError("y0 must be positive")
    x = path.values
    if abs(x[0] - y0) > 1e-12 * max(1.0, y0):
        raise ValueError("path must start at y0")
    dead = np.flatnonzero(x <= 0)
    k = int(dead[0]) if dead.size else x.size
    stop = min(k + 1, x.size)
    dt = np.diff(path.times[:stop])
    s = np.concatenate(([0.0], np.cumsum(dt / x[:stop - 1])))
    y = x[:stop].copy()
    y[0] = y0
    zeta = math.inf
    if dead.size:
        y[k] = 0.0
        zeta = float(s[k])
    j = path.jumps
    if j.size:
        j = j[j[:, 0] <= path.times[stop - 1]]
        j = np.column_stack((np.interp(j[:, 0], path.times[:stop], s), j[:, 1]))
    return CsbpPath(CadlagPath(s, y, j), float(y0), zeta)


def lamperti_csbp_to_levy(csbp: CsbpPath) -> CadlagPath:
    """Levy time t(s) = int_0^s Y_u du; inverse of :func:`lamperti_levy_to_csbp`."""
    s, y = csbp.path.times, csbp.path.values
    if math.isfinite(csbp.zeta):
        keep = s <= csbp.zeta
        s, y = s[keep], y[keep]
    t = np.concatenate(([0.0], np.cumsum(np.diff(s) * y[:-1])))
    j = csbp.path.jumps
    if j.size:
        j = j[j[:, 0] <= s[-1]]
        j = np.column_stack((np.interp(j[:, 0], s, t), j[:, 1]))
    return CadlagPath(t, y.copy(), j)


def sample_csbp_path(law: StableLaw, y0: float, horizon: float, seed, **kw) -> CsbpPath:
    """CSBP path obtained from an adaptive Levy path (Levy-time ``horizon``)."""
    return lamperti_levy_to_csbp(sample_adaptive_path(law, y0, horizon, seed, **kw), y0)


# --------------------------------------------------------------------------
# closed forms


def u_t(lam, t, law: StableLaw = StableLaw()):
    """Solution of du/dt = -psi(u), u_0 = lam."""
    lam = np.asarray(lam, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("lambda must be positive")
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    a = law.alpha
    with np.errstate(divide="ignore"):
        out = (lam ** (1.0 - a) + (a - 1.0) * law.scale * t) ** (1.0 / (1.0 - a))
    return out[()] if out.ndim == 0 else out


def u_t_infinity(t, law: StableLaw = StableLaw()):
    """lim_{lam -> inf} u_t(lam); P[zeta <= t] = exp(-y0 * u_t_infinity(t))."""
    a = law.alpha
    return ((a - 1.0) * law.scale * np.asarray(t, dtype=float)) ** (-1.0 / (a - 1.0))


def phi(q, law: StableLaw = StableLaw()):
    """Right inverse of psi: phi(q) = (q / scale)**(1/alpha)."""
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValueError("q must be non-negative")
    out = (q / law.scale) ** (1.0 / law.alpha)
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# vectorised CSBP ensembles


class CsbpEnsemble(NamedTuple):
    y_at: np.ndarray        # (n_paths, len(t_eval)) values Y_t
    zeta: np.ndarray        # extinction times, inf if not extinct within the horizon
    hit_time: np.ndarray    # Levy time to hit 0 (= int_0^zeta Y ds), inf if censored
    censored: np.ndarray    # bool
    n_steps: int


def csbp_ensemble(law: StableLaw, y0: float, n_paths: int, seed, t_eval=(), csbp_horizon: float = math.inf,
                  levy_horizon: float = math.inf, h_max: float = math.inf, refine: float = 10.0,
                  x_abs: float | None = None, clock: str = "switch") -> CsbpEnsemble:
    """Run ``n_paths`` independent CSBPs from y0 through the Lamperti clock.

    Paths are advanced in Levy time with the adaptive mesh of
    :func:`sample_adaptive_path`; the CSBP clock is accumulated with the
    left-point rule.  A path stops when it falls below ``x_abs`` (the residual
    extinction time and first-passage time are then drawn exactly), when its
    CSBP clock passes ``csbp_horizon``, or when its Levy time passes
    ``levy_horizon`` (censored).
    """
    if not y0 > 0:
        raise ValueError("y0 must be positive")
    t_eval = np.sort(np.asarray(t_eval, dtype=float))
    if not math.isfinite(csbp_horizon) and not math.isfinite(levy_horizon):
        raise ValueError("need a finite csbp_horizon or levy_horizon")
    if t_eval.size and t_eval[-1] > csbp_horizon:
        raise ValueError("evaluation times exceed csbp_horizon")
    x_abs = 1e-3 * y0 if x_abs is None else x_abs
    y_at = np.zeros((n_paths, t_eval.size))
    zeta = np.full(n_paths, math.inf)
    hit = np.full(n_paths, math.inf)
    cens = np.zeros(n_paths, bool)
    steps = 0
    base = base_seed(seed)
    for j, a, b in _chunked(n_paths, CHUNK):
        rng = stream(base, "csbp_ensemble", j)
        r = _csbp_chunk(law, y0, b - a, rng, t_eval, csbp_horizon, levy_horizon, h_max, refine, x_abs, clock)
        y_at[a:b], zeta[a:b], hit[a:b], cens[a:b] = r[:4]
        steps = max(steps, r[4])
    return CsbpEnsemble(y_at, zeta, hit, cens, steps)


def _csbp_chunk(law, y0, n, rng, t_eval, s_hor, t_hor, h_max, refine, x_abs, clock):
    a, sig = law.alpha, law.sigma
    ne = t_eval.size
    y_at = np.zeros((n, ne))
    zeta = np.full(n, math.inf)
    hit = np.full(n, math.inf)
    cens = np.zeros(n, bool)
    idx = np.arange(n)
    x = np.full(n, float(y0))
    lt = np.zeros(n)       # Levy time
    ck = np.zeros(n)       # CSBP clock
    ptr = np.zeros(n, int)  # next evaluation index
    steps = 0
    while idx.size:
        steps += 1
        dt = np.minimum(h_max, (x / (refine * sig)) ** a)
        if math.isfinite(t_hor):
            dt = np.minimum(dt, np.maximum(t_hor - lt, 0.0) + 1e-300)
        inc = stable_increments(law, dt, rng)
        xn = x + inc
        if clock == "left":
            cmid = ckn = ck + dt / x
        else:
            # one switch from x to xn at a uniform time inside the cell
            th = rng.uniform(0, 1, x.size)
            cmid = ck + th * dt / x
            ckn = cmid + (1 - th) * dt / np.where(xn > 0, xn, x)
        # record Y_t for evaluation times inside [ck, ckn)
        if ne:
            while True:
                te = t_eval[np.minimum(ptr, ne - 1)]
                m = (ptr < ne) & (te < ckn)
                if not m.any():
                    break
                y_at[idx[m], ptr[m]] = np.where(te[m] < cmid[m], x[m], np.maximum(xn[m], 0.0))
                ptr[m] += 1
        lt = lt + dt
        # creeping through 0 inside the cell
        neg = xn <= 0
        low = (~neg) & (xn <= x_abs)
        done = neg | low
        if neg.any():
            gi = idx[neg]
            zeta[gi] = ckn[neg]
            hit[gi] = lt[neg] - dt[neg] + dt[neg] * x[neg] / (x[neg] - xn[neg])
        if low.any():
            gi = idx[low]
            zeta[gi] = ckn[low] + extinction_time(law, xn[low], rng)
            hit[gi] = lt[low] + first_passage_time(law, xn[low], rng)
            # evaluation times in [ckn, zeta): the mass is below x_abs; report it frozen
            for e in range(ne):
                mm = low & (ptr <= e)
                alive = t_eval[e] < zeta[idx[mm]]
                y_at[idx[mm][alive], e] = xn[mm][alive]
        over = (~done) & (ckn >= s_hor)
        if math.isfinite(t_hor):
            tc = (~done) & (lt >= t_hor)
            cens[idx[tc]] = True
            over |= tc
        keep = ~(done | over)
        idx, x, lt, ck, ptr = idx[keep], xn[keep], lt[keep], ckn[keep], ptr[keep]
    return y_at, zeta, hit, cens, steps


def check_exponential_integral(law: StableLaw, y0: float, q: float, n_paths: int, seed,
                               levy_horizon: float | None = None, keep_samples: bool = False, **kw):
    """Monte Carlo E[exp(-q int_0^zeta Y ds)] against exp(-phi(q) y0).

    ``int_0^zeta Y ds`` is the Levy time for X to reach 0.  Censored paths
    (not extinct within ``levy_horizon``) contribute exp(-q * horizon) as an
    upper bound; the returned dict records the censored fraction and flags
    the estimate when it exceeds 1%.
    """
    if not y0 > 0 or not q > 0:
        raise ValueError("y0 and q must be positive")
    if levy_horizon is None:
        levy_horizon = 1e6 * y0 ** law.alpha
    kw.setdefault("h_max", math.inf)
    ens = csbp_ensemble(law, y0, n_paths, seed, levy_horizon=levy_horizon, **kw)
    h = np.where(ens.censored, levy_horizon, ens.hit_time)
    v = np.exp(-q * h)
    frac = float(ens.censored.mean())
    out = {
        "estimate": float(v.mean()),
        "stderr": float(v.std(ddof=1) / math.sqrt(n_paths)),
        "target": float(math.exp(-phi(q, law) * y0)),
        "censored_fraction": frac,
        "flagged": frac > 0.01,
    }
    if keep_samples:
        out["hit_time"], out["censored"] = ens.hit_time, ens.censored
    return out


# --------------------------------------------------------------------------
# discrete excursions: skip-free walk + cycle lemma


@dataclass(frozen=True)
class StepLaw:
    """Walk step law: -1 with prob p, k >= 1 with prob c k**(-1-alpha); mean zero."""

    alpha: float
    c: float
    p: float

    def pmf_up(self, k):
        return self.c * np.asarray(k, dtype=float) ** (-1.0 - self.alpha)


@lru_cache(maxsize=None)
def step_law(alpha: float) -> StepLaw:
    z1, z2 = special.zeta(alpha), special.zeta(1.0 + alpha)
    c = 1.0 / (z1 + z2)
    return StepLaw(alpha, c, c * z1)


def walk_space_scale(law: StableLaw) -> float:
    """kappa with S_{nt} * kappa * n**(-1/alpha) -> X_t (matching Levy densities)."""
    return (law.levy_c / step_law(law.alpha).c) ** (1.0 / law.alpha)


@lru_cache(maxsize=16)
def _bridge_tables(alpha: float, m: int):
    """Row-normalised P_r(v), r = 0..m, v in [-m, m] (index v + m)."""
    sl = step_law(alpha)
    w = 2 * m + 1
    mu = np.zeros(2 * m + 2)           # mu[x + 1], x in [-1, 2m]
    mu[0] = sl.p
    mu[2:] = sl.pmf_up(np.arange(1, 2 * m + 1))
    P = np.zeros((m + 1, w))
    P[0, m] = 1.0
    for r in range(1, m + 1):
        full = np.convolve(P[r - 1], mu)      # index (v_prev + m) + (x + 1)
        # new v = v_prev + x  ->  index (v + m) = (v_prev + m) + (x + 1) - 1
        row = full[1:w + 1]
        P[r] = row / row.max()
    return P, mu


def _sample_walk_excursions(alpha: float, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Integer excursions of length n: array (size, n + 1)."""
    if n == 2:
        out = np.zeros((size, 3), dtype=np.int64)
        out[:, 1] = 1
        return out
    m = n - 1
    P, mu = _bridge_tables(alpha, m)
    sl = step_law(alpha)
    # first step k: weight mu(k) * k * P_m(-k), k in [1, m]
    ks = np.arange(1, m + 1)
    wk = sl.pmf_up(ks) * ks * P[m, m - ks]
    ck = np.cumsum(wk)
    k = ks[np.searchsorted(ck, rng.uniform(0, ck[-1], size), side="right").clip(max=m - 1)]
    # bridge: m steps summing to -k, sequential conditional inverse CDF
    d = -k.copy()                       # remaining required sum
    steps = np.empty((size, m), dtype=np.int64)
    xs = np.arange(-1, 2 * m + 1)
    for i in range(m):
        r = m - i
        prev = P[r - 1]
        # table over required sum d in [-m, m] and step x: mu(x) * P_{r-1}(d - x)
        dv, rows = np.unique(d, return_inverse=True)
        j = dv[:, None] - xs[None, :] + m
        ok = (j >= 0) & (j < 2 * m + 1)
        tab = np.where(ok, mu[None, :] * prev[np.clip(j, 0, 2 * m)], 0.0)
        cum = np.cumsum(tab, axis=1)
        tot = cum[:, -1:]
        cum = np.divide(cum, tot, out=np.zeros_like(cum), where=tot > 0)
        cum[:, -1] = 1.0
        flat = (cum + np.arange(dv.size)[:, None]).ravel()
        u = rng.uniform(0, 1, size)
        u = np.where(u <= 0, 1e-300, u)
        pos = np.searchsorted(flat, rows + u, side="left")
        x = xs[pos - rows * xs.size]
        steps[:, i] = x
        d = d - x
    if np.any(d != 0):
        raise RuntimeError("bridge sampler failed to hit its target sum")
    # rotate to a uniformly chosen good rotation (exactly k of them)
    S = np.concatenate((np.zeros((size, 1), np.int64), np.cumsum(steps, axis=1)), axis=1)
    pre = np.minimum.accumulate(S[:, :-1], axis=1)   # min S_0..S_j
    cond1 = np.ones((size, m), bool)
    cond1[:, 1:] = S[:, 1:m] < pre[:, :-1]
    suf = np.minimum.accumulate(S[:, ::-1], axis=1)[:, ::-1]   # min S_j..S_m
    cond2 = np.empty((size, m), bool)
    cond2[:, 1:] = suf[:, 2:] > (S[:, 1:m] - k[:, None])
    cond2[:, 0] = (S[:, 1:m].min(axis=1, initial=np.iinfo(np.int64).max) > -k) if m > 1 else True
    good = cond1 & cond2
    ng = good.sum(axis=1)
    if np.any(ng != k):
        raise RuntimeError("cycle lemma violated: good rotations != k")
    pick = np.floor(rng.uniform(0, 1, size) * k).astype(np.int64)
    rank = np.cumsum(good, axis=1) - 1
    start = np.argmax(good & (rank == pick[:, None]), axis=1)
    col = (start[:, None] + np.arange(m)[None, :]) % m
    rot = np.take_along_axis(steps, col, axis=1)
    out = np.zeros((size, n + 1), dtype=np.int64)
    out[:, 1] = k
    out[:, 2:] = k[:, None] + np.cumsum(rot, axis=1)
    return out


def walk_excursion_pmf_oracle(alpha: float, n: int):
    """Brute force: all length-n excursions with their normalised probabilities."""
    sl = step_law(alpha)
    out = []

    def rec(path, prob):
        cur = path[-1]
        left = n - (len(path) - 1)
        if left == 0:
            if cur == 0:
                out.append((tuple(path), prob))
            return
        # down step
        if cur - 1 > 0 or (cur - 1 == 0 and left == 1):
            rec(path + [cur - 1], prob * sl.p)
        # up steps: must still be able to return within left-1 steps
        for kk in range(1, left):
            if cur + kk - (left - 1) > 0:
                break
            rec(path + [cur + kk], prob * float(sl.pmf_up(kk)))

    rec([0], 1.0)
    tot = sum(p for _, p in out)
    return [(p, w / tot) for p, w in out]


def sample_normalized_excursions(law: StableLaw, n_steps: int, size: int, seed) -> np.ndarray:
    """Integer walk excursions of length n_steps, shape (size, n_steps + 1)."""
    if n_steps < 2:
        raise ValueError("n_steps must be at least 2")
    out = np.empty((size, n_steps + 1), dtype=np.int64)
    base = base_seed(seed)
    for j, a, b in _chunked(size, CHUNK):
        out[a:b] = _sample_walk_excursions(law.alpha, n_steps, b - a, stream(base, "walk_excursion", n_steps, j))
    return out


def walk_to_excursion(law: StableLaw, walk: np.ndarray, lifetime: float = 1.0) -> Excursion:
    """Rescale an integer excursion to lifetime T: time i T/n, space kappa (n/T)**(-1/alpha)."""
    walk = np.asarray(walk)
    n = walk.size - 1
    times = np.arange(n + 1) * (lifetime / n)
    times[-1] = lifetime
    sp = walk_space_scale(law) * (n / lifetime) ** (-1.0 / law.alpha)
    vals = walk * sp
    up = np.flatnonzero(np.diff(walk) > 0)
    jumps = np.column_stack((times[up + 1], np.diff(walk)[up] * sp))
    return Excursion(CadlagPath(times, vals, jumps), float(lifetime))


def sample_normalized_excursion(law: StableLaw, n_steps: int, seed) -> Excursion:
    """One excursion of lifetime 1 from the conditioned skip-free walk."""
    w = sample_normalized_excursions(law, n_steps, 1, seed)[0]
    return walk_to_excursion(law, w, 1.0)


class WeightedExcursion(NamedTuple):
    excursion: Excursion
    weight: float


def lifetime_mass(law: StableLaw, t_min: float, t_max: float) -> float:
    """Mass of t**(-1-1/alpha) dt on [t_min, t_max] (lifetime constant set to 1)."""
    b = 1.0 / law.alpha
    return (t_min ** -b - t_max ** -b) / b


def sample_lifetimes(law: StableLaw, t_min: float, t_max: float, size: int, rng) -> np.ndarray:
    if not (0 < t_min < t_max):
        raise ValueError("need 0 < t_min < t_max")
    b = 1.0 / law.alpha
    u = rng.uniform(0, 1, size)
    lo, hi = t_min ** -b, t_max ** -b
    return (lo - u * (lo - hi)) ** (-1.0 / b)


def sample_ito_excursion(law: StableLaw, t_min: float, t_max: float, n_per_unit: int, seed) -> WeightedExcursion:
    """Excursion from the Ito measure restricted to lifetimes in [t_min, t_max].

    The lifetime density is proportional to t**(-1-1/alpha); the normalised
    excursion uses ``n_per_unit`` walk steps (steps per unit normalised
    lifetime) and is rescaled to lifetime T.  The weight is the restricted
    mass, so weighted averages estimate integrals against the measure.
    """
    if not (0 < t_min < t_max):
        raise ValueError("need 0 < t_min < t_max")
    base = base_seed(seed)
    T = float(sample_lifetimes(law, t_min, t_max, 1, stream(base, "ito_lifetime"))[0])
    w = sample_normalized_excursions(law, n_per_unit, 1, stream(base, "ito_shape"))[0]
    return WeightedExcursion(walk_to_excursion(law, w, T), lifetime_mass(law, t_min, t_max))
