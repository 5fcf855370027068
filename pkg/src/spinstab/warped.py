"""Warped-product metrics (1 - 2m(r)/r)^(-1) dr^2 + r^2 ds^2 + g(r) on R^3 x M.

The radial mass profile m(r) and a one-parameter family of fiber metrics
g_s determine the geometry; the scalar curvature and Ricci components come
from closed-form expressions in (m, m', g', g'') which are validated
against an independent finite-difference curvature oracle in coordinates.
The negative-mass construction assembles a piecewise profile (cubic core,
Hermite transition, linear ramp, inverse-radius tail) whose scan certifies
nonnegative scalar curvature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class HorizonError(ValueError):
    """2 m(r) >= r: the radial coordinate patch degenerates."""


# ---------------------------------------------------------------------------
# radial mass profiles
# ---------------------------------------------------------------------------

class MassProfile:
    """Base: m(r) and m'(r) evaluable, with a finite limit at infinity."""

    m_inf: float = 0.0
    breakpoints: tuple = ()

    def m(self, r):
        raise NotImplementedError

    def dm(self, r):
        raise NotImplementedError

    def check_horizon(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(2.0 * self.m(r) >= r):
            raise HorizonError("2 m(r) >= r in the requested range")

    def to_json_obj(self):
        return {"kind": type(self).__name__, "m_inf": self.m_inf,
                "breakpoints": list(self.breakpoints)}


class ZeroMass(MassProfile):
    def m(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def dm(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


class ConstantMass(MassProfile):
    """m(r) = m0 away from the center (time-symmetric Schwarzschild slice)."""

    def __init__(self, m0: float):
        self.m0 = float(m0)
        self.m_inf = float(m0)

    def m(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.m0)

    def dm(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


class InverseTail(MassProfile):
    """m(r) = m_inf - c / r; decays at the generic order-one rate."""

    def __init__(self, m_inf: float, c: float):
        self.m_inf = float(m_inf)
        self.c = float(c)

    def m(self, r):
        r = np.asarray(r, dtype=float)
        return self.m_inf - self.c / r

    def dm(self, r):
        r = np.asarray(r, dtype=float)
        return self.c / r**2


def _smoothstep(u):
    return u * u * (3.0 - 2.0 * u)


def _smoothstep_d(u):
    return 6.0 * u * (1.0 - u)


@dataclass
class _Segment:
    lo: float
    hi: float
    m: callable
    dm: callable


class StabilityMassProfile(MassProfile):
    """The negative-mass profile of the nonnegative-scalar construction.

    Segments: m = -(a0/12) r^3 on [0, r1]; a cubic Hermite on [r1, r1+1]
    with equal endpoint values and slopes -(a0/4) r1^2 -> +(a0/2) r1^2
    (its derivative a0 r1^2 (3 t^2 - 1)/4... stays >= -(a0/4) r^2); a linear
    ramp of slope (a0/2) r1^2 on [r2, r3]; and the monotone tail
    m_inf - (m_inf - m(r3)) r3 / r.  Values: m(r3) = -(1/84) a0 r1^3 and
    m_inf = -(1/168) a0 r1^3.  A smoothstep blend of relative width `mollify`
    restores continuity of m' at the one genuinely kinked join (r3); the
    other joins are C^1 by construction and left untouched.
    """

    def __init__(self, a0: float, r1: float | None = None, mollify: float = 0.01):
        if a0 <= 0:
            raise ValueError("a0 must be positive")
        self.a0 = float(a0)
        self.r1 = float(r1) if r1 is not None else float(
            max(7, int(np.ceil(126.0 / np.sqrt(a0)))))
        if self.r1 < 7:
            raise ValueError("r1 >= 7 required for the lower-bound constants")
        self.r2 = self.r1 + 1.0
        self.r3 = self.r2 + self.r1 / 7.0
        self.slope_lin = 0.5 * self.a0 * self.r1**2
        self.m_r1 = -(self.a0 / 12.0) * self.r1**3
        self.m_r3 = self.m_r1 + self.slope_lin * (self.r3 - self.r2)
        self.m_inf = -(1.0 / 168.0) * self.a0 * self.r1**3
        self.width = mollify * self.r1
        self.breakpoints = (self.r1, self.r2, self.r3)
        a0_, r1_ = self.a0, self.r1

        def core(r):
            return -(a0_ / 12.0) * r**3

        def dcore(r):
            return -(a0_ / 4.0) * r**2

        # Hermite data: values equal, slopes -(a0/4) r1^2 -> slope_lin
        s_in = -(a0_ / 4.0) * r1_**2
        s_out = self.slope_lin

        def hermite(r):
            t = r - r1_  # interval length 1
            h10 = t**3 - 2 * t**2 + t
            h11 = t**3 - t**2
            return self.m_r1 + s_in * h10 + s_out * h11

        def dhermite(r):
            t = r - r1_
            return s_in * (3 * t**2 - 4 * t + 1) + s_out * (3 * t**2 - 2 * t)

        def linear(r):
            return self.m_r1 + self.slope_lin * (r - self.r2)

        def dlinear(r):
            return np.full_like(np.asarray(r, dtype=float), self.slope_lin)

        def tail(r):
            return self.m_inf - (self.m_inf - self.m_r3) * (self.r3 / r)

        def dtail(r):
            return (self.m_inf - self.m_r3) * self.r3 / r**2

        self._segments = [
            _Segment(0.0, self.r1, core, dcore),
            _Segment(self.r1, self.r2, hermite, dhermite),
            _Segment(self.r2, self.r3, linear, dlinear),
            _Segment(self.r3, np.inf, tail, dtail),
        ]

    def _piecewise(self, r, which: str):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for seg in self._segments:
            mask = (r >= seg.lo) & (r < seg.hi)
            if np.any(mask):
                out[mask] = getattr(seg, which)(r[mask])
        # smoothstep blend across joins whose slopes disagree
        for idx in range(len(self._segments) - 1):
            left, right = self._segments[idx], self._segments[idx + 1]
            b = left.hi
            if abs(float(left.dm(b)) - float(right.dm(b))) < 1e-14 * (1 + abs(float(left.dm(b)))):
                continue
            w = self.width
            mask = (r > b - w) & (r < b + w)
            if not np.any(mask):
                continue
            u = (r[mask] - (b - w)) / (2 * w)
            s = _smoothstep(u)
            if which == "m":
                out[mask] = (1 - s) * left.m(r[mask]) + s * right.m(r[mask])
            else:
                ds = _smoothstep_d(u) / (2 * w)
                out[mask] = ((1 - s) * left.dm(r[mask]) + s * right.dm(r[mask])
                             + ds * (right.m(r[mask]) - left.m(r[mask])))
        return out

    def m(self, r):
        scalar = np.isscalar(r)
        out = self._piecewise(np.atleast_1d(r), "m")
        return float(out[0]) if scalar else out

    def dm(self, r):
        scalar = np.isscalar(r)
        out = self._piecewise(np.atleast_1d(r), "dm")
        return float(out[0]) if scalar else out

    def to_json_obj(self):
        return {
            "kind": "StabilityMassProfile",
            "a0": self.a0,
            "r1": self.r1, "r2": self.r2, "r3": self.r3,
            "linear_slope": self.slope_lin,
            "m_r3": self.m_r3,
            "m_inf": self.m_inf,
            "mollify_width": self.width,
        }


# ---------------------------------------------------------------------------
# fiber families
# ---------------------------------------------------------------------------

class FiberFamily:
    """Path s in [0, 1] of fiber metrics with closed-form s-derivatives.

    Subclasses provide the metric block in a fixed chart together with its
    first two s-derivatives, the scalar curvature and the Ricci tensor.
    """

    dim: int

    def metric(self, s: float, q) -> np.ndarray:
        raise NotImplementedError

    def dmetric(self, s: float, q) -> np.ndarray:
        raise NotImplementedError

    def d2metric(self, s: float, q) -> np.ndarray:
        raise NotImplementedError

    def scalar(self, s: float, q) -> float:
        raise NotImplementedError

    def ricci(self, s: float, q) -> np.ndarray:
        raise NotImplementedError

    def sample_points(self):
        raise NotImplementedError

    def sample_s(self, count: int = 33):
        return np.linspace(0.0, 1.0, count)


def _stereographic_conformal(q) -> float:
    q = np.asarray(q, dtype=float)
    return 2.0 / (1.0 + float(q @ q))


class ConformalSphereFamily(FiberFamily):
    """Round 2-spheres of radius f(s), in the stereographic chart.

    Metric block f(s)^2 rho(q)^2 I with rho = 2 / (1 + |q|^2); the scalar
    curvature is 2 / f(s)^2 and the Ricci tensor rho^2 I is independent
    of the radius.
    """

    dim = 2

    def __init__(self, f, df, d2f):
        self.f, self.df, self.d2f = f, df, d2f

    @classmethod
    def smooth_radius_path(cls, r_start: float, r_end: float):
        """Radius moving from r_start (s=0) to r_end (s=1) along a smoothstep
        (endpoint derivatives vanish, so radial schedules stay C^1)."""
        delta = r_end - r_start

        def f(s):
            return r_start + delta * _smoothstep(s)

        def df(s):
            return delta * _smoothstep_d(s)

        def d2f(s):
            return delta * (6.0 - 12.0 * s)

        return cls(f, df, d2f)

    @classmethod
    def constant(cls, radius: float):
        return cls(lambda s: radius, lambda s: 0.0, lambda s: 0.0)

    def metric(self, s, q):
        rho = _stereographic_conformal(q)
        return (self.f(s) * rho) ** 2 * np.eye(2)

    def dmetric(self, s, q):
        rho = _stereographic_conformal(q)
        return 2.0 * self.f(s) * self.df(s) * rho**2 * np.eye(2)

    def d2metric(self, s, q):
        rho = _stereographic_conformal(q)
        return 2.0 * (self.df(s) ** 2 + self.f(s) * self.d2f(s)) * rho**2 * np.eye(2)

    def scalar(self, s, q):
        return 2.0 / self.f(s) ** 2

    def ricci(self, s, q):
        rho = _stereographic_conformal(q)
        return rho**2 * np.eye(2)

    def sample_points(self):
        return [np.array([0.0, 0.0]), np.array([0.6, -0.2]),
                np.array([-1.1, 0.8]), np.array([0.3, 1.4])]

    def to_json_obj(self):
        return {"kind": "ConformalSphereFamily",
                "radius": [self.f(0.0), self.f(1.0)]}


class FlatTorusConformalFamily(FiberFamily):
    """g_s = c(s)^2 delta on a k-torus: scalar flat for every s."""

    def __init__(self, k: int, c, dc, d2c):
        self.dim = k
        self.c, self.dc, self.d2c = c, dc, d2c

    def metric(self, s, q):
        return self.c(s) ** 2 * np.eye(self.dim)

    def dmetric(self, s, q):
        return 2.0 * self.c(s) * self.dc(s) * np.eye(self.dim)

    def d2metric(self, s, q):
        return 2.0 * (self.dc(s) ** 2 + self.c(s) * self.d2c(s)) * np.eye(self.dim)

    def scalar(self, s, q):
        return 0.0

    def ricci(self, s, q):
        return np.zeros((self.dim, self.dim))

    def sample_points(self):
        return [np.zeros(self.dim), 0.3 * np.ones(self.dim)]

    def to_json_obj(self):
        return {"kind": "FlatTorusConformalFamily", "k": self.dim,
                "scale": [self.c(0.0), self.c(1.0)]}


class ReparametrizedFamily(FiberFamily):
    """The family s -> g_(eps s), used to shrink the traversed arc."""

    def __init__(self, base: FiberFamily, eps: float):
        self.base = base
        self.eps = float(eps)
        self.dim = base.dim

    def metric(self, s, q):
        return self.base.metric(self.eps * s, q)

    def dmetric(self, s, q):
        return self.eps * self.base.dmetric(self.eps * s, q)

    def d2metric(self, s, q):
        return self.eps**2 * self.base.d2metric(self.eps * s, q)

    def scalar(self, s, q):
        return self.base.scalar(self.eps * s, q)

    def ricci(self, s, q):
        return self.base.ricci(self.eps * s, q)

    def sample_points(self):
        return self.base.sample_points()

    def to_json_obj(self):
        return {"kind": "ReparametrizedFamily", "eps": self.eps,
                "base": self.base.to_json_obj()}


# ---------------------------------------------------------------------------
# admissibility and the lower bound
# ---------------------------------------------------------------------------

COND_BOUND = 1.0 / 200.0


@dataclass
class AdmissibilityReport:
    c1: float
    c2: float
    c3: float
    s_minus: float
    a0: float
    passed: bool
    violations: list

    def to_json_obj(self):
        return {
            "C1": self.c1, "C2": self.c2, "C3": self.c3,
            "S_minus": self.s_minus, "a0": self.a0,
            "bound": COND_BOUND, "passed": self.passed,
            "violations": self.violations,
        }


def admissibility_check(family: FiberFamily, s_count: int = 65) -> AdmissibilityReport:
    """Constants of the contraction bounds and the negative-scalar margin.

    C1 = max |d_s g . d_s g^(-1)|, C2 = max |tr(g^-1 d_s g)|,
    C3 = max |d_s tr(g^-1 d_s g)|, each required <= 1/200; and
    max(0, -S(g_s)) <= a0 / 10 where a0 = min_q S(g_1) > 0.
    """
    c1 = c2 = c3 = s_minus = 0.0
    a0 = np.inf
    for q in family.sample_points():
        for s in family.sample_s(s_count):
            g = family.metric(s, q)
            gi = np.linalg.inv(g)
            gs = family.dmetric(s, q)
            gss = family.d2metric(s, q)
            a = gi @ gs
            # d_s g_ab d_s g^ab = -tr((g^-1 g_s)^2)
            c1 = max(c1, abs(-float(np.trace(a @ a))))
            c2 = max(c2, abs(float(np.trace(a))))
            gp2 = float(np.trace(-a @ a + gi @ gss))
            c3 = max(c3, abs(gp2))
            s_minus = max(s_minus, max(0.0, -family.scalar(s, q)))
        a0 = min(a0, family.scalar(1.0, q))
    violations = []
    for name, val in (("C1", c1), ("C2", c2), ("C3", c3)):
        if val > COND_BOUND:
            violations.append(f"{name} = {val:.3e} > 1/200")
    if not a0 > 0:
        violations.append(f"S(g_1) = {a0:.3e} not positive")
    elif s_minus > a0 / 10.0:
        violations.append(f"S^- = {s_minus:.3e} > a0/10 = {a0 / 10:.3e}")
    return AdmissibilityReport(c1, c2, c3, s_minus, a0, not violations, violations)


# ---------------------------------------------------------------------------
# the warped metric
# ---------------------------------------------------------------------------

@dataclass
class WarpedMetric:
    """Mass profile plus a radial fiber schedule on R^3 x M.

    The fiber is g_1 for r <= r2, the reparametrized family
    g_((r3 - r)/(r3 - r2)) for r2 <= r <= r3, and g_0 beyond r3.  When
    r2/r3 are None the fiber is frozen at s_frozen for all radii.
    """

    profile: MassProfile
    family: FiberFamily
    r2: float | None = None
    r3: float | None = None
    s_frozen: float = 0.0

    @property
    def fiber_dim(self) -> int:
        return self.family.dim

    def schedule(self, r: float):
        """(s, ds/dr) at radius r."""
        if self.r2 is None:
            return self.s_frozen, 0.0
        if r <= self.r2:
            return 1.0, 0.0
        if r >= self.r3:
            return 0.0, 0.0
        span = self.r3 - self.r2
        return (self.r3 - r) / span, -1.0 / span

    def fiber_data(self, r: float, q):
        """Fiber block with its first two radial derivatives at (r, q)."""
        s, dsdr = self.schedule(r)
        g = self.family.metric(s, q)
        gs = self.family.dmetric(s, q)
        gss = self.family.d2metric(s, q)
        return g, dsdr * gs, dsdr**2 * gss, s

    def radial_invariants(self, r: float, q):
        """(g', g'', Q2, S_M) with g' = tr(g^-1 d_r g), Q2 = tr((g^-1 d_r g)^2)."""
        g, gr, grr, s = self.fiber_data(r, q)
        gi = np.linalg.inv(g)
        a = gi @ gr
        gp = float(np.trace(a))
        q2 = float(np.trace(a @ a))
        gpp = float(np.trace(-a @ a + gi @ grr))
        return gp, gpp, q2, self.family.scalar(s, q)

    def to_json_obj(self):
        return {
            "profile": self.profile.to_json_obj(),
            "family": self.family.to_json_obj(),
            "r2": self.r2, "r3": self.r3, "s_frozen": self.s_frozen,
            "fiber_dim": self.fiber_dim,
        }


def warped_scalar(w: WarpedMetric, r: float, q) -> float:
    """Scalar curvature of the warped metric at radius r and fiber point q."""
    m = float(w.profile.m(r))
    if 2.0 * m >= r:
        raise HorizonError(f"2 m(r) = {2 * m:.3e} >= r = {r:.3e}")
    dm = float(w.profile.dm(r))
    gp, gpp, q2, s_m = w.radial_invariants(r, q)
    lapse = 1.0 - 2.0 * m / r
    return (
        s_m
        + dm * (4.0 / r**2 + gp / r)
        - (m / r**2) * gp
        - lapse * (gpp + 2.0 * gp / r + 0.25 * gp**2 + 0.25 * q2)
    )


def warped_ricci(w: WarpedMetric, r: float, q) -> dict:
    """Ricci components in the orthonormal-radial / sphere / fiber split."""
    m = float(w.profile.m(r))
    if 2.0 * m >= r:
        raise HorizonError(f"2 m(r) = {2 * m:.3e} >= r = {r:.3e}")
    dm = float(w.profile.dm(r))
    lapse = 1.0 - 2.0 * m / r
    g, gr, grr, s = w.fiber_data(r, q)
    gi = np.linalg.inv(g)
    a = gi @ gr
    gp = float(np.trace(a))
    q2 = float(np.trace(a @ a))
    gpp = float(np.trace(-a @ a + gi @ grr))

    r00 = (2.0 * (-m / r**3 + dm / r**2) + 0.5 * (dm * r - m) / r**2 * gp
           - 0.5 * lapse * gpp - 0.25 * lapse * q2)
    rii = m / r + dm - 0.5 * r * lapse * gp
    d_mat = grr - gr @ gi @ gr  # d/dr[g_as,r g^ls] g_lb
    rab = (0.5 * (dm * r - m) / r**2 * gr
           - 0.5 * lapse * d_mat
           - 0.25 * lapse * gp * gr
           - (1.0 / r) * lapse * gr
           + w.family.ricci(s, q))
    trace = r00 + 2.0 * rii / r**2 + float(np.trace(gi @ rab))
    return {"R00": r00, "Rii": rii, "Rab": rab, "trace": trace}


# ---------------------------------------------------------------------------
# finite-difference curvature oracle
# ---------------------------------------------------------------------------

def _fd_tables(fn, x0, steps):
    """4th-order first and second derivatives of a matrix function."""
    d = len(x0)
    g0 = fn(x0)
    cache = {}

    def ev(offsets):
        key = tuple(offsets)
        if key not in cache:
            x = np.array(x0, dtype=float)
            for ax, mult in offsets:
                x[ax] += mult * steps[ax]
            cache[key] = fn(x)
        return cache[key]

    w1 = {-2: 1.0 / 12, -1: -8.0 / 12, 1: 8.0 / 12, 2: -1.0 / 12}
    dg = np.zeros((d,) + g0.shape)
    for a in range(d):
        acc = np.zeros_like(g0)
        for mult, wgt in w1.items():
            acc += wgt * ev(((a, mult),))
        dg[a] = acc / steps[a]
    d2g = np.zeros((d, d) + g0.shape)
    w2 = {-2: -1.0 / 12, -1: 16.0 / 12, 0: -30.0 / 12, 1: 16.0 / 12, 2: -1.0 / 12}
    for a in range(d):
        acc = np.zeros_like(g0)
        for mult, wgt in w2.items():
            acc += wgt * (g0 if mult == 0 else ev(((a, mult),)))
        d2g[a, a] = acc / steps[a] ** 2
    for a in range(d):
        for b in range(a + 1, d):
            acc = np.zeros_like(g0)
            for ma, wa in w1.items():
                for mb, wb in w1.items():
                    acc += wa * wb * ev(((a, ma), (b, mb)))
            d2g[a, b] = d2g[b, a] = acc / (steps[a] * steps[b])
    return g0, dg, d2g


def scalar_curvature_fd(fn, x0, steps) -> float:
    """Scalar curvature of the metric function fn at x0 by finite differences."""
    g0, dg, d2g = _fd_tables(fn, np.asarray(x0, dtype=float), steps)
    gi = np.linalg.inv(g0)
    dgi = -np.einsum("kl,alm,mn->akn", gi, dg, gi)
    # Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
    br = dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (1, 2, 0))
    gam = 0.5 * np.einsum("kl,ijl->kij", gi, br)
    # d_a Gamma^k_ij
    dbr = (d2g + np.transpose(d2g, (0, 2, 1, 3)) - np.transpose(d2g, (0, 2, 3, 1)))
    dgam = 0.5 * (np.einsum("akl,ijl->akij", dgi, br)
                  + np.einsum("kl,aijl->akij", gi, dbr))
    ric = (np.einsum("iijk->jk", dgam) - np.einsum("jiik->jk", dgam)
           + np.einsum("iim,mjk->jk", gam, gam)
           - np.einsum("ijm,mik->jk", gam, gam))
    return float(np.einsum("jk,jk->", gi, ric))


def warped_metric_function(w: WarpedMetric):
    """Coordinate metric (r, two stereographic sphere coords, fiber coords)."""
    k = w.fiber_dim

    def fn(x):
        r = x[0]
        p = x[1:3]
        q = x[3:3 + k]
        m = float(w.profile.m(r))
        lapse = 1.0 - 2.0 * m / r
        if lapse <= 0:
            raise HorizonError(f"horizon reached at r = {r}")
        out = np.zeros((3 + k, 3 + k))
        out[0, 0] = 1.0 / lapse
        sigma = _stereographic_conformal(p)
        out[1, 1] = out[2, 2] = (r * sigma) ** 2
        s, _ = w.schedule(r)
        out[3:, 3:] = w.family.metric(s, q)
        return out

    return fn


def fd_curvature_oracle(w: WarpedMetric, r: float, q, base_rel_step: float = 1e-3) -> dict:
    """Independent scalar-curvature estimate with a Richardson error bar.

    The sample must sit away from r = 0 and from the schedule breakpoints
    by at least ten steps so that the stencil sees a smooth metric.
    """
    fn = warped_metric_function(w)
    k = w.fiber_dim
    p = np.array([0.35, -0.15])
    x0 = np.concatenate([[r], p, np.asarray(q, dtype=float)])
    steps = np.concatenate([
        [base_rel_step * r], base_rel_step * 2.0 * np.ones(2),
        base_rel_step * 2.0 * np.ones(k)])
    guard = 10.0 * 2.0 * steps[0]
    for b in (0.0,) + tuple(w.profile.breakpoints) + (
            (w.r2, w.r3) if w.r2 is not None else ()):
        if b is not None and abs(r - b) < guard:
            raise ValueError(
                f"sample r = {r} is within 10 steps of breakpoint {b}")
    s_full = scalar_curvature_fd(fn, x0, steps)
    s_half = scalar_curvature_fd(fn, x0, steps / 2.0)
    estimate = (16.0 * s_half - s_full) / 15.0
    # |diff|/15 bounds the Richardson truncation error, but roundoff in the
    # second-difference tables is correlated between the levels and does not
    # show up there; the floor models machine noise amplified by 1/h^2 and
    # the size of the Christoffel products (lapse^-1 ~ metric anisotropy).
    m = float(w.profile.m(r))
    aniso = 1.0 / (1.0 - 2.0 * m / r)
    roundoff = 1e-16 * (1.0 + abs(aniso)) / base_rel_step**2 * 4.0
    error_bar = abs(s_half - s_full) / 3.0 + roundoff
    return {"estimate": estimate, "error_bar": error_bar,
            "coarse": s_full, "fine": s_half}


# ---------------------------------------------------------------------------
# the nonnegative-scalar, negative-mass construction
# ---------------------------------------------------------------------------

@dataclass
class ConstructionCertificate:
    min_scalar: float
    argmin_r: float
    argmin_q_index: int
    min_lapse_margin: float
    scan_radii: np.ndarray
    passed: bool


class ConstructionError(RuntimeError):
    pass


SCAN_FLOOR = -1e-9


def construct_negative_mass(family: FiberFamily, scan_points: int = 4000,
                            r_max_factor: float = 4.0) -> tuple:
    """Assemble the warped metric of the nonnegative-scalar construction.

    Requires the admissibility bounds; returns (metric, certificate) where
    the certificate records the scanned minimum of the scalar curvature
    over (0, r_max_factor * r3] times the fiber samples.
    """
    report = admissibility_check(family)
    if not report.passed:
        raise ConstructionError(
            "fiber family fails admissibility: " + "; ".join(report.violations))
    profile = StabilityMassProfile(report.a0)
    metric = WarpedMetric(profile=profile, family=family,
                          r2=profile.r2, r3=profile.r3)
    cert = scan_scalar_positivity(metric, scan_points, r_max_factor)
    if not cert.passed:
        raise ConstructionError(
            f"positivity scan failed: min scalar {cert.min_scalar:.3e} at "
            f"r = {cert.argmin_r:.6g}, fiber sample {cert.argmin_q_index}")
    return metric, cert


def scan_scalar_positivity(w: WarpedMetric, scan_points: int = 4000,
                           r_max_factor: float = 4.0) -> ConstructionCertificate:
    r_top = r_max_factor * (w.r3 if w.r3 is not None else 10.0)
    radii = np.linspace(r_top / scan_points, r_top, scan_points)
    points = w.family.sample_points()
    worst = np.inf
    arg_r, arg_q = radii[0], 0
    min_margin = np.inf
    for qi, q in enumerate(points):
        vals = np.array([warped_scalar(w, r, q) for r in radii])
        i = int(np.argmin(vals))
        if vals[i] < worst:
            worst, arg_r, arg_q = float(vals[i]), float(radii[i]), qi
    margins = radii - 2.0 * np.asarray(w.profile.m(radii))
    min_margin = float(margins.min())
    return ConstructionCertificate(
        min_scalar=worst, argmin_r=arg_r, argmin_q_index=arg_q,
        min_lapse_margin=min_margin, scan_radii=radii,
        passed=(worst >= SCAN_FLOOR) and (min_margin > 0.0))


def scalar_lower_bound(report: AdmissibilityReport, w: WarpedMetric, r: float) -> dict:
    """The transition-region lower bound with its A(r), B(r) coefficients.

    Valid for r2 <= r <= r3; under the 1/200 bounds and r1 >= 7 the
    coefficients satisfy |A| <= 3 and |B| <= 1.
    """
    profile = w.profile
    if not isinstance(profile, StabilityMassProfile):
        raise ValueError("bound applies to the constructed profile")
    r1, r2, r3 = profile.r1, profile.r2, profile.r3
    if not (r2 <= r <= r3):
        raise ValueError(f"r = {r} outside the transition region [{r2}, {r3}]")
    c1, c2, c3 = report.c1, report.c2, report.c3
    span = r3 - r2
    a_r = (c2 * r / span
           + (5.0 * c2 / 3.0 + (4.0 * c3 + c1 + c2**2) / 6.0 * (r / span))
           * abs(-r1 + 3.0 * (r - r2)) / span)
    b_r = (c1 + 4.0 * c3 + c2**2) / 4.0 + 2.0 * c2 * span / r
    s_here, _ = w.schedule(r)
    s_minus = max(
        0.0,
        -min(w.family.scalar(s_here, q) for q in w.family.sample_points()),
    )
    bound = (-s_minus + (report.a0 / 4.0) * (r1**2 / r**2) * (4.0 - a_r)
             - b_r / span**2)
    return {"A": a_r, "B": b_r, "bound": bound}


def mass_and_order(w: WarpedMetric, radii=None) -> dict:
    """Mass read off the profile plus the fitted asymptotic decay order.

    The deviation from the product metric is the sup of the radial lapse
    deviation and the fiber-block deviation from g(infinity), measured on
    dyadic radii; the log-log slope estimates the decay order (1 for a
    mass-type tail).
    """
    prof = w.profile
    m_inf = prof.m_inf
    if radii is None:
        # the mass term dominates the deviation only once r >> 2 |m|
        base = max(w.r3 if w.r3 is not None else 10.0, 16.0 * abs(m_inf), 10.0)
        radii = base * 2.0 ** np.arange(1, 8)
    radii = np.asarray(radii, dtype=float)
    devs = []
    points = w.family.sample_points()
    g_limits = [w.family.metric(w.schedule(radii[-1] * 4)[0], q) for q in points]
    for r in radii:
        m = float(prof.m(r))
        dev = abs(1.0 / (1.0 - 2.0 * m / r) - 1.0)
        s, _ = w.schedule(r)
        for q, g_lim in zip(points, g_limits):
            diff = w.family.metric(s, q) - g_lim
            dev = max(dev, float(np.abs(diff).max()))
        devs.append(dev)
    devs = np.asarray(devs)
    if np.all(devs == 0.0):
        return {"mass": m_inf, "order": np.inf, "radii": radii, "deviations": devs}
    good = devs > 0
    slope, _ = np.polyfit(np.log(radii[good]), np.log(devs[good]), 1)
    return {"mass": m_inf, "order": -float(slope), "radii": radii,
            "deviations": devs}


def construct_from_positive_path(family: FiberFamily, eps_floor: float = 1e-6,
                                 scan_points: int = 4000) -> dict:
    """Shrink the traversed arc until admissibility holds, then construct.

    Requires S(g_0) >= 0 and S(g_s) > 0 strictly for s in (0, 1); the
    returned record carries the chosen eps and the construction outputs.
    """
    s_interior = np.linspace(0.0, 1.0, 33)
    for q in family.sample_points():
        if family.scalar(0.0, q) < 0:
            raise ConstructionError("S(g_0) must be nonnegative")
        for s in s_interior[1:]:
            if family.scalar(s, q) <= 0:
                raise ConstructionError(
                    f"S(g_s) must be strictly positive on (0, 1]; fails at s = {s}")
    eps = 1.0
    trace = []
    while eps >= eps_floor:
        candidate = ReparametrizedFamily(family, eps)
        report = admissibility_check(candidate)
        trace.append({"eps": eps, "passed": report.passed,
                      "violations": report.violations})
        if report.passed:
            metric, cert = construct_negative_mass(candidate, scan_points)
            return {"eps": eps, "metric": metric, "certificate": cert,
                    "admissibility": report, "trace": trace}
        eps *= 0.5
    raise ConstructionError(
        f"no admissible reparametrization above eps = {eps_floor}")
