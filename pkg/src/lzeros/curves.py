"""Geometry of g(z) = log((z^3 - z)/(z^3 - 1)) on circles |z| = p^sigma.

Since log(zeta(3s)/zeta(2s)) = sum_p g(p^s), the value set of that quotient
is controlled by the vectorial (Minkowski) sum of the image curves
C_{p,sigma} of the arcs |theta| <= arccos(-1/(2r)), r = p^sigma. This module
samples those curves, certifies their convexity, computes support
functions, and turns the outer/inner support estimates into the
imaginary-reach bounds that decide whether zeta^k(2s) + zeta^k(3s) vanishes.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, FormulaMismatchError
from .primes import primes_upto

CLAIMED_LOWER_REACH = 0.36
CLAIMED_UPPER_REACH = 0.61966
DEFAULT_SIGMA_GRID = (1.0,) + tuple(1 + 10.0**-m for m in range(1, 7))


def g(z):
    """Principal branch of log((z^3 - z)/(z^3 - 1))."""
    z = np.asarray(z, dtype=complex)
    return np.log((z**3 - z) / (z**3 - 1))


def g_prime(z):
    z = np.asarray(z, dtype=complex)
    return (3 * z**2 - 1) / (z**3 - z) - 3 * z**2 / (z**3 - 1)


def convex_half_angle(r: float) -> float:
    """arccos(-1/(2r)): the convex arc is |theta| <= this angle."""
    _require_radius(r)
    return math.acos(-1.0 / (2 * r))


def _require_radius(r: float) -> None:
    if not r > 1:
        raise DomainError(f"g is singular on |z| = {r}; need r > 1")


def _speed_bound(r):
    """max |d g(r e^{i theta}) / d theta| = max |z g'(z)| on |z| = r."""
    x, y = r**-2.0, r**-3.0
    return 2 * x / (1 - x) + 3 * y / (1 - y)


# ---------------------------------------------------------------- arcs

@dataclass(frozen=True)
class CurveArc:
    radius: float
    theta: np.ndarray
    u: np.ndarray
    v: np.ndarray

    @property
    def theta_range(self) -> tuple[float, float]:
        return float(self.theta[0]), float(self.theta[-1])

    @property
    def points(self) -> np.ndarray:
        return self.u + 1j * self.v

    def __len__(self) -> int:
        return len(self.theta)


def g_eval_arc(
    r: float,
    theta_range: Optional[tuple[float, float]] = None,
    n_samples: int = 4096,
) -> CurveArc:
    """Sample g(r e^{i theta}) with a continuous (unwrapped) imaginary part.

    Defaults to the convex sub-arc |theta| <= arccos(-1/(2r)), endpoints
    included. The branch is fixed so the sample nearest theta = 0 takes the
    principal value.
    """
    _require_radius(r)
    if theta_range is None:
        a = convex_half_angle(r)
        theta_range = (-a, a)
    th = np.linspace(theta_range[0], theta_range[1], int(n_samples))
    w = (lambda z: (z**3 - z) / (z**3 - 1))(r * np.exp(1j * th))
    u = np.log(np.abs(w))
    v = np.unwrap(np.angle(w))
    i0 = int(np.argmin(np.abs(th)))
    v += np.angle(w[i0]) - v[i0]
    return CurveArc(float(r), th, u, v)


# ---------------------------------------------------------------- crossings

@dataclass(frozen=True)
class AxisCrossing:
    value: float
    thetas: tuple[float, ...]


def real_axis_crossings(r: float) -> list[AxisCrossing]:
    """The three distinct real values of g on |z| = r and their angles."""
    _require_radius(r)
    a = convex_half_angle(r)
    return [
        AxisCrossing(-math.log((r**3 - 1) / (r**3 - r)), (0.0,)),
        AxisCrossing(-math.log((r**3 + 1) / (r**3 - r)), (math.pi,)),
        AxisCrossing(math.log(r**2 / (r**2 - 1)), (a, -a)),
    ]


@dataclass(frozen=True)
class ImagCrossings:
    radius: float
    cos_plus: float
    cos_minus: float
    thetas: tuple[float, float, float, float]

    @property
    def theta_plus(self) -> float:
        """Crossing on the convex arc (upper half)."""
        return math.acos(self.cos_plus)

    @property
    def theta_minus(self) -> float:
        """Crossing on the outer loop, taken in the lower half-plane of theta."""
        return -math.acos(self.cos_minus)


def imag_axis_crossings(r: float) -> ImagCrossings:
    """theta = +-arccos((-1 +- sqrt(8r^2 - 3))/(4r)), where Re g = 0."""
    _require_radius(r)
    disc = 8 * r * r - 3
    if disc < 0:
        raise DomainError(f"r={r}: negative discriminant 8r^2-3")
    if r < 2:
        warnings.warn(f"r={r} is below the working range r >= 2", stacklevel=2)
    cp = (-1 + math.sqrt(disc)) / (4 * r)
    cm = (-1 - math.sqrt(disc)) / (4 * r)
    if not (-1 <= cm <= cp <= 1):
        raise DomainError(f"r={r}: crossing cosines {cp}, {cm} outside [-1, 1]")
    tp, tm = math.acos(cp), math.acos(cm)
    return ImagCrossings(float(r), cp, cm, (tp, -tp, tm, -tm))


def numeric_axis_roots(r: float, axis: str = "real", n_samples: int = 4096, xtol: float = 1e-14) -> np.ndarray:
    """Angles in [-pi, pi) where Im g (axis='real') or Re g (axis='imag') vanishes.

    Sign changes on a uniform sample of the full circle are refined by
    Brent's method on the analytic g; independent of the closed forms.
    """
    _require_radius(r)
    comp = (lambda t: float(np.imag(g(r * np.exp(1j * t))))) if axis == "real" else (
        lambda t: float(np.real(g(r * np.exp(1j * t))))
    )
    # offset by half a step so that theta = pi is interior to a bracket
    th = np.linspace(-math.pi, math.pi, int(n_samples) + 1) + math.pi / n_samples
    vals = np.array([comp(t) for t in th])
    roots = []
    for i in range(len(th) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            roots.append(th[i])
        elif a * b < 0:
            roots.append(brentq(comp, th[i], th[i + 1], xtol=xtol))
    roots = (np.array(roots) + math.pi) % (2 * math.pi) - math.pi
    return np.unique(np.round(roots, 13))


# ---------------------------------------------------------------- convexity

def slope_true(r: float, theta):
    """dv/du along g(r e^{i theta}) from the analytic derivative."""
    z = r * np.exp(1j * np.asarray(theta))
    d = 1j * z * g_prime(z)
    return d.imag / d.real


def slope_claimed(r: float, theta):
    """The closed-form ratio as displayed (turns out to be -dv/du)."""
    t = np.asarray(theta)
    c, s = np.cos, np.sin
    num = 2 * r**4 * c(2 * t) + r**3 * (c(3 * t) + 4 * c(t)) + 2 * r**2 * (2 + c(2 * t)) + 4 * r * c(t) + 1
    den = 2 * r**4 * s(2 * t) + r**3 * (s(3 * t) + 4 * s(t)) + 2 * r**2 * s(2 * t)
    return -num / den


def claimed_slope_derivative_numerator(r: float, theta):
    t = np.asarray(theta)
    c = np.cos
    return (
        2 * r * (8 + 31 * r**2 + 17 * r**4) * c(t)
        + 4 * (1 + 7 * r**2 + 8 * r**4) * c(2 * t)
        + r * ((7 + 16 * r**2) * c(3 * t) + r * (24 + 35 * r**2 + 8 * r**4 + 4 * c(4 * t)))
    )


def claimed_slope_derivative(r: float, theta):
    t = np.asarray(theta)
    den = r**2 * np.sin(t) ** 2 * (4 * (r**2 + 1) * np.cos(t) + r * (2 * np.cos(2 * t) + 5)) ** 2
    return -claimed_slope_derivative_numerator(r, t) / den


@dataclass
class ConvexityReport:
    radius: float
    convex: bool
    margin: float
    turning: float
    vertical_tangents: int
    slope_sign_convention: str
    max_slope_mismatch: float
    max_fd_angle_error: float
    claimed_bounds: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _tangent_angles(r, th):
    z = r * np.exp(1j * th)
    d = 1j * z * g_prime(z)
    return np.unwrap(np.angle(d))


def convexity_check(
    r: float,
    n_samples: int = 4096,
    theta_range: Optional[tuple[float, float]] = None,
    rel_tol: float = 1e-8,
) -> ConvexityReport:
    """Certify that the image of the arc is a convex curve by sampling.

    Convex means: between consecutive vertical tangents dv/du strictly
    decreases, the tangent turns monotonically, and the total turning is at
    most one revolution. The analytic slope is cross-checked against the
    claimed closed form (up to a global sign, which is reported) and
    against finite differences of the sampled arc; any other disagreement
    raises :class:`FormulaMismatchError`.
    """
    _require_radius(r)
    if theta_range is None:
        a = convex_half_angle(r)
        theta_range = (-a, a)
        if r < 2:
            warnings.warn(f"r={r} is below the working range r >= 2", stacklevel=2)
    lo, hi = theta_range
    # open interval; keep away from the vertical tangent at theta = 0
    th = np.linspace(lo, hi, int(n_samples) + 2)[1:-1]

    true = slope_true(r, th)
    claimed = slope_claimed(r, th)
    ok = np.isfinite(true) & np.isfinite(claimed) & (np.abs(true) < 1e8)
    scale = np.maximum(1.0, np.abs(true[ok]))
    same = float(np.max(np.abs(claimed[ok] - true[ok]) / scale))
    flipped = float(np.max(np.abs(claimed[ok] + true[ok]) / scale))
    if same <= rel_tol:
        convention, mismatch = "as claimed", same
    elif flipped <= rel_tol:
        convention, mismatch = "negated", flipped
    else:
        raise FormulaMismatchError(
            f"r={r}: claimed slope disagrees with analytic slope (rel {min(same, flipped):.3g})"
        )

    arc = g_eval_arc(r, (lo, hi), int(n_samples) + 2)
    du, dv = np.gradient(arc.u, arc.theta), np.gradient(arc.v, arc.theta)
    fd_ang = np.angle(du + 1j * dv)[1:-1]
    an_ang = _tangent_angles(r, th)
    fd_err = float(np.max(np.abs(np.angle(np.exp(1j * (fd_ang - an_ang))))))
    fd_tol = 50 * (hi - lo) / n_samples
    if fd_err > fd_tol:
        raise FormulaMismatchError(f"r={r}: finite-difference tangent off by {fd_err:.3g} rad")

    ang = _tangent_angles(r, th)
    dang = np.diff(ang)
    turning = float(abs(ang[-1] - ang[0]))
    monotone = bool(np.all(dang > 0) or np.all(dang < 0))

    # vertical tangents split the slope into monotone pieces
    du_an = np.real(1j * r * np.exp(1j * th) * g_prime(r * np.exp(1j * th)))
    cuts = np.flatnonzero(np.sign(du_an[1:]) != np.sign(du_an[:-1]))
    margin = math.inf
    start = 0
    for end in list(cuts + 1) + [len(th)]:
        piece = true[start:end]
        if len(piece) > 1:
            margin = min(margin, float(np.min(piece[:-1] - piece[1:])))
        start = end
    convex = monotone and margin > 0 and turning <= 2 * math.pi + 1e-9
    return ConvexityReport(
        float(r), bool(convex), margin, turning, len(cuts), convention, mismatch, fd_err,
        claimed_bound_audit(r),
    )


def claimed_bound_audit(r: float, n_samples: int = 4096) -> dict:
    """Compare the claimed upper bounds on the slope-derivative numerator with its true maximum.

    Reports, for each of the two cos(theta) cases, the claimed polynomial,
    the claimed constant, the sampled maximum of the numerator, and whether
    each claimed inequality actually holds at this r.
    """
    a = convex_half_angle(r)
    th = np.linspace(-a, a, n_samples)
    num = -claimed_slope_derivative_numerator(r, th)
    pos = num[np.cos(th) >= 0]
    neg = num[np.cos(th) < 0]
    poly1 = -(8 * r**6 - 14 * r**4 - 16 * r**3 - 39 * r**2 - 7 * r - 12)
    poly2 = -(8 * r**6 - 14 * r**2 - 16 * r**3 - 33 * r**2 - 7 * r - 12)
    out = {}
    for name, vals, poly, const in (("cos>=0", pos, poly1, -382.0), ("cos<0", neg, poly2, -2.0)):
        mx = float(vals.max()) if len(vals) else -math.inf
        out[name] = {
            "sampled_max": mx,
            "claimed_polynomial": float(poly),
            "claimed_constant": const,
            "numerator_below_polynomial": bool(mx <= poly),
            "polynomial_below_constant": bool(poly < const),
            "numerator_below_constant": bool(mx < const),
        }
    return out


# ---------------------------------------------------------------- support functions

@dataclass(frozen=True)
class SupportFunction:
    grid: np.ndarray
    h: np.ndarray
    tail: float = 0.0

    def at(self, theta: float) -> float:
        i = int(np.argmin(np.abs(np.angle(np.exp(1j * (self.grid - theta))))))
        return float(self.h[i])

    def convexity_defect(self) -> float:
        """max over grid pairs of 2cos((a-b)/2) h((a+b)/2) - h(a) - h(b), when the midpoint is on the grid.

        Non-positive (up to roundoff) for the support function of a convex set.
        """
        n = len(self.grid)
        uniform = np.allclose(np.diff(self.grid), self.grid[1] - self.grid[0])
        if not uniform:
            raise DomainError("convexity defect needs a uniform grid")
        worst = -math.inf
        step = self.grid[1] - self.grid[0]
        full = abs(step * n - 2 * math.pi) < 1e-9
        for i in range(n):
            for d in range(1, n // 2):
                j = i + 2 * d
                if j >= n and not full:
                    break
                mid = (i + d) % n
                jj = j % n
                lhs = 2 * math.cos(d * step) * self.h[mid]
                worst = max(worst, lhs - self.h[i] - self.h[jj])
        return float(worst)


def support_function(arc: CurveArc, theta_grid: Sequence[float]) -> SupportFunction:
    """h(phi) = max over the arc's convex hull of Re(e^{-i phi} z).

    Maximising over the samples (endpoints included) is exact for the hull
    of the samples; the gap to the true curve is at most half a sample
    spacing times the curve speed, reported as ``tail``.
    """
    if len(arc) == 0:
        raise DomainError("empty arc")
    grid = np.asarray(theta_grid, dtype=float)
    h = np.max(np.outer(np.cos(grid), arc.u) + np.outer(np.sin(grid), arc.v), axis=1)
    spacing = float(np.max(np.diff(arc.theta))) if len(arc) > 1 else 0.0
    return SupportFunction(grid, h, 0.5 * spacing * _speed_bound(arc.radius))


def _curve_support_table(radii: np.ndarray, grid: np.ndarray, n_samples: int, full_circle: bool = False):
    """Per-radius support values (len(radii) x len(grid)) plus sampling error bounds."""
    out = np.empty((len(radii), len(grid)))
    err = np.empty(len(radii))
    cg, sg = np.cos(grid), np.sin(grid)
    chunk = max(1, 2_000_000 // (n_samples * max(1, len(grid))))
    for lo in range(0, len(radii), chunk):
        r = radii[lo : lo + chunk, None]
        if full_circle:
            a = np.full_like(r, math.pi)
        else:
            a = np.arccos(-1.0 / (2 * r))
        th = np.linspace(-1.0, 1.0, n_samples)[None, :] * a
        G = g(r * np.exp(1j * th))
        proj = G.real[:, :, None] * cg + G.imag[:, :, None] * sg
        out[lo : lo + chunk] = proj.max(axis=1)
        err[lo : lo + chunk] = (a[:, 0] / (n_samples - 1)) * _speed_bound(r[:, 0])
    return out, err


def _prime_radii(sigma: float, prime_cutoff: int, first: int = 2) -> np.ndarray:
    ps = primes_upto(prime_cutoff)
    ps = ps[ps >= first]
    return ps.astype(float) ** sigma


def _samples_per_prime(radii: np.ndarray, dense: int) -> list[tuple[np.ndarray, int]]:
    """Dense sampling for the first primes, coarser sampling for small curves."""
    groups = []
    head = radii[radii < 50]
    tail = radii[radii >= 50]
    if len(head):
        groups.append((head, dense))
    if len(tail):
        groups.append((tail, 64))
    return groups


def prime_curve_tail(sigma: float, prime_cutoff: int) -> float:
    """Bound on sum_{p > cutoff} max |g| over |z| = p^sigma."""
    P = float(prime_cutoff)
    x = P ** (-2 * sigma)
    return (P ** (1 - 2 * sigma) / (2 * sigma - 1) + P ** (1 - 3 * sigma) / (3 * sigma - 1)) / (1 - x)


def _support_sum(sigma, prime_cutoff, grid, n_samples, first=2, full_circle=False):
    total = np.zeros(len(grid))
    sampling = 0.0
    for radii, ns in _samples_per_prime(_prime_radii(sigma, prime_cutoff, first), n_samples):
        table, err = _curve_support_table(radii, grid, ns, full_circle)
        total += table.sum(axis=0)
        sampling += float(err.sum())
    return total, sampling


def outer_support(
    sigma: float,
    prime_cutoff: int = 10**4,
    theta_grid: Optional[Sequence[float]] = None,
    n_samples: int = 2048,
) -> SupportFunction:
    """Sum over p <= cutoff of the support functions of C_{p,sigma}.

    ``tail`` covers both the omitted primes (each |h_p| <= max |g|) and the
    sampling gap of every curve.
    """
    if sigma < 1:
        raise DomainError("sigma must be >= 1")
    grid = _default_grid(theta_grid)
    total, sampling = _support_sum(sigma, prime_cutoff, grid, n_samples)
    return SupportFunction(grid, total, prime_curve_tail(sigma, prime_cutoff) + sampling)


def inner_support_bound(
    sigma: float,
    prime_cutoff: int = 10**4,
    theta_grid: Optional[Sequence[float]] = None,
    n_samples: int = 2048,
) -> SupportFunction:
    """h_2(theta) - sum_{p>=3} h_p(theta + pi), an upper bound for any inner curve."""
    if sigma < 1:
        raise DomainError("sigma must be >= 1")
    grid = _default_grid(theta_grid)
    h2, e2 = _curve_support_table(np.array([2.0**sigma]), grid, n_samples)
    rest, sampling = _support_sum(sigma, prime_cutoff, grid + math.pi, n_samples, first=3)
    return SupportFunction(grid, h2[0] - rest, prime_curve_tail(sigma, prime_cutoff) + sampling + float(e2[0]))


def _default_grid(theta_grid):
    if theta_grid is None:
        return np.linspace(0, 2 * math.pi, 360, endpoint=False)
    return np.atleast_1d(np.asarray(theta_grid, dtype=float))


def real_interval(sigma: float, prime_cutoff: int = 10**5) -> tuple[float, float]:
    """Closed-form real-axis interval contained in the value set.

    Left end -sum_p log((r^3-1)/(r^3-r)) = -h_O(pi); right end
    -log((8^s-1)/(8^s-2^s)) + sum_{p>=3} log(r^2/(r^2-1)) = -(inner bound at pi).
    """
    r = _prime_radii(sigma, prime_cutoff)
    left = -float(np.sum(np.log((r**3 - 1) / (r**3 - r))))
    r2 = r[0]
    right = -math.log((r2**3 - 1) / (r2**3 - r2)) + float(np.sum(np.log(r[1:] ** 2 / (r[1:] ** 2 - 1))))
    return left, right


# ---------------------------------------------------------------- reach bounds

@dataclass
class RegionBounds:
    sigma: float
    prime_cutoff: int
    lower_reach: float
    upper_reach: float
    lower_sum: float
    upper_sum: float
    tail: float
    max_real_part: float
    flags: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma,
            "prime_cutoff": self.prime_cutoff,
            "lower_reach": self.lower_reach,
            "upper_reach": self.upper_reach,
            "lower_sum": self.lower_sum,
            "upper_sum": self.upper_sum,
            "tail": self.tail,
            "max_real_part": self.max_real_part,
            "flags": list(self.flags),
        }


def region_bounds(sigma: float, prime_cutoff: int = 10**5) -> RegionBounds:
    """Imaginary-axis reach estimates of the value set at a given sigma.

    lower: sum_p Im g(r e^{i theta_plus}) - tail; a point of the vectorial sum
    lying on the imaginary axis. upper: sum_p |Im g(r e^{i theta_minus})| + tail,
    the quantity used for exclusion. Both use r = p^sigma.
    """
    if sigma < 1:
        raise DomainError("sigma must be >= 1")
    r = _prime_radii(sigma, prime_cutoff)
    disc = np.sqrt(8 * r * r - 3)
    cp = (-1 + disc) / (4 * r)
    cm = (-1 - disc) / (4 * r)
    gp = g(r * np.exp(1j * np.arccos(cp)))
    gm = g(r * np.exp(-1j * np.arccos(cm)))
    lower_sum = float(np.sum(gp.imag))
    upper_sum = float(np.sum(np.abs(gm.imag)))
    tail = prime_curve_tail(sigma, prime_cutoff)
    flags = []
    if sigma == 1.0:
        if upper_sum > CLAIMED_UPPER_REACH:
            flags.append(
                "upper sum exceeds 0.61966 as claimed; zero-freeness for k<=5 needs it below pi/5"
            )
        else:
            flags.append("upper sum is below the claimed 0.61966")
    return RegionBounds(
        float(sigma), int(prime_cutoff), lower_sum - tail, upper_sum + tail, lower_sum, upper_sum, tail,
        float(max(np.max(np.abs(gp.real)), np.max(np.abs(gm.real)))), flags,
    )


def hull_imaginary_reach(
    sigma: float = 1.0,
    prime_cutoff: int = 2000,
    phis: Optional[np.ndarray] = None,
    n_samples: int = 1024,
) -> float:
    """Rigorous-style exclusion level from convex hulls of the full circle images.

    The imaginary axis leaves the sum of hulls at min over phi in (0, pi) of
    sum_p h_p(phi)/sin(phi); includes omitted-prime and sampling tails.
    """
    if phis is None:
        phis = np.linspace(0.2, math.pi - 0.2, 601)
    total, sampling = _support_sum(sigma, prime_cutoff, phis, n_samples, full_circle=True)
    total = total + prime_curve_tail(sigma, prime_cutoff) + sampling
    return float(np.min(total / np.sin(phis)))


class Status(str, Enum):
    ZEROS_EXIST = "ZerosExist"
    ZERO_FREE = "ZeroFree"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Verdict:
    k: int
    status: Status
    lower_used: float
    upper_used: float

    @property
    def target(self) -> float:
        return math.pi / self.k

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "status": self.status.value,
            "pi_over_k": self.target,
            "lower_used": self.lower_used,
            "upper_used": self.upper_used,
        }


def sweep_region_bounds(
    sigmas: Iterable[float] = DEFAULT_SIGMA_GRID, prime_cutoff: int = 10**5
) -> list[RegionBounds]:
    return [region_bounds(s, prime_cutoff) for s in sigmas]


def verdict_for_k(k: int, bounds: Sequence[RegionBounds]) -> Verdict:
    """Decide zeta^k(2s) + zeta^k(3s) from reach bounds on a sigma grid.

    Zeros exist if pi/k is reached at some sigma > 1; the zeta quotient
    never reaches pi/k (no zeros) if pi/k exceeds the largest upper reach,
    which is attained as sigma -> 1.
    """
    k = int(k)
    if k < 1:
        raise DomainError("k must be >= 1")
    interior = [b.lower_reach for b in bounds if b.sigma > 1]
    lower = max(interior) if interior else -math.inf
    upper = max(b.upper_reach for b in bounds)
    target = math.pi / k
    if target <= lower:
        status = Status.ZEROS_EXIST
    elif target > upper:
        status = Status.ZERO_FREE
    else:
        status = Status.INDETERMINATE
    return Verdict(k, status, lower, upper)


# ---------------------------------------------------------------- figure data

def figure1_samples(r: float = 2.0, n_samples: int = 4096) -> CurveArc:
    """Full-circle image rows over theta in [0, 2 pi), continuous argument."""
    _require_radius(r)
    th = np.arange(int(n_samples)) * (2 * math.pi / int(n_samples))
    w = (lambda z: (z**3 - z) / (z**3 - 1))(r * np.exp(1j * th))
    u = np.log(np.abs(w))
    v = np.unwrap(np.angle(w))
    v -= v[0] - np.angle(w[0])
    return CurveArc(float(r), th, u, v)


def polyline_winding(u: np.ndarray, v: np.ndarray) -> int:
    """Signed winding number of the closed polyline (u, v) around the origin.

    g(re^{i theta}) behaves like -r^{-2} e^{-2 i theta}, so the image of the
    counter-clockwise circle loops the origin twice clockwise: -2.
    """
    z = np.asarray(u) + 1j * np.asarray(v)
    z = np.append(z, z[0])
    return int(round(float(np.sum(np.angle(z[1:] / z[:-1]))) / (2 * math.pi)))


def write_figure_csv(arc: CurveArc, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "u", "v"])
        for row in zip(arc.theta, arc.u, arc.v):
            w.writerow([f"{x:.17g}" for x in row])


def read_figure_csv(path: str | Path) -> CurveArc:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    th, u, v = data.T
    return CurveArc(float("nan"), th, u, v)
