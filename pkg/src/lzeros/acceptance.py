"""Acceptance checks, one function per criterion.

Every check returns a :class:`CriterionResult` carrying its measured
runtime; a check passes only if its condition holds within the time limit.
``constants`` lets a harness substitute the reference constants to confirm
that a corrupted value is caught.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from . import curves
from .characters import character_from_table
from .combo import ComboSpec, lemma_disc_check
from .errors import LZerosError
from .fixedpoint import (
    COVER_RADIUS,
    G_coverage_check,
    K_theta,
    MU0_HIGH,
    MU1_LOW,
    MU2_LOW,
    compute_partition,
    construct,
)
from .lfunc import dirichlet_spec, eval_L, eval_L_direct, zeta_spec
from .zeros import ComboEvaluator, Rectangle, hunt_zeros, winding_count

DEFAULT_CONSTANTS = {
    "lower": curves.CLAIMED_LOWER_REACH,
    "upper": curves.CLAIMED_UPPER_REACH,
    "k_theta": 0.7731567,
}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: Optional[float]
    groups: tuple = ()

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g} s)" if self.limit else ""
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} [{self.seconds:.3f} s{lim}]"

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": self.seconds,
            "limit": self.limit,
        }


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    groups: tuple
    limit: Optional[float]
    check: Callable[[dict], tuple[bool, str]]

    def run(self, constants: Optional[dict] = None) -> CriterionResult:
        consts = {**DEFAULT_CONSTANTS, **(constants or {})}
        t0 = time.perf_counter()
        try:
            ok, detail = self.check(consts)
        except LZerosError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        if ok and self.limit is not None and dt >= self.limit:
            ok, detail = False, f"{detail}; too slow"
        return CriterionResult(self.number, self.name, bool(ok), detail, dt, self.limit, self.groups)


# ---------------------------------------------------------------- curve geometry

def _c1_axis_crossings(c):
    r = 2.0
    closed_real = sorted([-math.log(7 / 6), -math.log(3 / 2), math.log(4 / 3)])
    roots = curves.numeric_axis_roots(r, "real")
    vals = np.unique(np.round(curves.g(r * np.exp(1j * roots)).real, 10))
    err_real = (
        max(abs(a - b) for a, b in zip(sorted(vals), closed_real)) if len(vals) == 3 else math.inf
    )
    closed_cos = sorted([(-1 - math.sqrt(29)) / 8, (-1 + math.sqrt(29)) / 8])
    cos_num = np.unique(np.round(np.cos(curves.numeric_axis_roots(r, "imag")), 10))
    err_imag = (
        max(abs(a - b) for a, b in zip(sorted(cos_num), closed_cos)) if len(cos_num) == 2 else math.inf
    )
    ok = err_real < 1e-8 and err_imag < 1e-8
    return ok, f"real max err {err_real:.2e}, imag cos max err {err_imag:.2e}"


def _crossing_values(u, v):
    """u where the closed polyline crosses v = 0 (linear interpolation)."""
    u2, v2 = np.append(u, u[0]), np.append(v, v[0])
    out = []
    for i in range(len(u)):
        a, b = v2[i], v2[i + 1]
        if a == 0:
            out.append(u2[i])
        elif a * b < 0:
            out.append(u2[i] + (u2[i + 1] - u2[i]) * a / (a - b))
    return np.array(out)


def _c2_figure(c):
    n = 4096
    arc = curves.figure1_samples(2.0, n)
    wind = curves.polyline_winding(arc.u, arc.v)
    mirror = np.arange(n)
    mirror = (n - mirror) % n
    sym = float(max(np.max(np.abs(arc.u - arc.u[mirror])), np.max(np.abs(arc.v + arc.v[mirror]))))
    cross = np.sort(_crossing_values(arc.u, arc.v))
    distinct = [cross[0]]
    for x in cross[1:]:
        if x - distinct[-1] > 1e-4:
            distinct.append(x)
    ok = abs(wind) == 2 and sym < 1e-12 and len(distinct) == 3
    return ok, (
        f"winding {wind} (clockwise), mirror err {sym:.1e}, "
        f"{len(distinct)} real-axis values {np.round(distinct, 6).tolist()}"
    )


def _c3_convexity(c):
    parts = []
    ok = True
    for r in (2, 3, 5, 10):
        rep = curves.convexity_check(r, 4096)
        ok &= rep.convex
        pb = rep.claimed_bounds
        held = all(v["numerator_below_polynomial"] and v["polynomial_below_constant"] for v in pb.values())
        parts.append(
            f"r={r} convex={rep.convex} margin={rep.margin:.2e} slope={rep.slope_sign_convention}"
            + ("" if held else " claimed-bounds-mismatch")
        )
    return ok, "; ".join(parts)


def _c4_lower_reach(c):
    b = curves.region_bounds(1.001, 10**5)
    ok = b.lower_reach > c["lower"]
    return ok, f"lowerReach {b.lower_reach:.7f} vs required > {c['lower']}"


def _c5_upper_reach(c):
    b = curves.region_bounds(1.0, 10**5)
    close = abs(b.upper_reach - c["upper"]) < 1e-3
    below = b.upper_reach < math.pi / 5
    flag = "; ".join(b.flags)
    return close and below, (
        f"upperReach {b.upper_reach:.7f} (|diff| {abs(b.upper_reach - c['upper']):.1e}), "
        f"pi/5 = {math.pi / 5:.7f}; {flag}"
    )


def _c6_verdicts(c):
    bounds = curves.sweep_region_bounds()
    want = {k: curves.Status.ZERO_FREE for k in range(1, 6)}
    want.update({k: curves.Status.INDETERMINATE for k in range(6, 9)})
    want.update({k: curves.Status.ZEROS_EXIST for k in range(9, 13)})
    got = {k: curves.verdict_for_k(k, bounds) for k in range(1, 13)}
    bad = [k for k in want if got[k].status != want[k]]
    v = got[7]
    return not bad, (
        f"mismatched k: {bad}" if bad else
        f"all 12 match; bounds lower {v.lower_used:.6f}, upper {v.upper_used:.6f}"
    )


# ---------------------------------------------------------------- series

def _c7_lemma(c):
    z = zeta_spec()
    r2, r3, r10 = (lemma_disc_check(z, N) for N in (2, 3, 10))
    ok = (
        r2.exact_radius == Fraction(4, 3) and not r2.contained
        and r3.exact_radius == Fraction(40, 21) and r3.contained
        and abs(float(r10.exact_radius) - 3.310971) < 1e-6 and r10.contained
    )
    return ok, f"N=2 {r2.exact_radius}, N=3 {r3.exact_radius}, N=10 {float(r10.exact_radius):.7f}"


def _c8_euler_vs_direct(c):
    rng = np.random.default_rng(20240508)
    chi = character_from_table(5, {2: 1j})
    worst = 0.0
    ok = True
    for spec in (zeta_spec(), dirichlet_spec(chi)):
        for _ in range(20):
            s = complex(rng.uniform(1.2, 3.0), rng.uniform(-50, 50))
            e = eval_L(spec, s)
            d = eval_L_direct(spec, s)
            gap = abs(e.value - d.value)
            allowed = e.tail_bound + d.tail_bound
            ok &= gap <= allowed
            worst = max(worst, gap / allowed)
    return ok, f"40 points, worst discrepancy/bound ratio {worst:.3f}"


# ---------------------------------------------------------------- zeros

def _product_with_zeros(bases, sigmas):
    """prod_j (1 - b_j^{sigma_j - s}), zeros at sigma_j + 2 pi i k / log b_j."""
    lb = np.log(np.asarray(bases, dtype=float))
    sg = np.asarray(sigmas)

    def F(s):
        return complex(np.prod(1 - np.exp((sg - s) * lb)))

    def zeros_in(rect: Rectangle, margin: float):
        count, close = 0, False
        for b, s0 in zip(lb, sg):
            period = 2 * math.pi / b
            for k in range(math.floor(rect.t_min / period) - 1, math.ceil(rect.t_max / period) + 2):
                z = complex(s0, k * period)
                inside = rect.contains(z)
                d = min(abs(z.real - rect.sigma_min), abs(z.real - rect.sigma_max),
                        abs(z.imag - rect.t_min), abs(z.imag - rect.t_max))
                in_band = rect.sigma_min - margin < z.real < rect.sigma_max + margin and \
                    rect.t_min - margin < z.imag < rect.t_max + margin
                close |= in_band and d < margin
                count += inside
        return count, close

    return F, zeros_in


def _c9_winding(c):
    rng = np.random.default_rng(7)
    done, mism = 0, []
    while done < 20:
        m = int(rng.integers(1, 4))
        bases = rng.choice([2, 3, 5, 6, 7, 10], size=m, replace=False)
        sig = rng.uniform(1.1, 2.5, size=m)
        F, zeros_in = _product_with_zeros(bases, sig)
        a = rng.uniform(1.01, 2.0)
        b = a + rng.uniform(0.3, 1.5)
        t0 = rng.uniform(-20, 20)
        rect = Rectangle(a, b, t0, t0 + rng.uniform(2, 15))
        expected, close = zeros_in(rect, 1e-3)
        if close:
            continue
        got = winding_count(F, rect)
        if got != expected:
            mism.append((done, got, expected))
        done += 1
    return not mism, f"20 rectangles, mismatches {mism}"


def _c12_zero_search(c):
    F = ComboEvaluator(ComboSpec(zeta_spec(), 2))
    res = hunt_zeros(F, Rectangle(1.001, 1.3, 0.0, 200.0), grid_n=128, tol=1e-10)
    bad = []
    cert = [z for z in res.zeros if z.certified]
    fine = F.refined()
    for z in cert:
        again = abs(fine(z.location)[0])
        if not (again < 1e-8 and z.winding == 1):
            bad.append(z.location)
    return not bad, (
        f"{len(cert)} certified zeros in [1.001,1.3]x[0,200] (min |F| on grid {res.min_modulus:.3g}); "
        f"violations {bad}"
    )


# ---------------------------------------------------------------- fixed point

def _c10_fixed_point(c):
    spec = zeta_spec()
    thr = compute_partition(spec, 1.1, 10**4)
    exact = (
        MU1_LOW <= thr.mu1 < 1 / 3 and MU2_LOW <= thr.mu2 < 1 / 3 and 1 / 3 < thr.mu0 <= MU0_HIGH
    )
    cover = G_coverage_check(thr.mu1, thr.mu2, thr.mu0, 32)
    rho = thr.total_sum * COVER_RADIUS
    worst = 0.0
    for j in range(16):
        sol = construct(spec, 1.1, rho * cmath.exp(2j * math.pi * j / 16), thr)
        worst = max(worst, sol.residual)
    ok = exact and cover and worst < 1e-6
    return ok, (
        f"mu=({thr.mu1:.5f},{thr.mu2:.5f},{thr.mu0:.5f}) S={thr.total_sum:.5f}, "
        f"coverage {cover}, worst residual {worst:.2e}"
    )


def _oracle_prime_reciprocal_sum(limit: int) -> float:
    """sum 1/(p(p-1)) over a plain bytearray sieve."""
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return math.fsum(1.0 / (p * (p - 1)) for p in range(2, limit + 1) if sieve[p])


def _c11_k_theta(c):
    k = K_theta(zeta_spec(), 10**6)
    oracle = _oracle_prime_reciprocal_sum(10**6)
    ok = abs(k.value - oracle) < 1e-4 and abs(k.value - c["k_theta"]) < 1e-4
    return ok, f"K_theta {k.value:.7f} (tail {k.tail_bound:.1e}), oracle {oracle:.7f}"


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "axis crossings", ("curve",), 1.0, _c1_axis_crossings),
    Criterion(2, "full-circle curve", ("curve", "figure"), 1.0, _c2_figure),
    Criterion(3, "convexity", ("curve",), 2.0, _c3_convexity),
    Criterion(4, "lower reach", ("curve", "region"), 10.0, _c4_lower_reach),
    Criterion(5, "upper reach", ("curve", "region"), 10.0, _c5_upper_reach),
    Criterion(6, "verdicts", ("curve", "region"), 10.0, _c6_verdicts),
    Criterion(7, "disc lemma arithmetic", ("combo", "lemma"), 0.1, _c7_lemma),
    Criterion(8, "Euler product vs direct sum", ("core",), 5.0, _c8_euler_vs_direct),
    Criterion(9, "winding oracle", ("zeros",), 5.0, _c9_winding),
    Criterion(10, "fixed-point construction", ("fixedpoint",), 10.0, _c10_fixed_point),
    Criterion(11, "K_theta for zeta", ("fixedpoint",), 5.0, _c11_k_theta),
    Criterion(12, "zero search properties", ("zeros",), None, _c12_zero_search),
)


def select(only: Optional[Iterable[str]] = None) -> list[Criterion]:
    """Criteria matching any of the given group names or numbers."""
    if not only:
        return list(CRITERIA)
    keys = {str(x).strip().lower() for x in only}
    out = [c for c in CRITERIA if str(c.number) in keys or keys & set(c.groups)]
    if not out:
        raise ValueError(f"no acceptance criteria match {sorted(keys)}")
    return out


def run_acceptance(only=None, constants: Optional[dict] = None) -> list[CriterionResult]:
    return [c.run(constants) for c in select(only)]
