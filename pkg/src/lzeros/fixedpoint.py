"""Desk-scale realisation of the twist construction for log L(s) = log f(s) + pi i.

Primes p <= P with a(p) != 0 are split into three blocks with
weight fractions mu1, mu2, mu0 of S = sum_{p<=P} |a(p)| p^{-sigma}. Rotating
the blocks to phases theta1, -theta2 and pi gives
sum_p a(p) p^{-sigma - i t_p} = S (mu1 e^{i theta1} + mu2 e^{-i theta2} - mu0),
so any target z with |z| <= S/10 is reached by solving
mu1 e^{i theta1} + mu2 e^{-i theta2} = mu0 + z/S for the two angles.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .combo import (
    ComboSpec,
    DirichletCoefficients,
    TwistPattern,
    combo_tail_coefficients,
    eval_twisted,
    lemma_disc_check,
    N2_log_bound,
)
from .errors import DomainError, InvariantViolation, NonConvergenceError, PartitionError
from .lfunc import EvalResult, LFunctionSpec, integer_power_tail
from .primes import primes_upto

MU1_LOW = 1 / 3 - 1 / (10 * math.sqrt(3))
MU2_LOW = 1 / 3 - 1 / (10 * math.sqrt(5))
MU0_HIGH = 1 / 3 + 1 / (10 * math.sqrt(3)) + 1 / (10 * math.sqrt(5))
COVER_RADIUS = 0.1


@dataclass(frozen=True)
class PartitionThresholds:
    """Block fractions and memberships; p1, p2 are the largest primes of blocks 1, 2.

    ``contiguous`` is true when block 1 is {p <= p1} and block 2 is {p1 < p <= p2}.
    """

    p1: int
    p2: int
    mu0: float
    mu1: float
    mu2: float
    total_sum: float
    sigma: float
    prime_cutoff: int
    block1: tuple = ()
    block2: tuple = ()
    contiguous: bool = True

    def check(self) -> None:
        if not (MU1_LOW <= self.mu1 < 1 / 3):
            raise InvariantViolation(f"mu1={self.mu1} outside [{MU1_LOW}, 1/3)")
        if not (MU2_LOW <= self.mu2 < 1 / 3):
            raise InvariantViolation(f"mu2={self.mu2} outside [{MU2_LOW}, 1/3)")
        if not (1 / 3 < self.mu0 <= MU0_HIGH):
            raise InvariantViolation(f"mu0={self.mu0} outside (1/3, {MU0_HIGH}]")

    def block_of(self, ps: np.ndarray) -> np.ndarray:
        """1, 2 or 0 for each prime."""
        out = np.zeros(len(ps), dtype=int)
        out[np.isin(ps, self.block1)] = 1
        out[np.isin(ps, self.block2)] = 2
        return out

    def to_json(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k not in ("block1", "block2")}
        d["block1"] = list(self.block1)
        d["block2"] = list(self.block2)
        return d


def _weights(spec: LFunctionSpec, sigma: float, prime_cutoff: int):
    ps = primes_upto(prime_cutoff)
    ap = spec.b(ps, 1)
    keep = ap != 0
    ps, ap = ps[keep], ap[keep]
    return ps, ap, np.abs(ap) * ps.astype(float) ** (-sigma)


def _prefix_blocks(frac: np.ndarray):
    """Contiguous blocks with the smallest p1, p2; None when a term jumps a window."""
    c = np.cumsum(frac)
    i1 = int(np.searchsorted(c, MU1_LOW, side="left"))
    if i1 >= len(c) or c[i1] >= 1 / 3:
        return None
    rest = c - c[i1]
    i2 = int(np.searchsorted(rest, MU2_LOW, side="left"))
    if i2 >= len(c) or rest[i2] >= 1 / 3:
        return None
    idx = np.arange(len(c))
    return idx <= i1, (idx > i1) & (idx <= i2)


def _pack(frac: np.ndarray, free: np.ndarray, low: float):
    """Block with fraction in [low, 1/3): ascending fill strictly below ``low``,
    closed by the smallest remaining term. Returns (mask, offending index or -1)."""
    mask = np.zeros(len(frac), dtype=bool)
    mu = 0.0
    for i in np.flatnonzero(free):
        if mu + frac[i] < low:
            mask[i] = True
            mu += frac[i]
    left = np.flatnonzero(free & ~mask)
    if len(left) == 0:
        return None, int(np.flatnonzero(free)[0])
    k = left[np.argmin(frac[left])]
    if mu + frac[k] >= 1 / 3:
        # every remaining term overshoots: report the first that jumps the window
        return None, int(left[0])
    mask[k] = True
    return mask, -1


def compute_partition(spec: LFunctionSpec, sigma: float, prime_cutoff: int = 10**4) -> PartitionThresholds:
    """Split primes into blocks with fractions in [1/3 - 1/(10 sqrt 3), 1/3) and [1/3 - 1/(10 sqrt 5), 1/3).

    The contiguous split p <= p1 < p <= p2 with the smallest p1, p2 is used
    when no single term jumps a window. Otherwise each block is packed from
    the smallest primes up to just below its lower bound and closed by the
    smallest remaining term, which keeps both fractions near their lower
    bounds and leaves the most weight for the next block.
    """
    if not sigma > 1:
        raise DomainError(f"sigma={sigma} is not > 1")
    ps, _, w = _weights(spec, sigma, prime_cutoff)
    if len(ps) < 3:
        raise PartitionError("fewer than three primes with a(p) != 0")
    total = float(w.sum())
    frac = w / total
    blocks = _prefix_blocks(frac)
    contiguous = blocks is not None
    if blocks is None:
        m1, bad = _pack(frac, np.ones(len(ps), dtype=bool), MU1_LOW)
        if m1 is None:
            raise PartitionError(
                f"no block reaches [{MU1_LOW:.6f}, 1/3): p={ps[bad]} jumps the window", prime=int(ps[bad])
            )
        m2, bad = _pack(frac, ~m1, MU2_LOW)
        if m2 is None:
            raise PartitionError(
                f"no second block reaches [{MU2_LOW:.6f}, 1/3): p={ps[bad]} jumps the window", prime=int(ps[bad])
            )
        blocks = (m1, m2)
    m1, m2 = blocks
    mu1 = float(w[m1].sum() / total)
    mu2 = float(w[m2].sum() / total)
    out = PartitionThresholds(
        int(ps[m1][-1]), int(ps[m2][-1]), 1.0 - mu1 - mu2, mu1, mu2, total, float(sigma),
        int(prime_cutoff), tuple(ps[m1].tolist()), tuple(ps[m2].tolist()), contiguous,
    )
    out.check()
    return out


def G(mu1: float, mu2: float, theta1, theta2):
    return mu1 * np.exp(1j * np.asarray(theta1)) + mu2 * np.exp(-1j * np.asarray(theta2))


def G_coverage_check(mu1: float, mu2: float, mu0: float, boundary_samples: int = 32) -> bool:
    """Does G map (0, pi/2)^2 over the disc |w - mu0| <= 1/10?

    Checks the two margin inequalities (raising when they fail), then the
    winding number of the image of the square's boundary around sampled
    points of the circle |w - mu0| = 1/10 and its centre.
    """
    a = mu1 + mu2 - mu0
    b = mu0 - abs(mu2 - mu1)
    if not a > COVER_RADIUS:
        raise InvariantViolation(f"mu1+mu2-mu0 = {a:.6g} is not > 1/10")
    if not b > COVER_RADIUS:
        raise InvariantViolation(f"mu0-|mu2-mu1| = {b:.6g} is not > 1/10")
    n = 512
    s = np.linspace(0, math.pi / 2, n, endpoint=False)
    q = math.pi / 2
    loop = np.concatenate([
        G(mu1, mu2, s, 0 * s),
        G(mu1, mu2, q + 0 * s, s),
        G(mu1, mu2, q - s, q + 0 * s),
        G(mu1, mu2, 0 * s, q - s),
    ])
    targets = [mu0] + [mu0 + COVER_RADIUS * cmath.exp(2j * math.pi * j / boundary_samples)
                       for j in range(boundary_samples)]
    for t in targets:
        d = loop - t
        d = np.append(d, d[0])
        wind = round(float(np.sum(np.angle(d[1:] / d[:-1]))) / (2 * math.pi))
        if abs(wind) != 1:
            return False
    return True


def _newton(mu1, mu2, w, x0, max_iter=60, tol=1e-13):
    x = np.array(x0, dtype=float)
    for _ in range(max_iter):
        r = G(mu1, mu2, x[0], x[1]) - w
        if abs(r) < tol:
            return x, abs(r)
        j1 = 1j * mu1 * cmath.exp(1j * x[0])
        j2 = -1j * mu2 * cmath.exp(-1j * x[1])
        J = np.array([[j1.real, j2.real], [j1.imag, j2.imag]])
        try:
            dx = np.linalg.solve(J, [-r.real, -r.imag])
        except np.linalg.LinAlgError:
            return x, abs(r)
        lam = 1.0
        while lam > 1e-4:
            cand = x + lam * dx
            if abs(G(mu1, mu2, cand[0], cand[1]) - w) < abs(r):
                break
            lam /= 2
        x = x + lam * dx
    return x, abs(G(mu1, mu2, x[0], x[1]) - w)


def solve_angles(mu1: float, mu2: float, mu0: float, w: complex, tol: float = 1e-10) -> tuple[float, float]:
    """(theta1, theta2) in (0, pi/2)^2 with mu1 e^{i theta1} + mu2 e^{-i theta2} = w.

    Damped Newton from (pi/4, pi/4); on failure, continuation along the
    segment from G(pi/4, pi/4) to w.
    """
    w = complex(w)
    if abs(w - mu0) > COVER_RADIUS * (1 + 1e-12):
        raise DomainError(f"|w - mu0| = {abs(w - mu0):.6g} exceeds the covered radius 1/10")
    if mu2 == 0:
        if abs(abs(w) - mu1) > tol:
            raise NonConvergenceError(f"single rotor of length {mu1} cannot reach |w|={abs(w)}")
        return float(cmath.phase(w)), 0.0

    def inside(x):
        return 0 < x[0] < math.pi / 2 and 0 < x[1] < math.pi / 2

    x, res = _newton(mu1, mu2, w, (math.pi / 4, math.pi / 4))
    if res < tol and inside(x):
        return float(x[0]), float(x[1])
    start = G(mu1, mu2, math.pi / 4, math.pi / 4)
    x = np.array([math.pi / 4, math.pi / 4])
    for lam in np.linspace(0, 1, 65)[1:]:
        x, res = _newton(mu1, mu2, start + lam * (w - start), x)
    if res < tol and inside(x):
        return float(x[0]), float(x[1])
    raise NonConvergenceError(f"angle solve failed for w={w} (residual {res:.3g})")


@dataclass
class TwistSolution:
    z: complex
    theta1: float
    theta2: float
    twists: dict
    residual: float = math.nan
    blocks: dict = field(default_factory=dict)

    @property
    def pattern(self) -> TwistPattern:
        return TwistPattern(self.twists)

    def to_json(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "theta1": self.theta1,
            "theta2": self.theta2,
            "residual": self.residual,
            "blocks": {
                name: {str(p): self.twists[p] for p in primes}
                for name, primes in self.blocks.items()
            },
        }


def build_twists(
    spec: LFunctionSpec,
    sigma: float,
    thresholds: PartitionThresholds,
    theta1: float,
    theta2: float,
    z: complex = 0j,
) -> TwistSolution:
    """t_p placing a(p) p^{-i t_p} at phase theta1, -theta2 or pi by block.

    t_p = (arg a(p) - phase)/log p; primes with a(p) = 0 are skipped.
    """
    ps, ap, _ = _weights(spec, sigma, thresholds.prime_cutoff)
    args = np.angle(ap)
    logp = np.log(ps.astype(float))
    block = thresholds.block_of(ps)
    phase = np.choose(block, [math.pi, theta1, -theta2])
    t = (args - phase) / logp
    twists = dict(zip(ps.tolist(), t.tolist()))
    blocks = {
        "first": ps[block == 1].tolist(),
        "second": ps[block == 2].tolist(),
        "rest": ps[block == 0].tolist(),
    }
    return TwistSolution(complex(z), float(theta1), float(theta2), twists, math.nan, blocks)


@dataclass(frozen=True)
class Verification:
    residual: float
    omitted_tail_bound: float
    ok: bool
    tol: float


def twisted_prime_sum(spec: LFunctionSpec, sigma: float, twists: dict, prime_cutoff: int) -> complex:
    ps, ap, _ = _weights(spec, sigma, prime_cutoff)
    t = np.array([twists.get(int(p), 0.0) for p in ps])
    logp = np.log(ps.astype(float))
    return complex(np.sum(ap * np.exp(-(sigma + 1j * t) * logp)))


def verify_solution(
    spec: LFunctionSpec,
    sigma: float,
    z: complex,
    solution: TwistSolution,
    prime_cutoff: int,
    tol: float = 1e-6,
    total_sum: Optional[float] = None,
) -> Verification:
    """|sum_{p<=P} a(p) p^{-sigma-i t_p} - z| for the finite system.

    The omitted primes p > P are not part of the finite system; their
    total weight is bounded separately in ``omitted_tail_bound``.
    """
    if total_sum is None:
        total_sum = float(_weights(spec, sigma, prime_cutoff)[2].sum())
    if abs(z) > total_sum * COVER_RADIUS * (1 + 1e-12):
        raise DomainError(f"|z|={abs(z):.6g} exceeds the covered radius S/10={total_sum / 10:.6g}")
    res = abs(twisted_prime_sum(spec, sigma, solution.twists, prime_cutoff) - z)
    tail = spec.growth_K * integer_power_tail(prime_cutoff, sigma - spec.growth_theta)
    solution.residual = res
    return Verification(res, tail, res < tol, tol)


def construct(spec: LFunctionSpec, sigma: float, z: complex, thresholds: PartitionThresholds) -> TwistSolution:
    """Full pipeline: target z -> w -> angles -> twists, with residual filled in."""
    w = thresholds.mu0 + z / thresholds.total_sum
    th1, th2 = solve_angles(thresholds.mu1, thresholds.mu2, thresholds.mu0, w)
    sol = build_twists(spec, sigma, thresholds, th1, th2, z)
    verify_solution(spec, sigma, z, sol, thresholds.prime_cutoff, total_sum=thresholds.total_sum)
    return sol


def K_theta(spec: LFunctionSpec, prime_cutoff: int = 10**6) -> EvalResult:
    """K sum_p 1/(p^{2(1-theta)} - p^{1-theta}) with an integral tail."""
    K = spec.growth_K
    if K == 0:
        return EvalResult(0.0, 0.0)
    alpha = 1 - spec.growth_theta
    p = primes_upto(prime_cutoff).astype(float)
    val = K * float(np.sum(1.0 / (p ** (2 * alpha) - p**alpha)))
    P = float(prime_cutoff)
    tail = K * P ** (1 - 2 * alpha) / ((2 * alpha - 1) * (1 - P**-alpha))
    return EvalResult(val, tail)


@dataclass(frozen=True)
class SuffCond:
    holds: bool
    prime_sum: float
    required: float
    margin: float


def suff_cond_check(spec: LFunctionSpec, sigma: float, rho: float, prime_cutoff: int = 10**4) -> SuffCond:
    """Truncated sum_p |a(p)| p^{-sigma} >= 10 rho (a lower bound, so 'holds' is safe)."""
    if not sigma > 1:
        raise DomainError(f"sigma={sigma} is not > 1")
    ps, _, w = _weights(spec, sigma, prime_cutoff)
    s = float(w.sum())
    return SuffCond(s >= 10 * rho, s, 10 * rho, s - 10 * rho)


def brouwer_radius(spec: LFunctionSpec, N: int = 2) -> float:
    """B + K_theta + pi, with B from the N = 2 bound or the disc lemma."""
    if N == 2:
        B = N2_log_bound(spec).value
    else:
        rep = lemma_disc_check(spec, N)
        if not rep.contained:
            raise InvariantViolation(f"N={N}: no disc bound available")
        B = rep.log_bound
    return B + K_theta(spec).value + math.pi


# ---------------------------------------------------------------- the self-map

@dataclass
class BrouwerMap:
    """z -> log f_twisted - sum_p sum_{k>=2} b(p^k) p^{-k(sigma + i t_p(z))} + pi i.

    Twist families exist only on |z| <= S/10; larger arguments are first
    retracted radially onto that disc, which keeps the map continuous on
    any larger disc.
    """

    spec: LFunctionSpec
    combo: ComboSpec
    sigma: float
    thresholds: PartitionThresholds
    coeffs: Optional[DirichletCoefficients] = None
    power_cutoff: int = 40

    def __post_init__(self):
        if self.coeffs is None:
            self.coeffs = combo_tail_coefficients(self.combo, 10**6)
        if self.combo.N >= 3:
            disc = lemma_disc_check(self.combo.base, self.combo.N)
            if not disc.contained:
                raise InvariantViolation("log f is not controlled: disc lemma fails")
            self.B = disc.log_bound
        else:
            self.B = N2_log_bound(self.combo.base).value
        self.K_theta = K_theta(self.spec).value
        self.radius = self.B + self.K_theta + math.pi

    def retract(self, z: complex) -> complex:
        lim = COVER_RADIUS * self.thresholds.total_sum
        return z if abs(z) <= lim else z * (lim / abs(z))

    def higher_terms(self, twists: dict) -> complex:
        ps, _, _ = _weights(self.spec, self.sigma, self.thresholds.prime_cutoff)
        t = np.array([twists.get(int(p), 0.0) for p in ps])
        logp = np.log(ps.astype(float))
        out = 0j
        for k in range(2, self.power_cutoff + 1):
            out += complex(np.sum(self.spec.b(ps, k) * np.exp(-k * (self.sigma + 1j * t) * logp)))
        return out

    def __call__(self, z: complex) -> complex:
        sol = construct(self.spec, self.sigma, self.retract(complex(z)), self.thresholds)
        f = eval_twisted(self.coeffs, self.sigma, sol.pattern).value
        N = self.combo.N
        if N >= 3 and abs(f - (N - 1)) >= N - 1:
            raise InvariantViolation(f"twisted f={f} left the disc around {N-1}")
        if f == 0:
            raise InvariantViolation("twisted f vanished; log undefined")
        return complex(np.log(f)) - self.higher_terms(sol.twists) + math.pi * 1j


def brouwer_map_eval(
    spec: LFunctionSpec,
    combo: ComboSpec,
    sigma: float,
    z: complex,
    thresholds: PartitionThresholds,
) -> complex:
    return BrouwerMap(spec, combo, sigma, thresholds)(z)


def iterate_map(fmap: BrouwerMap, z0: complex = 0j, steps: int = 50) -> list[complex]:
    """Orbit of z0; invariance sampling only, no convergence is implied."""
    orbit = [complex(z0)]
    for _ in range(steps):
        orbit.append(fmap(orbit[-1]))
    return orbit
