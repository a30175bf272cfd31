"""Combinations F_N(s) = L(s) + L(2s) + ... + L(Ns) and the tail series f.

Besides plain evaluation this module carries the disc-containment
arithmetic that keeps ``log f`` bounded for sigma >= 1, the N = 2 bound,
and evaluation of coefficient sequences under per-prime phase twists
``n^{-sigma} prod_{p^v || n} p^{-i v t_p}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, InvariantViolation, PrecisionError
from .lfunc import (
    DEFAULT_POWER_CUTOFF,
    DEFAULT_PRIME_CUTOFF,
    EvalResult,
    LFunctionSpec,
    coefficient_tail,
    eval_L,
)
from .primes import primes_upto

QUARTER = Fraction(1, 4)
C_ETA_SEARCH = 10**4


@dataclass(frozen=True)
class ComboSpec:
    base: LFunctionSpec
    N: int

    def __post_init__(self):
        if int(self.N) < 2:
            raise DomainError(f"N must be >= 2, got {self.N}")


def eval_F(
    combo: ComboSpec,
    s: complex,
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
    power_cutoff: int = DEFAULT_POWER_CUTOFF,
) -> EvalResult:
    """sum_{k=1}^N L(ks) with summed tail bounds."""
    return _sum_dilations(combo, s, 1, prime_cutoff, power_cutoff)


def eval_tail(
    combo: ComboSpec,
    s: complex,
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
    power_cutoff: int = DEFAULT_POWER_CUTOFF,
) -> EvalResult:
    """f(s) = sum_{k=2}^N L(ks)."""
    return _sum_dilations(combo, s, 2, prime_cutoff, power_cutoff)


def _sum_dilations(combo, s, start, prime_cutoff, power_cutoff):
    s = complex(s)
    if not s.real > 1:
        raise DomainError(f"Re(s)={s.real} is not > 1")
    out = EvalResult(0j, 0.0)
    for k in range(start, combo.N + 1):
        out = out + eval_L(combo.base, k * s, prime_cutoff, power_cutoff)
    return out


# ---------------------------------------------------------------- disc lemma

@dataclass(frozen=True)
class DiscReport:
    N: int
    radius: float
    center: float
    contained: bool
    log_bound: Optional[float]
    exact_radius: Optional[Fraction] = None
    c_eta: float = 1.0
    empirical: bool = False
    sigma: float = 1.0

    def to_json(self) -> dict:
        r = self.exact_radius
        return {
            "N": self.N,
            "sigma": self.sigma,
            "center": self.center,
            "radius": {"num": r.numerator, "den": r.denominator} if r is not None else self.radius,
            "radius_float": self.radius,
            "contained": self.contained,
            "log_bound": self.log_bound,
            "c_eta": self.c_eta,
            "empirical_c_eta": self.empirical,
        }


def _quarter_branch(spec: LFunctionSpec) -> bool:
    if spec.coeff_bound is None:
        return False
    C, e = spec.coeff_bound
    return C <= 1 and e <= QUARTER


def empirical_c_eta(spec: LFunctionSpec, n_max: int = C_ETA_SEARCH) -> float:
    """sup_{2<=n<=n_max} |a(n)| / n^{1/2}; only an estimate of the true constant."""
    a = spec.coefficients(n_max)
    n = np.arange(2, n_max + 1, dtype=float)
    return float(np.max(np.abs(a[2:]) / np.sqrt(n)))


def disc_log_bound(center: float, radius: float) -> float:
    """Bound on |log w| over the closed disc |w - center| <= radius < center."""
    mod = max(abs(math.log(center - radius)), math.log(center + radius))
    return mod + math.asin(radius / center)


def lemma_disc_check(spec: LFunctionSpec, N: int, sigma: float = 1.0) -> DiscReport:
    """Bound |f(s) - (N-1)| for Re(s) >= sigma and decide disc containment.

    Each |L(ks) - 1| is bounded by C sum_{n>=2} n^{e-k sigma} <= C/(k sigma - e - 1).
    Coefficients bounded by n^{1/4} give C = 1, e = 1/4 exactly (rational
    arithmetic); otherwise e = 1/2 and C is estimated empirically.
    N = 2 is reported (never contained for the n^{1/4} branch) so callers can
    see why :func:`N2_log_bound` is needed instead.
    """
    N = int(N)
    if N < 2:
        raise DomainError("N must be >= 2")
    if sigma < 1:
        raise DomainError("the disc bound needs sigma >= 1")
    center = N - 1
    if _quarter_branch(spec):
        sig = Fraction(sigma)
        exact = sum((Fraction(1) / (k * sig - QUARTER - 1) for k in range(2, N + 1)), Fraction(0))
        radius, c_eta, empirical = float(exact), 1.0, False
    else:
        exact = None
        c_eta, empirical = empirical_c_eta(spec), True
        radius = sum(c_eta / (k * sigma - 1.5) for k in range(2, N + 1))
    contained = (exact < center) if exact is not None else radius < center
    log_bound = disc_log_bound(center, radius) if contained else None
    return DiscReport(N, radius, float(center), bool(contained), log_bound, exact, c_eta, empirical, float(sigma))


def N2_log_bound(spec: LFunctionSpec, prime_cutoff: int = 10**6) -> EvalResult:
    """pi + K sum_p 1/(p^{3/2} - 1), bounding |log(-L(2s))| for sigma >= 1."""
    K = spec.growth_K
    if K == 0:
        return EvalResult(math.pi, 0.0)
    p = primes_upto(prime_cutoff).astype(float)
    val = math.pi + K * float(np.sum(1.0 / (p**1.5 - 1)))
    P = float(prime_cutoff)
    tail = K * 2 * P**-0.5 / (1 - P**-1.5)
    return EvalResult(val, tail)


# ---------------------------------------------------------------- twisted sums

@dataclass(frozen=True)
class TwistPattern:
    """Per-prime phases t_p; primes not listed have t_p = 0."""

    assignments: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for p, t in self.assignments.items():
            if not math.isfinite(t):
                raise DomainError(f"t_{p} is not finite")

    @classmethod
    def random(cls, prime_cutoff: int, rng: np.random.Generator) -> "TwistPattern":
        """t_p uniform on one period [0, 2 pi / log p) for every p <= cutoff."""
        ps = primes_upto(prime_cutoff)
        ts = rng.uniform(0.0, 1.0, len(ps)) * 2 * np.pi / np.log(ps)
        return cls(dict(zip(ps.tolist(), ts.tolist())))

    def phases(self, n: np.ndarray) -> np.ndarray:
        """Completely additive phase sum_{p^v || n} v t_p log p."""
        n = np.asarray(n, dtype=np.int64)
        out = np.zeros(n.shape)
        top = int(n.max()) if n.size else 0
        for p, t in self.assignments.items():
            if t == 0 or p > top:
                continue
            m = n.copy()
            hit = m % p == 0
            while hit.any():
                out[hit] += t * math.log(p)
                m[hit] //= p
                hit = m % p == 0
        return out


@dataclass(frozen=True)
class DirichletCoefficients:
    """Sparse coefficient sequence c(n), n <= n_cutoff, with a tail bound.

    ``tail(sigma)`` bounds sum_{n > n_cutoff} |c(n)| n^{-sigma}.
    """

    n: np.ndarray
    c: np.ndarray
    n_cutoff: int
    tail: Callable[[float], float]

    @classmethod
    def from_function(cls, c, n_cutoff: int, bound: tuple[float, float]) -> "DirichletCoefficients":
        """Coefficients from a callable with |c(n)| <= C n^e for n > n_cutoff."""
        n = np.arange(1, n_cutoff + 1)
        vals = np.asarray([complex(c(int(k))) for k in n])
        C, e = bound
        keep = vals != 0
        return cls(
            n[keep], vals[keep], n_cutoff,
            lambda sg: C * (n_cutoff ** (1 + e - sg) / (sg - e - 1) if sg - e > 1 else math.inf),
        )


def dilated_coefficients(spec: LFunctionSpec, ks, n_cutoff: int) -> DirichletCoefficients:
    """Coefficients of sum_{k in ks} L(ks): c(m^k) accumulates a(m)."""
    ks = list(ks)
    root_max = {k: _iroot(n_cutoff, k) for k in ks}
    a = spec.coefficients(max(root_max.values()))
    acc: dict[int, complex] = {}
    for k in ks:
        for m in range(1, root_max[k] + 1):
            if a[m] != 0:
                acc[m**k] = acc.get(m**k, 0) + a[m]
    n = np.array(sorted(acc), dtype=np.int64)
    c = np.array([acc[x] for x in n.tolist()], dtype=complex)

    def tail(sigma: float) -> float:
        return sum(coefficient_tail(spec, root_max[k], k * sigma) for k in ks)

    return DirichletCoefficients(n, c, n_cutoff, tail)


def combo_tail_coefficients(combo: ComboSpec, n_cutoff: int = 10**6) -> DirichletCoefficients:
    """Coefficients of f(s) = L(2s) + ... + L(Ns)."""
    return dilated_coefficients(combo.base, range(2, combo.N + 1), n_cutoff)


def _iroot(n: int, k: int) -> int:
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def eval_twisted(
    coeffs: DirichletCoefficients,
    sigma: float,
    twist: TwistPattern,
    tol: float | None = None,
) -> EvalResult:
    """sum_n c(n) n^{-sigma} prod_{p^v || n} p^{-i v t_p}, truncated at n_cutoff."""
    tail = coeffs.tail(sigma)
    if not math.isfinite(tail) or (tol is not None and tail > tol):
        raise PrecisionError(f"twisted tail {tail:.3g} exceeds tolerance {tol}")
    n = coeffs.n.astype(float)
    weights = coeffs.c * np.exp(-sigma * np.log(n) - 1j * twist.phases(coeffs.n))
    return EvalResult(complex(np.sum(weights)), tail)


@dataclass(frozen=True)
class SampleReport:
    max_abs_log: float
    log_bound: Optional[float]
    trials: int
    seed: int
    empty: bool
    sigma: float
    N: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def uniform_log_bound_sample(
    combo: ComboSpec,
    sigma: float,
    trials: int,
    seed: int = 0,
    prime_cutoff: int = 1000,
    n_cutoff: int = 10**6,
) -> SampleReport:
    """Max of |log f_twisted| over random twist patterns.

    For N >= 3 the disc lemma must report containment; every sample is
    checked to stay inside that disc. For N = 2 the bound is
    N2_log_bound - pi (|log L(2s)| only).
    """
    N = combo.N
    if N >= 3:
        disc = lemma_disc_check(combo.base, N, 1.0)
        if not disc.contained:
            raise InvariantViolation(f"N={N}: disc not contained, log f may be undefined")
        bound = disc.log_bound
    else:
        disc = None
        bound = N2_log_bound(combo.base).value - math.pi
    if trials <= 0:
        return SampleReport(0.0, bound, 0, seed, True, sigma, N)
    coeffs = combo_tail_coefficients(combo, n_cutoff)
    worst = 0.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        twist = TwistPattern.random(prime_cutoff, np.random.default_rng(child))
        f = eval_twisted(coeffs, sigma, twist)
        if disc is not None and abs(f.value - (N - 1)) >= N - 1:
            raise InvariantViolation(
                f"twisted f={f.value} left the disc |w-{N-1}|<{N-1} at sigma={sigma}"
            )
        if N == 2 and f.value == 0:
            raise InvariantViolation("twisted L(2s) vanished")
        worst = max(worst, abs(complex(np.log(f.value))))
    return SampleReport(worst, bound, trials, seed, False, sigma, N)
