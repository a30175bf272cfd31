"""L-functions given by their Euler-product log-coefficients.

An :class:`LFunctionSpec` is described by ``b(p^k)`` with
``log L(s) = sum_p sum_k b(p^k) p^{-ks}`` and constants ``(K, theta)``
such that ``|b(p^k)| <= K p^{k theta}``. All evaluations return an
:class:`EvalResult` carrying a rigorous bound on the omitted terms
(floating point roundoff is not tracked).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .characters import DirichletCharacter
from .errors import DomainError, PrecisionError
from .primes import primes_upto

DEFAULT_PRIME_CUTOFF = 10**5
DEFAULT_POWER_CUTOFF = 64
DEFAULT_N_CUTOFF = 10**5
# exp(-745) underflows binary64
_UNDERFLOW = 745.0


@dataclass(frozen=True)
class EvalResult:
    value: complex
    tail_bound: float

    def __post_init__(self):
        if not math.isfinite(self.tail_bound) or self.tail_bound < 0:
            raise PrecisionError(f"tail bound not finite: {self.tail_bound}")

    def __add__(self, other: "EvalResult") -> "EvalResult":
        return EvalResult(self.value + other.value, self.tail_bound + other.tail_bound)

    def to_json(self) -> dict:
        v = complex(self.value)
        return {"value": [v.real, v.imag], "tail_bound": self.tail_bound}


@dataclass(frozen=True, eq=False)
class LFunctionSpec:
    """Coefficient-level description of an L-function.

    ``log_coeff(p, k)`` returns ``b(p^k)``; ``log_coeff_vec(primes, k)`` is
    an optional vectorised version. ``family`` names the shipped families
    that have closed-form evaluators; user specs stay ``"custom"``. ``coeff_bound`` is an optional pair
    ``(C, e)`` with ``|a(n)| <= C n^e`` for all ``n >= 2``; it sharpens the
    direct-summation tails and selects the ``n^{1/4}`` branch of the disc
    lemma when ``C <= 1`` and ``e <= 1/4``.
    """

    log_coeff: Callable[[int, int], complex]
    growth_K: float
    growth_theta: float
    label: str
    log_coeff_vec: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    coeff_bound: Optional[tuple[Fraction, Fraction]] = None
    character: Optional[DirichletCharacter] = None
    power: int = 1
    family: str = "custom"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.growth_K < 0:
            raise DomainError("growth constant K must be non-negative")
        if not self.growth_theta < 0.5:
            raise DomainError("growth exponent theta must be < 1/2")

    def b(self, primes: np.ndarray, k: int) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if self.log_coeff_vec is not None:
            return np.asarray(self.log_coeff_vec(primes, k), dtype=complex)
        return np.array([self.log_coeff(int(p), k) for p in primes], dtype=complex)

    def prime_power_coeffs(self, p: int, kmax: int) -> np.ndarray:
        """``a(p^0..p^kmax)`` from ``b`` via k a(p^k) = sum_j j b(p^j) a(p^{k-j})."""
        b = [0j] + [complex(self.log_coeff(p, j)) for j in range(1, kmax + 1)]
        a = [1.0 + 0j]
        for k in range(1, kmax + 1):
            a.append(sum(j * b[j] * a[k - j] for j in range(1, k + 1)) / k)
        return np.array(a)

    def coefficients(self, n_cutoff: int) -> np.ndarray:
        """Multiplicative coefficients ``a(0..n_cutoff)`` (``a(0)`` unused, set to 0)."""
        key = ("a", n_cutoff)
        if key not in self._cache:
            self._cache[key] = _multiplicative_coeffs(self, n_cutoff)
        return self._cache[key]


def _multiplicative_coeffs(spec: LFunctionSpec, M: int) -> np.ndarray:
    a = np.ones(M + 1, dtype=complex)
    a[0] = 0
    ps = primes_upto(M)
    if len(ps) == 0:
        return a
    small = ps[ps * ps <= M]
    for p in small.tolist():
        kmax = int(math.log(M) / math.log(p)) + 1
        while p**kmax > M:
            kmax -= 1
        apk = spec.prime_power_coeffs(p, kmax)
        val = np.ones(M // p, dtype=np.int64)
        q = p * p
        while q <= M:
            step = q // p
            val[step - 1 :: step] += 1
            q *= p
        a[p::p] *= apk[val]
    big = ps[ps * ps > M]
    if len(big):
        ap = spec.b(big, 1)
        # primes above sqrt(M): every multiple below M has valuation exactly 1
        for p, c in zip(big.tolist(), ap.tolist()):
            a[p::p] *= c
    return a


# ---------------------------------------------------------------- shipped specs

def zeta_spec() -> LFunctionSpec:
    return LFunctionSpec(
        log_coeff=lambda p, k: 1.0 / k,
        growth_K=1.0,
        growth_theta=0.0,
        label="zeta",
        log_coeff_vec=lambda ps, k: np.full(len(ps), 1.0 / k, dtype=complex),
        coeff_bound=(Fraction(1), Fraction(0)),
        family="zeta",
    )


def dirichlet_spec(chi: DirichletCharacter, label: str | None = None) -> LFunctionSpec:
    table = chi.table()
    q = chi.modulus
    return LFunctionSpec(
        log_coeff=lambda p, k: chi(p) ** k / k,
        growth_K=1.0,
        growth_theta=0.0,
        label=label or f"L(s,chi mod {q})",
        log_coeff_vec=lambda ps, k: table[ps % q] ** k / k,
        coeff_bound=(Fraction(1), Fraction(0)),
        character=chi,
        family="dirichlet",
    )


def zeta_power_spec(k_power: int) -> LFunctionSpec:
    """zeta(s)^m: log-coefficients m/k."""
    m = int(k_power)
    if m < 1:
        raise DomainError("power must be a positive integer")
    return LFunctionSpec(
        log_coeff=lambda p, k: m / k,
        growth_K=float(m),
        growth_theta=0.0,
        label=f"zeta^{m}",
        log_coeff_vec=lambda ps, k: np.full(len(ps), m / k, dtype=complex),
        coeff_bound=(Fraction(1), Fraction(0)) if m == 1 else None,
        power=m,
        family="zeta-power",
    )


# ---------------------------------------------------------------- tails

def _require_half_plane(s: complex) -> None:
    if not (s.real > 1):
        raise DomainError(f"Re(s)={s.real} is not > 1")


def integer_power_tail(P: float, alpha: float) -> float:
    """Bound on sum_{n>P} n^{-alpha} by the integral from P (alpha > 1)."""
    if alpha <= 1:
        return math.inf
    return P ** (1 - alpha) / (alpha - 1)


def log_tail_bound(K: float, theta: float, sigma: float, P: int, kmax: int, primes: np.ndarray) -> float:
    """Rigorous bound on the omitted part of the double log series.

    Omitted terms are k > kmax for p <= P (geometric in k) and every k for
    p > P, where K sum_{p>P} x/(1-x), x = p^{theta-sigma}, is bounded by
    the integral of u^{theta-sigma} over (P, inf) divided by 1 - 2^{theta-sigma}.
    """
    if K == 0:
        return 0.0
    gap = sigma - theta
    if gap <= 1:
        raise PrecisionError(
            f"log-series tail diverges: need sigma - theta > 1, got {gap:.6g}"
        )
    x = np.exp(-gap * np.log(primes.astype(float)))
    with np.errstate(under="ignore"):
        k_tail = float(np.sum(x ** (kmax + 1) / (1 - x)))
    p_tail = integer_power_tail(P, gap) / (1 - 2.0 ** (-gap))
    return K * (k_tail + p_tail)


# ---------------------------------------------------------------- evaluation

def eval_log_L(
    spec: LFunctionSpec,
    s: complex,
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
    power_cutoff: int = DEFAULT_POWER_CUTOFF,
) -> EvalResult:
    """Truncated Euler log-series sum_{p<=P} sum_{k<=kmax} b(p^k) p^{-ks}."""
    s = complex(s)
    _require_half_plane(s)
    if prime_cutoff < 2 or power_cutoff < 1:
        raise DomainError("prime cutoff must be >= 2 and power cutoff >= 1")
    primes = primes_upto(prime_cutoff)
    logp = np.log(primes.astype(float))
    total = 0j
    for k in range(1, power_cutoff + 1):
        live = k * s.real * logp < _UNDERFLOW
        if not live.any():
            break
        ps = primes[live]
        total += complex(np.sum(spec.b(ps, k) * np.exp(-k * s * logp[live])))
    tail = log_tail_bound(
        spec.growth_K, spec.growth_theta, s.real, prime_cutoff, power_cutoff, primes
    )
    return EvalResult(total, tail)


def eval_L(
    spec: LFunctionSpec,
    s: complex,
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
    power_cutoff: int = DEFAULT_POWER_CUTOFF,
) -> EvalResult:
    """exp of :func:`eval_log_L`; |e^w - e^w'| <= e^{Re w'} (e^delta - 1)."""
    lg = eval_log_L(spec, s, prime_cutoff, power_cutoff)
    w = lg.value
    try:
        tail = math.exp(w.real) * math.expm1(lg.tail_bound)
    except OverflowError:
        tail = math.inf
    if not math.isfinite(tail):
        raise PrecisionError(f"propagated tail bound overflows (log tail {lg.tail_bound:.3g})")
    return EvalResult(complex(np.exp(w)), tail)


def coefficient_tail(spec: LFunctionSpec, M: int, sigma: float) -> float:
    """Bound on sum_{n>M} |a(n)| n^{-sigma}.

    With a declared bound |a(n)| <= C n^e the integral estimate is used.
    Otherwise Rankin's trick against the positive majorant
    exp(K sum_p x_p/(1-x_p)), x_p = p^{theta-sigma+d}, minimised over d.
    """
    if spec.coeff_bound is not None:
        C, e = (float(v) for v in spec.coeff_bound)
        return C * integer_power_tail(M, sigma - e)
    K, theta = spec.growth_K, spec.growth_theta
    room = sigma - theta - 1
    if room <= 0:
        return math.inf
    best = math.inf
    for frac in np.linspace(0.02, 0.98, 49):
        d = frac * room
        alpha = sigma - theta - d
        # sum_{n>=2} n^{-alpha} <= 2^{-alpha} + 2^{1-alpha}/(alpha-1)
        S = (2.0**-alpha + 2.0 ** (1 - alpha) / (alpha - 1)) / (1 - 2.0**-alpha)
        best = min(best, M ** (-d) * math.exp(K * S))
    return best


def eval_L_direct(
    spec: LFunctionSpec,
    s: complex,
    n_cutoff: int = DEFAULT_N_CUTOFF,
    tol: float | None = None,
) -> EvalResult:
    """Direct Dirichlet sum of multiplicatively expanded coefficients a(n)."""
    s = complex(s)
    _require_half_plane(s)
    if s.real <= 1 + spec.growth_theta:
        raise DomainError("direct sum needs Re(s) > 1 + theta")
    a = spec.coefficients(n_cutoff)
    n = np.arange(1, n_cutoff + 1, dtype=float)
    val = complex(np.sum(a[1:] * np.exp(-s * np.log(n))))
    tail = coefficient_tail(spec, n_cutoff, s.real)
    if not math.isfinite(tail) or (tol is not None and tail > tol):
        raise PrecisionError(f"n cutoff {n_cutoff} gives tail {tail:.3g} above tolerance {tol}")
    return EvalResult(val, tail)


def prime_sum(spec: LFunctionSpec, sigma: float, prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> EvalResult:
    """sum_{p<=P} |a(p)| p^{-sigma}, tail from |a(p)| <= K p^theta."""
    if not sigma > 1:
        raise DomainError(f"sigma={sigma} is not > 1")
    primes = primes_upto(prime_cutoff)
    val = float(np.sum(np.abs(spec.b(primes, 1)) * primes.astype(float) ** (-sigma)))
    tail = spec.growth_K * integer_power_tail(prime_cutoff, sigma - spec.growth_theta)
    return EvalResult(val, tail)
