"""Zero location and certification for Dirichlet-series combinations.

Counting uses the argument principle on rectangle boundaries with adaptive
bisection; locating uses a grid scan of |F| followed by Newton polishing.
A zero is *certified* when its residual is below tolerance and the winding
number around a small enclosing box is at least one.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .combo import ComboSpec
from .emaclaurin import L_em
from .errors import BoundaryZeroError, DomainError, NonConvergenceError
from .lfunc import EvalResult

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Rectangle:
    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if not self.sigma_min > 1:
            raise DomainError(f"rectangle must lie in Re(s) > 1 (sigma_min={self.sigma_min})")
        if not (self.sigma_max > self.sigma_min and self.t_max > self.t_min):
            raise DomainError("degenerate rectangle")

    @classmethod
    def around(cls, s: complex, half: float) -> "Rectangle":
        return cls(s.real - half, s.real + half, s.imag - half, s.imag + half)

    def corners(self) -> list[complex]:
        return [
            complex(self.sigma_min, self.t_min),
            complex(self.sigma_max, self.t_min),
            complex(self.sigma_max, self.t_max),
            complex(self.sigma_min, self.t_max),
        ]

    def contains(self, s: complex) -> bool:
        return self.sigma_min < s.real < self.sigma_max and self.t_min < s.imag < self.t_max


@dataclass
class ZeroReport:
    location: complex
    residual: float
    winding: int
    certified: bool
    iterations: int = 0
    flag: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "s": [self.location.real, self.location.imag],
            "residual": self.residual,
            "winding": self.winding,
            "certified": self.certified,
        }


def _split(v) -> tuple[complex, float]:
    if isinstance(v, EvalResult):
        return complex(v.value), v.tail_bound
    if isinstance(v, tuple):
        return complex(v[0]), float(v[1])
    return complex(v), 0.0


def winding_count(
    F: Callable[[complex], object],
    rect: Rectangle,
    initial_steps: int = 32,
    min_modulus: float = 1e-12,
    tail_factor: float = 10.0,
    max_depth: int = 30,
) -> int:
    """Number of zeros of F inside ``rect`` by the argument principle.

    ``F`` may return a complex number, an :class:`EvalResult` or a
    ``(value, error)`` pair. Any boundary sample with
    |F| <= max(min_modulus, tail_factor * error) raises
    :class:`BoundaryZeroError`, as does a segment whose argument jump
    survives ``max_depth`` bisections. A segment is accepted when the
    complex log of F(end)/F(start), and of the same ratio over both halves,
    is below pi/2 in modulus; otherwise it is bisected.
    """
    cache: dict[complex, complex] = {}

    def value(s: complex) -> complex:
        if s not in cache:
            v, err = _split(F(s))
            if not math.isfinite(abs(v)) or abs(v) <= max(min_modulus, tail_factor * err):
                raise BoundaryZeroError(f"|F({s})|={abs(v):.3g} too small on the contour")
            cache[s] = v
        return cache[s]

    corners = rect.corners()
    total = 0.0
    for a, b in zip(corners, corners[1:] + corners[:1]):
        nodes = [a + (b - a) * j / initial_steps for j in range(initial_steps + 1)]
        for x, y in zip(nodes, nodes[1:]):
            stack = [(x, y, 0)]
            while stack:
                u, w, depth = stack.pop()
                mid = (u + w) / 2
                jump = cmath.log(value(w) / value(u))
                left = cmath.log(value(mid) / value(u))
                right = cmath.log(value(w) / value(mid))
                # a turn of nearly 2 pi past a close zero aliases to a small jump;
                # the dip in |F| at the midpoint exposes it
                if max(abs(jump), abs(left), abs(right)) < math.pi / 2:
                    total += left.imag + right.imag
                    continue
                if depth >= max_depth:
                    # the argument still jumps on a segment of length ~ 2^-30: a zero on the contour
                    raise BoundaryZeroError(f"argument does not settle near {u}; zero on or at the contour")
                # right half first so the left half is processed next
                stack.append((mid, w, depth + 1))
                stack.append((u, mid, depth + 1))
    return int(round(total / TWO_PI))


def _vectorised(F):
    def call(S: np.ndarray) -> np.ndarray:
        try:
            out = F(S)
            if isinstance(out, tuple):
                out = out[0]
            out = np.asarray(out, dtype=complex)
            if out.shape == S.shape:
                return out
        except Exception:
            pass
        return np.vectorize(lambda z: _split(F(complex(z)))[0], otypes=[complex])(S)

    return call


@dataclass(frozen=True)
class Candidate:
    s: complex
    residual: float


def grid_scan(
    F,
    rect: Rectangle,
    grid_n: int = 64,
    threshold: float | None = None,
    rel_threshold: float = 0.1,
) -> list[Candidate]:
    """Grid points where |F| is a local minimum (<= all 8 neighbours) and small.

    ``threshold`` defaults to ``rel_threshold`` times the median of |F| on the grid.
    """
    if grid_n < 2:
        raise DomainError("grid_n must be >= 2")
    sg = np.linspace(rect.sigma_min, rect.sigma_max, grid_n)
    ts = np.linspace(rect.t_min, rect.t_max, grid_n)
    S = sg[:, None] + 1j * ts[None, :]
    A = np.abs(_vectorised(F)(S))
    if threshold is None:
        threshold = rel_threshold * float(np.median(A))
    padded = np.pad(A, 1, constant_values=np.inf)
    is_min = np.ones(A.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                nb = padded[1 + di : 1 + di + grid_n, 1 + dj : 1 + dj + grid_n]
                is_min &= A <= nb
    hits = np.argwhere(is_min & (A < threshold))
    out = [Candidate(complex(S[i, j]), float(A[i, j])) for i, j in hits]
    return sorted(out, key=lambda c: c.residual)


def central_difference(F, h: float = 1e-6):
    def dF(s: complex) -> complex:
        step = h * max(1.0, abs(s))
        return (_split(F(s + step))[0] - _split(F(s - step))[0]) / (2 * step)

    return dF


def newton_polish(
    F,
    s0: complex,
    dF=None,
    tol: float = 1e-12,
    max_iter: int = 60,
    min_box: float = 1e-6,
) -> ZeroReport:
    """Newton iteration from ``s0`` followed by a winding certificate.

    The certificate box has side max(4 |last step|, ``min_box`` max(1,|s|)):
    a box sized by a quadratically converged step alone is below roundoff.
    """
    s = complex(s0)
    if not s.real > 1:
        raise DomainError("starting point must satisfy Re(s) > 1")
    dF = dF or central_difference(F)
    value = lambda z: _split(F(z))[0]
    fs = value(s)
    step = 0j
    perturbed = False
    for it in range(1, max_iter + 1):
        d = dF(s)
        if d == 0:
            if perturbed:
                return ZeroReport(s, abs(fs), 0, False, it, "stationary point")
            s = s + 1e-3 * (1 + 1j)
            fs = value(s)
            perturbed = True
            continue
        step = fs / d
        # damp steps that increase |F|
        lam = 1.0
        while True:
            cand = s - lam * step
            if cand.real > 1:
                fc = value(cand)
                if abs(fc) < abs(fs) or lam < 1e-3:
                    break
            elif lam < 1e-3:
                return ZeroReport(cand, abs(fs), 0, False, it, "left half-plane")
            lam /= 2
        s, fs, step = cand, fc, lam * step
        if abs(fs) < tol and abs(step) < 1e-9 * max(1.0, abs(s)):
            break
    else:
        return ZeroReport(s, abs(fs), 0, False, max_iter, "no convergence")
    half = max(2 * abs(step), min_box * max(1.0, abs(s)) / 2)
    try:
        w = winding_count(F, Rectangle.around(s, half), initial_steps=8)
    except (BoundaryZeroError, NonConvergenceError, DomainError) as exc:
        return ZeroReport(s, abs(fs), 0, False, it, f"certificate failed: {exc}")
    return ZeroReport(s, abs(fs), w, abs(fs) < tol and w >= 1, it)


# ---------------------------------------------------------------- combos

@dataclass
class ComboEvaluator:
    """F(s) = sum_k L(ks) over ``dilations`` via Euler-Maclaurin.

    Returns ``(value, error_bound)``. Each term uses
    ``m_scale * (|Im ks|/2 + 24)`` Euler-Maclaurin terms.
    """

    combo: ComboSpec
    m_scale: float = 1.0
    dilations: tuple = field(default=())

    def __post_init__(self):
        if not self.dilations:
            self.dilations = tuple(range(1, self.combo.N + 1))

    def __call__(self, s):
        arr = np.atleast_1d(np.asarray(s, dtype=complex))
        tot = np.zeros_like(arr)
        err = np.zeros(arr.shape)
        for k in self.dilations:
            M = int(self.m_scale * (np.max(np.abs(k * arr.imag)) / 2 + 24))
            v, e = L_em(self.combo.base, k * arr, M)
            tot += v
            err += e
        if np.ndim(s) == 0:
            return complex(tot[0]), float(err[0])
        return tot, err

    def refined(self) -> "ComboEvaluator":
        """Same function at doubled cutoffs."""
        return ComboEvaluator(self.combo, 2 * self.m_scale, self.dilations)


@dataclass
class HuntResult:
    rect: Rectangle
    grid_n: int
    candidates: int
    zeros: list[ZeroReport]
    min_modulus: float


def hunt_zeros(
    F: ComboEvaluator,
    rect: Rectangle,
    grid_n: int = 128,
    tol: float = 1e-10,
    rel_threshold: float = 0.1,
) -> HuntResult:
    """Scan, polish and certify; certified zeros are re-checked at doubled cutoffs.

    A zero whose residual fails the re-check is reported uncertified.
    """
    cands = grid_scan(F, rect, grid_n, rel_threshold=rel_threshold)
    sg = np.linspace(rect.sigma_min, rect.sigma_max, grid_n)
    ts = np.linspace(rect.t_min, rect.t_max, grid_n)
    min_mod = float(np.min(np.abs(F(sg[:, None] + 1j * ts[None, :])[0])))
    fine = F.refined()
    found: list[ZeroReport] = []
    for c in cands:
        try:
            rep = newton_polish(F, c.s, tol=tol)
        except DomainError:
            continue
        if not rect.contains(rep.location):
            continue
        if any(abs(rep.location - z.location) < 1e-6 for z in found):
            continue
        if rep.certified:
            again = abs(fine(rep.location)[0])
            if not again < tol:
                rep.certified = False
                rep.flag = f"residual {again:.3g} at doubled cutoff"
            rep.residual = max(rep.residual, again)
        found.append(rep)
    return HuntResult(rect, grid_n, len(cands), found, min_mod)
