"""Dirichlet characters built from partial value tables.

A character mod q is stored as its full table of values on residues
0..q-1. Tables are closed under multiplication starting from the
user-supplied generator values, and rejected when two products disagree.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ValidationError

ATOL = 1e-12


def totient(q: int) -> int:
    return sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)


def multiplicative_order(a: int, q: int) -> int:
    if q == 1:
        return 1
    k, x = 1, a % q
    while x != 1 % q:
        x = x * a % q
        k += 1
    return k


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    values: tuple[complex, ...]

    def __call__(self, n: int) -> complex:
        return self.values[n % self.modulus]

    def table(self) -> np.ndarray:
        return np.asarray(self.values, dtype=complex)

    def at(self, n: np.ndarray) -> np.ndarray:
        """Vectorised evaluation on an integer array."""
        return self.table()[np.asarray(n) % self.modulus]

    @property
    def is_principal(self) -> bool:
        return all(abs(v - 1) < ATOL for v in self.values if abs(v) > 0.5)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "values": {
                str(a): [v.real, v.imag]
                for a, v in enumerate(self.values)
                if math.gcd(a, self.modulus) == 1
            },
        }


def _close(a: complex, b: complex) -> bool:
    return abs(a - b) <= ATOL * max(1.0, abs(a), abs(b))


def character_from_table(q: int, assignments: Mapping[int, complex]) -> DirichletCharacter:
    """Complete a partial assignment of character values mod ``q``.

    The assigned residues must generate (Z/qZ)^x. Every value must be a root
    of unity whose order divides the multiplicative order of its residue;
    any clash between a generated product and an existing value raises
    :class:`ValidationError` naming the offending residue pair.
    """
    q = int(q)
    if q < 1:
        raise ValidationError(f"modulus must be positive, got {q}")
    if q == 1:
        return DirichletCharacter(1, (1.0 + 0j,))

    known: dict[int, complex] = {1: 1.0 + 0j}
    for raw, val in assignments.items():
        a = int(raw) % q
        val = complex(val)
        if math.gcd(a, q) != 1:
            if abs(val) > ATOL:
                raise ValidationError(f"chi({a}) must vanish since gcd({a},{q})>1, got {val}")
            continue
        if abs(abs(val) - 1) > 1e-10:
            raise ValidationError(f"chi({a})={val} is not a root of unity")
        order = multiplicative_order(a, q)
        if not _close(val**order, 1):
            raise ValidationError(
                f"chi({a})={val} is not a root of unity of order dividing ord({a})={order}"
            )
        if a in known and not _close(known[a], val):
            raise ValidationError(f"chi({a}) assigned {val} but must be {known[a]}")
        known[a] = val

    # multiplicative closure; pairs recorded for error messages
    frontier = list(known)
    while frontier:
        new = []
        for m in frontier:
            for n in list(known):
                mn = m * n % q
                prod = known[m] * known[n]
                if mn in known:
                    if not _close(known[mn], prod):
                        raise ValidationError(
                            f"chi({m})chi({n})={prod} but chi({mn})={known[mn]} "
                            f"(offending pair ({m},{n}))"
                        )
                else:
                    known[mn] = prod
                    new.append(mn)
        frontier = new

    units = [a for a in range(q) if math.gcd(a, q) == 1]
    missing = [a for a in units if a not in known]
    if missing:
        raise ValidationError(
            f"assignments do not generate (Z/{q}Z)^x; undetermined residues {missing[:8]}"
        )
    # snap to exact unit modulus to stop drift from repeated products
    vals = tuple(
        (known[a] / abs(known[a])) if a in known else 0j for a in range(q)
    )
    return DirichletCharacter(q, vals)


def validate_character(chi: DirichletCharacter) -> None:
    """Check every structural invariant of a full table; raise on failure."""
    q = chi.modulus
    if len(chi.values) != q:
        raise ValidationError(f"table has {len(chi.values)} entries, expected {q}")
    if not _close(chi(1), 1):
        raise ValidationError(f"chi(1)={chi(1)} != 1")
    phi = totient(q)
    for a in range(q):
        v = chi.values[a]
        if math.gcd(a, q) != 1:
            if abs(v) > ATOL:
                raise ValidationError(f"chi({a}) must vanish, got {v}")
        elif abs(abs(v) - 1) > 1e-10 or not _close(v**phi, 1):
            raise ValidationError(f"chi({a})={v} is not a phi(q)-th root of unity")
    for m in range(q):
        for n in range(m, q):
            if not _close(chi.values[m * n % q], chi.values[m] * chi.values[n]):
                raise ValidationError(f"multiplicativity fails at residue pair ({m},{n})")


def _as_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def character_from_json(doc: Mapping | str | Path) -> DirichletCharacter:
    """Load ``{"modulus": q, "values": {"a": [re, im] or number, ...}}``.

    The values may be a full table or just generator values.
    """
    if isinstance(doc, (str, Path)):
        doc = json.loads(Path(doc).read_text())
    try:
        q = int(doc["modulus"])
        raw = doc.get("values", {})
        assignments = {int(k): _as_complex(v) for k, v in raw.items()}
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValidationError(f"malformed character document: {exc}") from exc
    chi = character_from_table(q, assignments)
    validate_character(chi)
    return chi


def primitive_root(q: int) -> int | None:
    """Smallest generator of (Z/qZ)^x, or None when the group is not cyclic."""
    if q <= 2:
        return 1
    phi = totient(q)
    for g in range(2, q):
        if math.gcd(g, q) == 1 and multiplicative_order(g, q) == phi:
            return g
    return None


def all_characters(q: int) -> list[DirichletCharacter]:
    """Every character mod ``q``, by brute-force search over generator images.

    Intended for small moduli only.
    """
    if q == 1:
        return [character_from_table(1, {})]
    units = [a for a in range(1, q) if math.gcd(a, q) == 1]
    # greedy generating set
    gens: list[int] = []
    span = {1 % q}
    for a in units:
        if a in span:
            continue
        gens.append(a)
        grow = set(span)
        while True:
            nxt = {x * y % q for x in grow for y in grow | {a}}
            if nxt <= grow:
                break
            grow |= nxt
        span = grow
    out = []
    orders = [multiplicative_order(g, q) for g in gens]
    for exps in np.ndindex(*orders):
        assign = {g: cmath.exp(2j * math.pi * e / o) for g, e, o in zip(gens, exps, orders)}
        try:
            out.append(character_from_table(q, assign))
        except ValidationError:
            continue
    return out
