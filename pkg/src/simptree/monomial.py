"""Exact monomial and monomial-ideal arithmetic.

Monomials are exponent vectors over a fixed ambient set of variables
``x1, ..., xn``.  Ideals are always stored by their minimal generating set
in canonical order: ascending degree, then lexicographic with ``x1 > x2 >
...`` so that ``x1*x2`` precedes ``x2*x3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Optional, Sequence

from .errors import PreconditionError, ResourceError, StructuralError

DEFAULT_MAX_GENERATORS = 20_000


@dataclass(frozen=True, order=False)
class Monomial:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise StructuralError(f"negative exponent in {self.exponents}")

    @classmethod
    def one(cls, n: int) -> "Monomial":
        return cls((0,) * n)

    @classmethod
    def from_support(cls, support: Iterable[int], n: int) -> "Monomial":
        """Squarefree monomial with the given 0-based variable indices."""
        e = [0] * n
        for v in support:
            e[v] = 1
        return cls(tuple(e))

    @classmethod
    def variable(cls, k: int, n: int) -> "Monomial":
        return cls.from_support([k], n)

    @property
    def ambient_size(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(k for k, e in enumerate(self.exponents) if e)

    def is_squarefree(self) -> bool:
        return all(e <= 1 for e in self.exponents)

    def _check(self, other: "Monomial"):
        if len(self.exponents) != len(other.exponents):
            raise StructuralError(
                f"ambient sizes differ: {len(self.exponents)} vs {len(other.exponents)}"
            )

    def divides(self, other: "Monomial") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, k: int) -> "Monomial":
        return Monomial(tuple(a * k for a in self.exponents))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        self._check(other)
        if not other.divides(self):
            raise PreconditionError(f"{other} does not divide {self}")
        return Monomial(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def lcm(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(tuple(map(max, self.exponents, other.exponents)))

    def gcd(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(tuple(map(min, self.exponents, other.exponents)))

    def sort_key(self):
        return canonical_key(self.exponents)

    def __lt__(self, other: "Monomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        parts = []
        for k, e in enumerate(self.exponents):
            if e == 1:
                parts.append(f"x{k + 1}")
            elif e > 1:
                parts.append(f"x{k + 1}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"Monomial({self})"


def canonical_key(exps: Sequence[int]):
    return (sum(exps), tuple(-e for e in exps))


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def minimal_tuples(exps: Iterable[tuple]) -> list[tuple]:
    """Inclusion-minimal subset of exponent tuples, in canonical order.

    Works on raw tuples; used by the hot paths of the Betti engine.
    """
    cand = sorted(set(exps), key=canonical_key)
    kept: list[tuple] = []
    for c in cand:
        for k in kept:
            if _divides(k, c):
                break
        else:
            kept.append(c)
    return kept


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by its minimal generators (canonical order)."""

    generators: tuple[Monomial, ...]
    ambient_size: int

    def __post_init__(self):
        if self.ambient_size < 0:
            raise StructuralError("ambient size must be nonnegative")
        for g in self.generators:
            if g.ambient_size != self.ambient_size:
                raise StructuralError(
                    f"generator {g} has ambient size {g.ambient_size}, expected {self.ambient_size}"
                )

    @classmethod
    def zero(cls, n: int) -> "MonomialIdeal":
        return cls((), n)

    @classmethod
    def unit(cls, n: int) -> "MonomialIdeal":
        return cls((Monomial.one(n),), n)

    @classmethod
    def from_tuples(cls, exps: Iterable[Sequence[int]], n: Optional[int] = None) -> "MonomialIdeal":
        exps = [tuple(e) for e in exps]
        if n is None:
            if not exps:
                raise StructuralError("ambient size needed for an empty generator list")
            n = len(exps[0])
        for e in exps:
            if len(e) != n:
                raise StructuralError(f"exponent vector {e} has length {len(e)}, expected {n}")
        return cls(tuple(Monomial(e) for e in minimal_tuples(exps)), n)

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], n: int) -> "MonomialIdeal":
        return minimalize([Monomial.from_support(s, n) for s in supports], n)

    @property
    def tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(g.exponents for g in self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].degree == 0

    def is_squarefree(self) -> bool:
        return all(g.is_squarefree() for g in self.generators)

    def contains(self, m: Monomial) -> bool:
        return any(g.divides(m) for g in self.generators)

    def support(self) -> frozenset[int]:
        out: set[int] = set()
        for g in self.generators:
            out |= g.support
        return frozenset(out)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return ideal_sum(self, other)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return ideal_product(self, other)

    def to_json(self) -> list[list[int]]:
        return [list(g.exponents) for g in self.generators]

    def __str__(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def minimalize(gens: Iterable[Monomial], n: Optional[int] = None) -> MonomialIdeal:
    gens = list(gens)
    if n is None:
        if not gens:
            raise StructuralError("ambient size needed for an empty generator list")
        n = gens[0].ambient_size
    for g in gens:
        if g.ambient_size != n:
            raise StructuralError(f"generator {g} has ambient size {g.ambient_size}, expected {n}")
    return MonomialIdeal(tuple(Monomial(e) for e in minimal_tuples(g.exponents for g in gens)), n)


def _same_ring(I: MonomialIdeal, J: MonomialIdeal):
    if I.ambient_size != J.ambient_size:
        raise StructuralError(f"ambient sizes differ: {I.ambient_size} vs {J.ambient_size}")


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _same_ring(I, J)
    return MonomialIdeal.from_tuples(I.tuples + J.tuples, I.ambient_size)


def ideal_product(I: MonomialIdeal, J: MonomialIdeal, max_gens: int = DEFAULT_MAX_GENERATORS) -> MonomialIdeal:
    _same_ring(I, J)
    if len(I) * len(J) > max_gens * 50:
        raise ResourceError(f"product of {len(I)} x {len(J)} generators exceeds cap")
    prods = {tuple(a + b for a, b in zip(g, h)) for g in I.tuples for h in J.tuples}
    out = minimal_tuples(prods)
    if len(out) > max_gens:
        raise ResourceError(f"product has {len(out)} generators, cap is {max_gens}")
    return MonomialIdeal(tuple(Monomial(e) for e in out), I.ambient_size)


def ideal_power(I: MonomialIdeal, s: int, max_gens: int = DEFAULT_MAX_GENERATORS) -> MonomialIdeal:
    if s < 1:
        raise PreconditionError(f"power must be >= 1, got {s}")
    if I.is_zero() or s == 1:
        return I
    n = I.ambient_size
    gens = I.tuples
    prods = set()
    # multisets of generators; a cap on raw products keeps this bounded
    for combo in combinations_with_replacement(range(len(gens)), s):
        e = [0] * n
        for c in combo:
            for k, x in enumerate(gens[c]):
                e[k] += x
        prods.add(tuple(e))
        if len(prods) > max_gens * 50:
            raise ResourceError(f"I^{s} enumeration exceeded cap")
    out = minimal_tuples(prods)
    if len(out) > max_gens:
        raise ResourceError(f"I^{s} has {len(out)} generators, cap is {max_gens}")
    return MonomialIdeal(tuple(Monomial(e) for e in out), n)


def colon_by_monomial(I: MonomialIdeal, m: Monomial) -> MonomialIdeal:
    """``I : m``, computed generator-wise as ``g / gcd(g, m)``."""
    if m.ambient_size != I.ambient_size:
        raise StructuralError(f"ambient sizes differ: {I.ambient_size} vs {m.ambient_size}")
    me = m.exponents
    return MonomialIdeal.from_tuples(
        (tuple(max(a - b, 0) for a, b in zip(g, me)) for g in I.tuples), I.ambient_size
    )


def ideal_intersection(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _same_ring(I, J)
    return MonomialIdeal.from_tuples(
        (tuple(map(max, g, h)) for g in I.tuples for h in J.tuples), I.ambient_size
    )


def is_equigenerated(I: MonomialIdeal) -> Optional[int]:
    if I.is_zero():
        raise PreconditionError("the zero ideal has no generators")
    degs = {g.degree for g in I.generators}
    return degs.pop() if len(degs) == 1 else None
