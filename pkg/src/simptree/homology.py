"""Graded Betti numbers of monomial ideals by upper Koszul simplicial homology.

The multigraded Betti number of an ideal ``I`` at a multidegree ``b`` is

    beta_{i,b}(I) = dim  H~_{i-1}( K^b(I) ; k ),

where ``K^b(I)`` is the simplicial complex of squarefree variable sets
``tau`` with ``x^(b - tau)`` in ``I``.  Only lcms of generator subsets can
carry nonzero numbers, so the scan runs over the lcm lattice.

Two routes produce the same table:

``koszul``
    the literal scan above, on the ideal as given;
``auto``
    polarizes to a squarefree ideal, then recursively peels off exact
    reductions before falling back to the same scan: a common factor
    shifts degrees, ideals in disjoint variables multiply Betti
    polynomials, and a variable dividing exactly one generator ``g`` gives
    the Betti splitting ``I = (g) + K`` with ``(g) ∩ K = g (K : g)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .errors import PreconditionError, ResourceError, StructuralError
from .linalg import check_characteristic
from .monomial import Monomial, MonomialIdeal, is_equigenerated, minimal_tuples
from .simplicial_homology import (
    bits,
    faces_by_dimension,
    popcount,
    reduced_euler_characteristic,
    reduced_homology,
)

DEFAULT_MAX_LATTICE = 250_000


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int = 0

    def __post_init__(self):
        check_characteristic(self.characteristic)

    def __str__(self):
        return f"char {self.characteristic}"


QQ = FieldSpec(0)


@dataclass(frozen=True)
class OracleCaps:
    max_lattice: int = DEFAULT_MAX_LATTICE


_default_caps = OracleCaps()


def set_default_caps(caps: OracleCaps):
    """Caps used when a call does not pass its own (per process)."""
    global _default_caps
    _default_caps = caps


def default_caps() -> OracleCaps:
    return _default_caps


# --------------------------------------------------------------------------
# Betti tables


@dataclass(frozen=True)
class BettiTable:
    """Graded Betti numbers ``beta_{i,j}`` of an ideal (not of ``R/I``)."""

    items: tuple[tuple[tuple[int, int], int], ...] = ()

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, int], int]) -> "BettiTable":
        for (i, j), v in d.items():
            if i < 0 or j < 0 or v < 0:
                raise StructuralError(f"invalid Betti entry ({i},{j}) -> {v}")
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return dict(self.items)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def is_empty(self) -> bool:
        return not self.items

    def total(self, i: int) -> int:
        return sum(v for (a, _), v in self.items if a == i)

    def regularity(self) -> int:
        """``reg(I)``; the zero ideal gets 1 so that ``reg(R/0) = 0``."""
        if not self.items:
            return 1
        return max(j - i for (i, j), _ in self.items)

    def quotient_regularity(self) -> int:
        return self.regularity() - 1

    def projective_dimension(self) -> int:
        if not self.items:
            return 0
        return max(i for (i, _), _ in self.items)

    def to_json(self) -> dict[str, int]:
        return {f"{i},{j}": v for (i, j), v in self.items}

    @classmethod
    def from_json(cls, d: Mapping[str, int]) -> "BettiTable":
        out = {}
        for k, v in d.items():
            i, j = (int(x) for x in k.split(","))
            out[(i, j)] = int(v)
        return cls.from_dict(out)

    def to_tsv(self) -> str:
        """Aligned table: one row per homological index ``i``, columns ``j - i``."""
        if not self.items:
            return "i\n"
        rows = range(self.projective_dimension() + 1)
        lo = min(j - i for (i, j), _ in self.items)
        hi = max(j - i for (i, j), _ in self.items)
        cols = range(lo, hi + 1)
        e = self.entries
        lines = ["i\t" + "\t".join(f"j-i={c}" for c in cols)]
        for i in rows:
            cells = [str(e.get((i, i + c), 0)) if e.get((i, i + c)) else "." for c in cols]
            lines.append(f"{i}\t" + "\t".join(cells))
        return "\n".join(lines) + "\n"

    def __str__(self):
        return self.to_tsv()


def _shift(table: dict, di: int, dj: int) -> dict:
    return {(i + di, j + dj): v for (i, j), v in table.items()}


def _accumulate(acc: dict, table: dict):
    for k, v in table.items():
        acc[k] = acc.get(k, 0) + v


def _kunneth(tables: list[dict]) -> dict:
    """Betti table of ``I_1 + ... + I_m`` for ideals in pairwise disjoint variables."""
    prod = {(0, 0): 1}
    for t in tables:
        quot = {(0, 0): 1}
        for (i, j), v in t.items():
            quot[(i + 1, j)] = v
        new: dict = {}
        for (a, b), u in prod.items():
            for (c, d), v in quot.items():
                k = (a + c, b + d)
                new[k] = new.get(k, 0) + u * v
        prod = new
    return {(i - 1, j): v for (i, j), v in prod.items() if i > 0}


# --------------------------------------------------------------------------
# lcm lattice and Koszul strands (tuple route, works for any monomial ideal)


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(map(max, a, b))


def _lattice_tuples(gens: Sequence[tuple], max_size: int) -> set:
    lattice = set(gens)
    frontier = list(lattice)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = _lcm(a, g)
                if c not in lattice:
                    lattice.add(c)
                    nxt.append(c)
                    if len(lattice) > max_size:
                        raise ResourceError(f"lcm lattice exceeds {max_size} elements")
        frontier = nxt
    return lattice


def lcm_lattice_degrees(I: MonomialIdeal, max_size: int = DEFAULT_MAX_LATTICE) -> set[Monomial]:
    """All lcms of nonempty generator subsets."""
    if I.is_zero():
        raise PreconditionError("the zero ideal has an empty lcm lattice")
    return {Monomial(t) for t in _lattice_tuples(I.tuples, max_size)}


def _strand_facets(gens: Sequence[tuple], b: tuple) -> list[int]:
    """Facets of ``K^b`` as bitmasks over variable indices.

    For each generator ``g | b`` the set ``{k : b_k > g_k}`` spans a simplex
    of ``K^b``; these simplices cover the complex.  ``[0]`` means ``K^b`` is
    just the empty face.
    """
    out = []
    for g in gens:
        mask = 0
        ok = True
        for k, (gk, bk) in enumerate(zip(g, b)):
            if gk > bk:
                ok = False
                break
            if bk > gk:
                mask |= 1 << k
        if ok:
            out.append(mask)
    return out


@dataclass(frozen=True)
class MultidegreeStrand:
    """The upper Koszul complex ``K^b(I)`` at one multidegree."""

    multidegree: Monomial
    facets: tuple[frozenset[int], ...]

    def masks(self) -> list[int]:
        return [sum(1 << v for v in f) for f in self.facets]

    def faces(self) -> dict[int, list[int]]:
        if not self.facets:
            return {}
        return faces_by_dimension(self.masks())

    def homology(self, field: FieldSpec = QQ, reduce: bool = True) -> dict[int, int]:
        return reduced_homology(self.masks(), field.characteristic, reduce=reduce)


def upper_koszul_complex(I: MonomialIdeal, b: Monomial) -> MultidegreeStrand:
    facets = _strand_facets(I.tuples, b.exponents)
    return MultidegreeStrand(b, tuple(frozenset(bits(m)) for m in facets))


def koszul_face_counts(I: MonomialIdeal, b: Monomial) -> dict[int, int]:
    """f-vector of ``K^b(I)`` by direct membership tests over subsets of ``supp(b)``.

    Independent of the facet description; used for Euler-characteristic checks.
    """
    supp = sorted(b.support)
    gens = I.tuples
    counts: dict[int, int] = {}
    for r in range(len(supp) + 1):
        for tau in combinations(supp, r):
            e = list(b.exponents)
            for k in tau:
                e[k] -= 1
            if any(all(g[k] <= e[k] for k in range(len(e))) for g in gens):
                counts[r - 1] = counts.get(r - 1, 0) + 1
    return counts


def multigraded_betti(
    I: MonomialIdeal,
    field: FieldSpec = QQ,
    caps: Optional[OracleCaps] = None,
    reduce: bool = True,
) -> dict[Monomial, dict[int, int]]:
    """``{b: {i: beta_{i,b}}}`` over the lcm lattice, by the literal Koszul scan."""
    caps = caps or _default_caps
    if I.is_zero():
        return {}
    if I.is_unit():
        raise PreconditionError("Betti numbers of the unit ideal are not defined here")
    gens = I.tuples
    out = {}
    for b in sorted(_lattice_tuples(gens, caps.max_lattice)):
        hom = reduced_homology(_strand_facets(gens, b), field.characteristic, reduce=reduce)
        if hom:
            out[Monomial(b)] = {d + 1: r for d, r in hom.items()}
    return out


def _betti_koszul(I: MonomialIdeal, field: FieldSpec, caps: OracleCaps, reduce: bool = True) -> dict:
    table: dict = {}
    for b, row in multigraded_betti(I, field, caps, reduce).items():
        for i, r in row.items():
            key = (i, b.degree)
            table[key] = table.get(key, 0) + r
    return table


# --------------------------------------------------------------------------
# auto route: polarization + exact reductions on squarefree bitmask ideals


def polarize(I: MonomialIdeal) -> tuple[list[int], int]:
    """Squarefree bitmask generators of the polarization of ``I``."""
    n = I.ambient_size
    gens = I.tuples
    top = [max((g[k] for g in gens), default=0) for k in range(n)]
    offset = []
    acc = 0
    for k in range(n):
        offset.append(acc)
        acc += top[k]
    masks = []
    for g in gens:
        m = 0
        for k, e in enumerate(g):
            for c in range(e):
                m |= 1 << (offset[k] + c)
        masks.append(m)
    return masks, acc


def _minimal_masks(masks: Iterable[int]) -> tuple[int, ...]:
    ms = sorted(set(masks), key=lambda m: (popcount(m), m))
    kept: list[int] = []
    for m in ms:
        for k in kept:
            if k & ~m == 0:
                break
        else:
            kept.append(m)
    return tuple(kept)


def _components(gens: tuple[int, ...]) -> list[tuple[int, ...]]:
    groups: list[list] = []  # [support, gens]
    for g in gens:
        merged = [g, [g]]
        rest = []
        for grp in groups:
            if grp[0] & merged[0]:
                merged[0] |= grp[0]
                merged[1].extend(grp[1])
            else:
                rest.append(grp)
        rest.append(merged)
        groups = rest
    return [tuple(sorted(grp[1])) for grp in groups]


def _canonical(gens: tuple[int, ...]) -> tuple[int, ...]:
    """Relabel variables by a refined incidence signature, then sort generators.

    Not a full canonical form (ties fall back to the current labels), but the
    result is an exact re-encoding, so memo hits are always correct.
    """
    occ: dict[int, list[int]] = {}
    for g in gens:
        for v in bits(g):
            occ.setdefault(v, []).append(g)
    sig0 = {v: (len(gs), tuple(sorted(popcount(g) for g in gs))) for v, gs in occ.items()}
    sig1 = {}
    for v, gs in occ.items():
        sig1[v] = (
            sig0[v],
            tuple(sorted(tuple(sorted(sig0[u] for u in bits(g) if u != v)) for g in gs)),
        )
    order = sorted(occ, key=lambda v: (sig1[v], v))
    relabel = {v: k for k, v in enumerate(order)}
    out = []
    for g in gens:
        m = 0
        for v in bits(g):
            m |= 1 << relabel[v]
        out.append(m)
    return tuple(sorted(out))


def _brute_masks(gens: tuple[int, ...], char: int, caps: OracleCaps) -> dict:
    lattice = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = a | g
                if c not in lattice:
                    lattice.add(c)
                    nxt.append(c)
        if len(lattice) > caps.max_lattice:
            raise ResourceError(f"lcm lattice exceeds {caps.max_lattice} elements")
        frontier = nxt
    table: dict = {}
    gset = set(gens)
    for b in lattice:
        j = popcount(b)
        if b in gset:
            table[(0, j)] = table.get((0, j), 0) + 1
            continue
        facets = [b & ~g for g in gens if g & ~b == 0]
        for d, r in reduced_homology(facets, char).items():
            key = (d + 1, j)
            table[key] = table.get(key, 0) + r
    return table


class _Engine:
    """Memoized recursive Betti computation for squarefree bitmask ideals."""

    def __init__(self, char: int, caps: OracleCaps):
        self.char = char
        self.caps = caps
        self.memo: dict = {}
        self.lock = threading.Lock()

    def betti(self, gens: tuple[int, ...]) -> dict:
        if len(gens) == 1:
            return {(0, popcount(gens[0])): 1}
        common = gens[0]
        for g in gens[1:]:
            common &= g
        if common:
            inner = self.betti(tuple(sorted(g & ~common for g in gens)))
            return _shift(inner, 0, popcount(common))
        comps = _components(gens)
        if len(comps) > 1:
            return _kunneth([self.betti(c) for c in comps])
        key = _canonical(gens)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = self._split_or_scan(key)
        with self.lock:
            self.memo[key] = result
        return result

    def _split_or_scan(self, gens: tuple[int, ...]) -> dict:
        count: dict[int, int] = {}
        owner: dict[int, int] = {}
        for g in gens:
            for v in bits(g):
                count[v] = count.get(v, 0) + 1
                owner[v] = g
        private = [v for v, c in count.items() if c == 1]
        if not private:
            return _brute_masks(gens, self.char, self.caps)
        g = owner[max(private)]
        rest = tuple(k for k in gens if k != g)
        colon = _minimal_masks(k & ~g for k in rest)
        dg = popcount(g)
        out = {(0, dg): 1}
        _accumulate(out, self.betti(rest))
        _accumulate(out, _shift(self.betti(colon), 1, dg))
        return out


_ENGINES: dict = {}
_ENGINES_LOCK = threading.Lock()


def _engine(char: int, caps: OracleCaps) -> _Engine:
    key = (char, caps)
    with _ENGINES_LOCK:
        eng = _ENGINES.get(key)
        if eng is None:
            eng = _ENGINES[key] = _Engine(char, caps)
        return eng


def clear_cache():
    with _ENGINES_LOCK:
        _ENGINES.clear()


# --------------------------------------------------------------------------
# public oracle API


def graded_betti(
    I: MonomialIdeal,
    field: FieldSpec = QQ,
    route: str = "auto",
    caps: Optional[OracleCaps] = None,
) -> BettiTable:
    caps = caps or _default_caps
    if I.is_unit():
        raise PreconditionError("graded_betti needs a proper ideal")
    if I.is_zero():
        return BettiTable()
    if route == "koszul":
        return BettiTable.from_dict(_betti_koszul(I, field, caps))
    if route == "koszul-unreduced":
        return BettiTable.from_dict(_betti_koszul(I, field, caps, reduce=False))
    if route != "auto":
        raise ValueError(f"unknown route {route!r}")
    masks, _ = polarize(I)
    gens = _minimal_masks(masks)
    return BettiTable.from_dict(_engine(field.characteristic, caps).betti(gens))


def regularity(I: MonomialIdeal, field: FieldSpec = QQ, **kw) -> int:
    """``reg(I)``; by convention 1 for the zero ideal."""
    if I.is_zero():
        return 1
    return graded_betti(I, field, **kw).regularity()


def quotient_regularity(I: MonomialIdeal, field: FieldSpec = QQ, **kw) -> int:
    """``reg(R/I) = reg(I) - 1``, and 0 for the zero ideal."""
    return regularity(I, field, **kw) - 1


def has_linear_resolution(I: MonomialIdeal, field: FieldSpec = QQ, **kw) -> bool:
    if I.is_zero():
        raise PreconditionError("linear resolution is undefined for the zero ideal")
    d = is_equigenerated(I)
    if d is None:
        return False
    return graded_betti(I, field, **kw).regularity() == d


def has_linear_first_syzygies(I: MonomialIdeal, field: FieldSpec = QQ, **kw) -> bool:
    if I.is_zero():
        raise PreconditionError("linear first syzygies are undefined for the zero ideal")
    d = is_equigenerated(I)
    if d is None:
        raise PreconditionError("linear first syzygies need an equigenerated ideal")
    table = graded_betti(I, field, **kw)
    return all(j == d + 1 for (i, j), _ in table.items if i == 1)


def _colon_is_linear(prev: Sequence[tuple], g: tuple) -> bool:
    quots = minimal_tuples(tuple(max(a - b, 0) for a, b in zip(h, g)) for h in prev)
    return all(sum(q) == 1 for q in quots)


def has_linear_quotients(ordered_gens: Sequence[Monomial]) -> bool:
    """True iff every prefix colon ``(g_1..g_{k-1}) : g_k`` is generated by variables."""
    gens = [g.exponents for g in ordered_gens]
    if len(set(gens)) != len(gens) or len(minimal_tuples(gens)) != len(gens):
        raise StructuralError("linear quotients need a minimal generating sequence")
    for k in range(1, len(gens)):
        if not _colon_is_linear(gens[:k], gens[k]):
            return False
    return True


def linear_quotient_order(
    I: MonomialIdeal, field: FieldSpec = QQ, max_nodes: int = 200_000
) -> Optional[list[Monomial]]:
    """Some order of the generators with linear quotients, or None.

    For equigenerated ideals an order can only exist when the resolution is
    linear, which is checked first; otherwise a depth-first search runs.
    """
    gens = list(I.tuples)
    if not gens:
        return None
    if is_equigenerated(I) is not None and not has_linear_resolution(I, field):
        return None
    nodes = 0

    def search(order, remaining):
        nonlocal nodes
        if not remaining:
            return order
        for idx, g in enumerate(remaining):
            nodes += 1
            if nodes > max_nodes:
                raise ResourceError("linear-quotient order search exceeded node cap")
            if not order or _colon_is_linear(order, g):
                found = search(order + [g], remaining[:idx] + remaining[idx + 1:])
                if found is not None:
                    return found
        return None

    found = search([], gens)
    return None if found is None else [Monomial(g) for g in found]


def strand_euler_check(I: MonomialIdeal, b: Monomial, field: FieldSpec = QQ) -> bool:
    """Reduced Euler characteristic of ``K^b`` from raw face counts equals the
    alternating sum of the homology computed from the reduced complex."""
    counts = koszul_face_counts(I, b)
    chi_faces = sum((-1) ** d * c for d, c in counts.items())
    strand = upper_koszul_complex(I, b)
    hom = strand.homology(field)
    chi_hom = sum((-1) ** d * r for d, r in hom.items())
    chi_facets = reduced_euler_characteristic(strand.faces())
    return chi_faces == chi_hom == chi_facets
