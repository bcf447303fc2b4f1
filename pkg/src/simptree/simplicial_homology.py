"""Reduced homology of finite simplicial complexes given by facets.

Complexes are lists of facets encoded as integer bitmasks over vertex
indices.  Two exact homotopy-preserving reductions keep the rank
computations small: removal of dominated vertices (strong collapse) and
passage to the nerve of the facet cover.
"""

from __future__ import annotations

from .linalg import rank

# sentinel results
CONTRACTIBLE = "contractible"


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def maximal_masks(masks) -> list[int]:
    ms = sorted(set(masks), key=popcount, reverse=True)
    out: list[int] = []
    for m in ms:
        for o in out:
            if m & ~o == 0:
                break
        else:
            out.append(m)
    return out


def _occurrences(facets: list[int]) -> dict[int, int]:
    occ: dict[int, int] = {}
    for idx, f in enumerate(facets):
        bit = 1 << idx
        for v in bits(f):
            occ[v] = occ.get(v, 0) | bit
    return occ


def _strong_collapse(facets: list[int]):
    """Remove dominated vertices until none remain.

    Returns the reduced facet list, or CONTRACTIBLE when a cone is detected.
    """
    while True:
        if len(facets) == 1:
            return CONTRACTIBLE if facets[0] else facets
        occ = _occurrences(facets)
        full = (1 << len(facets)) - 1
        alive = dict(occ)
        removed = 0
        for v, o in sorted(occ.items(), key=lambda kv: (popcount(kv[1]), kv[0])):
            if o == full:
                return CONTRACTIBLE
            for w, o2 in alive.items():
                if w != v and o & ~o2 == 0:
                    del alive[v]
                    removed |= 1 << v
                    break
        if not removed:
            return facets
        facets = maximal_masks(f & ~removed for f in facets)


def _nerve(facets: list[int]) -> list[int]:
    return maximal_masks(_occurrences(facets).values())


def reduce_complex(facets) -> object:
    """Homotopy-equivalent smaller complex, or CONTRACTIBLE."""
    facets = maximal_masks(facets)
    if facets == [0]:
        return facets
    cur = _strong_collapse(facets)
    while cur is not CONTRACTIBLE:
        nv = popcount(_union(cur))
        if len(cur) >= nv:
            break
        nerve = _strong_collapse(_nerve(cur))
        if nerve is CONTRACTIBLE:
            return CONTRACTIBLE
        if popcount(_union(nerve)) >= nv:
            break
        cur = nerve
    return cur


def _union(facets) -> int:
    u = 0
    for f in facets:
        u |= f
    return u


def faces_by_dimension(facets) -> dict[int, list[int]]:
    """All faces (including the empty face, dimension -1) grouped by dimension."""
    seen: set[int] = set()
    for f in facets:
        sub = f
        while True:
            seen.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & f
    out: dict[int, list[int]] = {}
    for s in seen:
        out.setdefault(popcount(s) - 1, []).append(s)
    for d in out:
        out[d].sort()
    return out


def _boundary_rank(faces_hi: list[int], index_lo: dict[int, int], char: int) -> int:
    rows = []
    for f in faces_hi:
        row = {}
        sign = 1
        for v in bits(f):
            row[index_lo[f & ~(1 << v)]] = sign
            sign = -sign
        rows.append(row)
    return rank(rows, char)


def homology_of_faces(faces: dict[int, list[int]], char: int = 0) -> dict[int, int]:
    """Reduced Betti numbers from a full face list."""
    if not faces:
        return {}
    top = max(faces)
    ranks = {}
    for d in range(0, top + 1):
        lo = faces.get(d - 1, [])
        index_lo = {f: k for k, f in enumerate(lo)}
        ranks[d] = _boundary_rank(faces.get(d, []), index_lo, char)
    out = {}
    for d in range(-1, top + 1):
        h = len(faces.get(d, [])) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if h:
            out[d] = h
    return out


def reduced_homology(facets, char: int = 0, reduce: bool = True) -> dict[int, int]:
    """Reduced Betti numbers ``{dim: rank}`` of the complex spanned by ``facets``.

    An empty facet list is the void complex (no homology); ``[0]`` is the
    complex whose only face is the empty set.
    """
    facets = list(facets)
    if not facets:
        return {}
    if reduce:
        red = reduce_complex(facets)
        if red is CONTRACTIBLE:
            return {}
        facets = red
    else:
        facets = maximal_masks(facets)
    return homology_of_faces(faces_by_dimension(facets), char)


def reduced_euler_characteristic(faces: dict[int, list[int]]) -> int:
    return sum((-1) ** d * len(fs) for d, fs in faces.items())
