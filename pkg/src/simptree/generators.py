"""Seeded random instances and exhaustive enumerations up to isomorphism."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement, product
from typing import Iterator, Optional

from .rooted import RootedTree
from .simplicial import SimplicialComplex


def _chain(sets) -> bool:
    ss = sorted(sets, key=len)
    return all(a <= b for a, b in zip(ss, ss[1:]))


def random_simplicial_tree(
    rng: random.Random,
    max_facets: int = 6,
    max_dim: int = 3,
    mode: str = "tree",
    num_facets: Optional[int] = None,
) -> SimplicialComplex:
    """Grow a complex by attaching facets that are good leaves when attached.

    ``tree`` attaches along a nonempty shared face, ``forest`` may also start
    a new component, and ``pure`` keeps one facet size and attaches along a
    codimension-one face (the mode used to reach the intersection property).
    Facets are shuffled at the end so the input order carries no structure.
    """
    if mode not in ("tree", "forest", "pure"):
        raise ValueError(f"unknown mode {mode!r}")
    r = num_facets if num_facets is not None else rng.randint(1, max_facets)
    size = rng.randint(1, max_dim + 1)
    if mode == "tree" and r > 1:
        # a one-vertex facet cannot share a face with anything else
        size = rng.randint(2, max_dim + 1) if max_dim >= 1 else 1
        if max_dim < 1:
            r = 1
    if mode == "pure":
        size = rng.randint(2, max_dim + 1) if max_dim >= 1 else 1
    nxt = 1
    facets = [frozenset(range(nxt, nxt + size))]
    nxt += size
    while len(facets) < r:
        F = rng.choice(facets)
        fl = sorted(F)
        if mode == "pure":
            S = frozenset(rng.sample(fl, len(fl) - 1))
            if not _chain([S & H for H in facets]):
                continue
            G = S | {nxt}
            nxt += 1
        else:
            bigger = [H for H in facets if len(H) > 1]
            if not bigger or (mode == "forest" and rng.random() < 0.2):
                S = frozenset()
            else:
                F = rng.choice(bigger)
                fl = sorted(F)
                S = frozenset([rng.choice(fl)])
                for _ in range(5):
                    cand = frozenset(rng.sample(fl, rng.randint(1, len(fl) - 1)))
                    if _chain([cand & H for H in facets]):
                        S = cand
                        break
            fresh = rng.randint(1, max(1, max_dim + 1 - len(S)))
            G = S | frozenset(range(nxt, nxt + fresh))
            nxt += fresh
        facets.append(G)
    rng.shuffle(facets)
    return SimplicialComplex.from_facets([sorted(f) for f in facets], nxt - 1)


def random_intersection_property_tree(
    rng: random.Random, max_facets: int = 6, max_dim: int = 3, attempts: int = 200
) -> SimplicialComplex:
    for _ in range(attempts):
        cx = random_simplicial_tree(rng, max_facets, max_dim, mode="pure")
        if cx.intersection_property():
            return cx
    # one facet always qualifies
    d = rng.randint(1, max_dim + 1)
    return SimplicialComplex.from_facets([list(range(1, d + 1))])


def random_rooted_tree(
    rng: random.Random,
    n: int,
    max_height: Optional[int] = None,
    max_branching: Optional[int] = None,
) -> RootedTree:
    """Random recursive tree: each new vertex picks an eligible earlier parent."""
    parent = [-1]
    level = [0]
    kids = [0]
    for v in range(1, n):
        ok = [
            u
            for u in range(v)
            if (max_height is None or level[u] < max_height)
            and (max_branching is None or kids[u] < max_branching)
        ]
        if not ok:
            break
        p = rng.choice(ok)
        parent.append(p)
        level.append(level[p] + 1)
        kids.append(0)
        kids[p] += 1
    return RootedTree(parent)


# --------------------------------------------------------------------------
# enumeration up to isomorphism (trees as nested sorted tuples)


def _trees_by_size(n_max: int) -> list[list[tuple]]:
    by = [[] for _ in range(n_max + 1)]
    if n_max >= 1:
        by[1] = [()]
    for n in range(2, n_max + 1):
        out = set()

        def fill(remaining, max_key, acc):
            if remaining == 0:
                out.add(tuple(sorted(acc)))
                return
            top = remaining if max_key is None else min(remaining, max_key[0])
            for size in range(top, 0, -1):
                for code in by[size]:
                    key = (size, code)
                    if max_key is not None and key > max_key:
                        continue
                    acc.append(code)
                    fill(remaining - size, key, acc)
                    acc.pop()

        fill(n - 1, None, [])
        by[n] = sorted(out)
    return by


def enumerate_rooted_trees(n_max: int) -> Iterator[RootedTree]:
    """Every rooted tree with 1..n_max vertices, once per isomorphism class."""
    by = _trees_by_size(n_max)
    for n in range(1, n_max + 1):
        for code in by[n]:
            yield RootedTree.from_code(code)


def enumerate_perfect_trees(height: int, max_branching: int) -> Iterator[RootedTree]:
    """Perfect trees of the given height with 1..max_branching children per internal vertex."""
    level = [()]
    for _ in range(height):
        nxt = []
        for k in range(1, max_branching + 1):
            for combo in combinations_with_replacement(level, k):
                nxt.append(tuple(sorted(combo)))
        level = sorted(set(nxt))
    for code in level:
        yield RootedTree.from_code(code)


def nary_tree(k: int, height: int) -> RootedTree:
    code = ()
    for _ in range(height):
        code = tuple([code] * k)
    return RootedTree.from_code(code)


def path_tree(n: int) -> RootedTree:
    return RootedTree([-1] + list(range(n - 1)))


def broom(bristles) -> RootedTree:
    """Handle 0..h with ``bristles[i-1]`` extra leaves at level i (hung off handle vertex i-1)."""
    h = len(bristles)
    parent = [-1] + list(range(h))
    for i, b in enumerate(bristles, start=1):
        parent.extend([i - 1] * b)
    return RootedTree(parent)


def enumerate_brooms(h_max: int, max_bristles: int = 3, h_min: int = 1) -> Iterator[tuple[tuple, RootedTree]]:
    for h in range(h_min, h_max + 1):
        for b in product(range(max_bristles + 1), repeat=h):
            yield b, broom(b)
