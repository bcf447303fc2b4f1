"""Rooted forests, t-path ideals, and regularity of their quotients.

A forest is a parent array: ``parent[v]`` is the parent of ``v`` or -1 at a
root.  Induced subforests keep the original vertex names in ``labels`` so
decompositions can be reported against the input tree.

Regularity values returned here are ``reg(R/I_t)``; the zero ideal gives 0.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from functools import cached_property
from math import ceil
from typing import Iterable, Optional, Sequence

from .errors import InvariantViolation, PreconditionError, ResourceError, StructuralError
from .monomial import MonomialIdeal
from .simplicial import SimplicialComplex


class RootedForest:
    def __init__(self, parent: Sequence[int], labels: Optional[Sequence[int]] = None):
        parent = tuple(int(p) for p in parent)
        n = len(parent)
        for v, p in enumerate(parent):
            if p != -1 and not 0 <= p < n:
                raise StructuralError(f"vertex {v} has invalid parent {p}")
            if p == v:
                raise StructuralError(f"vertex {v} is its own parent")
        self.parent = parent
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise StructuralError("labels must match the vertex count")
        # acyclicity: every vertex reaches a root
        level = [-1] * n
        for v in range(n):
            trail = []
            u = v
            while u != -1 and level[u] < 0:
                if u in trail:
                    raise StructuralError(f"parent structure has a cycle through vertex {u}")
                trail.append(u)
                u = parent[u]
            base = -1 if u == -1 else level[u]
            for w in reversed(trail):
                base += 1
                level[w] = base
        self.levels = tuple(level)

    # ---- basic structure

    @property
    def n(self) -> int:
        return len(self.parent)

    def __len__(self):
        return len(self.parent)

    def __repr__(self):
        return f"{type(self).__name__}(parent={list(self.parent)})"

    def __eq__(self, other):
        return isinstance(other, RootedForest) and self.parent == other.parent and self.labels == other.labels

    def __hash__(self):
        return hash((self.parent, self.labels))

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    @property
    def roots(self) -> tuple[int, ...]:
        return tuple(v for v, p in enumerate(self.parent) if p == -1)

    def is_tree(self) -> bool:
        return len(self.roots) == 1

    def is_empty(self) -> bool:
        return self.n == 0

    @property
    def height(self) -> int:
        """Largest level; -1 for the empty forest."""
        return max(self.levels, default=-1)

    def outdegree(self, v: int) -> int:
        return len(self.children[v])

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if not self.children[v]]

    def subtree(self, v: int) -> list[int]:
        out = []
        todo = [v]
        while todo:
            u = todo.pop()
            out.append(u)
            todo.extend(self.children[u])
        return sorted(out)

    def induced(self, vertices: Iterable[int]) -> "RootedForest":
        """Induced rooted subforest; vertices whose parent is dropped become roots."""
        keep = sorted(set(vertices))
        index = {v: k for k, v in enumerate(keep)}
        parent = [index.get(self.parent[v], -1) if self.parent[v] >= 0 else -1 for v in keep]
        labels = [self.labels[v] for v in keep]
        if len([p for p in parent if p == -1]) == 1:
            return RootedTree(parent, labels)
        return RootedForest(parent, labels)

    def remove(self, vertices: Iterable[int]) -> "RootedForest":
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def components(self) -> list["RootedTree"]:
        return [self.induced(self.subtree(r)) for r in self.roots]

    # ---- serialization and canonical shape

    def to_json(self) -> dict:
        roots = self.roots
        return {"n": self.n, "root": roots[0] if len(roots) == 1 else list(roots), "parent": list(self.parent)}

    def shape(self) -> tuple:
        """Isomorphism-invariant code: sorted tuple of component codes."""
        return tuple(sorted(_code(self, r) for r in self.roots))


class RootedTree(RootedForest):
    def __init__(self, parent: Sequence[int], labels: Optional[Sequence[int]] = None):
        super().__init__(parent, labels)
        if len(self.roots) != 1:
            raise StructuralError(f"a rooted tree needs exactly one root, found {len(self.roots)}")

    @property
    def root(self) -> int:
        return self.roots[0]

    @classmethod
    def from_json(cls, data) -> "RootedTree":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise StructuralError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
        if not isinstance(data, dict) or "parent" not in data:
            raise StructuralError('tree file needs an object with "n", "root" and "parent"')
        parent = data["parent"]
        if not isinstance(parent, list) or not all(isinstance(p, int) for p in parent):
            raise StructuralError('"parent" must be a list of integers')
        n = data.get("n", len(parent))
        if n != len(parent):
            raise StructuralError(f'"n" is {n} but "parent" has {len(parent)} entries')
        tree = cls(parent)
        if "root" in data and data["root"] != tree.root:
            raise StructuralError(f'"root" is {data["root"]} but the parent array roots at {tree.root}')
        return tree

    @classmethod
    def from_code(cls, code: tuple) -> "RootedTree":
        parent: list[int] = []

        def build(c, p):
            v = len(parent)
            parent.append(p)
            for child in c:
                build(child, v)

        build(code, -1)
        return cls(parent)


EMPTY = RootedForest(())


def _code(forest: RootedForest, v: int) -> tuple:
    return tuple(sorted(_code(forest, c) for c in forest.children[v]))


def forest_from_shape(shape: Sequence[tuple]) -> RootedForest:
    parent: list[int] = []

    def build(c, p):
        v = len(parent)
        parent.append(p)
        for child in c:
            build(child, v)

    for c in shape:
        build(c, -1)
    return RootedForest(parent)


# --------------------------------------------------------------------------
# statistics and classification


@dataclass(frozen=True)
class TreeStats:
    levels: tuple[int, ...]
    outdegrees: tuple[int, ...]
    height: int
    leaves: tuple[int, ...]
    leaves_per_level: tuple[int, ...]  # l_i
    top_level_count: int  # n(Γ): vertices at the top level

    def to_json(self) -> dict:
        return {
            "levels": list(self.levels),
            "outdegrees": list(self.outdegrees),
            "height": self.height,
            "leaves": list(self.leaves),
            "leaves_per_level": list(self.leaves_per_level),
            "top_level_count": self.top_level_count,
        }


def tree_stats(G: RootedForest) -> TreeStats:
    h = G.height
    leaves = tuple(G.leaves())
    per = [0] * (h + 1)
    for v in leaves:
        per[G.levels[v]] += 1
    return TreeStats(
        G.levels,
        tuple(G.outdegree(v) for v in range(G.n)),
        h,
        leaves,
        tuple(per),
        sum(1 for lv in G.levels if lv == h),
    )


def level_outdegree_sums(G: RootedForest) -> list[int]:
    """``D_i``: total outdegree of the vertices at level ``i``."""
    out = [0] * (G.height + 1)
    for v in range(G.n):
        out[G.levels[v]] += G.outdegree(v)
    return out


def is_perfect(G: RootedForest) -> bool:
    h = G.height
    return G.n > 0 and all(G.levels[v] == h for v in G.leaves())


def nary_degree(G: RootedForest) -> Optional[int]:
    """k when every vertex below the top level has exactly k children."""
    h = G.height
    if h < 1:
        return None
    degs = {G.outdegree(v) for v in range(G.n) if G.levels[v] <= h - 1}
    return degs.pop() if len(degs) == 1 else None


def broom_handle(G: RootedForest) -> Optional[tuple[int, ...]]:
    """Handle of a broom, or None when G is not a broom.

    A broom's internal vertices form a path down from the root; the handle
    continues to the lowest-numbered leaf at the top level.
    """
    if not G.is_tree():
        return None
    handle = [G.roots[0]]
    while True:
        kids = G.children[handle[-1]]
        if not kids:
            return tuple(handle)
        internal = [c for c in kids if G.children[c]]
        if len(internal) > 1:
            return None
        if internal:
            handle.append(internal[0])
        else:
            handle.append(min(kids))
            return tuple(handle)


@dataclass(frozen=True)
class Classification:
    perfect: bool
    k_nary: Optional[int]
    broom: bool
    handle: Optional[tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "perfect": self.perfect,
            "k_nary": self.k_nary,
            "broom": self.broom,
            "handle": list(self.handle) if self.handle else None,
        }


def classify(G: RootedForest) -> Classification:
    handle = broom_handle(G)
    return Classification(is_perfect(G), nary_degree(G), handle is not None, handle)


# --------------------------------------------------------------------------
# path ideals and complexes


def _check_t(t: int):
    if not isinstance(t, int) or t < 1:
        raise PreconditionError(f"t must be a positive integer, got {t!r}")


def t_paths(G: RootedForest, t: int) -> list[tuple[int, ...]]:
    """Directed paths on t vertices, listed top vertex first, by bottom vertex."""
    _check_t(t)
    out = []
    for v in range(G.n):
        if G.levels[v] >= t - 1:
            path = [v]
            for _ in range(t - 1):
                path.append(G.parent[path[-1]])
            out.append(tuple(reversed(path)))
    return out


def t_path_ideal(G: RootedForest, t: int) -> MonomialIdeal:
    return MonomialIdeal.from_supports(t_paths(G, t), G.n)


def path_complex(G: RootedForest, t: int) -> SimplicialComplex:
    """Complex whose facets are the vertex sets of directed t-paths (vertex v -> v+1)."""
    paths = t_paths(G, t)
    cx = SimplicialComplex.from_facets([[v + 1 for v in p] for p in paths], G.n)
    if not cx.is_forest():
        raise InvariantViolation("path complex of a rooted forest is not a simplicial forest", witness=G.parent)
    return cx


def clean_form(G: RootedForest, t: int) -> RootedForest:
    """Repeatedly drop leaves at level < t - 1; may return the empty forest."""
    _check_t(t)
    cur = G
    while True:
        drop = [v for v in cur.leaves() if cur.levels[v] < t - 1]
        if not drop:
            return cur
        cur = cur.remove(drop)


# --------------------------------------------------------------------------
# leaf decomposition


@dataclass(frozen=True)
class LeafDecomposition:
    leaf: int
    path: tuple[int, ...]  # x_1 .. x_t
    x0: Optional[int]
    remainder: RootedForest  # Γ(z)
    sides: tuple[RootedForest, ...]  # Δ_0 .. Δ_{t-1}

    def to_json(self, G: RootedForest) -> dict:
        lab = G.labels
        return {
            "leaf": lab[self.leaf],
            "path": [lab[v] for v in self.path],
            "x0": None if self.x0 is None else lab[self.x0],
            "remainder": sorted(self.remainder.labels),
            "sides": [sorted(s.labels) for s in self.sides],
        }


def leaf_decomposition(G: RootedForest, z: int, t: int) -> LeafDecomposition:
    _check_t(t)
    h = G.height
    if not 0 <= z < G.n or G.levels[z] != h:
        raise PreconditionError(f"vertex {z} is not a leaf at the top level {h}")
    if h < t - 1:
        raise PreconditionError(f"height {h} is below t - 1 = {t - 1}")
    path = [z]
    for _ in range(t - 1):
        path.append(G.parent[path[-1]])
    path.reverse()
    x = [G.parent[path[0]]] + path  # x[0] may be -1
    x0 = x[0] if x[0] >= 0 else None
    sub = {j: set(G.subtree(x[j])) for j in range(0 if x0 is not None else 1, t + 1)}
    sides = []
    for j in range(t):
        if j == 0 and x0 is None:
            sides.append(EMPTY)
            continue
        part = sub[j] - sub[j + 1] - {x[j]}
        sides.append(G.induced(part) if part else EMPTY)
    cut = sub[0] if x0 is not None else sub[1]
    remainder = G.remove(cut)
    return LeafDecomposition(z, tuple(path), x0, remainder, tuple(sides))


def top_leaves(G: RootedForest) -> list[int]:
    h = G.height
    return [v for v in range(G.n) if G.levels[v] == h]


# --------------------------------------------------------------------------
# closed forms


def _formula_sum(G: RootedForest, t: int) -> int:
    h = G.height
    D = level_outdegree_sums(G)
    return sum(1 if i == -1 else D[i] for i in range(h - t, h - 1))


def _check_perfect_range(G: RootedForest, t: int):
    _check_t(t)
    h = G.height
    if h < 1:
        raise PreconditionError("height must be at least 1")
    if not -(-(h + 1) // 2) <= t <= h + 1:
        raise PreconditionError(f"t = {t} outside ceil((h+1)/2)..h+1 for h = {h}")


def reg_formula_perfect(G: RootedForest, t: int) -> int:
    """Sum of ``D_i`` for levels ``h-t .. h-2``, with ``D_{-1} = 1``."""
    if not G.is_tree() or not is_perfect(G):
        raise PreconditionError("closed formula needs a perfect rooted tree")
    _check_perfect_range(G, t)
    return _formula_sum(G, t)


def reg_upper_bound_general(G: RootedForest, t: int) -> int:
    """Perfect-tree sum plus ``(h - i - 1) l_i`` over levels ``t-1 .. h-2``, on the clean form."""
    if not G.is_tree():
        raise PreconditionError("bound is stated for rooted trees")
    _check_perfect_range(G, t)
    C = clean_form(G, t)
    h = C.height
    per = tree_stats(C).leaves_per_level
    return _formula_sum(C, t) + sum((h - i - 1) * per[i] for i in range(t - 1, h - 1))


def reg_broom(G: RootedForest, t: int) -> int:
    _check_t(t)
    if broom_handle(G) is None:
        raise PreconditionError("not a broom")
    h = G.height
    if h < t - 1:
        raise PreconditionError(f"height {h} is below t - 1 = {t - 1}")
    return (t - 1) * ceil((h - t + 2) / (t + 1))


# --------------------------------------------------------------------------
# leaf recursion


class _RecursionMemo:
    def __init__(self):
        self.table: dict = {}
        self.lock = threading.Lock()


_MEMO = _RecursionMemo()


def _canonical_tree(code: tuple) -> RootedTree:
    return RootedTree.from_code(code)


def _first_top_leaf(G: RootedForest) -> int:
    """Top-level leaf reached first by a traversal visiting children in code order."""
    h = G.height
    codes = {}

    def code(v):
        if v not in codes:
            codes[v] = tuple(sorted(code(c) for c in G.children[v]))
        return codes[v]

    best = None

    def walk(v):
        nonlocal best
        if best is not None:
            return
        if G.levels[v] == h:
            best = v
            return
        for c in sorted(G.children[v], key=lambda c: (code(c), c)):
            walk(c)

    for r in sorted(G.roots, key=lambda r: (code(r), r)):
        walk(r)
    return best


def _reg_tree_code(code: tuple, t: int, depth: int = 0) -> int:
    if depth > 10_000:
        raise ResourceError("leaf recursion too deep")
    key = (code, t)
    hit = _MEMO.table.get(key)
    if hit is not None:
        return hit
    G = _canonical_tree(code)
    if t == 1 or G.height < t - 1:
        val = 0
    else:
        z = _first_top_leaf(G)
        dec = leaf_decomposition(G, z, t)
        without = _reg_forest(G.remove([z]), t, depth + 1)
        branch = _reg_forest(dec.remainder, t, depth + 1) + (t - 1)
        for j, side in enumerate(dec.sides):
            branch += _reg_forest(side, t - j, depth + 1)
        val = max(without, branch)
    with _MEMO.lock:
        _MEMO.table[key] = val
    return val


def _reg_forest(F: RootedForest, t: int, depth: int = 0) -> int:
    if F.n == 0:
        return 0
    return sum(_reg_tree_code(c, t, depth) for c in F.shape())


def reg_recursive(G: RootedForest, t: int) -> int:
    """Exact ``reg(R/I_t)`` by the leaf recursion; forests add over components."""
    _check_t(t)
    return _reg_forest(G, t)


def alpha_value(G: RootedForest, t: int) -> int:
    """Max over top-level leaves z of reg(Γ(z)) + Σ_j reg_{t-j}(Δ_j) + (t - 1)."""
    best = None
    for z in top_leaves(G):
        dec = leaf_decomposition(G, z, t)
        v = reg_recursive(dec.remainder, t) + (t - 1)
        for j, side in enumerate(dec.sides):
            v += reg_recursive(side, t - j)
        best = v if best is None else max(best, v)
    return best


def alpha_bound(G: RootedForest, t: int) -> int:
    """``max(reg(R/I_t(Γ')), α(Γ))`` with Γ' the tree minus its top level."""
    _check_t(t)
    if not G.is_tree():
        raise PreconditionError("bound is stated for rooted trees")
    if G.height < t - 1:
        raise PreconditionError(f"height {G.height} is below t - 1 = {t - 1}")
    trimmed = G.remove(top_leaves(G))
    return max(reg_recursive(trimmed, t), alpha_value(G, t))


# --------------------------------------------------------------------------
# brooms: facet order of the path complex


@dataclass(frozen=True)
class BroomOrder:
    complex: SimplicialComplex
    ordering: tuple[int, ...]
    index: tuple[tuple[int, int], ...]  # (i, j) label of each facet


def broom_facet_order(G: RootedForest, t: int) -> BroomOrder:
    """Facets ``F_(i,j)``: handle vertices at levels i..i+t-2 plus vertex j at level i+t-1.

    Vertex 0 at each level is the handle; bristles get 1, 2, ... by vertex
    number.  Facets are listed by increasing i and, within i, decreasing j.
    """
    handle = broom_handle(G)
    if handle is None:
        raise PreconditionError("not a broom")
    h = G.height
    if not 2 <= t <= h + 1:
        raise PreconditionError(f"t = {t} outside 2..h+1 for h = {h}")
    at_level: list[list[int]] = [[handle[i]] for i in range(h + 1)]
    for v in range(G.n):
        lv = G.levels[v]
        if v != handle[lv]:
            at_level[lv].append(v)
    for lv in range(h + 1):
        at_level[lv][1:] = sorted(at_level[lv][1:])
    index = []
    facets = []
    for i in range(h - t + 2):
        top = at_level[i + t - 1]
        for j in range(len(top) - 1, -1, -1):
            index.append((i, j))
            facets.append([handle[i + k] + 1 for k in range(t - 1)] + [top[j] + 1])
    cx = SimplicialComplex.from_facets(facets, G.n)
    ordering = tuple(range(len(facets)))
    if not cx.is_good_leaf_order(ordering):
        raise InvariantViolation("broom facet order is not a good-leaf order", witness=index)
    return BroomOrder(cx, ordering, tuple(index))


def clear_cache():
    with _MEMO.lock:
        _MEMO.table.clear()
