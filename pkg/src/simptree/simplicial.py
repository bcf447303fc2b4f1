"""Simplicial complexes given by facets, with the forest combinatorics used
for facet ideals: good leaves, good-leaf orders, proper chains, distance and
the intersection property.

Vertices are 1-based at the boundary (parsing, printing) and 0-based inside.
Facets keep the index they had in the input; orderings are lists of facet
indices.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import InvariantViolation, PreconditionError, StructuralError
from .monomial import MonomialIdeal


@dataclass(frozen=True)
class SimplicialComplex:
    vertex_count: int
    facets: tuple[frozenset[int], ...]
    labels: tuple[int, ...] = ()  # internal vertex -> external 1-based label
    dropped: tuple[int, ...] = ()  # external labels of isolated vertices removed at parse time

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]], n: Optional[int] = None) -> "SimplicialComplex":
        """Build from 1-based facets, dropping vertices that lie in no facet."""
        raw = [tuple(f) for f in facets]
        sets = []
        for k, f in enumerate(raw):
            if not f:
                raise StructuralError(f"facet {k} is empty")
            if len(set(f)) != len(f):
                raise StructuralError(f"facet {k} repeats a vertex: {list(f)}")
            for v in f:
                if not isinstance(v, int) or v < 1 or (n is not None and v > n):
                    raise StructuralError(f"facet {k} has invalid vertex {v!r}")
            sets.append(frozenset(f))
        for a, b in combinations(range(len(sets)), 2):
            if sets[a] <= sets[b] or sets[b] <= sets[a]:
                raise StructuralError(
                    f"facets {a} {sorted(sets[a])} and {b} {sorted(sets[b])} are nested; "
                    "facets must be inclusion-maximal"
                )
        used = sorted(set().union(*sets)) if sets else []
        if n is None:
            n = used[-1] if used else 0
        dropped = tuple(v for v in range(1, n + 1) if v not in set(used))
        index = {v: k for k, v in enumerate(used)}
        return cls(
            len(used),
            tuple(frozenset(index[v] for v in f) for f in sets),
            tuple(used),
            dropped,
        )

    @classmethod
    def from_json(cls, data) -> "SimplicialComplex":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise StructuralError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
        if not isinstance(data, dict) or "facets" not in data:
            raise StructuralError('complex file needs an object with "n" and "facets"')
        n = data.get("n")
        if n is not None and (not isinstance(n, int) or n < 0):
            raise StructuralError(f'"n" must be a nonnegative integer, got {n!r}')
        facets = data["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise StructuralError('"facets" must be a list of vertex lists')
        return cls.from_facets(facets, n)

    def to_json(self) -> dict:
        n = max(self.labels, default=0)
        if self.dropped:
            n = max(n, max(self.dropped))
        return {"n": n, "facets": [self.external(f) for f in self.facets]}

    def external(self, face: Iterable[int]) -> list[int]:
        return sorted(self.labels[v] for v in face)

    @property
    def num_facets(self) -> int:
        return len(self.facets)

    def dimension(self) -> int:
        if not self.facets:
            raise PreconditionError("the empty complex has no dimension")
        return max(len(f) for f in self.facets) - 1

    def is_pure(self) -> bool:
        if not self.facets:
            raise PreconditionError("purity of the empty complex is undefined")
        return len({len(f) for f in self.facets}) == 1

    def facet_ideal(self) -> MonomialIdeal:
        return MonomialIdeal.from_supports(self.facets, self.vertex_count)

    def facet_monomial_tuple(self, k: int) -> tuple[int, ...]:
        e = [0] * self.vertex_count
        for v in self.facets[k]:
            e[v] = 1
        return tuple(e)

    def subcomplex(self, indices: Sequence[int]) -> "SimplicialComplex":
        """Complex on the chosen facets, keeping the ambient vertex set."""
        return SimplicialComplex(
            self.vertex_count, tuple(self.facets[i] for i in indices), self.labels
        )

    def index_of(self, facet) -> int:
        """Facet index from an index or from a set of external vertex labels."""
        if isinstance(facet, int):
            if not 0 <= facet < len(self.facets):
                raise StructuralError(f"no facet with index {facet}")
            return facet
        inv = {lab: v for v, lab in enumerate(self.labels)}
        try:
            target = frozenset(inv[v] for v in facet)
        except KeyError:
            raise StructuralError(f"{sorted(facet)} is not a facet") from None
        for k, f in enumerate(self.facets):
            if f == target:
                return k
        raise StructuralError(f"{sorted(facet)} is not a facet")

    # ---- leaves and forests

    def is_good_leaf(self, facet, among: Optional[Iterable[int]] = None) -> bool:
        """Intersections of the facet with every other facet form a chain."""
        k = self.index_of(facet)
        active = range(len(self.facets)) if among is None else among
        return _good_leaf(self.facets, k, active)

    def good_leaf_order(self) -> Optional[list[int]]:
        """Greedy: take the lowest-index good leaf, put it last, repeat."""
        remaining = list(range(len(self.facets)))
        tail = []
        while remaining:
            for k in remaining:
                if _good_leaf(self.facets, k, remaining):
                    remaining.remove(k)
                    tail.append(k)
                    break
            else:
                return None
        return tail[::-1]

    def is_forest(self) -> bool:
        return self.good_leaf_order() is not None

    def is_good_leaf_order(self, ordering: Sequence[int]) -> bool:
        if sorted(ordering) != list(range(len(self.facets))):
            return False
        return all(_good_leaf(self.facets, ordering[i], ordering[: i + 1]) for i in range(1, len(ordering)))

    # ---- codimension-one structure (pure complexes)

    def _require_pure(self):
        if not self.facets:
            raise PreconditionError("empty complex")
        if not self.is_pure():
            raise PreconditionError("codimension-one notions need a pure complex")

    def codim_one_graph(self) -> dict[int, list[int]]:
        self._require_pure()
        d = self.dimension()
        adj: dict[int, list[int]] = {k: [] for k in range(len(self.facets))}
        for a, b in combinations(range(len(self.facets)), 2):
            if len(self.facets[a] & self.facets[b]) == d:
                adj[a].append(b)
                adj[b].append(a)
        return adj

    def is_connected_codim_one(self) -> bool:
        adj = self.codim_one_graph()
        seen = {0}
        todo = [0]
        while todo:
            u = todo.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.facets)

    def _require_chain_hypotheses(self):
        self._require_pure()
        if not self.is_forest():
            raise PreconditionError("proper-chain distance needs a simplicial forest")
        if not self.is_connected_codim_one():
            raise PreconditionError("proper-chain distance needs connectivity in codimension one")

    def irredundant_proper_chain(self, G, H, check: bool = True) -> list[int]:
        """The unique irredundant proper chain from G to H, as facet indices.

        Irredundant proper chains are exactly the induced paths of the
        codimension-one graph.  The shortest path is one of them; with
        ``check`` every induced path is enumerated to confirm uniqueness.
        """
        self._require_chain_hypotheses()
        g, h = self.index_of(G), self.index_of(H)
        adj = self.codim_one_graph()
        path = _shortest_path(adj, g, h)
        if check:
            found = _induced_paths(adj, g, h, limit=2)
            if len(found) != 1:
                raise InvariantViolation(
                    f"{len(found)} irredundant proper chains between facets {g} and {h}",
                    witness={"G": g, "H": h, "chains": found},
                )
        return path

    def distance(self, G, H) -> int:
        return len(self.irredundant_proper_chain(G, H)) - 1

    def intersection_property(self) -> "IntersectionResult":
        if not self.facets:
            return IntersectionResult(True, "OK")
        if not self.is_pure():
            return IntersectionResult(False, "NOT_PURE")
        if not self.is_forest():
            return IntersectionResult(False, "NOT_FOREST")
        if not self.is_connected_codim_one():
            return IntersectionResult(False, "NOT_CODIM1")
        d = self.dimension()
        adj = self.codim_one_graph()
        for g in range(len(self.facets)):
            dist = _bfs_distances(adj, g)
            for h in range(g + 1, len(self.facets)):
                if len(self.facets[g] & self.facets[h]) - 1 != d - dist[h]:
                    return IntersectionResult(False, "PAIR_FAIL", (g, h))
        return IntersectionResult(True, "OK")

    def adjacent_good_leaf_order(self) -> list[int]:
        """Good-leaf order whose consecutive facets meet in codimension one.

        Built back to front: start from a good leaf; at each step move to a
        codimension-one neighbour of the last chosen facet that has a free
        vertex in what remains, which is then a good leaf of what remains.
        """
        ip = self.intersection_property()
        if not ip:
            raise PreconditionError(f"intersection property fails ({ip.reason})")
        r = len(self.facets)
        if r == 0:
            return []
        d = self.dimension()
        remaining = list(range(r))
        start = next(k for k in remaining if _good_leaf(self.facets, k, remaining))
        seq = [start]
        remaining.remove(start)
        while remaining:
            last = self.facets[seq[-1]]
            pick = None
            for k in remaining:
                if len(self.facets[k] & last) == d and _has_free_vertex(self.facets, k, remaining):
                    pick = k
                    break
            if pick is None:
                raise InvariantViolation(
                    "no codimension-one neighbour with a free vertex", witness={"sequence": seq}
                )
            if not _good_leaf(self.facets, pick, remaining):
                raise InvariantViolation(
                    f"facet {pick} is not a good leaf of the remaining complex",
                    witness={"sequence": seq, "facet": pick},
                )
            seq.append(pick)
            remaining.remove(pick)
        order = seq[::-1]
        if not self.is_good_leaf_order(order):
            raise InvariantViolation("constructed order is not a good-leaf order", witness=order)
        for a, b in zip(order, order[1:]):
            if len(self.facets[a] & self.facets[b]) != d:
                raise InvariantViolation("consecutive facets not at distance one", witness=(a, b))
        return order

    def ordering_consequences_check(self, ordering: Sequence[int]) -> bool:
        return self.ordering_consequences_witness(ordering) is None

    def ordering_consequences_witness(self, ordering: Sequence[int]) -> Optional[dict]:
        """First failure of the two ordering properties, or None.

        (a) a vertex of F_j outside F_i (j < i) lies in no F_k with k >= i;
        (b) for j < i some k in [j, i-1] has |F_k ∩ F_i| = |F_i| - 1 and
            F_j ∩ F_k not inside F_i.
        """
        F = [self.facets[k] for k in ordering]
        r = len(F)
        for i in range(r):
            for j in range(i):
                for x in F[j] - F[i]:
                    for k in range(i, r):
                        if x in F[k]:
                            return {"property": "a", "j": j, "i": i, "k": k, "x": x}
                if not any(
                    len(F[k] & F[i]) == len(F[i]) - 1 and not (F[j] & F[k]) <= F[i]
                    for k in range(j, i)
                ):
                    return {"property": "b", "j": j, "i": i}
        return None


@dataclass(frozen=True)
class IntersectionResult:
    holds: bool
    reason: str
    pair: Optional[tuple[int, int]] = None

    def __bool__(self):
        return self.holds

    def code(self) -> str:
        if self.reason == "PAIR_FAIL":
            return f"PAIR_FAIL({self.pair[0]},{self.pair[1]})"
        return self.reason


def _good_leaf(facets, k: int, active) -> bool:
    F = facets[k]
    inters = sorted({F & facets[h] for h in active if h != k}, key=len)
    return all(a <= b for a, b in zip(inters, inters[1:]))


def _has_free_vertex(facets, k: int, active) -> bool:
    others = set()
    for h in active:
        if h != k:
            others |= facets[h]
    return bool(facets[k] - others)


def _bfs_distances(adj, src) -> dict[int, int]:
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def _shortest_path(adj, src, dst) -> list[int]:
    prev = {src: None}
    q = deque([src])
    while q:
        u = q.popleft()
        if u == dst:
            break
        for w in sorted(adj[u]):
            if w not in prev:
                prev[w] = u
                q.append(w)
    if dst not in prev:
        raise PreconditionError(f"facets {src} and {dst} are not joined by a proper chain")
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def _induced_paths(adj, src, dst, limit: int) -> list[list[int]]:
    """Chordless paths from src to dst (stops once ``limit`` are found)."""
    nbrs = {u: set(ws) for u, ws in adj.items()}
    out: list[list[int]] = []

    def extend(path):
        if len(out) >= limit:
            return
        u = path[-1]
        if u == dst:
            out.append(list(path))
            return
        for w in sorted(nbrs[u]):
            if w in path:
                continue
            # w may only touch the current endpoint, otherwise a chord appears
            if any(p in nbrs[w] for p in path[:-1]):
                continue
            path.append(w)
            extend(path)
            path.pop()

    extend([src])
    return out


def exhaustive_good_leaf_order(cx: SimplicialComplex) -> Optional[list[int]]:
    """Search every permutation; for cross-checking the greedy order."""
    from itertools import permutations

    for perm in permutations(range(cx.num_facets)):
        if cx.is_good_leaf_order(list(perm)):
            return list(perm)
    return None
