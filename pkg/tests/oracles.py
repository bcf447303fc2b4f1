"""Deliberately naive reference computations used to freeze expected values.

Nothing here imports the package: ideals are lists of exponent tuples and
complexes are lists of sets.
"""

from fractions import Fraction
from itertools import combinations, permutations, product


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def minimal(gens):
    gens = sorted(set(map(tuple, gens)), key=lambda g: (sum(g), g))
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return sorted(out)


def power(gens, s):
    out = [tuple([0] * len(gens[0]))]
    for _ in range(s):
        out = [tuple(a + b for a, b in zip(x, g)) for x in out for g in gens]
    return minimal(out)


def _rank(rows):
    rows = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def reduced_homology(faces):
    """faces: set of frozensets closed under subsets (the empty face included if nonempty)."""
    if not faces:
        return {}
    by = {}
    for f in faces:
        by.setdefault(len(f) - 1, []).append(tuple(sorted(f)))
    for d in by:
        by[d].sort()
    top = max(by)
    ranks = {}
    for d in range(0, top + 1):
        rows_idx = {f: i for i, f in enumerate(by.get(d - 1, []))}
        mat = []
        for f in by.get(d, []):
            col = [0] * len(rows_idx)
            for k in range(len(f)):
                col[rows_idx[f[:k] + f[k + 1:]]] += (-1) ** k
            mat.append(col)
        ranks[d] = _rank(mat) if mat and rows_idx else 0
    out = {}
    for d in range(-1, top + 1):
        n = len(by.get(d, []))
        h = n - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if h:
            out[d] = h
    return out


def betti(gens):
    """Graded Betti numbers {(i, j): b} by brute force over every b below the lcm."""
    gens = minimal(gens)
    n = len(gens[0])
    top = tuple(max(g[k] for g in gens) for k in range(n))
    table = {}
    for b in product(*[range(t + 1) for t in top]):
        supp = [k for k in range(n) if b[k] > 0]
        faces = set()
        for r in range(len(supp) + 1):
            for F in combinations(supp, r):
                c = list(b)
                for k in F:
                    c[k] -= 1
                if any(_divides(g, c) for g in gens):
                    faces.add(frozenset(F))
        for d, h in reduced_homology(faces).items():
            key = (d + 1, sum(b))
            table[key] = table.get(key, 0) + h
    return table


def reg(gens):
    return max(j - i for (i, j) in betti(gens))


# ---- complexes


def _is_good_leaf(F, others):
    inter = [F & G for G in others]
    inter.sort(key=len)
    return all(a <= b for a, b in zip(inter, inter[1:]))


def is_forest(facets):
    """Some permutation where every facet is a good leaf of its prefix."""
    facets = [frozenset(f) for f in facets]
    for perm in permutations(facets):
        if all(_is_good_leaf(perm[i], perm[:i]) for i in range(1, len(perm))):
            return True
    return False


def irredundant_chains(facets, G, H):
    """All irredundant proper chains from G to H, enumerated over facet sequences."""
    facets = [frozenset(f) for f in facets]
    d = max(len(f) for f in facets) - 1
    out = []

    def adj(a, b):
        return len(a & b) == d

    def extend(seq):
        last = seq[-1]
        if last == H:
            # irredundant: no shortcut between non-consecutive members
            if all(not adj(seq[i], seq[j]) for i in range(len(seq)) for j in range(i + 2, len(seq))):
                out.append(list(seq))
            return
        for F in facets:
            if F not in seq and adj(last, F):
                extend(seq + [F])

    extend([frozenset(G)])
    return out
