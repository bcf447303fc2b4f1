"""Powers of facet ideals of simplicial forests and of t-path ideals.

Power generators are written over an ordered facet list ``F_1..F_r`` as
``m_1^a_1 ... m_r^a_r``; under the intersection property every minimal
generator of ``I^s`` has exactly one such exponent vector, which this module
checks rather than assumes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Optional, Sequence

from .errors import InvariantViolation, PreconditionError, ResourceError
from .homology import (
    QQ,
    FieldSpec,
    has_linear_first_syzygies,
    has_linear_quotients,
    has_linear_resolution,
    linear_quotient_order,
    quotient_regularity,
    regularity,
)
from .monomial import (
    DEFAULT_MAX_GENERATORS,
    Monomial,
    MonomialIdeal,
    colon_by_monomial,
    ideal_power,
    ideal_sum,
    is_equigenerated,
    minimal_tuples,
)
from .rooted import (
    RootedForest,
    broom_handle,
    clean_form,
    is_perfect,
    reg_broom,
    reg_formula_perfect,
)
from .simplicial import SimplicialComplex


@dataclass(frozen=True)
class PowerGenerator:
    exponents: tuple[int, ...]  # over the ordered facets
    monomial: Monomial


@dataclass
class ClaimOutcome:
    claim: str
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        return {"claim": self.claim, "passed": self.passed, "witness": self.witness}


@dataclass
class VerificationReport:
    instance: dict
    claims: list[ClaimOutcome] = field(default_factory=list)
    characteristic: int = 0
    timings: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def add(self, claim: str, passed: bool, witness=None):
        self.claims.append(ClaimOutcome(claim, bool(passed), witness))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def failures(self) -> list[ClaimOutcome]:
        return [c for c in self.claims if not c.passed]

    def to_json(self, include_timings: bool = False) -> dict:
        out = {
            "instance": self.instance,
            "characteristic": self.characteristic,
            "passed": self.passed,
            "claims": [c.to_json() for c in self.claims],
        }
        if self.data:
            out["data"] = self.data
        if include_timings:
            out["timings"] = self.timings
        return out


def _facet_tuple(cx: SimplicialComplex, k: int) -> tuple[int, ...]:
    return cx.facet_monomial_tuple(k)


def _check_ordering(cx: SimplicialComplex, ordering: Sequence[int]):
    if sorted(ordering) != list(range(cx.num_facets)):
        raise PreconditionError("ordering must be a permutation of the facet indices")


def power_generators_canonical(
    cx: SimplicialComplex,
    ordering: Sequence[int],
    s: int,
    max_gens: int = DEFAULT_MAX_GENERATORS,
) -> list[PowerGenerator]:
    """Minimal generators of ``I(Δ)^s`` with their exponent vectors, largest first in lex."""
    if s < 1:
        raise PreconditionError(f"power must be >= 1, got {s}")
    _check_ordering(cx, ordering)
    r = len(ordering)
    n = cx.vertex_count
    m = [_facet_tuple(cx, k) for k in ordering]
    by_monomial: dict[tuple, list[tuple]] = {}
    count = 0
    for combo in combinations_with_replacement(range(r), s):
        count += 1
        if count > max_gens * 50:
            raise ResourceError(f"enumerating products for s = {s} exceeded the cap")
        a = [0] * r
        e = [0] * n
        for c in combo:
            a[c] += 1
            for v, x in enumerate(m[c]):
                e[v] += x
        by_monomial.setdefault(tuple(e), []).append(tuple(a))
    minimal = minimal_tuples(by_monomial)
    if len(minimal) > max_gens:
        raise ResourceError(f"I^{s} has {len(minimal)} generators, cap is {max_gens}")
    out = []
    for e in minimal:
        vecs = by_monomial[e]
        if len(vecs) != 1:
            raise InvariantViolation(
                f"generator {Monomial(e)} of I^{s} has {len(vecs)} factorizations",
                witness={"monomial": list(e), "exponent_vectors": [list(v) for v in vecs]},
            )
        out.append(PowerGenerator(vecs[0], Monomial(e)))
    out.sort(key=lambda g: g.exponents, reverse=True)
    return out


def _quotient(P: tuple, N: tuple) -> tuple:
    """Generator of the principal colon (P) : N."""
    return tuple(max(p - q, 0) for p, q in zip(P, N))


def witness_for_pair(cx: SimplicialComplex, ordering: Sequence[int], M: PowerGenerator, N: PowerGenerator):
    """Build (p, q, k, x, c) for a pair M > N; returns None when no valid k or x exists."""
    F = [cx.facets[k] for k in ordering]
    b, a = M.exponents, N.exponents
    p = next(i for i in range(len(a)) if b[i] > a[i])
    q = next(i for i in range(len(a)) if b[i] < a[i])
    for k in range(p, q):
        if not (F[p] & F[k]) <= F[q] and len(F[k] & F[q]) == len(F[q]) - 1:
            x = min((F[p] & F[k]) - F[q])
            c = list(a)
            c[k] += 1
            c[q] -= 1
            return {"p": p, "q": q, "k": k, "x": x, "c": tuple(c)}
    return None


def verify_linear_quotients_power(
    cx: SimplicialComplex, s: int, ordering: Optional[Sequence[int]] = None
) -> VerificationReport:
    t0 = time.perf_counter()
    ip = cx.intersection_property()
    if not ip:
        raise PreconditionError(f"intersection property fails ({ip.reason})")
    if ordering is None:
        ordering = cx.adjacent_good_leaf_order()
    rep = VerificationReport({"facets": cx.to_json()["facets"], "s": s, "ordering": list(ordering)})
    gens = power_generators_canonical(cx, ordering, s)
    rep.add("unique_factorization", True)
    seq = [g.monomial for g in gens]
    lq = has_linear_quotients(seq)
    rep.add("canonical_order_linear_quotients", lq, None if lq else [str(g) for g in seq])

    by_vec = {g.exponents: g for g in gens}
    bad = None
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            M, N = gens[i], gens[j]
            w = witness_for_pair(cx, ordering, M, N)
            problem = None
            if w is None:
                problem = "no admissible k"
            else:
                P = by_vec.get(w["c"])
                if P is None:
                    problem = "P is not a minimal generator"
                elif not w["c"] > N.exponents:
                    problem = "P does not precede N"
                else:
                    pn = _quotient(P.monomial.exponents, N.monomial.exponents)
                    mn = _quotient(M.monomial.exponents, N.monomial.exponents)
                    if sum(pn) != 1 or pn[w["x"]] != 1:
                        problem = "(P):N is not generated by x"
                    elif mn[w["x"]] == 0:
                        problem = "(M):N not inside (x)"
            if problem:
                bad = {"M": list(M.exponents), "N": list(N.exponents), "reason": problem, "recipe": w}
                break
        if bad:
            break
    rep.add("witness_recipe", bad is None, bad)
    rep.timings["total"] = time.perf_counter() - t0
    return rep


def verify_theorem_A(
    cx: SimplicialComplex,
    s_max: int,
    field: FieldSpec = QQ,
    max_gens: int = DEFAULT_MAX_GENERATORS,
    lq_search_nodes: int = 200_000,
) -> VerificationReport:
    """Evaluate the six equivalent conditions and check they agree for each s."""
    t0 = time.perf_counter()
    if not cx.is_forest():
        raise PreconditionError("the equivalence is stated for simplicial forests")
    rep = VerificationReport({"facets": cx.to_json()["facets"], "s_max": s_max}, characteristic=field.characteristic)
    I = cx.facet_ideal()
    pure = cx.is_pure()
    ip = cx.intersection_property()
    item1 = ip.holds
    item2 = has_linear_resolution(I, field)
    ordering = cx.adjacent_good_leaf_order() if item1 else None
    rows = []
    for s in range(1, s_max + 1):
        Is = ideal_power(I, s, max_gens)
        equi = is_equigenerated(Is) is not None
        item5 = has_linear_resolution(Is, field)
        item6 = has_linear_first_syzygies(Is, field) if equi else False
        item34 = None
        if pure:
            if ordering is not None:
                gens = power_generators_canonical(cx, ordering, s, max_gens)
                item34 = has_linear_quotients([g.monomial for g in gens])
            else:
                item34 = linear_quotient_order(Is, field, lq_search_nodes) is not None
        row = {"s": s, "1": item1, "2": item2, "3/4": item34, "5": item5, "6": item6}
        if equi and not pure:
            row["note"] = "power is equigenerated on an impure complex"
        rows.append(row)
        values = {item1, item2, item5, item6}
        if item34 is not None:
            values.add(item34)
        rep.add(f"items_agree_s{s}", len(values) == 1, None if len(values) == 1 else row)
    rep.data = {"pure": pure, "intersection": ip.code(), "items": rows}
    rep.timings["total"] = time.perf_counter() - t0
    return rep


def colon_identity_sides(cx: SimplicialComplex, ordering: Sequence[int], s: int):
    """Yield (identity id, i, left, right) for the four colon identities."""
    if s < 1:
        raise PreconditionError(f"power must be >= 1, got {s}")
    _check_ordering(cx, ordering)
    if not cx.is_good_leaf_order(ordering):
        raise PreconditionError("colon identities need a good-leaf order")
    n = cx.vertex_count
    r = len(ordering)
    m = [Monomial(_facet_tuple(cx, k)) for k in ordering]  # m[0] is m_1

    def I_prefix(i):  # I(Δ_i), facets F_1..F_i
        return MonomialIdeal.from_tuples([g.exponents for g in m[:i]], n)

    def J(i):  # (m_{i+1}, .., m_r)
        return MonomialIdeal.from_tuples([g.exponents for g in m[i:]], n)

    def principal(g):
        return MonomialIdeal((g,), n)

    I = I_prefix(r)
    yield "1", r, colon_by_monomial(ideal_power(I, s + 1), m[r - 1]), ideal_power(I, s)
    for i in range(1, r):
        left = colon_by_monomial(ideal_sum(ideal_power(I_prefix(i), s + 1), J(i)), m[i - 1])
        right = ideal_sum(ideal_power(I_prefix(i), s), colon_by_monomial(J(i), m[i - 1]))
        yield "2", i, left, right
    if r >= 2:
        left = ideal_sum(ideal_sum(ideal_power(I_prefix(1), s + 1), J(1)), principal(m[0]))
        yield "3", 1, left, I
    for i in range(2, r):
        left = ideal_sum(ideal_sum(ideal_power(I_prefix(i), s + 1), J(i)), principal(m[i - 1]))
        right = ideal_sum(ideal_power(I_prefix(i - 1), s + 1), J(i - 1))
        yield "4", i, left, right


def verify_colon_identities(cx: SimplicialComplex, ordering: Sequence[int], s: int) -> VerificationReport:
    t0 = time.perf_counter()
    rep = VerificationReport({"facets": cx.to_json()["facets"], "ordering": list(ordering), "s": s})
    first_fail: dict[str, object] = {}
    seen = set()
    for ident, i, left, right in colon_identity_sides(cx, ordering, s):
        seen.add(ident)
        if left != right and ident not in first_fail:
            first_fail[ident] = {"i": i, "left": str(left), "right": str(right)}
    for ident in ("1", "2", "3", "4"):
        if ident in seen:
            rep.add(f"identity_{ident}", ident not in first_fail, first_fail.get(ident))
    rep.timings["total"] = time.perf_counter() - t0
    return rep


def power_reg_upper_bound(
    cx: SimplicialComplex,
    ordering: Sequence[int],
    s: int,
    reg_evaluator: Optional[Callable[[MonomialIdeal], int]] = None,
) -> int:
    """Upper bound for ``reg(R/I^{s+1})`` from the short exact sequences along the order."""
    if s < 1:
        raise PreconditionError(f"power must be >= 1, got {s}")
    _check_ordering(cx, ordering)
    if not cx.is_good_leaf_order(ordering):
        raise PreconditionError("the bound needs a good-leaf order")
    reg = reg_evaluator or (lambda J: quotient_regularity(J, QQ))
    n = cx.vertex_count
    r = len(ordering)
    m = [Monomial(_facet_tuple(cx, k)) for k in ordering]
    I = MonomialIdeal.from_tuples([g.exponents for g in m], n)
    best = max(m[r - 1].degree + reg(ideal_power(I, s)), reg(I))
    for i in range(1, r):
        Ii = MonomialIdeal.from_tuples([g.exponents for g in m[:i]], n)
        Ji = MonomialIdeal.from_tuples([g.exponents for g in m[i:]], n)
        inner = ideal_sum(ideal_power(Ii, s), colon_by_monomial(Ji, m[i - 1]))
        best = max(best, m[i - 1].degree + reg(inner))
    return best


def power_reg_broom(G: RootedForest, t: int, s: int) -> int:
    if s < 1:
        raise PreconditionError(f"power must be >= 1, got {s}")
    if broom_handle(G) is None:
        raise PreconditionError("not a broom")
    if not 2 <= t <= G.height + 1:
        raise PreconditionError(f"t = {t} outside 2..h+1")
    return t * (s - 1) + reg_broom(G, t)


def power_reg_perfect_top(G: RootedForest, s: int) -> int:
    """Regularity of ``R/I_t^s`` for a perfect tree with t = height + 1."""
    if s < 1:
        raise PreconditionError(f"power must be >= 1, got {s}")
    if not G.is_tree() or not is_perfect(G):
        raise PreconditionError("needs a perfect rooted tree")
    h = G.height
    if h < 1:
        raise PreconditionError("height must be at least 1")
    t = h + 1
    return t * (s - 1) + reg_formula_perfect(G, t)


def classify_path_power_linearity(G: RootedForest, t: int) -> bool:
    """Clean form is a broom of height at most 2t - 1."""
    if not isinstance(t, int) or t < 2:
        raise PreconditionError("the classification needs t >= 2")
    if G.height < t - 1:
        raise PreconditionError(f"height {G.height} is below t - 1 = {t - 1}")
    C = clean_form(G, t)
    return broom_handle(C) is not None and C.height <= 2 * t - 1


def conjecture_D_check(
    cx: SimplicialComplex,
    s_max: int,
    field: FieldSpec = QQ,
    max_gens: int = DEFAULT_MAX_GENERATORS,
) -> VerificationReport:
    """Slack ``(d+1)(s-1) + reg(I) - reg(I^s)`` per s; negative slack is a finding, not a failure."""
    t0 = time.perf_counter()
    if not cx.is_forest():
        raise PreconditionError("the scan is for simplicial forests")
    rep = VerificationReport({"facets": cx.to_json()["facets"], "s_max": s_max}, characteristic=field.characteristic)
    scopes = [("joint", cx)]
    comps = _connected_components(cx)
    if len(comps) > 1:
        for c, idx in enumerate(comps):
            scopes.append((f"component{c}", cx.subcomplex(idx)))
    rows = []
    for name, sub in scopes:
        I = sub.facet_ideal()
        d = sub.dimension()
        r1 = regularity(I, field)
        for s in range(1, s_max + 1):
            rs = regularity(ideal_power(I, s, max_gens), field)
            bound = (d + 1) * (s - 1) + r1
            rows.append({"scope": name, "s": s, "reg": rs, "bound": bound, "slack": bound - rs,
                         "finding": bound - rs < 0})
    rep.data = {"tree": len(comps) == 1, "rows": rows,
                "min_slack": min(r["slack"] for r in rows),
                "findings": sum(r["finding"] for r in rows)}
    rep.timings["total"] = time.perf_counter() - t0
    return rep


def _connected_components(cx: SimplicialComplex) -> list[list[int]]:
    r = cx.num_facets
    seen = [False] * r
    out = []
    for k in range(r):
        if seen[k]:
            continue
        comp = [k]
        seen[k] = True
        stack = [k]
        while stack:
            u = stack.pop()
            for w in range(r):
                if not seen[w] and cx.facets[u] & cx.facets[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out
