"""Verification suites shared by the command line and the acceptance tests.

A suite is a list of parts.  Each part deterministically lists its
instances from the run configuration and checks them one at a time, so the
instances can be farmed out to worker processes and merged back by id.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import ceil
from typing import Callable, Optional

from .errors import InvariantViolation, PreconditionError, ResourceError, SimptreeError
from .generators import (
    enumerate_brooms,
    enumerate_perfect_trees,
    enumerate_rooted_trees,
    nary_tree,
    random_intersection_property_tree,
    random_rooted_tree,
    random_simplicial_tree,
)
from .homology import (
    DEFAULT_MAX_LATTICE,
    FieldSpec,
    OracleCaps,
    graded_betti,
    has_linear_quotients,
    has_linear_resolution,
    lcm_lattice_degrees,
    linear_quotient_order,
    quotient_regularity,
    set_default_caps,
    strand_euler_check,
)
from .monomial import DEFAULT_MAX_GENERATORS, Monomial, MonomialIdeal, ideal_power, is_equigenerated, minimalize
from .powers import (
    classify_path_power_linearity,
    conjecture_D_check,
    power_reg_broom,
    power_reg_perfect_top,
    power_reg_upper_bound,
    verify_colon_identities,
    verify_linear_quotients_power,
    verify_theorem_A,
)
from .rooted import (
    RootedTree,
    alpha_bound,
    broom_facet_order,
    level_outdegree_sums,
    reg_broom,
    reg_formula_perfect,
    reg_recursive,
    reg_upper_bound_general,
    t_path_ideal,
)
from .simplicial import SimplicialComplex


@dataclass(frozen=True)
class RunConfig:
    t: Optional[int] = None
    s: Optional[int] = None
    characteristic: int = 0
    seed: int = 1
    jobs: int = 1
    max_facets: Optional[int] = None
    max_gens: int = DEFAULT_MAX_GENERATORS
    max_lattice: int = DEFAULT_MAX_LATTICE
    count: Optional[int] = None
    mode: str = "tree"

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.characteristic)

    def to_json(self) -> dict:
        return asdict(self)


def _rng(config: RunConfig, part: str, k: int) -> random.Random:
    # string seeds are hashed with sha512, so this is stable across runs and platforms
    return random.Random(f"{config.seed}/{part}/{k}")


# --------------------------------------------------------------------------
# fixtures

TERAI = ["abd", "abf", "ace", "adc", "aef", "bde", "bcf", "bce", "cdf", "def"]
STURMFELS = ["def", "cef", "cdf", "cde", "bef", "bcd", "acf", "ade"]


def letters_ideal(words, letters: str = "abcdef") -> list[Monomial]:
    n = len(letters)
    return [Monomial.from_support([letters.index(c) for c in w], n) for w in words]


def terai_ideal() -> MonomialIdeal:
    return minimalize(letters_ideal(TERAI), 6)


def sturmfels_generators() -> list[Monomial]:
    """In the order in which the linear quotients hold."""
    return letters_ideal(STURMFELS)


def sturmfels_ideal() -> MonomialIdeal:
    return minimalize(sturmfels_generators(), 6)


def _fixture_items(config):
    return [
        "terai_linear_char0",
        "terai_square_not_linear_char0",
        "terai_not_linear_char2",
        "sturmfels_given_order_linear_quotients",
        "sturmfels_linear_char0",
        "sturmfels_square_not_linear_char0",
    ]


def _check_fixture(name, config):
    q = FieldSpec(0)
    if name == "terai_linear_char0":
        tab = graded_betti(terai_ideal(), q)
        return {"value": has_linear_resolution(terai_ideal(), q), "expected": True, "betti": tab.to_json()}
    if name == "terai_square_not_linear_char0":
        I2 = ideal_power(terai_ideal(), 2, config.max_gens)
        tab = graded_betti(I2, q)
        return {"value": has_linear_resolution(I2, q), "expected": False, "reg": tab.regularity()}
    if name == "terai_not_linear_char2":
        tab = graded_betti(terai_ideal(), FieldSpec(2))
        return {"value": has_linear_resolution(terai_ideal(), FieldSpec(2)), "expected": False,
                "betti": tab.to_json()}
    if name == "sturmfels_given_order_linear_quotients":
        return {"value": has_linear_quotients(sturmfels_generators()), "expected": True}
    if name == "sturmfels_linear_char0":
        # linear quotients of an equigenerated ideal force a linear resolution
        return {"value": has_linear_resolution(sturmfels_ideal(), q), "expected": True}
    if name == "sturmfels_square_not_linear_char0":
        I2 = ideal_power(sturmfels_ideal(), 2, config.max_gens)
        return {"value": has_linear_resolution(I2, q), "expected": False,
                "reg": graded_betti(I2, q).regularity()}
    raise ValueError(name)


def _fixture_passed(rec):
    return rec["value"] == rec["expected"]


# --------------------------------------------------------------------------
# simplicial forests


_MODES = ("tree", "forest", "pure")


def _theoremA_items(config):
    count = config.count or 200
    mf = config.max_facets or 6
    out = []
    for k in range(count):
        cx = random_simplicial_tree(_rng(config, "theoremA", k), mf, 3, mode=_MODES[k % 3])
        out.append(cx.to_json())
    return out


def _check_theoremA(item, config):
    cx = SimplicialComplex.from_json(item)
    rep = verify_theorem_A(cx, config.s or 2, config.field, config.max_gens)
    return {"facets": item["facets"], "passed": rep.passed, **rep.data,
            "failures": [c.to_json() for c in rep.failures()]}


def _lq_items(config):
    count = config.count or 100
    mf = config.max_facets or 6
    return [random_intersection_property_tree(_rng(config, "linearQuotients", k), mf, 3).to_json()
            for k in range(count)]


def _check_lq(item, config):
    cx = SimplicialComplex.from_json(item)
    order = cx.adjacent_good_leaf_order()
    rec = {"facets": item["facets"], "ordering": order}
    ok = True
    wit = cx.ordering_consequences_witness(order)
    rec["ordering_consequences"] = wit is None
    ok &= wit is None
    per_s = []
    for s in range(1, (config.s or 3) + 1):
        rep = verify_linear_quotients_power(cx, s, order)
        per_s.append({"s": s, "passed": rep.passed, "failures": [c.to_json() for c in rep.failures()]})
        ok &= rep.passed
    rec["powers"] = per_s
    rec["passed"] = ok
    return rec


def _colon_items(config):
    count = config.count or 100
    mf = config.max_facets or 5
    return [random_simplicial_tree(_rng(config, "lemmaColon", k), mf, 3, mode=_MODES[k % 2]).to_json()
            for k in range(count)]


def _check_colon(item, config):
    cx = SimplicialComplex.from_json(item)
    order = cx.good_leaf_order()
    ok = True
    reports = []
    for s in range(1, (config.s or 2) + 1):
        rep = verify_colon_identities(cx, order, s)
        ok &= rep.passed
        reports.append({"s": s, "passed": rep.passed, "failures": [c.to_json() for c in rep.failures()]})
    bound = power_reg_upper_bound(cx, order, 1, lambda J: quotient_regularity(J, config.field))
    actual = quotient_regularity(ideal_power(cx.facet_ideal(), 2, config.max_gens), config.field)
    ok &= bound >= actual
    return {"facets": item["facets"], "ordering": order, "identities": reports,
            "power_bound_s2": bound, "oracle_s2": actual, "passed": ok}


# --------------------------------------------------------------------------
# rooted trees


def _valid_ts(h):
    return range(ceil((h + 1) / 2), h + 2)


def _perfect_items(config):
    out = []
    for h in (1, 2, 3):
        for G in enumerate_perfect_trees(h, 3):
            for t in _valid_ts(h):
                if config.t is None or config.t == t:
                    out.append({"parent": list(G.parent), "t": t})
    return out


def _check_perfect(item, config):
    G = RootedTree(item["parent"])
    t = item["t"]
    f = reg_formula_perfect(G, t)
    o = quotient_regularity(t_path_ideal(G, t), config.field)
    r = reg_recursive(G, t)
    D = level_outdegree_sums(G)
    mono = all(D[a] <= D[a + 1] for a in range(G.height - 1))
    return {**item, "formula": f, "oracle": o, "recursion": r, "level_sums_monotone": mono,
            "passed": f == o == r and mono}


def _knary_items(config):
    return [{"k": k, "h": h, "t": t} for k, h in ((2, 2), (2, 3), (3, 2)) for t in (h + 1, h)]


def _check_knary(item, config):
    k, h, t = item["k"], item["h"], item["t"]
    G = nary_tree(k, h)
    closed = (k ** h - 1) // (k - 1) if t == h + 1 else (k ** h - k) // (k - 1)
    f = reg_formula_perfect(G, t)
    o = quotient_regularity(t_path_ideal(G, t), config.field)
    return {**item, "closed": closed, "formula": f, "oracle": o, "passed": closed == f == o}


def _broom_items(config):
    out = []
    for b, G in enumerate_brooms(5, 3):
        for t in range(2, G.height + 2):
            if config.t is None or config.t == t:
                out.append({"bristles": list(b), "parent": list(G.parent), "t": t})
    return out


def _check_broom(item, config):
    G = RootedTree(item["parent"])
    t = item["t"]
    broom_facet_order(G, t)  # raises if the order is not a good-leaf order
    f = reg_broom(G, t)
    o = quotient_regularity(t_path_ideal(G, t), config.field)
    return {"bristles": item["bristles"], "t": t, "formula": f, "oracle": o,
            "recursion": reg_recursive(G, t), "passed": f == o}


def _recursion_items(config):
    ts = (config.t,) if config.t else (2, 3, 4)
    return [{"parent": list(G.parent), "t": t} for G in enumerate_rooted_trees(10) for t in ts]


def _check_recursion(item, config):
    G = RootedTree(item["parent"])
    t = item["t"]
    r = reg_recursive(G, t)
    o = quotient_regularity(t_path_ideal(G, t), config.field)
    return {**item, "recursion": r, "oracle": o, "passed": r == o}


def _bounds_items(config):
    count = config.count or 120
    out = []
    for k in range(count):
        rng = _rng(config, "bounds", k)
        G = random_rooted_tree(rng, rng.randint(2, 14), max_height=rng.choice([None, 3, 4, 5]))
        out.append({"parent": list(G.parent)})
    return out


def _check_bounds(item, config):
    G = RootedTree(item["parent"])
    h = G.height
    rows = []
    ok = True
    for t in range(2, h + 2):
        o = quotient_regularity(t_path_ideal(G, t), config.field)
        row = {"t": t, "oracle": o, "alpha_bound": alpha_bound(G, t)}
        ok &= row["alpha_bound"] >= o
        if t in _valid_ts(h):
            row["general_bound"] = reg_upper_bound_general(G, t)
            ok &= row["general_bound"] >= o
        rows.append(row)
    return {**item, "rows": rows, "passed": ok}


# --------------------------------------------------------------------------
# powers of path ideals


def _broom_power_items(config):
    s = config.s or 2
    return [{"bristles": list(b), "parent": list(G.parent), "t": t, "s": s}
            for b, G in enumerate_brooms(3, 3) for t in range(2, G.height + 2)]


def _check_broom_power(item, config):
    G = RootedTree(item["parent"])
    t, s = item["t"], item["s"]
    f = power_reg_broom(G, t, s)
    o = quotient_regularity(ideal_power(t_path_ideal(G, t), s, config.max_gens), config.field)
    return {"bristles": item["bristles"], "t": t, "s": s, "formula": f, "oracle": o,
            "shift_from_true_reg": t * (s - 1) + reg_recursive(G, t), "passed": f == o}


def _perfect_power_items(config):
    ss = (config.s,) if config.s else (2, 3)
    return [{"parent": list(G.parent), "s": s}
            for h in (1, 2) for G in enumerate_perfect_trees(h, 2) for s in ss]


def _check_perfect_power(item, config):
    G = RootedTree(item["parent"])
    s = item["s"]
    t = G.height + 1
    f = power_reg_perfect_top(G, s)
    o = quotient_regularity(ideal_power(t_path_ideal(G, t), s, config.max_gens), config.field)
    return {**item, "t": t, "formula": f, "oracle": o, "passed": f == o}


def _classification_items(config):
    count = config.count or 60
    out = []
    for k in range(count):
        rng = _rng(config, "linearity", k)
        G = random_rooted_tree(rng, rng.randint(2, 9), max_height=rng.choice([None, 2, 3, 4]))
        out.append({"parent": list(G.parent)})
    return out


def _check_classification(item, config):
    G = RootedTree(item["parent"])
    rows = []
    ok = True
    for t in range(2, G.height + 2):
        I = t_path_ideal(G, t)
        c = classify_path_power_linearity(G, t)
        l1 = has_linear_resolution(I, config.field)
        l2 = has_linear_resolution(ideal_power(I, 2, config.max_gens), config.field)
        rows.append({"t": t, "clean_broom_test": c, "linear": l1, "square_linear": l2})
        ok &= c == l1 == l2
    return {**item, "rows": rows, "passed": ok}


# --------------------------------------------------------------------------
# oracle self-consistency


def _oracle_items(config):
    count = config.count or 60
    out = []
    for k in range(count):
        rng = _rng(config, "oracle", k)
        cx = random_simplicial_tree(rng, 4, 2, mode=_MODES[k % 3])
        out.append({"facets": cx.to_json()["facets"], "s": 1 + k % 2})
    return out


def _check_oracle(item, config):
    cx = SimplicialComplex.from_facets(item["facets"])
    I = ideal_power(cx.facet_ideal(), item["s"], config.max_gens)
    t0 = graded_betti(I, FieldSpec(0))
    tp = graded_betti(I, FieldSpec(32003))
    tk = graded_betti(I, FieldSpec(0), route="koszul")
    beta0 = sum(v for (i, _), v in t0.items if i == 0) == len(I)
    euler = all(strand_euler_check(I, b) for b in lcm_lattice_degrees(I))
    rec = {**item, "beta0_matches": beta0, "char_agree": t0 == tp, "routes_agree": t0 == tk,
           "euler": euler}
    eq = is_equigenerated(I)
    # linear quotients in some order imply a linear resolution for equigenerated ideals
    if eq is not None and len(I) <= 8:
        order = linear_quotient_order(I, FieldSpec(0))
        rec["lq_implies_lr"] = order is None or has_linear_resolution(I)
    rec["passed"] = beta0 and rec["char_agree"] and rec["routes_agree"] and euler and rec.get("lq_implies_lr", True)
    return rec


# --------------------------------------------------------------------------
# conjecture scan


def _conjecture_items(config):
    count = config.count or 300
    mf = config.max_facets or 6
    out = []
    for k in range(count):
        rng = _rng(config, "conjecture", k)
        if config.mode == "ip":
            cx = random_intersection_property_tree(rng, mf, 3)
        else:
            cx = random_simplicial_tree(rng, mf, 3, mode=config.mode)
        out.append(cx.to_json())
    return out


def _check_conjecture(item, config):
    cx = SimplicialComplex.from_json(item)
    rep = conjecture_D_check(cx, config.s or 3, config.field, config.max_gens)
    # a negative slack is a finding, never a failure
    return {"facets": item["facets"], **rep.data, "passed": True}


# --------------------------------------------------------------------------
# registry and runner


@dataclass(frozen=True)
class Part:
    name: str
    items: Callable
    check: Callable
    passed: Callable = staticmethod(lambda rec: rec["passed"])


PARTS = {
    "fixtures": Part("fixtures", _fixture_items, _check_fixture, _fixture_passed),
    "theoremA": Part("theoremA", _theoremA_items, _check_theoremA),
    "linearQuotients": Part("linearQuotients", _lq_items, _check_lq),
    "lemmaColon": Part("lemmaColon", _colon_items, _check_colon),
    "perfectFormula": Part("perfectFormula", _perfect_items, _check_perfect),
    "naryFormula": Part("naryFormula", _knary_items, _check_knary),
    "broomFormula": Part("broomFormula", _broom_items, _check_broom),
    "recursionOracle": Part("recursionOracle", _recursion_items, _check_recursion),
    "bounds": Part("bounds", _bounds_items, _check_bounds),
    "broomPowers": Part("broomPowers", _broom_power_items, _check_broom_power),
    "perfectPowers": Part("perfectPowers", _perfect_power_items, _check_perfect_power),
    "powerLinearity": Part("powerLinearity", _classification_items, _check_classification),
    "oracleConsistency": Part("oracleConsistency", _oracle_items, _check_oracle),
    "conjectureScan": Part("conjectureScan", _conjecture_items, _check_conjecture),
}

SUITES = {
    "theoremA": ["theoremA"],
    "lemmaColon": ["lemmaColon"],
    "linearQuotients": ["linearQuotients"],
    "perfectFormula": ["perfectFormula", "naryFormula"],
    "broomFormula": ["broomFormula"],
    "recursionOracle": ["recursionOracle"],
    "powerFormulas": ["broomPowers", "perfectPowers", "powerLinearity"],
    "bounds": ["bounds"],
    "fixtures": ["fixtures", "oracleConsistency"],
}


@dataclass
class SuiteResult:
    name: str
    records: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(r["status"] == "resource" for r in self.records):
            return "resource"
        if all(r["status"] == "pass" for r in self.records):
            return "pass"
        return "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def counts(self) -> dict:
        out: dict = {}
        for r in self.records:
            key = f'{r["part"]}:{r["status"]}'
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))

    def failures(self) -> list:
        return [r for r in self.records if r["status"] != "pass"]


def _init_worker(config: RunConfig):
    set_default_caps(OracleCaps(config.max_lattice))


def _run_one(task):
    part_name, idx, item, config = task
    part = PARTS[part_name]
    rec = {"part": part_name, "id": idx}
    try:
        out = part.check(item, config)
        rec.update(out if isinstance(out, dict) else {"value": out})
        if "item" not in rec and not isinstance(item, dict):
            rec["item"] = item
        rec["status"] = "pass" if part.passed(rec) else "fail"
    except ResourceError as e:
        rec.update({"item": item, "status": "resource", "error": str(e)})
    except InvariantViolation as e:
        rec.update({"item": item, "status": "fail", "error": str(e), "witness": _plain(e.witness)})
    except (PreconditionError, SimptreeError) as e:
        rec.update({"item": item, "status": "fail", "error": f"{type(e).__name__}: {e}"})
    rec.pop("passed", None)
    return rec


def _plain(x):
    if isinstance(x, (frozenset, set)):
        return sorted(x)
    if isinstance(x, tuple):
        return [_plain(v) for v in x]
    if isinstance(x, list):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


def run_parts(name: str, part_names, config: RunConfig) -> SuiteResult:
    set_default_caps(OracleCaps(config.max_lattice))
    tasks = []
    for pname in part_names:
        for idx, item in enumerate(PARTS[pname].items(config)):
            tasks.append((pname, idx, item, config))
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(config.jobs, initializer=_init_worker, initargs=(config,)) as ex:
            records = list(ex.map(_run_one, tasks, chunksize=max(1, len(tasks) // (8 * config.jobs))))
    else:
        records = [_run_one(t) for t in tasks]
    return SuiteResult(name, records)


def run_suite(name: str, config: RunConfig) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return run_parts(name, SUITES[name], config)


def run_part(name: str, config: RunConfig) -> SuiteResult:
    return run_parts(name, [name], config)
