import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import brute
from fundeg.chevalley import (
    SystemInstance,
    c0_function,
    count_zeros,
    instance_from_json,
    verify,
    verify_chevalley_group,
    verify_restricted_range,
    verify_restricted_range_field,
    verify_restricted_subgroup,
    verify_warning1_field_pweight,
    verify_warning1_group,
    verify_warning2,
    zero_mask,
)
from fundeg.degree import char_fn, constant_fn, fundeg, hom_fn
from fundeg.errors import CapExceeded, GroupMismatchError, ParseError
from fundeg.finite_field import field_make, poly_parse
from fundeg.functions import GroupFunction
from fundeg.groups import FiniteAbelianGroup
from fundeg.random_instances import FAMILIES, sample_family
from fundeg.rings_nc import nc_parse, ring_make_mat

G = FiniteAbelianGroup
GF2, GF3, GF4 = field_make(2), field_make(3), field_make(2, 2)


def polys(F, N, *texts, **kw):
    return SystemInstance.from_polys([poly_parse(F, N, t) for t in texts], F, N, **kw)


def test_count_examples():
    assert count_zeros(polys(GF2, 3, "x1*x2")) == 6
    assert count_zeros(SystemInstance.from_polys([], GF3, 2)) == 9
    assert count_zeros(polys(GF3, 2, "2")) == 0


def test_count_cap():
    with pytest.raises(CapExceeded):
        count_zeros(polys(GF2, 5, "x1"), cap=16)


@pytest.mark.parametrize("threads", [1, 2, 3, 8])
def test_threads_do_not_change_mask(threads):
    sys = polys(field_make(3), 4, "x1*x2 + x3^2 - x4", "x1 + x2 + 1")
    assert np.array_equal(zero_mask(sys, threads=threads), zero_mask(sys, threads=1))


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.data())
def test_count_matches_brute_force(p, N, data):
    F = field_make(p)
    monos = st.tuples(st.tuples(*[st.integers(0, 4)] * N), st.integers(1, p - 1))
    systems = data.draw(st.lists(st.lists(monos, max_size=3), max_size=3))

    def as_callable(terms):
        def f(x):
            return sum(c * int(np.prod([v**e for v, e in zip(x, exps)])) for exps, c in terms) % p
        return f

    texts = [" + ".join(f"{c}*" + "*".join(f"x{i + 1}^{e}" for i, e in enumerate(exps)) for exps, c in terms) or "0"
             for terms in systems]
    sys = SystemInstance.from_polys([poly_parse(F, N, t) for t in texts], F, N)
    points = list(itertools.product(range(p), repeat=N))
    assert count_zeros(sys) == brute.brute_count(points, [as_callable(t) for t in systems])


def test_restriction_edge_cases():
    sys = polys(GF3, 2, "x1 + x2", "x1*x2")
    full = count_zeros(sys)
    assert count_zeros(polys(GF3, 2, "x1 + x2", "x1*x2", restriction=[])) == full
    origin = [G((3, 3)).zero()]
    assert count_zeros(polys(GF3, 2, "x1 + x2", "x1*x2", restriction=origin)) == 1
    assert count_zeros(polys(GF3, 2, "x1 + 1", restriction=origin)) == 0


@settings(max_examples=30)
@given(st.data())
def test_restriction_to_origin_is_value_at_zero(data):
    A, B = G((4, 2)), G((2,))
    N = data.draw(st.integers(1, 2))
    dom = A**N
    fs = []
    for _ in range(data.draw(st.integers(0, 3))):
        t = data.draw(st.lists(st.integers(0, 1), min_size=dom.order, max_size=dom.order))
        fs.append(GroupFunction(dom, B, np.array(t)))
    sys = SystemInstance(A, N, fs, restriction=[dom.zero()])
    assert count_zeros(sys) == int(all(f.table[0, 0] == 0 for f in fs))


def test_chevalley_examples():
    Z4 = G((4,))
    proj = GroupFunction.from_callable(Z4**2, Z4, lambda x: x.coords[0])
    rep = verify_chevalley_group(SystemInstance(Z4, 2, [proj]))
    assert rep.hypothesis_holds and rep.zero_count == 4 and rep.conclusion_holds
    proj2 = GroupFunction.from_callable(Z4**2, Z4, lambda x: x.coords[1])
    rep = verify_chevalley_group(SystemInstance(Z4, 2, [proj, proj2]))
    assert not rep.hypothesis_holds and rep.zero_count == 1
    assert rep.conclusion_holds is None and rep.vacuous and rep.ok
    assert rep.witness == [0, 0]


def test_chevalley_two_groups_brute():
    # f : Z4^2 -> Z2 with N * 3 > fundeg * 1
    Z4, Z2 = G((4,)), G((2,))
    dom = Z4**2
    f = GroupFunction.from_callable(dom, Z2, lambda x: (x.coords[0] * x.coords[1] + x.coords[0] // 2) % 2)
    d = fundeg(f)
    assert 2 * 3 > d * 1
    rep = verify_chevalley_group(SystemInstance(Z4, 2, [f]))
    assert rep.hypothesis_holds
    assert rep.zero_count == brute.brute_count(list(itertools.product(range(4), repeat=2)),
                                               [lambda x: (x[0] * x[1] + x[0] // 2) % 2])
    assert rep.conclusion_holds


def test_warning1_examples():
    rep = verify(polys(GF2, 3, "x1*x2"), "warning1-group")
    assert rep.hypothesis_holds and rep.zero_count == 6 and rep.conclusion_holds
    R = ring_make_mat(2, 2)
    e = nc_parse("x1 [[0,1],[0,0]] x2 + x2 x1", 3, R)
    rep = verify(SystemInstance.from_nc([e], R, 3), "warning1-ring")
    assert rep.theorem_id == "warning1-ring" and rep.hypothesis_holds
    assert rep.zero_count % 2 == 0 and rep.conclusion_holds


def test_warning1_z9_random():
    for sys, rep in sample_family("warning1-group-Z9", np.random.default_rng(5), 10):
        assert rep.hypothesis_holds and rep.conclusion_holds
        assert rep.zero_count % 3 == 0


def test_pweight_examples():
    rep = verify_warning1_field_pweight(polys(GF2, 5, "x1*x2 + x3*x4"))
    assert rep.degrees == [2] and rep.hypothesis_holds and rep.zero_count % 2 == 0
    rep = verify_warning1_field_pweight(polys(GF3, 2, "x1 + 2*x2"))
    assert rep.zero_count == 3 and rep.conclusion_holds
    rep = verify_warning1_field_pweight(polys(GF4, 2, "x1^2 + x2^2"))
    assert rep.degrees == [1] and rep.extra["total_degree"] == [2]
    assert rep.hypothesis_holds and rep.zero_count == 4 and rep.conclusion_holds


def test_restricted_subgroup_examples():
    full = verify_restricted_subgroup(polys(GF3, 3, "x1*x2"))
    assert full.extra["subgroup_order"] == 27 and full.hypothesis_holds
    assert full.zero_count == verify_warning1_field_pweight(polys(GF3, 3, "x1*x2")).zero_count == 15
    dom = G((3, 3))
    origin = verify_restricted_subgroup(polys(GF3, 2, "x1", restriction=[dom.zero()]))
    assert origin.vacuous
    line = verify_restricted_subgroup(polys(GF3, 2, "1", restriction=[dom((1, 1))]))
    assert line.hypothesis_holds and line.zero_count == 0 and line.conclusion_holds


def test_c0_examples():
    B = G((2, 2))
    assert c0_function(B, [B.zero()]) == constant_fn(B, G((2,)), G((2,))(1))
    c = c0_function(B, [B((0, 0)), B((0, 1))])
    assert c.table[0, 0] == 1 and c.table[1, 0] == 0 and fundeg(c) <= 1
    c = c0_function(B, list(B))
    assert c == char_fn(B, B.zero(), G((2,)), G((2,))(1)) and fundeg(c) <= 3


@pytest.mark.parametrize("orders", [(2,), (3, 3), (5,), (2, 2, 2)])
def test_c0_random_sets(orders):
    B = G(orders)
    rng = np.random.default_rng(len(orders))
    for _ in range(10):
        S = [B.zero()] + [B.unrank(int(i)) for i in rng.integers(0, B.order, size=3)]
        c = c0_function(B, S)
        assert c.table[0, 0] == 1
        assert all(c(s).is_zero() for s in S if not s.is_zero())
        assert fundeg(c) <= len(set(S)) - 1


def test_c0_errors():
    with pytest.raises(GroupMismatchError):
        c0_function(G((4,)), [G((4,)).zero()])
    with pytest.raises(ValueError):
        c0_function(G((2,)), [G((2,))(1)])


def test_restricted_range_examples():
    A, B = G((2, 2, 2)), G((2, 2))
    zero = GroupFunction.zero(A, B)
    rep = verify_restricted_range(SystemInstance(A, 1, [zero]))
    assert rep.hypothesis_holds and rep.zero_count == 8 and rep.conclusion_holds
    away = constant_fn(A, B, B((1, 0)))
    rep = verify_restricted_range(SystemInstance(A, 1, [away]))
    assert rep.zero_count == 0 and "empty by range" in rep.notes and rep.conclusion_holds
    # non-surjective quadratic map into Z2^2
    quad = GroupFunction.from_callable(A, B, lambda x: (x.coords[0] * x.coords[1], 0))
    rep = verify_restricted_range(SystemInstance(A, 1, [quad]))
    assert rep.extra["range_sizes"] == [2] and rep.hypothesis_holds
    assert rep.zero_count == 6 and rep.conclusion_holds


def test_restricted_range_scope():
    A = G((6,))
    f = GroupFunction.zero(A, G((2,)))
    rep = verify_restricted_range(SystemInstance(A, 1, [f]))
    assert rep.vacuous and "not in theorem scope" in rep.notes
    with pytest.raises(GroupMismatchError):
        verify_restricted_range(SystemInstance(G((4,)), 1, [GroupFunction.zero(G((4,)), G((4,)))]))


def test_restricted_range_field():
    rep = verify_restricted_range_field(polys(GF3, 2, "x1^2 + x2^2"))
    assert rep.hypothesis == "N*alpha*(p-1) = 4 > sum (|range|-1)*pdeg = 4" and rep.vacuous
    # squares take only the values 0 and 1
    rep = verify_restricted_range_field(polys(GF3, 2, "x1^2"))
    assert rep.extra["range_sizes"] == [2] and rep.hypothesis_holds
    assert rep.zero_count == 3 and rep.conclusion_holds


def test_warning2_examples():
    rep = verify_warning2(polys(GF2, 2, "x1"))
    assert rep.zero_count == 2 and rep.extra["bound"] == 2 and rep.conclusion_holds
    rep = verify_warning2(polys(GF2, 2, "x1 + 1"))
    assert rep.vacuous and rep.conclusion_holds is None
    rep = verify_warning2(polys(GF3, 3, "x1*x2"))
    assert rep.extra["bound"] == 3 and rep.zero_count == 15 and rep.conclusion_holds
    rep = verify_warning2(polys(GF2, 1, "x1", "x1^3"))
    assert rep.extra["bound"] == 1


def test_field_verifiers_need_polys():
    sys = SystemInstance(G((2,)), 1, [GroupFunction.zero(G((2,)), G((2,)))])
    for fn in (verify_warning2, verify_restricted_subgroup, verify_warning1_field_pweight):
        with pytest.raises(GroupMismatchError):
            fn(sys)


def test_declared_degrees_warn():
    sys = polys(GF2, 3, "x1*x2", declared=[1])
    rep = verify(sys, "warning1-pweight")
    assert rep.warnings == ["f1: declared pdeg 1, computed 2; using computed"]
    assert rep.degrees == [2]
    clean = verify(polys(GF2, 3, "x1*x2", declared=[2]), "warning1-pweight")
    assert clean.warnings == []


def test_unknown_theorem():
    with pytest.raises(ParseError):
        verify(polys(GF2, 1, "x1"), "nonsense")


def test_restriction_note_for_other_theorems():
    rep = verify(polys(GF2, 2, "x1", restriction=[G((2, 2))((1, 0))]), "warning2")
    assert "restriction ignored by this theorem" in rep.notes


@pytest.mark.parametrize("family", ["warning1-group-Z8", "warning1-group-Z9", "chevalley-group-Z4-Z2"])
def test_zero_sum_route(family):
    rng = np.random.default_rng(11)
    for sys, _ in sample_family(family, rng, 17):
        rep = verify_warning1_group(sys, zero_sum_check=True)
        assert rep.hypothesis_holds
        assert rep.extra["indicator_fundeg"] < rep.extra["delta_domain_zp"]
        assert rep.extra["indicator_sum_mod_p"] == 0


def test_instance_json_round_trip():
    obj = {"theorem": "warning1-pweight", "field": "2,1", "N": 3, "functions": ["x1*x2"]}
    theorem, sys = instance_from_json(json.dumps(obj))
    assert theorem == "warning1-pweight" and count_zeros(sys) == 6
    obj = {"theorem": "restricted-range", "group": "Z2xZ2", "codomain": "Z2", "N": 1,
           "functions": [[[1], [0], [0], [0]]]}
    theorem, sys = instance_from_json(obj)
    assert verify(sys, theorem).zero_count == 3
    obj = {"ring": "M2(Z2)", "N": 2, "functions": ["x1 x2"], "restriction": [[1, 0, 0, 1, 0, 0, 0, 0]]}
    _, sys = instance_from_json(obj)
    # the subgroup is {0, (I, 0)} and x1 x2 vanishes on both
    assert count_zeros(sys) == 2
    rep = verify(sys, "warning1-ring").to_json()
    assert json.loads(json.dumps(rep)) == rep


@pytest.mark.parametrize("bad", [
    "{",
    "[]",
    {"N": 2, "functions": []},
    {"field": "2", "group": "Z2", "N": 1},
    {"field": "2", "N": "x"},
    {"field": "2", "N": -1},
    {"field": "2", "N": 1, "functions": ["x3"]},
    {"group": "Z2", "N": 1, "functions": [[[0]]]},
    {"field": "4", "N": 1},
    {"field": "2", "N": 1, "restriction": [[5, 5]]},
])
def test_instance_json_errors(bad):
    with pytest.raises(ParseError):
        instance_from_json(bad if isinstance(bad, str) else json.dumps(bad))


def test_all_families_produce_passing_reports():
    rng = np.random.default_rng(2)
    for name in FAMILIES:
        for _, rep in sample_family(name, rng, 5):
            assert rep.hypothesis_holds and rep.conclusion_holds, name
