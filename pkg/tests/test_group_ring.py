import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fundeg.degree import char_fn, constant_fn, hom_fn, identity_fn
from fundeg.errors import GroupMismatchError, ParseError
from fundeg.functions import GroupFunction
from fundeg.group_ring import GroupRingElement, act, augmentation, difference_op, tau
from fundeg.groups import FiniteAbelianGroup

Z2 = FiniteAbelianGroup((2,))
Z4 = FiniteAbelianGroup((4,))


def ring_element(A, coeffs, modulus=0):
    return GroupRingElement(A, {A.unrank(i): z for i, z in enumerate(coeffs)}, modulus)


def test_tau_inverse_is_one():
    A = FiniteAbelianGroup((4, 2))
    a = A((3, 1))
    assert tau(a) * tau(-a) == GroupRingElement.one(A)


def test_product_of_differences_expands():
    A = FiniteAbelianGroup((3, 3))
    a, b = A((1, 0)), A((2, 1))
    lhs = (tau(a) - 1) * (tau(b) - 1)
    rhs = tau(a + b) - tau(a) - tau(b) + 1
    assert lhs == rhs


def test_square_vanishes_mod_two():
    r = tau(Z2(1), 2) - 1
    assert (r * r).is_zero()
    assert not ((tau(Z2(1)) - 1) ** 2).is_zero()


def test_canonical_form_drops_zeros():
    r = GroupRingElement(Z4, {Z4(1): 3, Z4(2): 0}, 3)
    assert r.coeffs == {}
    r = GroupRingElement(Z4, {Z4(1): 7}, 5)
    assert r.coeffs == {Z4(1): 2}


@pytest.mark.parametrize("r,value", [
    (3 * tau(Z4(0)) - 2 * tau(Z4(1)), 1),
    (tau(Z4(1)) - 1, 0),
    (GroupRingElement.zero(Z4), 0),
    (GroupRingElement(Z4, {Z4(0): 5}, 3), 2),
])
def test_augmentation(r, value):
    assert augmentation(r) == value


def test_mismatch_errors():
    with pytest.raises(GroupMismatchError):
        tau(Z4(1)) + tau(Z2(1))
    with pytest.raises(GroupMismatchError):
        tau(Z4(1), 2) * tau(Z4(1), 3)
    f = identity_fn(Z2)
    with pytest.raises(GroupMismatchError):
        act(tau(Z4(1)), f)
    with pytest.raises(GroupMismatchError):
        difference_op(Z4(1), f)
    # Z_3[Z4] does not act on Z2-valued maps
    with pytest.raises(GroupMismatchError):
        act(tau(Z4(1), 3), char_fn(Z4, Z4(0), Z2, Z2(1)))


def test_act_shift_example():
    f = char_fn(Z2, Z2(0), Z2, Z2(1))
    assert act(tau(Z2(1)), f).table[:, 0].tolist() == [0, 1]


def test_act_difference_on_identity():
    d = act(tau(Z4(1)) - 1, identity_fn(Z4))
    assert d == constant_fn(Z4, Z4, Z4(1))


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4).filter(lambda c: sum(c) == 0))
def test_augmentation_ideal_kills_constants(coeffs):
    B = FiniteAbelianGroup((3, 2))
    r = ring_element(Z4, coeffs)
    assert act(r, constant_fn(Z4, B, B((2, 1)))).is_zero()


def test_difference_op_examples():
    f = char_fn(Z2, Z2(0), Z2, Z2(1))
    assert difference_op(Z2(0), f).is_zero()
    assert difference_op(Z2(1), f).table[:, 0].tolist() == [1, 1]
    A = FiniteAbelianGroup((4, 2))
    h = hom_fn(A, Z4, [Z4(1), Z4(2)])
    for g in A:
        assert difference_op(g, h).is_constant()


def _random_function(data, A, B):
    t = data.draw(st.lists(st.integers(0, B.order - 1), min_size=A.order, max_size=A.order))
    return GroupFunction(A, B, B.elements_array[t])


GROUPS = [FiniteAbelianGroup(o) for o in [(2,), (4,), (2, 2), (6,), (8,), (4, 2), (3,)]]
CODOMAINS = [FiniteAbelianGroup(o) for o in [(2,), (4,), (3,), (2, 2), (6,)]]


@given(st.sampled_from(GROUPS), st.sampled_from(CODOMAINS), st.data())
def test_module_action(A, B, data):
    f = _random_function(data, A, B)
    cs = st.lists(st.integers(-6, 6), min_size=A.order, max_size=A.order)
    r = ring_element(A, data.draw(cs))
    s = ring_element(A, data.draw(cs))
    assert act(r * s, f) == act(r, act(s, f))
    assert act(r + s, f) == act(r, f) + act(s, f)
    assert act(GroupRingElement.one(A), f) == f


@given(st.sampled_from(GROUPS), st.sampled_from(CODOMAINS), st.data())
def test_difference_op_matches_act(A, B, data):
    f = _random_function(data, A, B)
    g = A.unrank(data.draw(st.integers(0, A.order - 1)))
    h = A.unrank(data.draw(st.integers(0, A.order - 1)))
    assert difference_op(g, f) == act(tau(g) - 1, f)
    assert difference_op(g, difference_op(h, f)) == difference_op(h, difference_op(g, f))


@pytest.mark.parametrize("orders", [(1,), (2,), (3,), (4,), (2, 2), (5,), (6,)])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_faithful_on_char_function(orders, n):
    A = FiniteAbelianGroup(orders)
    B = FiniteAbelianGroup((n,))
    chi = char_fn(A, A.zero(), B, B(1))
    for coeffs in itertools.product(range(n), repeat=A.order):
        r = ring_element(A, coeffs, n)
        assert act(r, chi).is_zero() == r.is_zero()


@given(st.lists(st.integers(-10**30, 10**30), min_size=4, max_size=4))
def test_json_round_trip(coeffs):
    r = ring_element(Z4, coeffs)
    assert GroupRingElement.from_json(Z4, r.to_json()) == r
    for item in r.to_json():
        assert isinstance(item["coeff"], str)


def test_json_rejects_garbage():
    with pytest.raises(ParseError):
        GroupRingElement.from_json(Z4, [{"element": [1]}])


def test_big_coefficients_stay_exact():
    r = (tau(Z4(1)) - 1) ** 40
    assert augmentation(r) == 0
    assert max(abs(z) for z in r.coeffs.values()) > 2**32
    f = char_fn(Z4, Z4(0), Z2, Z2(1))
    # (tau - 1)^4 already annihilates maps into Z2 on Z4
    assert act(r, f).is_zero()
    assert np.array_equal(act(((tau(Z4(1)) - 1) ** 3), f).table[:, 0], [1, 1, 1, 1])
