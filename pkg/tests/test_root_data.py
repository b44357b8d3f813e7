import json
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_voa.cyclotomic import CycScalar
from lattice_voa.root_data import RootDataError, RootSystem

SYSTEMS = ["A1", "A2", "A3", "A4", "D4", "D5", "E6"]


def type_a_inverse(n):
    # closed form for the inverse Cartan matrix of A_n
    return [[Fraction(min(i, j) * (n + 1 - max(i, j)), n + 1) for j in range(1, n + 1)]
            for i in range(1, n + 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_inverse_cartan_matches_closed_form(n):
    rs = RootSystem("A", n)
    assert [list(r) for r in rs.cartan_inv] == type_a_inverse(n)


@pytest.mark.parametrize("name", SYSTEMS)
def test_inverse_cartan_is_inverse(name):
    rs = RootSystem.from_string(name)
    r = rs.rank
    for i in range(r):
        for j in range(r):
            assert sum(rs.cartan[i][k] * rs.cartan_inv[k][j] for k in range(r)) == (i == j)


def test_inner_products():
    a1, a2 = RootSystem.from_string("A1"), RootSystem.from_string("A2")
    assert a1.inner(a1.omega(1), a1.omega(1)) == Fraction(1, 2)
    assert a2.inner(a2.omega(1), a2.omega(2)) == Fraction(1, 3)
    assert a2.inner(a2.alpha(1), a2.alpha(2)) == -1
    assert all(a2.inner(a2.alpha(i), a2.alpha(i)) == 2 for i in (1, 2))


def test_partial_order_examples():
    a1, a2 = RootSystem.from_string("A1"), RootSystem.from_string("A2")
    assert a1.leq((0,), (2,))
    assert a1.leq((0,), (1,))  # rational coefficient 1/2 is allowed
    assert not a2.leq((1, 0), (0, 1))


def test_dual_weights():
    a1, a2, d4 = (RootSystem.from_string(x) for x in ("A1", "A2", "D4"))
    assert a2.dual_weight(a2.omega(1)) == a2.omega(2)
    assert a1.dual_weight((1,)) == (1,)
    assert all(d4.dual_weight(d4.omega(i)) == d4.omega(i) for i in range(1, 5))


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "D4", "D5"])
def test_dual_weight_is_minus_lowest(name):
    rs = RootSystem.from_string(name)
    for i in range(1, rs.rank + 1):
        orbit = rs.weyl_orbit(rs.omega(i))
        assert tuple(-x for x in rs.dual_weight(rs.omega(i))) in orbit


def test_gamma_classes():
    a1, a2 = RootSystem.from_string("A1"), RootSystem.from_string("A2")
    assert a1.gamma_class((2,)) == 0
    assert a1.gamma_class((1,)) == 1
    assert a2.gamma_class((1, 1)) == 0


@pytest.mark.parametrize("name,order", [("A1", 2), ("A2", 3), ("A3", 4), ("D4", 4), ("D5", 4), ("E6", 3)])
def test_gamma_order(name, order):
    assert RootSystem.from_string(name).gamma_order == order


@pytest.mark.parametrize("name,L", [("A1", 2), ("A2", 3), ("A3", 4), ("D4", 2)])
def test_phase_order(name, L):
    assert RootSystem.from_string(name).phase_order == L


def test_sl2_gamma_data():
    rs = RootSystem.from_string("A1")
    assert rs.delta(1, 1) == Fraction(1, 2)  # -1/2 mod Z
    assert rs.nu(1, 1) == CycScalar.exp_pi_i(Fraction(1, 2), 2)
    assert rs.nu(0, 1) == CycScalar.rational(1, 2)
    assert rs.nu(0, 0) == CycScalar.rational(1, 2)


def test_epsilon_examples():
    for name in SYSTEMS[:5]:
        rs = RootSystem.from_string(name)
        for i in range(1, rs.rank + 1):
            assert rs.epsilon(rs.zero, rs.omega(i)) == 1
    a1 = RootSystem.from_string("A1")
    assert a1.epsilon((1,), (-1,)) == 1
    a2 = RootSystem.from_string("A2")
    assert a2.epsilon(a2.omega(1), a2.omega(2)) == 1


def weights(rank, bound=3):
    return st.tuples(*[st.integers(-bound, bound)] * rank)


@pytest.mark.parametrize("name", ["A2", "A3", "D4"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_epsilon_bimultiplicative_and_commutator(name, data):
    rs = RootSystem.from_string(name)
    a, b, c = (data.draw(weights(rs.rank)) for _ in range(3))
    ab = tuple(x + y for x, y in zip(a, b))
    assert rs.epsilon(ab, c) == rs.epsilon(a, c) * rs.epsilon(b, c)
    assert rs.epsilon(c, ab) == rs.epsilon(c, a) * rs.epsilon(c, b)
    ra = rs.from_root_coords(a)
    rb = rs.from_root_coords(b)
    sign = -1 if rs.inner(ra, rb) % 2 else 1
    assert rs.epsilon(ra, rb) * rs.epsilon(rb, ra) == sign


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "D4"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_bform_symmetric_sign(name, data):
    rs = RootSystem.from_string(name)
    a, b = data.draw(weights(rs.rank)), data.draw(weights(rs.rank))
    assert rs.bform(a, b) == rs.bform(b, a)
    assert rs.bform(a, b) in (1, -1)


@pytest.mark.parametrize("name", ["A2", "A3"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_leq_is_partial_order(name, data):
    rs = RootSystem.from_string(name)
    a, b, c = (data.draw(weights(rs.rank, 2)) for _ in range(3))
    assert rs.leq(a, a)
    if rs.leq(a, b) and rs.leq(b, a):
        assert a == b
    if rs.leq(a, b) and rs.leq(b, c):
        assert rs.leq(a, c)


@pytest.mark.parametrize("name,count", [("A1", 2), ("A2", 6), ("A3", 12), ("D4", 24)])
def test_root_counts(name, count):
    rs = RootSystem.from_string(name)
    assert len(rs.roots) == count
    assert all(rs.norm2(r) == 2 and rs.in_root_lattice(r) for r in rs.roots)


def test_weights_in_ball_against_box():
    rs = RootSystem.from_string("A2")
    got = set(rs.weights_in_ball(Fraction(8, 3)))
    box = {w for w in product(range(-4, 5), repeat=2) if rs.norm2(w) <= Fraction(8, 3)}
    assert got == box


def test_dominant_below_same_class():
    rs = RootSystem.from_string("A2")
    assert rs.dominant_below((1, 1)) == [(0, 0)]
    assert set(rs.dominant_below((2, 0))) == {(0, 1)}


def test_json_roundtrip_and_errors():
    rs = RootSystem.from_string("A2")
    data = json.loads(rs.dumps())
    assert data["name"] == "A2" and data["gamma_order"] == 3
    with pytest.raises(RootDataError):
        RootSystem.from_string("B2")
    with pytest.raises(RootDataError):
        rs.inner((1,), (1, 0))
