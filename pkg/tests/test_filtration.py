import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lattice_voa.filtration import (FiltrationEngine, HypothesisFailure, UnsupportedType,
                                    binomial_identity_holds)
from lattice_voa.fock import State
from lattice_voa.plucker import PluckerRealization, quadratic_kernel, relation_series
from lattice_voa.vertex import binom


def test_fundamental_lifts(eng1, eng2):
    vac = eng1.vac
    assert set(map(repr, eng1.fundamental_lift(1))) == {
        repr(vac.exp_state((1,))), repr(eng1.fundamental_lift(1)[1])}
    lat = sorted(next(iter(A.lattice_weights())) for A in eng1.fundamental_lift(1))
    assert lat == [(-1,), (1,)]
    for i in (1, 2):
        lift = eng2.fundamental_lift(i)
        assert len(lift) == 3
        assert all(len(A.terms) == 1 and abs(next(iter(A.terms.values()))) == 1 for A in lift)
    lat = {next(iter(A.lattice_weights())) for A in eng2.fundamental_lift(1)}
    assert lat == {(1, 0), (-1, 1), (0, -1)}


@pytest.mark.parametrize("name,sizes", [("A3", [4, 6, 4]), ("A4", [5, 10, 10, 5])])
def test_lift_sizes_are_binomials(name, sizes):
    eng = FiltrationEngine(name)
    assert [len(eng.fundamental_lift(i)) for i in range(1, eng.rs.rank + 1)] == sizes


def test_unsupported_types_raise():
    eng = FiltrationEngine("D4")
    with pytest.raises(UnsupportedType):
        eng.fundamental_lift(1)
    with pytest.raises(UnsupportedType):
        eng.g_span((0, 0, 0, 0), 1)


def test_g_span_base_case(eng1, eng2):
    for eng in (eng1, eng2):
        sp = eng.g_span((0,) * eng.rs.rank, 3)
        assert sp.span.rank() == 1 and sp.contains(eng.vac.vacuum())
        assert sp.lower.rank() == 0


def test_g_span_quotient_dims_a1(eng1):
    assert eng1.g_span((1,), Fraction(1, 4) + 2).quotient_dims(2) == [2, 2, 2]
    assert eng1.g_span((2,), 1 + 2).quotient_dims(2) == [3, 4, 7]


def test_g_span_rejects_non_dominant(eng2):
    with pytest.raises(ValueError):
        eng2.g_span((1, -1), 2)


def _brute_two_factor_span(eng, cw):
    """All ``A_(k) B_(l)|0>`` at conformal weight ``cw``, lifts of omega, plus the vacuum."""
    vac = eng.vac
    lift = eng.fundamental_lift(1)
    out = []
    for A, B in product(lift, lift):
        for l in range(-1, -2 * int(cw) - 4, -1):
            inner = vac.mode(B, l, vac.vacuum())
            if not inner:
                continue
            ca, ci = vac.max_cw(A), vac.max_cw(inner)
            shift = -vac.inner(next(iter(A.lattice_weights())), next(iter(inner.lattice_weights())))
            k = ca + ci - cw - 1
            if (k - shift).denominator == 1:
                out.append(vac.mode(A, k, inner))
    return [v for v in out if v]


def test_g_span_matches_brute_force_rank(eng1):
    for deg in range(3):
        cw = 1 + deg
        sp = eng1.g_span((2,), cw)
        got = sp.span.rank(cw=Fraction(cw))
        assert got == oracles.fraction_rank(_brute_two_factor_span(eng1, cw))


@pytest.mark.parametrize("lam,cut", [((2,), 3), ((1, 1), 2), ((2, 0), Fraction(7, 3))])
def test_g_span_lies_in_dual_filtration(lam, cut):
    eng = FiltrationEngine("A1" if len(lam) == 1 else "A2")
    for v in eng.g_span(lam, cut).basis():
        assert eng.in_fdag(v, lam)


def test_in_fdag_examples(eng1, eng2):
    vac = eng1.vac
    assert eng1.in_fdag(vac.exp_state((2,)), (2,))
    assert not eng1.in_fdag(vac.exp_state((2,)), (1,))
    assert eng1.in_fdag(vac.vacuum(), (0,))
    assert eng1.in_fdag(State(), (0,))
    assert eng2.in_fdag(eng2.vac.exp_state((1, 1)), (1, 1))
    assert not eng2.in_fdag(eng2.vac.exp_state((1, 1)), (0, 0))


def test_filtration_is_multiplicative(eng1):
    vac = eng1.vac
    rng = random.Random(3)
    big = eng1.g_span((2,), 3)
    basis = eng1.g_span((1,), Fraction(9, 4)).basis()
    for _ in range(25):
        A, B = rng.choice(basis), rng.choice(basis)
        top = vac.max_cw(A) + vac.max_cw(B) - 1
        shift = -vac.inner(next(iter(A.lattice_weights())), next(iter(B.lattice_weights())))
        for d in range(4):
            n = shift + ((top - shift) // 1) - d
            out = vac.mode(A, n, B)
            if out and vac.max_cw(out) <= 3:
                assert big.contains(out)


# -- multiplication ----------------------------------------------------------------

def test_m_coefficient_examples(eng1, eng2):
    v1, v2 = eng1.vac, eng2.vac
    e = v1.exp_state((1,))
    assert eng1.m_coefficient([e, e], [0, 0]) == v1.exp_state((2,))
    out = eng2.m_coefficient([v2.exp_state((1, 0)), v2.exp_state((0, 1))], [0, 0])
    assert out in (v2.exp_state((1, 1)), v2.exp_state((1, 1), -1))
    neg = eng1.m_coefficient([e, e], [-1, 0])
    assert eng1.g_span((2,), 2).lower.contains(neg)
    assert eng1.m_coefficient([], []) == v1.vacuum()
    assert eng1.m_coefficient([e, e], [-3, -3]).is_zero()
    with pytest.raises(ValueError):
        eng1.m_coefficient([e, e], [0])


def test_m_coefficient_weight(eng2):
    vac = eng2.vac
    lifts = [eng2.fundamental_lift(1)[1], eng2.fundamental_lift(2)[2]]
    for m in [(0, 0), (1, 0), (0, 2), (1, 1)]:
        out = eng2.m_coefficient(lifts, list(m))
        want = sum(vac.max_cw(A) for A in lifts) + sum(m) - eng2.pair_exponent(1, 2)
        if out:
            assert vac.max_cw(out) == want


def test_m_coefficient_matches_deep_truncation(eng1):
    vac = eng1.vac
    lift = eng1.fundamental_lift(1)
    p = eng1.pair_exponent(1, 1)
    nonzero = 0
    for A, B in product(lift, lift):
        for m in product(range(-2, 4), repeat=2):
            got = eng1.m_coefficient([A, B], list(m))
            assert got == oracles.m_coefficient_oracle(vac, [A, B], list(m), p, depth=15)
            nonzero += bool(got)
    assert nonzero > 30


def test_m_coefficient_matches_deep_truncation_a2(eng2):
    vac = eng2.vac
    p = eng2.pair_exponent(1, 2)
    for A, B in product(eng2.fundamental_lift(1), eng2.fundamental_lift(2)):
        for m in product(range(-1, 3), repeat=2):
            got = eng2.m_coefficient([A, B], list(m))
            assert got == oracles.m_coefficient_oracle(vac, [A, B], list(m), p, depth=12)


def test_phi_product_examples(eng1):
    e = eng1.vac.exp_state((1,))
    x = eng1.phi_product([(e, 0), (e, 0)])
    assert not x.is_zero() and x.lam == (2,)
    assert x.rep == eng1.vac.exp_state((2,))
    with pytest.raises(ValueError):
        eng1.phi_product([(e, -1), (e, 0)])


def test_phi_product_is_symmetric(eng2):
    rng = random.Random(11)
    l1, l2 = eng2.fundamental_lift(1), eng2.fundamental_lift(2)
    for _ in range(12):
        A, B = rng.choice(l1), rng.choice(l2)
        a, b = rng.randrange(3), rng.randrange(3)
        assert eng2.phi_product([(A, a), (B, b)]) == eng2.phi_product([(B, b), (A, a)])


def test_phi_product_is_linear(eng1):
    l = eng1.fundamental_lift(1)
    s = l[0] + l[1].scale(3)
    for a, b in [(0, 0), (1, 0), (1, 2)]:
        lhs = eng1.phi_product([(s, a), (l[0], b)])
        rhs_rep = eng1.phi_rep([(l[0], a), (l[0], b)]) + eng1.phi_rep([(l[1], a), (l[0], b)]).scale(3)
        assert lhs == eng1.ring_element(rhs_rep, [1, 1], eng1.vac.max_cw(lhs.rep) if lhs.rep else None)


def test_swap_sign_is_a_sign(eng2):
    for A in eng2.fundamental_lift(1):
        for B in eng2.fundamental_lift(2):
            assert eng2.swap_sign(next(iter(A.lattice_weights())), next(iter(B.lattice_weights())), 1, 2) in (1, -1)


def test_ring_element_json(eng1):
    e = eng1.vac.exp_state((1,))
    data = eng1.phi_product([(e, 1), (e, 0)]).to_json()
    assert data["lambda"] == [2] and set(data) == {"lambda", "rep", "reduced", "basis_fingerprint"}


# -- derivative products and relations ----------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(m=st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4)),
       s=st.integers(1, 4), j=st.integers(0, 6))
def test_binomial_identity(m, s, j):
    assert binomial_identity_holds(m, s, j)


def test_binomial_identity_simple_case():
    for m in (Fraction(-1, 2), Fraction(2, 3), 5):
        assert binom(Fraction(m) - 1, 1) * -1 == 1 - m
        assert binomial_identity_holds(m, 1, 1)


def test_vertex_mult_examples(eng1, eng2):
    e = eng1.vac.exp_state((1,))
    assert eng1.vertex_mult_check(e, e, 1, 0)
    a, b = eng2.vac.exp_state((1, 0)), eng2.vac.exp_state((0, 1))
    assert eng2.vertex_mult_check(a, b, 1, 1)
    with pytest.raises(ValueError):
        eng1.vertex_mult_check(e, e, 0, 0)


def test_vertex_mult_all_lifts_a2(eng2):
    gens = eng2.fundamental_lift(1) + eng2.fundamental_lift(2)
    for A, B in product(gens, gens):
        for s in (1, 2):
            for r in (0, 1):
                assert eng2.vertex_mult_check(A, B, s, r)


def test_verify_relation_examples(eng1, eng2):
    lift = eng1.fundamental_lift(1)
    assert eng1.verify_relation([], 1)
    sym = [(lift[0], lift[1]), (lift[1], lift[0])]
    assert eng1.verify_relation(sym, 1)
    anti = [(lift[0], lift[1]), (lift[1], lift[0].scale(-1))]
    with pytest.raises(HypothesisFailure):
        eng1.verify_relation(anti, 1)
    real = PluckerRealization(eng2.rs)
    (kv,) = quadratic_kernel(eng2.rs, 2, 1, 1)
    pairs = [(real.state(I).scale(c), real.state(J)) for (I, J), c in sorted(kv.items())]
    assert eng2.verify_relation(pairs, 1, cutoff=2)
    # the z^1 coefficient is a nonzero free-ring element whose image vanishes
    assert relation_series(eng2.rs, kv, 1, 2).coefficients[1]
    z1 = eng2.relation_coefficient(pairs, 1, 1)
    assert z1.is_zero() or eng2.ring_element(z1, [2, 1]).is_zero()


def test_verify_relation_detects_non_relation(eng2):
    A, B = eng2.vac.exp_state((1, 0)), eng2.vac.exp_state((0, 1))
    with pytest.raises(HypothesisFailure):
        eng2.verify_relation([(A, B)], 1)


def test_verify_relation_rejects_mixed_pairs(eng2):
    l1, l2 = eng2.fundamental_lift(1), eng2.fundamental_lift(2)
    with pytest.raises(ValueError):
        eng2.verify_relation([(l1[0], l2[0]), (l1[0], l1[1])], 1)
