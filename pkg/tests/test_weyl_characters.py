from fractions import Fraction

import pytest

from lattice_voa.root_data import RootDataError, RootSystem
from lattice_voa.weyl_characters import (CharacterUnavailable, GModuleModel, QCharacter,
                                         ch_global, ch_global_dual, ch_irreducible,
                                         ch_local_weyl, dual_model, exterior_model,
                                         generated_rank, globalize, inverse_pochhammer,
                                         local_weyl_dim, lr_two_fundamentals, pairing,
                                         partition_of, q_binomial)

A1, A2, A3, D4 = (RootSystem.from_string(n) for n in ("A1", "A2", "A3", "D4"))


def test_local_weyl_dim_examples():
    assert local_weyl_dim(A1, (2,)) == 4
    assert local_weyl_dim(A2, (1, 1)) == 9
    assert local_weyl_dim(A3, (0, 0, 0)) == 1
    assert local_weyl_dim(D4, (1, 0, 0, 0)) == 8
    # W_{omega_2} = V_{omega_2} + V_0 in D4
    assert local_weyl_dim(D4, (0, 1, 0, 0)) == 29
    with pytest.raises(RootDataError):
        local_weyl_dim(A2, (1, -1))
    with pytest.raises(CharacterUnavailable):
        local_weyl_dim(RootSystem.from_string("E6"), (1, 0, 0, 0, 0, 0))


@pytest.mark.parametrize("rs", [A1, A2, A3])
def test_local_character_specializes_to_dimension(rs):
    r = rs.rank
    weights = [tuple(int(k == i) for k in range(r)) for i in range(r)]
    weights += [tuple(a + b for a, b in zip(weights[i], weights[j]))
                for i in range(r) for j in range(i, r)]
    for lam in weights:
        assert sum(ch_local_weyl(rs, lam).specialize_q1().values()) == local_weyl_dim(rs, lam)


def test_a1_local_characters_are_q_binomials():
    assert q_binomial(4, 2) == [1, 1, 2, 1, 1]
    ch = ch_local_weyl(A1, (2,))
    assert ch.degree(0) == {(2,): 1, (0,): 1, (-2,): 1} and ch.degree(1) == {(0,): 1}
    assert sum(ch_local_weyl(A1, (3,)).specialize_q1().values()) == 8


def test_irreducible_dimensions():
    assert sum(ch_irreducible(A2, (1, 1)).specialize_q1().values()) == 8
    assert sum(ch_irreducible(A3, (0, 1, 0)).specialize_q1().values()) == 6
    assert partition_of(A2, (1, 1)) == (2, 1)


def test_global_character_examples():
    assert ch_global(A1, (1,), 3).graded_dims() == [2, 2, 2, 2]
    assert ch_global(A1, (1,), 2).degree(2) == {(1,): 1, (-1,): 1}
    assert ch_global(A1, (2,), 2).graded_dims() == [3, 4, 7]
    assert ch_global(A2, (0, 0), 3).graded_dims() == [1, 0, 0, 0]
    ch = ch_global(A2, (1, 1), 2)
    assert ch.graded_dims() == [8, 9 + 8, 26]
    assert ch.degree(0) == ch_irreducible(A2, (1, 1)).degree(0)


def test_global_dual_negates_weights():
    a = ch_global(A2, (1, 0), 1)
    b = ch_global_dual(A2, (0, 1), 1)
    assert b == a.dual()


def test_inverse_pochhammer():
    assert inverse_pochhammer(1, 4) == [1, 1, 1, 1, 1]
    assert inverse_pochhammer(2, 5) == [1, 1, 2, 2, 3, 3]


def test_lr_examples():
    assert lr_two_fundamentals(A2, 1, 1) == [(2, 0), (0, 1)]
    assert lr_two_fundamentals(A1, 1, 1) == [(2,), (0,)]
    assert lr_two_fundamentals(A3, 3, 1) == [(1, 0, 1), (0, 0, 0)]
    with pytest.raises(ValueError):
        lr_two_fundamentals(A2, 1, 2)


def test_exterior_models():
    m = exterior_model(A2, 1)
    assert m.basis == [(1,), (2,), (3,)]
    assert m.act(("f", 1), 0, {0: Fraction(1)}) == {1: 1}
    assert exterior_model(A2, 2).dim == 3
    assert exterior_model(A3, 2).dim == 6
    assert m.character() == ch_irreducible(A2, (1, 0))
    with pytest.raises(CharacterUnavailable):
        exterior_model(D4, 1)


def _bracket_holds(m, x, y, z, c):
    """``[x, y] = c z`` on every basis vector of ``m``."""
    for k in range(m.dim):
        v = {k: Fraction(1)}
        xy = m.act(x, 0, m.act(y, 0, v))
        yx = m.act(y, 0, m.act(x, 0, v))
        lhs = {a: xy.get(a, 0) - yx.get(a, 0) for a in set(xy) | set(yx)}
        rhs = {a: c * b for a, b in m.act(z, 0, v).items()} if z else {}
        if {a: b for a, b in lhs.items() if b} != {a: b for a, b in rhs.items() if b}:
            return False
    return True


@pytest.mark.parametrize("rs,i", [(A2, 1), (A3, 2)])
def test_model_satisfies_chevalley_relations(rs, i):
    for m in (exterior_model(rs, i), dual_model(exterior_model(rs, i))):
        for k in range(1, rs.rank + 1):
            assert _bracket_holds(m, ("e", k), ("f", k), ("h", k), 1)
            for l in range(1, rs.rank + 1):
                if l != k:
                    assert _bracket_holds(m, ("e", k), ("f", l), None, 0)


def test_dual_model_weights():
    m = dual_model(exterior_model(A2, 1))
    assert m.character() == ch_irreducible(A2, (0, 1))


def test_globalize_action_formula():
    U = exterior_model(A1, 1)
    # give U a nilpotent degree-one piece so that both terms of the formula show up
    U.action[(("e", 1), 1)] = {1: {0: Fraction(5)}}
    G = globalize(U, "t", 2)
    u = G.index[((2,), 0)]
    out = G.act(("e", 1), 1, {u: Fraction(1)})
    assert out == {G.index[((1,), 1)]: 1, G.index[((1,), 0)]: 5}


def test_globalize_character_and_errors():
    U = exterior_model(A2, 2)
    G = globalize(U, "t", 3)
    ch = G.character()
    for k in range(4):
        assert ch.degree(k) == U.character().degree(0)
    D = globalize(dual_model(U), "t^-1", 3)
    assert D.character().graded_dims() == [3, 3, 3, 3]
    with pytest.raises(ValueError):
        globalize(U, "t^2", 1)
    bad = exterior_model(A1, 1)
    bad.action[(("h", 1), 1)] = {0: {0: Fraction(1)}}
    with pytest.raises(ValueError):
        globalize(bad, "t", 1)


def test_globalized_fundamental_matches_global_weyl():
    for rs in (A1, A2, A3):
        for i in range(1, rs.rank + 1):
            lam = tuple(int(k == i - 1) for k in range(rs.rank))
            G = globalize(exterior_model(rs, i), "t", 3)
            assert G.character() == ch_global(rs, lam, 3)


def test_duality_pairing_is_invariant():
    U = exterior_model(A2, 1)
    G = globalize(U, "t", 3)
    D = globalize(dual_model(U), "t^-1", 3)
    for gen in G.generators():
        for m in range(3):
            for a in range(G.dim):
                for b in range(D.dim):
                    va, vb = {a: Fraction(1)}, {b: Fraction(1)}
                    x = pairing(G.act(gen, m, va), vb, G, D)
                    y = pairing(va, D.act(gen, m, vb), G, D)
                    assert x + y == 0


def test_pairing_is_perfect_between_opposite_degrees():
    U = exterior_model(A2, 1)
    G, D = globalize(U, "t", 2), globalize(dual_model(U), "t^-1", 2)
    for a, (ua, k) in enumerate(G.basis):
        partners = [b for b in range(D.dim) if pairing({a: 1}, {b: 1}, G, D)]
        assert [D.basis[b] for b in partners] == [(ua, -k)]


def test_cyclicity_by_rank():
    G = globalize(exterior_model(A3, 2), "t", 3)
    seeds = [n for n, (_, p) in enumerate(G.basis) if p == 0]
    assert generated_rank(G, seeds) == G.dim
    trivial = GModuleModel(1, [()], [(0,)], {(("h", 1), 0): {}})
    T = globalize(trivial, "t", 2)
    assert generated_rank(T, [0]) == 1 < T.dim


def test_qcharacter_json_and_arithmetic():
    ch = QCharacter({0: {(1,): 1}, 2: {(0,): 3}}, truncation=3)
    assert ch.to_json() == [{"q_degree": 0, "weights": [{"coords": [1], "mult": 1}]},
                            {"q_degree": 2, "weights": [{"coords": [0], "mult": 3}]}]
    prod = ch * QCharacter({1: {(-1,): 1}})
    assert prod.degree(1) == {(0,): 1} and prod.degree(3) == {(-1,): 3}
    assert (ch + ch).graded_dims() == [2, 0, 6, 0]
    assert ch.shift(1).degree(3) == {(0,): 3}
    assert ch.truncate(1).graded_dims() == [1, 0]
