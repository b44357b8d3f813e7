"""Named verification checks shared by the command line and the test suite.

Each check returns a :class:`Check` record: a short name, an anchor string
describing the property being tested, a pass flag and the number of
instances examined.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .fock import State
from .root_data import RootSystem
from .vertex import LatticeVOA


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    count: int
    details: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "anchor": self.anchor, "passed": bool(self.passed),
               "count": self.count, "failures": [str(d) for d in self.details[:5]]}
        if self.info:
            out["info"] = {k: self.info[k] for k in sorted(self.info)}
        return out


def _coset_values(vac: LatticeVOA, g: int, h: int, lo, hi) -> list:
    """Admissible indices for parities ``(g, h)`` in ``[lo, hi]``."""
    chi = vac.rs.representatives
    shift = -vac.inner(chi[g], chi[h])
    lo, hi = Fraction(lo), Fraction(hi)
    x = shift + ((lo - shift) // 1)
    if x < lo:
        x += 1
    out = []
    while x <= hi:
        out.append(x)
        x += 1
    return out


def random_state(vac: LatticeVOA, rng: random.Random, cls: int, max_cw) -> State:
    """Random combination of one or two monomials of class ``cls``."""
    pool = [k for k in vac.basis_monomials(max_cw, cls)]
    out = State()
    for _ in range(rng.randint(1, 2)):
        cre, lat = rng.choice(pool)
        out = out + State.monomial(lat, cre, Fraction(rng.randint(1, 3) * rng.choice((1, -1))))
    return out if out else State.monomial(*reversed(pool[0]))


def random_borcherds_instance(vac: LatticeVOA, rng: random.Random, cutoff, state_cw=2):
    """A random parity-admissible ``(a, b, c, n, m, k)`` with output weight ``<= cutoff``."""
    order = len(vac.rs.representatives)
    while True:
        pa, pb, pc = (rng.randrange(order) for _ in range(3))
        a = random_state(vac, rng, pa, state_cw)
        b = random_state(vac, rng, pb, state_cw)
        c = random_state(vac, rng, pc, state_cw)
        ca, cb, cc = vac.max_cw(a), vac.max_cw(b), vac.max_cw(c)
        ns = _coset_values(vac, pa, pb, -3, ca + cb - 1)
        ms = _coset_values(vac, pa, pc, -3, ca + cc - 1)
        if not ns or not ms:
            continue
        n, m = rng.choice(ns), rng.choice(ms)
        total = ca + cb + cc - n - m - 2
        ks = _coset_values(vac, pb, pc, total - cutoff, total)
        if ks:
            return a, b, c, n, m, rng.choice(ks)


# -- vertex algebra -------------------------------------------------------------

def check_conformal_weights(vac: LatticeVOA, cutoff) -> Check:
    keys = vac.basis_monomials(cutoff)
    bad = []
    for cre, lat in keys:
        v = State.monomial(lat, cre)
        if vac.conformal_op(v) != v.scale(vac.key_cw((cre, lat))):
            bad.append((cre, lat))
    return Check("conformal-weight", "omega_(1) acts by (mu,mu)/2 plus creator degree",
                 not bad, len(keys), bad)


def check_fundamental_weight_quarter(vac: LatticeVOA) -> Check:
    """``omega_(1) e^{+-omega}`` against the exact value ``(omega, omega) / 2``."""
    bad, count = [], 0
    for i in range(1, vac.rank + 1):
        w = vac.rs.omega(i)
        for lat in (w, tuple(-x for x in w)):
            v = vac.exp_state(lat)
            expect = vac.rs.inner(w, w) / 2
            count += 1
            if vac.conformal_op(v) != v.scale(expect):
                bad.append(lat)
    anchor = "omega_(1) e^{+-omega_i} = (omega_i, omega_i)/2 e^{+-omega_i}"
    if vac.rs.name == "A1":
        anchor += " (= 1/4 for sl2)"
    return Check("fundamental-conformal-weight", anchor, not bad, count, bad)


def check_vacuum_axioms(vac: LatticeVOA, cutoff) -> Check:
    keys = vac.basis_monomials(min(Fraction(cutoff), 2))
    vacuum = vac.vacuum()
    bad, count = [], 0
    for cre, lat in keys:
        v = State.monomial(lat, cre)
        count += 1
        if vac.mode(vacuum, -1, v) != v or vac.mode(v, -1, vacuum) != v:
            bad.append(("identity", cre, lat))
        for n in range(0, 3):
            if vac.mode(v, n, vacuum):
                bad.append(("creation", cre, lat, n))
    if vac.translation(vacuum):
        bad.append("T|0> != 0")
    return Check("vacuum", "Y(|0>,z) = Id, Y(a,z)|0> = a + O(z), T|0> = 0", not bad, count, bad)


def check_translation(vac: LatticeVOA, cutoff) -> Check:
    """``T a_(n) - a_(n) T = -n a_(n-1)`` and ``T a = a_(-2)|0>``."""
    keys = vac.basis_monomials(min(Fraction(cutoff), 2))
    vacuum = vac.vacuum()
    bad, count = [], 0
    for cre, lat in keys:
        a = State.monomial(lat, cre)
        if vac.translation(a) != vac.mode(a, -2, vacuum):
            bad.append(("T a", cre, lat))
        pa = vac.parity(a)
        for cre2, lat2 in keys[:12]:
            v = State.monomial(lat2, cre2)
            for n in _coset_values(vac, pa, vac.parity(v), -2, vac.max_cw(a) + vac.max_cw(v) - 1):
                count += 1
                lhs = vac.translation(vac.mode(a, n, v)) - vac.mode(a, n, vac.translation(v))
                if lhs != vac.mode(a, n - 1, v).scale(-n):
                    bad.append((cre, lat, cre2, lat2, n))
    return Check("translation", "[T, a_(n)] = -n a_(n-1) and T a = a_(-2)|0>", not bad, count, bad)


def check_borcherds_random(vac: LatticeVOA, cutoff, trials: int = 100, seed: int = 0) -> Check:
    rng = random.Random(seed)
    bad, nontrivial = [], 0
    for _ in range(trials):
        inst = random_borcherds_instance(vac, rng, cutoff)
        lhs, rhs = vac.borcherds_sides(*inst)
        nontrivial += not lhs.is_zero()
        if lhs != rhs:
            bad.append(inst)
    return Check("borcherds", "Borcherds identity on random parity-admissible triples",
                 not bad, trials, bad, {"nonzero_instances": nontrivial})


def _lift_generators(rs: RootSystem, experimental=False) -> list:
    from .filtration import engine
    eng = engine(rs, experimental)
    return [s for i in range(1, rs.rank + 1) for s in eng.fundamental_lift(i)]


def check_locality_lifts(vac: LatticeVOA, cutoff) -> Check:
    gens = _lift_generators(vac.rs)
    bad, count = [], 0
    for A in gens:
        for B in gens:
            n = vac.locality_order(A, B)
            count += 1
            if not vac.check_locality(A, B, n, cutoff=cutoff):
                bad.append((A, B, n))
    return Check("locality", "exact locality of lift fields at the minimal order",
                 not bad, count, bad)


def check_affine(vac: LatticeVOA, cutoff, max_mode: int = 3) -> Check:
    ok, count, bad = vac.check_affine(max_mode=max_mode, cutoff=cutoff)
    return Check("affine-brackets",
                 "[x_(m), y_(n)] = [x,y]_(m+n) + m delta_{m+n,0} (x,y) on level-one currents",
                 ok, count, bad)


def voa_axioms(rs: RootSystem, cutoff=4, seed: int = 0) -> list:
    vac = LatticeVOA(rs)
    checks = [
        check_fundamental_weight_quarter(vac),
        check_conformal_weights(vac, cutoff),
        check_vacuum_axioms(vac, cutoff),
        check_translation(vac, cutoff),
        check_borcherds_random(vac, cutoff, seed=seed),
        check_affine(vac, cutoff),
    ]
    if rs.kind == "A":
        checks.append(check_locality_lifts(vac, cutoff))
    return checks


# -- filtration and multiplication -------------------------------------------------

def filtration_weights(rs: RootSystem) -> list:
    """Dominant weights used by the filtration checks."""
    if rs.name == "A1":
        return [(1,), (2,), (3,)]
    out = [rs.omega(i) for i in range(1, rs.rank + 1)]
    for i in range(1, rs.rank + 1):
        for j in range(i, rs.rank + 1):
            out.append(tuple(a + b for a, b in zip(rs.omega(i), rs.omega(j))))
    return out


def check_lift_dimensions(eng) -> Check:
    from .weyl_characters import fundamental_dim
    bad = []
    for i in range(1, eng.rs.rank + 1):
        if len(eng.fundamental_lift(i)) != fundamental_dim(eng.rs, i):
            bad.append(i)
    return Check("lift-dimensions", "g-closure of e^{omega_i} has the dimension of V_{omega_i}",
                 not bad, eng.rs.rank, bad)


def check_quotient_characters(eng, weights, max_degree: int) -> Check:
    """``G_lam / G_{<lam}`` against the dual global Weyl module, weight by weight."""
    from .weyl_characters import ch_global_dual
    bad, info = [], {}
    for lam in weights:
        sp = eng.g_span(lam, eng.rs.norm2(lam) / 2 + max_degree)
        got = sp.quotient_character()
        want = ch_global_dual(eng.rs, lam, max_degree).terms
        for d in range(max_degree + 1):
            a = {w: m for w, m in got.get(d, {}).items() if m}
            b = {w: m for w, m in want.get(d, {}).items() if m}
            if a != b:
                bad.append((lam, d))
        info[",".join(map(str, lam))] = sp.quotient_dims(max_degree)
    return Check("quotient-characters",
                 "graded character of G_lam/G_<lam equals that of the dual global Weyl module",
                 not bad, len(weights), bad, info)


def _product_cases(eng, three_factor: bool) -> list:
    r = eng.rs.rank
    cases = [(i, j) for i in range(1, r + 1) for j in range(i, r + 1)]
    if three_factor:
        cases += [(i, j, k) for i in range(1, r + 1) for j in range(i, r + 1)
                  for k in range(j, r + 1)]
    return cases


def check_positive_products(eng, three_factor: bool = True) -> Check:
    """The all-zero coefficient of the product of highest states is ``+-e^lam``."""
    vac = eng.vac
    bad, count = [], 0
    for idx in _product_cases(eng, three_factor):
        tops = [vac.exp_state(eng.rs.omega(i)) for i in idx]
        lam = tuple(sum(x) for x in zip(*(eng.rs.omega(i) for i in idx)))
        out = eng.m_coefficient(tops, [0] * len(idx))
        count += 1
        if out not in (vac.exp_state(lam), vac.exp_state(lam, -1)):
            bad.append(idx)
    return Check("positive-product", "M(e^{omega_j1},...)_{0,...,0} = +-e^lam",
                 not bad, count, bad)


def _exponent_vectors(s: int, lo: int, hi: int):
    from itertools import product
    return product(range(lo, hi + 1), repeat=s)


def check_negative_products(eng, three_factor: bool = True, lo: int = -2, max_degree: int = 1) -> Check:
    """Coefficients with some negative exponent lie in ``G_{<lam}``."""
    from itertools import product
    bad, count = [], 0
    for idx in _product_cases(eng, three_factor):
        lam = tuple(sum(x) for x in zip(*(eng.rs.omega(i) for i in idx)))
        base = eng.rs.norm2(lam) / 2
        lifts = [eng.fundamental_lift(i) for i in idx]
        low = eng.g_span(lam, base + max_degree).lower
        for ms in _exponent_vectors(len(idx), lo, max_degree):
            if min(ms) >= 0 or sum(ms) > max_degree:
                continue
            for choice in product(*lifts):
                out = eng.m_coefficient(list(choice), list(ms), list(idx))
                count += 1
                if out and not low.contains(out):
                    bad.append((idx, ms))
    return Check("negative-product",
                 "M-coefficients with a negative exponent vanish modulo G_<lam",
                 not bad, count, bad)


def check_lift_uniqueness(eng) -> Check:
    """The top component of the dual filtration piece is exactly the lift span."""
    vac = eng.vac
    bad, count = [], 0
    for i in range(1, eng.rs.rank + 1):
        w = eng.rs.omega(i)
        base = eng.rs.norm2(w) / 2
        lift = eng.fundamental_lift(i)
        sp = eng.g_span(w, base)
        if sp.lower.rank() != 0 or sp.span.rank() != len(lift):
            bad.append(("span", i))
        cls = eng.rs.gamma_class(w)
        for cre, lat in vac.basis_monomials(base, cls):
            if vac.key_cw((cre, lat)) != base:
                continue
            v = State.monomial(lat, cre)
            count += 1
            if eng.in_fdag(v, w) != sp.span.contains(v):
                bad.append((i, cre, lat))
    return Check("lift-uniqueness",
                 "top component of the dual filtration piece of omega_i equals the lift span",
                 not bad, count, bad)


def check_swap_invariance(eng, lam, cutoff) -> Check:
    """Raw swap with the sign kappa, and symmetry of the product map, on basis pairs."""
    idx = [k + 1 for k, a in enumerate(lam) for _ in range(a)]
    if len(idx) != 2:
        raise ValueError("swap check needs a sum of two fundamental weights")
    i, j = idx
    base = eng.rs.norm2(lam) / 2
    low = eng.g_span(lam, Fraction(cutoff)).lower
    bad, count = [], 0
    max_deg = int(Fraction(cutoff) - base)
    for A in eng.fundamental_lift(i):
        for B in eng.fundamental_lift(j):
            (la,), (lb,) = A.lattice_weights(), B.lattice_weights()
            kappa = eng.swap_sign(la, lb, i, j)
            for a in range(max_deg + 1):
                for b in range(max_deg + 1 - a):
                    count += 1
                    x = eng.m_coefficient([A, B], [a, b], [i, j])
                    y = eng.m_coefficient([B, A], [b, a], [j, i])
                    if not low.contains(x - y.scale(kappa)):
                        bad.append(("swap", la, lb, a, b))
                    p = eng.phi_product([(A, a), (B, b)])
                    q = eng.phi_product([(B, b), (A, a)])
                    if p != q:
                        bad.append(("phi", la, lb, a, b))
    return Check("swap-invariance",
                 "M(A,B) = kappa M(B,A) mod G_<lam and the product map is symmetric",
                 not bad, count, bad)


def check_vertex_mult(eng, s_values=(1, 2), r_values=(0, 1, 2)) -> Check:
    r_ = eng.rs.rank
    gens = [(i, A) for i in range(1, r_ + 1) for A in eng.fundamental_lift(i)]
    bad, count = [], 0
    for _, A in gens:
        for _, B in gens:
            for s in s_values:
                for r in r_values:
                    count += 1
                    if not eng.vertex_mult_check(A, B, s, r):
                        bad.append((A, B, s, r))
    return Check("vertex-mult",
                 "(A_(m-s) B)_(-1-r)|0> equals the derivative product coefficient mod G_<lam",
                 not bad, count, bad)


def filtration(rs: RootSystem, cutoff=4, seed: int = 0) -> list:
    from .filtration import engine
    eng = engine(rs)
    max_degree = max(0, min(int(cutoff) - 1, 3))
    checks = [
        check_lift_dimensions(eng),
        check_lift_uniqueness(eng),
        check_quotient_characters(eng, filtration_weights(eng.rs), max_degree),
        check_positive_products(eng, three_factor=eng.rs.rank <= 2),
        check_negative_products(eng, three_factor=eng.rs.rank == 2, max_degree=min(max_degree, 1)),
        check_vertex_mult(eng),
    ]
    if eng.rs.rank >= 2:
        lam = tuple(a + b for a, b in zip(eng.rs.omega(1), eng.rs.omega(2)))
        checks.append(check_swap_invariance(eng, lam, min(Fraction(cutoff), 3)))
    else:
        checks.append(check_swap_invariance(eng, (2,), min(Fraction(cutoff), 3)))
    return checks


# -- relations -------------------------------------------------------------------

def _pairs_from_kernel(real, kv) -> list:
    return [(real.state(I).scale(c), real.state(J)) for (I, J), c in sorted(kv.items())]


def check_relations_vanish(rs: RootSystem, cutoff: int = 2) -> Check:
    from .filtration import engine
    from .plucker import PluckerRealization, quadratic_kernel
    real = PluckerRealization(rs)
    eng = engine(rs)
    r = rs.rank
    bad, count = [], 0
    for i in range(1, r + 1):
        for j in range(1, i + 1):
            top = min(j, r + 1 - i)
            for l in range(1, top + 1):
                for kv in quadratic_kernel(rs, i, j, l):
                    for s in range(1, l + 1):
                        count += 1
                        if not eng.verify_relation(_pairs_from_kernel(real, kv), s, cutoff):
                            bad.append((i, j, l, s))
    return Check("relations-vanish",
                 "every coefficient of each derivative Pluecker relation vanishes in the ring",
                 not bad, count, bad)


def check_relation_completeness(rs: RootSystem, i: int, j: int, max_degree: int) -> Check:
    """``free - relations = ring`` degree by degree, with the ring from the character."""
    from .plucker import quadratic_ideal_report
    from .weyl_characters import ch_global
    n = rs.rank + 1
    lam = [0] * rs.rank
    for k in (n - i, n - j):
        if 1 <= k <= rs.rank:
            lam[k - 1] += 1
    want = ch_global(rs, rs.dual_weight(tuple(lam)), max_degree).graded_dims(max_degree)
    report = quadratic_ideal_report(rs, i, j, max_degree)
    bad = []
    for row in report:
        d = row["degree"]
        if row["free_dim"] - row["relation_rank"] != want[d] or not row["relations_vanish"] \
                or row["image_rank"] != want[d]:
            bad.append(row)
    return Check(f"relation-completeness-{i}-{j}",
                 "quadratic relations cut the free ring down to the dual global Weyl module",
                 not bad, len(report), bad,
                 {"free": [r_["free_dim"] for r_ in report],
                  "relations": [r_["relation_rank"] for r_ in report],
                  "expected": list(want)})


def relations(rs: RootSystem, cutoff=3, seed: int = 0) -> list:
    if rs.kind != "A":
        from .filtration import UnsupportedType
        raise UnsupportedType("relations are implemented in type A")
    max_degree = max(0, min(int(cutoff) - 1, 2))
    checks = [check_relations_vanish(rs, max_degree)]
    for i in range(1, rs.rank + 1):
        for j in range(1, i + 1):
            checks.append(check_relation_completeness(rs, i, j, max_degree))
    return checks


# -- characters and tableaux -------------------------------------------------------

def check_k_statistic(n: int) -> Check:
    from itertools import combinations
    from .plucker import is_admissible, is_semistandard, k_statistic, p_set
    bad, count = [], 0
    for li in range(1, n):
        for lj in range(1, li + 1):
            for I in combinations(range(1, n + 1), li):
                for J in combinations(range(1, n + 1), lj):
                    if not is_admissible(I, J):
                        continue
                    count += 1
                    P = p_set(I, J)
                    k = k_statistic(I, J)
                    if any(a >= b for a, b in zip(P, P[1:])):
                        bad.append(("P", I, J))
                    if not 0 <= k <= min(lj, n - li):
                        bad.append(("bound", I, J))
                    if (k == 0) != is_semistandard(I, J):
                        bad.append(("semistandard", I, J))
    return Check(f"k-statistic-n{n}", "0 <= k(I,J) <= min(l(J), n-l(I)), k = 0 iff semistandard",
                 not bad, count, bad)


def check_two_route_characters(rs: RootSystem) -> Check:
    from .plucker import ch_w_two_fund, tensor_layer
    from .weyl_characters import ch_irreducible
    r = rs.rank
    bad, count = [], 0
    for i in range(1, r + 1):
        for j in range(1, i + 1):
            count += 1
            if ch_w_two_fund(rs, i, j) != ch_w_two_fund(rs, i, j, "lr"):
                bad.append(("two-route", i, j))
            for l in range(0, min(j, r + 1 - i) + 1):
                hw = [0] * r
                for k in (i + l, j - l):
                    if 1 <= k <= r:
                        hw[k - 1] += 1
                if tensor_layer(rs, i, j, l) != ch_irreducible(rs, tuple(hw)):
                    bad.append(("layer", i, j, l))
    return Check("two-route-characters",
                 "tableau character of W_{omega_i+omega_j} equals the LR formula; layers are irreducible",
                 not bad, count, bad)


def check_weyl_dimensions(rs: RootSystem) -> Check:
    from .weyl_characters import ch_local_weyl, local_weyl_dim
    bad = []
    weights = filtration_weights(rs)
    for lam in weights:
        ch = ch_local_weyl(rs, lam)
        if sum(ch.specialize_q1().values()) != local_weyl_dim(rs, lam):
            bad.append(lam)
    return Check("local-weyl-dimensions", "ch W_lam at q = 1 has dimension prod dim V_{omega_i}^{a_i}",
                 not bad, len(weights), bad)


def check_globalization(rs: RootSystem, max_degree: int = 3) -> Check:
    from .weyl_characters import dual_model, exterior_model, globalize
    bad, count = [], 0
    for i in range(1, rs.rank + 1):
        U = exterior_model(rs, i)
        G = globalize(U, "t", max_degree)
        ch_u = U.character().terms[0]
        ch_g = G.character()
        for d in range(max_degree + 1):
            count += 1
            if dict(ch_g.terms.get(d, {})) != dict(ch_u):
                bad.append((i, d))
        D = globalize(dual_model(U), "t^-1", max_degree)
        if D.dim != G.dim:
            bad.append((i, "dual"))
    return Check("globalization", "ch U[t] = ch U / (1 - q) degree by degree",
                 not bad, count, bad)


def check_cyclicity(rs: RootSystem, max_degree: int = 3) -> Check:
    """``W_{omega_i}[t]`` is generated by its degree-zero part, checked by closure rank."""
    from .weyl_characters import exterior_model, generated_rank, globalize
    bad = []
    for i in range(1, rs.rank + 1):
        G = globalize(exterior_model(rs, i), "t", max_degree)
        seeds = [n for n, (_, p) in enumerate(G.basis) if p == 0]
        if generated_rank(G, seeds) != G.dim:
            bad.append(i)
    return Check("cyclicity", "U[t] is generated by U (x) t^0", not bad, rs.rank, bad)


def characters(rs: RootSystem, cutoff=4, seed: int = 0) -> list:
    vac = LatticeVOA(rs)
    checks = [check_fundamental_weight_quarter(vac)]
    if rs.kind == "A":
        checks += [check_weyl_dimensions(rs), check_two_route_characters(rs),
                   check_k_statistic(rs.rank + 1), check_globalization(rs),
                   check_cyclicity(rs)]
    return checks


SUITES = {
    "voa-axioms": voa_axioms,
    "filtration": filtration,
    "relations": relations,
    "characters": characters,
}
