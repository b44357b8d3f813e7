"""The filtration ``G_lam`` of the lattice VOA and the product on the coordinate ring.

``G_0`` is the line of the vacuum, and ``G_lam`` is spanned by ``G_mu`` for
dominant ``mu < lam`` with ``lam - mu`` in the root lattice together with all
``B_(k) C`` for ``B`` in the lift of a fundamental module ``i`` with
``lam - omega_i`` dominant and ``C`` in ``G_{lam - omega_i}``.  Every span is
truncated at a conformal-weight cutoff.  Recursing at the same cutoff is
complete: a product that lands at weight ``<= c`` from a factor of weight
``> c`` comes from a positive mode, and positive modes of a lift state only
lower the weight inside the span of smaller filtration pieces already present
at weight ``<= c``; the character comparison in the tests checks this.
"""
from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from .cyclotomic import as_scalar
from .fock import State
from .linalg import Echelon
from .root_data import RootSystem
from .vertex import LatticeVOA, binom


class UnsupportedType(ValueError):
    """The computation is only supported in type A (others need ``experimental``)."""


class HypothesisFailure(ValueError):
    """The hypothesis of a relation check does not hold."""


def _max_dim() -> int:
    import os
    return int(os.environ.get("LATTICE_VOA_MAX_DIM", "5000"))


class GradedSpan:
    """Subspace of the VOA, stored as one canonical echelon basis per graded component.

    A component is a pair ``(lattice weight, conformal weight)``; inside a
    component, vectors are dicts keyed by creator tuples.
    """

    def __init__(self, vac: LatticeVOA):
        self.vac = vac
        self.comps: dict = {}

    def copy(self) -> "GradedSpan":
        g = GradedSpan(self.vac)
        g.comps = {k: e.copy() for k, e in self.comps.items()}
        return g

    def _split(self, v: State) -> dict:
        out = defaultdict(dict)
        for (cre, lat), c in v:
            if not isinstance(c, Fraction):
                raise TypeError("filtration spans need rational coefficients")
            out[(lat, self.vac.key_cw((cre, lat)))][cre] = c
        return out

    def add(self, v: State) -> bool:
        grew = False
        for comp, vec in self._split(v).items():
            e = self.comps.get(comp)
            if e is None:
                e = self.comps[comp] = Echelon()
            if e.add(vec):
                grew = True
                if e.rank > _max_dim():
                    raise MemoryError(f"component {comp} exceeds LATTICE_VOA_MAX_DIM")
        return grew

    def merge(self, other: "GradedSpan"):
        for comp, e in other.comps.items():
            for vec in e.vectors():
                self.add(State({(cre, comp[0]): c for cre, c in vec.items()}))

    def reduce(self, v: State) -> State:
        out = {}
        for comp, vec in self._split(v).items():
            e = self.comps.get(comp)
            r = e.reduce(vec) if e is not None else vec
            for cre, c in r.items():
                out[(cre, comp[0])] = c
        return State(out)

    def contains(self, v: State) -> bool:
        return self.reduce(v).is_zero()

    def rank(self, lattice=None, cw=None) -> int:
        return sum(e.rank for (lat, w), e in self.comps.items()
                   if (lattice is None or lat == tuple(lattice)) and (cw is None or w == cw))

    def components(self) -> list:
        return sorted(self.comps, key=lambda c: (c[1], c[0]))

    def basis_states(self, comp=None) -> list:
        comps = [comp] if comp is not None else self.components()
        out = []
        for c in comps:
            e = self.comps.get(c)
            if e is None:
                continue
            for vec in e.vectors():
                out.append(State({(cre, c[0]): x for cre, x in vec.items()}))
        return out

    def fingerprint(self, comps) -> str:
        data = []
        for c in sorted(comps, key=lambda c: (c[1], c[0])):
            e = self.comps.get(c)
            rows = [] if e is None else [
                sorted((json.dumps(k), str(x)) for k, x in v.items()) for v in e.vectors()]
            data.append([list(c[0]), str(c[1]), rows])
        return hashlib.sha256(json.dumps(data).encode()).hexdigest()


@dataclass
class FiltrationSpan:
    """``G_lam`` and ``G_{<lam}`` up to conformal weight ``cutoff``."""

    lam: tuple
    cutoff: Fraction
    span: GradedSpan
    lower: GradedSpan
    rs: RootSystem = field(repr=False)

    @property
    def base_cw(self) -> Fraction:
        return self.rs.norm2(self.lam) / 2

    def quotient_rank(self, comp) -> int:
        top = self.span.comps.get(comp)
        low = self.lower.comps.get(comp)
        return (top.rank if top else 0) - (low.rank if low else 0)

    def quotient_character(self):
        """``{q-degree: {weight: multiplicity}}`` of ``G_lam / G_{<lam}``."""
        out = defaultdict(dict)
        for comp in self.span.components():
            d = self.quotient_rank(comp)
            if d:
                deg = comp[1] - self.base_cw
                assert deg.denominator == 1
                out[int(deg)][comp[0]] = d
        return dict(out)

    def quotient_dims(self, max_degree: int) -> list:
        ch = self.quotient_character()
        return [sum(ch.get(k, {}).values()) for k in range(max_degree + 1)]

    def basis(self) -> list:
        return self.span.basis_states()

    def contains(self, v: State) -> bool:
        return self.span.contains(v)


@dataclass
class RingElement:
    """Class of ``rep`` in ``G_lam / G_{<lam}``.

    ``reduced`` is the canonical remainder of ``rep`` modulo ``G_{<lam}``;
    two ring elements are equal iff their reduced states agree.
    """

    lam: tuple
    rep: State
    reduced: State
    fingerprint: str
    L: int

    def is_zero(self) -> bool:
        return self.reduced.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.lam == other.lam and self.reduced == other.reduced

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "rep": self.rep.to_json(self.L),
            "reduced": self.reduced.to_json(self.L),
            "basis_fingerprint": self.fingerprint,
        }


def dominant_conjugate(rs: RootSystem, lam) -> tuple:
    lam = tuple(lam)
    while True:
        for i, a in enumerate(lam):
            if a < 0:
                al = rs.alpha(i + 1)
                lam = tuple(x - a * y for x, y in zip(lam, al))
                break
        else:
            return lam


class FiltrationEngine:
    """Caches lifts and filtration spans for one root system."""

    def __init__(self, rs: RootSystem | str, experimental: bool = False):
        self.vac = LatticeVOA(rs)
        self.rs = self.vac.rs
        self.experimental = experimental
        self._lifts = {}
        self._spans = {}

    def _require_supported(self):
        if self.rs.kind != "A" and not self.experimental:
            raise UnsupportedType(f"{self.rs.name} is only available with experimental=True")

    # -- lifts -----------------------------------------------------------------

    def lower_operator(self, k: int, v: State) -> State:
        """Normalized Chevalley ``f_k`` (1-based) acting at ``t^0``."""
        a = tuple(-x for x in self.rs.alpha(k))
        sign = self.rs.epsilon(a, tuple(-x for x in a))
        return self.vac.mode(self.vac.exp_state(a), 0, v).scale(sign)

    def raise_operator(self, k: int, v: State) -> State:
        return self.vac.mode(self.vac.exp_state(self.rs.alpha(k)), 0, v)

    def fundamental_lift(self, i: int) -> list:
        """Basis of the finite-dimensional module generated by ``e^{omega_i}``.

        In type A the weights form the Weyl orbit of ``omega_i`` and each basis
        state is ``+-e^mu`` with the sign produced by the lowering operators.
        """
        self._require_supported()
        hit = self._lifts.get(i)
        if hit is not None:
            return hit
        start = self.vac.exp_state(self.rs.omega(i))
        span = GradedSpan(self.vac)
        span.add(start)
        out = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for k in range(1, self.rs.rank + 1):
                    for w in (self.lower_operator(k, v), self.raise_operator(k, v)):
                        if w and span.add(w):
                            out.append(w)
                            nxt.append(w)
            frontier = nxt
        self._lifts[i] = out
        return out

    def fundamental_index(self, v: State) -> int:
        """``i`` such that the lattice weights of ``v`` lie in the orbit of ``omega_i``."""
        idx = set()
        for lat in v.lattice_weights():
            d = dominant_conjugate(self.rs, lat)
            nz = [k for k, a in enumerate(d) if a]
            if len(nz) != 1 or d[nz[0]] != 1:
                raise ValueError(f"{lat} is not conjugate to a fundamental weight")
            idx.add(nz[0] + 1)
        if len(idx) != 1:
            raise ValueError("state mixes different fundamental orbits")
        return idx.pop()

    # -- filtration ------------------------------------------------------------

    def g_span(self, lam, cutoff) -> FiltrationSpan:
        self._require_supported()
        lam = tuple(lam)
        cutoff = Fraction(cutoff)
        if not self.rs.is_dominant(lam):
            raise ValueError(f"{lam} is not dominant")
        key = (lam, cutoff)
        hit = self._spans.get(key)
        if hit is not None:
            return hit
        vac = self.vac
        lower = GradedSpan(vac)
        for mu in self.rs.dominant_below(lam, same_class=True):
            lower.merge(self.g_span(mu, cutoff).span)
        span = lower.copy()
        if not any(lam):
            if cutoff >= 0:
                span.add(vac.vacuum())
        for i in range(1, self.rs.rank + 1):
            if lam[i - 1] < 1:
                continue
            prev = self.g_span(tuple(a - (k == i - 1) for k, a in enumerate(lam)), cutoff)
            for B in self.fundamental_lift(i):
                cb = vac.max_cw(B)
                (nu, ), = [tuple(B.lattice_weights())]
                for comp in prev.span.components():
                    mu, cc = comp
                    out_lat = tuple(a + b for a, b in zip(nu, mu))
                    lo = cb + cc - 1 - cutoff
                    hi = cb + cc - 1 - vac.inner(out_lat, out_lat) / 2
                    k = lo + ((-vac.inner(nu, mu) - lo) % 1)
                    ks = []
                    while k <= hi:
                        ks.append(k)
                        k += 1
                    if not ks:
                        continue
                    for C in prev.span.basis_states(comp):
                        for k in ks:
                            span.add(vac.mode(B, k, C))
        res = FiltrationSpan(lam, cutoff, span, lower, self.rs)
        self._spans[key] = res
        return res

    def lower_span(self, lam, cutoff) -> GradedSpan:
        return self.g_span(lam, cutoff).lower

    # -- membership in the dual Demazure-type filtration ------------------------

    def current_states(self) -> list:
        """States whose modes ``m >= 0`` generate the positive current algebra."""
        out = [self.vac.exp_state(a) for a in self.rs.roots]
        out += [self.vac.simple_creator(i, 1) for i in range(1, self.rs.rank + 1)]
        return out

    def closure(self, v: State) -> GradedSpan:
        """Span of ``U(g[t]) v`` (``v`` homogeneous in conformal weight)."""
        vac = self.vac
        span = GradedSpan(vac)
        span.add(v)
        queue = [v]
        gens = self.current_states()
        while queue:
            w = queue.pop()
            top = int(vac.max_cw(w))
            for g in gens:
                for m in range(0, top + 1):
                    u = vac.mode(g, m, w)
                    if u and span.add(u):
                        queue.append(u)
        return span

    def in_fdag(self, v: State, lam) -> bool:
        """All weights of ``U(g[t]) v`` are ``<= lam``."""
        lam = tuple(lam)
        if v.is_zero():
            return True
        span = self.closure(v)
        return all(self.rs.leq(lat, lam) for (lat, _), e in span.comps.items() if e.rank)

    # -- multiplication --------------------------------------------------------

    def pair_exponent(self, i: int, j: int) -> Fraction:
        """``m_{ij} = -(omega_i, omega_j)``."""
        return -self.rs.inner(self.rs.omega(i), self.rs.omega(j))

    def m_coefficient(self, lifts, m, indices=None) -> State:
        """Coefficient of ``z_1^{m_1} ... z_s^{m_s}`` in the ordered product.

        The product is ``prod_{k<l} (z_k - z_l)^{m_{j_k j_l}} Y(A^1, z_1) ...
        Y(A^s, z_s)|0>``, each prefactor expanded in the region ``|z_k| > |z_l|``.

        Evaluated from the right.  After the factors ``l+1..s`` are applied, a
        state is labelled by the pending z-exponents still owed to the earlier
        variables.  At step ``l`` one picks ``j_{kl} >= 0`` for all ``k < l``;
        this fixes the exponent of ``z_l`` in ``Y(A^l, z_l)``:

            e_l = m_l - sum_{k>l} (m_{lk} - j_{lk}) - sum_{k<l} j_{kl},

        i.e. the mode ``n_l = -e_l - 1``.  Since ``A_(n) S`` has weight
        ``cw(A) + cw(S) + e_l >= 0``, the window is
        ``sum_{k<l} j_{kl} <= m_l - sum_{k>l}(m_{lk} - j_{lk}) + cw(A^l) + cw(S)``.
        """
        s = len(lifts)
        if len(m) != s:
            raise ValueError("need one exponent per factor")
        if s == 0:
            return self.vac.vacuum()
        js = list(indices) if indices is not None else [self.fundamental_index(A) for A in lifts]
        pm = [[self.pair_exponent(js[k], js[l]) for l in range(s)] for k in range(s)]
        # output weight; the prefactor lowers the weight by its total degree
        target = sum((self.vac.max_cw(A) for A in lifts), Fraction(0)) + sum(m) \
            - sum(pm[k][l] for k in range(s) for l in range(k + 1, s))
        if target < 0:
            return State()
        vac = self.vac
        # pending[k]: z_k exponent already supplied by prefactors with later variables
        states = {tuple([Fraction(0)] * s): vac.vacuum()}
        for l in range(s - 1, -1, -1):
            A = lifts[l]
            ca = vac.max_cw(A)
            new = defaultdict(State)
            for pending, S in states.items():
                base = m[l] - pending[l]
                window = base + ca + vac.max_cw(S)
                if window < 0:
                    continue
                for choice in _compositions(l, int(window)):
                    e = base - sum(choice)
                    coeff = Fraction(1)
                    for k, j in enumerate(choice):
                        coeff *= binom(pm[k][l], j) * (-1) ** j
                    if not coeff:
                        continue
                    out = vac.mode(A, -e - 1, S)
                    if out.is_zero():
                        continue
                    np_ = list(pending)
                    for k, j in enumerate(choice):
                        np_[k] += pm[k][l] - j
                    key = tuple(np_)
                    new[key] = new[key] + out.scale(coeff)
            states = {k: v for k, v in new.items() if v}
        total = State()
        for v in states.values():
            total = total + v
        return total

    def _canonical_terms(self, factors):
        """Expand factors into single-weight pieces, each product in canonical order.

        Yields ``(lifts, exponents, indices)`` with pieces sorted by
        ``(fundamental index, lattice weight)``.  Raw orderings differ from
        the canonical one by :meth:`swap_sign` per adjacent transposition.
        """
        pieces = []
        for A, mk in factors:
            i = self.fundamental_index(A)
            pieces.append([(i, lat, part, mk) for lat, part in sorted(A.by_lattice().items())])
        for choice in product(*pieces):
            items = sorted(choice, key=lambda t: (t[0], t[1], t[3]))
            yield [t[2] for t in items], [t[3] for t in items], [t[0] for t in items]

    def phi_rep(self, factors) -> State:
        """Representative of the product of ``A_k t^{-m_k}`` in canonical order."""
        for _, mk in factors:
            if mk < 0:
                raise ValueError("exponents must be non-negative")
        total = State()
        for lifts, ms, js in self._canonical_terms(factors):
            total = total + self.m_coefficient(lifts, ms, js)
        return total

    def phi_product(self, factors, cutoff=None) -> RingElement:
        """Class of the canonically ordered multiplication coefficient in ``G_lam / G_{<lam}``.

        ``factors`` is a list of ``(State, m)`` with ``m >= 0``.
        """
        self._require_supported()
        rep = self.phi_rep(factors)
        js = [self.fundamental_index(A) for A, _ in factors]
        return self.ring_element(rep, js, cutoff)

    def ring_element(self, rep: State, js, cutoff=None) -> RingElement:
        lam = [0] * self.rs.rank
        for j in js:
            lam[j - 1] += 1
        lam = tuple(lam)
        cw = self.vac.max_cw(rep) if rep else self.rs.norm2(lam) / 2
        cut = Fraction(cutoff) if cutoff is not None else cw
        low = self.g_span(lam, max(cut, cw)).lower
        reduced = low.reduce(rep)
        comps = {(lat, self.vac.key_cw((cre, lat))) for (cre, lat) in rep.terms}
        return RingElement(lam, rep, reduced, low.fingerprint(comps), self.vac.L)

    def swap_sign(self, lam, mu, i: int, j: int) -> int:
        """``kappa`` with ``M(.., A, B, ..) = kappa M(.., B, A, ..)`` for adjacent factors.

        ``A`` has lattice weight ``lam`` in the orbit of ``omega_i`` and ``B``
        has ``mu`` in the orbit of ``omega_j``; ``kappa`` is the braiding
        phase times ``exp(i pi m_ij)``, always a sign.
        """
        ph = self.vac.braiding(tuple(lam), tuple(mu)) * self.rs.exp_pi_i(self.pair_exponent(i, j))
        val = as_scalar(ph, self.vac.L)
        if val not in (1, -1):
            raise ArithmeticError("swap phase is not a sign")
        return int(val)

    # -- relations -------------------------------------------------------------

    def vertex_mult_sides(self, A: State, B: State, s: int, r: int):
        """Both sides of the derivative product formula for ``(A_(m-s) B)_(-1-r)|0>``."""
        if s <= 0:
            raise ValueError("s must be positive")
        vac = self.vac
        i1, i2 = self.fundamental_index(A), self.fundamental_index(B)
        m = self.pair_exponent(i1, i2)
        for j in range(r + s + 1):
            if not binomial_identity_holds(m, s, j):
                raise ArithmeticError("binomial identity failed")
        lhs = vac.mode(vac.mode(A, m - s, B), -1 - r, vac.vacuum())
        rhs = State()
        vacuum = vac.vacuum()
        for p in range(s - 1, r + s):
            q = r + s - 1 - p
            fall = Fraction(factorial(p), factorial(p - s + 1) * factorial(s - 1))
            for l in range(q + 1):
                c = binom(m, l) * (-1) ** l * fall
                if c:
                    rhs = rhs + vac.mode(A, m - 1 - p - l, vac.mode(B, -1 - q + l, vacuum)).scale(c)
        return lhs, rhs

    def vertex_mult_check(self, A: State, B: State, s: int, r: int) -> bool:
        lhs, rhs = self.vertex_mult_sides(A, B, s, r)
        i1, i2 = self.fundamental_index(A), self.fundamental_index(B)
        lam = tuple(a + b for a, b in zip(self.rs.omega(i1), self.rs.omega(i2)))
        diff = lhs - rhs
        if diff.is_zero():
            return True
        low = self.g_span(lam, self.vac.max_cw(diff)).lower
        return low.contains(diff)

    def relation_coefficient(self, pairs, s: int, n: int) -> State:
        """Representative of the ``z^n`` coefficient of ``sum (d^{s-1} A(z)) B(z)``.

        Products keep the order ``A`` then ``B``, matching ``A_(m-s) B``.
        """
        total = State()
        for A, B in pairs:
            for a in range(s - 1, n + s):
                b = n + s - 1 - a
                fall = Fraction(factorial(a), factorial(a - s + 1))
                total = total + self.m_coefficient([A, B], [a, b]).scale(fall)
        return total

    def verify_relation(self, pairs, s: int, cutoff: int = 2) -> bool:
        """Check that every coefficient of a derivative relation vanishes in the ring.

        Raises :class:`HypothesisFailure` if ``sum A_(m-s) B`` is not in ``G_{<lam}``.
        """
        if not pairs:
            return True
        vac = self.vac
        lams = set()
        for A, B in pairs:
            i1, i2 = self.fundamental_index(A), self.fundamental_index(B)
            lams.add((i1, i2) if i1 <= i2 else (i2, i1))
        if len(lams) != 1:
            raise ValueError("all pairs must have the same pair of fundamental indices")
        i1, i2 = lams.pop()
        lam = tuple(a + b for a, b in zip(self.rs.omega(i1), self.rs.omega(i2)))
        m = self.pair_exponent(i1, i2)
        hyp = State()
        for A, B in pairs:
            hyp = hyp + vac.mode(A, m - s, B)
        if hyp:
            if not self.g_span(lam, vac.max_cw(hyp)).lower.contains(hyp):
                raise HypothesisFailure("sum of A_(m-s) B is not in the smaller filtration piece")
        for n in range(cutoff + 1):
            rep = self.relation_coefficient(pairs, s, n)
            if rep and not self.ring_element(rep, [i1, i2]).is_zero():
                return False
        return True


def _compositions(parts: int, total: int):
    """All tuples of ``parts`` non-negative integers with sum ``<= total``."""
    if parts == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(parts - 1, total - first):
            yield (first,) + rest


def binomial_identity_holds(m, s: int, j: int) -> bool:
    """``(s-1)! (-1)^j binom(m-s, j) == sum_l (-1)^l binom(m, l) (j-l+1)...(j-l+s-1)``."""
    lhs = factorial(s - 1) * (-1) ** j * binom(Fraction(m) - s, j)
    rhs = Fraction(0)
    for l in range(j + 1):
        rising = 1
        for t in range(1, s):
            rising *= (j - l + t)
        rhs += (-1) ** l * binom(m, l) * rising
    return lhs == rhs


_ENGINES: dict = {}


def engine(rs, experimental: bool = False) -> FiltrationEngine:
    name = rs if isinstance(rs, str) else rs.name
    key = (name, experimental)
    if key not in _ENGINES:
        _ENGINES[key] = FiltrationEngine(name, experimental)
    return _ENGINES[key]


def fundamental_lift(rs, i: int, experimental: bool = False) -> list:
    return engine(rs, experimental).fundamental_lift(i)


def g_span(rs, lam, cutoff, experimental: bool = False) -> FiltrationSpan:
    return engine(rs, experimental).g_span(lam, cutoff)


def in_fdag(rs, v: State, lam) -> bool:
    return engine(rs, True).in_fdag(v, lam)


def m_coefficient(rs, lifts, m, indices=None) -> State:
    return engine(rs, True).m_coefficient(lifts, m, indices)


def phi_product(rs, factors, cutoff=None) -> RingElement:
    return engine(rs).phi_product(factors, cutoff)


def vertex_mult_check(rs, A, B, s: int, r: int) -> bool:
    return engine(rs).vertex_mult_check(A, B, s, r)


def verify_relation(rs, pairs, s: int, cutoff: int = 2) -> bool:
    return engine(rs).verify_relation(pairs, s, cutoff)
