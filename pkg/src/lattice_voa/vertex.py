"""The P/Q-graded lattice vertex algebra on the weight lattice of a simply-laced type.

The vertex operator of a monomial ``h_1 t^-n_1 ... h_s t^-n_s (x) e^lam`` is the
normally ordered product of the derivative Heisenberg fields with
``Y(e^lam, z)``.  Since creation modes commute with each other and with
``e^lam``, and annihilation modes (including the zero modes, which sit to the
right of ``e^lam``) commute with each other, the fully expanded normal order is

    sum over subsets S of the Heisenberg factors:
        [creation parts of S] E^-(lam, z) eps(lam, mu) e^lam z^(lam, mu)
        [annihilation parts of the complement] E^+(lam, z)

which is what :meth:`LatticeVOA.mode` evaluates, one output z-power at a time.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction
from math import comb, factorial
from itertools import product

from .cyclotomic import CycScalar, as_scalar
from .fock import State, creator_degree, merge, remove_one
from .root_data import RootSystem


class ParityError(ValueError):
    """A mode index or state violates the P/Q parity precondition."""


def binom(x, j: int) -> Fraction:
    """Generalized binomial coefficient ``x (x-1) ... (x-j+1) / j!``."""
    if j < 0:
        return Fraction(0)
    out = Fraction(1)
    x = Fraction(x)
    for t in range(j):
        out *= (x - t)
    return out / factorial(j)


def _nonzero(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


class LatticeVOA:
    """Mode algebra of the lattice VOA for a root system.

    All methods are pure; caches hold only derived data.
    """

    def __init__(self, rs: RootSystem | str):
        if isinstance(rs, str):
            rs = RootSystem.from_string(rs)
        self.rs = rs
        self.rank = rs.rank
        self.L = rs.phase_order
        self.gram = rs.cartan
        self._inner = {}
        self._root_coords = {}
        self._mode_cache = {}
        self._braid_cache = {}
        self._eminus_cache = {}
        self._eplus_cache = {}
        self._creation_cache = {}

    # -- lattice helpers ------------------------------------------------------

    def inner(self, lam, mu) -> Fraction:
        key = (lam, mu)
        v = self._inner.get(key)
        if v is None:
            v = self._inner[key] = self.rs.inner(lam, mu)
        return v

    def root_coords(self, lam) -> tuple:
        v = self._root_coords.get(lam)
        if v is None:
            v = self._root_coords[lam] = self.rs.to_root_coords(lam)
        return v

    def key_cw(self, key) -> Fraction:
        cre, lat = key
        return self.inner(lat, lat) / 2 + creator_degree(cre)

    def max_cw(self, v: State) -> Fraction:
        return max((self.key_cw(k) for k in v.terms), default=Fraction(0))

    def min_cw(self, v: State) -> Fraction:
        return min((self.key_cw(k) for k in v.terms), default=Fraction(0))

    def conformal_weight(self, v: State) -> Fraction:
        """Conformal weight of a homogeneous state."""
        ws = {self.key_cw(k) for k in v.terms}
        if len(ws) > 1:
            raise ValueError("state is not homogeneous in conformal weight")
        return ws.pop() if ws else Fraction(0)

    def parity(self, v: State) -> int:
        classes = {self.rs.gamma_class(lat) for lat in v.lattice_weights()}
        if len(classes) > 1:
            raise ParityError("state is not homogeneous in P/Q")
        return classes.pop() if classes else 0

    def admissible(self, g: int, h: int, n) -> bool:
        """``n`` lies in the coset ``Delta(g, h)``."""
        chi = self.rs.representatives
        return (Fraction(n) + self.inner(chi[g], chi[h])).denominator == 1

    # -- basic states ---------------------------------------------------------

    def vacuum(self) -> State:
        return State.monomial(self.rs.zero)

    def exp_state(self, lam, coeff=1) -> State:
        return State.monomial(tuple(lam), (), coeff)

    def heis_state(self, h, n: int = 1, v: State | None = None) -> State:
        """``h t^-n`` applied (as a creation operator) to ``v`` (default vacuum)."""
        return self.heis_act(h, -n, self.vacuum() if v is None else v)

    def simple_creator(self, i: int, n: int = 1, lattice=None) -> State:
        """``alpha_i t^-n (x) e^lattice`` with a 1-based index."""
        return State.monomial(self.rs.zero if lattice is None else lattice, ((n, i - 1),))

    @property
    def conformal_vector(self) -> State:
        g = self.rs.cartan_inv
        out = State()
        for i in range(self.rank):
            for j in range(self.rank):
                if g[i][j]:
                    out = out + State.monomial(self.rs.zero, ((1, i), (1, j)), g[i][j] / 2)
        return out

    # -- Heisenberg action and translation -------------------------------------

    def heis_act(self, h, k: int, v: State) -> State:
        """``h t^k`` acting on ``v``; ``h`` is a weight in fundamental coordinates."""
        out = defaultdict(Fraction)
        if k < 0:
            a = self.root_coords(tuple(h))
            for (cre, lat), c in v:
                for j, aj in enumerate(a):
                    if aj:
                        key = (merge(cre, ((-k, j),)), lat)
                        out[key] += c * aj
        elif k == 0:
            for (cre, lat), c in v:
                out[(cre, lat)] += c * self.inner(tuple(h), lat)
        else:
            for (cre, lat), c in v:
                for (n, i), mult in Counter(cre).items():
                    if n == k and h[i]:
                        out[(remove_one(cre, (n, i)), lat)] += c * mult * k * h[i]
        return State(out)

    def translation(self, v: State) -> State:
        out = defaultdict(Fraction)
        for (cre, lat), c in v:
            for (n, i), mult in Counter(cre).items():
                key = (merge(remove_one(cre, (n, i)), ((n + 1, i),)), lat)
                out[key] += c * mult * n
            for j, aj in enumerate(self.root_coords(lat)):
                if aj:
                    out[(merge(cre, ((1, j),)), lat)] += c * aj
        return State(out)

    # -- vertex operators -----------------------------------------------------

    def _eminus(self, lam, e: int) -> dict:
        """Degree-``e`` part of ``exp(sum_m lam t^-m z^m / m)`` as {creators: coeff}."""
        key = (lam, e)
        hit = self._eminus_cache.get(key)
        if hit is not None:
            return hit
        a = self.root_coords(lam)
        parts = [(m, i) for m in range(1, e + 1) for i in range(self.rank) if a[i]]
        out = defaultdict(Fraction)

        def rec(idx, remaining, cre, coeff):
            if remaining == 0:
                out[tuple(sorted(cre))] += coeff
                return
            if idx == len(parts):
                return
            m, i = parts[idx]
            base = a[i] / m
            c = 0
            term = coeff
            while c * m <= remaining:
                rec(idx + 1, remaining - c * m, cre + [(m, i)] * c, term)
                c += 1
                term = term * base / c
        rec(0, e, [], Fraction(1))
        res = _nonzero(out)
        self._eminus_cache[key] = res
        return res

    def _eplus(self, lam, cre: tuple) -> list:
        """``E^+(lam, z)`` on a creator monomial: list of (creators, z-power, coeff)."""
        key = (lam, cre)
        hit = self._eplus_cache.get(key)
        if hit is not None:
            return hit
        options = []
        for (n, i), mult in sorted(Counter(cre).items()):
            opts = []
            for r in range(mult + 1 if lam[i] else 1):
                opts.append(((n, i), mult - r, -n * r, comb(mult, r) * (-lam[i]) ** r))
            options.append(opts)
        acc = defaultdict(Fraction)
        for choice in product(*options):
            kept = []
            zp = 0
            c = Fraction(1)
            for item, keep, dz, cc in choice:
                kept.extend([item] * keep)
                zp += dz
                c *= cc
            acc[(tuple(sorted(kept)), zp)] += c
        res = [(k[0], k[1], c) for k, c in acc.items() if c]
        self._eplus_cache[key] = res
        return res

    def _creation(self, lam, factors: tuple, d: int) -> dict:
        """Degree-``d`` part of ``prod_k d^(p_k) h_k^-(z) * E^-(lam, z)``."""
        key = (lam, factors, d)
        hit = self._creation_cache.get(key)
        if hit is not None:
            return hit
        out = defaultdict(Fraction)

        def rec(idx, remaining, cre, coeff):
            if idx == len(factors):
                for mono, c in self._eminus(lam, remaining).items():
                    out[merge(tuple(sorted(cre)), mono)] += coeff * c
                return
            n, i = factors[idx]
            p = n - 1
            for j in range(remaining + 1):
                rec(idx + 1, remaining - j, cre + [(j + p + 1, i)], coeff * comb(j + p, p))
        rec(0, d, [], Fraction(1))
        res = _nonzero(out)
        self._creation_cache[key] = res
        return res

    def _mode_mono(self, acre: tuple, lam: tuple, n: Fraction, vcre: tuple, mu: tuple) -> dict:
        key = (acre, lam, n.numerator, n.denominator, vcre, mu)
        hit = self._mode_cache.get(key)
        if hit is not None:
            return hit
        lm = self.inner(lam, mu)
        shift = -n - 1 - lm
        out_lat = tuple(x + y for x, y in zip(lam, mu))
        res = {}
        out_cw = (self.inner(lam, lam) + self.inner(mu, mu)) / 2 + creator_degree(acre) \
            + creator_degree(vcre) - n - 1
        if shift.denominator == 1 and out_cw >= self.inner(out_lat, out_lat) / 2:
            res = self._mode_core(acre, lam, int(shift), vcre, mu, out_lat)
        self._mode_cache[key] = res
        return res

    def _mode_core(self, acre, lam, shift, vcre, mu, out_lat):
        gram = self.gram
        eps = self.rs.epsilon(lam, mu)
        out = defaultdict(Fraction)
        k = len(acre)
        for mask in range(1 << k):
            cre_f = tuple(acre[t] for t in range(k) if mask >> t & 1)
            ann_f = [acre[t] for t in range(k) if not mask >> t & 1]
            terms = {(vcre, 0): Fraction(eps)}
            for nn, i in ann_f:
                p = nn - 1
                sign = -1 if p % 2 else 1
                new = defaultdict(Fraction)
                for (mono, zp), c in terms.items():
                    if mu[i]:
                        new[(mono, zp - p - 1)] += c * sign * mu[i]
                    for (kk, ii), mult in Counter(mono).items():
                        g = gram[i][ii]
                        if g:
                            new[(remove_one(mono, (kk, ii)), zp - kk - p - 1)] += \
                                c * sign * comb(kk + p, p) * kk * g * mult
                terms = _nonzero(new)
                if not terms:
                    break
            for (mono, zp), c in terms.items():
                for mono2, zp2, c2 in self._eplus(lam, mono):
                    d = shift - zp - zp2
                    if d < 0:
                        continue
                    cc = c * c2
                    for mono3, c3 in self._creation(lam, cre_f, d).items():
                        out[(merge(mono2, mono3), out_lat)] += cc * c3
        return _nonzero(out)

    def mode(self, A: State, n, v: State) -> State:
        """``A_(n) v`` for arbitrary states; off-parity pieces contribute zero."""
        n = Fraction(n)
        out = defaultdict(Fraction)
        for (acre, lam), ca in A:
            for (vcre, mu), cv in v:
                res = self._mode_mono(acre, lam, n, vcre, mu)
                if res:
                    c = ca * cv
                    for key, x in res.items():
                        out[key] += c * x
        return State(out)

    vertex_mode = mode

    def exp_mode(self, lam, n, v: State) -> State:
        return self.mode(self.exp_state(tuple(lam)), n, v)

    # -- affine Lie algebra -----------------------------------------------------

    def current(self, gen) -> State:
        """State realizing a Chevalley generator.

        ``gen`` is ``("e", root)``, ``("f", positive root)`` or ``("h", i)``
        with ``i`` 1-based.
        """
        kind, x = gen
        if kind == "h":
            return self.simple_creator(x, 1)
        root = tuple(x)
        if self.inner(root, root) != 2 or not self.rs.in_root_lattice(root):
            raise ValueError(f"{root} is not a root")
        if kind == "e":
            return self.exp_state(root)
        if kind == "f":
            return self.exp_state(tuple(-c for c in root))
        raise ValueError(f"unknown generator {gen!r}")

    def affine_act(self, gen, m: int, v: State) -> State:
        return self.mode(self.current(gen), m, v)

    def lie_generators(self) -> list:
        """Basis of the finite Lie algebra: ``("h", i)`` then ``("e", root)``."""
        return [("h", i) for i in range(1, self.rank + 1)] + [("e", r) for r in self.rs.roots]

    def lie_bracket(self, x, y) -> dict:
        """``[x, y]`` in the realized basis, from the lattice structure constants."""
        (kx, a), (ky, b) = x, y
        if kx == "h" and ky == "h":
            return {}
        if kx == "h":
            return {y: Fraction(b[a - 1])} if b[a - 1] else {}
        if ky == "h":
            return {x: Fraction(-a[b - 1])} if a[b - 1] else {}
        ab = self.inner(a, b)
        eps = self.rs.epsilon(a, b)
        if ab == -2:
            coords = self.root_coords(a)
            return {("h", i + 1): Fraction(eps * c) for i, c in enumerate(coords) if c}
        if ab == -1:
            return {("e", tuple(u + v for u, v in zip(a, b))): Fraction(eps)}
        return {}

    def lie_form(self, x, y) -> Fraction:
        """Invariant form normalized by ``(alpha, alpha) = 2``."""
        (kx, a), (ky, b) = x, y
        if kx == "h" and ky == "h":
            return Fraction(self.rs.cartan[a - 1][b - 1])
        if kx == "e" and ky == "e" and self.inner(a, b) == -2:
            return Fraction(self.rs.epsilon(a, b))
        return Fraction(0)

    def affine_sides(self, x, m: int, y, n: int, c: State):
        """``([x_(m), y_(n)] c, ([x, y])_(m+n) c + m delta_{m+n,0} (x, y) c)``."""
        X, Y = self.current(x), self.current(y)
        lhs = self.mode(X, m, self.mode(Y, n, c)) - self.mode(Y, n, self.mode(X, m, c))
        rhs = State()
        for z, coeff in self.lie_bracket(x, y).items():
            rhs = rhs + self.mode(self.current(z), m + n, c).scale(coeff)
        if m + n == 0 and m:
            rhs = rhs + c.scale(m * self.lie_form(x, y))
        return lhs, rhs

    def check_affine(self, max_mode: int = 3, cutoff=4, states=None) -> tuple:
        """Compare all current brackets with ``|m|, |n| <= max_mode``.

        Test states default to all monomials of conformal weight ``<= cutoff``;
        only brackets whose output and intermediate states stay at weight
        ``<= cutoff`` are evaluated.  Returns ``(ok, checked, failures)``.
        """
        cutoff = Fraction(cutoff)
        if states is None:
            states = [State.monomial(lat, cre) for cre, lat in self.basis_monomials(cutoff)]
        gens = self.lie_generators()
        currents = {g: self.current(g) for g in gens}
        checked, failures = 0, []
        for c in states:
            cc = self.max_cw(c)
            acts = {}

            def act(g, k, v=None, tag=None):
                if v is None:
                    if (g, k) not in acts:
                        acts[(g, k)] = self.mode(currents[g], k, c)
                    return acts[(g, k)]
                return self.mode(currents[g], k, v)

            for ix, x in enumerate(gens):
                for y in gens[ix:]:
                    br = self.lie_bracket(x, y)
                    form = self.lie_form(x, y)
                    for m in range(-max_mode, max_mode + 1):
                        if cc - m > cutoff:
                            continue
                        for n in range(-max_mode, max_mode + 1):
                            if cc - n > cutoff or cc - m - n > cutoff or cc - m - n < 0:
                                continue
                            lhs = act(x, m, act(y, n)) - act(y, n, act(x, m))
                            rhs = State()
                            for z, coeff in br.items():
                                rhs = rhs + act(z, m + n).scale(coeff)
                            if m + n == 0 and m and form:
                                rhs = rhs + c.scale(m * form)
                            checked += 1
                            if lhs != rhs:
                                failures.append((x, m, y, n, c))
        return not failures, checked, failures

    def conformal_op(self, v: State) -> State:
        """``omega_(1) v`` for the conformal vector ``omega``."""
        return self.mode(self.conformal_vector, 1, v)

    # -- braiding and axiom harnesses ------------------------------------------

    def braiding(self, lam, mu) -> CycScalar:
        """Weight-level locality phase ``eps(lam, mu) / eps(mu, lam) * exp(i pi (lam, mu))``."""
        key = (tuple(lam), tuple(mu))
        hit = self._braid_cache.get(key)
        if hit is None:
            rs = self.rs
            sign = rs.epsilon(lam, mu) * rs.epsilon(mu, lam)
            hit = rs.exp_pi_i(self.inner(*key)) * sign
            self._braid_cache[key] = hit
        return hit

    def _phase_times(self, n, lam, mu, v: State) -> State:
        ph = self.rs.exp_pi_i(n) * self.braiding(lam, mu)
        return v.scale(as_scalar(ph, self.L))

    def _mode_bound(self, x: State, y: State) -> Fraction:
        """Largest index ``p`` for which ``x_(p) y`` can be nonzero."""
        return self.max_cw(x) + self.max_cw(y) - 1

    def borcherds_sides(self, a: State, b: State, c: State, n, m, k):
        """Both sides of the Borcherds identity, evaluated exactly.

        The right-hand side uses :meth:`braiding` on each pair of lattice
        components of ``a`` and ``b``.
        """
        n, m, k = Fraction(n), Fraction(m), Fraction(k)
        pa, pb, pc = self.parity(a), self.parity(b), self.parity(c)
        if not (self.admissible(pa, pb, n) and self.admissible(pa, pc, m)
                and self.admissible(pb, pc, k)):
            raise ParityError("mode indices are not parity-admissible")
        lhs = State()
        j = 0
        while n + j <= self._mode_bound(a, b):
            cm = binom(m, j)
            if cm:
                lhs = lhs + self.mode(self.mode(a, n + j, b), m + k - j, c).scale(cm)
            j += 1
        rhs = State()
        j = 0
        bound_bc = self._mode_bound(b, c)
        while k + j <= bound_bc:
            cn = binom(n, j) * (-1) ** j
            if cn:
                rhs = rhs + self.mode(a, n + m - j, self.mode(b, k + j, c)).scale(cn)
            j += 1
        a_parts, b_parts = a.by_lattice(), b.by_lattice()
        bound_ac = self._mode_bound(a, c)
        j = 0
        while m + j <= bound_ac:
            cn = binom(n, j) * (-1) ** j
            if cn:
                for lam, a_l in a_parts.items():
                    inner = self.mode(a_l, m + j, c)
                    if inner.is_zero():
                        continue
                    for mu, b_m in b_parts.items():
                        t = self.mode(b_m, n + k - j, inner)
                        if t:
                            rhs = rhs - self._phase_times(n, lam, mu, t).scale(cn)
            j += 1
        return lhs, rhs

    def check_borcherds(self, a, b, c, n, m, k) -> bool:
        lhs, rhs = self.borcherds_sides(a, b, c, n, m, k)
        return lhs == rhs

    def commutator_formula(self, a: State, m: int, b: State, k, c: State):
        """``([a_(m), b_(k)] c, sum_j binom(m, j) (a_(j) b)_(m+k-j) c)`` for parity-0 ``a``."""
        if a and self.parity(a) != 0:
            raise ParityError("commutator formula needs a of parity 0")
        k = Fraction(k)
        lhs = self.mode(a, m, self.mode(b, k, c)) - self.mode(b, k, self.mode(a, m, c))
        rhs = State()
        j = 0
        while j <= self._mode_bound(a, b):
            cm = binom(m, j)
            if cm:
                rhs = rhs + self.mode(self.mode(a, j, b), m + k - j, c).scale(cm)
            j += 1
        return lhs, rhs

    def locality_order(self, A: State, B: State) -> Fraction:
        """Smallest admissible ``n`` with ``A_(n+j) B = 0`` for every ``j >= 0``."""
        if A.is_zero() or B.is_zero():
            raise ValueError("locality order of a zero state")
        top = self._mode_bound(A, B)
        shift = -self.inner(self.rs.representatives[self.parity(A)],
                            self.rs.representatives[self.parity(B)])
        p = top - ((top - shift) % 1)
        while self.mode(A, p, B).is_zero():
            p -= 1
            if p < top - self.max_cw(A) - self.max_cw(B) - 64:
                raise ArithmeticError("no nonzero product found")
        return p + 1

    def locality_sides(self, A: State, B: State, n, M, K, c: State):
        """Coefficient of ``z^(-M-1) w^(-K-1)`` of both sides of locality on ``c``."""
        n, M, K = Fraction(n), Fraction(M), Fraction(K)
        lhs = State()
        j = 0
        while K + j <= self._mode_bound(B, c):
            cn = binom(n, j) * (-1) ** j
            if cn:
                lhs = lhs + self.mode(A, n + M - j, self.mode(B, K + j, c)).scale(cn)
            j += 1
        rhs = State()
        a_parts, b_parts = A.by_lattice(), B.by_lattice()
        j = 0
        while M + j <= self._mode_bound(A, c):
            cn = binom(n, j) * (-1) ** j
            if cn:
                for lam, a_l in a_parts.items():
                    inner = self.mode(a_l, M + j, c)
                    if inner.is_zero():
                        continue
                    for mu, b_m in b_parts.items():
                        t = self.mode(b_m, n + K - j, inner)
                        if t:
                            rhs = rhs + self._phase_times(n, lam, mu, t).scale(cn)
            j += 1
        return lhs, rhs

    def check_locality(self, A: State, B: State, n=None, cutoff=4, states=None) -> bool:
        """Exact locality of ``Y(A, z)`` and ``Y(B, w)`` at order ``n``.

        The hypothesis ``A_(n+j) B = 0`` for ``j >= 0`` is checked first; then
        the coefficient identity is compared on every test state ``c`` (by
        default all monomials of conformal weight ``<= cutoff``) for every
        mode pair ``(M, K)`` such that the output and the one-mode states
        ``A_(M) c`` and ``B_(K) c`` all have conformal weight ``<= cutoff``.
        """
        pa, pb = self.parity(A), self.parity(B)
        if n is None:
            n = self.locality_order(A, B)
        n = Fraction(n)
        if not self.admissible(pa, pb, n):
            raise ParityError("locality order is not parity-admissible")
        j = 0
        while n + j <= self._mode_bound(A, B):
            if self.mode(A, n + j, B):
                return False
            j += 1
        cutoff = Fraction(cutoff)
        if states is None:
            states = [State.monomial(lat, cre) for cre, lat in self.basis_monomials(cutoff)]
        chi = self.rs.representatives
        ca, cb = self.max_cw(A), self.max_cw(B)
        a_parts, b_parts = A.by_lattice(), B.by_lattice()
        coeffs = {}
        # e^{i pi n} folded into each pair's phase; the product is usually rational
        braid = {(lam, mu): as_scalar(self.rs.exp_pi_i(n) * self.braiding(lam, mu), self.L)
                 for lam in a_parts for mu in b_parts}

        def coeff(j):
            if j not in coeffs:
                coeffs[j] = binom(n, j) * (-1) ** j
            return coeffs[j]

        for c in states:
            pc = self.parity(c)
            cc = self.max_cw(c)
            b_top, a_top = cb + cc - 1, ca + cc - 1
            # mode indices are tracked as integer offsets from the top of each coset
            m_start = -self.inner(chi[pa], chi[pc])
            m_start += (a_top - m_start) // 1
            k_start = -self.inner(chi[pb], chi[pc])
            total = ca + cb + cc - n - 2
            k_start += (total - m_start - k_start) // 1
            q_max = int((b_top - k_start) // 1)
            p_max = int((a_top - m_start) // 1)
            b_room = int((cutoff - (total - m_start - k_start)) // 1)
            left, right, one = {}, {}, {}

            def single(x, key, p):
                if (key, p) not in one:
                    one[(key, p)] = self.mode(x, p, c)
                return one[(key, p)]

            def ab(u, v):
                # A_(n + m_start - u) B_(k_start + v) c
                if (u, v) not in left:
                    inner = single(B, None, k_start + v)
                    left[(u, v)] = self.mode(A, n + m_start - u, inner) if inner else State()
                return left[(u, v)]

            def ba(v, u):
                # phased B_(n + k_start + v) A_(m_start - u) c, summed over lattice parts
                if (v, u) not in right:
                    t = defaultdict(Fraction)
                    for lam, a_l in a_parts.items():
                        inner = single(a_l, lam, m_start - u)
                        if inner.is_zero():
                            continue
                        for mu, b_m in b_parts.items():
                            ph = braid[(lam, mu)]
                            for key, x in self.mode(b_m, n + k_start + v, inner):
                                t[key] += ph * x
                    right[(v, u)] = State(t)
                return right[(v, u)]

            a_off = 0
            while m_start - a_off >= a_top - cutoff:
                b_off = 0
                while b_off <= b_room and k_start + a_off - b_off >= b_top - cutoff:
                    diff = defaultdict(Fraction)
                    j = 0
                    while a_off - b_off + j <= q_max:
                        cj = coeff(j)
                        if cj:
                            for key, x in ab(a_off + j, a_off - b_off + j):
                                diff[key] += cj * x
                        j += 1
                    j = 0
                    while j - a_off <= p_max:
                        cj = coeff(j)
                        if cj:
                            for key, x in ba(a_off - b_off - j, a_off - j):
                                diff[key] -= cj * x
                        j += 1
                    if any(as_scalar(x, self.L) if isinstance(x, CycScalar) else x
                           for x in diff.values()):
                        return False
                    b_off += 1
                a_off += 1
        return True

    def basis_monomials(self, max_cw, cls: int | None = None) -> list:
        """All monomial keys ``(creators, lattice)`` of conformal weight ``<= max_cw``."""
        max_cw = Fraction(max_cw)
        out = []
        for lat in self.rs.weights_in_ball(2 * max_cw, cls):
            room = max_cw - self.inner(lat, lat) / 2
            for d in range(int(room) + 1):
                for cre in _colored_partitions(d, self.rank):
                    out.append((cre, lat))
        out.sort(key=lambda k: (self.key_cw(k), k[1], k[0]))
        return out


def _colored_partitions(d: int, colors: int, max_part=None) -> list:
    """Sorted creator tuples ``((n, i), ...)`` with total degree ``d``."""
    if d == 0:
        return [()]
    parts = [(n, i) for n in range(1, d + 1) for i in range(colors)]
    out = []

    def rec(remaining, start, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for idx in range(start, len(parts)):
            n, i = parts[idx]
            if n > remaining:
                break
            rec(remaining - n, idx, acc + [(n, i)])
    rec(d, 0, [])
    return out
