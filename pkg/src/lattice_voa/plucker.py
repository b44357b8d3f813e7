"""Type-A column combinatorics and semi-infinite Plücker relations."""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

from .cyclotomic import as_scalar
from .fock import State
from .filtration import FiltrationEngine, engine
from .linalg import Echelon, kernel
from .root_data import RootSystem
from .weyl_characters import (QCharacter, ch_two_fund_lr, content_to_weight,
                              dual_model, exterior_model)


class Column(tuple):
    """Strictly increasing tuple of entries from ``1..n``."""

    def __new__(cls, entries, n: int | None = None):
        entries = tuple(int(x) for x in entries)
        if any(a >= b for a, b in zip(entries, entries[1:])):
            raise ValueError(f"column {entries} is not strictly increasing")
        if entries and (entries[0] < 1 or (n is not None and entries[-1] > n)):
            raise ValueError(f"column {entries} has entries outside 1..{n}")
        return super().__new__(cls, entries)

    def label(self) -> str:
        return "X[" + ",".join(map(str, self)) + "]"


def is_admissible(I, J) -> bool:
    """Ordering condition under which the P-set is defined."""
    if len(I) != len(J):
        return len(I) > len(J)
    for a in range(len(I) - 1, -1, -1):
        if I[a] != J[a]:
            return I[a] < J[a]
    return True


def p_set(I, J, strict: bool = True) -> tuple:
    """The set ``P(I, J)`` built from the bottom of ``I``.

    With ``strict`` the ordering precondition is enforced; otherwise the
    rules are applied as written to any pair with ``len(I) >= len(J)``.
    """
    I, J = Column(I), Column(J)
    if len(I) < len(J) or not I:
        raise ValueError("need len(I) >= len(J) >= 0 and I non-empty")
    if strict and not is_admissible(I, J):
        raise ValueError(f"pair {I}, {J} violates the ordering precondition")
    out = []
    col, a = "i", len(I)
    while a >= 1:
        if col == "i":
            out.append(I[a - 1])
            if a <= len(J) and I[a - 1] > J[a - 1]:
                col = "j"
            else:
                a -= 1
        else:
            out.append(J[a - 1])
            if I[a - 1] < J[a - 1]:
                col = "i"
            else:
                a -= 1
    return tuple(reversed(out))


def k_statistic(I, J, convention: str = "direct") -> int:
    """``k(I, J) = |P(I, J)| - len(I)``.

    ``convention`` handles equal-length pairs failing the ordering condition:
    ``"direct"`` applies the rules as written, ``"swap"`` uses ``(J, I)``,
    ``"error"`` raises.
    """
    if convention not in ("direct", "swap", "error"):
        raise ValueError(f"unknown convention {convention!r}")
    if not is_admissible(I, J):
        if convention == "error":
            raise ValueError(f"pair {tuple(I)}, {tuple(J)} violates the ordering precondition")
        if convention == "swap" and len(I) == len(J):
            I, J = J, I
    return len(p_set(I, J, strict=False)) - len(I)


def is_semistandard(I, J) -> bool:
    """Two-column tableau with left column ``I`` and right column ``J``."""
    return len(I) >= len(J) and all(I[a] <= J[a] for a in range(len(J)))


def tableau_with_k(r: int, i: int, j: int, l: int) -> tuple:
    """Two-column tableau of shape ``omega_i + omega_j`` with ``k = l`` and weight
    ``omega_{i+l} + omega_{j-l}``.

    Fill column C from row ``i`` up to row ``j`` with ``i+l .. j+l``, then
    alternate horizontal and vertical moves with decreasing values until
    ``l`` horizontal moves are made; rows ``1..j-l`` get ``c_a = d_a = a``.
    """
    if i < j or not (0 <= l <= min(j, r + 1 - i)):
        raise ValueError(f"need i >= j and 0 <= l <= min(j, r+1-i), got {(i, j, l)}")
    C = [0] * (i + 1)
    D = [0] * (j + 1)
    for row in range(j, i + 1):
        C[row] = row + l
    value, row, col, moves = j + l - 1, j, C, 0
    while moves < l:
        col = D if col is C else C
        col[row] = value
        value -= 1
        moves += 1
        if moves == l:
            break
        row -= 1
        col[row] = value
        value -= 1
    for a in range(1, j - l + 1):
        C[a] = D[a] = a
    return Column(C[1:]), Column(D[1:])


def tableau_weight(cols, n: int) -> tuple:
    content = Counter()
    for col in cols:
        content.update(col)
    return content_to_weight([content[a] for a in range(1, n + 1)])


def _require_a(rs: RootSystem):
    if rs.kind != "A":
        raise ValueError("type A only")


def ch_w_two_fund(rs: RootSystem, i: int, j: int, via: str = "tableaux") -> QCharacter:
    """Graded character of ``W_{omega_i + omega_j}`` for ``i >= j``."""
    _require_a(rs)
    r = rs.rank
    if not (1 <= j <= i <= r):
        raise ValueError(f"need 1 <= j <= i <= {r}")
    if via == "lr":
        return ch_two_fund_lr(rs, i, j)
    if via != "tableaux":
        raise ValueError("via must be 'tableaux' or 'lr'")
    n = r + 1
    out = defaultdict(Counter)
    for I in combinations(range(1, n + 1), i):
        for J in combinations(range(1, n + 1), j):
            out[k_statistic(I, J)][tableau_weight((I, J), n)] += 1
    return QCharacter(out)


def tensor_layer(rs: RootSystem, i: int, j: int, l: int) -> QCharacter:
    """Weights of all pairs ``(I, J)`` with ``k(I, J) = l``."""
    n = rs.rank + 1
    wts = Counter()
    for I in combinations(range(1, n + 1), i):
        for J in combinations(range(1, n + 1), j):
            if k_statistic(I, J) == l:
                wts[tableau_weight((I, J), n)] += 1
    return QCharacter({0: wts})


# -- Plücker variables inside the lattice VOA -------------------------------------


class PluckerRealization:
    """Plücker coordinates ``X_I`` as lift states of the lattice VOA.

    ``X_I`` with ``|I| = k`` is the dual basis vector of ``V_{omega_k}``; it
    lives in ``V*_{omega_k} = V_{omega_{n-k}}`` and is realized as
    ``+-e^{-eps_I}`` in the lift of ``omega_{n-k}``.  The top coordinate
    ``X_{n-k+1..n}`` is ``e^{omega_{n-k}}`` and all other signs follow from
    matching the lowering operators with the dual exterior-power model.
    """

    def __init__(self, rs: RootSystem | str):
        self.eng: FiltrationEngine = engine(rs)
        self.rs = self.eng.rs
        _require_a(self.rs)
        self.n = self.rs.rank + 1
        self._states = {}
        self._models = {}

    def model(self, k: int):
        if k not in self._models:
            self._models[k] = dual_model(exterior_model(self.rs, k))
        return self._models[k]

    def states(self, k: int) -> dict:
        """``{Column I: State}`` for all ``|I| = k``."""
        if k in self._states:
            return self._states[k]
        n = self.n
        model = self.model(k)
        top = Column(range(n - k + 1, n + 1))
        out = {top: self.eng.vac.exp_state(self.rs.omega(n - k))}
        frontier = [top]
        while frontier:
            nxt = []
            for I in frontier:
                col = model.index[tuple(I)]
                for g in range(1, n):
                    img = model.act(("f", g), 0, {col: Fraction(1)})
                    for row, c in img.items():
                        J = Column(model.basis[row])
                        if J not in out:
                            out[J] = self.eng.lower_operator(g, out[I]).scale(1 / c)
                            nxt.append(J)
            frontier = nxt
        self._states[k] = out
        return out

    def state(self, I) -> State:
        I = Column(I)
        return self.states(len(I))[I]

    def twist(self, k: int) -> dict:
        """``{simple index g: sign}`` so that ``x (A (x) B) = xA (x) B + sign A (x) xB``.

        The sign is the braiding phase between the root and the weight of the
        left factor; it depends only on the class of that weight.
        """
        lam = self.rs.omega(self.n - k)
        out = {}
        for g in range(1, self.n):
            ph = as_scalar(self.eng.vac.braiding(self.rs.alpha(g), lam), self.eng.vac.L)
            out[g] = int(ph)
        return out


def _tensor_act(model_a, model_b, twist, gen, vec: dict) -> dict:
    """Twisted coproduct action of a Chevalley generator on ``{(I, J): c}``."""
    kind, g = gen
    sign = 1 if kind == "h" else twist[g]
    out = defaultdict(Fraction)
    for (I, J), c in vec.items():
        for row, x in model_a.act(gen, 0, {model_a.index[I]: Fraction(1)}).items():
            out[(model_a.basis[row], J)] += c * x
        for row, x in model_b.act(gen, 0, {model_b.index[J]: Fraction(1)}).items():
            out[(I, model_b.basis[row])] += c * x * sign
    return {k: v for k, v in out.items() if v}


def quadratic_kernel(rs: RootSystem | str, i: int, j: int, l: int) -> list:
    """Basis of the sum of the components ``V*_{omega_{i+l'} + omega_{j-l'}}``, ``l' >= l``,
    inside ``V*_{omega_i} (x) V*_{omega_j}``, as dicts ``{(I, J): coeff}``.

    Highest weight vectors are the common kernel of the raising operators in
    the required weight space; the components are generated from them by
    the lowering operators.
    """
    real = PluckerRealization(rs)
    rs = real.rs
    r = rs.rank
    if not (1 <= j <= i <= r):
        raise ValueError(f"need 1 <= j <= i <= {r}")
    top = min(j, r + 1 - i)
    if not (1 <= l <= top):
        raise ValueError(f"need 1 <= l <= {top}")
    ma, mb = real.model(i), real.model(j)
    tw = real.twist(i)
    span = Echelon()
    for lp in range(l, top + 1):
        hw = [0] * r
        for k in (i + lp, j - lp):
            if 1 <= k <= r:
                hw[k - 1] += 1
        target = rs.dual_weight(tuple(hw))
        keys = [(I, J) for I in ma.basis for J in mb.basis
                if tuple(x + y for x, y in zip(ma.weights[ma.index[I]], mb.weights[mb.index[J]])) == target]
        cols = []
        for key in keys:
            img = {}
            for g in range(1, r + 1):
                for k2, v in _tensor_act(ma, mb, tw, ("e", g), {key: Fraction(1)}).items():
                    img[(g, k2)] = v
            cols.append(img)
        for kv in kernel(cols):
            vec = {keys[idx]: c for idx, c in kv.items()}
            queue = [vec]
            while queue:
                v = queue.pop()
                if span.add(v):
                    for g in range(1, r + 1):
                        w = _tensor_act(ma, mb, tw, ("f", g), v)
                        if w:
                            queue.append(w)
    return [{(Column(I), Column(J)): c for (I, J), c in v.items()} for v in span.vectors()]


@dataclass
class RelationSeries:
    """Coefficients of ``sum c (d^{s-1} X_I(z)) X_J(z)`` in the free commutative ring.

    ``coefficients[n]`` is the ``z^n`` coefficient, of ring degree ``n + s - 1``;
    it maps a monomial ``((label, k), (label, k))`` to its coefficient, where
    ``(label, k)`` stands for ``X_label t^-k``.
    """

    i: int
    j: int
    s: int
    coefficients: dict

    def is_trivial(self) -> bool:
        return not any(self.coefficients.values())

    def to_json(self) -> dict:
        coeffs = []
        for n in sorted(self.coefficients):
            terms = [{"monomial": [[a, ka], [b, kb]], "coeff": str(c)}
                     for ((a, ka), (b, kb)), c in sorted(self.coefficients[n].items())]
            coeffs.append({"q": n, "terms": terms})
        return {"i": self.i, "j": self.j, "s": self.s, "coefficients": coeffs}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _free_key(x, y, i: int, j: int):
    """Key of the commutative monomial ``x y``; equal-size factors are sorted."""
    return tuple(sorted((x, y))) if i == j else (x, y)


def _monomial_key(real: PluckerRealization, I, a, J, b):
    """Free-ring key of ``X_I t^-a X_J t^-b`` and the sign turning the raw product
    ``M(X_I, X_J)`` into the product map, which uses a canonical factor order."""
    A, B = real.state(I), real.state(J)
    eng = real.eng
    ia, ib = eng.fundamental_index(A), eng.fundamental_index(B)
    (la,), (lb,) = A.lattice_weights(), B.lattice_weights()
    key = _free_key((I.label(), a), (J.label(), b), len(I), len(J))
    if (ia, la, a) <= (ib, lb, b):
        return key, 1
    return key, eng.swap_sign(la, lb, ia, ib)


def relation_series(rs: RootSystem | str, kernel_element: dict, s: int, cutoff: int = 2) -> RelationSeries:
    """Free-ring coefficients of ``sum c_{IJ} (d^{s-1} X_I(z)) X_J(z)`` up to ``z^cutoff``.

    Each raw product ``X_I t^-a . X_J t^-b`` is rewritten in the canonical
    factor order of the product map, which may cost a sign.
    """
    real = PluckerRealization(rs)
    if s < 1:
        raise ValueError("s must be positive")
    sizes = {(len(I), len(J)) for I, J in kernel_element}
    if len(sizes) != 1:
        raise ValueError("kernel element must be homogeneous")
    i, j = sizes.pop()
    top = min(j, real.rs.rank + 1 - i)
    if s > top:
        raise ValueError(f"s must be at most {top}")
    coeffs = {}
    for n in range(cutoff + 1):
        acc = defaultdict(Fraction)
        for (I, J), c in kernel_element.items():
            for a in range(s - 1, n + s):
                b = n + s - 1 - a
                fall = Fraction(factorial(a), factorial(a - s + 1))
                key, sign = _monomial_key(real, Column(I), a, Column(J), b)
                acc[key] += c * fall * sign
        coeffs[n] = {k: v for k, v in acc.items() if v}
    return RelationSeries(i, j, s, coeffs)


def parse_label(label: str) -> Column:
    return Column(int(x) for x in label[2:-1].split(","))


def free_quadratic_basis(n: int, i: int, j: int, degree: int) -> list:
    """Monomials ``X_I t^-a X_J t^-b`` with ``|I| = i``, ``|J| = j``, ``a + b = degree``."""
    out = set()
    for I in combinations(range(1, n + 1), i):
        for J in combinations(range(1, n + 1), j):
            for a in range(degree + 1):
                x, y = (Column(I).label(), a), (Column(J).label(), degree - a)
                out.add(_free_key(x, y, i, j))
    return sorted(out)


def phi_of_monomial(real: PluckerRealization, mono) -> State:
    (la, a), (lb, b) = mono
    return real.eng.phi_rep([(real.state(parse_label(la)), a), (real.state(parse_label(lb)), b)])


def quadratic_ideal_report(rs: RootSystem | str, i: int, j: int, max_degree: int) -> list:
    """Compare generated relations with the kernel of the product map, degree by degree.

    Returns dicts with the free dimension, the rank of the image of the
    product map, the rank of the relation span, and whether every relation
    maps to zero.
    """
    real = PluckerRealization(rs)
    eng = real.eng
    r = real.rs.rank
    top = min(j, r + 1 - i)
    series = []
    # relations with derivative order s come from the components with l >= s
    for s in range(1, top + 1):
        for kv in quadratic_kernel(real.rs, i, j, s):
            series.append(relation_series(real.rs, kv, s, max_degree))
    lam = tuple(a + b for a, b in zip(real.rs.omega(real.n - i), real.rs.omega(real.n - j)))
    report = []
    for n in range(max_degree + 1):
        monos = free_quadratic_basis(real.n, i, j, n)
        images = {m: phi_of_monomial(real, m) for m in monos}
        cw = max((eng.vac.max_cw(v) for v in images.values() if v), default=Fraction(0))
        low = eng.g_span(lam, cw).lower
        reduced = {m: low.reduce(v) for m, v in images.items()}
        img_rank = Echelon([_flatten(v) for v in reduced.values()]).rank
        rel = Echelon()
        all_vanish = True
        for ser in series:
            # the z^k coefficient of a series with derivative order s has ring degree k + s - 1
            vec = ser.coefficients.get(n - ser.s + 1, {})
            if not vec:
                continue
            rel.add({monos.index(m): c for m, c in vec.items()})
            total = State()
            for m, c in vec.items():
                total = total + reduced[m].scale(c)
            if not total.is_zero():
                all_vanish = False
        report.append({"degree": n, "free_dim": len(monos), "image_rank": img_rank,
                       "relation_rank": rel.rank, "relations_vanish": all_vanish})
    return report


def _flatten(v: State) -> dict:
    return {k: c for k, c in v.terms.items()}
