"""Graded characters of local and global Weyl modules and small explicit module models."""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .linalg import Echelon
from .root_data import RootDataError, RootSystem


class CharacterUnavailable(ValueError):
    """No implemented formula gives this character."""


class QCharacter:
    """Finite q-graded character ``sum_k q^k sum_mu mult(k, mu) e^mu``.

    Parameters
    ----------
    terms : dict
        Map from integer q-degree to a map from weight tuples to multiplicities.
    truncation : int or None
        Largest q-degree that is known exactly.  ``None`` means the character
        is a polynomial in q.
    """

    __slots__ = ("terms", "truncation")

    def __init__(self, terms=None, truncation=None):
        self.terms = {}
        self.truncation = truncation
        for k, wts in (terms or {}).items():
            if truncation is not None and k > truncation:
                continue
            clean = {tuple(w): m for w, m in wts.items() if m}
            if clean:
                self.terms[k] = clean

    @classmethod
    def from_weights(cls, weights, degree: int = 0) -> "QCharacter":
        return cls({degree: Counter(tuple(w) for w in weights)})

    @classmethod
    def one(cls, rank: int) -> "QCharacter":
        return cls({0: {(0,) * rank: 1}})

    def _trunc(self, other):
        ts = [t for t in (self.truncation, getattr(other, "truncation", None)) if t is not None]
        return min(ts) if ts else None

    def __add__(self, other: "QCharacter") -> "QCharacter":
        out = defaultdict(Counter)
        for src in (self, other):
            for k, wts in src.terms.items():
                out[k].update(wts)
        return QCharacter(out, self._trunc(other))

    def __mul__(self, other: "QCharacter") -> "QCharacter":
        trunc = self._trunc(other)
        out = defaultdict(Counter)
        for k1, w1 in self.terms.items():
            for k2, w2 in other.terms.items():
                if trunc is not None and k1 + k2 > trunc:
                    continue
                slot = out[k1 + k2]
                for a, m in w1.items():
                    for b, n in w2.items():
                        slot[tuple(x + y for x, y in zip(a, b))] += m * n
        return QCharacter(out, trunc)

    def shift(self, k: int) -> "QCharacter":
        t = None if self.truncation is None else self.truncation + k
        return QCharacter({d + k: w for d, w in self.terms.items()}, t)

    def truncate(self, max_degree: int) -> "QCharacter":
        t = max_degree if self.truncation is None else min(max_degree, self.truncation)
        return QCharacter(self.terms, t)

    def scalar_series(self, coeffs) -> "QCharacter":
        """Multiply by the weight-0 power series ``sum_k coeffs[k] q^k``."""
        trunc = len(coeffs) - 1 if self.truncation is None else min(self.truncation, len(coeffs) - 1)
        out = defaultdict(Counter)
        for k, wts in self.terms.items():
            for d, c in enumerate(coeffs):
                if c and k + d <= trunc:
                    for w, m in wts.items():
                        out[k + d][w] += m * c
        return QCharacter(out, trunc)

    def degree(self, k: int) -> dict:
        return dict(self.terms.get(k, {}))

    def graded_dims(self, max_degree: int | None = None) -> list:
        top = max_degree
        if top is None:
            top = self.truncation if self.truncation is not None else max(self.terms, default=0)
        return [sum(self.terms.get(k, {}).values()) for k in range(top + 1)]

    def specialize_q1(self) -> dict:
        out = Counter()
        for wts in self.terms.values():
            out.update(wts)
        return {w: m for w, m in out.items() if m}

    def dual(self) -> "QCharacter":
        """Weights negated; q-degrees kept (graded dual up to ``q -> q^-1``)."""
        return QCharacter({k: {tuple(-x for x in w): m for w, m in wts.items()}
                           for k, wts in self.terms.items()}, self.truncation)

    def __eq__(self, other):
        if not isinstance(other, QCharacter):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"QCharacter(dims={self.graded_dims()}, truncation={self.truncation})"

    def to_json(self) -> list:
        out = []
        for k in sorted(self.terms):
            out.append({"q_degree": k, "weights": [
                {"coords": list(w), "mult": m} for w, m in sorted(self.terms[k].items())]})
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- finite-dimensional characters ------------------------------------------------


def _require_type_a(rs: RootSystem):
    if rs.kind != "A":
        raise CharacterUnavailable(f"only type A is supported here, got {rs.name}")


def partition_of(rs: RootSystem, lam) -> tuple:
    """Partition with at most ``r`` parts attached to a dominant type-A weight."""
    _require_type_a(rs)
    if not rs.is_dominant(lam):
        raise RootDataError(f"{lam} is not dominant")
    return tuple(sum(lam[k:]) for k in range(rs.rank))


def content_to_weight(content) -> tuple:
    """Exponent vector of ``x_1 .. x_n`` to fundamental coordinates."""
    return tuple(content[k] - content[k + 1] for k in range(len(content) - 1))


def ssyt_contents(shape: tuple, n: int) -> Counter:
    """Contents of all semistandard tableaux of ``shape`` with entries ``1..n``.

    Peels off the horizontal strip holding the largest entry.
    """
    shape = tuple(p for p in shape if p)
    if n == 0:
        return Counter({(): 1}) if not shape else Counter()
    if len(shape) > n:
        return Counter()
    out = Counter()
    ranges = []
    for k, p in enumerate(shape):
        nxt = shape[k + 1] if k + 1 < len(shape) else 0
        ranges.append(range(nxt, p + 1))

    def rec(k, inner):
        if k == len(shape):
            strip = sum(shape) - sum(inner)
            for c, m in ssyt_contents(tuple(inner), n - 1).items():
                out[c + (strip,)] += m
            return
        for v in ranges[k]:
            rec(k + 1, inner + [v])
    rec(0, [])
    return out


def ch_irreducible(rs: RootSystem, lam) -> QCharacter:
    """Character of the irreducible module ``V_lam`` (type A), in degree 0."""
    shape = partition_of(rs, lam)
    wts = Counter()
    for content, m in ssyt_contents(shape, rs.rank + 1).items():
        wts[content_to_weight(content)] += m
    return QCharacter({0: wts})


def fundamental_dim(rs: RootSystem, i: int) -> int:
    """Dimension of the fundamental local Weyl module ``W_{omega_i}``."""
    r = rs.rank
    if rs.kind == "A":
        return comb(r + 1, i)
    if rs.kind == "D":
        if i >= r - 1:
            return 2 ** (r - 1)
        return sum(comb(2 * r, i - 2 * k) for k in range(i // 2 + 1))
    raise CharacterUnavailable(f"no fundamental dimension table for {rs.name}")


def local_weyl_dim(rs: RootSystem, lam) -> int:
    lam = tuple(lam)
    if not rs.is_dominant(lam):
        raise RootDataError(f"{lam} is not dominant")
    out = 1
    for i, a in enumerate(lam):
        if a:
            out *= fundamental_dim(rs, i + 1) ** a
    return out


def lr_two_fundamentals(rs: RootSystem, i: int, j: int) -> list:
    """Highest weights of ``V_{omega_i} (x) V_{omega_j}`` for ``i >= j`` (type A)."""
    _require_type_a(rs)
    r = rs.rank
    if not (1 <= j <= i <= r):
        raise ValueError(f"need 1 <= j <= i <= {r}, got i={i}, j={j}")
    out = []
    for l in range(min(j, r + 1 - i) + 1):
        w = [0] * r
        for k in (j - l, i + l):
            if 1 <= k <= r:
                w[k - 1] += 1
        out.append(tuple(w))
    return out


def q_binomial(n: int, k: int) -> list:
    """Coefficients of the Gaussian binomial ``[n choose k]_q``."""
    if k < 0 or k > n:
        return [0]
    poly = [1]
    for t in range(k):
        # multiply by (1 - q^(n-t)) / (1 - q^(t+1))
        num = poly + [0] * (n - t)
        for d in range(len(poly)):
            num[d + n - t] -= poly[d]
        den = [1] + [0] * t + [-1]
        poly = _poly_div(num, den)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out)):
        c = num[k] // den[0]
        out[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    assert not any(num), "inexact polynomial division"
    return out


def ch_local_weyl(rs: RootSystem, lam) -> QCharacter:
    """Graded character of the local Weyl module ``W_lam`` where a formula is known.

    Covers ``lam = 0``, fundamental weights and sums of two fundamental weights
    in type A, and every multiple of the fundamental weight of A1.
    """
    lam = tuple(lam)
    if not rs.is_dominant(lam):
        raise RootDataError(f"{lam} is not dominant")
    if not any(lam):
        return QCharacter.one(rs.rank)
    _require_type_a(rs)
    if rs.rank == 1:
        n = lam[0]
        out = defaultdict(Counter)
        for k in range(n + 1):
            for d, c in enumerate(q_binomial(n, k)):
                if c:
                    out[d][(n - 2 * k,)] += c
        return QCharacter(out)
    idx = [k + 1 for k, a in enumerate(lam) for _ in range(a)]
    if len(idx) == 1:
        return ch_irreducible(rs, lam)
    if len(idx) == 2:
        j, i = idx
        return ch_two_fund_lr(rs, i, j)
    raise CharacterUnavailable(f"no local Weyl character formula for {lam} in {rs.name}")


def ch_two_fund_lr(rs: RootSystem, i: int, j: int) -> QCharacter:
    """``sum_l q^l ch V_{omega_{j-l} + omega_{i+l}}``."""
    out = QCharacter()
    for l, w in enumerate(lr_two_fundamentals(rs, i, j)):
        out = out + ch_irreducible(rs, w).shift(l)
    return out


def inverse_pochhammer(n: int, max_degree: int) -> list:
    """Coefficients of ``1 / ((1-q)(1-q^2)...(1-q^n))`` up to ``q^max_degree``."""
    coeffs = [1] + [0] * max_degree
    for part in range(1, n + 1):
        for d in range(part, max_degree + 1):
            coeffs[d] += coeffs[d - part]
    return coeffs


def ch_global(rs: RootSystem, lam, cutoff: int) -> QCharacter:
    """Character of the global Weyl module, truncated at q-degree ``cutoff``."""
    lam = tuple(lam)
    ch = ch_local_weyl(rs, lam).truncate(cutoff)
    for a in lam:
        if a:
            ch = ch.scalar_series(inverse_pochhammer(a, cutoff))
    return ch


def ch_global_dual(rs: RootSystem, lam, cutoff: int) -> QCharacter:
    """Character of the graded dual of the global Weyl module of ``lam*``.

    Weights are those of the dual; the q-degree counts the grading depth.
    """
    return ch_global(rs, rs.dual_weight(lam), cutoff).dual()


# -- explicit module models --------------------------------------------------------


@dataclass
class GModuleModel:
    """Finite-dimensional module with exact sparse action matrices.

    ``action[(gen, m)]`` is the operator of ``gen t^m`` as a dict
    ``column -> {row: coeff}``; ``gen`` is ``("e", k)``, ``("f", k)`` or
    ``("h", k)`` with ``k`` a 1-based simple index.  Missing entries act as 0.
    """

    rank: int
    basis: list
    weights: list
    action: dict = field(default_factory=dict)
    highest_weight: tuple | None = None
    degrees: list | None = None

    def __post_init__(self):
        self.index = {b: k for k, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def generators(self):
        return sorted({g for g, _ in self.action})

    def act(self, gen, m: int, vec: dict) -> dict:
        mat = self.action.get((gen, m), {})
        out = defaultdict(Fraction)
        for col, c in vec.items():
            for row, x in mat.get(col, {}).items():
                out[row] += c * x
        return {k: v for k, v in out.items() if v}

    def character(self) -> QCharacter:
        out = defaultdict(Counter)
        degs = self.degrees or [0] * self.dim
        for w, d in zip(self.weights, degs):
            out[d][tuple(w)] += 1
        return QCharacter(out)


def exterior_model(rs: RootSystem, i: int) -> GModuleModel:
    """``V_{omega_i}`` realized on ``i``-subsets of ``{1..r+1}``.

    ``f_k`` replaces ``k`` by ``k+1`` and ``e_k`` does the reverse; positions
    in the sorted subset do not move, so no signs appear.
    """
    _require_type_a(rs)
    r = rs.rank
    if not (1 <= i <= r):
        raise ValueError(f"need 1 <= i <= {r}")
    basis = [tuple(I) for I in combinations(range(1, r + 2), i)]
    idx = {b: n for n, b in enumerate(basis)}
    weights = []
    for I in basis:
        content = [1 if a in I else 0 for a in range(1, r + 2)]
        weights.append(content_to_weight(content))
    action = {}
    for k in range(1, r + 1):
        e, f, h = {}, {}, {}
        for n, I in enumerate(basis):
            if k in I and k + 1 not in I:
                J = tuple(sorted((set(I) - {k}) | {k + 1}))
                f[n] = {idx[J]: Fraction(1)}
                e[idx[J]] = {n: Fraction(1)}
            if weights[n][k - 1]:
                h[n] = {n: Fraction(weights[n][k - 1])}
        action[(("e", k), 0)] = e
        action[(("f", k), 0)] = f
        action[(("h", k), 0)] = h
    return GModuleModel(r, basis, weights, action, highest_weight=rs.omega(i))


def dual_model(model: GModuleModel) -> GModuleModel:
    """Contragredient module: every operator becomes minus its transpose."""
    action = {}
    for key, mat in model.action.items():
        t = defaultdict(dict)
        for col, rows in mat.items():
            for row, x in rows.items():
                t[row][col] = -x
        action[key] = dict(t)
    weights = [tuple(-x for x in w) for w in model.weights]
    return GModuleModel(model.rank, list(model.basis), weights, action, None,
                        None if model.degrees is None else [-d for d in model.degrees])


def _check_nilpotent(U: GModuleModel):
    positive = [mat for (g, m), mat in U.action.items() if m > 0 and mat]
    if not positive:
        return
    span = Echelon()
    for k in range(U.dim):
        span.add({k: Fraction(1)})
    for _ in range(U.dim + 1):
        image = Echelon()
        for v in span.vectors():
            for mat in positive:
                w = defaultdict(Fraction)
                for col, c in v.items():
                    for row, x in mat.get(col, {}).items():
                        w[row] += c * x
                image.add({k: x for k, x in w.items() if x})
        if image.rank == 0:
            return
        span = image
    raise ValueError("t-action on U is not nilpotent")


def globalize(U: GModuleModel, direction: str, max_degree: int) -> GModuleModel:
    """``U[t]`` or ``U[t^-1]`` truncated at ``|t-degree| <= max_degree``.

    ``x t^m`` acts on ``u (x) t^k`` by ``sum_j binom(m, j) (x t^j u) (x) t^(m+k-j)``.
    For ``t^-1`` the space is the quotient by ``U (x) t C[t]``, so output
    terms with a positive power are dropped.  ``U`` must carry operators
    ``(gen, m)``; pieces with ``m > 0`` that are absent act as zero, and the
    t-action must be nilpotent.
    """
    if direction not in ("t", "t^-1"):
        raise ValueError("direction must be 't' or 't^-1'")
    ms = sorted({m for _, m in U.action})
    if ms and ms[0] < 0:
        raise ValueError("U must be a module for the positive current algebra")
    gens = sorted({g for g, _ in U.action})
    _check_nilpotent(U)
    sign = 1 if direction == "t" else -1
    powers = [sign * k for k in range(max_degree + 1)]
    basis = [(b, p) for p in powers for b in U.basis]
    weights = [U.weights[U.index[b]] for b, _ in basis]
    idx = {b: n for n, b in enumerate(basis)}
    action = {}
    for g in gens:
        for m in range(max_degree + 1):
            mat = defaultdict(dict)
            for n, (b, p) in enumerate(basis):
                for j in range(m + 1):
                    piece = U.action.get((g, j))
                    if not piece:
                        continue
                    q = m + p - j
                    if sign == -1 and q > 0:
                        continue
                    for row, x in piece.get(U.index[b], {}).items():
                        key = (U.basis[row], q)
                        if key in idx:
                            mat[n][idx[key]] = mat[n].get(idx[key], 0) + comb(m, j) * x
            action[(g, m)] = {c: {r_: v for r_, v in rows.items() if v} for c, rows in mat.items()}
    return GModuleModel(U.rank, basis, weights, action, U.highest_weight,
                        [abs(p) for _, p in basis])


def pairing(a: dict, b: dict, model_a: GModuleModel, model_b: GModuleModel) -> Fraction:
    """``(u1 t^k, u2 t^l) = delta_{k+l,0} (u1, u2)`` between ``U[t]`` and ``U*[t^-1]``."""
    total = Fraction(0)
    for ia, x in a.items():
        ua, k = model_a.basis[ia]
        for ib, y in b.items():
            ub, l = model_b.basis[ib]
            if k + l == 0 and ua == ub:
                total += x * y
    return total


def generated_rank(U: GModuleModel, seeds) -> int:
    """Dimension of the submodule generated by ``seeds`` (basis indices) under all operators."""
    span = Echelon()
    queue = []
    for k in seeds:
        v = {k: Fraction(1)}
        if span.add(v):
            queue.append(v)
    ops = list(U.action)
    while queue:
        v = queue.pop()
        for gen, m in ops:
            w = U.act(gen, m, v)
            if w and span.add(w):
                queue.append(w)
    return span.rank
