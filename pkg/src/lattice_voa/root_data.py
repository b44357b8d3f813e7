"""Simply-laced root data: weight lattice, bilinear form, P/Q tables.

Weights are tuples of integers (or Fractions) in the basis of fundamental
weights.  The form is normalized so that every root has square length 2,
hence ``(omega_i, omega_j)`` is the ``(i, j)`` entry of the inverse Cartan
matrix.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import lcm

from .cyclotomic import CycScalar

Weight = tuple


class RootDataError(ValueError):
    pass


def _cartan(kind: str, rank: int) -> list[list[int]]:
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def link(a, b):
        c[a][b] = c[b][a] = -1

    if kind == "A":
        for i in range(rank - 1):
            link(i, i + 1)
    elif kind == "D":
        if rank < 4:
            raise RootDataError("D_r needs r >= 4")
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 3, rank - 1)
    elif kind == "E":
        if rank not in (6, 7, 8):
            raise RootDataError("E_r needs r in {6, 7, 8}")
        # Bourbaki labelling: 1-3-4-5-6(-7-8), 2 attached to 4
        link(0, 2)
        link(1, 3)
        for i in range(2, rank - 1):
            link(i, i + 1)
    else:
        raise RootDataError(f"unsupported type {kind!r}")
    return c


def _inverse(m: list[list[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _solve_mod2(rows, nvars):
    rows = [r[:] for r in rows]
    pivots = []
    r = 0
    for col in range(nvars):
        piv = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                rows[k] = [(x + y) % 2 for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] and not any(row[:-1]) for row in rows):
        return None
    sol = [0] * nvars
    for k, col in enumerate(pivots):
        sol[col] = rows[k][-1]
    return sol


def _minuscule(kind: str, rank: int) -> list[int]:
    """0-based indices of the minuscule fundamental weights."""
    if kind == "A":
        return list(range(rank))
    if kind == "D":
        return [0, rank - 2, rank - 1]
    if rank == 6:
        return [0, 5]
    if rank == 7:
        return [6]
    return []


@dataclass(frozen=True)
class RootSystem:
    """Cartan data of a simply-laced type together with its P/Q tables."""

    kind: str
    rank: int
    cartan: tuple = field(init=False, repr=False)
    cartan_inv: tuple = field(init=False, repr=False)

    def __post_init__(self):
        c = _cartan(self.kind, self.rank)
        object.__setattr__(self, "cartan", tuple(tuple(r) for r in c))
        object.__setattr__(self, "cartan_inv", tuple(tuple(r) for r in _inverse(c)))

    @classmethod
    def from_string(cls, name: str) -> "RootSystem":
        m = re.fullmatch(r"\s*([ADE])_?(\d+)\s*", name)
        if not m:
            raise RootDataError(f"cannot parse root system {name!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    def __str__(self):
        return self.name

    # -- lattice basics ---------------------------------------------------

    def _check(self, *ws):
        for w in ws:
            if len(w) != self.rank:
                raise RootDataError(f"weight {w} has wrong rank for {self.name}")

    def omega(self, i: int) -> Weight:
        """Fundamental weight, 1-based index; ``omega(0)`` is zero."""
        return tuple(int(j == i - 1) for j in range(self.rank))

    def alpha(self, i: int) -> Weight:
        """Simple root (1-based) in fundamental coordinates."""
        return tuple(self.cartan[i - 1])

    @property
    def zero(self) -> Weight:
        return (0,) * self.rank

    def to_root_coords(self, lam) -> tuple:
        self._check(lam)
        return tuple(sum(self.cartan_inv[i][j] * lam[j] for j in range(self.rank))
                     for i in range(self.rank))

    def from_root_coords(self, a) -> Weight:
        return tuple(sum(self.cartan[j][i] * a[i] for i in range(self.rank))
                     for j in range(self.rank))

    def inner(self, lam, mu) -> Fraction:
        self._check(lam, mu)
        inv = self.cartan_inv
        return sum((lam[i] * inv[i][j] * mu[j] for i in range(self.rank)
                    for j in range(self.rank) if lam[i] and mu[j]), Fraction(0))

    def norm2(self, lam) -> Fraction:
        return self.inner(lam, lam)

    def pair_root(self, i: int, lam) -> int:
        """``(alpha_i, lam)``: the i-th fundamental coordinate (0-based i)."""
        return lam[i]

    def leq(self, mu, lam) -> bool:
        """``mu <= lam``: ``lam - mu`` is a non-negative rational root combination."""
        diff = tuple(a - b for a, b in zip(lam, mu))
        return all(x >= 0 for x in self.to_root_coords(diff))

    def in_root_lattice(self, lam) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.to_root_coords(lam))

    def is_dominant(self, lam) -> bool:
        return all(x >= 0 for x in lam)

    def dual_weight(self, lam) -> Weight:
        """``-w_0 lam`` via the Dynkin diagram automorphism."""
        self._check(lam)
        r = self.rank
        if self.kind == "A":
            return tuple(reversed(lam))
        if self.kind == "D" and r % 2 == 1:
            return tuple(lam[:r - 2]) + (lam[r - 1], lam[r - 2])
        if self.kind == "E" and r == 6:
            perm = [5, 1, 4, 3, 2, 0]
            return tuple(lam[perm[i]] for i in range(6))
        return tuple(lam)

    # -- Gamma = P/Q --------------------------------------------------------

    @cached_property
    def representatives(self) -> tuple:
        """``chi_0 = 0`` followed by the minuscule fundamental weights."""
        return (self.zero,) + tuple(self.omega(i + 1)
                                    for i in _minuscule(self.kind, self.rank))

    @property
    def gamma_order(self) -> int:
        return len(self.representatives)

    @cached_property
    def gamma_exponent(self) -> int:
        n = 1
        for chi in self.representatives:
            for x in self.to_root_coords(chi):
                n = lcm(n, Fraction(x).denominator)
        return n

    @cached_property
    def phase_order(self) -> int:
        """``L``: lcm of denominators of ``(chi_i, chi_j)``; scalars live in Q(zeta_2L)."""
        n = 1
        for a in self.representatives:
            for b in self.representatives:
                n = lcm(n, self.inner(a, b).denominator)
        return n

    def gamma_class(self, lam) -> int:
        for g, chi in enumerate(self.representatives):
            if self.in_root_lattice(tuple(a - b for a, b in zip(lam, chi))):
                return g
        raise RootDataError(f"{lam} is not integral")

    def gamma_add(self, g: int, h: int) -> int:
        chi = self.representatives
        return self.gamma_class(tuple(a + b for a, b in zip(chi[g], chi[h])))

    def delta(self, g: int, h: int) -> Fraction:
        """``Delta(g, h)`` as the representative of ``-(chi_g, chi_h)`` in [0, 1)."""
        x = -self.inner(self.representatives[g], self.representatives[h])
        return x - (x.numerator // x.denominator)

    def exp_pi_i(self, q) -> CycScalar:
        return CycScalar.exp_pi_i(Fraction(q), self.phase_order)

    def nu(self, g: int, h: int) -> CycScalar:
        return self.exp_pi_i(self.inner(self.representatives[g], self.representatives[h]))

    def bform(self, lam, mu) -> int:
        """``B(lam, mu) = exp(-i pi (lam, mu)) nu(p(lam), p(mu))``, always +1 or -1."""
        chi = self.representatives
        x = self.inner(chi[self.gamma_class(lam)], chi[self.gamma_class(mu)]) - self.inner(lam, mu)
        if x.denominator != 1:
            raise RootDataError("B is not a sign; representatives inconsistent")
        return -1 if x.numerator % 2 else 1

    @cached_property
    def paper_eps_table(self) -> tuple:
        """Pairs ``(i, j)``, ``i > j``, where ``B(omega_i, omega_j) = -1``."""
        out = []
        for i in range(self.rank):
            for j in range(i):
                if self.bform(self.omega(i + 1), self.omega(j + 1)) == -1:
                    out.append((i, j))
        return tuple(out)

    @cached_property
    def _eps_odd(self) -> tuple:
        # The commutator eps(a, b) / eps(b, a) must equal (-1)^(a, b) on the
        # root lattice.  Keep the B-table where it satisfies this, otherwise
        # add the mod-2 correction with free variables set to zero.
        pairs = [(i, j) for i in range(self.rank) for j in range(i)]
        t0 = {p: int(p in self.paper_eps_table) for p in pairs}
        c = self.cartan
        rows = []
        for a in range(self.rank):
            for b in range(a + 1, self.rank):
                coeffs = [(c[a][i] * c[b][j] + c[a][j] * c[b][i]) % 2 for i, j in pairs]
                rhs = (c[a][b] - sum(x * t0[p] for x, p in zip(coeffs, pairs))) % 2
                rows.append(coeffs + [rhs])
        delta = _solve_mod2(rows, len(pairs))
        if delta is None:
            raise RootDataError(f"no sign cocycle for {self.name}")
        return tuple(p for p, d in zip(pairs, delta) if (t0[p] + d) % 2)

    @property
    def eps_table_corrected(self) -> bool:
        return self._eps_odd != self.paper_eps_table

    def epsilon(self, lam, mu) -> int:
        """Bimultiplicative sign cocycle extending the table on fundamental weights."""
        s = 0
        for i, j in self._eps_odd:
            s += lam[i] * mu[j]
        return -1 if s % 2 else 1

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "cartan_inv": [[str(x) for x in r] for r in self.cartan_inv],
            "gamma_order": self.gamma_order,
            "gamma_exponent": self.gamma_exponent,
            "representatives": [list(c) for c in self.representatives],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    # -- enumeration helpers ----------------------------------------------

    def weights_in_ball(self, max_norm2, cls: int | None = None):
        """All integral weights with ``(mu, mu) <= max_norm2``, sorted."""
        # (mu, mu) >= lambda_min * |mu|^2 bound via brute force box; the box
        # radius comes from the smallest eigenvalue of the inverse Cartan matrix.
        import numpy as np

        inv = np.array([[float(x) for x in r] for r in self.cartan_inv])
        lam_min = float(np.linalg.eigvalsh(inv).min())
        radius = int((float(max_norm2) / lam_min) ** 0.5) + 1
        out = []
        for mu in product(range(-radius, radius + 1), repeat=self.rank):
            if self.norm2(mu) <= max_norm2 and (cls is None or self.gamma_class(mu) == cls):
                out.append(mu)
        out.sort(key=lambda m: (self.norm2(m), m))
        return out

    def weyl_orbit(self, lam) -> list:
        """Orbit of ``lam`` under simple reflections (finite for the types here)."""
        seen = {tuple(lam)}
        stack = [tuple(lam)]
        while stack:
            w = stack.pop()
            for i in range(self.rank):
                if w[i]:
                    a = self.alpha(i + 1)
                    v = tuple(x - w[i] * y for x, y in zip(w, a))
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
        return sorted(seen, reverse=True)

    @cached_property
    def roots(self) -> list:
        """All roots: the weights of norm 2 in the root lattice."""
        hi = self.weyl_orbit(self.alpha(1))
        return sorted(set(hi), reverse=True)

    def dominant_below(self, lam, same_class: bool = True) -> list:
        """Dominant ``mu < lam``; by default restricted to ``lam - mu`` in Q."""
        out = []
        bound = self.norm2(lam)
        for mu in self.weights_in_ball(bound):
            if mu == tuple(lam) or not self.is_dominant(mu):
                continue
            if not self.leq(mu, lam):
                continue
            if same_class and not self.in_root_lattice(tuple(a - b for a, b in zip(lam, mu))):
                continue
            out.append(mu)
        return out
