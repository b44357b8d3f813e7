"""Exact arithmetic in the cyclotomic field Q(zeta_2L)."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _divide_exact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return out


class CycScalar:
    """Element of Q(zeta) with ``zeta = exp(i pi / L)``.

    Stored as rational coordinates in the power basis ``1, zeta, ...,
    zeta^(phi(2L)-1)``; every operation reduces modulo Phi_2L, so equality is
    coordinate equality.
    """

    __slots__ = ("L", "coeffs")

    def __init__(self, coeffs, L: int):
        self.L = L
        self.coeffs = _reduce(tuple(Fraction(c) for c in coeffs), L)

    @classmethod
    def rational(cls, x, L: int) -> "CycScalar":
        return cls((x,), L)

    @classmethod
    def zeta_power(cls, k: int, L: int) -> "CycScalar":
        k %= 2 * L
        return cls((0,) * k + (1,), L)

    @classmethod
    def exp_pi_i(cls, q, L: int) -> "CycScalar":
        """``exp(i pi q)``; ``q * L`` must be an integer."""
        k = Fraction(q) * L
        if k.denominator != 1:
            raise ValueError(f"exp(i pi {q}) is not in Q(zeta_{2 * L})")
        return cls.zeta_power(int(k), L)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycScalar):
            if other.L != self.L:
                raise ValueError("scalars from different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar((other,), self.L)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return CycScalar(tuple(x + y for x, y in zip(a, b)), self.L)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(tuple(-x for x in self.coeffs), self.L)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs))
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] += x * y
        return CycScalar(out, self.L)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_rational())
        return hash((self.L, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def conjugate(self) -> "CycScalar":
        # zeta -> zeta^(-1)
        acc = CycScalar((), self.L)
        for k, c in enumerate(self.coeffs):
            if c:
                acc = acc + CycScalar.zeta_power(-k, self.L) * c
        return acc

    def coords(self) -> list[str]:
        """Full coordinate vector of length phi(2L), as ``"p/q"`` strings."""
        deg = len(cyclotomic_poly(2 * self.L)) - 1
        padded = self.coeffs + (Fraction(0),) * (deg - len(self.coeffs))
        return [str(x) for x in padded]

    @classmethod
    def from_coords(cls, coords, L: int) -> "CycScalar":
        return cls([Fraction(c) for c in coords], L)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                parts.append(str(c) if k == 0 else f"({c})*z^{k}")
        return " + ".join(parts) + f" [z=exp(i*pi/{self.L})]"


def _reduce(c: tuple, L: int) -> tuple:
    phi = cyclotomic_poly(2 * L)
    deg = len(phi) - 1
    c = list(c)
    for k in range(len(c) - 1, deg - 1, -1):
        top = c[k]
        if top:
            for j in range(deg + 1):
                c[k - deg + j] -= top * phi[j]
    c = c[:deg]
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def as_scalar(x, L: int):
    """Demote a rational CycScalar to a Fraction; leave others unchanged."""
    if isinstance(x, CycScalar) and x.is_rational():
        return x.to_rational()
    return x
