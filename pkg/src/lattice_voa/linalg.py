"""Exact sparse linear algebra over Q.

Vectors are dicts from sortable keys to Fractions.  :class:`Echelon` keeps a
reduced row echelon basis whose pivots are the smallest keys in the natural
order, so the remainder of a vector modulo the span is canonical: it depends
only on the subspace, not on the order in which spanning vectors arrived.
"""
from __future__ import annotations

from fractions import Fraction


def _axpy(y: dict, a, x: dict) -> dict:
    out = dict(y)
    for k, v in x.items():
        w = out.get(k, 0) + a * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


class Echelon:
    """Incrementally built reduced row echelon basis of a subspace."""

    __slots__ = ("rows",)

    def __init__(self, vectors=()):
        self.rows = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        """Canonical remainder of ``v`` modulo the span."""
        v = {k: Fraction(c) for k, c in v.items() if c}
        for p in sorted(set(v) & set(self.rows)):
            c = v.get(p)
            if c:
                v = _axpy(v, -c, self.rows[p])
        return v

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def add(self, v: dict) -> bool:
        """Add ``v`` to the span; returns whether the rank grew."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {k: c * inv for k, c in r.items()}
        for q, row in list(self.rows.items()):
            c = row.get(p)
            if c:
                self.rows[q] = _axpy(row, -c, r)
        self.rows[p] = r
        return True

    def vectors(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]

    def pivots(self) -> list:
        return sorted(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = dict(self.rows)
        return e


def rank_of(vectors) -> int:
    return Echelon(vectors).rank


def kernel(columns: list, keys=None) -> list:
    """Basis of ``{c : sum_k c_k columns[k] = 0}`` as dicts ``index -> coeff``.

    Each column is a sparse vector; the answer is in reduced form (one free
    index per kernel vector, with coefficient 1).
    """
    # row-reduce the augmented system [columns | identity]
    ech = Echelon()
    tagged = []
    for k, col in enumerate(columns):
        v = {(0, key): c for key, c in col.items()}
        v[(1, k)] = Fraction(1)
        tagged.append(v)
    for v in tagged:
        ech.add(v)
    out = []
    for p, row in sorted(ech.rows.items()):
        if p[0] == 1:
            out.append({key[1]: c for key, c in row.items()})
    return out
