"""States of the lattice VOA: Fock monomials tensored with group-algebra elements.

A monomial is a pair ``(creators, lattice)``.  ``creators`` is a sorted tuple
of ``(n, i)`` with ``n >= 1`` meaning the creation operator ``alpha_i t^-n``
(``i`` is a 0-based simple-root index); ``lattice`` is the weight ``mu`` of
``e^mu`` in fundamental coordinates.
"""
from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction

from .cyclotomic import CycScalar, as_scalar


def merge(c1: tuple, c2: tuple) -> tuple:
    if not c1:
        return c2
    if not c2:
        return c1
    return tuple(sorted(c1 + c2))


def remove_one(creators: tuple, item) -> tuple:
    k = creators.index(item)
    return creators[:k] + creators[k + 1:]


def creator_degree(creators: tuple) -> int:
    return sum(n for n, _ in creators)


class State:
    """Finite linear combination of monomials; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = c

    @classmethod
    def monomial(cls, lattice, creators=(), coeff=1) -> "State":
        key = (tuple(sorted(creators)), tuple(lattice))
        return cls({key: Fraction(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def _raw(cls, terms: dict) -> "State":
        s = cls.__new__(cls)
        s.terms = terms
        return s

    # -- linear structure ---------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "State") -> "State":
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if isinstance(v, CycScalar):
                v = as_scalar(v, v.L)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return State._raw(out)

    def __neg__(self):
        return State._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "State":
        if not c:
            return State()
        if c == 1:
            return self
        out = {}
        for k, v in self.terms.items():
            x = v * c
            if isinstance(x, CycScalar):
                x = as_scalar(x, x.L)
            if x:
                out[k] = x
        return State._raw(out)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    # -- grading --------------------------------------------------------------

    def lattice_weights(self) -> set:
        return {lat for (_, lat) in self.terms}

    def by_lattice(self) -> dict:
        out = {}
        for (cre, lat), c in self.terms.items():
            out.setdefault(lat, {})[(cre, lat)] = c
        return {lat: State._raw(t) for lat, t in out.items()}

    def component(self, lattice, degree=None) -> "State":
        lattice = tuple(lattice)
        return State._raw({k: c for k, c in self.terms.items()
                           if k[1] == lattice and (degree is None or creator_degree(k[0]) == degree)})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kc: (kc[0][1], kc[0][0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (cre, lat), c in self.sorted_terms():
            mono = "".join(f"a{i + 1}[-{n}]" for n, i in cre)
            parts.append(f"({c}){mono}e^{list(lat)}")
        return " + ".join(parts)

    # -- serialization --------------------------------------------------------

    def to_json(self, L: int) -> dict:
        terms = []
        for (cre, lat), c in self.sorted_terms():
            coeff = c if isinstance(c, CycScalar) else CycScalar.rational(c, L)
            terms.append({
                "coeff": coeff.coords(),
                "creators": [[i + 1, n] for n, i in cre],
                "lattice": [int(x) for x in lat],
            })
        return {"terms": terms}

    def dumps(self, L: int) -> str:
        return json.dumps(self.to_json(L), sort_keys=True)

    @classmethod
    def from_json(cls, data, L: int, rank: int | None = None) -> "State":
        if isinstance(data, str):
            data = json.loads(data)
        out = State()
        for t in data["terms"]:
            coeff = t.get("coeff", ["1"])
            if isinstance(coeff, (str, int)):
                coeff = [coeff]
            c = as_scalar(CycScalar.from_coords(coeff, L), L)
            cre = []
            for i, n in t.get("creators", []):
                if int(n) < 1 or int(i) < 1 or (rank is not None and int(i) > rank):
                    raise ValueError(f"bad creator {[i, n]}")
                cre.append((int(n), int(i) - 1))
            lat = tuple(int(x) for x in t["lattice"])
            if rank is not None and len(lat) != rank:
                raise ValueError(f"lattice vector {lat} has wrong rank")
            out = out + State.monomial(lat, cre, c)
        return out


def creator_counts(creators: tuple) -> Counter:
    return Counter(creators)
