"""Generators and brackets of the mirror and twisted Heisenberg-Virasoro algebras.

Indices are stored doubled (``2m`` for ``d_m``, ``2r`` for ``h_r``) so that the
half-integer modes of the mirror algebra stay plain ints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import InvalidGenerator

__all__ = [
    "AlgebraKind", "Generator", "LieElement", "Subalgebra",
    "d", "h", "C1", "C2", "C3",
    "bracket", "bracket_lin", "jacobi_defect", "jacobi_sweep", "validate",
    "parse_generator", "parse_rational", "format_rational", "generators_up_to",
]


class AlgebraKind(enum.Enum):
    MIRROR = "mirror"
    TWISTED = "twisted"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        aliases = {"mirror": cls.MIRROR, "mirrorhv": cls.MIRROR,
                   "twisted": cls.TWISTED, "twistedhv": cls.TWISTED}
        try:
            return aliases[key]
        except KeyError:
            raise InvalidGenerator(f"unknown algebra kind {text!r}") from None

    @property
    def centrals(self):
        if self is AlgebraKind.MIRROR:
            return ("c1", "c2")
        return ("c1", "c2", "c3")

    @property
    def level_tag(self):
        """Central element whose value is the Heisenberg level."""
        return "c2" if self is AlgebraKind.MIRROR else "c3"


# class rank used by the canonical PBW order: centrals < h < d
_RANK = {"c1": 0, "c2": 0, "c3": 0, "h": 1, "d": 2}
_CENTRAL_SLOT = {"c1": 0, "c2": 1, "c3": 2}


class Generator(NamedTuple):
    tag: str      # 'd', 'h', 'c1', 'c2', 'c3'
    index: int    # twice the mode index; 0 for centrals

    @property
    def is_central(self):
        return self.tag[0] == "c"

    @property
    def degree(self):
        return Fraction(self.index, 2)

    @property
    def mode(self):
        """Mode index as an int (d) or Fraction (h)."""
        if self.tag == "d":
            return self.index // 2
        return Fraction(self.index, 2)

    @property
    def rank(self):
        return _RANK[self.tag]

    def sort_key(self):
        if self.is_central:
            return (0, 0, _CENTRAL_SLOT[self.tag])
        return (_RANK[self.tag], self.index, 0)

    @property
    def token(self):
        if self.is_central:
            return self.tag
        if self.index % 2:
            return f"{self.tag}:{self.index}/2"
        return f"{self.tag}:{self.index // 2}"

    def __str__(self):
        return self.token

    def __repr__(self):
        return f"Generator({self.token})"


def _as_fraction(x):
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def d(m):
    m = _as_fraction(m)
    if m.denominator != 1:
        raise InvalidGenerator(f"d-index must be an integer, got {m}")
    return Generator("d", 2 * int(m))


def h(r):
    r2 = 2 * _as_fraction(r)
    if r2.denominator != 1:
        raise InvalidGenerator(f"h-index must lie in (1/2)Z, got {r}")
    return Generator("h", int(r2))


C1 = Generator("c1", 0)
C2 = Generator("c2", 0)
C3 = Generator("c3", 0)


def validate(kind, g):
    """Raise InvalidGenerator unless ``g`` is a basis element of ``kind``."""
    tag = g.tag
    if tag == "d":
        ok = g.index % 2 == 0
    elif tag == "h":
        ok = (g.index % 2 == 1) if kind is AlgebraKind.MIRROR else (g.index % 2 == 0)
    elif tag in ("c1", "c2"):
        ok = g.index == 0
    elif tag == "c3":
        ok = kind is AlgebraKind.TWISTED and g.index == 0
    else:
        ok = False
    if not ok:
        raise InvalidGenerator(f"{g.token} is not a generator of the {kind.value} algebra")
    return g


# ---------------------------------------------------------------- rationals

def parse_rational(text):
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not an exact rational: {text!r}") from None


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_generator(token, kind=None):
    s = token.strip().lower()
    if s in ("c1", "c2", "c3"):
        g = Generator(s, 0)
    else:
        tag, sep, idx = s.partition(":")
        if not sep or tag not in ("d", "h"):
            raise InvalidGenerator(f"cannot parse generator token {token!r}")
        try:
            val = Fraction(idx)
        except (ValueError, ZeroDivisionError):
            raise InvalidGenerator(f"bad index in {token!r}") from None
        g = d(val) if tag == "d" else h(val)
    if kind is not None:
        validate(kind, g)
    return g


def parse_word(text, kind=None):
    text = text.strip()
    if not text:
        return []
    return [parse_generator(t, kind) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------- LieElement

class LieElement:
    """Finite rational combination of generators (immutable)."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for g, c in items:
                c = Fraction(c)
                if c:
                    clean[g] = clean.get(g, 0) + c
                    if not clean[g]:
                        del clean[g]
        self._terms = clean

    @classmethod
    def of(cls, g, coeff=1):
        return cls({g: coeff})

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coeff(self, g):
        return self._terms.get(g, Fraction(0))

    def __add__(self, other):
        out = dict(self._terms)
        for g, c in other._terms.items():
            out[g] = out.get(g, 0) + c
        return LieElement(out)

    def __neg__(self):
        return LieElement({g: -c for g, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return LieElement({g: c * scalar for g, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, LieElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def to_json(self):
        return [[g.token, format_rational(c)] for g, c in self.items()]

    def __repr__(self):
        if not self._terms:
            return "LieElement(0)"
        body = " + ".join(f"({format_rational(c)})*{g.token}" for g, c in self.items())
        return f"LieElement({body})"


# ---------------------------------------------------------------- brackets

@lru_cache(maxsize=None)
def bracket_terms(kind, x, y):
    """[x, y] as a tuple of (Generator, Fraction) pairs.  Inputs assumed valid."""
    tx, ty = x.tag, y.tag
    if tx[0] == "c" or ty[0] == "c":
        return ()
    s2 = x.index + y.index   # twice the total degree
    if tx == "d" and ty == "d":
        m, n = x.index // 2, y.index // 2
        out = []
        if m != n:
            out.append((Generator("d", s2), Fraction(m - n)))
        if s2 == 0 and m * m * m != m:
            out.append((C1, Fraction(m * m * m - m, 12)))
        return tuple(out)
    if tx == "h" and ty == "h":
        if s2 != 0 or x.index == 0:
            return ()
        lvl = C2 if kind is AlgebraKind.MIRROR else C3
        return ((lvl, Fraction(x.index, 2)),)
    # mixed d/h
    if tx == "d":
        m, r2 = x.index // 2, y.index
        sign = 1
    else:
        m, r2 = y.index // 2, x.index
        sign = -1
    out = []
    if r2 != 0:
        out.append((Generator("h", s2), Fraction(-r2, 2) * sign))
    if kind is AlgebraKind.TWISTED and s2 == 0 and m * m + m != 0:
        out.append((C2, Fraction(m * m + m) * sign))
    return tuple(out)


def bracket(kind, x, y):
    kind = AlgebraKind.parse(kind)
    validate(kind, x)
    validate(kind, y)
    return LieElement(bracket_terms(kind, x, y))


def _as_lie(x):
    if isinstance(x, Generator):
        return LieElement.of(x)
    return x


def bracket_lin(kind, x, y):
    kind = AlgebraKind.parse(kind)
    x, y = _as_lie(x), _as_lie(y)
    acc = {}
    for gx, cx in x._terms.items():
        validate(kind, gx)
        for gy, cy in y._terms.items():
            validate(kind, gy)
            for g, c in bracket_terms(kind, gx, gy):
                acc[g] = acc.get(g, 0) + cx * cy * c
    return LieElement(acc)


def jacobi_defect(kind, x, y, z):
    kind = AlgebraKind.parse(kind)
    return (bracket_lin(kind, x, bracket_lin(kind, y, z))
            + bracket_lin(kind, y, bracket_lin(kind, z, x))
            + bracket_lin(kind, z, bracket_lin(kind, x, y)))


def generators_up_to(kind, max_degree, centrals=True):
    """All generators with |degree| <= max_degree, in canonical order."""
    kind = AlgebraKind.parse(kind)
    out = []
    if centrals:
        out.extend(Generator(t, 0) for t in kind.centrals)
    bound2 = int(2 * Fraction(max_degree))
    h_par = 1 if kind is AlgebraKind.MIRROR else 0
    out.extend(Generator("h", i) for i in range(-bound2, bound2 + 1) if i % 2 == h_par)
    out.extend(Generator("d", i) for i in range(-bound2, bound2 + 1) if i % 2 == 0)
    return out


# ---------------------------------------------------------------- subalgebras

NEG_INF = -math.inf


@dataclass(frozen=True)
class Subalgebra:
    """Generator filter: d_m with 2m >= d_from2, h_r with 2r >= h_from2, listed centrals.

    ``None`` thresholds mean no generators of that class; ``NEG_INF`` means all.
    """

    d_from2: float | int | None
    h_from2: float | int | None
    centrals: frozenset
    extra: frozenset = frozenset()   # isolated generators below the thresholds

    def __contains__(self, g):
        if g in self.extra:
            return True
        t = g.tag
        if t == "d":
            return self.d_from2 is not None and g.index >= self.d_from2
        if t == "h":
            return self.h_from2 is not None and g.index >= self.h_from2
        return t in self.centrals

    def noncentral(self):
        return Subalgebra(self.d_from2, self.h_from2, frozenset(), self.extra)

    def with_extra(self, *gens):
        return Subalgebra(self.d_from2, self.h_from2, self.centrals, self.extra | frozenset(gens))

    def issubset(self, other):
        def le(a, b):   # "threshold a is contained in threshold b"
            if a is None:
                return True
            if b is None:
                return False
            return a >= b
        return (le(self.d_from2, other.d_from2) and le(self.h_from2, other.h_from2)
                and self.centrals <= other.centrals
                and all(g in other for g in self.extra))

    # -- named members of the lattice

    @classmethod
    def full(cls, kind):
        kind = AlgebraKind.parse(kind)
        return cls(NEG_INF, NEG_INF, frozenset(kind.centrals))

    @classmethod
    def virasoro(cls, kind, m=None):
        """Vir, or Vir^(m) = span{d_{m+i}: i >= 0} + C c1."""
        return cls(NEG_INF if m is None else 2 * m, None, frozenset({"c1"}))

    @classmethod
    def heisenberg(cls, kind, n=None):
        """The Heisenberg part, or its tail from h_{n+1/2} (mirror) / h_n (twisted)."""
        kind = AlgebraKind.parse(kind)
        return cls(None, _h_threshold(kind, n), frozenset({kind.level_tag}))

    @classmethod
    def dsub(cls, kind, m, n):
        """The subalgebra with d_{m+i} and h_{n+i+1/2} (mirror) or h_{n+i} (twisted)."""
        kind = AlgebraKind.parse(kind)
        dm = NEG_INF if m is None or m == NEG_INF else 2 * m
        return cls(dm, _h_threshold(kind, n), frozenset(kind.centrals))

    def to_json(self):
        def enc(v, half):
            if v is None:
                return None
            if v == NEG_INF:
                return "-inf"
            return format_rational(Fraction(int(v), 2)) if half else int(v) // 2
        out = {"d_from": enc(self.d_from2, False), "h_from": enc(self.h_from2, True),
               "centrals": sorted(self.centrals)}
        if self.extra:
            out["extra"] = sorted(g.token for g in self.extra)
        return out

    @classmethod
    def from_json(cls, kind, obj):
        kind = AlgebraKind.parse(kind)

        def dec(v, is_h):
            if v is None:
                return None
            if v == "-inf":
                return NEG_INF
            q = parse_rational(v)
            if (q * 2).denominator != 1 or (not is_h and q.denominator != 1):
                raise InvalidGenerator(f"bad subalgebra threshold {v!r}")
            return int(2 * q)
        cents = obj.get("centrals")
        cents = frozenset(kind.centrals if cents is None else cents)
        extra = frozenset(parse_generator(t, kind) for t in obj.get("extra", ()))
        return cls(dec(obj.get("d_from"), False), dec(obj.get("h_from"), True), cents, extra)


def _h_threshold(kind, n):
    if n is None or n == NEG_INF:
        return NEG_INF
    return 2 * n + 1 if kind is AlgebraKind.MIRROR else 2 * n


def jacobi_sweep(kinds=(AlgebraKind.MIRROR, AlgebraKind.TWISTED), max_degree=6):
    """Jacobi defect over all ordered generator triples with |degree| <= max_degree."""
    from .reports import VerificationReport

    report = VerificationReport()
    for kind in kinds:
        kind = AlgebraKind.parse(kind)
        gens = generators_up_to(kind, max_degree)
        for x in gens:
            for y in gens:
                for z in gens:
                    report.tick()
                    bad = jacobi_defect(kind, x, y, z)
                    if bad:
                        report.fail(algebra=kind.value, triple=[x.token, y.token, z.token],
                                    defect=bad.to_json())
                        return report
    return report
