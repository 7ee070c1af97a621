"""PBW normal ordering in the enveloping algebra, the monoid of exponent vectors,
and the commutator identities used by the simplicity arguments for induced modules.

A PBW monomial is a tuple of ``(Generator, exponent)`` pairs, strictly increasing
in the canonical order (centrals < h < d, then by degree).  The same left-action
engine (:class:`Rewriter`) drives normal ordering in U(g) and the action on
induced modules, where inner-subalgebra factors are pushed through to a base module.
"""

from __future__ import annotations

import itertools
import sys
from fractions import Fraction
from typing import Iterable

from .algebra import (AlgebraKind, C1, C2, Generator, LieElement, bracket_terms,
                      d, format_rational, h, parse_generator, validate)
from .errors import BoundExceeded, InvalidGenerator
from .linalg import solve_in_span
from .reports import VerificationReport

__all__ = [
    "Rewriter", "EnvElement", "ExpVec",
    "normal_form", "env_mul", "monomial_degree", "monomial_to_json",
    "weight", "cmp_revlex", "cmp_pair", "cmp_pair_prime", "pair_key", "pair_key_prime",
    "verify_formula", "formula_suite", "FORMULAS",
]

ONE = Fraction(1)

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


def _canonical_key(g):
    return g.sort_key()


class Rewriter:
    """Left multiplication of a generator onto ``mono ⊗ b``.

    ``inner`` is a generator filter (anything supporting ``in``); generators in it are
    commuted all the way right and handed to ``base_act(g, b) -> {b': coeff}``.
    With ``inner=None`` this is plain left multiplication in U(g) and ``b`` is unused.
    """

    def __init__(self, kind, inner=None, base_act=None, key=_canonical_key):
        self.kind = AlgebraKind.parse(kind)
        self.inner = inner
        self.base_act = base_act
        self.key = key
        self._memo = {}

    def clear(self):
        self._memo.clear()

    def act_gen(self, g, mono, b):
        inner = self.inner
        g_in = inner is not None and g in inner
        if g_in:
            if g.is_central or not mono:
                return {(mono, b2): c for b2, c in self.base_act(g, b).items()}
        else:
            if not mono:
                return {(((g, 1),), b): ONE}
            x, e = mono[0]
            if x == g:
                return {(((x, e + 1),) + mono[1:], b): ONE}
            if self.key(g) < self.key(x):
                return {(((g, 1),) + mono, b): ONE}
        memo_key = (g, mono, b)
        hit = self._memo.get(memo_key)
        if hit is not None:
            return hit
        out = self._commute(g, mono, b)
        self._memo[memo_key] = out
        return out

    def _commute(self, g, mono, b):
        # g x^e R = x (g x^{e-1} R) + [g, x] x^{e-1} R
        x, e = mono[0]
        rest = (((x, e - 1),) + mono[1:]) if e > 1 else mono[1:]
        out = {}
        act = self.act_gen
        for (m1, b1), c1 in act(g, rest, b).items():
            for el, c2 in act(x, m1, b1).items():
                out[el] = out.get(el, 0) + c1 * c2
        for y, cy in bracket_terms(self.kind, g, x):
            for el, c in act(y, rest, b).items():
                out[el] = out.get(el, 0) + cy * c
        return {k: v for k, v in out.items() if v}

    def apply_word(self, word, state):
        """Apply ``word`` (leftmost factor acts last) to ``{(mono, b): coeff}``."""
        for g in reversed(word):
            new = {}
            for (mono, b), c in state.items():
                for el, c2 in self.act_gen(g, mono, b).items():
                    new[el] = new.get(el, 0) + c * c2
            state = {k: v for k, v in new.items() if v}
        return state


_ENGINES = {}


def _engine(kind):
    kind = AlgebraKind.parse(kind)
    eng = _ENGINES.get(kind)
    if eng is None:
        eng = _ENGINES[kind] = Rewriter(kind)
    return eng


# ---------------------------------------------------------------- monomials

def monomial_degree(mono):
    return sum((g.degree * e for g, e in mono), Fraction(0))


def monomial_to_json(mono):
    return [[g.token, e] for g, e in mono]


def monomial_from_json(obj, kind=None):
    return tuple((parse_generator(tok, kind), int(e)) for tok, e in obj)


def expand(mono):
    """Monomial as a flat word."""
    return [g for g, e in mono for _ in range(e)]


class EnvElement:
    """Sparse rational combination of canonically ordered PBW monomials."""

    __slots__ = ("kind", "_terms")

    def __init__(self, kind, terms=None):
        self.kind = AlgebraKind.parse(kind)
        self._terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def unit(cls, kind):
        return cls(kind, {(): ONE})

    @classmethod
    def from_generator(cls, kind, g, coeff=1):
        validate(AlgebraKind.parse(kind), g)
        return cls(kind, {((g, 1),): coeff})

    @classmethod
    def from_lie(cls, kind, x):
        return cls(kind, {((g, 1),): c for g, c in x.items()})

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _mono_sort_key(kv[0]))

    def coeff(self, mono):
        return self._terms.get(mono, Fraction(0))

    def monomials(self):
        return [m for m, _ in self.items()]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def _combine(self, other, sign):
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + sign * c
        return EnvElement(self.kind, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return EnvElement(self.kind, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, EnvElement):
            return env_mul(self.kind, self, other)
        return EnvElement(self.kind, {m: c * other for m, c in self._terms.items()})

    def __rmul__(self, scalar):
        return EnvElement(self.kind, {m: c * scalar for m, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.kind is other.kind and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def degrees(self):
        return {monomial_degree(m) for m in self._terms}

    def to_json(self):
        return [{"monomial": monomial_to_json(m), "coeff": format_rational(c)}
                for m, c in self.items()]

    def __repr__(self):
        if not self._terms:
            return "EnvElement(0)"
        parts = []
        for m, c in self.items():
            word = "*".join(g.token if e == 1 else f"{g.token}^{e}" for g, e in m) or "1"
            parts.append(f"({format_rational(c)})*{word}")
        return "EnvElement(" + " + ".join(parts) + ")"


def _mono_sort_key(mono):
    return (len(mono), [(g.sort_key(), e) for g, e in mono])


def normal_form(kind, word):
    """Canonical PBW expansion of the product of ``word`` in U(g)."""
    kind = AlgebraKind.parse(kind)
    for g in word:
        validate(kind, g)
    state = _engine(kind).apply_word(list(word), {((), None): ONE})
    return EnvElement(kind, {m: c for (m, _), c in state.items()})


def env_mul(kind, a, b):
    kind = AlgebraKind.parse(kind)
    eng = _engine(kind)
    for m in list(a._terms) + list(b._terms):
        for g, _ in m:
            validate(kind, g)
    start = {(m, None): c for m, c in b._terms.items()}
    out = {}
    for m, c in a._terms.items():
        for (m2, _), c2 in eng.apply_word(expand(m), start).items():
            out[m2] = out.get(m2, 0) + c * c2
    return EnvElement(kind, out)


# ---------------------------------------------------------------- the monoid M

class ExpVec(tuple):
    """Finitely supported exponent vector (i_1, i_2, ...), stored without trailing zeros.

    Tuple comparison of trimmed vectors is exactly the reverse-lexicographic order:
    the first differing position decides, so eps_2 < eps_1.
    """

    def __new__(cls, entries=()):
        if isinstance(entries, dict):
            if any(p < 1 for p in entries):
                raise ValueError("positions start at 1")
            n = max((p for p, v in entries.items() if v), default=0)
            entries = [entries.get(p, 0) for p in range(1, n + 1)]
        vals = list(entries)
        if any(v < 0 for v in vals):
            raise ValueError("exponents must be non-negative")
        while vals and vals[-1] == 0:
            vals.pop()
        return super().__new__(cls, vals)

    @classmethod
    def eps(cls, p):
        if p < 1:
            raise ValueError("positions start at 1")
        return cls([0] * (p - 1) + [1])

    @classmethod
    def zero(cls):
        return cls(())

    def __getitem__(self, p):
        """Exponent at position p (1-based); slices behave like tuples."""
        if isinstance(p, slice):
            return tuple.__getitem__(self, p)
        if p < 1:
            raise IndexError("positions start at 1")
        return tuple.__getitem__(self, p - 1) if p <= len(self) else 0

    def __add__(self, other):
        n = max(len(self), len(other))
        return ExpVec([self[p] + other[p] for p in range(1, n + 1)])

    def __sub__(self, other):
        n = max(len(self), len(other))
        vals = [self[p] - other[p] for p in range(1, n + 1)]
        if any(v < 0 for v in vals):
            raise ValueError(f"{tuple(self)} - {tuple(other)} leaves the monoid")
        return ExpVec(vals)

    def support(self):
        return [p for p in range(1, len(self) + 1) if self[p]]

    def min_support(self):
        for p in range(1, len(self) + 1):
            if self[p]:
                return p
        return None

    @property
    def weight(self):
        return sum(p * v for p, v in enumerate(tuple(self), start=1))

    def is_zero(self):
        return len(self) == 0

    def to_dict(self):
        return {p: self[p] for p in self.support()}

    def __repr__(self):
        if not self:
            return "ExpVec(0)"
        parts = [f"{v}e{p}" if v != 1 else f"e{p}" for p, v in self.to_dict().items()]
        return "ExpVec(" + "+".join(parts) + ")"


def weight(i):
    return ExpVec(i).weight


def _sign(a, b):
    return (a > b) - (a < b)


def cmp_revlex(i, j):
    return _sign(tuple(ExpVec(i)), tuple(ExpVec(j)))


def pair_key(pair):
    """Sort key realizing the pair order: total weight, w(second), second, first."""
    a, b = ExpVec(pair[0]), ExpVec(pair[1])
    return (a.weight + b.weight, b.weight, tuple(b), tuple(a))


def pair_key_prime(pair):
    return pair_key((pair[1], pair[0]))


def cmp_pair(x, y):
    return _sign(pair_key(x), pair_key(y))


def cmp_pair_prime(x, y):
    return _sign(pair_key_prime(x), pair_key_prime(y))


# ---------------------------------------------------------------- commutator identities

FORMULAS = ("h-on-h", "d-on-h", "h-on-d", "d-on-d")
MAX_FACTORS = 4
MAX_INDEX = 12


def _without(seq, drop):
    return [x for k, x in enumerate(seq) if k not in drop]


def _nf(word):
    return normal_form(AlgebraKind.MIRROR, word)


def verify_formula(which, i, js, kind=AlgebraKind.MIRROR, max_factors=MAX_FACTORS,
                   max_index=MAX_INDEX):
    """Check one instance of the commutator identities of ``[x, y_1 ... y_t]`` in U(D).

    ``which`` names the pair of generator classes: ``h-on-h`` is
    ``[h_{i-1/2}, prod h_{j+1/2}]``, ``d-on-h`` is ``[d_i, prod h_{j+1/2}]``,
    ``h-on-d`` is ``[h_{i-1/2}, prod d_j]`` and ``d-on-d`` is ``[d_i, prod d_j]``.
    The first two have fully explicit right sides and are compared exactly.  The
    last two carry unspecified tail coefficients: the leading sum is matched
    exactly and the rest must lie in the span of the allowed tail words.
    """
    kind = AlgebraKind.parse(kind)
    if kind is not AlgebraKind.MIRROR:
        raise InvalidGenerator("the commutator identities are stated for the mirror algebra")
    if which not in FORMULAS:
        raise ValueError(f"unknown identity {which!r}; expected one of {FORMULAS}")
    js = sorted(int(j) for j in js)
    i = int(i)
    if len(js) > max_factors:
        raise BoundExceeded(f"{len(js)} factors exceeds the configured bound {max_factors}")
    if any(abs(x) > max_index for x in [i] + js):
        raise BoundExceeded(f"index outside [-{max_index}, {max_index}]")

    half = Fraction(1, 2)
    t = len(js)
    if which in ("h-on-h", "h-on-d"):
        x = h(i - half)
    else:
        x = d(i)
    if which in ("h-on-h", "d-on-h"):
        word = [h(j + half) for j in js]
    else:
        word = [d(j) for j in js]

    lhs = _nf([x] + word) - _nf(word + [x])
    rhs = EnvElement(kind)
    tails = []

    if which == "h-on-h":
        for s, j in enumerate(js):
            if i + j == 0:
                rhs = rhs + (i - half) * _nf([C2] + _without(word, {s}))
    elif which == "d-on-h":
        for s, j in enumerate(js):
            rhs = rhs + (-j - half) * _nf(_without(word, {s}) + [h(i + j + half)])
        for s1, s2 in itertools.combinations(range(t), 2):
            if i + js[s1] + js[s2] + 1 == 0:
                coeff = (-js[s1] - half) * (i + js[s1] + half)
                rhs = rhs + coeff * _nf([C2] + _without(word, {s1, s2}))
    elif which == "h-on-d":
        for s, j in enumerate(js):
            rhs = rhs + (i - half) * _nf(_without(word, {s}) + [h(i + j - half)])
        for size in range(2, t + 1):
            for S in itertools.combinations(range(t), size):
                tot = i + sum(js[s] for s in S)
                tails.append(_nf(_without(word, set(S)) + [h(tot - half)]))
    else:  # d-on-d
        for s, j in enumerate(js):
            rest = _without(word, {s})
            rhs = rhs + (i - j) * _nf(rest + [d(i + j)])
            if i + j == 0:
                rhs = rhs + (i - j) * Fraction(j * j - 1, 24) * _nf(rest + [C1])
        for size in range(2, t + 1):
            for S in itertools.combinations(range(t), size):
                tot = i + sum(js[s] for s in S)
                rest = _without(word, set(S))
                tails.append(_nf(rest + [d(tot)]))
                if tot == 0:
                    tails.append(_nf(rest + [C1]))

    report = VerificationReport()
    report.tick()
    residual = lhs - rhs
    ok = not residual
    if not ok and tails:
        coeffs = solve_in_span([dict(e._terms) for e in tails], dict(residual._terms))
        ok = coeffs is not None
    if not ok:
        report.fail(identity=which, i=i, js=js, lhs=lhs.to_json(), rhs=rhs.to_json())
    return report


def formula_suite(index_range=3, max_t=3, identities=FORMULAS):
    """All instances with i, j_s in [-R, R] and t <= max_t (j's as multisets)."""
    report = VerificationReport()
    R = int(index_range)
    for which in identities:
        for i in range(-R, R + 1):
            for t in range(max_t + 1):
                for js in itertools.combinations_with_replacement(range(-R, R + 1), t):
                    report.merge(verify_formula(which, i, js))
                    if not report.passed:
                        return report
    return report
