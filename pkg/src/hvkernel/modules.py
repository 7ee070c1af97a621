"""Restricted module carriers with exact generator actions.

Every carrier exposes the same small interface (:class:`ModuleHandle`): an action
of single generators on basis elements, a weight used for truncated enumeration,
and an annihilation bound ``bound(b)`` such that every generator of larger degree
kills ``b``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from math import comb

from .algebra import (AlgebraKind, Generator, LieElement, NEG_INF, Subalgebra,
                      bracket_terms, d, format_rational, h, parse_generator,
                      parse_rational, validate)
from .errors import (BoundExceeded, InconsistentCharacter, InvalidGenerator,
                     KindMismatch, WindowExceeded, ZeroLambda, ZeroLevel)
from .pbw import EnvElement, Rewriter, expand, monomial_from_json, monomial_to_json

__all__ = [
    "Vec", "ModuleHandle", "CharacterModule", "InducedModule", "PolyModule",
    "LaurentModule", "VirTrivialExtend", "TensorModule",
    "build_character_induced", "build_fock", "build_verma_vir", "build_highest_weight",
    "build_semi_whittaker", "build_poly_module", "build_laurent_module",
    "build_induced", "vir_trivial_extend", "build_tensor", "act",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class Vec:
    """Finite rational combination of carrier basis elements."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms = {b: Fraction(c) for b, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, b, coeff=1):
        return cls({b: coeff})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return list(self._terms.items())

    def support(self):
        return list(self._terms)

    def coeff(self, b):
        return self._terms.get(b, ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        out = dict(self._terms)
        for b, c in other._terms.items():
            out[b] = out.get(b, 0) + c
        return Vec(out)

    def __sub__(self, other):
        out = dict(self._terms)
        for b, c in other._terms.items():
            out[b] = out.get(b, 0) - c
        return Vec(out)

    def __neg__(self):
        return Vec({b: -c for b, c in self._terms.items()})

    def __mul__(self, scalar):
        return Vec({b: c * scalar for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, Vec):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "Vec(0)"
        return "Vec(" + ", ".join(f"{b!r}: {format_rational(c)}"
                                  for b, c in self._terms.items()) + ")"


def _add_into(acc, terms, scale):
    for b, c in terms.items():
        v = acc.get(b, 0) + scale * c
        if v:
            acc[b] = v
        else:
            acc.pop(b, None)


class ModuleHandle:
    """Common interface of all carriers.

    Subclasses implement ``_act_basis``, ``weight``, ``bound``, ``basis`` and the
    JSON encoders of basis indices; ``centrals`` maps central tags to scalars.
    """

    carrier = "abstract"
    graded = False

    def __init__(self, kind, outer, truncation=None, strict=None, params=None):
        self.kind = AlgebraKind.parse(kind)
        self.outer = outer
        self.truncation = truncation
        self.strict = (truncation is not None) if strict is None else strict
        self.params = dict(params or {})
        self.centrals = {}
        self._cache = {}

    # -- generator actions

    def check_generator(self, g):
        validate(self.kind, g)
        if g not in self.outer:
            raise InvalidGenerator(f"{g.token} does not act on this {self.carrier} module")
        return g

    def act_basis(self, g, b):
        key = (g, b)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._act_basis(g, b)
            self._cache[key] = hit
        return hit

    def _act_basis(self, g, b):
        raise NotImplementedError

    def act_gen(self, g, terms):
        """Apply a generator to a raw ``{basis: coeff}`` dict."""
        acc = {}
        for b, c in terms.items():
            _add_into(acc, self.act_basis(g, b), c)
        return acc

    def apply(self, x, v):
        """Unchecked action of a Generator, LieElement or EnvElement on a Vec."""
        terms = v._terms if isinstance(v, Vec) else v
        if isinstance(x, Generator):
            self.check_generator(x)
            return Vec(self.act_gen(x, terms))
        if isinstance(x, LieElement):
            acc = {}
            for g, c in x.items():
                self.check_generator(g)
                _add_into(acc, self.act_gen(g, terms), c)
            return Vec(acc)
        if isinstance(x, EnvElement):
            acc = {}
            for mono, c in x.items():
                cur = terms
                for g in reversed(expand(mono)):
                    self.check_generator(g)
                    cur = self.act_gen(g, cur)
                    if not cur:
                        break
                _add_into(acc, cur, c)
            return Vec(acc)
        raise TypeError(f"cannot act with {type(x).__name__}")

    def act(self, x, v, strict=None):
        out = self.apply(x, v)
        strict = self.strict if strict is None else strict
        if strict and self.truncation is not None:
            for b in out._terms:
                if self.weight(b) > self.truncation:
                    raise BoundExceeded(
                        f"result has weight {self.weight(b)} beyond truncation {self.truncation}")
        return out

    # -- structure

    def weight(self, b):
        raise NotImplementedError

    def bound(self, b):
        """Every generator of degree > bound(b) annihilates b."""
        raise NotImplementedError

    def hbound(self, b):
        """Every h-mode of degree > hbound(b) annihilates b; None if no h-mode acts."""
        return self.bound(b)

    def basis(self, N=None):
        raise NotImplementedError

    def central_value(self, tag):
        return self.centrals.get(tag, ZERO)

    @property
    def level(self):
        return self.central_value(self.kind.level_tag)

    def vec_weights(self, v):
        return sorted({self.weight(b) for b in v._terms})

    def vec_bound(self, v):
        return max((self.bound(b) for b in v._terms), default=ZERO)

    def vec_hbound(self, v):
        vals = [k for k in (self.hbound(b) for b in v._terms) if k is not None]
        return max(vals) if vals else None

    def top_vector(self):
        """Distinguished generating vector (vacuum / highest weight / v0)."""
        return Vec.basis(self.basis(0)[0])

    # -- serialization

    def basis_to_json(self, b):
        raise NotImplementedError

    def basis_from_json(self, obj):
        raise NotImplementedError

    def vector_to_json(self, v):
        items = sorted(v._terms.items(), key=lambda kv: self.basis_sort_key(kv[0]))
        return {"terms": [{"basis": self.basis_to_json(b), "coeff": format_rational(c)}
                          for b, c in items]}

    def vector_from_json(self, obj):
        terms = {}
        for t in obj["terms"]:
            b = self.basis_from_json(t["basis"])
            terms[b] = terms.get(b, 0) + parse_rational(t["coeff"])
        return Vec(terms)

    def basis_sort_key(self, b):
        return (self.weight(b), repr(b))

    def describe(self):
        return {"carrier": self.carrier, "algebra": self.kind.value,
                "truncation": self.truncation,
                "centrals": {k: format_rational(v) for k, v in sorted(self.centrals.items())},
                "params": {k: _jsonable(v) for k, v in sorted(self.params.items())}}


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def act(M, x, v):
    return M.act(x, v)


# ---------------------------------------------------------------- one-dimensional

class CharacterModule(ModuleHandle):
    """One-dimensional module of a subalgebra, given by a character."""

    carrier = "Character"
    graded = True

    def __init__(self, kind, inner, chi, params=None):
        super().__init__(kind, inner, params=params)
        self.chi = {}
        for g, val in chi.items():
            validate(self.kind, g)
            if g not in inner:
                raise InconsistentCharacter(f"{g.token} is not in the subalgebra carrying the character")
            val = Fraction(val)
            if val:
                self.chi[g] = val
        self.centrals = {t: self.chi.get(Generator(t, 0), ZERO)
                         for t in self.kind.centrals if Generator(t, 0) in inner}
        nonc = [g for g in self.chi if not g.is_central]
        self._bound = max((g.degree for g in nonc), default=ZERO)
        self._bound = max(self._bound, ZERO)
        hs = [g.degree for g in nonc if g.tag == "h"]
        self._hbound = max(max(hs, default=ZERO), ZERO)
        self._check_consistency(inner)

    def _check_consistency(self, inner):
        nonc = [g for g in self.chi if not g.is_central]
        top2 = max((g.index for g in nonc), default=0)
        lows = [t for t in (inner.d_from2, inner.h_from2) if t is not None]
        lo2 = min(lows) if lows else 0
        if lo2 == NEG_INF:
            lo2 = -abs(top2) - 6
        extra_low = [g.index for g in inner.extra]
        lo2 = int(min([lo2] + extra_low))
        hi2 = top2 - lo2 + 6          # margin of 3 in degree
        gens = [g for g in _generators_between(self.kind, lo2, hi2) if g in inner]
        gens.extend(g for g in inner.extra if g not in gens)
        for x, y in itertools.combinations(gens, 2):
            val = sum((self.chi.get(g, ZERO) * c for g, c in bracket_terms(self.kind, x, y)), ZERO)
            if val:
                raise InconsistentCharacter(
                    f"character does not vanish on [{x.token}, {y.token}] (value {format_rational(val)})")

    def _act_basis(self, g, b):
        c = self.chi.get(g, ZERO)
        return {0: c} if c else {}

    def weight(self, b):
        return ZERO

    def bound(self, b):
        return self._bound

    def hbound(self, b):
        return self._hbound

    def basis(self, N=None):
        return [0]

    def basis_to_json(self, b):
        return 0

    def basis_from_json(self, obj):
        if obj != 0:
            raise ValueError("one-dimensional module has the single basis index 0")
        return 0


def _generators_between(kind, lo2, hi2):
    out = []
    h_par = 1 if kind is AlgebraKind.MIRROR else 0
    for i in range(lo2, hi2 + 1):
        if i % 2 == h_par:
            out.append(Generator("h", i))
        if i % 2 == 0:
            out.append(Generator("d", i))
    return out


# ---------------------------------------------------------------- induced

class InducedModule(ModuleHandle):
    """Ind_inner^outer(base): basis ``(mono, b)`` with mono a PBW monomial in outer \\ inner.

    ``weight_mode='degree'`` weighs a negative-degree factor by -degree and any other
    complement factor by 1.  ``weight_mode='position'`` uses the exponent-vector
    weight w(i) + w(k) of the h^i d^k basis (for induction from the subalgebra
    with d_{>=0} and h_{>=-n+1/2}).
    """

    carrier = "Induced"

    def __init__(self, base, outer, truncation=None, strict=None, weight_mode="degree",
                 params=None, carrier=None):
        super().__init__(base.kind, outer, truncation, strict, params)
        if carrier:
            self.carrier = carrier
        self.base = base
        self.inner = base.outer
        if not self.inner.issubset(outer):
            raise InvalidGenerator("base subalgebra is not contained in the outer algebra")
        self.weight_mode = weight_mode
        self.rewriter = Rewriter(self.kind, inner=self.inner, base_act=base.act_basis)
        self.centrals = dict(base.centrals)
        comp_nonneg = self._nonneg_complement()
        self._maxcomp = max((g.degree for g in comp_nonneg), default=None)
        self._maxcomp_h = max((g.degree for g in comp_nonneg if g.tag == "h"), default=None)
        self.graded = base.graded and weight_mode == "degree" and not comp_nonneg
        if weight_mode == "position":
            t = self.inner.h_from2
            if t is None or t == NEG_INF or self.inner.d_from2 != 0:
                raise InvalidGenerator("position weights need an inner subalgebra with d_{>=0}")
            # mirror: h_{-s-n+1/2} sits at position s, threshold 2(-n)+1
            self._n = (1 - int(t)) // 2 if self.kind is AlgebraKind.MIRROR else -int(t) // 2
        self._gen_cache = {}

    # complement generators
    def _in_complement(self, g):
        return g in self.outer and g not in self.inner

    def _nonneg_complement(self):
        out = []
        for tag, o_t, i_t in (("d", self.outer.d_from2, self.inner.d_from2),
                              ("h", self.outer.h_from2, self.inner.h_from2)):
            if o_t is None or i_t == NEG_INF:
                continue
            if i_t is None:
                raise InvalidGenerator(
                    f"outer algebra has {tag}-modes of every positive degree outside the inner one; "
                    "the induced module would not be restricted")
            start = 0 if o_t == NEG_INF else max(0, int(o_t))
            for idx in range(start, int(i_t)):
                g = Generator(tag, idx)
                try:
                    validate(self.kind, g)
                except InvalidGenerator:
                    continue
                if self._in_complement(g):
                    out.append(g)
        return out

    def gen_weight(self, g):
        if self.weight_mode == "position":
            if g.tag == "d":
                return Fraction(-g.index // 2)
            if self.kind is AlgebraKind.MIRROR:
                return Fraction(-g.index - 2 * self._n + 1, 2)
            return Fraction(-g.index - 2 * self._n, 2)
        if g.index < 0:
            return Fraction(-g.index, 2)
        return ONE

    def complement_generators(self, N):
        """Complement generators of weight <= N in canonical order."""
        key = N
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        out = []
        lo2 = -int(2 * N) - 4 * (abs(getattr(self, "_n", 0)) + 1)
        for tag, o_t, i_t in (("h", self.outer.h_from2, self.inner.h_from2),
                              ("d", self.outer.d_from2, self.inner.d_from2)):
            if o_t is None or i_t == NEG_INF:
                continue
            start = lo2 if o_t == NEG_INF else max(lo2, int(o_t))
            stop = int(i_t) if i_t is not None else 0
            for idx in range(start, stop):
                g = Generator(tag, idx)
                try:
                    validate(self.kind, g)
                except InvalidGenerator:
                    continue
                if self._in_complement(g) and 0 < self.gen_weight(g) <= N:
                    out.append(g)
        out.sort(key=Generator.sort_key)
        self._gen_cache[key] = out
        return out

    def monomials(self, N):
        """PBW monomials in complement generators of weight <= N."""
        gens = self.complement_generators(N)
        weights = [self.gen_weight(g) for g in gens]
        out = []

        def rec(pos, budget, acc):
            if pos == len(gens):
                out.append((tuple(acc), N - budget))
                return
            rec(pos + 1, budget, acc)
            w = weights[pos]
            e = 1
            while e * w <= budget:
                acc.append((gens[pos], e))
                rec(pos + 1, budget - e * w, acc)
                acc.pop()
                e += 1

        rec(0, Fraction(N), [])
        out.sort(key=lambda mw: (mw[1], [(g.sort_key(), e) for g, e in mw[0]]))
        return out

    def mono_weight(self, mono):
        return sum((self.gen_weight(g) * e for g, e in mono), ZERO)

    def basis(self, N=None):
        if N is None:
            N = self.truncation
        if N is None:
            raise BoundExceeded("basis enumeration needs a truncation")
        N = Fraction(N)
        out = []
        for mono, w in self.monomials(N):
            for b in self.base.basis(N - w):
                if w + self.base.weight(b) <= N:
                    out.append((mono, b))
        out.sort(key=self.basis_sort_key)
        return out

    def basis_sort_key(self, b):
        mono, bb = b
        return (self.weight(b), [(g.sort_key(), e) for g, e in mono],
                self.base.basis_sort_key(bb))

    def top_vector(self):
        return Vec.basis(((), self.base.top_vector().support()[0]))

    def embed(self, v):
        """Image of a base vector under v -> 1 (x) v."""
        return Vec({((), b): c for b, c in v._terms.items()})

    def _act_basis(self, g, b):
        mono, bb = b
        return self.rewriter.act_gen(g, mono, bb)

    def weight(self, b):
        mono, bb = b
        return self.mono_weight(mono) + self.base.weight(bb)

    def _degree_sum(self, mono):
        return sum((abs(g.degree) * e for g, e in mono), ZERO)

    def bound(self, b):
        mono, bb = b
        kb = self.base.bound(bb)
        if self._maxcomp is not None:
            kb = max(kb, self._maxcomp)
        return self._degree_sum(mono) + kb

    def hbound(self, b):
        mono, bb = b
        kb = self.base.hbound(bb)
        if self._maxcomp_h is not None:
            kb = self._maxcomp_h if kb is None else max(kb, self._maxcomp_h)
        if kb is None:
            return None
        return self._degree_sum(mono) + kb

    def basis_to_json(self, b):
        mono, bb = b
        return {"monomial": monomial_to_json(mono), "base": self.base.basis_to_json(bb)}

    def basis_from_json(self, obj):
        mono = monomial_from_json(obj["monomial"], self.kind)
        for g, _ in mono:
            if not self._in_complement(g):
                raise InvalidGenerator(f"{g.token} is not a complement generator")
        if list(mono) != sorted(mono, key=lambda ge: ge[0].sort_key()):
            raise ValueError("monomial factors must be in canonical order")
        return (mono, self.base.basis_from_json(obj["base"]))

    def describe(self):
        out = super().describe()
        out["inner"] = self.inner.to_json()
        out["outer"] = self.outer.to_json()
        out["base"] = self.base.describe()
        return out


def _chi_from(kind, chi):
    out = {}
    for k, v in chi.items():
        g = parse_generator(k, kind) if isinstance(k, str) else validate(kind, k)
        out[g] = parse_rational(v) if isinstance(v, str) else Fraction(v)
    return out


def build_character_induced(kind, inner, chi, outer=None, truncation=None, strict=None,
                            carrier=None, params=None):
    """Induce a one-dimensional character of ``inner`` up to ``outer`` (default: everything)."""
    kind = AlgebraKind.parse(kind)
    if truncation is not None and truncation < 0:
        raise ValueError("truncation must be non-negative")
    base = CharacterModule(kind, inner, _chi_from(kind, chi))
    outer = Subalgebra.full(kind) if outer is None else outer
    return InducedModule(base, outer, truncation, strict, params=params,
                         carrier=carrier or "CharacterInduced")


def build_fock(kind, level, mu=None, truncation=None, strict=None):
    """Heisenberg Fock module of level ``level``; twisted h_0 acts by ``mu``."""
    kind = AlgebraKind.parse(kind)
    level = Fraction(level)
    if not level:
        raise ZeroLevel("Fock module needs a nonzero level")
    chi = {Generator(kind.level_tag, 0): level}
    if kind is AlgebraKind.TWISTED:
        chi[h(0)] = Fraction(mu or 0)
    elif mu:
        raise InvalidGenerator("the mirror algebra has no zero mode h_0")
    inner = Subalgebra.heisenberg(kind, 0)
    params = {"level": level}
    if kind is AlgebraKind.TWISTED:
        params["mu"] = Fraction(mu or 0)
    return build_character_induced(kind, inner, chi, Subalgebra.heisenberg(kind),
                                   truncation, strict, carrier="Fock", params=params)


def build_verma_vir(kind, hw, c, truncation=None, strict=None):
    """Verma module over Vir with d_0 -> hw, c1 -> c."""
    kind = AlgebraKind.parse(kind)
    chi = {d(0): Fraction(hw), Generator("c1", 0): Fraction(c)}
    return build_character_induced(kind, Subalgebra.virasoro(kind, 0), chi,
                                   Subalgebra.virasoro(kind), truncation, strict,
                                   carrier="VermaVir", params={"h": Fraction(hw), "c": Fraction(c)})


def build_highest_weight(kind, hw, c, level, z=0, mu=0, truncation=None, strict=None):
    """Verma-type module over the full algebra induced from the non-negative part."""
    kind = AlgebraKind.parse(kind)
    chi = {d(0): hw, Generator("c1", 0): c}
    if kind is AlgebraKind.MIRROR:
        chi[Generator("c2", 0)] = level
    else:
        chi[Generator("c2", 0)] = z
        chi[Generator("c3", 0)] = level
        chi[h(0)] = mu
    inner = Subalgebra.dsub(kind, 0, 0)
    params = {"h": Fraction(hw), "c": Fraction(c), "level": Fraction(level)}
    return build_character_induced(kind, inner, chi, None, truncation, strict,
                                   carrier="Verma", params=params)


def build_semi_whittaker(kind, p, q, a, b, c, level, z=0, zprime=0, outer=None,
                         truncation=None, strict=None):
    """Induced module of semi-Whittaker type from the character on D^(p,q).

    Mirror: d_p..d_{p+q-1} -> a, h_{q+1/2}..h_{p+q-1/2} -> b.  Twisted: the inner
    algebra is D^(p,q+1) plus h_0 -> zprime, and h_{q+1}..h_{p+q} -> b.
    """
    kind = AlgebraKind.parse(kind)
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if len(a) != q or len(b) != p:
        raise ValueError("need q values a and p values b")
    if not Fraction(level):
        raise ZeroLevel("semi-Whittaker module needs a nonzero level")
    chi = {Generator("c1", 0): c}
    for i, val in enumerate(a):
        chi[d(p + i)] = val
    if kind is AlgebraKind.MIRROR:
        inner = Subalgebra.dsub(kind, p, q)
        chi[Generator("c2", 0)] = level
        for j, val in enumerate(b):
            chi[h(Fraction(2 * q + 2 * j + 1, 2))] = val
    else:
        inner = Subalgebra.dsub(kind, p, q + 1).with_extra(h(0))
        chi[Generator("c2", 0)] = z
        chi[Generator("c3", 0)] = level
        chi[h(0)] = zprime
        for j, val in enumerate(b):
            chi[h(q + 1 + j)] = val
    params = {"p": p, "q": q, "a": a, "b": b, "c": Fraction(c), "level": Fraction(level)}
    return build_character_induced(kind, inner, chi, outer, truncation, strict,
                                   carrier="SemiWhittaker", params=params)


def build_induced(base, n=None, truncation=None, strict=None):
    """Ind from the subalgebra carried by ``base`` (d_{>=0}, h_{>=-n+1/2}) to the full algebra.

    Basis elements are h^i d^k (x) b with w(i) + w(k) + weight(b) <= truncation.
    """
    inner = base.outer
    if n is not None:
        expect = Subalgebra.dsub(base.kind, 0, -n)
        if (inner.d_from2, inner.h_from2) != (expect.d_from2, expect.h_from2):
            raise InvalidGenerator("base does not carry the subalgebra with d_{>=0}, h_{>=-n+1/2}")
    return InducedModule(base, Subalgebra.full(base.kind), truncation, strict,
                         weight_mode="position", carrier="Induced")


# ---------------------------------------------------------------- polynomial carrier

class PolyModule(ModuleHandle):
    """Polynomials in x_1..x_n with the shift actions of the Heisenberg tail.

    Mirror: h_{i-1/2} f = lam_i f(x_i - 1), h_{-i+1/2} f = -l(i-1/2)/lam_i (x_i + a_i) f(x_i + 1).
    Twisted: the same with h_i, h_{-i} and coefficient -l i/lam_i; h_0 acts by lam0.
    """

    carrier = "Polynomial"

    def __init__(self, kind, n, level, lambdas, a, lam0=0, truncation=None, strict=None):
        kind = AlgebraKind.parse(kind)
        outer = Subalgebra.heisenberg(kind, -n)
        super().__init__(kind, outer, truncation, strict)
        self.n = int(n)
        self.ell = Fraction(level)
        if not self.ell:
            raise ZeroLevel("polynomial module needs a nonzero level")
        self.lambdas = [Fraction(x) for x in lambdas]
        self.a = [Fraction(x) for x in a]
        if len(self.lambdas) != n or len(self.a) != n:
            raise ValueError("need n values for lambda and a")
        if any(not x for x in self.lambdas):
            raise ZeroLambda("all lambda_i must be nonzero")
        self.lam0 = Fraction(lam0)
        self.centrals = {kind.level_tag: self.ell}
        self.params = {"n": n, "level": self.ell, "lambda": self.lambdas, "a": self.a}
        if kind is AlgebraKind.TWISTED:
            self.params["lambda0"] = self.lam0

    def _shift(self, alpha, i, s):
        """Monomial x^alpha with x_i replaced by x_i + s, as {exponents: coeff}."""
        e = alpha[i]
        out = {}
        for k in range(e + 1):
            c = comb(e, k) * (Fraction(s) ** (e - k))
            if c:
                nb = alpha[:i] + (k,) + alpha[i + 1:]
                out[nb] = out.get(nb, 0) + c
        return out

    def _act_basis(self, g, alpha):
        if g.is_central:
            return {alpha: self.ell} if g.tag == self.kind.level_tag else {}
        twisted = self.kind is AlgebraKind.TWISTED
        if twisted:
            if g.index == 0:
                return {alpha: self.lam0} if self.lam0 else {}
            r = g.index // 2
            pos, i = (r > 0), abs(r)
            coeff_down = Fraction(i)
        else:
            r2 = g.index
            pos = r2 > 0
            i = (r2 + 1) // 2 if pos else (1 - r2) // 2
            coeff_down = Fraction(2 * i - 1, 2)
        if i > self.n:
            return {}
        k = i - 1
        if pos:
            lam = self.lambdas[k]
            return {b: c * lam for b, c in self._shift(alpha, k, -1).items()}
        scale = -self.ell * coeff_down / self.lambdas[k]
        shifted = self._shift(alpha, k, 1)
        out = {}
        for b, c in shifted.items():
            up = b[:k] + (b[k] + 1,) + b[k + 1:]
            out[up] = out.get(up, 0) + c * scale
            if self.a[k]:
                out[b] = out.get(b, 0) + c * scale * self.a[k]
        return {b: c for b, c in out.items() if c}

    def weight(self, alpha):
        return Fraction(sum(alpha))

    def bound(self, alpha):
        return Fraction(self.n) if self.kind is AlgebraKind.TWISTED else Fraction(2 * self.n - 1, 2)

    def basis(self, N=None):
        if N is None:
            N = self.truncation
        if N is None:
            raise BoundExceeded("basis enumeration needs a truncation")
        N = int(math.floor(N))
        out = [t for t in itertools.product(range(N + 1), repeat=self.n) if sum(t) <= N]
        out.sort(key=lambda t: (sum(t), tuple(-x for x in t)))
        return out

    def basis_sort_key(self, b):
        return (sum(b), tuple(-x for x in b))

    def basis_to_json(self, b):
        return {"x": list(b)}

    def basis_from_json(self, obj):
        b = tuple(int(x) for x in obj["x"])
        if len(b) != self.n or any(x < 0 for x in b):
            raise ValueError("bad exponent vector")
        return b

    def top_vector(self):
        return Vec.basis((0,) * self.n)

    def poly_vec(self, coeffs):
        """Vec from ``{exponent tuple: coeff}``."""
        return Vec({tuple(k): Fraction(v) for k, v in coeffs.items()})


def build_poly_module(n, level, lambdas, a, kind=AlgebraKind.MIRROR, lam0=0,
                      truncation=None, strict=None):
    return PolyModule(kind, n, level, lambdas, a, lam0, truncation, strict)


# ---------------------------------------------------------------- Laurent carrier

class LaurentModule(ModuleHandle):
    """(t-1)^{-1} C[t, 1/t] with basis f_k = t^k/(t-1).

    h f_k = (k-1) f_k - f_{k-1} - f_{k-2} and e f_k = f_{k+1}, where
    h = t d/dt + 1/(t^2 (t-1)) and e = multiplication by t.
    Mirror structure over D^(0,0): d_0 = -h/2, h_{1/2} = e.
    Twisted structure over the twisted D^(0,0): d_0 = -h, h_1 = e, h_0 = zprime.
    """

    carrier = "LaurentOverPole"

    def __init__(self, kind, window=(-10, 10), c1=0, c2=1, level=None, z=0, zprime=0,
                 strict_window=False):
        kind = AlgebraKind.parse(kind)
        super().__init__(kind, Subalgebra.dsub(kind, 0, 0))
        self.window = (int(window[0]), int(window[1]))
        self.strict_window = strict_window
        if kind is AlgebraKind.MIRROR:
            if not Fraction(c2):
                raise ZeroLevel("c2 must be nonzero")
            self.centrals = {"c1": Fraction(c1), "c2": Fraction(c2)}
            self._d0_scale = Fraction(-1, 2)
            self._e_gen = h(Fraction(1, 2))
        else:
            if level is None or not Fraction(level):
                raise ZeroLevel("level must be nonzero")
            self.centrals = {"c1": Fraction(c1), "c2": Fraction(z), "c3": Fraction(level)}
            self._d0_scale = Fraction(-1)
            self._e_gen = h(1)
            self.zprime = Fraction(zprime)
        self.params = {"window": list(self.window),
                       **{k: v for k, v in self.centrals.items()}}
        if kind is AlgebraKind.TWISTED:
            self.params["zprime"] = self.zprime

    def _check(self, out):
        if self.strict_window:
            lo, hi = self.window
            for k in out:
                if not lo <= k <= hi:
                    raise WindowExceeded(f"f_{k} lies outside the window {self.window}")
        return out

    @staticmethod
    def h_op(k):
        return {k: Fraction(k - 1), k - 1: Fraction(-1), k - 2: Fraction(-1)} if k != 1 else \
            {k - 1: Fraction(-1), k - 2: Fraction(-1)}

    @staticmethod
    def e_op(k):
        return {k + 1: ONE}

    def _act_basis(self, g, k):
        if g.is_central:
            val = self.centrals.get(g.tag, ZERO)
            return {k: val} if val else {}
        if g == d(0):
            return self._check({b: c * self._d0_scale for b, c in self.h_op(k).items()})
        if g == self._e_gen:
            return self._check(self.e_op(k))
        if self.kind is AlgebraKind.TWISTED and g == h(0):
            return {k: self.zprime} if self.zprime else {}
        return {}

    def weight(self, k):
        return ZERO

    def bound(self, k):
        return self._e_gen.degree

    def basis(self, N=None):
        lo, hi = self.window
        return list(range(lo, hi + 1))

    def basis_sort_key(self, k):
        return (ZERO, k)

    def basis_to_json(self, k):
        return {"k": k}

    def basis_from_json(self, obj):
        return int(obj["k"])

    def top_vector(self):
        return Vec.basis(0)


def build_laurent_module(kind, window=(-10, 10), **scalars):
    return LaurentModule(kind, window, **scalars)


# ---------------------------------------------------------------- extensions and tensors

class VirTrivialExtend(ModuleHandle):
    """A Vir-module made into a module of the full algebra with all h-modes acting by 0."""

    carrier = "VirTrivialExtend"

    def __init__(self, U):
        super().__init__(U.kind, Subalgebra.full(U.kind), U.truncation, U.strict)
        self.U = U
        self.graded = U.graded
        self.centrals = {t: ZERO for t in self.kind.centrals}
        self.centrals["c1"] = U.central_value("c1")

    def _act_basis(self, g, b):
        if g.tag == "d" or g.tag == "c1":
            return self.U.act_basis(g, b)
        return {}

    def weight(self, b):
        return self.U.weight(b)

    def bound(self, b):
        return self.U.bound(b)

    def hbound(self, b):
        return None

    def basis(self, N=None):
        return self.U.basis(N)

    def basis_sort_key(self, b):
        return self.U.basis_sort_key(b)

    def basis_to_json(self, b):
        return self.U.basis_to_json(b)

    def basis_from_json(self, obj):
        return self.U.basis_from_json(obj)

    def top_vector(self):
        return self.U.top_vector()

    def describe(self):
        out = super().describe()
        out["base"] = self.U.describe()
        return out


def vir_trivial_extend(U):
    return VirTrivialExtend(U)


class TensorModule(ModuleHandle):
    """A (x) B with x(a (x) b) = xa (x) b + a (x) xb for every generator x."""

    carrier = "Tensor"

    def __init__(self, A, B, truncation=None, strict=None):
        if A.kind is not B.kind:
            raise KindMismatch("tensor factors must be modules over the same algebra")
        if truncation is None and A.truncation is not None and B.truncation is not None:
            truncation = max(A.truncation, B.truncation)
        super().__init__(A.kind, Subalgebra.full(A.kind), truncation, strict)
        self.A, self.B = A, B
        self.graded = A.graded and B.graded
        self.centrals = {t: A.central_value(t) + B.central_value(t) for t in self.kind.centrals}

    def _act_basis(self, g, pair):
        a, b = pair
        out = {}
        for a2, c in self.A.act_basis(g, a).items():
            out[(a2, b)] = out.get((a2, b), 0) + c
        for b2, c in self.B.act_basis(g, b).items():
            out[(a, b2)] = out.get((a, b2), 0) + c
        return {k: v for k, v in out.items() if v}

    def weight(self, pair):
        return self.A.weight(pair[0]) + self.B.weight(pair[1])

    def bound(self, pair):
        return max(self.A.bound(pair[0]), self.B.bound(pair[1]))

    def hbound(self, pair):
        vals = [k for k in (self.A.hbound(pair[0]), self.B.hbound(pair[1])) if k is not None]
        return max(vals) if vals else None

    def basis(self, N=None):
        if N is None:
            N = self.truncation
        if N is None:
            raise BoundExceeded("basis enumeration needs a truncation")
        N = Fraction(N)
        out = []
        for a in self.A.basis(N):
            wa = self.A.weight(a)
            for b in self.B.basis(N - wa):
                if wa + self.B.weight(b) <= N:
                    out.append((a, b))
        out.sort(key=self.basis_sort_key)
        return out

    def basis_sort_key(self, pair):
        return (self.weight(pair), self.A.basis_sort_key(pair[0]), self.B.basis_sort_key(pair[1]))

    def basis_to_json(self, pair):
        return {"left": self.A.basis_to_json(pair[0]), "right": self.B.basis_to_json(pair[1])}

    def basis_from_json(self, obj):
        return (self.A.basis_from_json(obj["left"]), self.B.basis_from_json(obj["right"]))

    def top_vector(self):
        a = self.A.top_vector().support()[0]
        b = self.B.top_vector().support()[0]
        return Vec.basis((a, b))

    def pure(self, u, w):
        """u (x) w for vectors of the two factors."""
        return Vec({(a, b): ca * cb for a, ca in u._terms.items() for b, cb in w._terms.items()})

    def describe(self):
        out = super().describe()
        out["left"] = self.A.describe()
        out["right"] = self.B.describe()
        return out


def build_tensor(A, B, truncation=None, strict=None):
    """A (x) B where A is a Vir-module extended trivially and B carries a Sugawara dressing."""
    if A.kind is not B.kind:
        raise KindMismatch("tensor factors must be modules over the same algebra")
    if not B.level:
        raise ZeroLevel("the Heisenberg-type factor needs a nonzero level")
    return TensorModule(A, B, truncation, strict)
