"""Declarative module descriptions (JSON) and their construction.

A document looks like::

    {"algebra": "mirror",
     "construction": {"type": "semi_whittaker", "p": 1, "q": 1,
                      "a": ["$a1"], "b": ["3"], "c": "1/2", "level": 1},
     "params": {"a1": "2"},
     "truncation": 6}

Strings of the form ``"$name"`` are replaced by ``params[name]`` anywhere in the
construction.  Nested constructions (``base``, ``left``, ``right``) inherit the
algebra and, unless they set their own, the truncation.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .algebra import AlgebraKind, Subalgebra, d, parse_generator, parse_rational
from .errors import HVError
from .modules import (build_character_induced, build_fock, build_highest_weight, build_induced,
                      build_laurent_module, build_poly_module, build_semi_whittaker,
                      build_tensor, build_verma_vir, vir_trivial_extend)
from .sugawara import sugawara_dress

__all__ = ["SpecError", "load_doc", "build_from_doc", "parse_subalgebra", "CONSTRUCTIONS"]


class SpecError(HVError, ValueError):
    """Malformed module description."""


def load_doc(source):
    """Parse a document from a path, a JSON string or an already-loaded dict."""
    if isinstance(source, dict):
        return source
    text = str(source)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise SpecError(f"cannot read module description {source!r}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"module description is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecError("module description must be a JSON object")
    return doc


def _subst(obj, params):
    if isinstance(obj, str) and obj.startswith("$"):
        key = obj[1:]
        if key not in params:
            raise SpecError(f"unknown parameter {obj!r}")
        return params[key]
    if isinstance(obj, list):
        return [_subst(x, params) for x in obj]
    if isinstance(obj, dict):
        return {k: _subst(v, params) for k, v in obj.items()}
    return obj


def _q(x, name="value"):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or x is None:
        raise SpecError(f"{name} must be a rational, got {x!r}")
    if isinstance(x, float):
        raise SpecError(f"{name}: floats are not accepted, write {x!r} as a string 'p/q'")
    try:
        return parse_rational(str(x))
    except (ValueError, ZeroDivisionError, HVError):
        raise SpecError(f"{name} must be a rational, got {x!r}") from None


def _int(x, name):
    q = _q(x, name)
    if q.denominator != 1:
        raise SpecError(f"{name} must be an integer, got {x!r}")
    return int(q)


def parse_subalgebra(kind, obj):
    """``"full"``, ``"virasoro"``, ``"heisenberg"``, ``{"dsub": [m, n]}``,
    ``{"virasoro": m}``, ``{"heisenberg": n}`` or the serialized form."""
    if isinstance(obj, str):
        named = {"full": Subalgebra.full, "virasoro": Subalgebra.virasoro,
                 "heisenberg": Subalgebra.heisenberg}
        if obj not in named:
            raise SpecError(f"unknown subalgebra {obj!r}")
        return named[obj](kind)
    if not isinstance(obj, dict):
        raise SpecError(f"bad subalgebra {obj!r}")
    if "dsub" in obj:
        m, n = obj["dsub"]
        sub = Subalgebra.dsub(kind, _int(m, "dsub m"), _int(n, "dsub n"))
    elif "virasoro" in obj:
        sub = Subalgebra.virasoro(kind, _int(obj["virasoro"], "virasoro"))
    elif "heisenberg" in obj:
        sub = Subalgebra.heisenberg(kind, _int(obj["heisenberg"], "heisenberg"))
    else:
        return Subalgebra.from_json(kind, obj)
    extra = [parse_generator(t, kind) for t in obj.get("extra", [])]
    return sub.with_extra(*extra) if extra else sub


def _get(c, key, default=None, required=False):
    if key not in c:
        if required:
            raise SpecError(f"construction {c.get('type')!r} needs field {key!r}")
        return default
    return c[key]


def _fock(kind, c, N):
    mu = _get(c, "mu")
    return build_fock(kind, _q(_get(c, "level", required=True), "level"),
                      None if mu is None else _q(mu, "mu"), truncation=N)


def _verma(kind, c, N):
    return build_verma_vir(kind, _q(_get(c, "hw", required=True), "hw"),
                           _q(_get(c, "c", required=True), "c"), truncation=N)


def _highest_weight(kind, c, N):
    return build_highest_weight(kind, _q(_get(c, "hw", required=True), "hw"),
                                _q(_get(c, "c", required=True), "c"),
                                _q(_get(c, "level", required=True), "level"),
                                z=_q(_get(c, "z", 0), "z"), mu=_q(_get(c, "mu", 0), "mu"),
                                truncation=N)


def _poly(kind, c, N):
    lambdas = [_q(x, "lambdas") for x in _get(c, "lambdas", required=True)]
    a = [_q(x, "a") for x in _get(c, "a", required=True)]
    n = _int(_get(c, "n", len(lambdas)), "n")
    return build_poly_module(n, _q(_get(c, "level", required=True), "level"), lambdas, a,
                             kind=kind, lam0=_q(_get(c, "lam0", 0), "lam0"), truncation=N)


def _laurent(kind, c, N):
    lo, hi = _get(c, "window", [-10, 10])
    scalars = {k: _q(c[k], k) for k in ("c1", "c2", "level", "z", "zprime") if k in c}
    return build_laurent_module(kind, (_int(lo, "window"), _int(hi, "window")),
                                strict_window=bool(c.get("strict_window", False)), **scalars)


def _character(kind, c, N):
    inner = parse_subalgebra(kind, _get(c, "inner", required=True))
    outer = c.get("outer")
    chi = {k: _q(v, f"chi[{k}]") for k, v in _get(c, "chi", {}).items()}
    return build_character_induced(kind, inner, chi,
                                   None if outer is None else parse_subalgebra(kind, outer),
                                   truncation=N)


def _semi_whittaker(kind, c, N):
    outer = c.get("outer")
    return build_semi_whittaker(
        kind, _int(_get(c, "p", required=True), "p"), _int(_get(c, "q", required=True), "q"),
        [_q(x, "a") for x in _get(c, "a", [])], [_q(x, "b") for x in _get(c, "b", [])],
        _q(_get(c, "c", 0), "c"), _q(_get(c, "level", required=True), "level"),
        z=_q(_get(c, "z", 0), "z"), zprime=_q(_get(c, "zprime", 0), "zprime"),
        outer=None if outer is None else parse_subalgebra(kind, outer), truncation=N)


def _induced(kind, c, N):
    base = _build(kind, _get(c, "base", required=True), N)
    n = c.get("n")
    return build_induced(base, None if n is None else _int(n, "n"), truncation=N)


def _vir_trivial(kind, c, N):
    return vir_trivial_extend(_build(kind, _get(c, "base", required=True), N))


def _sugawara(kind, c, N):
    return sugawara_dress(_build(kind, _get(c, "base", required=True), N),
                          z=_q(_get(c, "z", 0), "z"))


def _tensor(kind, c, N):
    A = _build(kind, _get(c, "left", required=True), N)
    B = _build(kind, _get(c, "right", required=True), N)
    # bare Virasoro / Heisenberg factors are extended in the obvious way
    if A.outer.h_from2 is None:
        A = vir_trivial_extend(A)
    if d(0) not in B.outer:
        B = sugawara_dress(B, z=_q(c.get("z", 0), "z"))
    return build_tensor(A, B, truncation=N)


CONSTRUCTIONS = {
    "fock": _fock, "verma": _verma, "highest_weight": _highest_weight, "poly": _poly,
    "laurent": _laurent, "character_induced": _character, "semi_whittaker": _semi_whittaker,
    "induced": _induced, "tensor": _tensor, "vir_trivial": _vir_trivial, "sugawara": _sugawara,
}


def _build(kind, c, N):
    if not isinstance(c, dict) or "type" not in c:
        raise SpecError("each construction needs a 'type'")
    fn = CONSTRUCTIONS.get(c["type"])
    if fn is None:
        raise SpecError(f"unknown construction type {c['type']!r}; known: {sorted(CONSTRUCTIONS)}")
    if "truncation" in c:
        N = None if c["truncation"] is None else _q(c["truncation"], "truncation")
    return fn(kind, c, N)


def build_from_doc(source, truncation=None):
    """Build a module handle; ``truncation`` overrides the document's value."""
    doc = load_doc(source)
    try:
        kind = AlgebraKind.parse(doc.get("algebra", "mirror"))
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    params = {k: _q(v, f"params[{k}]") for k, v in doc.get("params", {}).items()}
    construction = _subst(doc.get("construction"), params)
    N = doc.get("truncation") if truncation is None else truncation
    N = None if N is None else _q(N, "truncation")
    c = dict(construction) if isinstance(construction, dict) else construction
    if isinstance(c, dict):
        c.pop("truncation", None)
    return _build(kind, c, N)
