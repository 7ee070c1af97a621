"""Exact diagnostics on truncated modules: annihilators, the invariants n_S, m_S, r_S
(n_M, r_M in the twisted case), deg/deg' on induced modules, degree-lowering lemma
checks, injectivity and local nilpotency probes.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraKind, Generator, NEG_INF, Subalgebra, d, format_rational, h
from .errors import BoundExceeded, HypothesisViolated, InvalidGenerator, ZeroLevel, ZeroVector
from .linalg import Echelon, kernel, kernel_sparse
from .modules import InducedModule, ModuleHandle, Vec, _add_into, build_induced
from .pbw import ExpVec, pair_key, pair_key_prime
from .reports import VerificationReport
from .sugawara import _L_terms, _module_z, _resolve_level

__all__ = [
    "kernel", "DPrime", "apply_op", "annihilator", "invariant", "InvariantReport",
    "injectivity_probe", "local_nilpotency_probe", "action_matrix",
    "split_monomial", "support", "deg", "deg_prime", "check_degree_lemma", "LEMMAS",
]

ZERO = Fraction(0)
NEG_INF_LABEL = "−∞"


@dataclass(frozen=True)
class DPrime:
    """The operator d'_n = d_n - L_n (or d_n - Lbar_n)."""
    n: int

    @property
    def degree(self):
        return Fraction(self.n)

    @property
    def token(self):
        return f"d':{self.n}"


def _op_token(op):
    return op.token


def apply_op(M, op, terms):
    """Apply a Generator or DPrime to a raw term dict."""
    if isinstance(op, DPrime):
        level = _resolve_level(M, None)
        z = _module_z(M, None) if M.kind is AlgebraKind.TWISTED else ZERO
        out = dict(M.act_gen(d(op.n), terms))
        _add_into(out, _L_terms(M, op.n, terms, level, z), -1)
        return out
    return M.act_gen(op, terms)


# ---------------------------------------------------------------- joint kernels

class _Scanner:
    """Joint kernel of a growing operator family on span(vectors).

    Homogeneous vectors of graded modules are grouped by weight so each slice is
    eliminated separately.
    """

    def __init__(self, M, vectors):
        self.M = M
        groups = defaultdict(list)
        for vec in vectors:
            key = None
            if M.graded:
                ws = M.vec_weights(Vec(vec))
                key = ws[0] if len(ws) == 1 else None
            groups[key].append(vec)
        self.groups = list(groups.values())
        self.echelons = [Echelon() for _ in self.groups]

    def add(self, op):
        for vecs, ech in zip(self.groups, self.echelons):
            rows = defaultdict(dict)
            for j, vec in enumerate(vecs):
                for t, c in apply_op(self.M, op, vec).items():
                    rows[t][j] = c
            for row in rows.values():
                ech.add(row)

    @property
    def nullity(self):
        return sum(len(v) - e.rank for v, e in zip(self.groups, self.echelons))

    def kernel(self):
        out = []
        for vecs, ech in zip(self.groups, self.echelons):
            for x in ech.null_space(len(vecs)):
                acc = {}
                for j, c in x.items():
                    _add_into(acc, vecs[j], c)
                if acc:
                    out.append(acc)
        return out


def _basis_vectors(M, N):
    return [{b: Fraction(1)} for b in M.basis(N)]


def _max_bound(M, vectors, kind="all"):
    best = None
    for vec in vectors:
        for b in vec:
            k = M.bound(b) if kind == "all" else M.hbound(b)
            if k is not None and (best is None or k > best):
                best = k
    return ZERO if best is None else best


def _family(M, spec, r, vectors):
    """Operators of a filter family (non-central part) that can act nontrivially."""
    tag = spec
    if tag == "h":
        K = _max_bound(M, vectors, "h")
        step = Fraction(1, 2) if M.kind is AlgebraKind.MIRROR else ZERO
        out, x = [], Fraction(r) + step
        while x <= K:
            out.append(h(x))
            x += 1
        return out
    if tag == "vir":
        K = _max_bound(M, vectors)
        return [d(m) for m in range(int(r), int(math.floor(K)) + 1)]
    if tag == "dprime":
        K = max(_max_bound(M, vectors), 2 * _max_bound(M, vectors, "h"))
        return [DPrime(m) for m in range(int(r), int(math.floor(K)) + 1)]
    raise ValueError(f"unknown generator family {spec!r}")


def annihilator(M, family, r, N=None, within=None):
    """Joint kernel of a generator family on the truncated module (or on ``within``).

    ``family`` is ``"h"`` (h_{r+1/2+i} mirror, h_{r+i} twisted), ``"vir"`` (d_{r+i})
    or ``"dprime"`` (d'_p, p >= r).  Returns a list of Vec spanning the kernel.
    """
    N = M.truncation if N is None else N
    vectors = within if within is not None else _basis_vectors(M, N)
    vectors = [v._terms if isinstance(v, Vec) else v for v in vectors]
    sc = _Scanner(M, vectors)
    for op in _family(M, family, r, vectors):
        sc.add(op)
    return [Vec(v) for v in sc.kernel()]


@dataclass
class InvariantReport:
    name: str
    value: object
    witness: list = field(default_factory=list)
    truncation: object = None
    scan_bound: int = 0
    flag: str | None = None

    def to_json(self, M=None):
        wit = [M.vector_to_json(w) for w in self.witness] if M is not None else len(self.witness)
        return {"name": self.name, "value": self.value, "witness": wit,
                "witness_dim": len(self.witness),
                "truncation": None if self.truncation is None else format_rational(Fraction(self.truncation)),
                "scan_bound": self.scan_bound, "flag": self.flag}


def _scan_down(M, family, vectors, B):
    """Least r in [-B, B] with nonzero joint kernel of family(r), scanning downward."""
    sc = _Scanner(M, vectors)
    ops_top = _family(M, family, B, vectors)
    for op in ops_top:
        sc.add(op)
    if sc.nullity == 0:
        return f"undetermined ≥ {B + 1}", [], "empty at the scan ceiling"
    last = sc.kernel()
    r = B
    while r > -B:
        nxt = r - 1
        for op in _family(M, family, nxt, vectors):
            if op not in ops_top:
                sc.add(op)
                ops_top.append(op)
        if sc.nullity == 0:
            return r, last, None
        last = sc.kernel()
        r = nxt
    return NEG_INF_LABEL, last, f"nonzero at the scan floor -{B}"


def invariant(M, which, N=None, B=8):
    """Compute n_S, m_S, r_S (mirror) or n_M, r_M (twisted) within the truncation."""
    N = M.truncation if N is None else N
    twisted = M.kind is AlgebraKind.TWISTED
    valid = ("n_M", "r_M") if twisted else ("n_S", "m_S", "r_S")
    if which not in valid:
        raise ValueError(f"{which} is not defined for the {M.kind.value} algebra; use {valid}")
    if which.startswith("r"):
        _resolve_level(M, None)
    vectors = _basis_vectors(M, N)
    val, W0, flag = _scan_down(M, "h", vectors, B)
    if which in ("n_S", "n_M") or not isinstance(val, int):
        if which in ("n_S", "n_M"):
            return InvariantReport(which, val, [Vec(w) for w in W0], N, B, flag)
        return InvariantReport(which, "undetermined", [], N, B, f"n undetermined: {val}")
    base = W0
    if which == "m_S" or which == "r_S":
        mval, U0, mflag = _scan_down(M, "vir", W0, B)
        if which == "m_S":
            return InvariantReport(which, mval, [Vec(w) for w in U0], N, B, mflag)
        if not isinstance(mval, int):
            return InvariantReport(which, "undetermined", [], N, B, f"m_S undetermined: {mval}")
        base = U0
    rval, Y, rflag = _scan_down(M, "dprime", base, B)
    return InvariantReport(which, rval, [Vec(w) for w in Y], N, B, rflag)


# ---------------------------------------------------------------- single-operator probes

def injectivity_probe(M, op, N=None):
    """Kernel of a single operator on the truncated module, slice by slice."""
    N = M.truncation if N is None else N
    vectors = _basis_vectors(M, N)
    sc = _Scanner(M, vectors)
    sc.add(op)
    ker = [Vec(v) for v in sc.kernel()]
    return {"operator": _op_token(op), "injective_on_scanned_slices": not ker,
            "kernel_witness": [M.vector_to_json(v) for v in ker],
            "scanned": len(vectors),
            "truncation": None if N is None else format_rational(Fraction(N))}


def local_nilpotency_probe(M, op, v, maxpow):
    """Least p <= maxpow with op^p v = 0."""
    if not v:
        return {"nilpotent_within_bound": True, "power": 0}
    cur = v._terms
    for p in range(1, maxpow + 1):
        cur = apply_op(M, op, cur)
        if M.strict and M.truncation is not None:
            for b in cur:
                if M.weight(b) > M.truncation:
                    raise BoundExceeded(f"{_op_token(op)}^{p} v leaves the truncation")
        if not cur:
            return {"nilpotent_within_bound": True, "power": p}
    return {"nilpotent_within_bound": False, "power": None}


def action_matrix(M, op, N=None):
    """Matrix of an operator on basis(N); rows are the image basis elements encountered."""
    N = M.truncation if N is None else N
    cols = M.basis(N)
    row_index = {}
    entries = []
    for j, b in enumerate(cols):
        for t, c in sorted(apply_op(M, op, {b: Fraction(1)}).items(),
                           key=lambda kv: M.basis_sort_key(kv[0])):
            i = row_index.setdefault(t, len(row_index))
            entries.append([i, j, format_rational(c)])
    rows = sorted(row_index, key=row_index.get)
    return {"rows": len(rows), "cols": len(cols), "entries": entries,
            "row_basis": [M.basis_to_json(b) for b in rows],
            "col_basis": [M.basis_to_json(b) for b in cols]}


# ---------------------------------------------------------------- deg and deg'

def _induced_n(M):
    if not isinstance(M, InducedModule):
        raise InvalidGenerator("deg is defined on induced modules")
    inner = M.inner
    t = inner.h_from2
    if inner.d_from2 != 0 or t is None or t == NEG_INF:
        raise InvalidGenerator("deg needs induction from the subalgebra with d_{>=0}, h_{>=-n+1/2}")
    if M.kind is AlgebraKind.MIRROR:
        return (1 - int(t)) // 2
    return -int(t) // 2


def split_monomial(M, mono):
    """(i, k) with h^i d^k = mono: h_{-s-n+1/2} sits at position s, d_{-s} at s."""
    n = _induced_n(M)
    hi, dk = {}, {}
    for g, e in mono:
        if g.tag == "h":
            s = (-g.index + 1) // 2 - n if M.kind is AlgebraKind.MIRROR else -g.index // 2 - n
            hi[s] = e
        else:
            dk[-g.index // 2] = e
    return ExpVec(hi), ExpVec(dk)


def support(M, v):
    """supp(v): the pairs (i, k) whose V-component is nonzero."""
    comps = defaultdict(dict)
    for (mono, b), c in v._terms.items():
        comps[mono][b] = c
    return {split_monomial(M, mono): Vec(vec) for mono, vec in comps.items() if vec}


def deg(M, v):
    if not v:
        raise ZeroVector("deg of the zero vector")
    return max(support(M, v), key=pair_key)


def deg_prime(M, v):
    if not v:
        raise ZeroVector("deg' of the zero vector")
    return max(support(M, v), key=pair_key_prime)


# ---------------------------------------------------------------- degree-lowering lemmas

LEMMAS = ("h-shift", "d-shift", "h-shift-prime", "d-shift-prime")


def _injective_on(V, op, N):
    vectors = _basis_vectors(V, N)
    sc = _Scanner(V, vectors)
    sc.add(op)
    return sc.nullity == 0


def _kills(V, ops, N):
    for b in V.basis(N):
        for op in ops:
            if apply_op(V, op, {b: Fraction(1)}):
                return op
    return None


def _check_hypotheses(which, V, n, k, l, NV):
    if V.kind is not AlgebraKind.MIRROR:
        raise HypothesisViolated("the degree lemmas are stated for the mirror algebra")
    if not V.level:
        raise HypothesisViolated("level of V must be nonzero")
    half = Fraction(1, 2)
    vecs = _basis_vectors(V, NV)
    kmax = _max_bound(V, vecs, "h")
    dmax = _max_bound(V, vecs)
    if which in ("h-shift", "d-shift") and k != n:
        raise HypothesisViolated(f"this lemma needs k = n (got k={k}, n={n})")
    if which == "h-shift-prime" and not (k >= n and k + n >= 2):
        raise HypothesisViolated("needs k >= n and k + n >= 2")
    if which == "d-shift-prime" and not (k > n and k + n >= 2):
        raise HypothesisViolated("needs k > n and k + n >= 2")
    if not _injective_on(V, h(k - half), NV):
        raise HypothesisViolated(f"h_{{{format_rational(k - half)}}} is not injective on V")
    bad = _kills(V, [h(i - half) for i in range(k + 1, int(math.floor(kmax + half)) + 2)], NV)
    if bad is not None:
        raise HypothesisViolated(f"{bad.token} does not annihilate V")
    if which == "d-shift":
        if l < 2 * n:
            raise HypothesisViolated("needs l >= 2n")
        if not _injective_on(V, d(l), NV):
            raise HypothesisViolated(f"d_{l} is not injective on V")
        bad = _kills(V, [d(j) for j in range(l + 1, int(dmax) + 2)], NV)
        if bad is not None:
            raise HypothesisViolated(f"{bad.token} does not annihilate V")
    if which == "d-shift-prime":
        bad = _kills(V, [d(j) for j in range(k + n, int(dmax) + 2)], NV)
        if bad is not None:
            raise HypothesisViolated(f"{bad.token} does not annihilate V")


def _shape_ok(which, pair):
    i, j = pair
    if which == "h-shift":
        return not i.is_zero()
    if which == "d-shift":
        return i.is_zero() and not j.is_zero()
    if which == "h-shift-prime":
        return not j.is_zero()
    return j.is_zero() and not i.is_zero()


def _rand_coeff(rng):
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))


def _sample(rng, which, Ind, cands, by_pair, keyf):
    pairs = [p for p in by_pair if _shape_ok(which, p)]
    top = rng.choice(pairs)
    tk = keyf(top)
    lower = [p for p in by_pair if keyf(p) < tk]
    if which == "d-shift-prime" and rng.random() < 0.5:
        # bias towards the second case: same total weight, small h-weight gap
        wi, q = top[0].weight, top[0].min_support()
        special = [p for p in lower if p[0].weight + p[1].weight == wi
                   and wi - q <= p[0].weight < wi]
        if special:
            lower = special + special + lower
    terms = {}

    def put(pair):
        elems = by_pair[pair]
        for b in rng.sample(elems, min(len(elems), rng.randint(1, 2))):
            terms[b] = terms.get(b, 0) + _rand_coeff(rng)

    put(top)
    for _ in range(rng.randint(0, 4) if lower else 0):
        put(rng.choice(lower))
    v = Vec(terms)
    return v, top


def check_degree_lemma(which, base, samples=50, seed=0, N=6, k=None, l=None, NV=4):
    """Sample v in Ind(V) \\ V of the required shape and compare deg/deg' after the shift.

    ``which``: ``h-shift`` (apply h_{p+n-1/2}, drop eps_p from the h-part),
    ``d-shift`` (d_{q+l}, drop eps_q from the d-part), ``h-shift-prime``
    (h_{p+k-1/2}, deg'), ``d-shift-prime`` (d_{q+k+n-1} or, in the second case,
    h_{k+t-1/2} after removing the top-weight pure-h terms).
    """
    if which not in LEMMAS:
        raise ValueError(f"unknown lemma {which!r}; expected one of {LEMMAS}")
    inner = base.outer
    if inner.d_from2 != 0 or inner.h_from2 is None or inner.h_from2 == NEG_INF:
        raise HypothesisViolated("V must be a module over the subalgebra with d_{>=0}, h_{>=-n+1/2}")
    n = (1 - int(inner.h_from2)) // 2
    k = n if k is None else int(k)
    l = 2 * n if l is None else int(l)
    _check_hypotheses(which, base, n, k, l, NV)

    Ind = build_induced(base, n, truncation=N)
    rng = random.Random(seed)
    by_pair = defaultdict(list)
    for b in Ind.basis(N):
        if base.weight(b[1]) <= NV:
            by_pair[split_monomial(Ind, b[0])].append(b)
    primed = which.endswith("prime")
    keyf = pair_key_prime if primed else pair_key
    degf = deg_prime if primed else deg
    half = Fraction(1, 2)
    report = VerificationReport()
    cases = {"1": 0, "2": 0}
    for _ in range(samples):
        v, top = _sample(rng, which, Ind, None, by_pair, keyf)
        if not v or degf(Ind, v) != top:
            continue
        i, j = top
        if which == "h-shift":
            p = i.min_support()
            op, expect = h(p + n - half), (i - ExpVec.eps(p), j)
        elif which == "d-shift":
            q = j.min_support()
            op, expect = d(q + l), (i, j - ExpVec.eps(q))
        elif which == "h-shift-prime":
            p = j.min_support()
            op, expect = h(p + k - half), (i, j - ExpVec.eps(p))
        else:
            q = i.min_support()
            wi = i.weight
            supp = support(Ind, v)
            second = any(a.weight + b.weight == wi and wi - q <= a.weight < wi for a, b in supp)
            if not second:
                cases["1"] += 1
                op, expect = d(q + k + n - 1), (i - ExpVec.eps(q), ExpVec())
            else:
                cases["2"] += 1
                vp = Vec({bb: c for bb, c in v._terms.items()
                          if not (split_monomial(Ind, bb[0])[1].is_zero()
                                  and split_monomial(Ind, bb[0])[0].weight == wi)})
                ks, ls = deg_prime(Ind, vp)
                t = ls.min_support()
                op, expect = h(k + t - half), (ks, ls - ExpVec.eps(t))
        out = Ind.apply(op, v)
        report.tick()
        got = degf(Ind, out) if out else None
        if got != expect:
            report.fail(lemma=which, vector=Ind.vector_to_json(v), operator=op.token,
                        expected=_pair_json(expect),
                        got=None if got is None else _pair_json(got))
            break
    report.info = {"n": n, "k": k, "l": l, "samples": samples, "seed": seed,
                   "truncation": N}
    if which == "d-shift-prime":
        report.info["cases"] = cases
    return report


def _pair_json(pair):
    return [list(pair[0]), list(pair[1])]
