"""Sugawara operators on restricted Heisenberg modules and the shifted d'_n = d_n - L_n.

Mirror (half-integer modes), level l:
    L_n = 1/(2l) sum_k h_{n-k} h_k            (n != 0)
    L_0 = 1/(2l) sum_k h_{-|k|} h_{|k|} + 1/16
Twisted (integer modes), level l, parameter z:
    Lbar_n = 1/(2l) sum_k :h_{n-k} h_k: + (n+1) z/l h_n
with the lower index on the left inside :..:.  Both sums are evaluated by applying
the higher-index mode first, which keeps every intermediate vector inside the range
of the final result and cuts the sum to max(k, n-k) <= hbound(b).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .algebra import AlgebraKind, Generator, Subalgebra, d, format_rational
from .errors import InvalidGenerator, NonRestrictedVector, ZeroLevel
from .modules import ModuleHandle, Vec, _add_into
from .reports import VerificationReport

__all__ = [
    "sugawara_L", "sugawara_Lbar", "SugawaraDressed", "sugawara_dress", "d_prime",
    "sugawara_central_charge", "verify_sugawara_relations", "appendix_decomposition_check",
    "effective_range",
]

ZERO = Fraction(0)
SIXTEENTH = Fraction(1, 16)


def sugawara_central_charge(kind, level, z=0):
    kind = AlgebraKind.parse(kind)
    if kind is AlgebraKind.MIRROR:
        return Fraction(1)
    level = Fraction(level)
    if not level:
        raise ZeroLevel("level must be nonzero")
    return 1 - 12 * Fraction(z) ** 2 / level


def effective_range(M, n, b):
    """Twice-indices k2 of the modes h_k that can contribute to L_n on basis element b."""
    K = M.hbound(b)
    if K is None:
        return []
    if K == math.inf:
        raise NonRestrictedVector("no annihilation bound for this vector")
    lo2 = math.ceil(2 * (n - K))
    hi2 = math.floor(2 * K)
    parity = 1 if M.kind is AlgebraKind.MIRROR else 0
    return [k2 for k2 in range(lo2, hi2 + 1) if k2 % 2 == parity]


def _cache(M):
    c = getattr(M, "_sugawara_cache", None)
    if c is None:
        c = M._sugawara_cache = {}
    return c


def _L_basis(M, n, b, level, z):
    key = (n, b, level, z)
    cache = _cache(M)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out = {}
    n2 = 2 * n
    for k2 in effective_range(M, n, b):
        hi2, lo2 = max(k2, n2 - k2), min(k2, n2 - k2)
        first = M.act_basis(Generator("h", hi2), b)
        if not first:
            continue
        _add_into(out, M.act_gen(Generator("h", lo2), first), 1)
    scale = 1 / (2 * level)
    out = {k: v * scale for k, v in out.items()}
    if M.kind is AlgebraKind.MIRROR:
        if n == 0:
            _add_into(out, {b: SIXTEENTH}, 1)
    elif z:
        _add_into(out, M.act_basis(Generator("h", n2), b), (n + 1) * Fraction(z) / level)
    cache[key] = out
    return out


def _L_terms(M, n, terms, level, z):
    acc = {}
    for b, c in terms.items():
        _add_into(acc, _L_basis(M, n, b, level, z), c)
    return acc


def _resolve_level(M, level):
    level = M.level if level is None else Fraction(level)
    if not level:
        raise ZeroLevel("Sugawara operators need a nonzero level")
    return level


def sugawara_L(M, n, level, v):
    """Mirror Sugawara operator L_n applied to v (level None means the module's level)."""
    if M.kind is not AlgebraKind.MIRROR:
        raise InvalidGenerator("use sugawara_Lbar for the twisted algebra")
    level = _resolve_level(M, level)
    return Vec(_L_terms(M, int(n), v._terms, level, 0))


def sugawara_Lbar(M, n, level, z, v):
    """Twisted Sugawara operator Lbar_n applied to v."""
    if M.kind is not AlgebraKind.TWISTED:
        raise InvalidGenerator("use sugawara_L for the mirror algebra")
    level = _resolve_level(M, level)
    return Vec(_L_terms(M, int(n), v._terms, level, Fraction(z)))


def _module_z(M, z):
    if z is not None:
        return Fraction(z)
    if M.kind is AlgebraKind.TWISTED and Generator("c2", 0) in M.outer:
        return M.central_value("c2")
    return ZERO


class SugawaraDressed(ModuleHandle):
    """Heisenberg module made into a module of the full algebra via d_n -> L_n (or Lbar_n)."""

    carrier = "SugawaraDressed"

    def __init__(self, H, z=0):
        if H.outer.d_from2 is not None:
            raise InvalidGenerator("Sugawara dressing expects a Heisenberg-type module")
        super().__init__(H.kind, Subalgebra.full(H.kind), H.truncation, H.strict)
        self.H = H
        self.ell = _resolve_level(H, None)
        self.z = Fraction(z)
        if self.kind is AlgebraKind.MIRROR and self.z:
            raise InvalidGenerator("z only enters the twisted dressing")
        self.graded = H.graded
        self.c_sug = sugawara_central_charge(self.kind, self.ell, self.z)
        if self.kind is AlgebraKind.MIRROR:
            self.centrals = {"c1": Fraction(1), "c2": self.ell}
        else:
            self.centrals = {"c1": self.c_sug, "c2": self.z, "c3": self.ell}
        self.params = {"level": self.ell, "z": self.z}

    def _act_basis(self, g, b):
        if g.tag == "h" or g.tag == self.kind.level_tag:
            return self.H.act_basis(g, b)
        if g.tag == "d":
            return _L_basis(self.H, g.index // 2, b, self.ell, self.z)
        val = self.centrals.get(g.tag, ZERO)
        return {b: val} if val else {}

    def weight(self, b):
        return self.H.weight(b)

    def bound(self, b):
        K = self.H.bound(b)
        return max(K, 2 * K)

    def hbound(self, b):
        return self.H.hbound(b)

    def basis(self, N=None):
        return self.H.basis(N)

    def basis_sort_key(self, b):
        return self.H.basis_sort_key(b)

    def basis_to_json(self, b):
        return self.H.basis_to_json(b)

    def basis_from_json(self, obj):
        return self.H.basis_from_json(obj)

    def top_vector(self):
        return self.H.top_vector()

    def describe(self):
        out = super().describe()
        out["base"] = self.H.describe()
        return out


def sugawara_dress(H, z=0):
    return SugawaraDressed(H, z)


def d_prime(M, n, v, z=None):
    """d'_n v = d_n v - L_n v, with L the Sugawara operator of M's own h-action."""
    level = _resolve_level(M, None)
    z = _module_z(M, z) if M.kind is AlgebraKind.TWISTED else ZERO
    out = dict(M.act_gen(d(n), v._terms))
    _add_into(out, _L_terms(M, int(n), v._terms, level, z), -1)
    return Vec(out)


# ---------------------------------------------------------------- verification


class _Ops:
    def __init__(self, M, level, z):
        self.M, self.level, self.z = M, level, z

    def h(self, r2, t):
        return self.M.act_gen(Generator("h", r2), t)

    def L(self, n, t):
        return _L_terms(self.M, n, t, self.level, self.z)

    def d(self, n, t):
        return self.M.act_gen(d(n), t)

    def dp(self, n, t):
        out = dict(self.d(n, t))
        _add_into(out, self.L(n, t), -1)
        return out


def _comm(f, g, t):
    out = dict(f(g(t)))
    _add_into(out, g(f(t)), -1)
    return out


def _combo(*pairs):
    out = {}
    for coeff, terms in pairs:
        if coeff:
            _add_into(out, terms, coeff)
    return out


def _h_modes(kind, R):
    """Twice-indices of the h-modes with |r| <= R."""
    if kind is AlgebraKind.MIRROR:
        return [r2 for r2 in range(-2 * R + 1, 2 * R, 2)]
    return [2 * r for r in range(-R, R + 1)]


def _test_vectors(M, R, N=None):
    N = M.truncation if N is None else N
    if N is None:
        raise ValueError("verification needs a truncated module")
    return M.basis(N - 2 * R)


def _fail(report, M, identity, b, lhs, rhs):
    report.fail(identity=identity, vector=M.vector_to_json(Vec.basis(b)),
                lhs=M.vector_to_json(Vec(lhs)), rhs=M.vector_to_json(Vec(rhs)))


def _check_dprime(report, M, ops, R, vectors, c_shift):
    """[d'_n, h_r] = 0 and Virasoro for d' with central charge c_shift."""
    modes = _h_modes(M.kind, R)
    for b in vectors:
        t = {b: Fraction(1)}
        for n in range(-R, R + 1):
            for r2 in modes:
                lhs = _comm(lambda x: ops.dp(n, x), lambda x: ops.h(r2, x), t)
                report.tick()
                if lhs:
                    _fail(report, M, f"[d'_{n}, h_{format_rational(Fraction(r2, 2))}] = 0", b, lhs, {})
                    return
        for m in range(-R, R + 1):
            for n in range(m + 1, R + 1):
                lhs = _comm(lambda x: ops.dp(m, x), lambda x: ops.dp(n, x), t)
                rhs = _combo((m - n, ops.dp(m + n, t)),
                             (Fraction(m ** 3 - m, 12) * c_shift if m + n == 0 else 0, t))
                report.tick()
                if lhs != rhs:
                    _fail(report, M, f"[d'_{m}, d'_{n}] Virasoro", b, lhs, rhs)
                    return


def verify_sugawara_relations(M, R, z=None, N=None):
    """Check the Sugawara mode relations on every basis vector of weight <= N - 2R.

    (i)  [L_n, h_r] = -r h_{n+r} (twisted: plus delta_{n+r,0}(n^2+n) z)
    (ii) Virasoro relations for L with the Sugawara central charge
    (iii) when M carries its own d-action: [d'_n, h_r] = 0 and Virasoro for d'
    """
    level = _resolve_level(M, None)
    twisted = M.kind is AlgebraKind.TWISTED
    z = _module_z(M, z) if twisted else ZERO
    c_sug = sugawara_central_charge(M.kind, level, z)
    ops = _Ops(M, level, z)
    report = VerificationReport()
    report.info = {"central_charge": format_rational(c_sug), "level": format_rational(level)}
    vectors = _test_vectors(M, R, N)
    modes = _h_modes(M.kind, R)
    for b in vectors:
        t = {b: Fraction(1)}
        for n in range(-R, R + 1):
            for r2 in modes:
                lhs = _comm(lambda x: ops.L(n, x), lambda x: ops.h(r2, x), t)
                anomaly = (n * n + n) * z if (twisted and 2 * n + r2 == 0) else 0
                rhs = _combo((Fraction(-r2, 2), ops.h(2 * n + r2, t)), (anomaly, t))
                report.tick()
                if lhs != rhs:
                    _fail(report, M, f"[L_{n}, h_{format_rational(Fraction(r2, 2))}]", b, lhs, rhs)
                    return report
        for m in range(-R, R + 1):
            for n in range(m + 1, R + 1):
                lhs = _comm(lambda x: ops.L(m, x), lambda x: ops.L(n, x), t)
                rhs = _combo((m - n, ops.L(m + n, t)),
                             (Fraction(m ** 3 - m, 12) * c_sug if m + n == 0 else 0, t))
                report.tick()
                if lhs != rhs:
                    _fail(report, M, f"[L_{m}, L_{n}] Virasoro", b, lhs, rhs)
                    return report
    if d(0) in M.outer:
        c_shift = M.central_value("c1") - c_sug
        report.info["dprime_central_charge"] = format_rational(c_shift)
        _check_dprime(report, M, ops, R, vectors, c_shift)
    return report


def appendix_decomposition_check(M, R, N=None):
    """d_n = L^(1)_n + L_n with L^(1) commuting with h and Virasoro of charge c - c_sug."""
    if d(0) not in M.outer:
        raise InvalidGenerator("the decomposition check needs a module with a d-action")
    level = _resolve_level(M, None)
    z = _module_z(M, None) if M.kind is AlgebraKind.TWISTED else ZERO
    c_sug = sugawara_central_charge(M.kind, level, z)
    c_shift = M.central_value("c1") - c_sug
    report = VerificationReport()
    report.info = {"central_charge": format_rational(c_shift)}
    _check_dprime(report, M, _Ops(M, level, z), R, _test_vectors(M, R, N), c_shift)
    return report
