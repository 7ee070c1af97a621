"""Independent reference computations (sympy) used to derive frozen test values.

Nothing here imports the rewriting engine or module code; brackets are typed in
from the defining relations and everything else is built on top of them.
"""

from __future__ import annotations

import sympy as sp

R = sp.Rational


# generators are (tag, index) with index a sympy Rational; centrals have index 0
def oracle_bracket(kind, x, y):
    """Defining relations, written out directly."""
    (a, m), (b, n) = x, y
    if a.startswith("c") or b.startswith("c"):
        return {}
    if a == "h" and b == "d":
        return {g: -c for g, c in oracle_bracket(kind, y, x).items()}
    out = {}
    if a == "d" and b == "d":
        if m != n:
            out[("d", m + n)] = m - n
        if m + n == 0 and m ** 3 - m:
            out[("c1", 0)] = R(m ** 3 - m, 12)
    elif a == "d" and b == "h":
        if n:
            out[("h", m + n)] = -n
        if kind == "twisted" and m + n == 0 and m ** 2 + m:
            out[("c2", 0)] = m ** 2 + m
    else:
        if m + n == 0 and m:
            out[("c2" if kind == "mirror" else "c3", 0)] = m
    return out


def _key(g):
    tag, idx = g
    return ({"c1": 0, "c2": 0, "c3": 0, "h": 1, "d": 2}[tag], tag, idx)


def naive_normal_form(kind, word):
    """Bubble-sort rewriting with no memoization: {tuple of generators: coeff}."""
    result = {}
    stack = [(R(1), tuple(word))]
    while stack:
        c, w = stack.pop()
        for i in range(len(w) - 1):
            if _key(w[i]) > _key(w[i + 1]):
                stack.append((c, w[:i] + (w[i + 1], w[i]) + w[i + 2:]))
                for g, cg in oracle_bracket(kind, w[i], w[i + 1]).items():
                    stack.append((c * cg, w[:i] + (g,) + w[i + 2:]))
                break
        else:
            result[w] = result.get(w, 0) + c
    return {w: c for w, c in result.items() if c}


class PolyFock:
    """Heisenberg Fock space realized on sympy polynomials.

    Mirror: h_{-s+1/2} multiplies by x_s, h_{s-1/2} is l(s-1/2) d/dx_s.
    Twisted: h_{-s} multiplies by x_s, h_s is l s d/dx_s, h_0 is mu.
    """

    def __init__(self, kind, level, nvars=30, mu=0):
        self.kind, self.l, self.mu = kind, R(level), R(mu)
        self.x = sp.symbols(f"x1:{nvars + 1}")
        self.shift = R(1, 2) if kind == "mirror" else 0

    def pos(self, r):
        return int(abs(r) + self.shift)

    def h(self, r, f):
        r = R(r)
        if r == 0:
            return sp.expand(self.mu * f)
        p = self.pos(r)
        if p > len(self.x):
            if r > 0:
                return sp.Integer(0)
            raise ValueError("oracle has too few variables")
        xs = self.x[p - 1]
        if r < 0:
            return sp.expand(xs * f)
        return sp.expand(self.l * r * sp.diff(f, xs))

    def sugawara(self, n, f, z=0, K=12):
        """L_n (mirror) or Lbar_n (twisted) with annihilators placed on the right."""
        z = R(z)
        ks = [R(2 * j + 1, 2) for j in range(-K, K)] if self.kind == "mirror" \
            else [R(j) for j in range(-K, K + 1)]
        acc = 0
        for k in ks:
            a, b = n - k, k
            if a > b:
                a, b = b, a
            acc += self.h(a, self.h(b, f))
        acc = acc / (2 * self.l)
        if self.kind == "mirror" and n == 0:
            acc += R(1, 16) * f
        if self.kind == "twisted":
            acc += (n + 1) * z / self.l * self.h(n, f)
        return sp.expand(acc)


def laurent_h(k):
    """h . t^k/(t-1) = t d/dt f + f/(t^2 (t-1)), re-expanded in f_j = t^j/(t-1)."""
    t = sp.symbols("t")
    f = t ** k / (t - 1)
    g = sp.together(t * sp.diff(f, t) + f / (t ** 2 * (t - 1)))
    num = sp.expand(sp.cancel(g * (t - 1)))
    shift = abs(k) + 4
    poly = sp.expand(sp.cancel(num * t ** shift))
    out = {}
    for (e,), c in sp.Poly(poly, t).terms():
        out[e - shift] = R(c)
    return out


def shift_poly(f, var, s):
    return sp.expand(f.subs(var, var + s))
