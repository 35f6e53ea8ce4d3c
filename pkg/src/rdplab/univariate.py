"""Dense univariate polynomials over a GF (coefficient lists, constant term first)."""

from __future__ import annotations


class ExtensionNeeded(ArithmeticError):
    """Roots exist only in a proper extension of the working field."""

    def __init__(self, degree, msg=""):
        super().__init__(msg or f"roots need an extension of degree {degree}")
        self.degree = degree


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a):
    return len(a) - 1


def add(F, a, b):
    n = max(len(a), len(b))
    return trim([F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def sub(F, a, b):
    n = max(len(a), len(b))
    return trim([F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F, a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a)
    inv = F.inv(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = F.mul(a[-1], inv)
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = F.sub(a[s + i], F.mul(c, y))
        a = trim(a)
    return trim(q), a


def monic(F, a):
    a = trim(a)
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def gcd(F, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def evaluate(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def powmod(F, base, e, m):
    result = [1]
    base = divmod_(F, base, m)[1]
    while e:
        if e & 1:
            result = divmod_(F, mul(F, result, base), m)[1]
        base = divmod_(F, mul(F, base, base), m)[1]
        e >>= 1
    return result


def splitting_degree(F, g, max_degree=8):
    """Smallest d such that every root of g lies in the degree-d extension of F."""
    g = monic(F, g)
    if deg(g) <= 0:
        return 1
    x = [0, 1]
    xq = x
    for d in range(1, max_degree + 1):
        xq = powmod(F, xq, F.q, g)  # x^(q^d) mod g
        g0 = g
        diff = sub(F, xq, x)
        while deg(g0) > 0:
            r = divmod_(F, diff, g0)[1]
            h = gcd(F, g0, r) if r else g0
            if deg(h) <= 0:
                break
            g0 = divmod_(F, g0, h)[0]
        if deg(g0) <= 0:
            return d
    return None


def roots(F, g):
    """Distinct roots of g in F; raises ExtensionNeeded if some root lies outside F."""
    g = trim(g)
    if not g:
        raise ValueError("zero polynomial has every element as a root")
    if deg(g) == 0:
        return []
    d = splitting_degree(F, g)
    if d is None:
        raise ExtensionNeeded(9, "splitting field beyond supported extension degree")
    if d > 1:
        raise ExtensionNeeded(d)
    found = []
    rest = monic(F, g)
    for a in F.elements():
        if evaluate(F, rest, a) == 0:
            found.append(a)
            while evaluate(F, rest, a) == 0 and deg(rest) > 0:
                rest = divmod_(F, rest, [F.neg(a), 1])[0]
            if deg(rest) <= 0:
                break
    return sorted(found)
