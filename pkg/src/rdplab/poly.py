"""Sparse multivariate polynomials over finite fields.

A :class:`MultiPoly` is an immutable map from exponent tuples to nonzero field
elements, tagged with its field and ordered variable names.  Surface
coordinates are always ``x, y, z``; deformation parameters (``s``, ``s1``,
``s2``, ``t``) are appended after them.
"""

from __future__ import annotations

import re
from itertools import combinations_with_replacement

from .fields import GF, FieldError, embed_element, field as get_field, is_prime

BASE_VARS = ("x", "y", "z")
PARAM_VARS = ("s", "s1", "s2", "t")
KNOWN_VARS = BASE_VARS + PARAM_VARS

DEGREE_CAP = 64


class DegreeCapError(ArithmeticError):
    """Raised when a result exceeds the configured total-degree cap."""


class PolyParseError(ValueError):
    def __init__(self, msg, position):
        super().__init__(f"{msg} at position {position}")
        self.position = position


def set_degree_cap(cap: int) -> int:
    """Change the global total-degree cap, returning the previous value."""
    global DEGREE_CAP
    old, DEGREE_CAP = DEGREE_CAP, int(cap)
    return old


def term_key(exp):
    """Graded-lex sort key: ascending total degree, then x before y before z."""
    return (sum(exp), tuple(-e for e in exp))


class MultiPoly:
    __slots__ = ("field", "vars", "terms", "_hash")

    def __init__(self, field: GF, vars, terms=None):
        self.field = field
        self.vars = tuple(vars)
        self.terms = {e: c for e, c in (terms or {}).items() if c}
        self._hash = None

    # --- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, field, vars=BASE_VARS):
        return cls(field, vars)

    @classmethod
    def const(cls, c, field, vars=BASE_VARS):
        return cls(field, vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name, field, vars=BASE_VARS):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(field, vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp, field, vars=BASE_VARS, c=1):
        return cls(field, vars, {tuple(exp): c})

    def _new(self, terms):
        return MultiPoly(self.field, self.vars, terms)

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            return self.const(self.field(other), self.field, self.vars)
        if other.field != self.field or other.vars != self.vars:
            raise ValueError(f"incompatible rings: {self.field!r}{self.vars} vs {other.field!r}{other.vars}")
        return other

    # --- basic queries ----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self, var=None):
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def order(self, nvars=None):
        """Lowest total degree of a term (in the first ``nvars`` variables)."""
        if not self.terms:
            return float("inf")
        k = len(self.vars) if nvars is None else nvars
        return min(sum(e[:k]) for e in self.terms)

    def homogeneous_part(self, d, nvars=None):
        k = len(self.vars) if nvars is None else nvars
        return self._new({e: c for e, c in self.terms.items() if sum(e[:k]) == d})

    def truncate(self, n):
        """Drop all terms of total degree >= n."""
        return self._new({e: c for e, c in self.terms.items() if sum(e) < n})

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), 0)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), 0)

    def used_vars(self):
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: term_key(t[0]))

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._new({e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        F = self.field
        if not c:
            return self._new({})
        return self._new({e: F.mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if not isinstance(other, int):
                return NotImplemented
            return self.scale(self.field(other))
        other = self._check(other)
        F = self.field
        out = {}
        if F.m == 1:
            p = F.p
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        else:
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        res = self._new(out)
        if res.terms and res.degree() > DEGREE_CAP:
            raise DegreeCapError(f"total degree {res.degree()} exceeds cap {DEGREE_CAP}")
        return res

    __rmul__ = __mul__

    def mul_monomial(self, exp, c=1):
        F = self.field
        return self._new({tuple(a + b for a, b in zip(e, exp)): F.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        if self.terms and n * self.degree() > DEGREE_CAP:
            raise DegreeCapError(f"power of degree {n * self.degree()} exceeds cap {DEGREE_CAP}")
        result = self.const(1, self.field, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.field == other.field and self.vars == other.vars and self.terms == other.terms
        if isinstance(other, int):
            return self == self.const(self.field(other), self.field, self.vars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.vars, frozenset(self.terms.items())))
        return self._hash

    # --- calculus and substitution -----------------------------------------
    def partial(self, var):
        i = self.vars.index(var)
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = F.mul(c, F(e[i]))
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return self._new(out)

    def gradient(self, vars=BASE_VARS):
        return tuple(self.partial(v) for v in vars)

    def substitute(self, bindings):
        """Replace variables by polynomials; unbound variables map to themselves.

        All bound images must live in one common ring, which is the ring of the
        result.  Unbound variables must exist in that ring.
        """
        if not bindings:
            return self
        images = list(bindings.values())
        ring = images[0]
        for im in images[1:]:
            ring._check(im)
        F, tvars = ring.field, ring.vars
        if F != self.field:
            raise ValueError("substitution images must be over the same field")
        imgs = []
        for v in self.vars:
            if v in bindings:
                imgs.append(bindings[v])
            else:
                imgs.append(MultiPoly.var(v, F, tvars))
        powers = [{0: MultiPoly.const(1, F, tvars)} for _ in imgs]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                j = max(j for j in cache if j < k)
                acc = cache[j]
                for jj in range(j + 1, k + 1):
                    acc = acc * imgs[i]
                    cache[jj] = acc
            return cache[k]

        acc = {}
        for e, c in self.terms.items():
            t = None
            for i, k in enumerate(e):
                if k:
                    t = pw(i, k) if t is None else t * pw(i, k)
            if t is None:
                t = powers[0][0]
            for te, tc in t.terms.items():
                acc[te] = F.add(acc.get(te, 0), F.mul(tc, c))
        out = MultiPoly(F, tvars, acc)
        if out.terms and out.degree() > DEGREE_CAP:
            raise DegreeCapError(f"substitution degree {out.degree()} exceeds cap {DEGREE_CAP}")
        return out

    def evaluate(self, values):
        """Evaluate at a full assignment (dict var -> field element)."""
        F = self.field
        vals = [values[v] for v in self.vars]
        total = 0
        for e, c in self.terms.items():
            t = c
            for a, k in zip(vals, e):
                if k:
                    t = F.mul(t, F.pow(a, k))
            total = F.add(total, t)
        return total

    def specialize(self, values):
        """Set some variables to constants and drop them from the ring."""
        F = self.field
        keep = [i for i, v in enumerate(self.vars) if v not in values]
        fixed = [(i, values[v]) for i, v in enumerate(self.vars) if v in values]
        out = {}
        for e, c in self.terms.items():
            t = c
            for i, a in fixed:
                if e[i]:
                    t = F.mul(t, F.pow(a, e[i]))
            if t:
                ne = tuple(e[i] for i in keep)
                out[ne] = F.add(out.get(ne, 0), t)
        return MultiPoly(F, [self.vars[i] for i in keep], out)

    def translate(self, shift):
        """f(x + shift) for a dict var -> constant (only the named variables move)."""
        if not any(shift.values()):
            return self
        F = self.field
        b = {v: MultiPoly.var(v, F, self.vars) + MultiPoly.const(a, F, self.vars)
             for v, a in shift.items() if a}
        return self.substitute(b)

    def with_vars(self, vars):
        """Re-embed into a ring with a superset (or reordering) of the used variables."""
        vars = tuple(vars)
        idx = []
        for i, v in enumerate(self.vars):
            if v in vars:
                idx.append((i, vars.index(v)))
            elif any(e[i] for e in self.terms):
                raise ValueError(f"variable {v} is used but missing from {vars}")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, j in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return MultiPoly(self.field, vars, out)

    def change_field(self, dst: GF):
        if dst == self.field:
            return self
        return MultiPoly(dst, self.vars, {e: embed_element(c, self.field, dst) for e, c in self.terms.items()})

    def divides_exactly_by_var(self, var):
        """Largest k with var^k dividing self (inf for zero)."""
        if not self.terms:
            return float("inf")
        i = self.vars.index(var)
        return min(e[i] for e in self.terms)

    def div_var_power(self, var, k):
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] < k:
                raise ArithmeticError(f"{var}^{k} does not divide polynomial")
            ne = list(e)
            ne[i] -= k
            out[tuple(ne)] = c
        return self._new(out)

    def divmod(self, g):
        """Division by a single polynomial under degree-lex; returns (quotient, remainder).

        The remainder is the unique normal form, so it vanishes iff g divides self.
        """
        g = self._check(g)
        if not g.terms:
            raise ZeroDivisionError("division by zero polynomial")
        F = self.field
        lead = max(g.terms, key=_deglex)
        lc_inv = F.inv(g.terms[lead])
        rest = [(e, c) for e, c in g.terms.items() if e != lead]
        work = dict(self.terms)
        quot, rem = {}, {}
        while work:
            e = max(work, key=_deglex)
            c = work.pop(e)
            if all(a >= b for a, b in zip(e, lead)):
                qe = tuple(a - b for a, b in zip(e, lead))
                qc = F.mul(c, lc_inv)
                quot[qe] = F.add(quot.get(qe, 0), qc)
                for re_, rc in rest:
                    t = tuple(a + b for a, b in zip(re_, qe))
                    v = F.sub(work.get(t, 0), F.mul(qc, rc))
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
            else:
                rem[e] = c
        return self._new(quot), self._new(rem)

    # --- printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if F.m == 1:
                cs = str(c)
            else:
                cs = "[" + ",".join(str(d) for d in F.digits(c)) + "]"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return "+".join(parts)

    def __repr__(self):
        return f"MultiPoly({self}, {self.field!r})"


def _deglex(e):
    return (sum(e), e)


# --- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(s1|s2|[a-zA-Z_]\w*)|(\^)|(\*)|(\+)|(-))")


def _tokenize(text):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("int", "var", "^", "*", "+", "-")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


def parse_poly(text: str, p, vars=None) -> MultiPoly:
    """Parse ``text`` into a polynomial over F_p (or over the given field).

    Grammar: terms joined by ``+``/``-``; a term is a ``*``-separated product
    of integer coefficients and powers ``v^k``; whitespace is ignored.
    """
    if isinstance(p, GF):
        F = p
    else:
        if not is_prime(int(p)):
            raise FieldError(f"{p} is not prime")
        F = get_field(int(p))
    toks = _tokenize(text)
    for kind, val, pos in toks:
        if kind == "var" and val not in KNOWN_VARS:
            raise PolyParseError(f"unknown variable {val!r}", pos)
    if vars is None:
        used = {val for kind, val, _ in toks if kind == "var"}
        vars = BASE_VARS + tuple(v for v in PARAM_VARS if v in used)
    vars = tuple(vars)
    for kind, val, pos in toks:
        if kind == "var" and val not in vars:
            raise PolyParseError(f"variable {val!r} not in ring {vars}", pos)

    i = 0
    terms = {}

    def peek():
        return toks[i]

    def expect_int():
        nonlocal i
        kind, val, pos = toks[i]
        if kind != "int":
            raise PolyParseError("expected integer exponent", pos)
        i += 1
        return int(val)

    def factor():
        nonlocal i
        kind, val, pos = toks[i]
        if kind == "int":
            i += 1
            return int(val), None
        if kind == "var":
            i += 1
            k = 1
            if peek()[0] == "^":
                i += 1
                k = expect_int()
            return 1, (val, k)
        raise PolyParseError("expected coefficient or variable", pos)

    def term(sign):
        nonlocal i
        coeff = sign
        exp = [0] * len(vars)
        c, v = factor()
        coeff *= c
        if v:
            exp[vars.index(v[0])] += v[1]
        while peek()[0] == "*":
            i += 1
            c, v = factor()
            coeff *= c
            if v:
                exp[vars.index(v[0])] += v[1]
        e = tuple(exp)
        terms[e] = F.add(terms.get(e, 0), F(coeff))

    kind, _, pos = peek()
    if kind == "end":
        raise PolyParseError("empty polynomial", pos)
    sign = 1
    if kind in "+-":
        sign = -1 if kind == "-" else 1
        i += 1
    term(sign)
    while True:
        kind, _, pos = peek()
        if kind == "end":
            break
        if kind not in ("+", "-"):
            raise PolyParseError(f"unexpected token {toks[i][1]!r}", pos)
        i += 1
        term(-1 if kind == "-" else 1)
    return MultiPoly(F, vars, terms)


def monomials_up_to(nvars: int, maxdeg: int):
    """Exponent tuples of total degree <= maxdeg in graded-lex order."""
    out = []
    for d in range(maxdeg + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


def monomials_of_degree(nvars: int, d: int):
    out = set()
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for j in combo:
            e[j] += 1
        out.add(tuple(e))
    return sorted(out, reverse=True)


class LaurentPoly:
    """``base / var^pole_order`` with ``var`` not dividing ``base`` unless the order is 0."""

    __slots__ = ("base", "var", "pole_order")

    def __init__(self, base: MultiPoly, var=None, pole_order: int = 0):
        if pole_order < 0:
            raise ValueError("pole order must be non-negative")
        if pole_order and var is None:
            raise ValueError("a pole needs an exceptional variable")
        if pole_order and base.terms:
            k = min(base.divides_exactly_by_var(var), pole_order)
            if k:
                base = base.div_var_power(var, k)
                pole_order -= k
        if not base.terms:
            pole_order = 0
        self.base = base
        self.var = var
        self.pole_order = pole_order

    @classmethod
    def of(cls, poly, var=None):
        return poly if isinstance(poly, LaurentPoly) else cls(poly, var, 0)

    def is_polynomial(self):
        return self.pole_order == 0

    def to_poly(self):
        if self.pole_order:
            raise ArithmeticError(f"{self} has a pole of order {self.pole_order}")
        return self.base

    def _align(self, other):
        other = LaurentPoly.of(other, self.var)
        var = self.var or other.var
        if self.var and other.var and self.var != other.var and (self.pole_order and other.pole_order):
            raise ValueError("Laurent polynomials in different exceptional variables")
        k = max(self.pole_order, other.pole_order)
        a, b = self.base, other.base
        if k > self.pole_order:
            a = a * MultiPoly.var(var, a.field, a.vars) ** (k - self.pole_order)
        if k > other.pole_order:
            b = b * MultiPoly.var(var, b.field, b.vars) ** (k - other.pole_order)
        return a, b, var, k

    def __add__(self, other):
        a, b, var, k = self._align(other)
        return LaurentPoly(a + b, var, k)

    def __sub__(self, other):
        a, b, var, k = self._align(other)
        return LaurentPoly(a - b, var, k)

    def __neg__(self):
        return LaurentPoly(-self.base, self.var, self.pole_order)

    def __mul__(self, other):
        other = LaurentPoly.of(other, self.var)
        var = self.var or other.var
        return LaurentPoly(self.base * other.base, var, self.pole_order + other.pole_order)

    __rmul__ = __mul__

    def is_zero(self):
        return not self.base.terms

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            other = LaurentPoly(other, self.var)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.base == other.base and self.pole_order == other.pole_order

    def __hash__(self):
        return hash((self.base, self.pole_order))

    def __str__(self):
        if not self.pole_order:
            return str(self.base)
        den = self.var if self.pole_order == 1 else f"{self.var}^{self.pole_order}"
        return f"({self.base})/{den}"

    __repr__ = __str__
