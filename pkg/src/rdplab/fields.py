"""Prime fields and their small extensions.

Elements are plain ints in ``range(q)``. For an extension field the int is the
base-``p`` encoding of the residue polynomial ``sum d_i t^i`` modulo an
irreducible ``m(t)``; prime-field elements are the ints ``0..p-1`` and sit
inside every extension as the constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

MAX_EXT_DEGREE = 8
_TABLE_LIMIT = 1 << 16


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --- dense univariate helpers over F_p (coefficient lists, low degree first) ---

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    """Remainder of a by monic-or-not b over F_p."""
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(_trim(a)) - 1 >= db:
        c = a[-1] * inv % p
        s = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[s + i] = (a[s + i] - c * bi) % p
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Brute-force factor search: no monic factor of degree 1..m//2 divides."""
    m = len(modulus) - 1
    if m < 1 or modulus[-1] % p == 0:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for tail in product(range(p), repeat=d):
            cand = list(tail) + [1]
            if not _trim(_pmod(modulus, cand, p)):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, m: int) -> tuple:
    """Lexicographically first monic irreducible of degree m over F_p."""
    if m == 1:
        return (0, 1)
    for tail in product(range(p), repeat=m):
        cand = tuple(reversed(tail)) + (1,)
        # reversed so that t^m + 1 style moduli with small low coefficients come first
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


class GF:
    """The finite field F_q, q = p^m, with explicit modulus."""

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m < 1 or m > MAX_EXT_DEGREE:
            raise FieldError(f"extension degree {m} outside 1..{MAX_EXT_DEGREE}")
        if modulus is None:
            modulus = default_modulus(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1:
            raise FieldError("modulus degree does not match extension degree")
        if m > 1 and not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus
        self._exp = self._log = None
        self._add_table = None
        if m > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    # identity
    def __eq__(self, other):
        return isinstance(other, GF) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p})" if self.m == 1 else f"GF({self.p}^{self.m})"

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    # encoding
    def digits(self, a: int) -> list:
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(a % p)
            a //= p
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + d % self.p
        return v

    def __call__(self, n) -> int:
        """Image of an integer in the prime subfield."""
        return int(n) % self.p

    def elements(self):
        return range(self.q)

    # arithmetic
    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a * self.q + b]
        return self._slow_add(a, b)

    def _slow_add(self, a, b):
        p = self.p
        v, base = 0, 1
        while a or b:
            v += ((a % p + b % p) % p) * base
            a //= p
            b //= p
            base *= p
        return v

    def neg(self, a):
        if self.m == 1:
            return -a % self.p
        return self.from_digits([-d for d in self.digits(a)])

    def sub(self, a, b):
        if self.m == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._slow_mul(a, b)

    def _slow_mul(self, a, b):
        p, mod = self.p, self.modulus
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _pmod(prod, list(mod), p)
        return self.from_digits(rem + [0] * (self.m - len(rem)))

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        if self.m == 1:
            return pow(a, e, self.p)
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def sqrt_char2(self, a):
        """Square root in characteristic 2 (Frobenius is bijective)."""
        if self.p != 2:
            raise FieldError("sqrt_char2 needs characteristic 2")
        return self.pow(a, self.q // 2)

    def in_subfield(self, a, d: int) -> bool:
        """True if a lies in F_{p^d} (d divides m)."""
        return self.pow(a, self.p ** d) == a

    def _build_tables(self):
        q = self.q
        self._add_table = None
        # addition table only while it stays small
        if q <= 1024:
            tab = [0] * (q * q)
            for a in range(q):
                for b in range(q):
                    tab[a * q + b] = self._slow_add(a, b)
            self._add_table = tab
        for g in range(2, q):
            exp = [1] * (q - 1)
            x = 1
            ok = True
            for k in range(1, q - 1):
                x = self._slow_mul(x, g)
                if x == 1:
                    ok = False
                    break
                exp[k] = x
            if ok:
                log = [0] * q
                for k, v in enumerate(exp):
                    log[v] = k
                self._exp, self._log = exp, log
                return
        raise FieldError("no primitive element found")  # pragma: no cover


@lru_cache(maxsize=None)
def field(p: int, m: int = 1) -> GF:
    """Cached canonical field F_{p^m}."""
    return GF(p, m)


@lru_cache(maxsize=None)
def embedding(src: GF, dst: GF):
    """A field homomorphism src -> dst as a lookup table (src.m must divide dst.m)."""
    if src == dst:
        return None
    if src.p != dst.p or dst.m % src.m:
        raise FieldError(f"cannot embed {src!r} into {dst!r}")
    if src.m == 1:
        return None
    # find a root of src.modulus in dst
    root = None
    for a in dst.elements():
        acc = 0
        for c in reversed(src.modulus):
            acc = dst.add(dst.mul(acc, a), c)
        if acc == 0:
            root = a
            break
    if root is None:  # pragma: no cover - impossible for finite fields
        raise FieldError("no root of modulus in target field")
    powers = [1]
    for _ in range(src.m - 1):
        powers.append(dst.mul(powers[-1], root))
    table = []
    for a in src.elements():
        v = 0
        for d, pw in zip(src.digits(a), powers):
            if d:
                v = dst.add(v, dst.mul(d, pw))
        table.append(v)
    return tuple(table)


def embed_element(a: int, src: GF, dst: GF) -> int:
    table = embedding(src, dst)
    return a if table is None else table[a]


@dataclass(frozen=True)
class FieldElem:
    """An element of a finite field with operator overloading (API convenience)."""

    value: int
    field: GF

    def __post_init__(self):
        v = self.value % self.field.p if self.field.m == 1 else self.value
        if not 0 <= v < self.field.q:
            raise FieldError("value out of range")
        object.__setattr__(self, "value", v)

    @property
    def p(self):
        return self.field.p

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldError("mixing elements of different fields")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return FieldElem(self.field.add(self.value, self._coerce(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field.sub(self.value, self._coerce(other)), self.field)

    def __rsub__(self, other):
        return FieldElem(self.field.sub(self._coerce(other), self.value), self.field)

    def __mul__(self, other):
        return FieldElem(self.field.mul(self.value, self._coerce(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field.div(self.value, self._coerce(other)), self.field)

    def __neg__(self):
        return FieldElem(self.field.neg(self.value), self.field)

    def __pow__(self, e: int):
        return FieldElem(self.field.pow(self.value, e), self.field)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.field.m == 1:
            return f"{self.value} mod {self.field.p}"
        return f"{self.field.digits(self.value)} in {self.field!r}"


FieldExtElem = FieldElem
