"""Expected dimensions for rational double points, per type, co-index and characteristic.

``equisingular_expected`` is the dimension of the equisingular deformation
directions (local cohomology of S_X twisted by E) and ``nonlifting_expected``
the number of derivation classes that do not lift to the minimal resolution.
Tjurina numbers are never tabulated directly: they are recovered from the
identity tau = #curves + equisingular + nonlifting.
"""

from __future__ import annotations

LETTERS = ("A", "D", "E")


class UnsupportedType(ValueError):
    pass


def check_type(letter: str, n: int):
    if letter == "A" and n >= 1:
        return
    if letter == "D" and n >= 4:
        return
    if letter == "E" and n in (6, 7, 8):
        return
    raise UnsupportedType(f"no rational double point of type {letter}_{n}")


def d_half(n: int) -> int:
    """The index m in D_{2m} or D_{2m+1}."""
    return n // 2


def coindex_range(letter: str, n: int, p: int):
    """Artin co-indices r that occur for the type in characteristic p."""
    check_type(letter, n)
    if p == 2:
        if letter == "D":
            return range(d_half(n))
        if letter == "E":
            return range({6: 2, 7: 4, 8: 5}[n])
    if p == 3 and letter == "E":
        return range({6: 2, 7: 2, 8: 3}[n])
    if p == 5 and letter == "E" and n == 8:
        return range(2)
    return range(1)


def _check_coindex(letter, n, r, p):
    if r not in coindex_range(letter, n, p):
        raise UnsupportedType(f"co-index {r} does not occur for {letter}_{n} in characteristic {p}")


def equisingular_expected(letter: str, n: int, r: int, p: int) -> int:
    _check_coindex(letter, n, r, p)
    if p == 2:
        if letter == "D":
            return d_half(n) - 1 - r
        if letter == "E":
            return {6: (1, 0), 7: (3, 2, 1, 0), 8: (4, 3, 2, 1, 0)}[n][r]
        return 0
    if p == 3 and letter == "E":
        return {6: (1, 0), 7: (1, 0), 8: (2, 1, 0)}[n][r]
    if p == 5 and letter == "E" and n == 8:
        return (1, 0)[r]
    return 0


def nonlifting_expected(letter: str, n: int, r: int, p: int) -> int:
    _check_coindex(letter, n, r, p)
    if letter == "A":
        return 1 if (n + 1) % p == 0 else 0
    if p == 2:
        if letter == "D":
            m = d_half(n)
            return m + 1 - r if n % 2 == 0 else m - r
        return {6: (1, 0), 7: (4, 3, 2, 1), 8: (4, 3, 2, 1, 0)}[n][r]
    if p == 3 and letter == "E":
        return {6: (2, 1), 7: (1, 0), 8: (2, 1, 0)}[n][r]
    if p == 5 and letter == "E" and n == 8:
        return (1, 0)[r]
    return 0


def expected_tjurina(letter: str, n: int, r: int, p: int) -> int:
    return n + equisingular_expected(letter, n, r, p) + nonlifting_expected(letter, n, r, p)


def has_coindex_variants(letter: str, n: int, p: int) -> bool:
    return len(coindex_range(letter, n, p)) > 1
