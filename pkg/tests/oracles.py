"""Independent reference computations used by the tests (sympy based)."""

import sympy as sp

X, Y, Z = sp.symbols("x y z")
GENS = (X, Y, Z)


def to_sympy(poly):
    """MultiPoly over a prime field -> sympy expression with integer coefficients."""
    out = 0
    for e, c in poly.terms.items():
        out += c * X ** e[0] * Y ** e[1] * Z ** e[2]
    return out


def chart_map(tree, chart_id):
    """Root coordinates as polynomials in the coordinates of ``chart_id``."""
    path = []
    c = tree.charts[chart_id]
    while c.parent is not None:
        path.append(c)
        c = tree.charts[c.parent]
    phi = list(GENS)
    for ch in reversed(path):
        i = ch.index
        step = [None, None, None]
        for k in range(3):
            base = GENS[k] if k == i else GENS[k] * GENS[i]
            step[k] = base + ch.center[k]
        phi = [sp.expand(expr.subs(dict(zip(GENS, step)), simultaneous=True)) for expr in phi]
    return phi


def lifts_by_jacobian(tree, coeffs, p):
    """Lift test via D' = adj(J) (D o phi) / det J with a Groebner reduction mod (det J, g).

    ``coeffs`` are sympy expressions in x, y, z over F_p.  Returns (lifts, first failing chart).
    """
    for chart in tree.charts[1:]:
        phi = chart_map(tree, chart.id)
        J = sp.Matrix(3, 3, lambda r, c: sp.diff(phi[r], GENS[c]))
        det = sp.expand(J.det())
        adj = J.adjugate()
        pulled = sp.Matrix([sp.expand(sp.sympify(a).subs(dict(zip(GENS, phi)), simultaneous=True)) for a in coeffs])
        nums = adj * pulled
        g = to_sympy(chart.equation)
        G = sp.groebner([det, g], *GENS, modulus=p, order="grevlex")
        for num in nums:
            _, r = sp.reduced(sp.expand(num), list(G.exprs), *GENS, modulus=p, order="grevlex")
            if sp.Poly(r, *GENS, modulus=p).is_zero is False:
                return False, chart.id
    return True, None


def global_colength(polys, p):
    """dim F_p[x,y,z]/(polys) via a sympy Groebner basis; None if not zero-dimensional.

    Equals the local colength at the origin when the origin is the only zero.
    """
    G = sp.groebner([to_sympy(f) for f in polys], *GENS, modulus=p, order="grevlex")
    leads = [sp.Poly(g, *GENS, modulus=p).monoms(order="grevlex")[0] for g in G.exprs]
    pure = [None, None, None]
    for m in leads:
        nz = [i for i in range(3) if m[i]]
        if len(nz) == 1:
            i = nz[0]
            pure[i] = m[i] if pure[i] is None else min(pure[i], m[i])
    if None in pure:
        return None
    count = 0
    for a in range(pure[0]):
        for b in range(pure[1]):
            for c in range(pure[2]):
                if not any(a >= m[0] and b >= m[1] and c >= m[2] for m in leads):
                    count += 1
    return count


def monomial_colength(exponents):
    """Number of monomials outside the monomial ideal generated by ``exponents``."""
    bound = [max(e[i] for e in exponents if all(e[j] == 0 for j in range(3) if j != i)) for i in range(3)]
    return sum(1 for a in range(bound[0]) for b in range(bound[1]) for c in range(bound[2])
               if not any(a >= e[0] and b >= e[1] and c >= e[2] for e in exponents))
