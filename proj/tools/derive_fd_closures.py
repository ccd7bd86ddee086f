#!/usr/bin/env python3
"""Derives the boundary closures of the diagonal-norm first-derivative SBP
operators with interior order q and boundary order q/2 and prints them as a
C++ initializer table.

With a fixed central interior stencil, the unknowns are the boundary norm
weights h_1..h_r and the free entries of the skew-symmetric r x r block of
Q = H D. The accuracy conditions Q x^k = k H x^(k-1) (k <= q/2) are linear in
those unknowns, so the closure follows from one linear solve:

  q = 2, 4   unique solution
  q = 6      one free parameter, fixed to 342523/518400 (the classical choice)
  q = 8      three free parameters, fixed by minimising the boundary
             truncation error of order q/2 + 1, then of order q/2 + 2

Usage: derive_fd_closures.py > closure_table.txt   (needs sympy)
"""

import sympy as sp


def central_stencil(q):
    m = q // 2
    a = sp.symbols(f"a1:{m + 1}")
    eqs = [sp.Eq(sum(2 * a[j] * (j + 1) ** k for j in range(m)), 1 if k == 1 else 0)
           for k in range(1, 2 * m, 2)]
    sol = sp.solve(eqs, a)
    return [sol[x] for x in a]


def closure_system(q, r, n):
    m = q // 2
    stencil = central_stencil(q)
    h = sp.symbols(f"h1:{r + 1}")
    s = {(i, j): sp.Symbol(f"s_{i}_{j}") for i in range(r) for j in range(i + 1, r)}
    unknowns = list(h) + list(s.values())
    Q = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            d = j - i
            if 1 <= abs(d) <= m:
                Q[i, j] = stencil[abs(d) - 1] * (1 if d > 0 else -1)
    for i in range(r):
        for j in range(r):
            Q[i, j] = s[(i, j)] if i < j else (-s[(j, i)] if i > j else 0)
    for i in range(r):
        for j in range(r):
            Q[n - 1 - i, n - 1 - j] = -Q[i, j]
    Q[0, 0] = -sp.Rational(1, 2)
    Q[n - 1, n - 1] = sp.Rational(1, 2)
    H = [sp.Integer(1)] * n
    for i in range(r):
        H[i] = H[n - 1 - i] = h[i]
    eqs = []
    for k in range(m + 1):
        for i in range(r):
            rhs = k * H[i] * i ** (k - 1) if k > 0 else 0
            eqs.append(sp.expand(sum(Q[i, j] * j ** k for j in range(n)) - rhs))
    (sol,) = sp.solve(eqs, unknowns, dict=True)
    free = [u for u in unknowns if u not in sol]
    return Q, H, dict(sol), free


def substitute(sol, values):
    out = {k: sp.sympify(v).subs(values) for k, v in sol.items()}
    out.update(values)
    return out


def truncation(Q, H, r, n, k):
    return [(sum(Q[i, j] * j ** k for j in range(n)) - k * H[i] * i ** (k - 1)) / H[i]
            for i in range(r)]


def derive(q):
    r = {2: 1, 4: 4, 6: 6, 8: 8}[q]
    m = q // 2
    n = 3 * r + 4
    Q, H, sol, free = closure_system(q, r, n)
    if q == 6:
        sol = substitute(sol, {free[0]: sp.Rational(342523, 518400)})
    elif q == 8:
        Qs = Q.subs(sol)
        Hs = [sp.sympify(x).subs(sol) for x in H]
        e1 = sum(e ** 2 for e in truncation(Qs, Hs, r, n, m + 1))
        first = sp.solve([sp.diff(e1, f) for f in free], free[:2], dict=True)[0]
        e2 = sp.expand(sum(e.subs(first) ** 2 for e in truncation(Qs, Hs, r, n, m + 2)))
        last = sp.solve(sp.diff(e2, free[2]), free[2])[0]
        values = {free[2]: last}
        values.update({k: v.subs(free[2], last) for k, v in first.items()})
        sol = substitute(sol, values)
    Qs = Q.subs(sol)
    Hs = [sp.Rational(sp.sympify(x).subs(sol)) for x in H]
    block = [[sp.Rational(sp.together(Qs[i, j] / Hs[i])) for j in range(r + m)] for i in range(r)]
    return Hs[:r], block, central_stencil(q)


def fmt(x):
    x = sp.Rational(x)
    if x.q == 1:
        return f"{x.p}.0"
    if max(abs(x.p), x.q) < 10 ** 15:
        return f"{x.p}.0 / {x.q}.0"
    return f"{float(x):.17g}"


if __name__ == "__main__":
    for q in (2, 4, 6, 8):
        weights, block, stencil = derive(q)
        print(f"// q = {q}")
        print("weights: {" + ", ".join(fmt(w) for w in weights) + "}")
        print("stencil: {" + ", ".join(fmt(a) for a in stencil) + "}")
        for row in block:
            print("  {" + ", ".join(fmt(a) for a in row) + "},")
