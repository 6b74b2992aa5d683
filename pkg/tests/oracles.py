"""Independent reference computations used only by the tests.

Nothing here imports the package's lattice code.
"""

import itertools
from fractions import Fraction
from math import gcd


def naive_snf_diagonal(rows):
    """Smith invariants by plain elementary operations, then a gcd/lcm fix-up.

    Deliberately different from the library: every pass re-scans the whole
    remaining block for the last entry of least absolute value, and
    divisibility is repaired only at the end by replacing pairs ``(a, b)``
    with ``(gcd, lcm)``.
    """
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    diag = []
    t = 0
    while t < min(nr, nc):
        cands = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if m[i][j]]
        if not cands:
            break
        best = min(c[0] for c in cands)
        _, i, j = [c for c in cands if c[0] == best][-1]
        m[t], m[i] = m[i], m[t]
        for r in m:
            r[t], r[j] = r[j], r[t]
        p = m[t][t]
        for i in range(t + 1, nr):
            q = m[i][t] // p
            m[i] = [a - q * b for a, b in zip(m[i], m[t])]
        for j in range(t + 1, nc):
            q = m[t][j] // p
            for r in m:
                r[j] -= q * r[t]
        if any(m[i][t] for i in range(t + 1, nr)) or any(m[t][j] for j in range(t + 1, nc)):
            continue
        diag.append(abs(p))
        t += 1
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(range(len(diag)), 2):
            x, y = diag[a], diag[b]
            g = gcd(x, y)
            if (x, y) != (g, x * y // g):
                diag[a], diag[b] = g, x * y // g
                changed = True
    return diag


def det_fraction(rows):
    n = len(rows)
    m = [[Fraction(x) for x in r] for r in rows]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(d)


def determinantal_divisors(rows):
    """Invariant factors from gcds of k x k minors: ``d_k = D_k / D_(k-1)``."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    out, prev = [], 1
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for I in itertools.combinations(range(nr), k):
            for J in itertools.combinations(range(nc), k):
                g = gcd(g, det_fraction([[rows[i][j] for j in J] for i in I]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def finite_group_order(relations, k):
    """``|Z^k / L|`` as the gcd of the maximal minors of ``L``; ``None`` if infinite."""
    cols = [list(c) for c in zip(*relations)] if relations else []
    g = 0
    for J in itertools.combinations(range(len(cols)), k):
        g = gcd(g, det_fraction([[cols[j][i] for j in J] for i in range(k)]))
    return g or None


def in_simplicial_cone(rays, point):
    """Whether ``point`` is a nonnegative combination of linearly independent ``rays``."""
    d = len(point)
    if len(rays) != d:
        return False
    m = [[Fraction(rays[j][i]) for j in range(d)] + [Fraction(point[i])] for i in range(d)]
    for c in range(d):
        p = next((r for r in range(c, d) if m[r][c] != 0), None)
        if p is None:
            return False
        m[c], m[p] = m[p], m[c]
        for r in range(d):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return all(m[i][d] / m[i][i] >= 0 for i in range(d))


def covers_sample_points(rays, cones, radius=3):
    """Geometric completeness check: every integer point in a box lies in some cone."""
    d = len(rays[0])
    for pt in itertools.product(range(-radius, radius + 1), repeat=d):
        if not any(pt):
            continue
        if not any(in_simplicial_cone([rays[i] for i in c], pt) for c in cones):
            return False
    return True
