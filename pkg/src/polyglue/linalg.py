"""Exact linear algebra over the rationals.

Vectors are plain tuples.  Integer tuples are the working currency of the
cone engine; :class:`fractions.Fraction` appears only inside elimination.
"""
from fractions import Fraction
from math import gcd


def _lcm(a, b):
    return a // gcd(a, b) * b


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted by the exact backend")
    return Fraction(x)


def primitive(v):
    """Scale ``v`` by a positive rational so the entries are coprime integers."""
    if all(type(x) is int for x in v):
        g = gcd(*v) if v else 0
        if g <= 1:
            return tuple(v)
        return tuple(x // g for x in v)
    fr = [to_fraction(x) for x in v]
    den = 1
    for f in fr:
        den = _lcm(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = gcd(*ints) if ints else 0
    if g <= 1:
        return tuple(ints)
    return tuple(x // g for x in ints)


def sign_normalized(v):
    """Primitive integer form with the first nonzero entry positive (for lines)."""
    p = primitive(v)
    for x in p:
        if x:
            return p if x > 0 else tuple(-y for y in p)
    return p


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def is_zero(v):
    return not any(v)


def rref(rows, ncols):
    m = [[to_fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows, ncols=None):
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(rref(rows, ncols)[1])


def row_basis(rows, ncols):
    """Canonical basis of the row space: the reduced echelon rows, made primitive."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return ()
    red, _ = rref(rows, ncols)
    return tuple(sign_normalized(r) for r in red)


def nullspace(rows, ncols):
    """Basis of {x : r.x = 0 for every row r}, in canonical form."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return tuple(tuple(int(i == j) for j in range(ncols)) for i in range(ncols))
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(v)
    return row_basis(basis, ncols)


def solve(a, b):
    """Solve the square system a x = b exactly; raises ValueError when singular."""
    n = len(a)
    aug = [list(map(to_fraction, row)) + [to_fraction(bi)] for row, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if piv != list(range(n)):
        raise ValueError("singular system")
    return tuple(row[n] for row in red)


def project_onto(v, basis):
    """Orthogonal projection of ``v`` onto span(basis), as Fractions."""
    if not basis:
        return tuple(Fraction(0) for _ in v)
    gram = [[to_fraction(dot(bi, bj)) for bj in basis] for bi in basis]
    rhs = [to_fraction(dot(bi, v)) for bi in basis]
    coef = solve(gram, rhs)
    out = [Fraction(0)] * len(v)
    for c, b in zip(coef, basis):
        for i, x in enumerate(b):
            out[i] += c * x
    return tuple(out)


def project_off(v, basis):
    """Component of ``v`` orthogonal to span(basis)."""
    if not basis:
        return tuple(v)
    p = project_onto(v, basis)
    return tuple(to_fraction(x) - y for x, y in zip(v, p))


def mat_mul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat(v, a):
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_inverse(a):
    n = len(a)
    aug = [list(map(to_fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def determinant(a):
    n = len(a)
    m = [list(map(to_fraction, row)) for row in a]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det
