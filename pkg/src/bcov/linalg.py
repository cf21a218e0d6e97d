"""Dense exact linear algebra over Q: solves, kernels, and the rational
spectral decomposition used for heat kernels.

Matrices are lists of rows of Fractions. Sizes here are tiny (dim <= a few
dozen), so clarity beats asymptotics.
"""

from fractions import Fraction


class SpectrumError(ValueError):
    """Raised when a matrix is not rational-semisimple."""


def zeros(n, m):
    return [[Fraction(0)] * m for _ in range(n)]


def identity(n):
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = Fraction(1)
    return M


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    if Bt[j]:
                        oi[j] += a * Bt[j]
    return out


def mat_vec(A, v):
    return [sum((a * x for a, x in zip(row, v) if a and x), Fraction(0)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def is_zero_matrix(A):
    return all(not a for row in A for a in row)


def rref(A):
    """Row-reduce a copy of A; returns (R, pivot columns)."""
    R = [list(row) for row in A]
    n = len(R)
    m = len(R[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if R[i][c]), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        pv = R[r][c]
        R[r] = [x / pv for x in R[r]]
        for i in range(n):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return R, pivots


def rank(A):
    if not A:
        return 0
    return len(rref(A)[1])


def kernel_basis(A):
    """Basis of the right null space of A (list of column vectors)."""
    if not A:
        return []
    m = len(A[0])
    R, pivots = rref(A)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def solve(A, b):
    """One solution x of A x = b, or None if inconsistent."""
    n = len(A)
    m = len(A[0]) if n else 0
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    R, pivots = rref(aug)
    for row in R:
        if not any(row[:m]) and row[m]:
            return None
    x = [Fraction(0)] * m
    for r, pc in enumerate(pivots):
        if pc < m:
            x[pc] = R[r][m]
    return x


def inverse(A):
    n = len(A)
    aug = [list(row) + list(e) for row, e in zip(A, identity(n))]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return [row[n:] for row in R]


def char_poly(A):
    """Characteristic polynomial det(xI - A), coefficients low to high.

    Faddeev-LeVerrier: exact over Q, no pivoting concerns.
    """
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        c = -Fraction(sum(M[i][i] for i in range(n)), k)
        coeffs[n - k] = c
        for i in range(n):
            M[i][i] += c
    return coeffs


def poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(n, bound):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n and d <= bound:
        if n % d == 0:
            out.add(d)
            if n // d <= bound:
                out.add(n // d)
        d += 1
    return sorted(out)


def rational_roots(coeffs, bound=10**6):
    """Rational roots (with multiplicity) of a Q-polynomial, found by the
    rational root theorem with numerators/denominators capped at `bound`."""
    from math import lcm

    cs = list(coeffs)
    while cs and not cs[-1]:
        cs.pop()
    if not cs:
        raise ValueError("zero polynomial")
    mult = lcm(*[c.denominator for c in cs]) if cs else 1
    ics = [int(c * mult) for c in cs]
    shift = 0
    while ics and ics[0] == 0:
        ics.pop(0)
        shift += 1
    roots = [Fraction(0)] * shift
    while len(ics) > 1:
        found = None
        for q in _divisors(ics[-1], bound):
            for p in _divisors(ics[0], bound):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if not sum(c * cand**k for k, c in enumerate(ics)):
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        # deflate by (x - found), exactly
        out = []
        acc = Fraction(0)
        for c in reversed(ics):
            acc = acc * found + c
            out.append(acc)
        rem = out.pop()
        if rem:
            raise AssertionError("exact deflation failed")
        ics = [c for c in reversed(out)]
    return sorted(roots)


def rational_eigendecomposition(A, root_bound=10**6):
    """Spectral decomposition of a rational-semisimple matrix.

    Returns a sorted list of (eigenvalue, projector). The projectors are
    built by Lagrange interpolation on the spectrum, then verified:
    idempotent, mutually orthogonal, summing to I, with sum(l * P_l) = A.
    Any failure (irrational or non-semisimple spectrum) raises SpectrumError.
    """
    n = len(A)
    if n == 0:
        return []
    if any(len(row) != n for row in A):
        raise ValueError("matrix not square")
    A = [[Fraction(x) for x in row] for row in A]
    cp = char_poly(A)
    roots = rational_roots(cp, bound=root_bound)
    if len(roots) != n:
        raise SpectrumError("spectrum not rational-semisimple")
    spectrum = sorted(set(roots))
    # minimal polynomial must be squarefree: prod (A - l) = 0
    M = identity(n)
    for lam in spectrum:
        M = mat_mul(M, mat_sub(A, mat_scale(lam, identity(n))))
    if not is_zero_matrix(M):
        raise SpectrumError("spectrum not rational-semisimple")
    decomp = []
    for lam in spectrum:
        P = identity(n)
        for mu in spectrum:
            if mu != lam:
                P = mat_mul(P, mat_scale(1 / (lam - mu), mat_sub(A, mat_scale(mu, identity(n)))))
        decomp.append((lam, P))
    check = zeros(n, n)
    recon = zeros(n, n)
    for lam, P in decomp:
        check = mat_add(check, P)
        recon = mat_add(recon, mat_scale(lam, P))
        if not is_zero_matrix(mat_sub(mat_mul(P, P), P)):
            raise SpectrumError("spectrum not rational-semisimple")
    for (l1, P1) in decomp:
        for (l2, P2) in decomp:
            if l1 != l2 and not is_zero_matrix(mat_mul(P1, P2)):
                raise SpectrumError("spectrum not rational-semisimple")
    if not is_zero_matrix(mat_sub(check, identity(n))) or not is_zero_matrix(mat_sub(recon, A)):
        raise SpectrumError("spectrum not rational-semisimple")
    return decomp
