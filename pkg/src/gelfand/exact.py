"""Exact rational linear algebra and sparse multivariate polynomials.

Everything here runs on fractions.Fraction entries so that algebraic
identities (pairings, Pfaffians, Gram determinants) can be asserted with no
tolerance at all.  Matrices are plain lists of lists, vectors are lists;
nothing is mutated in place by the public functions.
"""

from __future__ import annotations

from fractions import Fraction


def fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def frac_matrix(rows):
    return [[fr(x) for x in row] for row in rows]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    cols = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def _rref(matrix):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(map(fr, row)) for row in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(matrix) -> int:
    if not matrix:
        return 0
    _, pivots = _rref(matrix)
    return len(pivots)


def nullspace(matrix, ncols=None):
    """Basis of the right kernel, one list of Fractions per basis vector."""
    if not matrix:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)] if ncols else []
    ncols = ncols or len(matrix[0])
    rows, pivots = _rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            v[pcol] = -rows[r][fcol]
        basis.append(v)
    return basis


def solve(matrix, rhs):
    """Solve A x = b exactly; raises ValueError when there is no solution."""
    aug = [list(map(fr, row)) + [fr(b)] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0])
    rows, pivots = _rref(aug)
    for row in rows:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            raise ValueError("inconsistent linear system")
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * ncols
    for r, pcol in enumerate(pivots):
        if pcol < ncols:
            x[pcol] = rows[r][-1]
    return x


def det(matrix) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [list(map(fr, row)) for row in matrix]
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = -result
        result *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def gram_schmidt_norms(gram):
    """Squared norms of the Gram-Schmidt vectors for a PSD Gram matrix.

    Returns the list of successive squared norms; a zero entry flags linear
    dependence of the corresponding vector on its predecessors.
    """
    n = len(gram)
    g = [list(map(fr, row)) for row in gram]
    coeffs = []  # rows: expansion of orthogonalized vectors in the original ones
    norms = []
    for i in range(n):
        vec = [Fraction(0)] * n
        vec[i] = Fraction(1)
        for j, prev in enumerate(coeffs):
            if norms[j] == 0:
                continue
            proj = sum(vec[a] * prev[b] * g[a][b] for a in range(n) for b in range(n) if vec[a] and prev[b])
            f = proj / norms[j]
            vec = [x - f * y for x, y in zip(vec, prev)]
        nsq = sum(vec[a] * vec[b] * g[a][b] for a in range(n) for b in range(n) if vec[a] and vec[b])
        coeffs.append(vec)
        norms.append(nsq)
    return norms


class MultiPoly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Terms map exponent tuples (fixed length ``nvars``) to nonzero Fractions.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for mono, coef in terms.items():
                c = fr(coef)
                if c != 0:
                    self.terms[tuple(mono)] = c

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            s = out.get(mono, Fraction(0)) + coef
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return MultiPoly(self.nvars, out)

    def __neg__(self):
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, Fraction(0)) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, c):
        c = fr(c)
        if c == 0:
            return MultiPoly.zero(self.nvars)
        return MultiPoly(self.nvars, {m: coef * c for m, coef in self.terms.items()})

    def __pow__(self, k: int):
        out = MultiPoly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def eval(self, point):
        total = None
        for mono, coef in self.terms.items():
            val = coef
            for e, x in zip(mono, point):
                for _ in range(e):
                    val = val * x
            total = val if total is None else total + val
        if total is None:
            return Fraction(0) if all(isinstance(x, (int, Fraction)) for x in point) else 0.0
        return total

    def diff(self, i: int):
        out = {}
        for mono, coef in self.terms.items():
            if mono[i] == 0:
                continue
            new = list(mono)
            new[i] -= 1
            out[tuple(new)] = coef * mono[i]
        return MultiPoly(self.nvars, out)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (sum(m), m), reverse=True):
            coef = self.terms[mono]
            var = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(mono) if e)
            bits.append(f"{coef}" + (f"*{var}" if var else ""))
        return " + ".join(bits)


def poly_matrix_det(mat):
    """Determinant of a square matrix of MultiPoly entries.

    Laplace expansion memoized on the remaining-column set; fine for the
    small (<= 8x8), sparse matrices this package produces.
    """
    n = len(mat)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = mat[0][0].nvars
    memo = {}

    def rec(row, cols):
        if not cols:
            return MultiPoly.const(nvars, 1)
        key = cols
        got = memo.get((row, key))
        if got is not None:
            return got
        total = MultiPoly.zero(nvars)
        for pos, c in enumerate(cols):
            entry = mat[row][c]
            if entry.is_zero():
                continue
            sub = rec(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total + (term if pos % 2 == 0 else -term)
        memo[(row, key)] = total
        return total

    return rec(0, tuple(range(n)))
