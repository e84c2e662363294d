"""Exact integer/rational linear algebra and integer polynomials.

Everything here works on Python ints and :class:`fractions.Fraction`; there is
no floating point. Matrices are small (rank <= 20), so plain row lists are
fast enough and keep the arithmetic transparent.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

from .errors import NotQuasiunipotent

__all__ = [
    "Matrix", "IntPoly", "INFINITE", "hnf", "snf", "kernel_saturated",
    "char_poly", "cyclotomic", "cyclotomic_factor", "matrix_order",
    "solve_left", "lcm", "totient",
]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def totient(m: int) -> int:
    out, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            out -= out // p
        p += 1
    if n > 1:
        out -= out // n
    return out


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Infinite"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


class Matrix:
    """Immutable dense matrix over ℤ (or ℚ via Fraction entries).

    Column-action convention: a matrix acts on coordinate column vectors,
    ``M @ v``; column ``j`` holds the image of the ``j``-th basis vector.
    """

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise ValueError("ragged matrix")
        else:
            self.ncols = ncols or 0
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls(((0,) * c for _ in range(r)), ncols=c)

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls(((entries[i] if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not cols:
            return cls.zeros(nrows or 0, 0)
        return cls(zip(*cols))

    # basic protocol -----------------------------------------------------
    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        if not self.nrows:
            return Matrix.zeros(self.ncols, 0)
        return Matrix(zip(*self.rows), ncols=self.nrows)

    # arithmetic ---------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
            return Matrix(
                (tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
                ncols=other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix((tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), ncols=self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix((tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), ncols=self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix((tuple(-a for a in r) for r in self.rows), ncols=self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix((tuple(c * a for a in r) for r in self.rows), ncols=self.ncols)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product in lexicographic index order (i, k) -> i*other.n + k."""
        return Matrix(
            tuple(a * b for a in r1 for b in r2) for r1 in self.rows for r2 in other.rows
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix((tuple(self.rows[i][j] for j in cols) for i in rows), ncols=len(cols))

    def vstack(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows + other.rows, ncols=self.ncols or other.ncols)

    # predicates ---------------------------------------------------------
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integral(self) -> bool:
        return all(isinstance(a, int) or a.denominator == 1 for r in self.rows for a in r)

    def to_int(self) -> "Matrix":
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return Matrix((tuple(int(a) for a in r) for r in self.rows), ncols=self.ncols)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_symmetric(self) -> bool:
        return self == self.T

    def is_unimodular(self) -> bool:
        return self.is_square() and self.is_integral() and self.det() in (1, -1)

    # determinants and inverses -----------------------------------------
    def det(self):
        if not self.is_square():
            raise ValueError("determinant of non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        if self.is_integral():
            return _bareiss_det([list(map(int, r)) for r in self.rows])
        a = [list(map(Fraction, r)) for r in self.rows]
        det = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            for i in range(c + 1, n):
                f = a[i][c] / a[c][c]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return det

    def inverse(self) -> "Matrix":
        """Exact inverse; integral result when the matrix is unimodular."""
        n = self.nrows
        aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
               for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[c], aug[piv] = aug[piv], aug[c]
            p = aug[c][c]
            aug[c] = [x / p for x in aug[c]]
            for i in range(n):
                if i != c and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        inv = Matrix(r[n:] for r in aug)
        return inv.to_int() if inv.is_integral() else inv

    def rank(self) -> int:
        a = [list(map(Fraction, r)) for r in self.rows]
        rank = 0
        for c in range(self.ncols):
            piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            for i in range(rank + 1, len(a)):
                f = a[i][c] / a[rank][c]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
            rank += 1
        return rank


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_left(basis: Matrix, v: Sequence) -> tuple | None:
    """Rational coefficients x with ``x · basis = v`` (rows of ``basis``), or None."""
    k, n = basis.shape
    # augmented system basisᵀ x = v, eliminated column by column
    a = [[Fraction(basis.rows[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    row, pivots = 0, []
    for c in range(k):
        piv = next((i for i in range(row, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][c]
        a[row] = [x / p for x in a[row]]
        for i in range(n):
            if i != row and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(c)
        row += 1
    if any(a[i][k] != 0 for i in range(row, n)):
        return None
    x = [Fraction(0)] * k
    for r, c in enumerate(pivots):
        x[c] = a[r][k]
    return tuple(x)


# ---------------------------------------------------------------------------
# normal forms


def hnf(m: Matrix) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form: returns (H, U) with U unimodular and H = U·M.

    Pivots are positive and entries above a pivot lie in [0, pivot). Zero rows
    sit at the bottom.
    """
    a = [list(r) for r in m.rows]
    nr, nc = m.shape
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]

    def sub(i, r, q):
        a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        u[i] = [x - q * y for x, y in zip(u[i], u[r])]

    r = 0
    for c in range(nc):
        if r == nr:
            break
        while True:
            nz = [i for i in range(r, nr) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[piv] = a[piv], a[r]
            u[r], u[piv] = u[piv], u[r]
            clean = True
            for i in range(r + 1, nr):
                if a[i][c]:
                    sub(i, r, a[i][c] // a[r][c])
                    clean = clean and a[i][c] == 0
            if clean:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            sub(i, r, a[i][c] // a[r][c])
        r += 1
    return Matrix(a, ncols=nc), Matrix(u, ncols=nr)


def snf(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: returns (D, U, V) with D = U·M·V, d1 | d2 | ..., di >= 0."""
    a = [list(r) for r in m.rows]
    nr, nc = m.shape
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i, r, q):  # row_i -= q row_r
        a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        u[i] = [x - q * y for x, y in zip(u[i], u[r])]

    def col_op(j, c, q):  # col_j -= q col_c
        for row in a:
            row[j] -= q * row[c]
        for row in v:
            row[j] -= q * row[c]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _finish_snf(a, u, v, nr, nc)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_op(i, t, a[i][t] // p)
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
            if any(a[i][t] for i in range(t + 1, nr)) or any(a[t][j] for j in range(t + 1, nc)):
                continue
            bad = next((i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
            if bad is None:
                break
            row_op(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return _finish_snf(a, u, v, nr, nc)


def _finish_snf(a, u, v, nr, nc):
    return Matrix(a, ncols=nc), Matrix(u, ncols=nr), Matrix(v, ncols=nc)


def invariant_factors(m: Matrix) -> list[int]:
    d, _, _ = snf(m)
    return [d[i, i] for i in range(min(d.shape))]


def is_saturated_basis(basis: Matrix) -> bool:
    """Rows independent and primitive: all SNF invariant factors equal 1."""
    if basis.nrows == 0:
        return True
    return all(f == 1 for f in invariant_factors(basis))


def kernel_saturated(m: Matrix) -> Matrix:
    """Basis (rows, canonical HNF) of the integer kernel {v : M·v = 0}."""
    nc = m.ncols
    h, u = hnf(m.T)
    kernel = [u.rows[i] for i in range(h.nrows) if not any(h.rows[i])]
    if not kernel:
        return Matrix.zeros(0, nc)
    k, _ = hnf(Matrix(kernel))
    return k


def saturate(rows: Matrix) -> Matrix:
    """Canonical basis of (ℚ-span of rows) ∩ ℤ^n."""
    n = rows.ncols
    if rows.nrows == 0 or rows.is_zero():
        return Matrix.zeros(0, n)
    # the saturation is the kernel of the kernel
    return kernel_saturated(kernel_saturated(rows))


def canonical_basis(rows: Matrix) -> Matrix:
    """Nonzero rows of the HNF, i.e. a canonical basis of the row lattice."""
    h, _ = hnf(rows)
    keep = [r for r in h.rows if any(r)]
    return Matrix(keep, ncols=rows.ncols)


# ---------------------------------------------------------------------------
# polynomials


class IntPoly:
    """Integer polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls([0] * k + [c])

    @classmethod
    def t_minus(cls, a: int) -> "IntPoly":
        return cls([-a, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            coef = str(abs(c)) if (abs(c) != 1 or k == 0) else ""
            sign = "-" if c < 0 else "+"
            terms.append((sign, coef + mono))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-x for x in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(other * x for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return IntPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        out = IntPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, divisor: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        if not divisor.is_monic():
            raise ValueError("division only by monic polynomials")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPoly([]), self
        quot = [0] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            q = rem[k]
            if q:
                quot[k - dd] = q
                for j, b in enumerate(divisor.coeffs):
                    rem[k - dd + j] -= q * b
        return IntPoly(quot), IntPoly(rem)

    def __floordiv__(self, divisor: "IntPoly") -> "IntPoly":
        return self.divmod(divisor)[0]

    def __mod__(self, divisor: "IntPoly") -> "IntPoly":
        return self.divmod(divisor)[1]

    def divides(self, other: "IntPoly") -> bool:
        return (other % self).is_zero()

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def substitute_neg(self) -> "IntPoly":
        """p(-t)."""
        return IntPoly(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs))

    def at_matrix(self, m: Matrix) -> Matrix:
        n = m.nrows
        out = Matrix.zeros(n, n)
        ident = Matrix.identity(n)
        for c in reversed(self.coeffs):
            out = out @ m + ident.scale(c)
        return out


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPoly:
    """Φ_m, the minimal polynomial of a primitive m-th root of unity."""
    p = IntPoly.monomial(m) - IntPoly([1])
    for d in range(1, m):
        if m % d == 0:
            p = p // cyclotomic(d)
    return p


def cyclotomic_product(factors: dict[int, int]) -> IntPoly:
    out = IntPoly([1])
    for m, e in sorted(factors.items()):
        out = out * cyclotomic(m) ** e
    return out


def cyclotomic_factor(p: IntPoly) -> dict[int, int]:
    """Multiplicities {m: e} with p = ∏ Φ_m^e; raises NotQuasiunipotent otherwise."""
    if not p.is_monic():
        raise ValueError("cyclotomic_factor expects a monic polynomial")
    d = p.degree
    found: dict[int, int] = {}
    rest = p
    # φ(m) >= sqrt(m/2), so φ(m) <= d forces m <= 2 d²
    for m in range(1, 2 * d * d + 3):
        if rest.degree <= 0:
            break
        if totient(m) > rest.degree:
            continue
        phi = cyclotomic(m)
        while True:
            q, r = rest.divmod(phi)
            if not r.is_zero():
                break
            rest = q
            found[m] = found.get(m, 0) + 1
    if rest != IntPoly([1]):
        raise NotQuasiunipotent(rest, found)
    return dict(sorted(found.items()))


def format_cyclotomic(factors: dict[int, int]) -> str:
    return "".join(f"Φ{m}" + (f"^{e}" if e > 1 else "") for m, e in sorted(factors.items(), reverse=True))


def char_poly(m: Matrix) -> IntPoly:
    """det(t·I − M) by the division-free Berkowitz recursion."""
    if not m.is_square():
        raise ValueError("char_poly of non-square matrix")
    n = m.nrows
    if n == 0:
        return IntPoly([1])
    a = m.rows
    vect = [1, -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        toep = [1, -a[r][r]]
        x = col
        for _ in range(r):
            toep.append(-sum(p * q for p, q in zip(row, x)))
            x = [sum(a[i][j] * x[j] for j in range(r)) for i in range(r)]
        vect = [sum(toep[i - j] * vect[j] for j in range(len(vect)) if 0 <= i - j < len(toep))
                for i in range(r + 2)]
    return IntPoly(reversed(vect))


def matrix_order(m: Matrix, cap: int = 100_000):
    """Least k >= 1 with M^k = I, or INFINITE."""
    try:
        factors = cyclotomic_factor(char_poly(m))
    except NotQuasiunipotent:
        return INFINITE
    e = lcm(*factors) if factors else 1
    if e > cap:
        return INFINITE
    ident = Matrix.identity(m.nrows)
    if m ** e != ident:
        return INFINITE
    for k in sorted(d for d in range(1, e + 1) if e % d == 0):
        if m ** k == ident:
            return k
    return e  # unreachable


def integer_points_near(center: Fraction, radius_sq: Fraction) -> range:
    """Range of integers x that may satisfy (x - center)² <= radius_sq (a superset)."""
    s = isqrt(int(radius_sq)) + 1
    lo = (center.numerator // center.denominator) - s
    hi = -((-center.numerator) // center.denominator) + s
    return range(lo, hi + 1)
