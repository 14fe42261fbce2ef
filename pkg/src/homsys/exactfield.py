"""Exact scalar fields and dense linear algebra over them.

Two backends are provided: the rationals (``Fraction`` entries) and a prime
field F_p (``int`` residues in ``[0, p)``).  Everything downstream works with
:class:`Matrix` objects tied to one :class:`Field`.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple


class Field:
    """Common interface of the two scalar backends."""

    zero: object
    one: object

    def reduce(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def parse(self, text):
        raise NotImplementedError

    def random(self, rng: random.Random, bound: int = 20):
        raise NotImplementedError

    @property
    def characteristic(self) -> int:
        raise NotImplementedError


class RationalField(Field):
    zero = Fraction(0)
    one = Fraction(1)

    def reduce(self, x):
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def parse(self, text):
        if isinstance(text, float):
            raise ValueError("floating-point literals are not exact; use '3/7' strings")
        return Fraction(text)

    def random(self, rng, bound=20):
        return Fraction(rng.randint(-bound, bound))

    @property
    def characteristic(self):
        return 0

    def describe(self) -> str:
        return "rational"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class PrimeField(Field):
    def __init__(self, p: int = 101):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1

    def reduce(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def parse(self, text):
        if isinstance(text, float):
            raise ValueError("floating-point literals are not exact")
        return self.reduce(Fraction(text))

    def random(self, rng, bound=20):
        return rng.randrange(self.p)

    @property
    def characteristic(self):
        return self.p

    def describe(self) -> str:
        return f"p:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_spec(spec: str | dict | None) -> Field:
    """Parse ``"rational"``, ``"p:101"`` or the JSON form ``{"type": ...}``."""
    if spec is None or spec == "rational":
        return QQ
    if isinstance(spec, dict):
        if spec.get("type") == "rational":
            return QQ
        if spec.get("type") == "prime":
            return PrimeField(int(spec.get("p", 101)))
        raise ValueError(f"unknown field {spec!r}")
    if isinstance(spec, str) and spec.startswith("p:"):
        return PrimeField(int(spec[2:]))
    raise ValueError(f"unknown field {spec!r}")


class Matrix:
    """Dense matrix over an exact field (row-major, immutable by convention)."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_key")

    def __init__(self, field: Field, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [[field.zero] * ncols for _ in range(nrows)]
        else:
            rows = [[field.reduce(x) for x in r] for r in rows]
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError(f"entries do not match shape {nrows}x{ncols}")
        self.rows = rows
        self._key = None

    # construction -----------------------------------------------------
    @classmethod
    def _raw(cls, field, nrows, ncols, rows):
        m = cls.__new__(cls)
        m.field, m.nrows, m.ncols, m.rows, m._key = field, nrows, ncols, rows, None
        return m

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls._raw(field, nrows, ncols, [[field.zero] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n):
        rows = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
        return cls._raw(field, n, n, rows)

    @classmethod
    def from_columns(cls, field, nrows, cols: Sequence[Sequence]):
        rows = [[field.reduce(c[i]) for c in cols] for i in range(nrows)]
        return cls._raw(field, nrows, len(cols), rows)

    @classmethod
    def from_rows(cls, field, ncols, rows: Sequence[Sequence]):
        return cls(field, len(rows), ncols, [list(r) for r in rows])

    # basic protocol ---------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def key(self):
        if self._key is None:
            self._key = (self.nrows, self.ncols, tuple(tuple(r) for r in self.rows))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {[list(map(str, r)) for r in self.rows]})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    # arithmetic -------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.field.reduce
        return Matrix._raw(self.field, self.nrows, self.ncols,
                           [[red(a + b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.field.reduce
        return Matrix._raw(self.field, self.nrows, self.ncols,
                           [[red(a - b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        red = self.field.reduce
        return Matrix._raw(self.field, self.nrows, self.ncols, [[red(-a) for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        red = self.field.reduce
        return Matrix._raw(self.field, self.nrows, self.ncols, [[red(c * a) for a in r] for r in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        red = self.field.reduce
        zero = self.field.zero
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            row = []
            for c in cols:
                s = zero
                for k, a in nz:
                    b = c[k]
                    if b != 0:
                        s += a * b
                row.append(red(s))
            out.append(row)
        return Matrix._raw(self.field, self.nrows, other.ncols, out)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        red = self.field.reduce
        zero = self.field.zero
        nz = [(k, a) for k, a in enumerate(v) if a != 0]
        return tuple(red(sum((r[k] * a for k, a in nz), zero)) for r in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, self.ncols, self.nrows, [list(c) for c in zip(*self.rows)]
                           if self.nrows else [[] for _ in range(self.ncols)])

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # stacking ---------------------------------------------------------
    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row mismatch in hstack")
        return Matrix._raw(self.field, self.nrows, self.ncols + other.ncols,
                           [r + s for r, s in zip(self.rows, other.rows)])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch in vstack")
        return Matrix._raw(self.field, self.nrows + other.nrows, self.ncols,
                           [list(r) for r in self.rows] + [list(r) for r in other.rows])

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix._raw(self.field, len(rows), len(cols), [[self.rows[i][j] for j in cols] for i in rows])

    # elimination ------------------------------------------------------
    def rref(self):
        """Reduced row echelon form and pivot columns (first-nonzero pivoting)."""
        F = self.field
        red = F.reduce
        m = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            if r >= self.nrows:
                break
            piv = next((i for i in range(r, self.nrows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = F.inv(m[r][c])
            m[r] = [red(x * inv) for x in m[r]]
            for i in range(self.nrows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    ri = m[i]
                    m[i] = [red(a - f * b) for a, b in zip(ri, m[r])]
            pivots.append(c)
            r += 1
        return Matrix._raw(F, self.nrows, self.ncols, m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("non-square matrix")
        n = self.nrows
        aug, piv = self.hstack(Matrix.identity(self.field, n)).rref()
        if [p for p in piv if p < n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return aug.submatrix(range(n), range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


def kernel_basis(M: Matrix) -> list:
    """Basis of the right null space {v : M v = 0}, one tuple per vector."""
    F = M.field
    R, pivots = M.rref()
    free = [c for c in range(M.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [F.zero] * M.ncols
        v[f] = F.one
        for i, p in enumerate(pivots):
            v[p] = F.reduce(-R.rows[i][f])
        basis.append(tuple(v))
    return basis


def column_space_basis(M: Matrix) -> list:
    """Pivot columns of ``M``: a basis of its image, as tuples."""
    _, pivots = M.rref()
    return [M.column(c) for c in pivots]


def rank_of_vectors(field: Field, dim: int, vecs: Sequence[Sequence]) -> int:
    if not vecs:
        return 0
    return Matrix.from_columns(field, dim, vecs).rank()


def independent_subset(field: Field, dim: int, vecs: Sequence[Sequence]) -> list:
    """Indices of a maximal linearly independent prefix-greedy subset."""
    if not vecs:
        return []
    _, piv = Matrix.from_columns(field, dim, vecs).rref()
    return piv


def solve(A: Matrix, b: Sequence):
    """One solution x of A x = b, or ``None`` when the system is inconsistent."""
    F = A.field
    aug = A.hstack(Matrix.from_columns(F, A.nrows, [b]))
    R, pivots = aug.rref()
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [F.zero] * A.ncols
    for i, p in enumerate(pivots):
        x[p] = R.rows[i][A.ncols]
    return tuple(x)


def solve_many(A: Matrix, B: Matrix):
    """Solve A X = B column by column; ``None`` if some column is inconsistent."""
    F = A.field
    aug = A.hstack(B)
    R, pivots = aug.rref()
    if any(p >= A.ncols for p in pivots):
        return None
    X = Matrix.zeros(F, A.ncols, B.ncols)
    for i, p in enumerate(pivots):
        for j in range(B.ncols):
            X.rows[p][j] = R.rows[i][A.ncols + j]
    return X


def complement_basis(field: Field, dim: int, sub: Sequence[Sequence]) -> list:
    """Standard basis vectors completing ``sub`` to a basis of field^dim."""
    cols = list(sub) + [tuple(field.one if i == j else field.zero for i in range(dim)) for j in range(dim)]
    piv = independent_subset(field, dim, cols)
    k = len(sub)
    return [cols[p] for p in piv if p >= k]


def vec_add(F: Field, u, v):
    return tuple(F.reduce(a + b) for a, b in zip(u, v))


def vec_scale(F: Field, c, u):
    return tuple(F.reduce(c * a) for a in u)


def lin_comb(F: Field, coeffs, vecs, dim: int):
    out = [F.zero] * dim
    for c, v in zip(coeffs, vecs):
        if c == 0:
            continue
        for i, a in enumerate(v):
            if a != 0:
                out[i] += c * a
    return tuple(F.reduce(x) for x in out)


# polynomials ----------------------------------------------------------

def min_poly(phi: Matrix) -> list:
    """Monic minimal polynomial of a square matrix, coefficients low -> high."""
    F = phi.field
    n = phi.nrows
    if n == 0:
        return [F.one]
    powers = [Matrix.identity(F, n)]
    flat = [tuple(x for r in powers[0].rows for x in r)]
    while True:
        nxt = powers[-1] @ phi
        v = tuple(x for r in nxt.rows for x in r)
        A = Matrix.from_columns(F, n * n, flat)
        sol = solve(A, v)
        if sol is not None:
            return [F.reduce(-c) for c in sol] + [F.one]
        powers.append(nxt)
        flat.append(v)


def poly_at_matrix(coeffs: Sequence, phi: Matrix) -> Matrix:
    F = phi.field
    n = phi.nrows
    acc = Matrix.zeros(F, n, n)
    I = Matrix.identity(F, n)
    for c in reversed(coeffs):
        acc = acc @ phi + I.scale(c)
    return acc


def factor_poly(field: Field, coeffs: Sequence) -> list:
    """Factor a monic polynomial into irreducible powers.

    Returns ``[(factor_coeffs_low_to_high, exponent), ...]``; complete over F_p
    and over the rationals.
    """
    import sympy

    x = sympy.Symbol("x")
    hi = list(reversed(coeffs))
    if isinstance(field, PrimeField):
        poly = sympy.Poly([int(c) for c in hi], x, modulus=field.p)
        _, facs = poly.factor_list()
        out = []
        for f, e in facs:
            cs = [field.reduce(int(c)) for c in reversed(f.all_coeffs())]
            lead = field.inv(cs[-1])
            out.append(([field.reduce(c * lead) for c in cs], e))
        return out
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in hi], x, domain=sympy.QQ)
    _, facs = poly.factor_list()
    out = []
    for f, e in facs:
        cs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(f.all_coeffs())]
        lead = cs[-1]
        out.append(([c / lead for c in cs], e))
    return out


def split_by_min_poly(phi: Matrix) -> list:
    """Bases of the primary components ker f_i(phi)^e_i of a square matrix.

    The factorisation of the minimal polynomial into pairwise coprime prime
    powers is complete over both backends; the blocks are phi-invariant and
    direct-sum to the whole space.
    """
    n = phi.nrows
    if n == 0:
        return []
    mp = min_poly(phi)
    factors = factor_poly(phi.field, mp)
    if len(factors) <= 1:
        return [[tuple(phi.field.one if i == j else phi.field.zero for i in range(n)) for j in range(n)]]
    blocks = []
    for f, e in factors:
        fe = [phi.field.one]
        for _ in range(e):
            fe = poly_mul(phi.field, fe, f)
        blocks.append(kernel_basis(poly_at_matrix(fe, phi)))
    return blocks


def poly_mul(F: Field, a: Sequence, b: Sequence) -> list:
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return [F.reduce(c) for c in out]


def is_irreducible(field: Field, coeffs: Sequence) -> bool:
    facs = factor_poly(field, coeffs)
    return len(facs) == 1 and facs[0][1] == 1 and len(facs[0][0]) == len(coeffs)
