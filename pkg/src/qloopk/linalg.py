"""Dense exact linear algebra over the scalar fraction field.

Matrices are small (at most a few hundred rows) but their entries are
multivariate rational functions, so the cost model is dominated by entry
arithmetic, not by dimension. The elimination routines therefore pick pivots
of smallest total degree to keep intermediate entries small, and the matrix
product skips structural zeros.
"""

from __future__ import annotations

from .scalars import Rat, one, zero


class LinalgError(Exception):
    pass


class ShapeMismatch(LinalgError):
    pass


class NotInvertible(LinalgError):
    pass


class Mat:
    """Matrix with :class:`Rat` entries."""

    __slots__ = ("data", "nrows", "ncols")

    def __init__(self, data):
        rows = [[x if isinstance(x, Rat) else Rat(x) for x in row] for row in data]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeMismatch("ragged rows")
        self.data = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zeros(n: int, m: int | None = None) -> "Mat":
        m = n if m is None else m
        return Mat([[zero] * m for _ in range(n)])

    @staticmethod
    def identity(n: int) -> "Mat":
        out = Mat.zeros(n)
        for i in range(n):
            out.data[i][i] = one
        return out

    @staticmethod
    def diagonal(entries) -> "Mat":
        entries = [x if isinstance(x, Rat) else Rat(x) for x in entries]
        out = Mat.zeros(len(entries))
        for i, x in enumerate(entries):
            out.data[i][i] = x
        return out

    @staticmethod
    def unit(n: int, m: int, i: int, j: int) -> "Mat":
        out = Mat.zeros(n, m)
        out.data[i][j] = one
        return out

    # -- basic access -----------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.nrows)]

    def copy(self) -> "Mat":
        return Mat([row[:] for row in self.data])

    def shape(self):
        return (self.nrows, self.ncols)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "Mat") -> "Mat":
        if self.shape() != other.shape():
            raise ShapeMismatch("add: shapes differ")
        return Mat([[a + b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape() != other.shape():
            raise ShapeMismatch("sub: shapes differ")
        return Mat([[a - b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.data, other.data)])

    def __neg__(self) -> "Mat":
        return Mat([[-a for a in row] for row in self.data])

    def scale(self, c) -> "Mat":
        c = c if isinstance(c, Rat) else Rat(c)
        if c.is_zero():
            return Mat.zeros(self.nrows, self.ncols)
        return Mat([[c * a for a in row] for row in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ShapeMismatch("matmul: inner dimensions differ")
        # index the nonzero entries once; products are the expensive part
        lrows = [[(j, a) for j, a in enumerate(row) if not a.is_zero()]
                 for row in self.data]
        out = [[zero] * other.ncols for _ in range(self.nrows)]
        for i, items in enumerate(lrows):
            for j, a in items:
                orow = other.data[j]
                for k, b in enumerate(orow):
                    if not b.is_zero():
                        out[i][k] = out[i][k] + a * b
        return Mat(out)

    def __mul__(self, other):
        if isinstance(other, Mat):
            return self @ other
        return self.scale(other)

    __rmul__ = scale

    def pow(self, n: int) -> "Mat":
        if self.nrows != self.ncols:
            raise ShapeMismatch("pow: not square")
        out = Mat.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base if n > 1 else base
            n >>= 1
        return out

    def transpose(self) -> "Mat":
        return Mat([[self.data[i][j] for i in range(self.nrows)]
                    for j in range(self.ncols)])

    def apply(self, f) -> "Mat":
        return Mat([[f(a) for a in row] for row in self.data])

    def substitute(self, assignments: dict) -> "Mat":
        return self.apply(lambda a: a.substitute(assignments))

    def mul_vec(self, v):
        if len(v) != self.ncols:
            raise ShapeMismatch("mul_vec: length mismatch")
        out = []
        for row in self.data:
            acc = zero
            for a, x in zip(row, v):
                if not a.is_zero() and not x.is_zero():
                    acc = acc + a * x
            out.append(acc)
        return out

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.data for a in row)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all((self.data[i][j].is_one() if i == j else self.data[i][j].is_zero())
                   for i in range(self.nrows) for j in range(self.ncols))

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape() != other.shape():
            return False
        return all(a == b for r1, r2 in zip(self.data, other.data)
                   for a, b in zip(r1, r2))

    def __str__(self):
        return "\n".join("[" + ", ".join(str(a) for a in row) + "]"
                         for row in self.data)

    def to_json(self):
        return [[str(a) for a in row] for row in self.data]


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; basis e_i ⊗ f_j ↦ index i * b.nrows-block + j."""
    out = Mat.zeros(a.nrows * b.nrows, a.ncols * b.ncols)
    for i in range(a.nrows):
        for j in range(a.ncols):
            x = a.data[i][j]
            if x.is_zero():
                continue
            for k in range(b.nrows):
                for l in range(b.ncols):
                    y = b.data[k][l]
                    if not y.is_zero():
                        out.data[i * b.nrows + k][j * b.ncols + l] = x * y
    return out


def flip(dim_v: int, dim_w: int) -> Mat:
    """The tensor swap V ⊗ W → W ⊗ V on basis vectors."""
    out = Mat.zeros(dim_v * dim_w, dim_v * dim_w)
    for i in range(dim_v):
        for j in range(dim_w):
            out.data[j * dim_v + i][i * dim_w + j] = one
    return out


def _complexity(x: Rat) -> int:
    return x.num().total_degree() + x.den().total_degree()


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form; returns (R, pivot_columns).

    Within each column the pivot is the candidate of smallest combined
    numerator/denominator degree (first such row on ties), which keeps the
    rational-function entries from blowing up.
    """
    a = [row[:] for row in m.data]
    nr, nc = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        best, bestscore = -1, None
        for i in range(r, nr):
            if not a[i][c].is_zero():
                score = _complexity(a[i][c])
                if bestscore is None or score < bestscore:
                    best, bestscore = i, score
        if best < 0:
            continue
        a[r], a[best] = a[best], a[r]
        inv = a[r][c].inv()
        a[r] = [x * inv if not x.is_zero() else x for x in a[r]]
        for i in range(nr):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y if not y.is_zero() else x
                        for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return Mat(a), pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def nullspace(m: Mat) -> list[list[Rat]]:
    """Basis of the right kernel, one vector per free column."""
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [zero] * m.ncols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -r.data[i][f]
        basis.append(v)
    return basis


def invert(m: Mat) -> Mat:
    if m.nrows != m.ncols:
        raise NotInvertible("not square")
    n = m.nrows
    aug = Mat([row[:] + Mat.identity(n).data[i] for i, row in enumerate(m.data)])
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("singular matrix")
    return Mat([row[n:] for row in r.data])


def solve(m: Mat, rhs) -> list[Rat]:
    """Unique solution of m x = rhs; raises if inconsistent or underdetermined."""
    aug = Mat([row[:] + [rhs[i] if isinstance(rhs[i], Rat) else Rat(rhs[i])]
               for i, row in enumerate(m.data)])
    r, pivots = rref(aug)
    if m.ncols in pivots:
        raise LinalgError("inconsistent system")
    if len(pivots) < m.ncols:
        raise LinalgError("underdetermined system")
    x = [zero] * m.ncols
    for i, c in enumerate(pivots):
        x[c] = r.data[i][m.ncols]
    return x


class SpanBasis:
    """Incrementally reduced echelon basis of a subspace of row vectors.

    Used both for stacking large intertwining systems and for algebra
    closures: feed vectors, the basis keeps only the independent content.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[Rat]] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec) -> list[Rat]:
        v = [x if isinstance(x, Rat) else Rat(x) for x in vec]
        for row, pc in zip(self.rows, self.pivots):
            f = v[pc]
            if not f.is_zero():
                v = [x - f * y if not y.is_zero() else x for x, y in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        v = self.reduce(vec)
        pivot, score = -1, None
        for c in range(self.ncols):
            if not v[c].is_zero():
                s = _complexity(v[c])
                if score is None or s < score:
                    pivot, score = c, s
        if pivot < 0:
            return False
        inv = v[pivot].inv()
        v = [x * inv if not x.is_zero() else x for x in v]
        for i, row in enumerate(self.rows):
            f = row[pivot]
            if not f.is_zero():
                self.rows[i] = [x - f * y if not y.is_zero() else x
                                for x, y in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(pivot)
        return True

    def nullspace(self) -> list[list[Rat]]:
        """Kernel of the matrix whose rows are the stored vectors."""
        order = sorted(range(len(self.rows)), key=lambda i: self.pivots[i])
        mat = Mat([self.rows[i] for i in order]) if self.rows else Mat.zeros(0, self.ncols)
        if not self.rows:
            return [[one if i == j else zero for i in range(self.ncols)]
                    for j in range(self.ncols)]
        return nullspace(mat)


def algebra_closure(mats: list[Mat], max_dim: int | None = None) -> SpanBasis:
    """Echelon basis of the unital matrix algebra generated by ``mats``.

    Seeds with the identity, then multiplies basis elements by generators
    until the span stabilizes (or exceeds ``max_dim``, for early exit).
    """
    if not mats:
        raise LinalgError("no generators")
    n = mats[0].nrows
    for m in mats:
        if m.shape() != (n, n):
            raise ShapeMismatch("generators must be square of equal size")
    span = SpanBasis(n * n)

    def vec(m: Mat):
        return [m.data[i][j] for i in range(n) for j in range(n)]

    def unvec(v):
        return Mat([v[i * n:(i + 1) * n] for i in range(n)])

    frontier = []
    for m in [Mat.identity(n)] + list(mats):
        if span.add(vec(m)):
            frontier.append(m)
    while frontier:
        if max_dim is not None and span.dim >= max_dim:
            break
        new = []
        for b in frontier:
            for g in mats:
                prod = b @ g
                if span.add(vec(prod)):
                    new.append(prod)
                if max_dim is not None and span.dim >= max_dim:
                    return span
        frontier = new
    return span
