"""Rational R-matrices: intertwiner solve, Yang-Baxter, unitarity, degeneration.

The solver imposes R(z) · (pi_V ⊗ pi_{W,z})(Δ(x)) = (pi_V ⊗ pi_{W,z})(Δ^op(x)) · R(z)
over the Chevalley generators, with the second factor carrying the homogeneous
grading shift (z on the affine node only). Unknowns are restricted to entries
connecting equal classical-weight classes, which the K-generator conditions
force anyway; this keeps the sl3 system at 15 unknowns instead of 81.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Mat, SpanBasis, flip, kron, rank
from .repcore import Rep
from .scalars import PoleAtPoint, Rat, one, z as z_var, zero


class RmatError(Exception):
    pass


class KernelDimension(RmatError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"intertwiner kernel has dimension {k}, expected 1")


class NoHighestWeightVector(RmatError):
    pass


@dataclass
class RMatrixResult:
    matrix: Mat
    kernel_dim: int
    hw_index: int
    scalar: Rat

    def to_json(self):
        return {"matrix": self.matrix.to_json(),
                "kernel_dim": self.kernel_dim,
                "normalization": {"hw_index": self.hw_index,
                                  "scalar": str(self.scalar)}}


def _shifted_pair_actions(v: Rep, w: Rep, zval: Rat):
    """Matrices of Δ(x) and Δ^op(x) on V ⊗ W_z for x in {E_i, F_i}."""
    cd = v.cartan
    Iv, Iw = Mat.identity(v.dim), Mat.identity(w.dim)
    out = []
    for i in cd.nodes:
        sE = zval if i == 0 else one
        Ew = w.E[i].scale(sE)
        Fw = w.F[i].scale(sE.inv())
        A = kron(v.E[i], Iw) + kron(v.K[i], Ew)
        B = kron(Iv, Ew) + kron(v.E[i], w.K[i])
        out.append((A, B))
        A = kron(v.F[i], w.Kinv(i)) + kron(Iv, Fw)
        B = kron(v.Kinv(i), Fw) + kron(v.F[i], Iw)
        out.append((A, B))
    return out


def _tensor_weight_classes(v: Rep, w: Rep):
    classes: dict[tuple, list[int]] = {}
    labels = []
    for i in range(v.dim):
        for j in range(w.dim):
            cw = tuple(a + b for a, b in
                       zip(v.classical_weight(i), w.classical_weight(j)))
            classes.setdefault(cw, []).append(i * w.dim + j)
            labels.append(cw)
    return classes, labels


def solve_R(v: Rep, w: Rep) -> RMatrixResult:
    """Solve for the rational R-matrix, normalized on the highest-weight
    tensor vector. Raises KernelDimension if the solution space is not a
    line, NoHighestWeightVector if the weight-maximal block is not 1-dim."""
    n = v.dim * w.dim
    classes, labels = _tensor_weight_classes(v, w)
    # unknowns: (r, c) with equal class
    unk: dict[tuple[int, int], int] = {}
    for members in classes.values():
        for r in members:
            for c in members:
                unk[(r, c)] = len(unk)
    nunk = len(unk)
    span = SpanBasis(nunk)
    for A, B in _shifted_pair_actions(v, w, z_var):
        Anz_by_col: list[list[tuple[int, Rat]]] = [[] for _ in range(n)]
        Bnz_by_row: list[list[tuple[int, Rat]]] = [[] for _ in range(n)]
        for r in range(n):
            for c in range(n):
                if not A[r, c].is_zero():
                    Anz_by_col[c].append((r, A[r, c]))
                if not B[r, c].is_zero():
                    Bnz_by_row[r].append((c, B[r, c]))
        for r in range(n):
            for c in range(n):
                coeffs: dict[int, Rat] = {}
                for k, a in Anz_by_col[c]:
                    u = unk.get((r, k))
                    if u is not None:
                        coeffs[u] = coeffs.get(u, zero) + a
                for k, b in Bnz_by_row[r]:
                    u = unk.get((k, c))
                    if u is not None:
                        coeffs[u] = coeffs.get(u, zero) - b
                if coeffs:
                    row = [zero] * nunk
                    nz = False
                    for u, val in coeffs.items():
                        row[u] = val
                        nz = nz or not val.is_zero()
                    if nz:
                        span.add(row)
    kernel = span.nullspace()
    if len(kernel) != 1:
        raise KernelDimension(len(kernel))
    sol = kernel[0]
    R = Mat.zeros(n)
    for (r, c), u in unk.items():
        R.data[r][c] = sol[u]
    # normalization block: weight-maximal class by coordinate sum, lex tie-break
    top = max(classes, key=lambda cw: (sum(cw), cw))
    block = classes[top]
    if len(block) != 1:
        raise NoHighestWeightVector(
            f"weight-maximal block has dimension {len(block)}")
    hw = block[0]
    pivot = R[hw, hw]
    if pivot.is_zero():
        raise NoHighestWeightVector("solution vanishes on the highest-weight vector")
    scalar = pivot.inv()
    return RMatrixResult(R.scale(scalar), 1, hw, scalar)


def _embed(mat: Mat, dims, slots) -> Mat:
    """Embed an operator acting on the tensor factors listed in ``slots``
    (in that order) into the full 3-fold tensor product."""
    n = dims[0] * dims[1] * dims[2]
    out = Mat.zeros(n)

    def split(idx):
        c = idx % dims[2]
        b = (idx // dims[2]) % dims[1]
        a = idx // (dims[1] * dims[2])
        return [a, b, c]

    def join(t):
        return (t[0] * dims[1] + t[1]) * dims[2] + t[2]

    sub = [dims[s] for s in slots]
    other = [s for s in range(3) if s not in slots]
    for row in range(n):
        tr = split(row)
        ridx = 0
        for s in slots:
            ridx = ridx * dims[s] + tr[s]
        for cidx in range(sub[0] * sub[1] if len(sub) == 2 else sub[0]):
            val = mat[ridx, cidx]
            if val.is_zero():
                continue
            tc = tr[:]
            rem = cidx
            for s in reversed(slots):
                tc[s] = rem % dims[s]
                rem //= dims[s]
            for o in other:
                tc[o] = tr[o]
            out.data[row][join(tc)] = val
    return out


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"ok": self.ok, "detail": self.detail}


def _first_nonzero(m: Mat):
    for i in range(m.nrows):
        for j in range(m.ncols):
            if not m[i, j].is_zero():
                return i, j, m[i, j]
    return None


def verify_YBE(u: Rep, v: Rep, w: Rep,
               Ruv: Mat | None = None, Ruw: Mat | None = None,
               Rvw: Mat | None = None) -> CheckReport:
    """Exact two-variable Yang-Baxter check:
    R12(z) R13(zw) R23(w) = R23(w) R13(zw) R12(z) on U ⊗ V ⊗ W."""
    from .scalars import w as w_var
    Ruv = Ruv if Ruv is not None else solve_R(u, v).matrix
    Ruw = Ruw if Ruw is not None else solve_R(u, w).matrix
    Rvw = Rvw if Rvw is not None else solve_R(v, w).matrix
    dims = (u.dim, v.dim, w.dim)
    R12 = _embed(Ruv, dims, (0, 1))
    R13 = _embed(Ruw.substitute({"z": z_var * w_var}), dims, (0, 2))
    R23 = _embed(Rvw.substitute({"z": w_var}), dims, (1, 2))
    lhs = R12 @ R13 @ R23
    rhs = R23 @ R13 @ R12
    diff = lhs - rhs
    if diff.is_zero():
        return CheckReport(True)
    i, j, val = _first_nonzero(diff)
    return CheckReport(False, f"residual at ({i},{j}): {val}")


def verify_R_unitarity(v: Rep, w: Rep,
                       Rvw: Mat | None = None, Rwv: Mat | None = None) -> CheckReport:
    """R_VW(z)^{-1} = (1 2) ∘ R_WV(1/z) ∘ (1 2), checked without inversion."""
    Rvw = Rvw if Rvw is not None else solve_R(v, w).matrix
    Rwv = Rwv if Rwv is not None else solve_R(w, v).matrix
    Pvw = flip(v.dim, w.dim)   # V ⊗ W -> W ⊗ V
    Pwv = flip(w.dim, v.dim)
    other = Pwv @ Rwv.substitute({"z": z_var.inv()}) @ Pvw
    prod = other @ Rvw
    if prod.is_identity():
        return CheckReport(True)
    i, j, val = _first_nonzero(prod - Mat.identity(prod.nrows))
    return CheckReport(False, f"residual at ({i},{j}): {val}")


def detect_degeneration(v: Rep, w: Rep, point: dict,
                        R: Mat | None = None) -> str:
    """Classify R at a parameter point: 'pole', 'singular', or
    'regular-invertible'."""
    R = R if R is not None else solve_R(v, w).matrix
    try:
        at = R.substitute(point)
    except PoleAtPoint:
        return "pole"
    if rank(at) < at.nrows:
        return "singular"
    return "regular-invertible"
