"""K-matrices: QSP generator actions, intertwiner solve, normalization,
reflection equations, unitarity, and grading conversion.

The intertwining system is K(z) · pi_{V,z}(b) = pi_{psi*(V),1/z}(b) · K(z)
with b running over the coideal generators: all B_i, the X-subalgebra
generators, and (when the restricted rank exceeds one) the theta-fixed
Cartan lattice generators. Both sides are realized concretely, so solving
is a nullspace computation over the scalar fraction field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .braid import RealizedTwist, TwistSpec, t_theta_matrix, theta_q_F, realize_twist
from .linalg import Mat, SpanBasis, flip, invert, kron
from .repcore import Rep, ell_highest_indices
from .rmat import CheckReport, _first_nonzero, solve_R
from .rootdata import (GradingShift, QSPParams, SatakeDiagram,
                       classical_in_root_basis, shift_exponent,
                       theta_on_coroots, theta_on_roots)
from .scalars import Rat, one, z as z_var, w as w_var, zero


class KmatError(Exception):
    pass


class KernelDimension(KmatError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"QSP intertwiner space has dimension {k}, expected 1")


class AmbiguousNormalization(KmatError):
    pass


class NotRestrictable(KmatError):
    pass


class NotInvolutive(KmatError):
    pass


def _cartan_fixed_generators(diagram: SatakeDiagram) -> list[tuple[int, ...]]:
    """Integer basis of the theta-fixed part of the affine coroot lattice."""
    import sympy as sp
    cd = diagram.cartan
    n1 = len(cd.a)
    cols = []
    for i in range(n1):
        e = [Fraction(0)] * n1
        e[i] = Fraction(1)
        cols.append(theta_on_coroots(diagram, tuple(e)))
    m = sp.Matrix(n1, n1, lambda r, c: sp.Rational(cols[c][r]) - (1 if r == c else 0))
    out = []
    for v in m.nullspace():
        den = sp.lcm([sp.fraction(sp.Rational(x))[1] for x in v])
        w = [int(x * den) for x in v]
        g = 0
        for x in w:
            g = sp.gcd(g, x)
        if g:
            w = [x // int(g) for x in w]
        out.append(tuple(w))
    return out


def qsp_generators(rep: Rep, params: QSPParams, shift: GradingShift,
                   zval) -> list[tuple[str, Mat]]:
    """Matrices of the shifted coideal generators Sigma_z(b) on the module."""
    diagram = params.diagram
    cd = diagram.cartan
    zval = zval if isinstance(zval, Rat) else Rat(zval)
    out = []
    thF = {i: theta_q_F(rep, diagram, i)
           for i in cd.nodes if i not in diagram.X}
    for i in cd.nodes:
        si = shift.s[i]
        if i in diagram.X:
            out.append((f"B{i}", rep.F[i].scale(zval ** (-si))))
            continue
        sth = shift_exponent(shift, theta_on_roots(diagram, cd.alpha(i)))
        m = rep.F[i].scale(zval ** (-si))
        m = m + thF[i].scale(params.gamma[i] * zval ** (-sth))
        if not params.sigma[i].is_zero():
            m = m + rep.Kinv(i).scale(params.sigma[i])
        out.append((f"B{i}", m))
    for j in diagram.X:
        out.append((f"E{j}", rep.E[j].scale(zval ** shift.s[j])))
        out.append((f"K{j}", rep.K[j]))
        out.append((f"K{j}^-1", rep.Kinv(j)))
    if diagram.restricted_rank() > 1:
        for h in _cartan_fixed_generators(diagram):
            m = Mat.identity(rep.dim)
            for i, c in enumerate(h):
                if c > 0:
                    m = m @ rep.K[i].pow(c)
                elif c < 0:
                    m = m @ rep.Kinv(i).pow(-c)
            out.append((f"Kh{h}", m))
    return out


@dataclass
class KMatrixResult:
    matrix: Mat
    kernel_dim: int
    twist: TwistSpec
    shift: GradingShift
    realized: RealizedTwist
    normalization: dict = field(default_factory=dict)

    def to_json(self):
        return {"matrix": self.matrix.to_json(),
                "kernel_dim": self.kernel_dim,
                "twist": self.twist.to_json(),
                "shift": list(self.shift.s),
                "normalization": {k: str(v) for k, v in self.normalization.items()}}


def gauge_matrix(rep: Rep, spec: TwistSpec) -> Mat:
    """Realized matrix of the gauge operator g on the module."""
    from .braid import _aux_diagram, GaugeInvalid
    if spec.gauge == "semi-standard":
        return t_theta_matrix(rep, spec.diagram)
    if spec.gauge == "standard":
        return Mat.identity(rep.dim)
    if spec.gauge == "auxiliary":
        aux = _aux_diagram(spec)
        return invert(t_theta_matrix(rep, aux)) @ t_theta_matrix(rep, spec.diagram)
    if spec.gauge == "diagonal":
        beta = {i: Rat(v) for i, v in (spec.beta or {}).items()}
        entries = []
        for wt in rep.weights:
            val = one
            for i in rep.cartan.nodes:
                if i in beta and wt[i] != 0:
                    val = val * beta[i] ** int(wt[i])
            entries.append(val)
        return Mat.diagonal(entries)
    raise GaugeInvalid(f"unknown gauge {spec.gauge!r}")


def _raw_solve(rep: Rep, realized: RealizedTwist, shift: GradingShift,
               params: QSPParams) -> tuple[list[list[Rat]], int]:
    src = qsp_generators(rep, params, shift, z_var)
    tgt = qsp_generators(realized.target, params, shift, z_var.inv())
    n = rep.dim
    span = SpanBasis(n * n)
    for (_, L), (_, R) in zip(src, tgt):
        # entries of K L - R K, K unknown
        for r in range(n):
            for c in range(n):
                row = [zero] * (n * n)
                nz = False
                for k in range(n):
                    if not L[k, c].is_zero():
                        row[r * n + k] = row[r * n + k] + L[k, c]
                        nz = True
                    if not R[r, k].is_zero():
                        row[k * n + c] = row[k * n + c] - R[r, k]
                        nz = True
                if nz:
                    span.add(row)
    kernel = span.nullspace()
    return kernel, n


def solve_K(rep: Rep, twist: TwistSpec, shift: GradingShift,
            params: QSPParams, normalize: bool = True) -> KMatrixResult:
    twist.check_admissible(shift, params)
    realized = realize_twist(rep, twist)
    kernel, n = _raw_solve(rep, realized, shift, params)
    if len(kernel) != 1:
        raise KernelDimension(len(kernel))
    K = Mat([[kernel[0][r * n + c] for c in range(n)] for r in range(n)])
    res = KMatrixResult(K, 1, twist, shift, realized)
    if normalize:
        res = normalize_K(res, rep)
    return res


def normalize_K(res: KMatrixResult, rep: Rep) -> KMatrixResult:
    """Scale the kernel line so that K acts on the pseudo-highest-weight
    vector exactly as the gauge operator does; fall back (flagged) to a
    first-entry normalization when that condition cannot be imposed."""
    K = res.matrix
    n = K.nrows
    try:
        hw = ell_highest_indices(rep)
        if len(hw) != 1:
            raise AmbiguousNormalization(f"{len(hw)} pseudo-highest-weight vectors")
        lam = hw[0]
        g = gauge_matrix(rep, res.twist)
        gv = [g[r, lam] for r in range(n)]
        u = [K[r, lam] for r in range(n)]
        ref = next((r for r in range(n) if not u[r].is_zero()), None)
        if ref is None or gv[ref].is_zero():
            raise AmbiguousNormalization("K kills the pseudo-highest-weight vector")
        c = gv[ref] / u[ref]
        if any(c * u[r] != gv[r] for r in range(n)):
            raise AmbiguousNormalization(
                "image of the pseudo-highest-weight vector is not gauge-aligned")
        res.matrix = K.scale(c)
        res.normalization = {"mode": "gauge-hw", "index": lam, "scalar": c}
        return res
    except AmbiguousNormalization as exc:
        i, j, val = _first_nonzero(K)
        res.matrix = K.scale(val.inv())
        res.normalization = {"mode": "first-entry", "flag": "non-canonical",
                             "reason": str(exc), "scalar": val.inv()}
        return res


def normalize_K_paired(res: KMatrixResult, source: Rep, source_twist: TwistSpec) -> KMatrixResult:
    """Normalization for the K-matrix of the pulled-back module, paired with
    the gauge normalization on the source: K'(g v_lam) = v_lam."""
    K = res.matrix
    n = K.nrows
    hw = ell_highest_indices(source)
    if len(hw) != 1:
        raise AmbiguousNormalization(f"{len(hw)} pseudo-highest-weight vectors")
    lam = hw[0]
    g = gauge_matrix(source, source_twist)
    gv = [g[r, lam] for r in range(n)]
    u = K.mul_vec(gv)
    if u[lam].is_zero() or any(not u[r].is_zero() for r in range(n) if r != lam):
        raise AmbiguousNormalization("paired condition not a scalar multiple")
    c = u[lam].inv()
    res.matrix = K.scale(c)
    res.normalization = {"mode": "gauge-hw-paired", "index": lam, "scalar": c}
    return res


def _r21(Rab: Mat, dim_a: int, dim_b: int) -> Mat:
    """(1 2) ∘ R_AB ∘ (1 2): acts on B ⊗ A."""
    return flip(dim_a, dim_b) @ Rab @ flip(dim_b, dim_a)


def verify_gre(V: Rep, W: Rep, twist: TwistSpec, shift: GradingShift,
               params: QSPParams,
               KV: KMatrixResult | None = None,
               KW: KMatrixResult | None = None) -> CheckReport:
    """Exact check of the generalized reflection equation on V ⊗ W."""
    KV = KV if KV is not None else solve_K(V, twist, shift, params)
    KW = KW if KW is not None else solve_K(W, twist, shift, params)
    Vt, Wt = KV.realized.target, KW.realized.target
    woz = (w_var / z_var)
    R_tt = _r21(solve_R(Wt, Vt).matrix, Wt.dim, Vt.dim).substitute({"z": woz})
    R_tW = solve_R(Vt, W).matrix.substitute({"z": z_var * w_var})
    R_tV = _r21(solve_R(Wt, V).matrix, Wt.dim, V.dim).substitute({"z": z_var * w_var})
    R_VW = solve_R(V, W).matrix.substitute({"z": woz})
    Kv = kron(KV.matrix, Mat.identity(W.dim))
    Kw = kron(Mat.identity(V.dim), KW.matrix.substitute({"z": w_var}))
    lhs = R_tt @ Kw @ R_tW @ Kv
    rhs = Kv @ R_tV @ Kw @ R_VW
    diff = lhs - rhs
    if diff.is_zero():
        return CheckReport(True)
    i, j, val = _first_nonzero(diff)
    return CheckReport(False, f"residual at ({i},{j}): {val}")


def verify_standard_re(V: Rep, W: Rep, params: QSPParams,
                       shift: GradingShift) -> CheckReport:
    """Standard reflection equation via the auxiliary restricted-rank-one
    twist; requires a restrictable diagram with tau equal to the auxiliary
    automorphism, and modules fixed by the twist."""
    diagram = params.diagram
    if 0 in diagram.X or diagram.tau[0] != 0:
        raise NotRestrictable("need 0 not in X and tau(0) = 0")
    from .rootdata import build_Y0
    y0 = build_Y0(diagram)
    if y0.tau != diagram.tau:
        return CheckReport(False, "tau differs from the auxiliary automorphism; "
                                  "only the diagrammatic equation holds")
    twist = TwistSpec(diagram, "auxiliary", Y=y0.X)
    KV = solve_K(V, twist, shift, params)
    KW = solve_K(W, twist, shift, params)
    for T, name in ((KV.realized, "V"), (KW.realized, "W")):
        src, tgt = T.source, T.target
        same = all(tgt.E[i] == src.E[i] and tgt.F[i] == src.F[i]
                   and tgt.K[i] == src.K[i] for i in diagram.cartan.nodes)
        if not same:
            return CheckReport(False, f"twist does not fix {name}; "
                                      "standard form unavailable")
    woz = (w_var / z_var)
    R_WV = solve_R(W, V).matrix
    R_VW = solve_R(V, W).matrix
    Kv = kron(KV.matrix, Mat.identity(W.dim))
    Kw = kron(Mat.identity(V.dim), KW.matrix.substitute({"z": w_var}))
    lhs = _r21(R_WV, W.dim, V.dim).substitute({"z": woz}) @ Kw \
        @ R_VW.substitute({"z": z_var * w_var}) @ Kv
    rhs = Kv @ _r21(R_WV, W.dim, V.dim).substitute({"z": z_var * w_var}) @ Kw \
        @ R_VW.substitute({"z": woz})
    diff = lhs - rhs
    if diff.is_zero():
        return CheckReport(True)
    i, j, val = _first_nonzero(diff)
    return CheckReport(False, f"residual at ({i},{j}): {val}")


def verify_K_unitarity(V: Rep, twist: TwistSpec, shift: GradingShift,
                       params: QSPParams) -> CheckReport:
    """K'_{psi*(V)}(1/z) · K_V(z) = id with the paired gauge normalization."""
    KV = solve_K(V, twist, shift, params)
    if KV.normalization.get("mode") != "gauge-hw":
        return CheckReport(False, "source K not gauge-normalizable")
    Vt = KV.realized.target
    back = realize_twist(Vt, twist)
    same = all(back.target.E[i] == V.E[i] and back.target.F[i] == V.F[i]
               and back.target.K[i] == V.K[i] for i in V.cartan.nodes)
    if not same:
        raise NotInvolutive("psi^2 does not fix the module")
    Kt = solve_K(Vt, twist, shift, params, normalize=False)
    Kt = normalize_K_paired(Kt, V, twist)
    prod = Kt.matrix.substitute({"z": z_var.inv()}) @ KV.matrix
    if prod.is_identity():
        return CheckReport(True)
    i, j, val = _first_nonzero(prod - Mat.identity(prod.nrows))
    return CheckReport(False, f"residual at ({i},{j}): {val}")


def _pr_value(rep: Rep, k: int) -> Fraction:
    """Principal-grading value of the k-th basis weight, via the unique
    rational extension of alpha_i ↦ 1 to the classical weight lattice."""
    lam = classical_in_root_basis(rep.cartan, rep.weights[k][1:])
    return sum(lam.coords, Fraction(0))


def _rewrite_power(x: Rat, H: int) -> Rat:
    """Rewrite a rational function of z that depends only on z^H as a
    function of z (i.e. substitute z^H -> z)."""
    from . import scalars as sc

    def shrink(poly):
        import sympy as sp
        terms = poly.terms
        if not terms:
            return sp.Integer(0), 0
        zi = 1  # z is the second generator
        exps = [t[0][zi] for t in terms]
        r = exps[0] % H
        if any(e % H != r for e in exps):
            raise KmatError("entry is not a function of z^H")
        gens = sc._gens()
        out = sp.Integer(0)
        for exp_tuple, coeff in terms:
            mono = sp.Rational(coeff.numerator, coeff.denominator)
            for g, e in zip(gens, exp_tuple):
                if g is sc.Z:
                    e = (e - r) // H
                if e:
                    mono *= g ** e
            out += mono
        return out, r

    ne, rn = shrink(x.num())
    de, rd = shrink(x.den())
    if (rn - rd) % H != 0:
        raise KmatError("entry is not a function of z^H")
    shift = (rn - rd) // H
    from . import scalars as sc2
    return Rat(ne) * (sc2.z ** shift) / Rat(de)


def convert_grading(Kpr: KMatrixResult, V: Rep) -> Mat:
    """Turn a principal-shift K-matrix into the tau-minimal one via the
    diagonal intertwiner M_V(z) = z^{pr(lambda)} and the Coxeter-number
    substitution; fractional exponents are cleared by a root substitution."""
    diagram = Kpr.twist.diagram
    cd = V.cartan
    h = cd.rank + 1  # Coxeter number of sl_{n+1}
    h_tau = Fraction(h) if diagram.tau[0] == 0 else Fraction(h + 1, 2)
    target = Kpr.realized.target
    prV = [_pr_value(V, k) for k in range(V.dim)]
    prT = [_pr_value(target, k) for k in range(target.dim)]
    import math
    dens = [f.denominator for f in prV + prT] + [h_tau.denominator]
    M = math.lcm(*dens)
    H = int(M * h_tau)
    Kz = Kpr.matrix.substitute({"z": z_var ** M})
    left = Mat.diagonal([z_var ** int(M * f) for f in prT])
    right = Mat.diagonal([z_var ** int(M * f) for f in prV])
    N = left @ Kz @ right
    return N.apply(lambda e: _rewrite_power(e, H))


def check_intertwining(K: Mat, rep: Rep, realized: RealizedTwist,
                       shift: GradingShift, params: QSPParams) -> CheckReport:
    """Residual check that K satisfies every intertwining condition."""
    src = qsp_generators(rep, params, shift, z_var)
    tgt = qsp_generators(realized.target, params, shift, z_var.inv())
    for (name, L), (_, R) in zip(src, tgt):
        diff = K @ L - R @ K
        if not diff.is_zero():
            i, j, val = _first_nonzero(diff)
            return CheckReport(False, f"{name} residual at ({i},{j}): {val}")
    return CheckReport(True)
