"""Finite-dimensional evaluation representations of quantum loop algebras.

A representation stores explicit matrices for the Chevalley generators
E_i, F_i, K_i on all affine nodes, together with the affine weight of every
basis vector (values on the coroots h_0..h_n, summing against the comarks to
zero since the central charge acts trivially). Builders for the standard
spin-j evaluation modules of the affine sl2 and the vector evaluation module
of affine slN are provided; everything downstream only consumes the matrices,
so further modules can be plugged in directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Mat, kron
from .rootdata import CartanDatum, DatumMismatch, affine_A
from .scalars import Rat, one, q_binomial, q_int, zero


class RepError(Exception):
    pass


@dataclass
class Rep:
    cartan: CartanDatum
    dim: int
    E: dict[int, Mat]
    F: dict[int, Mat]
    K: dict[int, Mat]
    weights: tuple[tuple[Fraction, ...], ...]  # weights[k][i] = lambda_k(h_i)
    label: str = ""
    _Kinv: dict[int, Mat] = field(default_factory=dict, repr=False)

    def Kinv(self, i: int) -> Mat:
        if i not in self._Kinv:
            # K_i is diagonal in every module we build
            self._Kinv[i] = Mat.diagonal([self.K[i][k, k].inv()
                                          for k in range(self.dim)])
        return self._Kinv[i]

    def classical_weight(self, k: int) -> tuple[Fraction, ...]:
        return self.weights[k][1:]

    def weight_decompose(self) -> dict[tuple, list[int]]:
        out: dict[tuple, list[int]] = {}
        for k in range(self.dim):
            out.setdefault(self.classical_weight(k), []).append(k)
        return out

    def conjugated(self, C: Mat, label: str = "") -> "Rep":
        """The equivalent module with action x ↦ C x C^{-1}.

        Requires C to permute-and-scale weight vectors so that the diagonal
        weight bookkeeping stays valid; this is checked.
        """
        from .linalg import invert
        Ci = invert(C)

        def conj(m: Mat) -> Mat:
            return C @ m @ Ci

        newK = {i: conj(self.K[i]) for i in self.cartan.nodes}
        weights = _weights_from_K(self.cartan, newK, self.dim)
        return Rep(self.cartan, self.dim,
                   {i: conj(self.E[i]) for i in self.cartan.nodes},
                   {i: conj(self.F[i]) for i in self.cartan.nodes},
                   newK, weights, label or (self.label + ".conj"))


def _q_power(expo) -> Rat:
    """q**e for a (half-)integer e, via the square root p."""
    e = Fraction(expo)
    half = e * 2
    if half.denominator != 1:
        raise RepError(f"weight exponent {e} is not half-integral")
    from .scalars import p
    return p ** int(half)


def _weights_from_K(cartan: CartanDatum, K: dict[int, Mat], dim: int):
    """Recover integral weights from diagonal K-matrices, K_i = q_i^{lambda(h_i)}."""
    from .scalars import q
    weights = []
    for k in range(dim):
        row = []
        for i in cartan.nodes:
            entry = K[i][k, k]
            # search small exponents; module weights are tiny here
            for m in range(-2 * dim - 4, 2 * dim + 5):
                if entry == _q_power(cartan.d[i] * m):
                    row.append(Fraction(m))
                    break
            else:
                raise RepError(f"K_{i} entry {entry} is not a power of q_i")
        weights.append(tuple(row))
    return tuple(weights)


def build_eval_rep_sl2(spin2: int, a) -> Rep:
    """Spin-j evaluation module of affine sl2, spin2 = 2j, point ``a``.

    Basis v_0 (highest) .. v_{2j}; the affine node acts through the
    evaluation parameter: E_0 = a * (F_1 shape), F_0 = a^{-1} * (E_1 shape).
    """
    if spin2 < 0:
        raise RepError("spin2 must be nonnegative")
    a = a if isinstance(a, Rat) else Rat(a)
    if a.is_zero():
        raise RepError("evaluation point must be nonzero")
    cd = affine_A(1)
    n = spin2 + 1
    E1 = Mat.zeros(n)
    F1 = Mat.zeros(n)
    for k in range(n):
        if k >= 1:
            E1.data[k - 1][k] = q_int(k)
        if k + 1 < n:
            F1.data[k + 1][k] = q_int(spin2 - k)
    K1 = Mat.diagonal([_q_power(spin2 - 2 * k) for k in range(n)])
    E0 = F1.scale(a)
    F0 = E1.scale(a.inv())
    K0 = Mat.diagonal([_q_power(2 * k - spin2) for k in range(n)])
    weights = tuple((Fraction(2 * k - spin2), Fraction(spin2 - 2 * k))
                    for k in range(n))
    return Rep(cd, n, {0: E0, 1: E1}, {0: F0, 1: F1}, {0: K0, 1: K1},
               weights, f"sl2-spin{spin2}/2(a={a})")


def build_vector_rep_slN_eval(N: int, a) -> Rep:
    """Vector evaluation module of affine slN on basis e_1..e_N."""
    if N < 2:
        raise RepError("N >= 2 required")
    a = a if isinstance(a, Rat) else Rat(a)
    if a.is_zero():
        raise RepError("evaluation point must be nonzero")
    cd = affine_A(N - 1)
    E = {i: Mat.unit(N, N, i - 1, i) for i in range(1, N)}
    F = {i: Mat.unit(N, N, i, i - 1) for i in range(1, N)}
    E[0] = Mat.unit(N, N, N - 1, 0).scale(a)
    F[0] = Mat.unit(N, N, 0, N - 1).scale(a.inv())
    weights = []
    for k in range(1, N + 1):
        row = [Fraction((1 if k == N else 0) - (1 if k == 1 else 0))]
        for i in range(1, N):
            row.append(Fraction((1 if k == i else 0) - (1 if k == i + 1 else 0)))
        weights.append(tuple(row))
    K = {i: Mat.diagonal([_q_power(w[i]) for w in weights]) for i in cd.nodes}
    return Rep(cd, N, E, F, K, tuple(weights), f"sl{N}-vector(a={a})")


def build_rep(spec: dict) -> Rep:
    """Construct a module from its JSON description."""
    kind = spec.get("kind")
    if kind == "eval-sl2":
        return build_eval_rep_sl2(int(spec["spin2"]), Rat(spec.get("a", 1)))
    if kind == "eval-vector":
        return build_vector_rep_slN_eval(int(spec["N"]), Rat(spec.get("a", 1)))
    raise RepError(f"unknown representation kind {kind!r}")


def _comm(a: Mat, b: Mat) -> Mat:
    return a @ b - b @ a


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    failures: tuple[str, ...] = ()

    def to_json(self):
        return {"ok": self.ok, "failures": list(self.failures)}


def verify_relations(rep: Rep) -> RelationReport:
    """Exhaustive check of the level-zero Drinfeld-Jimbo relations."""
    from .scalars import p, q
    cd = rep.cartan
    fails: list[str] = []
    qmqi = q - q.inv()
    for i in cd.nodes:
        Ki, Kiv = rep.K[i], rep.Kinv(i)
        if not (Ki @ Kiv).is_identity():
            fails.append(f"K_{i} not invertible as stored")
        for j in cd.nodes:
            if not _comm(Ki, rep.K[j]).is_zero():
                fails.append(f"[K_{i}, K_{j}] != 0")
            sc = p ** (2 * cd.d[i] * cd.a[i][j])
            if not (Ki @ rep.E[j] @ Kiv - rep.E[j].scale(sc)).is_zero():
                fails.append(f"K_{i} E_{j} K_{i}^-1 != q_i^a_ij E_{j}")
            if not (Ki @ rep.F[j] @ Kiv - rep.F[j].scale(sc.inv())).is_zero():
                fails.append(f"K_{i} F_{j} K_{i}^-1 != q_i^-a_ij F_{j}")
            target = Mat.zeros(rep.dim)
            if i == j:
                qi = p ** (2 * cd.d[i])
                target = (Ki - Kiv).scale((qi - qi.inv()).inv())
            if not (_comm(rep.E[i], rep.F[j]) - target).is_zero():
                fails.append(f"[E_{i}, F_{j}] wrong")
            if i != j:
                for gen, name in ((rep.E, "E"), (rep.F, "F")):
                    m = 1 - cd.a[i][j]
                    acc = Mat.zeros(rep.dim)
                    for s in range(m + 1):
                        t = gen[i].pow(m - s) @ gen[j] @ gen[i].pow(s)
                        t = t.scale(q_binomial(m, s, cd.d[i]))
                        acc = acc + t if s % 2 == 0 else acc - t
                    if not acc.is_zero():
                        fails.append(f"Serre({name}_{i}, {name}_{j}) != 0")
    # trivial central charge: product of K_i over the comarks is the identity
    prod = Mat.identity(rep.dim)
    for i in cd.nodes:
        dual_mark = cd.marks[i] * cd.d[i] // cd.d[0]
        prod = prod @ rep.K[i].pow(dual_mark)
    if not prod.is_identity():
        fails.append("central K product != 1")
    # weight bookkeeping matches the K action
    for k in range(rep.dim):
        for i in cd.nodes:
            if rep.K[i][k, k] != _q_power(Fraction(cd.d[i]) * rep.weights[k][i]):
                fails.append(f"weight of basis vector {k} at node {i} inconsistent")
    return RelationReport(not fails, tuple(dict.fromkeys(fails)))


def tensor(v: Rep, w: Rep) -> Rep:
    """Tensor product via the coproduct
    Δ(E_i) = E_i ⊗ 1 + K_i ⊗ E_i,  Δ(F_i) = F_i ⊗ K_i^{-1} + 1 ⊗ F_i."""
    if v.cartan != w.cartan:
        raise DatumMismatch("tensor factors over different data")
    cd = v.cartan
    Iv, Iw = Mat.identity(v.dim), Mat.identity(w.dim)
    E, F, K = {}, {}, {}
    for i in cd.nodes:
        E[i] = kron(v.E[i], Iw) + kron(v.K[i], w.E[i])
        F[i] = kron(v.F[i], w.Kinv(i)) + kron(Iv, w.F[i])
        K[i] = kron(v.K[i], w.K[i])
    weights = tuple(tuple(a + b for a, b in zip(v.weights[k], w.weights[l]))
                    for k in range(v.dim) for l in range(w.dim))
    return Rep(cd, v.dim * w.dim, E, F, K, weights,
               f"({v.label})⊗({w.label})")


def coproduct_op(v: Rep, w: Rep) -> Rep:
    """Tensor product with the opposite coproduct Δ^op = (flip) ∘ Δ."""
    if v.cartan != w.cartan:
        raise DatumMismatch("tensor factors over different data")
    cd = v.cartan
    Iv, Iw = Mat.identity(v.dim), Mat.identity(w.dim)
    E, F, K = {}, {}, {}
    for i in cd.nodes:
        E[i] = kron(Iv, w.E[i]) + kron(v.E[i], w.K[i])
        F[i] = kron(v.F[i], Iw) + kron(v.Kinv(i), w.F[i])
        K[i] = kron(v.K[i], w.K[i])
    weights = tuple(tuple(a + b for a, b in zip(v.weights[k], w.weights[l]))
                    for k in range(v.dim) for l in range(w.dim))
    return Rep(cd, v.dim * w.dim, E, F, K, weights,
               f"({v.label})⊗op({w.label})")


class ShiftedRep:
    """A module composed with a grading shift at spectral parameter ``zval``:
    E_i picks up z^{s_i}, F_i picks up z^{-s_i}, K_i is unchanged."""

    def __init__(self, rep: Rep, shift, zval):
        if shift.cartan != rep.cartan:
            raise DatumMismatch("shift over a different datum")
        self.rep = rep
        self.shift = shift
        self.zval = zval if isinstance(zval, Rat) else Rat(zval)

    def E(self, i: int) -> Mat:
        return self.rep.E[i].scale(self.zval ** self.shift.s[i])

    def F(self, i: int) -> Mat:
        return self.rep.F[i].scale(self.zval ** (-self.shift.s[i]))

    def K(self, i: int) -> Mat:
        return self.rep.K[i]


def pullback_chevalley_tau(rep: Rep, tau, label: str = "") -> Rep:
    """Pullback along ω ∘ τ (Chevalley involution composed with a diagram
    automorphism): E_i ↦ -F_{τ(i)}, F_i ↦ -E_{τ(i)}, K_i ↦ K_{τ(i)}^{-1}."""
    cd = rep.cartan
    tau = tuple(tau)
    E = {i: -rep.F[tau[i]] for i in cd.nodes}
    F = {i: -rep.E[tau[i]] for i in cd.nodes}
    K = {i: rep.Kinv(tau[i]) for i in cd.nodes}
    weights = tuple(tuple(-wt[tau[i]] for i in cd.nodes) for wt in rep.weights)
    return Rep(cd, rep.dim, E, F, K, weights,
               label or f"(ωτ)*({rep.label})")


def ell_highest_indices(rep: Rep) -> list[int]:
    """Basis indices killed by every classical E_i and by F_0."""
    out = []
    for k in range(rep.dim):
        killed = all(all(rep.E[i][r, k].is_zero() for r in range(rep.dim))
                     for i in range(1, rep.cartan.rank + 1))
        killed = killed and all(rep.F[0][r, k].is_zero() for r in range(rep.dim))
        if killed:
            out.append(k)
    return out
