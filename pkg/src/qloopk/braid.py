"""Braid operators, Cartan corrections, and twist realizations on modules.

The quantum pseudo-involution theta_q = Ad(t_theta) ∘ omega ∘ tau is realized
per representation: t_theta = xi_theta * S_X, where S_X is a product of
Lusztig braid operators along the canonical reduced word of w_X and xi_theta
is diagonal on weight vectors. Since t_theta only ever enters through
conjugation or through paired normalization conditions, xi_theta is fixed
only up to a global scalar; we pin it by giving the first basis vector
entry 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Mat, invert
from .repcore import Rep, pullback_chevalley_tau
from .rootdata import (GradingShift, RootVec, SatakeDiagram, bilinear,
                       classical_in_root_basis, rho, theta_on_roots)
from .scalars import Rat, one, p, q_factorial, zero


class BraidError(Exception):
    pass


class GaugeInvalid(BraidError):
    pass


class InconsistentExtension(BraidError):
    pass


def lusztig_T(rep: Rep, i: int) -> Mat:
    """Braid group operator T''_{i,1} on the module.

    Columns: on a weight vector v with m = lambda(h_i),
    T v = sum over a, c >= 0 with b = m + a + c >= 0 of
    (-1)^b q_i^{b - ac} E_i^{(a)} F_i^{(b)} E_i^{(c)} v  (divided powers).
    """
    d = rep.cartan.d[i]
    qi = p ** (2 * d)
    n = rep.dim
    # divided powers until nilpotency
    Ed = [Mat.identity(n)]
    Fd = [Mat.identity(n)]
    k = 1
    while not Ed[-1].is_zero() or k <= 1:
        Ed.append((Ed[-1] @ rep.E[i]).scale(q_factorial(k, d).inv()
                                            * q_factorial(k - 1, d)))
        k += 1
        if k > n + 1:
            break
    k = 1
    while not Fd[-1].is_zero() or k <= 1:
        Fd.append((Fd[-1] @ rep.F[i]).scale(q_factorial(k, d).inv()
                                            * q_factorial(k - 1, d)))
        k += 1
        if k > n + 1:
            break
    amax, cmax = len(Ed) - 1, len(Ed) - 1
    bmax = len(Fd) - 1
    out = Mat.zeros(n)
    for col in range(n):
        m = rep.weights[col][i]
        if m.denominator != 1:
            raise BraidError("non-integral weight pairing")
        m = int(m)
        for c in range(cmax + 1):
            vc = [Ed[c][r, col] for r in range(n)]
            if all(x.is_zero() for x in vc):
                continue
            for a in range(amax + 1):
                b = m + a + c
                if b < 0 or b > bmax:
                    continue
                coeff = (qi ** (b - a * c))
                if b % 2 == 1:
                    coeff = -coeff
                # E^(a) F^(b) applied to vc
                mat = Ed[a] @ Fd[b]
                for r in range(n):
                    acc = zero
                    for s in range(n):
                        e = mat[r, s]
                        if not e.is_zero() and not vc[s].is_zero():
                            acc = acc + e * vc[s]
                    if not acc.is_zero():
                        out.data[r][col] = out.data[r][col] + coeff * acc
    return out


def braid_SX(rep: Rep, diagram_or_word) -> Mat:
    """Product of Lusztig operators along a reduced word for w_X."""
    if isinstance(diagram_or_word, SatakeDiagram):
        word = diagram_or_word.wX_word()
    else:
        word = tuple(diagram_or_word)
    out = Mat.identity(rep.dim)
    for i in word:
        out = out @ lusztig_T(rep, i)
    return out


def _xi_exponent(diagram: SatakeDiagram, weight) -> Fraction:
    """q-exponent <theta(lam), lam>/2 + <lam, rho_X> for a classical weight
    given by its coroot values; any affine lift gives the same answer."""
    cd = diagram.cartan
    lam = classical_in_root_basis(cd, weight[1:])
    th = theta_on_roots(diagram, lam)
    return bilinear(th, lam) / 2 + bilinear(lam, rho(cd, diagram.X))


def cartan_correction(rep: Rep, diagram: SatakeDiagram) -> Mat:
    """Diagonal operator xi_theta, normalized to 1 on the first basis vector.

    Raw entries are q^{<theta(lam),lam>/2 + <lam,rho_X>}; the global factor
    is immaterial (the operator enters through Ad and paired normalizations)
    and is fixed so every entry is an integer power of p.
    """
    exps = [_xi_exponent(diagram, rep.weights[k]) for k in range(rep.dim)]
    base = exps[0]
    entries = []
    for e in exps:
        pexp = 2 * (e - base)
        if pexp.denominator != 1:
            raise BraidError(f"non-integral relative exponent {pexp} in xi")
        entries.append(p ** int(pexp))
    return Mat.diagonal(entries)


def gamma_operator(rep: Rep, gamma: dict, extension: dict | None = None) -> Mat:
    """Diagonal action of the parameter character: weight lam ↦ gamma(lam).

    Without an ``extension`` the weight must lie in the root lattice so that
    gamma(lam) is a monomial in the gamma_i. An extension assigns a value to
    each finite fundamental weight; it must reproduce gamma_i on the simple
    roots (InconsistentExtension otherwise).
    """
    cd = rep.cartan
    gamma = {i: Rat(v) for i, v in gamma.items()}
    if extension is not None:
        ext = {i: Rat(v) for i, v in extension.items()}
        for j in range(1, cd.rank + 1):
            val = one
            for i in range(1, cd.rank + 1):
                val = val * ext[i] ** cd.a[j][i]
            if val != gamma[j]:
                raise InconsistentExtension(
                    f"extension gives {val} on simple root {j}, expected gamma_{j}")
        entries = []
        for wt in rep.weights:
            val = one
            for i in range(1, cd.rank + 1):
                h = wt[i]
                if h.denominator != 1:
                    raise InconsistentExtension("non-integral coroot value")
                val = val * ext[i] ** int(h)
            entries.append(val)
        return Mat.diagonal(entries)
    entries = []
    for wt in rep.weights:
        lam = classical_in_root_basis(cd, wt[1:])
        val = one
        for i, c in enumerate(lam.coords):
            if c == 0:
                continue
            if c.denominator != 1:
                raise InconsistentExtension(
                    "weight outside the root lattice; supply an extension")
            val = val * gamma[i] ** int(c)
        entries.append(val)
    return Mat.diagonal(entries)


def t_theta_matrix(rep: Rep, diagram: SatakeDiagram) -> Mat:
    """Realized matrix of t_theta = xi_theta * S_X on the module."""
    return cartan_correction(rep, diagram) @ braid_SX(rep, diagram)


def theta_q_F(rep: Rep, diagram: SatakeDiagram, i: int) -> Mat:
    """Matrix of theta_q(F_i) = Ad(t_theta)(-E_{tau(i)}) on the module."""
    if i in diagram.X:
        raise BraidError(f"node {i} lies in X; B_{i} = F_{i} needs no twist")
    M = t_theta_matrix(rep, diagram)
    return M @ (-rep.E[diagram.tau[i]]) @ invert(M)


@dataclass(frozen=True)
class TwistSpec:
    """Choice of gauge g defining the twist psi = Ad(g) ∘ theta_q^{-1}."""

    diagram: SatakeDiagram
    gauge: str = "semi-standard"     # semi-standard | standard | auxiliary | diagonal
    Y: tuple[int, ...] = ()          # for the auxiliary gauge g = S_Y^{-1} S_X
    beta: dict | None = None         # for the diagonal gauge: node -> value

    @staticmethod
    def from_json(diagram: SatakeDiagram, spec) -> "TwistSpec":
        if isinstance(spec, str):
            if spec not in ("semi-standard", "standard"):
                raise GaugeInvalid(f"unknown gauge {spec!r}")
            return TwistSpec(diagram, spec)
        if isinstance(spec, dict) and "auxiliary" in spec:
            return TwistSpec(diagram, "auxiliary",
                             Y=tuple(spec["auxiliary"]["Y"]))
        if isinstance(spec, dict) and "diagonal" in spec:
            return TwistSpec(diagram, "diagonal",
                             beta={int(k): v for k, v in spec["diagonal"].items()})
        raise GaugeInvalid(f"unparseable gauge spec {spec!r}")

    def to_json(self):
        if self.gauge == "auxiliary":
            return {"gauge": {"auxiliary": {"Y": list(self.Y)}}}
        if self.gauge == "diagonal":
            return {"gauge": {"diagonal": {str(k): str(Rat(v))
                                           for k, v in self.beta.items()}}}
        return {"gauge": self.gauge}

    def check_admissible(self, shift: GradingShift, params=None):
        """G_QSP membership: s vanishes on Y, and the diagonal part satisfies
        beta(delta) = gamma(delta). The braid and Cartan-correction factors
        are trivial on delta, so every non-diagonal gauge here needs
        gamma(delta) = 1."""
        if self.gauge == "auxiliary":
            for i in self.Y:
                if shift.s[i] != 0:
                    raise GaugeInvalid(
                        f"auxiliary gauge needs s(alpha_{i}) = 0 on Y")
        if params is None:
            return
        cd = self.diagram.cartan
        gamma_delta = one
        for i in cd.nodes:
            gamma_delta = gamma_delta * params.gamma[i] ** cd.marks[i]
        if self.gauge == "diagonal":
            beta = {i: Rat(v) for i, v in (self.beta or {}).items()}
            beta_delta = one
            for i in cd.nodes:
                if i in beta:
                    beta_delta = beta_delta * beta[i] ** cd.marks[i]
            if beta_delta != gamma_delta:
                raise GaugeInvalid("beta(delta) != gamma(delta)")
        elif not gamma_delta.is_one():
            raise GaugeInvalid(
                f"gauge requires gamma(delta) = 1, got {gamma_delta}")


@dataclass
class RealizedTwist:
    """Concrete realization of psi on one module.

    target carries pi_{psi*(V)}; for every generator x,
    pi_{psi*(V)}(x) = C · pi_{(omega tau)*(V)}(x) · C^{-1} with C the stored
    conjugator (identity in the semi-standard case, where psi = omega∘tau).
    """

    source: Rep
    spec: TwistSpec
    conjugator: Mat
    target: Rep


def _aux_diagram(spec: TwistSpec) -> SatakeDiagram:
    cd = spec.diagram.cartan
    from .rootdata import opposition_involution
    Y = tuple(sorted(spec.Y))
    eta = list(cd.nodes)
    oi = opposition_involution(cd, Y)
    for i in Y:
        eta[i] = oi[i]
    # outside Y the auxiliary automorphism swaps 0 with tau(0)
    t0 = spec.diagram.tau[0]
    rest = [i for i in cd.nodes if i not in Y]
    if sorted(rest) != sorted({0, t0}):
        raise GaugeInvalid("auxiliary gauge expects Y = nodes minus {0, tau(0)}")
    eta[0], eta[t0] = t0, 0
    return SatakeDiagram(cd, Y, tuple(eta))


def realize_twist(rep: Rep, spec: TwistSpec) -> RealizedTwist:
    """Build pi_{psi*(V)} for psi = Ad(g) ∘ theta_q^{-1}.

    Generally pi_{psi*(V)}(x) = C · pi_{(omega tau)*(V)}(x) · C^{-1} with
    C = pi_V(g) · T'^{-1}, where T' realizes t_theta on the omega-tau
    pullback. The semi-standard gauge g = t_theta collapses to psi =
    omega∘tau with identity conjugator.
    """
    diagram = spec.diagram
    pulled = pullback_chevalley_tau(rep, diagram.tau)
    if spec.gauge == "semi-standard":
        return RealizedTwist(rep, spec, Mat.identity(rep.dim), pulled)
    Tprime = t_theta_matrix(pulled, diagram)
    if spec.gauge == "standard":
        g_mat = Mat.identity(rep.dim)
    elif spec.gauge == "auxiliary":
        aux = _aux_diagram(spec)
        g_mat = invert(t_theta_matrix(rep, aux)) @ t_theta_matrix(rep, diagram)
    elif spec.gauge == "diagonal":
        beta = {i: Rat(v) for i, v in (spec.beta or {}).items()}
        entries = []
        for wt in rep.weights:
            val = one
            for i in rep.cartan.nodes:
                h = wt[i]
                if h.denominator != 1:
                    raise GaugeInvalid("diagonal gauge needs integral coroot values")
                if i in beta and h != 0:
                    val = val * beta[i] ** int(h)
            entries.append(val)
        g_mat = Mat.diagonal(entries)
    else:
        raise GaugeInvalid(f"unknown gauge {spec.gauge!r}")
    C = g_mat @ invert(Tprime)
    target = pulled.conjugated(C, label=f"psi*({rep.label})")
    return RealizedTwist(rep, spec, C, target)
