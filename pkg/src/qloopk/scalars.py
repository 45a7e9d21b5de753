"""Exact rational-function arithmetic in the deformation and spectral parameters.

Every scalar in the library is a :class:`Rat`: a reduced fraction of
multivariate Laurent polynomials with rational coefficients in

* ``p`` -- a square root of the quantum parameter, ``q = p**2`` (half-integer
  powers of ``q`` arise from the Cartan correction exponent);
* ``z``, ``w`` -- spectral parameters;
* any number of named constants (evaluation points ``a, b, ...``, coideal
  parameters ``g0, g1, s0, s1, ...``) registered on first use.

Internally values are sympy expressions kept in cancelled form; the public
surface (canonical printing, parsing, substitution, numerator/denominator
access) is library-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy as sp


class ScalarError(Exception):
    pass


class DivisionByZero(ScalarError):
    pass


class PoleAtPoint(ScalarError):
    """Substitution made a denominator vanish; carries the assignment."""

    def __init__(self, assignments):
        self.assignments = dict(assignments)
        super().__init__(f"denominator vanishes under {self.assignments}")


class ParseError(ScalarError):
    pass


P = sp.Symbol("p")
Z = sp.Symbol("z")
W = sp.Symbol("w")
_Q = sp.Symbol("q")

_CORE = (P, Z, W)
_consts: dict[str, sp.Symbol] = {}


def const(name: str) -> "Rat":
    """A named symbolic constant (evaluation point, QSP parameter, ...)."""
    if name in ("p", "z", "w", "q"):
        raise ValueError(f"{name!r} is a reserved variable name")
    if name not in _consts:
        _consts[name] = sp.Symbol(name)
    return Rat(_consts[name])


def _gens() -> tuple[sp.Symbol, ...]:
    return _CORE + tuple(_consts[k] for k in sorted(_consts))


def _coerce(x) -> sp.Expr:
    if isinstance(x, Rat):
        return x.expr
    if isinstance(x, Poly):
        return x.to_expr()
    if isinstance(x, (int, sp.Integer, sp.Rational)):
        return sp.Rational(x)
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    if isinstance(x, str):
        return _parse_expr(x)
    if isinstance(x, sp.Expr):
        return x
    raise TypeError(f"cannot coerce {type(x).__name__} to Rat")


def _parse_expr(s: str) -> sp.Expr:
    local = {g.name: g for g in _gens()}
    local["q"] = _Q
    try:
        e = sp.parse_expr(s.replace("^", "**"), local_dict=local, evaluate=True)
    except Exception as exc:  # sympy raises a zoo of error types
        raise ParseError(f"cannot parse {s!r}: {exc}") from None
    bad = e.free_symbols - set(local.values())
    if bad:
        raise ParseError(f"unknown symbols {sorted(map(str, bad))} in {s!r}")
    return e.subs(_Q, P**2)


class Rat:
    """A canonical element of the fraction field Q(p, z, w, constants...).

    Immutable; all arithmetic returns new values in reduced form.
    """

    __slots__ = ("expr",)

    def __init__(self, expr=0):
        e = sp.cancel(sp.together(_coerce(expr)))
        num, den = sp.fraction(e)
        if den == 0 or (num == 0 and den.free_symbols and den.is_zero):
            raise DivisionByZero("zero denominator")
        object.__setattr__(self, "expr", e)

    def __setattr__(self, *a):
        raise AttributeError("Rat is immutable")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        return Rat(self.expr + _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Rat(self.expr - _coerce(other))

    def __rsub__(self, other):
        return Rat(_coerce(other) - self.expr)

    def __mul__(self, other):
        return Rat(self.expr * _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if sp.cancel(o) == 0:
            raise DivisionByZero("division by zero")
        return Rat(self.expr / o)

    def __rtruediv__(self, other):
        if self.is_zero():
            raise DivisionByZero("division by zero")
        return Rat(_coerce(other) / self.expr)

    def __pow__(self, n: int):
        if not isinstance(n, (int, sp.Integer)):
            raise TypeError("only integer powers")
        if n < 0 and self.is_zero():
            raise DivisionByZero("inverse of zero")
        return Rat(self.expr ** int(n))

    def __neg__(self):
        return Rat(-self.expr)

    def inv(self) -> "Rat":
        return Rat(1) / self

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return sp.cancel(self.expr) == 0

    def is_one(self) -> bool:
        return sp.cancel(self.expr - 1) == 0

    def __eq__(self, other) -> bool:
        try:
            return sp.cancel(self.expr - _coerce(other)) == 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(sp.cancel(self.expr))

    def __bool__(self):
        return not self.is_zero()

    # -- structure --------------------------------------------------------
    def num(self) -> "Poly":
        n, d = self._canonical_pair()
        return Poly.from_expr(n)

    def den(self) -> "Poly":
        n, d = self._canonical_pair()
        return Poly.from_expr(d)

    def _canonical_pair(self) -> tuple[sp.Expr, sp.Expr]:
        """Integer-coefficient, content-free fraction with the denominator's
        graded-lex leading coefficient positive."""
        n, d = sp.fraction(sp.cancel(self.expr))
        if n == 0:
            return sp.Integer(0), sp.Integer(1)
        gens = _gens()
        pn = sp.Poly(n, *gens, domain="QQ")
        pd = sp.Poly(d, *gens, domain="QQ")
        cn, pn = pn.primitive()
        cd, pd = pd.primitive()
        c = sp.Rational(cn) / sp.Rational(cd)
        lead = _lead_coeff(pd)
        if lead < 0:
            pn, pd, c = -pn, -pd, c
        # fold the rational content into the numerator polynomial
        num = sp.expand(sp.Rational(c) * pn.as_expr())
        return num, pd.as_expr()

    def substitute(self, assignments: dict) -> "Rat":
        """Evaluate at a partial assignment of variables/constants.

        Raises PoleAtPoint if the (reduced) denominator vanishes there.
        """
        subs = {}
        for k, v in assignments.items():
            sym = sp.Symbol(k) if isinstance(k, str) else _coerce(k)
            if not isinstance(sym, sp.Symbol):
                raise TypeError(f"bad substitution target {k!r}")
            if sym == _Q:
                raise ValueError("substitute p, not q")
            subs[sym] = _coerce(v)
        n, d = sp.fraction(sp.cancel(self.expr))
        dval = sp.cancel(d.subs(subs, simultaneous=True))
        if dval == 0:
            raise PoleAtPoint({str(k): str(v) for k, v in subs.items()})
        return Rat(n.subs(subs, simultaneous=True) / dval)

    # -- printing ---------------------------------------------------------
    def __str__(self) -> str:
        n, d = self._canonical_pair()
        ns = _poly_str(n)
        if d == 1:
            return ns
        ds = _poly_str(d)
        return f"({ns})/({ds})"

    def __repr__(self) -> str:
        return f"Rat({str(self)!r})"


def _lead_coeff(poly: sp.Poly) -> sp.Rational:
    terms = sorted(poly.terms(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    return terms[0][1]


def _poly_str(e: sp.Expr) -> str:
    """Deterministic graded-lex string; even powers of p print as powers of q."""
    gens = _gens()
    poly = sp.Poly(e, *gens, domain="QQ")
    terms = sorted(poly.terms(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    use_q = all(t[0][0] % 2 == 0 for t in terms)
    parts = []
    for exps, coeff in terms:
        factors = []
        for g, ex in zip(gens, exps):
            if ex == 0:
                continue
            if g is P and use_q:
                g, ex = _Q, ex // 2
            factors.append(g.name if ex == 1 else f"{g.name}^{ex}")
        c = sp.Rational(coeff)
        body = "*".join(factors)
        if not body:
            frag = str(abs(c))
        elif abs(c) == 1:
            frag = body
        else:
            frag = f"{abs(c)}*{body}"
        parts.append(("-" if c < 0 else "+", frag))
    if not parts:
        return "0"
    sign, frag = parts[0]
    out = ("-" if sign == "-" else "") + frag
    for sign, frag in parts[1:]:
        out += f" {sign} {frag}"
    return out


@dataclass(frozen=True)
class Poly:
    """Sparse Laurent polynomial: exponent tuples (over p, z, w, consts...)
    mapped to nonzero rational coefficients, in graded-lex order."""

    terms: tuple  # ((exps, Fraction), ...) sorted graded-lex descending

    @staticmethod
    def from_expr(e) -> "Poly":
        e = _coerce(e)
        gens = _gens()
        n, d = sp.fraction(sp.cancel(e))
        # Laurent part: denominator must be a monomial
        pd = sp.Poly(d, *gens, domain="QQ")
        if len(pd.terms()) != 1:
            raise ValueError(f"not a (Laurent) polynomial: {e}")
        dexp, dcoeff = pd.terms()[0]
        pn = sp.Poly(n, *gens, domain="QQ")
        items = []
        for exps, coeff in pn.terms():
            shifted = tuple(x - y for x, y in zip(exps, dexp))
            c = Fraction(sp.Rational(coeff) / sp.Rational(dcoeff))
            if c != 0:
                items.append((shifted, c))
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return Poly(tuple(items))

    def to_expr(self) -> sp.Expr:
        gens = _gens()
        out = sp.Integer(0)
        for exps, coeff in self.terms:
            mono = sp.Rational(coeff.numerator, coeff.denominator)
            for g, ex in zip(gens, exps):
                if ex:
                    mono *= g**ex
            out += mono
        return out

    def to_rat(self) -> Rat:
        return Rat(self.to_expr())

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def __str__(self) -> str:
        return str(self.to_rat())


def normalize(num, den) -> Rat:
    """Canonical reduced fraction num/den.

    Invariant under common polynomial factors: normalize(a*f, a*g) ==
    normalize(f, g) for nonzero a.
    """
    d = Rat(den)
    if d.is_zero():
        raise DivisionByZero("zero denominator")
    return Rat(num) / d


def arith(a, b, kind: str) -> Rat:
    a, b = Rat(a), Rat(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def parse(s: str) -> Rat:
    return Rat(_parse_expr(s))


def substitute(a, assignments: dict) -> Rat:
    return Rat(a).substitute(assignments)


# convenient atoms
def rat(x) -> Rat:
    return Rat(x)


zero = Rat(0)
one = Rat(1)
p = Rat(P)
q = Rat(P**2)
z = Rat(Z)
w = Rat(W)


def q_int(n: int, d: int = 1) -> Rat:
    """Quantum integer [n] in q_i = q^d: (q_i^n - q_i^-n)/(q_i - q_i^-1)."""
    qi = P ** (2 * d)
    if n == 0:
        return zero
    return Rat(sp.cancel((qi**n - qi**-n) / (qi - qi**-1)))


def q_factorial(n: int, d: int = 1) -> Rat:
    out = one
    for k in range(1, n + 1):
        out = out * q_int(k, d)
    return out


def q_binomial(n: int, k: int, d: int = 1) -> Rat:
    """Gaussian binomial [n choose k] in q_i = q^d."""
    if k < 0 or k > n:
        return zero
    num, den = one, one
    for j in range(1, k + 1):
        num = num * q_int(n - k + j, d)
        den = den * q_int(j, d)
    return num / den
