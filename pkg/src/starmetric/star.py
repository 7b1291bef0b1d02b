"""The noncommutative star product on phase-space functions.

Convention (fixed once, here): derivatives in the star exponential act with
x on the LEFT operand and p on the RIGHT operand,

    A * B = sum_k (i*hbar)^k / k! * (d^k A / dx^k) (d^k B / dp^k),

so that x * p = x p + i hbar and x * p - p * x = +i hbar.  This matches the
operator ordering exp(i t p_hat) exp(i s x_hat) used to expand operators
into functions.  Every sign in this module hangs off this choice; do not
"fix" one occurrence in isolation.

The k-sum terminates because the x degree of the left operand is finite by
the PhasePoly type invariant.  The adjoint map and hermiticity criterion

    A_dagger = exp(+i hbar dx dp) conj(A)
    A hermitian  iff  conj(A) = exp(-i hbar dx dp) A

terminate the same way.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .phasepoly import CouplingSeries, PhasePoly
from .scalars import GaussianRational, I

__all__ = [
    "star",
    "dagger",
    "is_hermitian",
    "star_commutator",
    "star_series",
    "star_log",
    "star_exp",
    "series_exp_pointwise",
    "ExpQuadForm",
    "star_poly_expquad",
    "eqf_is_positive_hermitian",
    "BadConstantTerm",
    "NonzeroConstantTerm",
    "NonTerminating",
    "MixedExponent",
]


class BadConstantTerm(ValueError):
    """star_log requires a series with constant term 1."""


class NonzeroConstantTerm(ValueError):
    """star_exp requires a series with zero constant term."""


class NonTerminating(ValueError):
    """The requested star expansion would not terminate."""


class MixedExponent(ValueError):
    """The Gaussian exponent mixes x and p, so the pointwise-log shortcut fails."""


def _i_pow_over_fact(k: int) -> GaussianRational:
    return I**k * Fraction(1, factorial(k))


def star(a: PhasePoly, b: PhasePoly) -> PhasePoly:
    out = PhasePoly.zero()
    da, db = a, b
    k = 0
    while not da.is_zero:
        if k:
            out = out + (da * db).shift_hbar(k).scaled(_i_pow_over_fact(k))
        else:
            out = out + da * db
        da = da.derivative("x")
        db = db.derivative("p")
        k += 1
    return out


def dagger(a: PhasePoly) -> PhasePoly:
    """Function-level image of the operator adjoint."""
    return _exp_mixed(a.conjugate(), +1)


def _exp_mixed(a: PhasePoly, sign: int) -> PhasePoly:
    """Apply exp(sign * i hbar dx dp) to a; terminates on the x degree."""
    out = PhasePoly.zero()
    cur = a
    k = 0
    while not cur.is_zero:
        scale = _i_pow_over_fact(k) * GaussianRational.coerce(sign) ** k
        out = out + cur.shift_hbar(k).scaled(scale) if k else out + cur
        cur = cur.derivative("x").derivative("p")
        k += 1
    return out


def is_hermitian(a: PhasePoly) -> bool:
    """conj(A) == exp(-i hbar dx dp) A, exactly."""
    return a.conjugate() == _exp_mixed(a, -1)


def star_commutator(a: PhasePoly, b: PhasePoly) -> PhasePoly:
    return star(a, b) - star(b, a)


def star_series(a: CouplingSeries, b: CouplingSeries) -> CouplingSeries:
    """Cauchy product with the star product in place of the pointwise one."""
    a._check(b)
    order = min(a.order, b.order)
    out = []
    for n in range(order + 1):
        acc = PhasePoly.zero()
        for j in range(n + 1):
            acc = acc + star(a.coeffs[j], b.coeffs[n - j])
        out.append(acc)
    return CouplingSeries(a.coupling, out)


def dagger_series(s: CouplingSeries) -> CouplingSeries:
    return s.map_coeffs(dagger)


def _star_power(s: CouplingSeries, n: int) -> CouplingSeries:
    out = CouplingSeries.one(s.coupling, s.order)
    for _ in range(n):
        out = star_series(out, s)
    return out


def star_log(s: CouplingSeries) -> CouplingSeries:
    """Formal star-logarithm of a series with constant term 1.

    log(1 + P) = sum_{n>=1} (-1)^(n+1) P^{*n} / n, truncated at the order of
    the input; P starts at order 1, so the sum is finite.
    """
    if s.coeffs[0] != PhasePoly.one():
        raise BadConstantTerm("star_log needs constant term 1 at order 0")
    p = s - CouplingSeries.one(s.coupling, s.order)
    out = CouplingSeries.constant(s.coupling, PhasePoly.zero(), s.order)
    power = CouplingSeries.one(s.coupling, s.order)
    for n in range(1, s.order + 1):
        power = star_series(power, p)
        sign = Fraction((-1) ** (n + 1), n)
        out = out + power.scaled(sign)
    return out


def star_exp(s: CouplingSeries) -> CouplingSeries:
    """Formal star-exponential of a series with zero constant term."""
    if not s.coeffs[0].is_zero:
        raise NonzeroConstantTerm("star_exp needs zero constant term at order 0")
    out = CouplingSeries.one(s.coupling, s.order)
    power = CouplingSeries.one(s.coupling, s.order)
    for n in range(1, s.order + 1):
        power = star_series(power, s)
        out = out + power.scaled(Fraction(1, factorial(n)))
    return out


def series_exp_pointwise(s: CouplingSeries) -> CouplingSeries:
    """Pointwise (commutative) exponential of a series with zero constant term."""
    if not s.coeffs[0].is_zero:
        raise NonzeroConstantTerm("pointwise exp needs zero constant term")
    out = CouplingSeries.one(s.coupling, s.order)
    power = CouplingSeries.one(s.coupling, s.order)
    for n in range(1, s.order + 1):
        power = power * s
        out = out + power.scaled(Fraction(1, factorial(n)))
    return out


class ExpQuadForm:
    """P(x, p, hbar) * exp(Q(x, p, hbar)) with Q of total (x, p) degree <= 2.

    Star products of a polynomial against this class stay in the class: each
    p (or x) derivative of exp(Q) pulls down dQ/dp (or dQ/dx), which has
    (x, p) degree <= 1, so only the polynomial prefactor changes.
    """

    __slots__ = ("prefactor", "exponent")

    def __init__(self, prefactor: PhasePoly, exponent: PhasePoly):
        if exponent.total_xp_degree() > 2:
            raise ValueError("exponent must have total (x, p) degree <= 2")
        object.__setattr__(self, "prefactor", prefactor)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("ExpQuadForm is immutable")

    @classmethod
    def pure_exponent(cls, exponent: PhasePoly) -> "ExpQuadForm":
        return cls(PhasePoly.one(), exponent)

    @property
    def is_zero(self) -> bool:
        return self.prefactor.is_zero

    def __add__(self, other):
        if not isinstance(other, ExpQuadForm) or other.exponent != self.exponent:
            return NotImplemented
        return ExpQuadForm(self.prefactor + other.prefactor, self.exponent)

    def __neg__(self):
        return ExpQuadForm(-self.prefactor, self.exponent)

    def __sub__(self, other):
        if not isinstance(other, ExpQuadForm) or other.exponent != self.exponent:
            return NotImplemented
        return ExpQuadForm(self.prefactor - other.prefactor, self.exponent)

    def __eq__(self, other):
        if not isinstance(other, ExpQuadForm):
            return NotImplemented
        return self.prefactor == other.prefactor and self.exponent == other.exponent

    def __hash__(self):
        raise TypeError("ExpQuadForm is unhashable")

    def subs_hbar(self, value) -> "ExpQuadForm":
        return ExpQuadForm(self.prefactor.subs_hbar(value), self.exponent.subs_hbar(value))

    def to_json(self) -> dict:
        return {"prefactor": self.prefactor.to_json(), "exponent": self.exponent.to_json()}

    @classmethod
    def from_json(cls, obj) -> "ExpQuadForm":
        extra = set(obj) - {"prefactor", "exponent"}
        if extra:
            raise ValueError(f"unknown keys in ExpQuadForm JSON: {sorted(extra)}")
        return cls(PhasePoly.from_json(obj["prefactor"]), PhasePoly.from_json(obj["exponent"]))

    def __repr__(self):
        return f"({self.prefactor!r}) * exp({self.exponent!r})"


def star_poly_expquad(a: PhasePoly, e: ExpQuadForm, side: str) -> ExpQuadForm:
    """A * E (side="left") or E * A (side="right") as an ExpQuadForm.

    side="left" terminates on the finite x degree of A.  side="right" walks
    p derivatives of A, so A must be polynomial in p; negative p powers raise
    NonTerminating.
    """
    if side == "left":
        q_p = e.exponent.derivative("p")
        out = PhasePoly.zero()
        da = a
        g = e.prefactor  # (d/dp + dQ/dp)^k applied to the prefactor
        k = 0
        while not da.is_zero:
            term = da * g
            out = out + (term.shift_hbar(k).scaled(_i_pow_over_fact(k)) if k else term)
            da = da.derivative("x")
            g = g.derivative("p") + q_p * g
            k += 1
        return ExpQuadForm(out, e.exponent)
    if side == "right":
        if not a.is_p_polynomial():
            raise NonTerminating("right operand has negative p powers")
        q_x = e.exponent.derivative("x")
        out = PhasePoly.zero()
        db = a
        h = e.prefactor  # (d/dx + dQ/dx)^k applied to the prefactor
        k = 0
        while not db.is_zero:
            term = h * db
            out = out + (term.shift_hbar(k).scaled(_i_pow_over_fact(k)) if k else term)
            db = db.derivative("p")
            h = h.derivative("x") + q_x * h
            k += 1
        return ExpQuadForm(out, e.exponent)
    raise ValueError("side must be 'left' or 'right'")


def eqf_is_positive_hermitian(e: ExpQuadForm) -> bool:
    """Hermiticity of the exponent for x-only or p-only Gaussians.

    When the exponent depends on x only or on p only, the star products in
    exp and log degenerate to pointwise products, so positivity of the metric
    reduces to the hermiticity criterion on the exponent itself (realness of
    its coefficients).  A mixed exponent has no such shortcut; callers must
    fall back to order-by-order series certification.
    """
    if e.prefactor != PhasePoly.one():
        raise ValueError("shortcut applies to prefactor 1 only")
    q = e.exponent
    if q.depends_on_x() and q.depends_on_p():
        raise MixedExponent("exponent depends on both x and p")
    return is_hermitian(q)
