"""Metric-operator machinery: the exchange equation H * Theta = Theta * H_dagger
as residuals, its finite-order PDE form, perturbative and Gaussian solutions,
and hermiticity/positivity certification.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .phasepoly import CouplingSeries, PhasePoly
from .scalars import GaussianRational, I, ONE, ParamPoly
from .star import (
    ExpQuadForm,
    dagger,
    dagger_series,
    is_hermitian,
    series_exp_pointwise,
    star,
    star_log,
    star_poly_expquad,
    star_series,
    _i_pow_over_fact,
)

ThetaLike = Union[PhasePoly, CouplingSeries, ExpQuadForm]


class DegenerateParams(ValueError):
    """a == b: the closed-form expressions divide by a - b."""


class UnsolvableOrder(ArithmeticError):
    """The triangular system for some x power is inconsistent."""


class HamiltonianSpec:
    """A Hamiltonian phase-space function, optionally split as H0 + g*V."""

    __slots__ = ("h0", "coupling_name", "v")

    def __init__(self, h0: PhasePoly, coupling: Optional[Tuple[str, PhasePoly]] = None):
        object.__setattr__(self, "h0", h0)
        if coupling is None:
            object.__setattr__(self, "coupling_name", None)
            object.__setattr__(self, "v", None)
        else:
            name, v = coupling
            object.__setattr__(self, "coupling_name", name)
            object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("HamiltonianSpec is immutable")

    @property
    def has_coupling(self) -> bool:
        return self.coupling_name is not None

    def symbolic_total(self) -> PhasePoly:
        """The full Hamiltonian; a coupling becomes a symbolic real parameter."""
        if not self.has_coupling:
            return self.h0
        (g,) = ParamPoly.generators(self.coupling_name)
        lift = lambda c: ParamPoly.constant((self.coupling_name,), 1) * c
        h0 = self.h0.map_coeffs(lift)
        v = self.v.map_coeffs(lambda c: g * c)
        return h0 + v

    def as_exact_series(self, coupling: str, order: int) -> CouplingSeries:
        """The Hamiltonian as an exact series: [H0, V, 0, ...].

        This is not truncation padding: the Hamiltonian is exactly polynomial
        in its coupling, so higher coefficients are genuinely zero.
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        coeffs = [self.h0] + [PhasePoly.zero()] * order
        if self.has_coupling:
            if coupling != self.coupling_name:
                raise ValueError(
                    f"model coupling is {self.coupling_name!r}, requested {coupling!r}"
                )
            if order >= 1:
                coeffs[1] = self.v
            elif not self.v.is_zero:
                raise ValueError("order 0 series cannot carry the coupling term")
        return CouplingSeries(coupling, coeffs)

    def to_json(self) -> dict:
        out = {"terms": self.h0.to_json()}
        if self.has_coupling:
            out["coupling"] = {"name": self.coupling_name, "V": self.v.to_json()}
        return out

    @classmethod
    def from_json(cls, obj) -> "HamiltonianSpec":
        extra = set(obj) - {"terms", "coupling", "params"}
        if extra:
            raise ValueError(f"unknown keys in Hamiltonian JSON: {sorted(extra)}")
        if "terms" not in obj:
            raise ValueError("Hamiltonian JSON needs a 'terms' list")
        params = obj.get("params")
        h0 = _poly_from_model_terms(obj["terms"], params)
        coupling = None
        if "coupling" in obj:
            cobj = obj["coupling"]
            cextra = set(cobj) - {"name", "V"}
            if cextra:
                raise ValueError(f"unknown keys in coupling JSON: {sorted(cextra)}")
            if "name" not in cobj or "V" not in cobj:
                raise ValueError("coupling JSON needs 'name' and 'V'")
            coupling = (cobj["name"], _poly_from_model_terms(cobj["V"], params))
        return cls(h0, coupling)

    def __repr__(self):
        if self.has_coupling:
            return f"HamiltonianSpec({self.h0!r} + {self.coupling_name}*({self.v!r}))"
        return f"HamiltonianSpec({self.h0!r})"


def _poly_from_model_terms(entries, params: Optional[Sequence[str]]) -> PhasePoly:
    """Model-file term list; entries may carry symbolic parameter powers."""
    terms: dict = {}
    for entry in entries:
        extra = set(entry) - {"x", "p", "hbar", "coeff", "params"}
        if extra:
            raise ValueError(f"unknown keys in term: {sorted(extra)}")
        if "coeff" not in entry:
            raise ValueError(f"term without a coefficient: {entry!r}")
        coeff = GaussianRational.from_json(entry["coeff"])
        powers = entry.get("params")
        if powers is not None:
            if not params:
                raise ValueError("term uses parameters but none are declared")
            bad = set(powers) - set(params)
            if bad:
                raise ValueError(f"undeclared parameters {sorted(bad)}")
            key = tuple(int(powers.get(name, 0)) for name in params)
            value = ParamPoly(tuple(params), {key: coeff})
        elif params:
            value = ParamPoly.constant(tuple(params), coeff)
        else:
            value = coeff
        k = (int(entry.get("x", 0)), int(entry.get("p", 0)), int(entry.get("hbar", 0)))
        if k in terms:
            value = terms[k] + value
        terms[k] = value
    return PhasePoly(terms)


# ---------------------------------------------------------------------------
# residuals


def metric_residual(spec: HamiltonianSpec, theta: ThetaLike) -> ThetaLike:
    """H * Theta - Theta * dagger(H); identically zero certifies Theta.

    The return value has the same kind as theta.  For a series, "zero" means
    zero through the truncation order.
    """
    if isinstance(theta, CouplingSeries):
        h = spec.as_exact_series(theta.coupling, theta.order)
        return star_series(h, theta) - star_series(theta, dagger_series(h))
    return _exchange_with_poly(spec.symbolic_total(), theta)


def observable_residual(a: PhasePoly, theta: ThetaLike) -> ThetaLike:
    """A * Theta - Theta * dagger(A) for an additional observable A."""
    return _exchange_with_poly(a, theta)


def _exchange_with_poly(h: PhasePoly, theta: ThetaLike):
    if isinstance(theta, PhasePoly):
        return star(h, theta) - star(theta, dagger(h))
    if isinstance(theta, ExpQuadForm):
        left = star_poly_expquad(h, theta, "left")
        right = star_poly_expquad(dagger(h), theta, "right")
        return left - right
    if isinstance(theta, CouplingSeries):
        hs = CouplingSeries.constant(theta.coupling, h, theta.order)
        return star_series(hs, theta) - star_series(theta, dagger_series(hs))
    raise TypeError(f"unsupported metric candidate {theta!r}")


# ---------------------------------------------------------------------------
# PDE extraction


class PDEOperator:
    """Linear differential operator L = sum coeff_ij(x, p, hbar) dx^i dp^j.

    ``apply`` reproduces the metric residual exactly:
    L(Theta) = H * Theta - Theta * dagger(H) for every Theta.
    ``normalized`` rescales by -1 when the canonical leading coefficient is
    negative, fixing the overall sign freedom of the homogeneous equation
    L(Theta) = 0 for display and golden comparison.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[Tuple[int, int], PhasePoly]):
        clean = {k: v for k, v in coeffs.items() if not v.is_zero}
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PDEOperator is immutable")

    def apply(self, theta: PhasePoly) -> PhasePoly:
        out = PhasePoly.zero()
        for (i, j), coeff in self.coeffs.items():
            d = theta
            for _ in range(i):
                d = d.derivative("x")
            for _ in range(j):
                d = d.derivative("p")
            out = out + coeff * d
        return out

    def canonical_items(self):
        return sorted(self.coeffs.items())

    def normalized(self) -> "PDEOperator":
        if not self.coeffs:
            return self
        key = min(self.coeffs)
        poly = self.coeffs[key]
        lead = poly.terms[min(poly.terms)]
        if lead.sign_is_negative():
            return PDEOperator({k: -v for k, v in self.coeffs.items()})
        return self

    def scaled(self, scalar) -> "PDEOperator":
        return PDEOperator({k: v.scaled(scalar) for k, v in self.coeffs.items()})

    def conjugate_coeffs(self) -> "PDEOperator":
        """The complex-conjugate operator L* (x, p, hbar and derivatives real)."""
        return PDEOperator({k: v.conjugate() for k, v in self.coeffs.items()})

    def compose(self, other: "PDEOperator") -> "PDEOperator":
        """Operator product, normal ordered with coefficients to the left.

        Uses (c1 dx^i dp^j)(c2 dx^k dp^l) =
        c1 * sum_{m<=i, n<=j} C(i,m) C(j,n) (dx^m dp^n c2) dx^{i-m+k} dp^{j-n+l}.
        """
        acc: Dict[Tuple[int, int], PhasePoly] = {}
        for (i, j), c1 in self.coeffs.items():
            for (k, l), c2 in other.coeffs.items():
                dm = c2
                for m in range(i + 1):
                    dn = dm
                    for n in range(j + 1):
                        coeff = c1 * dn * (Fraction(comb(i, m) * comb(j, n)))
                        key = (i - m + k, j - n + l)
                        acc[key] = acc.get(key, PhasePoly.zero()) + coeff
                        dn = dn.derivative("p")
                    dm = dm.derivative("x")
        return PDEOperator(acc)

    def __add__(self, other):
        if not isinstance(other, PDEOperator):
            return NotImplemented
        acc = dict(self.coeffs)
        for k, v in other.coeffs.items():
            acc[k] = acc.get(k, PhasePoly.zero()) + v
        return PDEOperator(acc)

    def __neg__(self):
        return PDEOperator({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, PDEOperator):
            return NotImplemented
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, PDEOperator):
            return NotImplemented
        if set(self.coeffs) != set(other.coeffs):
            return False
        return all(self.coeffs[k] == other.coeffs[k] for k in self.coeffs)

    def __hash__(self):
        raise TypeError("PDEOperator is unhashable")

    def subs_hbar(self, value) -> "PDEOperator":
        return PDEOperator({k: v.subs_hbar(value) for k, v in self.coeffs.items()})

    def to_json(self) -> list:
        return [
            {"dx": i, "dp": j, "coeff": c.to_json()} for (i, j), c in self.canonical_items()
        ]

    def __repr__(self):
        bits = [f"({c!r})*dx^{i}*dp^{j}" for (i, j), c in self.canonical_items()]
        return " + ".join(bits) if bits else "0"


def pde_operator(spec: HamiltonianSpec) -> PDEOperator:
    """L with L(Theta) = H * Theta - Theta * dagger(H) for every Theta.

    Both star sums truncate on the polynomial Hamiltonian:
    H * Theta contributes (i hbar)^k/k! dx^k H at slot (0, k) and
    Theta * dagger(H) contributes (i hbar)^k/k! dp^k dagger(H) at slot (k, 0).
    """
    h = spec.symbolic_total()
    hd = dagger(h)
    acc: Dict[Tuple[int, int], PhasePoly] = {}
    cur = h
    k = 0
    while not cur.is_zero:
        acc[(0, k)] = acc.get((0, k), PhasePoly.zero()) + cur.shift_hbar(k).scaled(
            _i_pow_over_fact(k)
        )
        cur = cur.derivative("x")
        k += 1
    cur = hd
    k = 0
    while not cur.is_zero:
        acc[(k, 0)] = acc.get((k, 0), PhasePoly.zero()) - cur.shift_hbar(k).scaled(
            _i_pow_over_fact(k)
        )
        cur = cur.derivative("p")
        k += 1
    return PDEOperator(acc)


def pde_mixed_conjugation(op: PDEOperator) -> PDEOperator:
    """exp(-i hbar dx dp) L exp(+i hbar dx dp), via x -> x - i hbar dp,
    p -> p - i hbar dx inside the coefficients (the images commute)."""
    x_op = PDEOperator({(0, 0): PhasePoly.x(), (0, 1): PhasePoly.monomial(-I, 0, 0, 1)})
    p_op = PDEOperator({(0, 0): PhasePoly.p(), (1, 0): PhasePoly.monomial(-I, 0, 0, 1)})
    total: Dict[Tuple[int, int], PhasePoly] = {}
    out = PDEOperator(total)
    for (i, j), coeff in op.coeffs.items():
        for (xd, pd, hd), scalar in coeff.terms.items():
            piece = PDEOperator({(0, 0): PhasePoly.monomial(scalar, 0, 0, hd)})
            for _ in range(xd):
                piece = piece.compose(x_op)
            for _ in range(pd):
                piece = piece.compose(p_op)
            piece = piece.compose(PDEOperator({(i, j): PhasePoly.one()}))
            out = out + piece
    return out


# ---------------------------------------------------------------------------
# Gaussian family for the quadratic model


def quadratic_hamiltonian(a, b, c) -> HamiltonianSpec:
    """H = a p^2 + b x^2 + i c p x with exact (possibly symbolic) a, b, c."""
    h = (
        PhasePoly.monomial(a, 0, 2, 0)
        + PhasePoly.monomial(b, 2, 0, 0)
        + PhasePoly.monomial(c, 1, 1, 0).scaled(I)
    )
    return HamiltonianSpec(h)


def symbolic_quadratic() -> Tuple[HamiltonianSpec, Tuple[ParamPoly, ParamPoly, ParamPoly]]:
    """The quadratic model with symbolic real parameters (a, b, c)."""
    a, b, c = ParamPoly.generators("a", "b", "c")
    return quadratic_hamiltonian(a, b, c), (a, b, c)


def quadratic_from_params(params) -> HamiltonianSpec:
    """Numeric quadratic model from a ModelParams triple."""
    return quadratic_hamiltonian(params.a, params.b, params.c)


def shifted_oscillator() -> HamiltonianSpec:
    """H = p^2/2 + x^2/2 + i x (to be evaluated at hbar = 1)."""
    half = Fraction(1, 2)
    h = (
        PhasePoly.monomial(half, 0, 2, 0)
        + PhasePoly.monomial(half, 2, 0, 0)
        + PhasePoly.monomial(I, 1, 0, 0)
    )
    return HamiltonianSpec(h)


def cubic_pt(coupling: str = "g") -> HamiltonianSpec:
    """H = p^2 + g * (i x^3)."""
    return HamiltonianSpec(
        PhasePoly.p(2), (coupling, PhasePoly.monomial(I, 3, 0, 0))
    )


def gaussian_exponent(r, s, t) -> PhasePoly:
    """Q = r p^2 + s p x + t x^2 from hbar-Laurent scalar PhasePolys."""
    r, s, t = (_as_scalar_poly(v) for v in (r, s, t))
    return r * PhasePoly.p(2) + s * PhasePoly.x() * PhasePoly.p() + t * PhasePoly.x(2)


def _as_scalar_poly(v) -> PhasePoly:
    if isinstance(v, PhasePoly):
        if any(k[0] or k[1] for k in v.terms):
            raise ValueError("exponent coefficients must be hbar-Laurent scalars")
        return v
    return PhasePoly.const(v)


def gaussian_family_constraint(spec: HamiltonianSpec, r, s, t) -> PhasePoly:
    """Residual prefactor of the metric equation on exp(r p^2 + s p x + t x^2).

    Zero iff (r, s, t) lies in the solution family of the quadratic model.
    """
    e = ExpQuadForm.pure_exponent(gaussian_exponent(r, s, t))
    return metric_residual(spec, e).prefactor


def gaussian_branch_identities(a, b, c, r, s, t) -> Tuple[PhasePoly, PhasePoly, PhasePoly]:
    """The polynomial certificates for family membership, avoiding square roots.

    With u = 4 b hbar r + c and v = 4 a hbar t - c and
    D = c^2 - 4 a b hbar s (2i - hbar s), membership is equivalent to
    u^2 - D = 0, v^2 - D = 0 and u - v = 0.  (The last is the sign linking:
    both closed-form branches take the same square root.)
    """
    hbar = PhasePoly.hbar()
    r, s, t = (_as_scalar_poly(v) for v in (r, s, t))
    a, b, c = (PhasePoly.const(v) for v in (a, b, c))
    u = hbar * r * b * 4 + c
    v = hbar * t * a * 4 - c
    d = c * c - a * b * hbar * s * (PhasePoly.const(2 * I) - hbar * s) * 4
    return (u * u - d, v * v - d, u - v)


def expand_gaussian_in_coupling(a, b, order: int, coupling: str = "c") -> CouplingSeries:
    """Taylor series in the coupling of the number-operator-fixed Gaussian metric.

    Branch data: r = t = c / (2 hbar (a - b)) and s the root of the family
    constraint with the correct c -> 0 limit, expanded through the binomial
    series of sqrt(1 - c^2/(a-b)^2); no algebraic numbers are materialized.
    The exponential is pointwise: the series represents the metric function
    itself, not a star exponential.
    """
    a = GaussianRational.coerce(a if not isinstance(a, str) else Fraction(a))
    b = GaussianRational.coerce(b if not isinstance(b, str) else Fraction(b))
    if not (a.is_real and b.is_real):
        raise ValueError("a and b must be real rationals")
    if a == b:
        raise DegenerateParams("a == b")
    if order < 0:
        raise ValueError("order must be >= 0")
    d = a - b
    zero = PhasePoly.zero()
    # r(c) = t(c): linear in c, coefficient 1/(2 hbar d)
    rho = [zero] * (order + 1)
    if order >= 1:
        rho[1] = PhasePoly.monomial(ONE / (d * 2), 0, 0, -1)
    # s(c) = (i/hbar) (1 - sqrt(1 - c^2/d^2)): even orders >= 2, with
    # sqrt(1-u) = sum_k C(1/2, k) (-u)^k and u = c^2/d^2
    s = [zero] * (order + 1)
    c_half = Fraction(1)
    dpow = GaussianRational.coerce(1)
    for k in range(1, order // 2 + 1):
        c_half = c_half * Fraction(3 - 2 * k, 2 * k)
        dpow = dpow * d * d
        delta = c_half * Fraction((-1) ** (k + 1))
        s[2 * k] = PhasePoly.monomial(I * delta / dpow, 0, 0, -1)
    n_poly = PhasePoly.p(2) + PhasePoly.x(2)
    xp = PhasePoly.x() * PhasePoly.p()
    q = CouplingSeries(
        coupling,
        [rho[k] * n_poly + s[k] * xp for k in range(order + 1)],
    )
    return series_exp_pointwise(q)


# ---------------------------------------------------------------------------
# perturbative solver for H = p^2 + g V(x)


def solve_perturbative(
    h0: PhasePoly,
    v: PhasePoly,
    order: int,
    coupling: str = "g",
    integration_functions: Optional[Dict[int, PhasePoly]] = None,
) -> CouplingSeries:
    """Series metric for H = p^2 + g V(x).

    Order n reduces to the triangular x-power system
        2 i hbar p dTheta_n/dx - hbar^2 d^2Theta_n/dx^2 = V * Theta_{n-1} - conj(V) Theta_{n-1},
    solved top-down.  By default every constant of integration (a free
    function of p at each order) is zero and the normalization is 1; a caller
    can instead supply integration_functions[n] as an x-independent PhasePoly
    added at order n.
    """
    if h0 != PhasePoly.p(2):
        raise ValueError("the perturbative solver requires H0 = p^2 exactly")
    if v.depends_on_p():
        raise ValueError("V must be a polynomial in x (and hbar) only")
    if order < 0:
        raise ValueError("order must be >= 0")
    integration_functions = integration_functions or {}
    for n, func in integration_functions.items():
        if func.depends_on_x():
            raise ValueError(f"integration function at order {n} depends on x")
    v_conj = v.conjugate()
    thetas: List[PhasePoly] = [PhasePoly.one()]
    for n in range(1, order + 1):
        prev = thetas[n - 1]
        rhs = star(v, prev) - prev * v_conj
        slices = rhs.x_slices()
        if not slices:
            thetas.append(integration_functions.get(n, PhasePoly.zero()))
            continue
        m = max(slices)
        theta_parts: Dict[int, PhasePoly] = {}
        for j in range(m, -1, -1):
            rho = slices.get(j, PhasePoly.zero())
            upper = theta_parts.get(j + 2, PhasePoly.zero())
            num = rho + upper.shift_hbar(2) * Fraction((j + 2) * (j + 1))
            # divide by 2 i hbar p (j + 1)
            inv = PhasePoly.monomial(-I * Fraction(1, 2 * (j + 1)), 0, -1, -1)
            theta_parts[j + 1] = num * inv
        theta_n = integration_functions.get(n, PhasePoly.zero())
        for j, part in theta_parts.items():
            theta_n = theta_n + part * PhasePoly.x(j)
        check = (
            theta_n.derivative("x").shift_hbar(1) * PhasePoly.p() * (2 * I)
            - theta_n.derivative("x").derivative("x").shift_hbar(2)
        )
        if check != rhs:
            raise UnsolvableOrder(f"triangular system inconsistent at order {n}")
        thetas.append(theta_n)
    return CouplingSeries(coupling, thetas)


# ---------------------------------------------------------------------------
# certification


class CertReport:
    """Outcome of hermiticity/positivity certification of a series metric."""

    __slots__ = ("hermitian", "positive", "order")

    def __init__(self, hermitian: bool, positive: bool, order: int):
        object.__setattr__(self, "hermitian", hermitian)
        object.__setattr__(self, "positive", positive)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("CertReport is immutable")

    def to_json(self) -> dict:
        return {"hermitian": self.hermitian, "positive": self.positive, "order": self.order}

    def __repr__(self):
        return f"CertReport(hermitian={self.hermitian}, positive={self.positive}, order={self.order})"


def certify_metric(theta: CouplingSeries) -> CertReport:
    """Criterion-based hermiticity of the series and of its star-logarithm.

    The hermiticity criterion is linear, so a series is hermitian iff every
    coefficient is; positivity holds when the star-log coefficients are.
    """
    from .star import BadConstantTerm

    if theta.coeffs[0] != PhasePoly.one():
        raise BadConstantTerm("certification expects a series with constant term 1")
    hermitian = all(is_hermitian(c) for c in theta.coeffs)
    log = star_log(theta)
    positive = all(is_hermitian(c) for c in log.coeffs)
    return CertReport(hermitian, positive, theta.order)


def poly_of_series(coeffs: Sequence, base: CouplingSeries) -> CouplingSeries:
    """sum_k coeffs[k] * base^{*k} with star powers of the series."""
    out = CouplingSeries.constant(base.coupling, PhasePoly.zero(), base.order)
    power = CouplingSeries.one(base.coupling, base.order)
    for k, c in enumerate(coeffs):
        if k:
            power = star_series(power, base)
        out = out + power.scaled(c)
    return out


def solution_family_closure(
    spec: HamiltonianSpec,
    theta: CouplingSeries,
    f_coeffs: Sequence,
    g_coeffs: Sequence,
) -> CouplingSeries:
    """f(H) * Theta * g(dagger(H)) with star-polynomial f and g.

    Whenever Theta solves the metric equation to its order, so does the
    result (f(H) commutes with H under star, and likewise for g).
    """
    h = spec.as_exact_series(theta.coupling, theta.order)
    fh = poly_of_series(f_coeffs, h)
    ghd = poly_of_series(g_coeffs, dagger_series(h))
    return star_series(star_series(fh, theta), ghd)


def hermitian_closure(
    spec: HamiltonianSpec, theta: CouplingSeries, g_coeffs: Sequence
) -> CouplingSeries:
    """g(H) * Theta * dagger(g(H)): preserves hermiticity of the candidate."""
    h = spec.as_exact_series(theta.coupling, theta.order)
    gh = poly_of_series(g_coeffs, h)
    return star_series(star_series(gh, theta), dagger_series(gh))


def number_observable() -> PhasePoly:
    """N = (p^2 + x^2) / (2 hbar)."""
    half = Fraction(1, 2)
    return PhasePoly.monomial(half, 0, 2, -1) + PhasePoly.monomial(half, 2, 0, -1)


def log_linear_in_n_check(a, b, order: int, coupling: str = "c") -> bool:
    """True iff every star-log coefficient has the shape alpha + beta (p^2 + x^2)
    with real hbar-Laurent alpha, beta."""
    theta = expand_gaussian_in_coupling(a, b, order, coupling)
    log = star_log(theta)
    for poly in log.coeffs:
        for (xd, pd, hd), coeff in poly.terms.items():
            if (xd, pd) not in ((0, 0), (2, 0), (0, 2)):
                return False
            if not coeff.is_real:
                return False
        for (xd, pd, hd) in list(poly.terms):
            if (xd, pd) == (2, 0):
                if poly.coeff(2, 0, hd) != poly.coeff(0, 2, hd):
                    return False
    return True
