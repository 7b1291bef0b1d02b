"""Sparse Laurent polynomials on phase space, and truncated coupling series.

A `PhasePoly` stores terms as a sparse map from exponent triples
``(x_deg, p_deg, hbar_deg)`` to exact coefficients.  The x exponent is
always nonnegative; p and hbar exponents may be any integer.  Keeping hbar
as a Laurent variable makes statements such as "the metric is singular as
hbar -> 0" checkable facts about negative hbar degrees.

Coefficients are `GaussianRational` by default.  The same container also
works over `ParamPoly` (symbolic model parameters) and `RatFunc2`
(connection coefficients); the coefficient ring is duck-typed and constants
coerce automatically through the numeric protocol.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple, Union

from .scalars import GaussianRational, ParamPoly, RatFunc2, ONE, ZERO, as_fraction

Key = Tuple[int, int, int]
CoeffLike = Union[int, Fraction, GaussianRational, ParamPoly, RatFunc2]


class CouplingMismatch(ValueError):
    """Two series over different formal couplings were combined."""


def _coerce_coeff(value):
    if isinstance(value, (GaussianRational, ParamPoly, RatFunc2)):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational.coerce(value)
    raise TypeError(f"cannot use {value!r} as a PhasePoly coefficient")


class PhasePoly:
    """Phase-space function: sparse Laurent polynomial in (x, p, hbar)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, CoeffLike] | None = None):
        clean: dict = {}
        if terms:
            for key, coeff in terms.items():
                xd, pd, hd = key
                if xd < 0:
                    raise ValueError("x degree must be nonnegative")
                coeff = _coerce_coeff(coeff)
                key = (int(xd), int(pd), int(hd))
                if key in clean:
                    coeff = clean[key] + coeff
                if coeff.is_zero:
                    clean.pop(key, None)
                else:
                    clean[key] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PhasePoly is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "PhasePoly":
        return cls()

    @classmethod
    def one(cls) -> "PhasePoly":
        return cls({(0, 0, 0): ONE})

    @classmethod
    def const(cls, value: CoeffLike) -> "PhasePoly":
        return cls({(0, 0, 0): value})

    @classmethod
    def monomial(cls, coeff: CoeffLike, x: int = 0, p: int = 0, hbar: int = 0) -> "PhasePoly":
        return cls({(x, p, hbar): coeff})

    @classmethod
    def x(cls, power: int = 1) -> "PhasePoly":
        return cls({(power, 0, 0): ONE})

    @classmethod
    def p(cls, power: int = 1) -> "PhasePoly":
        return cls({(0, power, 0): ONE})

    @classmethod
    def hbar(cls, power: int = 1) -> "PhasePoly":
        return cls({(0, 0, power): ONE})

    # -- inspection ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, x: int = 0, p: int = 0, hbar: int = 0):
        return self.terms.get((x, p, hbar), ZERO)

    def canonical_terms(self):
        """Terms in lexicographic order on (x_deg, p_deg, hbar_deg)."""
        return sorted(self.terms.items())

    def x_degree(self) -> int:
        return max((k[0] for k in self.terms), default=0)

    def p_degree_range(self) -> Tuple[int, int]:
        degs = [k[1] for k in self.terms]
        return (min(degs), max(degs)) if degs else (0, 0)

    def hbar_degree_range(self) -> Tuple[int, int]:
        degs = [k[2] for k in self.terms]
        return (min(degs), max(degs)) if degs else (0, 0)

    def total_xp_degree(self) -> int:
        return max((k[0] + k[1] for k in self.terms), default=0)

    def depends_on_x(self) -> bool:
        return any(k[0] for k in self.terms)

    def depends_on_p(self) -> bool:
        return any(k[1] for k in self.terms)

    def is_p_polynomial(self) -> bool:
        return all(k[1] >= 0 for k in self.terms)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        if isinstance(other, PhasePoly):
            merged = dict(self.terms)
            for key, coeff in other.terms.items():
                if key in merged:
                    val = merged[key] + coeff
                    if val.is_zero:
                        del merged[key]
                    else:
                        merged[key] = val
                else:
                    merged[key] = coeff
            return PhasePoly(merged)
        if isinstance(other, (int, Fraction, GaussianRational, ParamPoly, RatFunc2)):
            return self + PhasePoly.const(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return PhasePoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, ParamPoly, RatFunc2)):
            other = PhasePoly.const(other)
        if isinstance(other, PhasePoly):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PhasePoly):
            out: dict = {}
            for (x1, p1, h1), c1 in self.terms.items():
                for (x2, p2, h2), c2 in other.terms.items():
                    key = (x1 + x2, p1 + p2, h1 + h2)
                    val = c1 * c2
                    if key in out:
                        val = out[key] + val
                    if val.is_zero:
                        out.pop(key, None)
                    else:
                        out[key] = val
            return PhasePoly(out)
        if isinstance(other, (int, Fraction, GaussianRational, ParamPoly, RatFunc2)):
            return self.scaled(other)
        return NotImplemented

    __rmul__ = __mul__

    def scaled(self, scalar: CoeffLike) -> "PhasePoly":
        scalar = _coerce_coeff(scalar)
        if scalar.is_zero:
            return PhasePoly.zero()
        return PhasePoly({k: c * scalar for k, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = PhasePoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus ----------------------------------------------------------

    def derivative(self, var: str) -> "PhasePoly":
        """Exact partial derivative with respect to ``"x"`` or ``"p"``."""
        axis = {"x": 0, "p": 1}[var]
        out: dict = {}
        for key, coeff in self.terms.items():
            e = key[axis]
            if e == 0:
                continue
            new = list(key)
            new[axis] = e - 1
            out[tuple(new)] = coeff * e
        return PhasePoly(out)

    def integrate_x(self) -> "PhasePoly":
        """Antiderivative in x with the integration function of p set to zero."""
        out = {}
        for (xd, pd, hd), coeff in self.terms.items():
            out[(xd + 1, pd, hd)] = coeff * Fraction(1, xd + 1)
        return PhasePoly(out)

    def conjugate(self) -> "PhasePoly":
        """Coefficientwise complex conjugation; x, p and hbar are real."""
        return PhasePoly({k: c.conjugate() for k, c in self.terms.items()})

    def shift_hbar(self, k: int) -> "PhasePoly":
        return PhasePoly({(xd, pd, hd + k): c for (xd, pd, hd), c in self.terms.items()})

    def subs_hbar(self, value) -> "PhasePoly":
        """Evaluate the hbar degree at a fixed exact rational value."""
        if not isinstance(value, GaussianRational):
            value = GaussianRational.coerce(as_fraction(value))
        acc: dict = {}
        for (xd, pd, hd), coeff in self.terms.items():
            scaled = coeff * value**hd
            key = (xd, pd, 0)
            if key in acc:
                scaled = acc[key] + scaled
            acc[key] = scaled
        return PhasePoly(acc)

    def map_coeffs(self, fn) -> "PhasePoly":
        return PhasePoly({k: fn(c) for k, c in self.terms.items()})

    def x_slices(self) -> dict:
        """Group terms by x degree: {x_deg: PhasePoly in (p, hbar) only}."""
        slices: dict = {}
        for (xd, pd, hd), coeff in self.terms.items():
            slices.setdefault(xd, {})[(0, pd, hd)] = coeff
        return {xd: PhasePoly(t) for xd, t in slices.items()}

    # -- equality -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, ParamPoly, RatFunc2)):
            other = PhasePoly.const(other)
        if isinstance(other, PhasePoly):
            if set(self.terms) != set(other.terms):
                return False
            return all(self.terms[k] == other.terms[k] for k in self.terms)
        return NotImplemented

    def __hash__(self):
        raise TypeError("PhasePoly is unhashable")

    # -- serialization -------------------------------------------------------

    def to_json(self) -> list:
        return [
            {"x": xd, "p": pd, "hbar": hd, "coeff": coeff.to_json()}
            for (xd, pd, hd), coeff in self.canonical_terms()
        ]

    @classmethod
    def from_json(cls, obj) -> "PhasePoly":
        if not isinstance(obj, Sequence):
            raise ValueError("PhasePoly JSON must be a list of terms")
        terms: dict = {}
        for entry in obj:
            extra = set(entry) - {"x", "p", "hbar", "coeff"}
            if extra:
                raise ValueError(f"unknown keys in PhasePoly term: {sorted(extra)}")
            coeff = coeff_from_json(entry["coeff"])
            key = (int(entry.get("x", 0)), int(entry.get("p", 0)), int(entry.get("hbar", 0)))
            if key in terms:
                coeff = terms[key] + coeff
            terms[key] = coeff
        return cls(terms)

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for (xd, pd, hd), coeff in self.canonical_terms():
            mono = "*".join(
                f"{n}^{e}" if e != 1 else n
                for n, e in (("x", xd), ("p", pd), ("hbar", hd))
                if e
            )
            lead = f"({coeff!r})"
            bits.append(f"{lead}*{mono}" if mono else lead)
        return " + ".join(bits)


def coeff_from_json(obj):
    """Dispatch a coefficient JSON object on its shape."""
    if isinstance(obj, Mapping):
        if "num" in obj:
            return RatFunc2.from_json(obj)
        if "params" in obj:
            return ParamPoly.from_json(obj)
        return GaussianRational.from_json(obj)
    raise ValueError(f"bad coefficient JSON: {obj!r}")


class CouplingSeries:
    """Truncated power series in one formal coupling with PhasePoly coefficients.

    ``coeffs[k]`` is the coefficient of ``coupling**k``; the truncation order is
    ``len(coeffs) - 1``.  Binary operations truncate to the smaller order of the
    two operands; nothing is ever padded.
    """

    __slots__ = ("coupling", "coeffs")

    def __init__(self, coupling: str, coeffs: Iterable[PhasePoly]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series carries at least its order-0 coefficient")
        if not all(isinstance(c, PhasePoly) for c in coeffs):
            raise TypeError("series coefficients must be PhasePoly values")
        object.__setattr__(self, "coupling", coupling)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CouplingSeries is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, coupling: str, value: PhasePoly, order: int) -> "CouplingSeries":
        return cls(coupling, [value] + [PhasePoly.zero()] * order)

    @classmethod
    def one(cls, coupling: str, order: int) -> "CouplingSeries":
        return cls.constant(coupling, PhasePoly.one(), order)

    def _check(self, other: "CouplingSeries"):
        if self.coupling != other.coupling:
            raise CouplingMismatch(
                f"cannot combine series in {self.coupling!r} and {other.coupling!r}"
            )

    def truncated(self, order: int) -> "CouplingSeries":
        if order >= self.order:
            return self
        return CouplingSeries(self.coupling, self.coeffs[: order + 1])

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, CouplingSeries):
            return NotImplemented
        self._check(other)
        k = min(self.order, other.order)
        return CouplingSeries(
            self.coupling, [a + b for a, b in zip(self.coeffs[: k + 1], other.coeffs[: k + 1])]
        )

    def __neg__(self):
        return CouplingSeries(self.coupling, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, CouplingSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Cauchy product with pointwise coefficient products, truncated."""
        if not isinstance(other, CouplingSeries):
            return NotImplemented
        self._check(other)
        k = min(self.order, other.order)
        out = []
        for n in range(k + 1):
            acc = PhasePoly.zero()
            for j in range(n + 1):
                acc = acc + self.coeffs[j] * other.coeffs[n - j]
            out.append(acc)
        return CouplingSeries(self.coupling, out)

    def scaled(self, scalar) -> "CouplingSeries":
        return CouplingSeries(self.coupling, [c.scaled(scalar) for c in self.coeffs])

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def map_coeffs(self, fn) -> "CouplingSeries":
        return CouplingSeries(self.coupling, [fn(c) for c in self.coeffs])

    def conjugate(self) -> "CouplingSeries":
        return self.map_coeffs(lambda c: c.conjugate())

    def subs_hbar(self, value) -> "CouplingSeries":
        return self.map_coeffs(lambda c: c.subs_hbar(value))

    def __eq__(self, other):
        if not isinstance(other, CouplingSeries):
            return NotImplemented
        return (
            self.coupling == other.coupling
            and self.order == other.order
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        raise TypeError("CouplingSeries is unhashable")

    def to_json(self) -> dict:
        return {
            "coupling": self.coupling,
            "order": self.order,
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj) -> "CouplingSeries":
        extra = set(obj) - {"coupling", "order", "coeffs"}
        if extra:
            raise ValueError(f"unknown keys in series JSON: {sorted(extra)}")
        coeffs = [PhasePoly.from_json(c) for c in obj["coeffs"]]
        series = cls(obj["coupling"], coeffs)
        if "order" in obj and int(obj["order"]) != series.order:
            raise ValueError("series order does not match coefficient count")
        return series

    def __repr__(self):
        bits = [f"({c!r})*{self.coupling}^{n}" for n, c in enumerate(self.coeffs)]
        return " + ".join(bits) + f" + O({self.coupling}^{self.order + 1})"


class ModelParams:
    """Real parameters (a, b, c) of the quadratic model, optionally tracked
    back to oscillator constants (omega, alpha, beta) with
    a = (omega - alpha - beta)/2, b = (omega + alpha + beta)/2, c = alpha - beta.
    """

    __slots__ = ("a", "b", "c", "provenance")

    def __init__(self, a, b, c, provenance: Tuple | None = None):
        a, b, c = (GaussianRational.coerce(v if not isinstance(v, (str,)) else Fraction(v)) for v in (a, b, c))
        for name, val in (("a", a), ("b", b), ("c", c)):
            if not val.is_real:
                raise ValueError(f"parameter {name} must be real")
        if provenance is not None:
            omega, alpha, beta = (GaussianRational.coerce(v) for v in provenance)
            if a != (omega - alpha - beta) * Fraction(1, 2):
                raise ValueError("a != (omega - alpha - beta)/2")
            if b != (omega + alpha + beta) * Fraction(1, 2):
                raise ValueError("b != (omega + alpha + beta)/2")
            if c != alpha - beta:
                raise ValueError("c != alpha - beta")
            provenance = (omega, alpha, beta)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "provenance", provenance)

    def __setattr__(self, name, value):
        raise AttributeError("ModelParams is immutable")

    @classmethod
    def from_oscillator(cls, omega, alpha, beta) -> "ModelParams":
        omega, alpha, beta = (GaussianRational.coerce(v) for v in (omega, alpha, beta))
        half = Fraction(1, 2)
        return cls(
            (omega - alpha - beta) * half,
            (omega + alpha + beta) * half,
            alpha - beta,
            provenance=(omega, alpha, beta),
        )

    def __repr__(self):
        return f"ModelParams(a={self.a!r}, b={self.b!r}, c={self.c!r})"


def pp_mul(a: PhasePoly, b: PhasePoly) -> PhasePoly:
    return a * b


def pp_derivative(a: PhasePoly, var: str) -> PhasePoly:
    return a.derivative(var)


def pp_integrate_x(a: PhasePoly) -> PhasePoly:
    return a.integrate_x()


def pp_conjugate(a: PhasePoly) -> PhasePoly:
    return a.conjugate()


def series_mul(a: CouplingSeries, b: CouplingSeries) -> CouplingSeries:
    return a * b
