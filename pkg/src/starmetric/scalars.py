"""Exact scalar arithmetic: Gaussian rationals, Laurent polynomials in named
real parameters, and rational functions of two real parameters.

Everything in this module is immutable and exact; no floating point enters
at this layer.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

RatLike = Union[int, Fraction, str]


class PoleAtPoint(ArithmeticError):
    """An evaluation point lies on the zero set of a denominator."""


class ZeroDenominator(ValueError):
    """A rational function was built with an identically zero denominator."""


def as_fraction(value: RatLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fraction_str(value: Fraction) -> str:
    """Serialize a rational as ``"num/den"``, omitting ``/den`` when den == 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class GaussianRational:
    """Exact complex number re + im*i with arbitrary-precision rational parts.

    `Fraction` keeps each part normalized (positive denominator, reduced),
    so equality is structural.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: RatLike = 0, im: RatLike = 0):
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    # -- predicates ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def sign_is_negative(self) -> bool:
        """Canonical sign: negative when re < 0, or re == 0 and im < 0."""
        if self.re:
            return self.re < 0
        return self.im < 0

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return other * self.inverse()

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of zero GaussianRational")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- equality / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"re": fraction_str(self.re), "im": fraction_str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "GaussianRational":
        if not isinstance(obj, Mapping) or set(obj) - {"re", "im"}:
            raise ValueError(f"bad GaussianRational JSON: {obj!r}")
        return cls(Fraction(obj.get("re", "0")), Fraction(obj.get("im", "0")))

    def __repr__(self):
        if self.is_real:
            return fraction_str(self.re)
        if not self.re:
            return f"{fraction_str(self.im)}*i"
        return f"({fraction_str(self.re)}{'+' if self.im > 0 else '-'}{fraction_str(abs(self.im))}*i)"


GR = GaussianRational
ONE = GaussianRational(1)
ZERO = GaussianRational(0)
I = GaussianRational(0, 1)


def gr_conj(z: GaussianRational) -> GaussianRational:
    """Complex conjugate; an involution."""
    return z.conjugate()


class ParamPoly:
    """Sparse Laurent polynomial in named real parameters over GaussianRational.

    Used to keep model coefficients (a, b, c, a coupling, ...) symbolic while
    remaining in exact rational arithmetic.  Exponents may be negative; the
    parameters are treated as real under conjugation.
    """

    __slots__ = ("params", "terms")

    def __init__(self, params: Iterable[str], terms: Mapping[Tuple[int, ...], object]):
        params = tuple(params)
        clean: dict = {}
        for key, coeff in terms.items():
            key = tuple(key)
            if len(key) != len(params):
                raise ValueError("exponent tuple does not match parameter list")
            coeff = GaussianRational.coerce(coeff)
            if key in clean:
                coeff = clean[key] + coeff
            if coeff.is_zero:
                clean.pop(key, None)
            else:
                clean[key] = coeff
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, params: Iterable[str], value) -> "ParamPoly":
        params = tuple(params)
        return cls(params, {(0,) * len(params): GaussianRational.coerce(value)})

    @classmethod
    def generators(cls, *names: str) -> Tuple["ParamPoly", ...]:
        gens = []
        for k in range(len(names)):
            key = tuple(1 if j == k else 0 for j in range(len(names)))
            gens.append(cls(names, {key: ONE}))
        return tuple(gens)

    def const_like(self, value) -> "ParamPoly":
        return ParamPoly.constant(self.params, value)

    # -- predicates ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * len(self.params)}

    def constant_value(self) -> GaussianRational:
        if not self.is_constant:
            raise ValueError("not a constant ParamPoly")
        return self.terms.get((0,) * len(self.params), ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sign_is_negative(self) -> bool:
        if self.is_zero:
            return False
        lead = self.terms[min(self.terms)]
        return lead.sign_is_negative()

    # -- coercion helper --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            if other.params != self.params:
                raise ValueError("parameter lists differ")
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.const_like(other)
        return None

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            val = merged.get(key, ZERO) + coeff
            if val.is_zero:
                merged.pop(key, None)
            else:
                merged[key] = val
        return ParamPoly(self.params, merged)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.params, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                val = out.get(key, ZERO) + c1 * c2
                if val.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = val
        return ParamPoly(self.params, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self * GaussianRational.coerce(other).inverse()
        if isinstance(other, ParamPoly):
            return self * other.monomial_inverse()
        return NotImplemented

    def monomial_inverse(self) -> "ParamPoly":
        if len(self.terms) != 1:
            raise ValueError("only monomial ParamPoly values are invertible")
        ((key, coeff),) = self.terms.items()
        return ParamPoly(self.params, {tuple(-e for e in key): coeff.inverse()})

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.monomial_inverse() ** (-n)
        out = self.const_like(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "ParamPoly":
        return ParamPoly(self.params, {k: c.conjugate() for k, c in self.terms.items()})

    def derivative(self, name: str) -> "ParamPoly":
        i = self.params.index(name)
        out: dict = {}
        for key, coeff in self.terms.items():
            e = key[i]
            if e == 0:
                continue
            new = list(key)
            new[i] = e - 1
            out[tuple(new)] = coeff * e
        return ParamPoly(self.params, out)

    def eval(self, values: Mapping[str, GaussianRational]) -> GaussianRational:
        missing = set(self.params) - set(values)
        if missing:
            raise ValueError(f"missing parameter values: {sorted(missing)}")
        total = ZERO
        for key, coeff in self.terms.items():
            val = coeff
            for name, e in zip(self.params, key):
                if e:
                    val = val * GaussianRational.coerce(values[name]) ** e
            total = total + val
        return total

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self.const_like(other)
        if isinstance(other, ParamPoly):
            return self.params == other.params and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.params, frozenset(self.terms.items())))

    def canonical_terms(self):
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {
            "params": list(self.params),
            "terms": [
                {"powers": {n: e for n, e in zip(self.params, key) if e}, "coeff": c.to_json()}
                for key, c in self.canonical_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "ParamPoly":
        params = tuple(obj["params"])
        terms = {}
        for entry in obj["terms"]:
            powers = entry.get("powers", {})
            bad = set(powers) - set(params)
            if bad:
                raise ValueError(f"unknown parameters {sorted(bad)}")
            key = tuple(int(powers.get(name, 0)) for name in params)
            terms[key] = GaussianRational.from_json(entry["coeff"])
        return cls(params, terms)

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for key, coeff in self.canonical_terms():
            mono = "*".join(
                f"{n}^{e}" if e != 1 else n for n, e in zip(self.params, key) if e
            )
            bits.append(f"{coeff!r}*{mono}" if mono else repr(coeff))
        return " + ".join(bits)


class RatFunc2:
    """Rational function in the two real parameters (q1, q2).

    The denominator is normalized to be monic in the lexicographically
    leading monomial (so its leading coefficient has positive real part).
    Numerator and denominator are reduced only by monomial/numeric content;
    the ``reduced`` flag records whether the pair is known factor-free, and
    equality is always decided by cross multiplication.
    """

    PARAMS = ("q1", "q2")
    __slots__ = ("num", "den", "reduced")

    def __init__(self, num, den=1, *, _reduced=False):
        num = self._as_poly(num)
        den = self._as_poly(den)
        if den.is_zero:
            raise ZeroDenominator("denominator is identically zero")
        if num.is_zero:
            den = ParamPoly.constant(self.PARAMS, 1)
            _reduced = True
        else:
            # joint per-variable minimum exponent over num and den; shifting it
            # to zero clears Laurent exponents and strips shared monomial content
            mins = [None, None]
            for terms in (num.terms, den.terms):
                for key in terms:
                    for i, e in enumerate(key):
                        mins[i] = e if mins[i] is None else min(mins[i], e)
            if any(mins):
                mono = ParamPoly(self.PARAMS, {tuple(-m for m in mins): ONE})
                num = num * mono
                den = den * mono
            lead = den.terms[max(den.terms)]
            if lead != ONE:
                num = num / lead
                den = den / lead
        if den.is_constant and den.constant_value() == ONE and len(den.terms) == 1:
            _reduced = True
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "reduced", _reduced)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc2 is immutable")

    @classmethod
    def _as_poly(cls, value) -> ParamPoly:
        if isinstance(value, ParamPoly):
            if value.params != cls.PARAMS:
                raise ValueError("RatFunc2 components must use parameters (q1, q2)")
            return value
        if isinstance(value, (int, Fraction, GaussianRational)):
            return ParamPoly.constant(cls.PARAMS, value)
        raise TypeError(f"cannot interpret {value!r} as a (q1, q2) polynomial")

    @classmethod
    def coerce(cls, value) -> "RatFunc2":
        if isinstance(value, RatFunc2):
            return value
        return cls(value)

    @classmethod
    def generators(cls) -> Tuple["RatFunc2", "RatFunc2"]:
        q1, q2 = ParamPoly.generators(*cls.PARAMS)
        return cls(q1), cls(q2)

    # -- predicates ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def sign_is_negative(self) -> bool:
        return self.num.sign_is_negative()

    # -- arithmetic ------------------------------------------------------

    def _coerce_op(self, other):
        if isinstance(other, RatFunc2):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, ParamPoly)):
            return RatFunc2(other)
        return None

    def __add__(self, other):
        other = self._coerce_op(other)
        if other is None:
            return NotImplemented
        return RatFunc2(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc2(-self.num, self.den, _reduced=self.reduced)

    def __sub__(self, other):
        other = self._coerce_op(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce_op(other)
        if other is None:
            return NotImplemented
        return RatFunc2(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce_op(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc2(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce_op(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc2(1) / self) ** (-n)
        out = RatFunc2(1)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self) -> "RatFunc2":
        return RatFunc2(self.num.conjugate(), self.den.conjugate())

    def partial(self, which: int) -> "RatFunc2":
        """Exact quotient-rule derivative with respect to q1 (which=1) or q2."""
        if which not in (1, 2):
            raise ValueError("which must be 1 or 2")
        name = self.PARAMS[which - 1]
        return RatFunc2(
            self.num.derivative(name) * self.den - self.num * self.den.derivative(name),
            self.den * self.den,
        )

    def eval(self, q1, q2) -> GaussianRational:
        values = {"q1": GaussianRational.coerce(q1), "q2": GaussianRational.coerce(q2)}
        dval = self.den.eval(values)
        if dval.is_zero:
            raise PoleAtPoint(f"denominator vanishes at (q1, q2) = ({q1!r}, {q2!r})")
        return self.num.eval(values) / dval

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce_op(other)
        if other is None:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        raise TypeError("RatFunc2 is unhashable (equality is by cross multiplication)")

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj) -> "RatFunc2":
        return cls(ParamPoly.from_json(obj["num"]), ParamPoly.from_json(obj["den"]))

    def __repr__(self):
        if self.den.is_constant and self.den.constant_value() == ONE:
            return f"({self.num!r})"
        return f"({self.num!r})/({self.den!r})"


def rf_eval(f: RatFunc2, q1, q2) -> GaussianRational:
    """Evaluate exactly; raises PoleAtPoint on the singular locus."""
    return f.eval(q1, q2)


def rf_partial(f: RatFunc2, which: int) -> RatFunc2:
    return f.partial(which)


def primitive_real_poly(poly: ParamPoly) -> ParamPoly:
    """Scale a polynomial with rational coefficients to primitive integer form.

    Clears denominators, divides by the integer content, and fixes the sign so
    the lexicographically greatest monomial has a positive leading value.
    Used to present canonical loci such as 4*q1 + q2^2.
    """
    if poly.is_zero:
        return poly
    from math import gcd

    denlcm = 1
    for coeff in poly.terms.values():
        for part in (coeff.re, coeff.im):
            denlcm = denlcm * part.denominator // gcd(denlcm, part.denominator)
    nums = []
    for coeff in poly.terms.values():
        for part in (coeff.re, coeff.im):
            if part:
                nums.append(abs(int(part * denlcm)))
    g = 0
    for n in nums:
        g = gcd(g, n)
    scale = Fraction(denlcm, g if g else 1)
    out = poly * scale
    if out.terms[max(out.terms)].sign_is_negative():
        out = -out
    return out
