"""
Точная арифметика: рациональные числа, простые расширения Q[y]/(q), многочлены,
усечённые струи и сертифицированные численные вложения
"""

import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import sympy

from .errors import (
    FieldMismatchError,
    IndeterminateError,
    ModulusRequiredError,
    OrderMismatchError,
    ReducibleFactorError,
    RootIndexError,
)
from .utils import format_rational, parse_rational

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction, str, "FieldElement"]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_Y = sympy.Symbol('y')


def _trim(coeffs: List[Fraction]) -> List[Fraction]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    size = max(len(a), len(b))
    out = [_ZERO] * size
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = _trim(list(a))
    if len(rem) < len(b):
        return [], rem
    quo = [_ZERO] * (len(rem) - len(b) + 1)
    lead = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        factor = rem[-1] / lead
        quo[shift] = factor
        for i, y in enumerate(b):
            rem[shift + i] -= factor * y
        rem = _trim(rem)
    return _trim(quo), rem


class NumberField:
    """Простое расширение Q[y]/(q) с нормированным модулем q"""

    def __init__(self, modulus: Sequence[Scalar], label: Optional[str] = None):
        coeffs = _trim([parse_rational(c) for c in modulus])
        if len(coeffs) < 2:
            raise ValueError("Modulus must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError(f"Modulus must be monic, leading coefficient is {coeffs[-1]}")

        self.modulus: Tuple[Fraction, ...] = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.label = label or ("Q" if self.degree == 1 else f"Q[y]/({Polynomial.from_rationals(coeffs).format('y')})")

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"NumberField({self.label})"

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def reduce(self, coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        d = self.degree
        c = list(coeffs)
        q = self.modulus
        for k in range(len(c) - 1, d - 1, -1):
            top = c[k]
            if top:
                shift = k - d
                for i in range(d):
                    c[shift + i] -= top * q[i]
        if len(c) < d:
            c.extend([_ZERO] * (d - len(c)))
        return tuple(c[:d])

    def element(self, coeffs: Sequence[Scalar]) -> "FieldElement":
        return FieldElement(self, self.reduce([parse_rational(c) for c in coeffs]))

    def zero(self) -> "FieldElement":
        return FieldElement(self, (_ZERO,) * self.degree)

    def one(self) -> "FieldElement":
        return self.coerce(1)

    def gen(self) -> "FieldElement":
        """Класс вычетов y"""
        return self.element([0, 1])

    def coerce(self, value: Scalar) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if value.field.is_rational:
                value = value.coeffs[0]
            elif value.is_rational():
                value = value.coeffs[0]
            else:
                raise FieldMismatchError(f"Cannot coerce element of {value.field.label} into {self.label}")
        c = parse_rational(value)
        return FieldElement(self, (c,) + (_ZERO,) * (self.degree - 1))


RATIONALS = NumberField([0, 1], label="Q")


class FieldElement:
    __slots__ = ('field', 'coeffs')

    def __init__(self, field: NumberField, coeffs: Tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def _other(self, other: Any) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatchError(f"Field mismatch: {self.field.label} vs {other.field.label}")
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other: Any) -> "FieldElement":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, tuple(x + y for x, y in zip(self.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other: Any) -> "FieldElement":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, tuple(x - y for x, y in zip(self.coeffs, b.coeffs)))

    def __rsub__(self, other: Any) -> "FieldElement":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return b - self

    def __mul__(self, other: Any) -> "FieldElement":
        b = self._other(other)
        if b is None:
            return NotImplemented
        if self.field.degree == 1:
            return FieldElement(self.field, (self.coeffs[0] * b.coeffs[0],))
        return FieldElement(self.field, self.field.reduce(_poly_mul(self.coeffs, b.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError(f"Division by zero in {self.field.label}")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coeffs[0],))

        r0, r1 = list(self.field.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [_ONE]
        while len(r1) > 1:
            quo, rem = _poly_divmod(r0, r1)
            if not rem:
                raise ReducibleFactorError(f"Modulus of {self.field.label} is reducible")
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1))
        c = r1[0]
        return self.field.element([x / c for x in s1])

    def __truediv__(self, other: Any) -> "FieldElement":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self * b.inverse()

    def __rtruediv__(self, other: Any) -> "FieldElement":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return b * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.modulus, self.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_strings(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        return Polynomial.from_rationals(self.coeffs).format('y')

    def __repr__(self) -> str:
        return f"FieldElement({self}, {self.field.label})"


_OPS = {
    'add': lambda a, b: a + b,
    'sub': lambda a, b: a - b,
    'mul': lambda a, b: a * b,
    'div': lambda a, b: a / b,
}


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op not in _OPS:
        raise ValueError(f"Unknown operation: {op}")
    if a.field != b.field:
        raise FieldMismatchError(f"Field mismatch: {a.field.label} vs {b.field.label}")
    return _OPS[op](a, b)


class Polynomial:
    """Плотный многочлен от x, коэффициенты от младших к старшим"""

    def __init__(self, coeffs: Sequence[Scalar], field: NumberField = RATIONALS):
        self.field = field
        elems = [field.coerce(c) for c in coeffs]
        while elems and elems[-1].is_zero():
            elems.pop()
        self.coeffs: Tuple[FieldElement, ...] = tuple(elems)

    @classmethod
    def from_rationals(cls, coeffs: Sequence[Scalar]) -> "Polynomial":
        return cls(coeffs, RATIONALS)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "Polynomial":
        coeffs = [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in reversed(poly.all_coeffs())]
        return cls(coeffs, RATIONALS)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> FieldElement:
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def rational_coeffs(self) -> List[Fraction]:
        return [c.rational_value() for c in self.coeffs]

    def _other(self, other: "Polynomial") -> "Polynomial":
        if other.field == self.field:
            return other
        if other.is_rational():
            return Polynomial(other.coeffs, self.field)
        if self.is_rational():
            raise FieldMismatchError("Promote the rational operand explicitly with over()")
        raise FieldMismatchError(f"Field mismatch: {self.field.label} vs {other.field.label}")

    def over(self, field: NumberField) -> "Polynomial":
        return Polynomial(self.coeffs, field)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        other = self._other(other)
        size = max(len(self.coeffs), len(other.coeffs))
        zero = self.field.zero()
        return Polynomial([
            (self.coeffs[i] if i < len(self.coeffs) else zero) + (other.coeffs[i] if i < len(other.coeffs) else zero)
            for i in range(size)
        ], self.field)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], self.field)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-self._other(other))

    def __mul__(self, other: Union["Polynomial", FieldElement, int, Fraction]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = self.field.coerce(other)
            return Polynomial([a * c for a in self.coeffs], self.field)
        other = self._other(other)
        if self.is_zero() or other.is_zero():
            return Polynomial([], self.field)
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        result = Polynomial([1], self.field)
        for _ in range(exponent):
            result = result * self
        return result

    def divmod(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        other = self._other(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [self.field.zero()] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead_inv = other.leading().inverse()
        while len(rem) >= len(other.coeffs) and rem:
            shift = len(rem) - len(other.coeffs)
            factor = rem[-1] * lead_inv
            quo[shift] = factor
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - factor * b
            while rem and rem[-1].is_zero():
                rem.pop()
        return Polynomial(quo, self.field), Polynomial(rem, self.field)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def divides(self, other: "Polynomial") -> bool:
        """self | other"""
        return (other % self).is_zero()

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.field != other.field:
            if self.is_rational() and other.is_rational():
                return self.rational_coeffs() == other.rational_coeffs()
            return False
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(c.coeffs for c in self.coeffs))

    def evaluate(self, x: FieldElement) -> FieldElement:
        """Схема Горнера; рациональные коэффициенты переносятся в поле x"""
        field = x.field
        result = field.zero()
        for c in reversed(self.coeffs):
            result = result * x + field.coerce(c)
        return result

    __call__ = evaluate

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return Polynomial([c * inv for c in self.coeffs], self.field)

    def compose_square(self) -> "Polynomial":
        """p(y²)"""
        zero = self.field.zero()
        out = []
        for c in self.coeffs:
            out.extend([c, zero])
        return Polynomial(out[:-1] if out else out, self.field)

    def to_sympy(self, symbol: sympy.Symbol = _Y) -> sympy.Poly:
        coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(self.rational_coeffs())]
        return sympy.Poly.from_list(coeffs or [0], symbol, domain=sympy.QQ)

    def to_strings(self) -> List[str]:
        if self.is_rational():
            return [format_rational(c) for c in self.rational_coeffs()]
        return [str(c) for c in self.coeffs]

    def format(self, var: str = 'x') -> str:
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            if c.is_rational():
                text = format_rational(c.coeffs[0])
            else:
                text = f"({c})"
            if i == 0:
                terms.append(text)
                continue
            power = var if i == 1 else f"{var}^{i}"
            if text == "1":
                terms.append(power)
            elif text == "-1":
                terms.append(f"-{power}")
            else:
                terms.append(f"{text}*{power}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.format('x')

    def __repr__(self) -> str:
        return f"Polynomial({self.format('x')})"


def _is_irreducible(poly: Polynomial) -> bool:
    return poly.degree >= 1 and poly.to_sympy().is_irreducible


def _largest_real_root(factor: sympy.Poly) -> Optional[sympy.Float]:
    count = factor.count_roots()
    if count == 0:
        return None
    return sympy.N(sympy.CRootOf(factor, count - 1), 40)


def lambda_field_from_factor(
    q_sq: Polynomial,
    modulus: Optional[Polynomial] = None,
    assume_irreducible: bool = False,
    max_factor_degree: int = 8,
) -> Tuple[NumberField, FieldElement, FieldElement]:
    """Поле, содержащее корень λ многочлена q_sq(y²)"""
    if not q_sq.is_rational():
        raise FieldMismatchError("Eigenvalue factor must have rational coefficients")
    if not q_sq.is_monic():
        raise ValueError(f"Eigenvalue factor {q_sq} is not monic")

    if q_sq.degree <= max_factor_degree // 2:
        if not _is_irreducible(q_sq):
            raise ReducibleFactorError(f"Factor {q_sq} is reducible over Q")
    elif not assume_irreducible:
        raise ReducibleFactorError(
            f"Irreducibility of degree-{q_sq.degree} factor {q_sq} cannot be certified; "
            "assert it explicitly"
        )

    lifted = q_sq.compose_square()

    if modulus is not None:
        if not modulus.is_rational() or not modulus.is_monic():
            raise ValueError(f"Modulus {modulus} must be monic with rational coefficients")
        if not modulus.divides(lifted):
            raise ReducibleFactorError(f"Modulus {modulus.format('y')} does not divide {lifted.format('y')}")
        chosen = modulus
        logger.info(f"Using supplied modulus {modulus.format('y')}")
    else:
        if lifted.degree > max_factor_degree:
            raise ModulusRequiredError(
                f"{lifted.format('y')} has degree {lifted.degree} > {max_factor_degree}; "
                "supply the minimal polynomial of lambda explicitly"
            )
        _, factors = lifted.to_sympy().factor_list()
        candidates = sorted(
            (Polynomial.from_sympy(f.monic()) for f, _ in factors),
            key=lambda p: (p.degree, p.rational_coeffs()),
        )
        best = None
        best_root = None
        for candidate in candidates:
            root = _largest_real_root(candidate.to_sympy())
            if root is not None and (best_root is None or root > best_root):
                best, best_root = candidate, root
        chosen = best if best is not None else candidates[0]
        logger.debug(f"Factors of {lifted.format('y')}: {[c.format('y') for c in candidates]}")

    if chosen.degree == 1:
        field = RATIONALS
        lam = field.coerce(-chosen.rational_coeffs()[0])
    else:
        field = NumberField(chosen.rational_coeffs())
        lam = field.gen()
    lam_sq = lam * lam
    if not q_sq.evaluate(lam_sq).is_zero():
        raise ReducibleFactorError(f"Constructed lambda does not satisfy {q_sq}")

    logger.info(f"Lambda field {field.label} for factor {q_sq}")
    return field, lam, lam_sq


# --- численные вложения ------------------------------------------------------

iv = mpmath.iv


@contextmanager
def interval_precision(digits: int):
    saved = iv.prec
    iv.dps = digits
    try:
        yield
    finally:
        iv.prec = saved


def _iv_rational(value: Fraction):
    return iv.mpf(value.numerator) / value.denominator


@dataclass(frozen=True)
class ComplexInterval:
    """Прямоугольник real × imag, гарантированно содержащий значение"""
    real: Any
    imag: Any

    def __add__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.real + other.real, self.imag + other.imag)

    def __mul__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(
            self.real * other.real - self.imag * other.imag,
            self.real * other.imag + self.imag * other.real,
        )

    def contains(self, value: Union[complex, int, float, str, Any]) -> bool:
        z = mpmath.mpmathify(value)
        return mpmath.re(z) in self.real and mpmath.im(z) in self.imag

    def hull(self, slack: Fraction) -> "ComplexInterval":
        """Расширение на slack во все стороны"""
        pad = iv.mpf([-1, 1]) * _iv_rational(slack)
        return ComplexInterval(self.real + pad, self.imag + pad)

    def modulus_squared(self):
        return self.real * self.real + self.imag * self.imag

    def midpoint(self) -> complex:
        return complex(float(mpmath.mpf(self.real.mid)), float(mpmath.mpf(self.imag.mid)))

    def width(self):
        return max(
            mpmath.mpf(self.real.b) - mpmath.mpf(self.real.a),
            mpmath.mpf(self.imag.b) - mpmath.mpf(self.imag.a),
        )


def _sympy_modulus(field: NumberField) -> sympy.Poly:
    return Polynomial.from_rationals(field.modulus).to_sympy()


def default_root_choice(field: NumberField) -> int:
    """Индекс наибольшего вещественного корня модуля, иначе 0"""
    if field.is_rational:
        return 0
    count = _sympy_modulus(field).count_roots()
    return count - 1 if count > 0 else 0


def _to_fraction(value: sympy.Rational) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def isolate_root(field: NumberField, root_choice: int, precision: int) -> Tuple[Fraction, Fraction, Fraction, bool]:
    """Центр (re, im), радиус и признак вещественности выбранного корня модуля"""
    if not 0 <= root_choice < field.degree:
        raise RootIndexError(f"Root index {root_choice} out of range for degree {field.degree}")
    if field.is_rational:
        return -field.modulus[0], _ZERO, _ZERO, True

    root = sympy.CRootOf(_sympy_modulus(field), root_choice)
    tol = sympy.Rational(1, 10 ** (precision + 2))
    approx = root.eval_rational(dx=tol, dy=tol)
    re_part, im_part = sympy.re(approx), sympy.im(approx)
    return _to_fraction(re_part), _to_fraction(im_part), _to_fraction(tol), bool(root.is_real)


def embed_numeric(a: FieldElement, root_choice: Optional[int] = None, precision: int = 50) -> ComplexInterval:
    field = a.field
    if root_choice is None:
        root_choice = default_root_choice(field)
    if not 0 <= root_choice < field.degree:
        raise RootIndexError(f"Root index {root_choice} out of range for degree {field.degree}")

    with interval_precision(precision + 10):
        if a.is_rational():
            return ComplexInterval(_iv_rational(a.coeffs[0]), iv.mpf(0))

        re_c, im_c, radius, is_real = isolate_root(field, root_choice, precision)
        pad = iv.mpf([-1, 1]) * _iv_rational(radius)
        z = ComplexInterval(
            _iv_rational(re_c) + pad,
            iv.mpf(0) if is_real else _iv_rational(im_c) + pad,
        )

        value = ComplexInterval(iv.mpf(0), iv.mpf(0))
        for c in reversed(a.coeffs):
            value = value * z + ComplexInterval(_iv_rational(c), iv.mpf(0))
        return value


def archimedean_check(
    lam: FieldElement,
    root_choice: Optional[int] = None,
    precision: int = 50,
    refinement_rounds: int = 6,
) -> bool:
    """True, если |λ| ≠ 1 под выбранным вложением"""
    field = lam.field
    if root_choice is None:
        root_choice = default_root_choice(field)

    if field.is_rational or isolate_root(field, root_choice, 10)[3]:
        # для вещественного вложения |λ| = 1 ровно тогда, когда λ² = 1
        return lam * lam != 1

    digits = precision
    for round_index in range(refinement_rounds):
        z = embed_numeric(lam, root_choice, digits)
        with interval_precision(digits + 10):
            mod_sq = z.modulus_squared()
            if 1 not in mod_sq:
                logger.debug(f"|lambda|^2 separated from 1 at {digits} digits")
                return True
        logger.debug(f"Refinement round {round_index + 1}: |lambda|^2 interval contains 1")
        digits *= 2

    raise IndeterminateError(f"|lambda| = 1 could not be excluded after {refinement_rounds} refinements")


# --- струи ----------------------------------------------------------------------

class Jet:
    """Элемент K[t]/(t^m)"""

    __slots__ = ('field', 'order', 'coeffs')

    def __init__(self, field: NumberField, coeffs: Sequence[Scalar], order: Optional[int] = None):
        order = order if order is not None else len(coeffs)
        if order < 1:
            raise ValueError("Jet order must be positive")
        elems = [field.coerce(c) for c in list(coeffs)[:order]]
        elems.extend([field.zero()] * (order - len(elems)))
        self.field = field
        self.order = order
        self.coeffs: Tuple[FieldElement, ...] = tuple(elems)

    @classmethod
    def constant(cls, field: NumberField, value: Scalar, order: int) -> "Jet":
        return cls(field, [value], order)

    def _other(self, other: Any) -> Optional["Jet"]:
        if isinstance(other, Jet):
            if other.order != self.order:
                raise OrderMismatchError(f"Jet orders differ: {self.order} vs {other.order}")
            if other.field != self.field:
                raise FieldMismatchError(f"Field mismatch: {self.field.label} vs {other.field.label}")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return Jet.constant(self.field, other, self.order)
        return None

    def __add__(self, other: Any) -> "Jet":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return Jet(self.field, [x + y for x, y in zip(self.coeffs, b.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.field, [-x for x in self.coeffs], self.order)

    def __sub__(self, other: Any) -> "Jet":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return Jet(self.field, [x - y for x, y in zip(self.coeffs, b.coeffs)], self.order)

    def __rsub__(self, other: Any) -> "Jet":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return b - self

    def __mul__(self, other: Any) -> "Jet":
        b = self._other(other)
        if b is None:
            return NotImplemented
        m = self.order
        out = [self.field.zero()] * m
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j in range(m - i):
                y = b.coeffs[j]
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return Jet(self.field, out, m)

    __rmul__ = __mul__

    def is_invertible(self) -> bool:
        return not self.coeffs[0].is_zero()

    def inverse(self) -> "Jet":
        if not self.is_invertible():
            raise ZeroDivisionError("Jet with zero constant term is not invertible")
        inv0 = self.coeffs[0].inverse()
        out = [inv0]
        for k in range(1, self.order):
            acc = self.field.zero()
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-inv0 * acc)
        return Jet(self.field, out, self.order)

    def __truediv__(self, other: Any) -> "Jet":
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self * b.inverse()

    def __pow__(self, exponent: int) -> "Jet":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Jet.constant(self.field, 1, self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction, FieldElement)):
            other = Jet.constant(self.field, other, self.order)
        if not isinstance(other, Jet):
            return NotImplemented
        return self.order == other.order and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if all(c.is_zero() for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.order, tuple(c.coeffs for c in self.coeffs)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self) -> Optional[int]:
        """Порядок первого ненулевого коэффициента"""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    def coefficient(self, k: int) -> FieldElement:
        return self.coeffs[k]

    def derivative_at_zero(self, k: int) -> FieldElement:
        return self.coeffs[k] * math.factorial(k)

    def __repr__(self) -> str:
        terms = [f"({c})*t^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return f"Jet({' + '.join(terms) or '0'} mod t^{self.order})"


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    if op not in _OPS:
        raise ValueError(f"Unknown operation: {op}")
    if a.order != b.order:
        raise OrderMismatchError(f"Jet orders differ: {a.order} vs {b.order}")
    return _OPS[op](a, b)


def describe_field(field: NumberField) -> Dict[str, Any]:
    return {
        'label': field.label,
        'degree': field.degree,
        'modulus': [format_rational(c) for c in field.modulus],
    }
