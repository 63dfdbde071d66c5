"""
Матрицы над K[t]/(t^m): хранятся как список коэффициентов M_0..M_{m-1}
"""

import logging
from typing import Dict, List, Optional, Sequence

from .errors import DimensionMismatchError, OrderMismatchError
from .exactlinalg import MatrixK
from .numfield import Jet, NumberField, Scalar

logger = logging.getLogger(__name__)


class JetMatrix:
    """Σ t^k M_k mod t^m"""

    def __init__(self, field: NumberField, size: int, coeffs: Sequence[MatrixK], order: int):
        if order < 1:
            raise ValueError("Jet order must be positive")
        terms = list(coeffs)[:order]
        for m in terms:
            if m.shape != (size, size):
                raise DimensionMismatchError(f"Coefficient of shape {m.shape} in a {size}x{size} jet matrix")
        while len(terms) < order:
            terms.append(MatrixK.zero(field, size, size))
        self.field = field
        self.size = size
        self.order = order
        self.coeffs: List[MatrixK] = [m.over(field) for m in terms]

    @classmethod
    def constant(cls, matrix: MatrixK, order: int) -> "JetMatrix":
        return cls(matrix.field, matrix.rows, [matrix], order)

    @classmethod
    def identity(cls, field: NumberField, size: int, order: int) -> "JetMatrix":
        return cls.constant(MatrixK.identity(field, size), order)

    @classmethod
    def from_terms(cls, field: NumberField, size: int, terms: Dict[int, MatrixK], order: int) -> "JetMatrix":
        """{степень t: коэффициент}"""
        coeffs = [terms.get(k, MatrixK.zero(field, size, size)) for k in range(order)]
        return cls(field, size, coeffs, order)

    def _check(self, other: "JetMatrix") -> None:
        if other.order != self.order:
            raise OrderMismatchError(f"Jet orders differ: {self.order} vs {other.order}")
        if other.size != self.size:
            raise DimensionMismatchError(f"Jet matrix sizes differ: {self.size} vs {other.size}")

    def __add__(self, other: "JetMatrix") -> "JetMatrix":
        self._check(other)
        return JetMatrix(self.field, self.size, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self) -> "JetMatrix":
        return JetMatrix(self.field, self.size, [-a for a in self.coeffs], self.order)

    def __sub__(self, other: "JetMatrix") -> "JetMatrix":
        return self + (-other)

    def scale(self, c: Scalar) -> "JetMatrix":
        return JetMatrix(self.field, self.size, [a.scale(c) for a in self.coeffs], self.order)

    def __mul__(self, other: "JetMatrix") -> "JetMatrix":
        if not isinstance(other, JetMatrix):
            return self.scale(other)
        self._check(other)
        out = []
        for k in range(self.order):
            acc = MatrixK.zero(self.field, self.size, self.size)
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            out.append(acc)
        return JetMatrix(self.field, self.size, out, self.order)

    def inverse(self) -> "JetMatrix":
        base_inv = self.coeffs[0].inverse()
        out = [base_inv]
        for k in range(1, self.order):
            acc = MatrixK.zero(self.field, self.size, self.size)
            for i in range(1, k + 1):
                if not self.coeffs[i].is_zero():
                    acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(base_inv * acc))
        return JetMatrix(self.field, self.size, out, self.order)

    def __pow__(self, exponent: int) -> "JetMatrix":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = JetMatrix.identity(self.field, self.size, self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def coefficient(self, k: int) -> MatrixK:
        return self.coeffs[k]

    def entry(self, i: int, j: int) -> Jet:
        return Jet(self.field, [m[i, j] for m in self.coeffs], self.order)

    def is_identity(self) -> bool:
        return self.coeffs[0].is_identity() and all(m.is_zero() for m in self.coeffs[1:])

    def determinant(self) -> Jet:
        """Исключение Гаусса над K[t]/(t^m) с обратимыми ведущими элементами"""
        n = self.size
        rows = [[self.entry(i, j) for j in range(n)] for i in range(n)]
        det = Jet.constant(self.field, 1, self.order)
        for c in range(n):
            p = next((i for i in range(c, n) if rows[i][c].is_invertible()), None)
            if p is None:
                # все ведущие элементы в нильпотентном идеале: разложение по столбцам
                return det * _expand(rows[c:], list(range(c, n)))
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = -det
            pivot = rows[c][c]
            det = det * pivot
            inv = pivot.inverse()
            for i in range(c + 1, n):
                f = rows[i][c] * inv
                if f.is_zero():
                    continue
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
        return det

    def __eq__(self, other) -> bool:
        if not isinstance(other, JetMatrix):
            return NotImplemented
        return self.order == other.order and self.size == other.size and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"JetMatrix({self.size}x{self.size} mod t^{self.order})"


def _expand(rows: List[List[Jet]], cols: List[int]) -> Jet:
    if len(cols) == 1:
        return rows[0][cols[0]]
    c = cols[0]
    rest = cols[1:]
    total = None
    for i, row in enumerate(rows):
        minor_rows = rows[:i] + rows[i + 1:]
        term = row[c] * _expand(minor_rows, rest)
        if i % 2:
            term = -term
        total = term if total is None else total + term
    return total


def jet_exp(X: JetMatrix) -> JetMatrix:
    """exp(X) для X с нулевым свободным членом; ряд обрывается на t^m"""
    if not X.coeffs[0].is_zero():
        raise ValueError("jet_exp requires a zero constant term")
    result = JetMatrix.identity(X.field, X.size, X.order)
    power = JetMatrix.identity(X.field, X.size, X.order)
    factorial = 1
    for k in range(1, X.order):
        power = power * X
        factorial *= k
        result = result + power.scale(X.field.coerce(1) / factorial)
    return result


def jet_log(Y: JetMatrix) -> JetMatrix:
    """Обратный к jet_exp: log(I + N) при N с нулевым свободным членом"""
    identity = JetMatrix.identity(Y.field, Y.size, Y.order)
    if not Y.coeffs[0].is_identity():
        raise ValueError("jet_log requires the constant term to be the identity")
    N = Y - identity
    result = JetMatrix(Y.field, Y.size, [], Y.order)
    power = identity
    for k in range(1, Y.order):
        power = power * N
        coeff = Y.field.coerce(1) / k
        result = result + power.scale(coeff if k % 2 else -coeff)
    return result


def series(field: NumberField, terms: Sequence[MatrixK], order: int) -> JetMatrix:
    """Σ_{i>=1} t^i terms[i-1]"""
    size = terms[0].rows if terms else 0
    return JetMatrix(field, size, [MatrixK.zero(field, size, size)] + list(terms), order)

