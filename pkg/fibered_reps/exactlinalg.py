"""
Точная плотная линейная алгебра над числовым полем
"""

import logging
from fractions import Fraction
from math import lcm
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatchError, FieldMismatchError, NotSquareError
from .numfield import RATIONALS, FieldElement, NumberField, Polynomial, Scalar
from .utils import format_rational

logger = logging.getLogger(__name__)

Vector = List[FieldElement]


class MatrixK:
    """Матрица над NumberField; после создания не изменяется"""

    def __init__(self, field: NumberField, rows: Sequence[Sequence[Scalar]]):
        self.field = field
        self.entries: Tuple[Tuple[FieldElement, ...], ...] = tuple(
            tuple(field.coerce(x) for x in row) for row in rows
        )
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatchError("Ragged matrix rows")

    @classmethod
    def _wrap(cls, field: NumberField, rows: List[List[FieldElement]], cols: Optional[int] = None) -> "MatrixK":
        obj = cls.__new__(cls)
        obj.field = field
        obj.entries = tuple(tuple(r) for r in rows)
        obj.rows = len(rows)
        obj.cols = len(rows[0]) if rows else (cols or 0)
        return obj

    @classmethod
    def zero(cls, field: NumberField, rows: int, cols: int) -> "MatrixK":
        z = field.zero()
        return cls._wrap(field, [[z] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field: NumberField, n: int) -> "MatrixK":
        z, o = field.zero(), field.one()
        return cls._wrap(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, field: NumberField, values: Sequence[Scalar]) -> "MatrixK":
        n = len(values)
        z = field.zero()
        return cls._wrap(field, [[field.coerce(values[i]) if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_rationals(cls, rows: Sequence[Sequence[Scalar]]) -> "MatrixK":
        return cls(RATIONALS, rows)

    @classmethod
    def from_columns(cls, field: NumberField, columns: Sequence[Sequence[Scalar]]) -> "MatrixK":
        return cls(field, [list(row) for row in zip(*columns)])

    @classmethod
    def companion(cls, poly: Polynomial) -> "MatrixK":
        """Матрица-компаньон нормированного многочлена"""
        if not poly.is_monic():
            raise ValueError(f"Companion matrix needs a monic polynomial, got {poly}")
        n = poly.degree
        field = poly.field
        rows = [[field.zero()] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = field.one()
        for i in range(n):
            rows[i][n - 1] = -poly.coeffs[i]
        return cls._wrap(field, rows, n)

    @classmethod
    def block_diagonal(cls, field: NumberField, blocks: Sequence["MatrixK"]) -> "MatrixK":
        size = sum(b.rows for b in blocks)
        width = sum(b.cols for b in blocks)
        rows = [[field.zero()] * width for _ in range(size)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    rows[r0 + i][c0 + j] = field.coerce(b.entries[i][j])
            r0 += b.rows
            c0 += b.cols
        return cls._wrap(field, rows, width)

    @classmethod
    def stack(cls, field: NumberField, grid: Sequence[Sequence["MatrixK"]]) -> "MatrixK":
        """Сборка блочной матрицы из сетки блоков"""
        rows: List[List[FieldElement]] = []
        for block_row in grid:
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise DimensionMismatchError("Blocks in one row differ in height")
            for i in range(height):
                line: List[FieldElement] = []
                for b in block_row:
                    line.extend(field.coerce(x) for x in b.entries[i])
                rows.append(line)
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise DimensionMismatchError("Block rows differ in width")
        return cls._wrap(field, rows, width)

    def __getitem__(self, index: Tuple[int, int]) -> FieldElement:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return list(self.entries[i])

    def column(self, j: int) -> Vector:
        return [row[j] for row in self.entries]

    def to_lists(self) -> List[List[FieldElement]]:
        return [list(r) for r in self.entries]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def _check_field(self, other: "MatrixK") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"Field mismatch: {self.field.label} vs {other.field.label}")

    def over(self, field: NumberField) -> "MatrixK":
        if field == self.field:
            return self
        return MatrixK._wrap(field, [[field.coerce(x) for x in row] for row in self.entries], self.cols)

    def __add__(self, other: "MatrixK") -> "MatrixK":
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(f"Shapes {self.shape} and {other.shape} differ")
        return MatrixK._wrap(self.field, [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)
        ], self.cols)

    def __neg__(self) -> "MatrixK":
        return MatrixK._wrap(self.field, [[-a for a in r] for r in self.entries], self.cols)

    def __sub__(self, other: "MatrixK") -> "MatrixK":
        return self + (-other)

    def scale(self, c: Scalar) -> "MatrixK":
        c = self.field.coerce(c)
        return MatrixK._wrap(self.field, [[a * c for a in r] for r in self.entries], self.cols)

    def __mul__(self, other: Union["MatrixK", Scalar]) -> "MatrixK":
        if not isinstance(other, MatrixK):
            return self.scale(other)
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero()
        other_cols = list(zip(*other.entries)) if other.rows else []
        out = []
        for r in self.entries:
            nz = [(k, a) for k, a in enumerate(r) if not a.is_zero()]
            line = []
            for col in other_cols:
                acc = zero
                for k, a in nz:
                    b = col[k]
                    if not b.is_zero():
                        acc = acc + a * b
                line.append(acc)
            out.append(line)
        return MatrixK._wrap(self.field, out, other.cols)

    def __rmul__(self, other: Scalar) -> "MatrixK":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "MatrixK":
        if not self.is_square:
            raise NotSquareError(f"Power of non-square {self.shape} matrix")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = MatrixK.identity(self.field, self.rows)
        for _ in range(exponent):
            result = result * self
        return result

    def apply(self, vector: Sequence[FieldElement]) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"Vector of length {len(vector)} against {self.cols} columns")
        zero = self.field.zero()
        out = []
        for r in self.entries:
            acc = zero
            for a, x in zip(r, vector):
                if not a.is_zero() and not x.is_zero():
                    acc = acc + a * x
            out.append(acc)
        return out

    def transpose(self) -> "MatrixK":
        return MatrixK._wrap(self.field, [list(c) for c in zip(*self.entries)], self.rows)

    def trace(self) -> FieldElement:
        if not self.is_square:
            raise NotSquareError(f"Trace of non-square {self.shape} matrix")
        acc = self.field.zero()
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def inverse(self) -> "MatrixK":
        if not self.is_square:
            raise NotSquareError(f"Inverse of non-square {self.shape} matrix")
        n = self.rows
        ident = MatrixK.identity(self.field, n)
        work = [list(r) + list(e) for r, e in zip(self.entries, ident.entries)]
        pivots = _rref_in_place(work, n)
        if len(pivots) < n:
            raise ZeroDivisionError("Matrix is singular")
        return MatrixK._wrap(self.field, [r[n:] for r in work], n)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "MatrixK":
        cols = list(cols)
        return MatrixK._wrap(self.field, [[self.entries[i][j] for j in cols] for i in rows], len(cols))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.entries for a in r)

    def is_identity(self) -> bool:
        return self.is_square and all(
            (a == 1) if i == j else a.is_zero()
            for i, r in enumerate(self.entries) for j, a in enumerate(r)
        )

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MatrixK):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, tuple(a.coeffs for r in self.entries for a in r)))

    def to_strings(self) -> List[List[Any]]:
        """Построчно; элемент поля степени 1 - строка, иначе список коэффициентов"""
        if self.field.is_rational:
            return [[format_rational(a.coeffs[0]) for a in r] for r in self.entries]
        return [[a.to_strings() for a in r] for r in self.entries]

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(a) for a in r) for r in self.entries)
        return f"MatrixK[{self.field.label}]({body})"


def _clear_denominators(rows: List[List[FieldElement]]) -> int:
    """Строки умножаются на общий знаменатель рациональных координат; возвращает произведение множителей"""
    scale = 1
    for i, row in enumerate(rows):
        den = lcm(1, *(c.denominator for a in row for c in a.coeffs))
        if den != 1:
            rows[i] = [a * den for a in row]
            scale *= den
    return scale


def _bareiss_echelon(rows: List[List[FieldElement]], pivot_limit: int) -> Tuple[List[int], int]:
    """Дробно-свободный прямой ход Барейсса; элементы остаются минорами исходной матрицы.

    Возвращает столбцы ведущих элементов и знак перестановки строк.
    """
    pivots: List[int] = []
    sign = 1
    nrows = len(rows)
    if not nrows or not rows[0]:
        return pivots, sign
    prev_inv = rows[0][0].field.one()
    r = 0
    for c in range(pivot_limit):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        pivot_row = rows[r]
        pivot = pivot_row[c]
        ratio = pivot * prev_inv
        nz = [j for j in range(c + 1, len(pivot_row)) if not pivot_row[j].is_zero()]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            if f.is_zero():
                if ratio != 1:
                    rows[i] = [x * ratio for x in row]
                continue
            row[c] = f.field.zero()
            for j in range(c + 1, len(row)):
                if not row[j].is_zero():
                    row[j] = row[j] * ratio
            g = f * prev_inv
            for j in nz:
                row[j] = row[j] - g * pivot_row[j]
        prev_inv = pivot.inverse()
        pivots.append(c)
        r += 1
    return pivots, sign


def _rref_in_place(rows: List[List[FieldElement]], pivot_limit: int) -> List[int]:
    """Приведённый ступенчатый вид; ведущие элементы ищутся в первых pivot_limit столбцах"""
    _clear_denominators(rows)
    pivots, _ = _bareiss_echelon(rows, pivot_limit)
    for r in reversed(range(len(pivots))):
        c = pivots[r]
        inv = rows[r][c].inverse()
        pivot_row = [x * inv for x in rows[r]]
        rows[r] = pivot_row
        nz = [(j, x) for j, x in enumerate(pivot_row) if j >= c and not x.is_zero()]
        for i in range(r):
            f = rows[i][c]
            if f.is_zero():
                continue
            target = rows[i]
            for j, x in nz:
                target[j] = target[j] - f * x
    return pivots


def rref(M: MatrixK) -> Tuple[MatrixK, List[int]]:
    work = M.to_lists()
    pivots = _rref_in_place(work, M.cols)
    return MatrixK._wrap(M.field, work, M.cols), pivots


def rank(M: MatrixK) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_rref_in_place(M.to_lists(), M.cols))


def _raw_kernel(M: MatrixK) -> List[Vector]:
    work = M.to_lists()
    pivots = _rref_in_place(work, M.cols)
    zero, one = M.field.zero(), M.field.one()
    pivot_set = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivot_set:
            continue
        v = [zero] * M.cols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -work[i][f]
        basis.append(v)
    return basis


def canonical_basis(field: NumberField, vectors: Sequence[Sequence[FieldElement]]) -> List[Vector]:
    """Приведённая ступенчатая форма подпространства: первый ненулевой элемент равен 1"""
    if not vectors:
        return []
    work = [list(v) for v in vectors]
    pivots = _rref_in_place(work, len(work[0]))
    return work[:len(pivots)]


def kernel_basis(M: MatrixK) -> List[Vector]:
    raw = _raw_kernel(M)
    basis = canonical_basis(M.field, raw)
    logger.debug(f"Kernel of {M.rows}x{M.cols} matrix has dimension {len(basis)}")
    return basis


def nullity(M: MatrixK) -> int:
    return M.cols - rank(M)


def solve_affine(M: MatrixK, b: Sequence[Scalar]) -> Tuple[Optional[Vector], int]:
    """Частное решение Mx = b (свободные переменные равны 0) и размерность ядра"""
    if len(b) != M.rows:
        raise DimensionMismatchError(f"Right-hand side of length {len(b)} for {M.rows} rows")
    field = M.field
    work = [list(r) + [field.coerce(x)] for r, x in zip(M.entries, b)]
    pivots = _rref_in_place(work, M.cols)
    kernel_dim = M.cols - len(pivots)
    for i in range(len(pivots), M.rows):
        if not work[i][M.cols].is_zero():
            return None, kernel_dim
    x = [field.zero()] * M.cols
    for i, p in enumerate(pivots):
        x[p] = work[i][M.cols]
    return x, kernel_dim


def in_span(field: NumberField, vectors: Sequence[Sequence[FieldElement]], target: Sequence[FieldElement]) -> bool:
    if not vectors:
        return all(x.is_zero() for x in target)
    M = MatrixK.from_columns(field, vectors)
    solution, _ = solve_affine(M, target)
    return solution is not None


def same_span(field: NumberField, a: Sequence[Sequence[FieldElement]], b: Sequence[Sequence[FieldElement]]) -> bool:
    return canonical_basis(field, a) == canonical_basis(field, b)


def _hessenberg(M: MatrixK) -> List[List[FieldElement]]:
    n = M.rows
    H = M.to_lists()
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if not H[i][m - 1].is_zero()), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        piv_inv = H[m][m - 1].inverse()
        for i in range(m + 1, n):
            if H[i][m - 1].is_zero():
                continue
            u = H[i][m - 1] * piv_inv
            for j in range(n):
                H[i][j] = H[i][j] - u * H[m][j]
            for j in range(n):
                H[j][m] = H[j][m] + u * H[j][i]
    return H


def char_poly(M: MatrixK) -> Polynomial:
    """det(xI - M) через приведение к форме Хессенберга"""
    if not M.is_square:
        raise NotSquareError(f"Characteristic polynomial of non-square {M.shape} matrix")
    field = M.field
    n = M.rows
    H = _hessenberg(M)
    x = Polynomial([0, 1], field)
    polys = [Polynomial([1], field)]
    for m in range(1, n + 1):
        p = (x - Polynomial([H[m - 1][m - 1]], field)) * polys[m - 1]
        t = field.one()
        for i in range(1, m):
            t = t * H[m - i][m - i - 1]
            p = p - polys[m - i - 1] * (t * H[m - i - 1][m - 1])
        polys.append(p)
    return polys[n]


def char_poly_faddeev(M: MatrixK) -> Polynomial:
    """Метод Фаддеева-Леверье, независимая проверка char_poly"""
    if not M.is_square:
        raise NotSquareError(f"Characteristic polynomial of non-square {M.shape} matrix")
    field = M.field
    n = M.rows
    coeffs = [field.zero()] * (n + 1)
    coeffs[n] = field.one()
    identity = MatrixK.identity(field, n)
    Mk = MatrixK.zero(field, n, n)
    for k in range(1, n + 1):
        Mk = M * Mk + identity.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(M * Mk).trace() / k
    return Polynomial(coeffs, field)


def poly_at_matrix(p: Polynomial, M: MatrixK) -> MatrixK:
    field = M.field
    result = MatrixK.zero(field, M.rows, M.cols)
    identity = MatrixK.identity(field, M.rows)
    for c in reversed(p.coeffs):
        result = result * M + identity.scale(field.coerce(c))
    return result


def _bareiss_integer(rows: List[List[int]]) -> int:
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1]


def determinant(M: MatrixK) -> FieldElement:
    if not M.is_square:
        raise NotSquareError(f"Determinant of non-square {M.shape} matrix")
    field = M.field
    n = M.rows
    if n == 0:
        return field.one()

    if field.is_rational:
        # дробно-свободный Барейсс по строкам, приведённым к целым
        scale = Fraction(1)
        int_rows = []
        for r in M.entries:
            values = [a.coeffs[0] for a in r]
            den = lcm(*(v.denominator for v in values))
            scale *= den
            int_rows.append([int(v * den) for v in values])
        return field.coerce(Fraction(_bareiss_integer(int_rows)) / scale)

    work = M.to_lists()
    scale = _clear_denominators(work)
    pivots, sign = _bareiss_echelon(work, n)
    if len(pivots) < n:
        return field.zero()
    return work[n - 1][n - 1] * Fraction(sign, scale)


def simple_factor_check(p: Polynomial, q: Polynomial) -> bool:
    """q | p и q² ∤ p"""
    if not q.is_monic():
        raise ValueError(f"Factor {q} is not monic")
    quotient, remainder = p.divmod(q)
    if not remainder.is_zero():
        return False
    return not q.divides(quotient)


def eigenvalue_multiplicity(p: Polynomial, q: Polynomial) -> int:
    count = 0
    while not p.is_zero() and q.divides(p):
        p = p // q
        count += 1
    return count
