"""
Конечно заданные группы: слова, копредставление тора отображения,
абелианизация монодромии, трансвекции Дена и якобиан Фокса
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatchError, SpecValidationError
from .exactlinalg import MatrixK
from .numfield import RATIONALS, Scalar

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]
Word = Tuple[Letter, ...]


# --- слова -------------------------------------------------------------------

def free_reduce(letters: Sequence[Letter]) -> Word:
    stack: List[Letter] = []
    for g, e in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((g, e))
    return tuple(stack)


def inverse_word(word: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def word_mul(*words: Sequence[Letter]) -> Word:
    letters: List[Letter] = []
    for w in words:
        letters.extend(w)
    return free_reduce(letters)


def word_power(word: Sequence[Letter], k: int) -> Word:
    base = word if k >= 0 else inverse_word(word)
    return word_mul(*([base] * abs(k)))


def commutator(x: Sequence[Letter], y: Sequence[Letter]) -> Word:
    """[x, y] = x y x⁻¹ y⁻¹"""
    return word_mul(x, y, inverse_word(x), inverse_word(y))


def cyclic_reduce(word: Sequence[Letter]) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def split_conjugate(word: Sequence[Letter]) -> Tuple[Word, Word]:
    """w = u·core·u⁻¹ с циклически несократимым core"""
    w = free_reduce(word)
    k = 0
    while k < len(w) - 1 - k and w[k][0] == w[-1 - k][0] and w[k][1] == -w[-1 - k][1]:
        k += 1
    return w[:k], w[k:len(w) - k]


def is_cyclic_permutation(u: Sequence[Letter], v: Sequence[Letter]) -> bool:
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        return False
    if not u:
        return True
    doubled = u + u
    return any(doubled[i:i + len(v)] == v for i in range(len(u)))


def substitute(word: Sequence[Letter], images: Sequence[Sequence[Letter]]) -> Word:
    letters: List[Letter] = []
    for g, e in word:
        letters.extend(images[g] if e > 0 else inverse_word(images[g]))
    return free_reduce(letters)


def exponent_sums(word: Sequence[Letter], generator_count: int) -> List[int]:
    sums = [0] * generator_count
    for g, e in word:
        sums[g] += e
    return sums


def parse_word(text: str, tau_index: Optional[int] = None) -> Word:
    """Токены 'g1', 'g3^-1', 't', 't^-1' через пробел; '1' - пустое слово"""
    letters: List[Letter] = []
    for token in text.split():
        if token == "1":
            continue
        name, _, power = token.partition("^")
        if power not in ("", "1", "-1"):
            raise ValueError(f"Bad exponent in token {token!r}")
        exponent = -1 if power == "-1" else 1
        if name == "t":
            if tau_index is None:
                raise ValueError(f"Token {token!r} not allowed here")
            letters.append((tau_index, exponent))
        elif name.startswith("g") and name[1:].isdigit() and int(name[1:]) >= 1:
            letters.append((int(name[1:]) - 1, exponent))
        else:
            raise ValueError(f"Unknown token {token!r}")
    return free_reduce(letters)


def format_word(word: Sequence[Letter], tau_index: Optional[int] = None) -> str:
    if not word:
        return "1"
    tokens = []
    for g, e in word:
        name = "t" if g == tau_index else f"g{g + 1}"
        tokens.append(name if e > 0 else f"{name}^-1")
    return " ".join(tokens)


def _cycles(permutation: Sequence[int]) -> List[Tuple[int, ...]]:
    seen = set()
    cycles = []
    for start in range(len(permutation)):
        if start in seen:
            continue
        cycle = []
        j = start
        while j not in seen:
            seen.add(j)
            cycle.append(j)
            j = permutation[j]
        cycles.append(tuple(cycle))
    return cycles


# --- монодромия ----------------------------------------------------------------

@dataclass(frozen=True)
class MonodromySpec:
    """Монодромия на уровне π₁: образы γ_1..γ_{2g+p}, перестановка проколов (с нуля)"""
    genus: int
    punctures: int
    images: Tuple[Word, ...]
    puncture_permutation: Tuple[int, ...]
    conjugator: Optional[Word] = None
    puncture_conjugators: Optional[Tuple[Word, ...]] = None

    @property
    def generator_count(self) -> int:
        return 2 * self.genus + self.punctures

    def surface_relator(self) -> Word:
        return surface_relator(self.genus, self.punctures)

    def puncture_generator(self, j: int) -> int:
        return 2 * self.genus + j

    def _checks(self) -> List[Tuple[str, str]]:
        n = self.generator_count
        failures = []
        if self.genus < 0 or self.punctures < 1 or n <= 2:
            failures.append(("hyperbolicity", f"need 2g+p > 2 with p >= 1, got g={self.genus}, p={self.punctures}"))
            return failures
        if len(self.images) != n:
            failures.append(("image_count", f"expected {n} images, got {len(self.images)}"))
            return failures
        for i, image in enumerate(self.images):
            bad = [g for g, e in image if not 0 <= g < n or e not in (1, -1)]
            if bad:
                failures.append(("image_alphabet", f"image of g{i + 1} uses letters outside g1..g{n}"))
        if sorted(self.puncture_permutation) != list(range(self.punctures)):
            failures.append(("permutation", f"{list(self.puncture_permutation)} is not a bijection of the punctures"))
        if self.puncture_conjugators is not None and len(self.puncture_conjugators) != self.punctures:
            failures.append((
                "puncture_conjugators",
                f"expected {self.punctures} conjugators, got {len(self.puncture_conjugators)}",
            ))
        if failures:
            return failures

        for j in range(self.punctures):
            target = (self.puncture_generator(self.puncture_permutation[j]), 1)
            image = self.images[self.puncture_generator(j)]
            if self.puncture_conjugators is not None:
                w = self.puncture_conjugators[j]
                ok = word_mul(w, (target,), inverse_word(w)) == free_reduce(image)
            else:
                ok = cyclic_reduce(image) == (target,)
            if not ok:
                failures.append((
                    "puncture_conjugacy",
                    f"image of puncture {j + 1} is not conjugate to puncture {self.puncture_permutation[j] + 1}",
                ))

        relator = self.surface_relator()
        image = substitute(relator, self.images)
        if self.conjugator is not None:
            preserved = word_mul(self.conjugator, relator, inverse_word(self.conjugator)) == image
        else:
            preserved = is_cyclic_permutation(cyclic_reduce(image), cyclic_reduce(relator))
        if not preserved:
            failures.append(("surface_relator", "surface relator is not preserved up to the given conjugation"))
        return failures

    def validate(self) -> None:
        failures = self._checks()
        if failures:
            check, message = failures[0]
            logger.error(f"Monodromy check {check} failed: {message}")
            raise SpecValidationError(check, message)

    def validation_report(self) -> Dict[str, Any]:
        failures = self._checks()
        warnings = []
        if self.conjugator is None:
            warnings.append("surface relator checked by cyclic permutation only")
        return {
            'valid': not failures,
            'errors': [f"{check}: {message}" for check, message in failures],
            'warnings': warnings,
            'has_warnings': bool(warnings),
        }


@dataclass(frozen=True)
class HomologyMonodromy:
    """Монодромия на уровне H₁: композиция скручиваний, первое применяется первым"""
    genus: int
    punctures: int
    twists: Tuple[Tuple[Tuple[Fraction, ...], int], ...]
    puncture_permutation: Tuple[int, ...]

    @property
    def generator_count(self) -> int:
        return 2 * self.genus + self.punctures

    def _checks(self) -> List[Tuple[str, str]]:
        failures = []
        if self.genus < 0 or self.punctures < 1 or self.generator_count <= 2:
            failures.append(("hyperbolicity", f"need 2g+p > 2 with p >= 1, got g={self.genus}, p={self.punctures}"))
        for idx, (curve, sign) in enumerate(self.twists):
            if len(curve) != 2 * self.genus:
                failures.append(("twist_curve", f"twist {idx + 1} has {len(curve)} coordinates, expected {2 * self.genus}"))
            elif not any(curve):
                failures.append(("twist_curve", f"twist {idx + 1} is about the zero class"))
            if sign not in (1, -1):
                failures.append(("twist_sign", f"twist {idx + 1} has sign {sign}"))
        if sorted(self.puncture_permutation) != list(range(self.punctures)):
            failures.append(("permutation", f"{list(self.puncture_permutation)} is not a bijection of the punctures"))
        return failures

    def validate(self) -> None:
        failures = self._checks()
        if failures:
            check, message = failures[0]
            raise SpecValidationError(check, message)

    def validation_report(self) -> Dict[str, Any]:
        failures = self._checks()
        return {
            'valid': not failures,
            'errors': [f"{check}: {message}" for check, message in failures],
            'warnings': [],
            'has_warnings': False,
        }


AnySpec = Union[MonodromySpec, HomologyMonodromy]


def surface_relator(genus: int, punctures: int) -> Word:
    """Π[γ_{2i-1}, γ_{2i}] · (Π γ_{2g+j})⁻¹"""
    parts = [commutator(((2 * i, 1),), ((2 * i + 1, 1),)) for i in range(genus)]
    boundary = tuple((2 * genus + j, 1) for j in range(punctures))
    return word_mul(*parts, inverse_word(boundary))


def compose_monodromies(outer: MonodromySpec, inner: MonodromySpec) -> MonodromySpec:
    """outer ∘ inner"""
    if (outer.genus, outer.punctures) != (inner.genus, inner.punctures):
        raise ValueError("Monodromies live on different surfaces")
    images = tuple(substitute(w, outer.images) for w in inner.images)
    permutation = tuple(outer.puncture_permutation[k] for k in inner.puncture_permutation)
    conjugator = None
    if outer.conjugator is not None and inner.conjugator is not None:
        conjugator = word_mul(substitute(inner.conjugator, outer.images), outer.conjugator)
    return MonodromySpec(outer.genus, outer.punctures, images, permutation, conjugator)


# --- копредставления ---------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    labels: Tuple[str, ...]
    relators: Tuple[Word, ...]
    relator_names: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"Generator labels are not unique: {self.labels}")
        if len(self.relator_names) != len(self.relators):
            raise ValueError("Every relator needs a name")

    @property
    def generator_count(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def without(self, relator_name: str) -> "Presentation":
        keep = [i for i, name in enumerate(self.relator_names) if name != relator_name]
        return Presentation(
            self.labels,
            tuple(self.relators[i] for i in keep),
            tuple(self.relator_names[i] for i in keep),
        )

    def format_relator(self, i: int) -> str:
        return " ".join(
            self.labels[g] if e > 0 else f"{self.labels[g]}^-1" for g, e in self.relators[i]
        ) or "1"


@dataclass(frozen=True)
class FiberWeight:
    """ψ: гомоморфизм в Z, двойственный слою"""
    values: Tuple[int, ...]

    def of_word(self, word: Sequence[Letter]) -> int:
        return sum(self.values[g] * e for g, e in word)

    def vanishes_on(self, pres: Presentation) -> bool:
        return all(self.of_word(r) == 0 for r in pres.relators)


def mapping_torus_presentation(spec: MonodromySpec) -> Tuple[Presentation, FiberWeight]:
    spec.validate()
    n = spec.generator_count
    tau = n
    labels = tuple(f"g{i + 1}" for i in range(n)) + ("t",)
    relators = []
    names = []
    for i in range(n):
        relators.append(word_mul(spec.images[i], ((tau, 1), (i, -1), (tau, -1))))
        names.append(f"conj_g{i + 1}")
    relators.append(spec.surface_relator())
    names.append("surface")
    weight = FiberWeight((0,) * n + (1,))
    logger.debug(f"Mapping torus presentation: {len(labels)} generators, {len(relators)} relators")
    return Presentation(labels, tuple(relators), tuple(names)), weight


def torus_presentation() -> Tuple[Presentation, FiberWeight]:
    """⟨a, b | a b a⁻¹ b⁻¹⟩"""
    pres = Presentation(("a", "b"), (commutator(((0, 1),), ((1, 1),)),), ("commutator",))
    return pres, FiberWeight((0, 0))


def cyclic_mapping_torus(power: int) -> Tuple[Presentation, FiberWeight]:
    """⟨g1, t | g1^m t g1⁻¹ t⁻¹⟩: монодромия γ ↦ γ^m на циклической группе"""
    relator = word_mul(word_power(((0, 1),), power), ((1, 1), (0, -1), (1, -1)))
    return Presentation(("g1", "t"), (relator,), ("conj_g1",)), FiberWeight((0, 1))


@dataclass(frozen=True)
class PeripheralTorus:
    """Пара коммутирующих слов (δ, u⁻¹τ^L) для цикла проколов"""
    cycle: Tuple[int, ...]
    meridian: Word
    longitude: Word
    conjugator: Word = field(default=())


def peripheral_subgroups(spec: MonodromySpec) -> List[PeripheralTorus]:
    tau = spec.generator_count
    permutation = list(spec.puncture_permutation)
    tori = []
    for cycle in _cycles(permutation):
        delta = ((spec.puncture_generator(cycle[0]), 1),)
        word: Word = delta
        for _ in range(len(cycle)):
            word = substitute(word, spec.images)
        u, core = split_conjugate(word)
        if core != delta:
            raise SpecValidationError(
                "puncture_conjugacy",
                f"phi^{len(cycle)} of puncture {cycle[0] + 1} is not a conjugate of itself",
            )
        longitude = word_mul(inverse_word(u), ((tau, 1),) * len(cycle))
        tori.append(PeripheralTorus(tuple(j + 1 for j in cycle), delta, longitude, u))
    return tori


# --- якобиан Фокса -------------------------------------------------------------

def _check_action(pres: Presentation, act: Sequence[MatrixK]) -> int:
    if len(act) != pres.generator_count:
        raise DimensionMismatchError(f"{len(act)} matrices for {pres.generator_count} generators")
    d = act[0].rows
    for m in act:
        if m.shape != (d, d):
            raise DimensionMismatchError(f"Generator matrix of shape {m.shape}, expected {d}x{d}")
    return d


def evaluate_word(word: Sequence[Letter], act: Sequence[MatrixK], inverses: Optional[Sequence[MatrixK]] = None) -> MatrixK:
    d = act[0].rows
    result = MatrixK.identity(act[0].field, d)
    for g, e in word:
        if e > 0:
            result = result * act[g]
        else:
            result = result * (inverses[g] if inverses is not None else act[g].inverse())
    return result


def fox_blocks(word: Sequence[Letter], act: Sequence[MatrixK], inverses: Optional[Sequence[MatrixK]] = None) -> List[MatrixK]:
    """∂w/∂g для каждого генератора, вычисленные через act"""
    field_ = act[0].field
    d = act[0].rows
    if inverses is None:
        inverses = [m.inverse() for m in act]
    blocks = [MatrixK.zero(field_, d, d) for _ in act]
    prefix = MatrixK.identity(field_, d)
    for g, e in word:
        if e > 0:
            blocks[g] = blocks[g] + prefix
            prefix = prefix * act[g]
        else:
            prefix = prefix * inverses[g]
            blocks[g] = blocks[g] - prefix
    return blocks


def fox_jacobian(pres: Presentation, act: Sequence[MatrixK]) -> MatrixK:
    d = _check_action(pres, act)
    field_ = act[0].field
    inverses = [m.inverse() for m in act]
    grid = [fox_blocks(r, act, inverses) for r in pres.relators]
    if not grid:
        return MatrixK.zero(field_, 0, pres.generator_count * d)
    jac = MatrixK.stack(field_, grid)
    logger.debug(f"Fox Jacobian of size {jac.rows}x{jac.cols}")
    return jac


# --- абелианизация и гомологии ---------------------------------------------------

def permutation_matrix(permutation: Sequence[int]) -> MatrixK:
    p = len(permutation)
    return MatrixK.from_rationals([[1 if permutation[j] == k else 0 for k in range(p)] for j in range(p)])


def standard_symplectic_form(genus: int) -> MatrixK:
    """Базис (α_1, β_1, ..., α_g, β_g), ⟨α_i, β_i⟩ = 1"""
    size = 2 * genus
    rows = [[0] * size for _ in range(size)]
    for i in range(genus):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return MatrixK.from_rationals(rows)


def dehn_twist_transvection(c: Sequence[Scalar], sign: int, omega: MatrixK) -> MatrixK:
    """x ↦ x + sign·⟨x, c⟩·c"""
    if sign not in (1, -1):
        raise ValueError(f"Twist sign must be +1 or -1, got {sign}")
    field_ = omega.field
    c_vec = [field_.coerce(x) for x in c]
    if len(c_vec) != omega.rows:
        raise DimensionMismatchError(f"Curve of length {len(c_vec)} for a form of size {omega.rows}")
    if all(x.is_zero() for x in c_vec):
        raise ValueError("Dehn twist about the zero class")
    omega_c = omega.apply(c_vec)
    size = omega.rows
    rows = [
        [(1 if i == j else 0) + sign * c_vec[i] * omega_c[j] for j in range(size)]
        for i in range(size)
    ]
    return MatrixK(field_, rows)


def homology_action(hm: HomologyMonodromy) -> MatrixK:
    """Матрица на H₁ (столбцы - образы базиса)"""
    omega = standard_symplectic_form(hm.genus)
    result = MatrixK.identity(RATIONALS, 2 * hm.genus)
    for curve, sign in hm.twists:
        result = dehn_twist_transvection(curve, sign, omega) * result
    return result


def abelianized_action(spec: AnySpec) -> Tuple[MatrixK, Dict[str, Any]]:
    """E[i][j] = сумма показателей γ_j в φ(γ_i); действие на H¹"""
    spec.validate()
    cycles = _cycles(list(spec.puncture_permutation))
    P = permutation_matrix(spec.puncture_permutation)
    closed = 2 * spec.genus

    if isinstance(spec, HomologyMonodromy):
        closed_block = homology_action(spec).transpose()
        E = MatrixK.block_diagonal(RATIONALS, [closed_block, P]) if closed else P
    else:
        n = spec.generator_count
        E = MatrixK.from_rationals([exponent_sums(w, n) for w in spec.images])
        closed_block = E.submatrix(range(closed), range(closed))

    report = {
        'P': P,
        'cycles': [tuple(j + 1 for j in c) for c in cycles],
        'k': len(cycles),
        'closed_block': closed_block,
    }
    logger.debug(f"Abelianized action of size {E.rows}, k = {len(cycles)}")
    return E, report
