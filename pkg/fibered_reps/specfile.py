"""
YAML-файлы спецификаций и встроенные примеры
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from .errors import SpecFileError, SpecValidationError
from .fpgroup import HomologyMonodromy, MonodromySpec, format_word, parse_word
from .numfield import Polynomial
from .utils import format_rational, parse_rational

logger = logging.getLogger(__name__)

EXAMPLES_DIR = Path(__file__).parent / "examples"
MONODROMY_TYPES = ("words", "homology_twists")


def bundled_examples() -> Dict[str, Path]:
    return {p.stem: p for p in sorted(EXAMPLES_DIR.glob("*.yaml"))}


def resolve_spec_path(name_or_path: str) -> Path:
    """Путь к файлу или имя встроенного примера"""
    path = Path(name_or_path)
    if path.is_file():
        return path
    examples = bundled_examples()
    key = path.stem if path.suffix in (".yaml", ".yml", ".spec") else name_or_path
    if key in examples:
        return examples[key]
    raise SpecFileError("path", f"No spec file or bundled example named {name_or_path!r}")


def _line_index(text: str) -> Dict[str, int]:
    """Путь поля -> номер строки (с единицы)"""
    index: Dict[str, int] = {}
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return index

    def walk(node: Any, path: str) -> None:
        if path:
            index[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                key = str(key_node.value)
                walk(value_node, f"{path}.{key}" if path else key)
        elif isinstance(node, yaml.SequenceNode):
            for i, item in enumerate(node.value):
                walk(item, f"{path}[{i}]")

    if root is not None:
        walk(root, "")
    return index


@dataclass(frozen=True)
class TwistEntry:
    curve: Tuple[Fraction, ...]
    sign: int


@dataclass
class SpecFile:
    genus: int
    punctures: int
    monodromy_type: str
    puncture_permutation: Tuple[int, ...]
    factor: Tuple[Fraction, ...]
    n: int = 2
    images: Tuple[str, ...] = ()
    twists: Tuple[TwistEntry, ...] = ()
    conjugator: Optional[str] = None
    puncture_conjugators: Optional[Tuple[str, ...]] = None
    modulus: Optional[Tuple[Fraction, ...]] = None
    root_choice: Optional[int] = None
    assume_irreducible: bool = False
    precision: Optional[int] = None
    exact_only: bool = False
    name: str = "spec"
    _lines: Dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    # --- чтение ------------------------------------------------------------

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SpecFile":
        resolved = resolve_spec_path(str(path))
        try:
            text = resolved.read_text(encoding='utf-8')
        except OSError as e:
            raise SpecFileError("path", f"Cannot read {resolved}: {e}")
        logger.debug(f"Loading spec file {resolved}")
        return cls.from_text(text, name=resolved.stem)

    @classmethod
    def from_text(cls, text: str, name: str = "spec") -> "SpecFile":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, 'problem_mark', None)
            raise SpecFileError("<yaml>", f"YAML syntax error: {getattr(e, 'problem', e)}",
                                mark.line + 1 if mark is not None else None)
        if not isinstance(data, dict):
            raise SpecFileError("<root>", "Spec file must be a mapping", 1)

        lines = _line_index(text)
        spec = cls._from_dict(data, name, lines)
        spec.monodromy()
        return spec

    @classmethod
    def _from_dict(cls, data: Dict[str, Any], name: str, lines: Dict[str, int]) -> "SpecFile":

        def fail(path: str, message: str):
            raise SpecFileError(path, message, lines.get(path))

        def section(key: str, required: bool = True) -> Dict[str, Any]:
            value = data.get(key)
            if value is None:
                if required:
                    fail(key, "missing section")
                return {}
            if not isinstance(value, dict):
                fail(key, "must be a mapping")
            return value

        def integer(value: Any, path: str, minimum: Optional[int] = None) -> int:
            if isinstance(value, bool) or not isinstance(value, int):
                fail(path, f"expected an integer, got {value!r}")
            if minimum is not None and value < minimum:
                fail(path, f"must be >= {minimum}, got {value}")
            return value

        def rationals(value: Any, path: str) -> Tuple[Fraction, ...]:
            if not isinstance(value, list) or not value:
                fail(path, "expected a non-empty list of rationals")
            out = []
            for i, entry in enumerate(value):
                try:
                    out.append(parse_rational(entry))
                except (TypeError, ValueError) as e:
                    fail(f"{path}[{i}]", str(e))
            return tuple(out)

        def word(value: Any, path: str, tau: Optional[int] = None) -> str:
            if not isinstance(value, str):
                fail(path, f"expected a word string, got {value!r}")
            try:
                parse_word(value, tau)
            except ValueError as e:
                fail(path, str(e))
            return value

        surface = section("surface")
        genus = integer(surface.get("genus"), "surface.genus", 0)
        punctures = integer(surface.get("punctures"), "surface.punctures", 1)

        mono = section("monodromy")
        kind = mono.get("type")
        if kind not in MONODROMY_TYPES:
            fail("monodromy.type", f"must be one of {', '.join(MONODROMY_TYPES)}")

        raw_perm = mono.get("puncture_permutation", list(range(1, punctures + 1)))
        if not isinstance(raw_perm, list):
            fail("monodromy.puncture_permutation", "expected a list of 1-based puncture indices")
        permutation = tuple(
            integer(v, f"monodromy.puncture_permutation[{i}]", 1) - 1 for i, v in enumerate(raw_perm)
        )

        images: Tuple[str, ...] = ()
        twists: Tuple[TwistEntry, ...] = ()
        conjugator = None
        puncture_conjugators = None
        if kind == "words":
            raw_images = mono.get("images")
            if not isinstance(raw_images, list):
                fail("monodromy.images", "expected a list of image words")
            images = tuple(word(w, f"monodromy.images[{i}]") for i, w in enumerate(raw_images))
            if mono.get("conjugator") is not None:
                conjugator = word(mono["conjugator"], "monodromy.conjugator")
            if mono.get("puncture_conjugators") is not None:
                raw = mono["puncture_conjugators"]
                if not isinstance(raw, list):
                    fail("monodromy.puncture_conjugators", "expected a list of words")
                puncture_conjugators = tuple(
                    word(w, f"monodromy.puncture_conjugators[{i}]") for i, w in enumerate(raw)
                )
                if len(puncture_conjugators) != punctures:
                    fail("monodromy.puncture_conjugators",
                         f"expected {punctures} conjugators, got {len(puncture_conjugators)}")
        else:
            raw_twists = mono.get("twists")
            if not isinstance(raw_twists, list) or not raw_twists:
                fail("monodromy.twists", "expected a non-empty list of twists")
            entries = []
            for i, t in enumerate(raw_twists):
                path = f"monodromy.twists[{i}]"
                if not isinstance(t, dict):
                    fail(path, "expected a mapping with curve and sign")
                sign = t.get("sign")
                if sign not in (1, -1) or isinstance(sign, bool):
                    fail(f"{path}.sign", f"must be 1 or -1, got {sign!r}")
                entries.append(TwistEntry(rationals(t.get("curve"), f"{path}.curve"), sign))
            twists = tuple(entries)

        lam = section("lambda")
        factor = rationals(lam.get("factor"), "lambda.factor")
        modulus = rationals(lam["modulus"], "lambda.modulus") if lam.get("modulus") is not None else None
        root_choice = None
        if lam.get("root_choice") is not None:
            root_choice = integer(lam["root_choice"], "lambda.root_choice", 0)
        assume_irreducible = lam.get("assume_irreducible", False)
        if not isinstance(assume_irreducible, bool):
            fail("lambda.assume_irreducible", "must be true or false")

        n = integer(data.get("n", 2), "n", 2)

        options = section("options", required=False)
        precision = None
        if options.get("precision") is not None:
            precision = integer(options["precision"], "options.precision", 1)
        exact_only = options.get("exact_only", False)
        if not isinstance(exact_only, bool):
            fail("options.exact_only", "must be true or false")

        return cls(
            genus=genus,
            punctures=punctures,
            monodromy_type=kind,
            puncture_permutation=permutation,
            factor=factor,
            n=n,
            images=images,
            twists=twists,
            conjugator=conjugator,
            puncture_conjugators=puncture_conjugators,
            modulus=modulus,
            root_choice=root_choice,
            assume_irreducible=assume_irreducible,
            precision=precision,
            exact_only=exact_only,
            name=name,
            _lines=lines,
        )

    # --- построение объектов -----------------------------------------------

    @property
    def is_word_level(self) -> bool:
        return self.monodromy_type == "words"

    def monodromy(self) -> Union[MonodromySpec, HomologyMonodromy]:
        """Проверенная монодромия; ошибки проверок с путём поля"""
        if self.is_word_level:
            spec: Union[MonodromySpec, HomologyMonodromy] = MonodromySpec(
                self.genus,
                self.punctures,
                tuple(parse_word(w) for w in self.images),
                self.puncture_permutation,
                parse_word(self.conjugator) if self.conjugator is not None else None,
                tuple(parse_word(w) for w in self.puncture_conjugators)
                if self.puncture_conjugators is not None else None,
            )
        else:
            spec = HomologyMonodromy(
                self.genus,
                self.punctures,
                tuple((t.curve, t.sign) for t in self.twists),
                self.puncture_permutation,
            )
        try:
            spec.validate()
        except SpecValidationError as e:
            raise SpecFileError("monodromy", str(e), self._lines.get("monodromy"))
        return spec

    def factor_polynomial(self) -> Polynomial:
        return Polynomial.from_rationals(self.factor)

    def modulus_polynomial(self) -> Optional[Polynomial]:
        return Polynomial.from_rationals(self.modulus) if self.modulus is not None else None

    def with_overrides(self, n: Optional[int] = None, factor: Optional[List[Fraction]] = None) -> "SpecFile":
        data = self.to_dict()
        if n is not None:
            data["n"] = n
        if factor is not None:
            data["lambda"]["factor"] = [format_rational(c) for c in factor]
            data["lambda"].pop("modulus", None)
        spec = self._from_dict(data, self.name, {})
        spec.monodromy()
        return spec

    # --- запись ------------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        mono: Dict[str, Any] = {"type": self.monodromy_type}
        if self.is_word_level:
            mono["images"] = [format_word(parse_word(w)) for w in self.images]
        else:
            mono["twists"] = [
                {"curve": [format_rational(c) for c in t.curve], "sign": t.sign} for t in self.twists
            ]
        mono["puncture_permutation"] = [p + 1 for p in self.puncture_permutation]
        if self.conjugator is not None:
            mono["conjugator"] = format_word(parse_word(self.conjugator))
        if self.puncture_conjugators is not None:
            mono["puncture_conjugators"] = [format_word(parse_word(w)) for w in self.puncture_conjugators]

        lam: Dict[str, Any] = {"factor": [format_rational(c) for c in self.factor]}
        if self.modulus is not None:
            lam["modulus"] = [format_rational(c) for c in self.modulus]
        if self.root_choice is not None:
            lam["root_choice"] = self.root_choice
        if self.assume_irreducible:
            lam["assume_irreducible"] = True

        data: Dict[str, Any] = {
            "surface": {"genus": self.genus, "punctures": self.punctures},
            "monodromy": mono,
            "lambda": lam,
            "n": self.n,
        }
        options: Dict[str, Any] = {}
        if self.precision is not None:
            options["precision"] = self.precision
        if self.exact_only:
            options["exact_only"] = True
        if options:
            data["options"] = options
        return data

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=None)
