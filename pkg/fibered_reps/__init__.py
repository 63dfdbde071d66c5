"""
Fibered Reps - точное построение приводимых представлений ρ_λ, ρ_{λ,n}
групп расслоенных 3-многообразий и их деформаций
"""

import logging
from typing import Any, Dict, Union

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "1.0.0"
__author__ = "Fibered Reps Team"

from .errors import (  # noqa: E402
    DimensionMismatchError,
    FiberedRepsError,
    FieldMismatchError,
    IllConditionedError,
    IndeterminateError,
    RelatorError,
    SpecFileError,
    SpecValidationError,
)
from .numfield import RATIONALS, FieldElement, NumberField, Polynomial, lambda_field_from_factor  # noqa: E402
from .exactlinalg import MatrixK, char_poly, kernel_basis, rank  # noqa: E402
from .fpgroup import (  # noqa: E402
    HomologyMonodromy,
    MonodromySpec,
    Presentation,
    abelianized_action,
    fox_jacobian,
    mapping_torus_presentation,
)
from .repbuild import adjoint_action, build_rho_lambda, compose_rep, module_R, r_n  # noqa: E402
from .twistedcoh import h1_dim, z1_space  # noqa: E402
from .deform import burnside_irreducible, extend_to, first_order  # noqa: E402
from .specfile import SpecFile, bundled_examples  # noqa: E402
from .analyze import HypothesisReport, check_hypotheses, full_report, verdict  # noqa: E402


def setup_logging(level: Union[int, str] = logging.INFO) -> logging.Logger:
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)
    logger = logging.getLogger(__name__)
    logger.setLevel(level)

    if not any(isinstance(h, logging.StreamHandler) for h in logger.handlers):
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
        logger.addHandler(console_handler)

    logger.debug(f"Fibered Reps v{__version__} initialized")
    return logger


def get_module_info() -> Dict[str, Any]:
    return {
        'version': __version__,
        'author': __author__,
        'bundled_examples': sorted(bundled_examples()),
    }


__all__ = [
    'FiberedRepsError',
    'FieldMismatchError',
    'DimensionMismatchError',
    'IllConditionedError',
    'IndeterminateError',
    'RelatorError',
    'SpecFileError',
    'SpecValidationError',
    'RATIONALS',
    'NumberField',
    'FieldElement',
    'Polynomial',
    'lambda_field_from_factor',
    'MatrixK',
    'char_poly',
    'kernel_basis',
    'rank',
    'MonodromySpec',
    'HomologyMonodromy',
    'Presentation',
    'abelianized_action',
    'fox_jacobian',
    'mapping_torus_presentation',
    'r_n',
    'build_rho_lambda',
    'compose_rep',
    'adjoint_action',
    'module_R',
    'z1_space',
    'h1_dim',
    'first_order',
    'extend_to',
    'burnside_irreducible',
    'SpecFile',
    'bundled_examples',
    'HypothesisReport',
    'check_hypotheses',
    'full_report',
    'verdict',
    'setup_logging',
    'get_module_info',
    '__version__',
    '__author__',
]
