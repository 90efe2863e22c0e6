"""
mmfp - level-1 modular forms mod p
q-expansions, Miller bases, Hecke eigensystems, Serre filtrations and the search
for the cusp eigenform carrying a given mod-p eigensystem.
"""

from .field import ExtensionField, FieldElement, Prime, find_roots, irreducible_modulus, reduce_rational
from .hecke import (
    EigenformRecord,
    Eigensystem,
    HeckeMatrix,
    apply_tl,
    decompose_eigensystems,
    eigenvalue_of,
    eisenstein_eigensystem,
    hecke_matrix,
)
from .qseries import QSeries, bernoulli, delta_qexp, eisenstein_qexp, hasse_power, hasse_qexp
from .spaces import (
    FiltrationReport,
    FormSpace,
    filtration,
    hasse_injection,
    membership,
    miller_basis,
    new_filtration_dimension,
    space_dimension,
    sturm_bound,
)
from .utils.errors import MMFPError
from .verifier import (
    CorollaryReport,
    SourceDescriptor,
    Verdict,
    corollary_sweep,
    regression_examples,
    verify_theorem,
    weight_shift_sweep,
)

__version__ = "1.0.1"

__all__ = [
    'ExtensionField', 'FieldElement', 'Prime', 'find_roots', 'irreducible_modulus', 'reduce_rational',
    'EigenformRecord', 'Eigensystem', 'HeckeMatrix', 'apply_tl', 'decompose_eigensystems',
    'eigenvalue_of', 'eisenstein_eigensystem', 'hecke_matrix',
    'QSeries', 'bernoulli', 'delta_qexp', 'eisenstein_qexp', 'hasse_power', 'hasse_qexp',
    'FiltrationReport', 'FormSpace', 'filtration', 'hasse_injection', 'membership', 'miller_basis',
    'new_filtration_dimension', 'space_dimension', 'sturm_bound',
    'MMFPError',
    'CorollaryReport', 'SourceDescriptor', 'Verdict', 'corollary_sweep', 'regression_examples',
    'verify_theorem', 'weight_shift_sweep',
]
