"""
Spaces of level-1 modular forms mod p
Echelonized Miller bases of M_k and S_k, membership testing and the Serre filtration.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .field import ExtensionField, FieldElement, Prime, modular_prime, prime_field
from .linalg import matmul, rank, rref
from .qseries import QSeries, generator_powers
from .utils.basis_cache import BasisCache, CacheEntry
from .utils.errors import FieldMismatch, InsufficientPrecision, NotAModularForm, ZeroForm
from .utils.log import get_logger

logger = get_logger("Spaces")


def space_dimension(k: int, cuspidal: bool = False) -> int:
    """
    Dimension of M_k or S_k at level 1 (any characteristic >= 5).

    Args:
        k: Weight
        cuspidal: True for S_k

    Returns:
        Dimension; 0 for odd or negative k
    """
    if k < 0 or k % 2:
        return 0
    full = k // 12 + (0 if k % 12 == 2 else 1)
    return max(full - 1, 0) if cuspidal else full


def sturm_bound(k: int) -> int:
    """
    Number of leading coefficients past which two weight-k forms that agree are equal.

    Forms of weight k agreeing on a_0 .. a_{sturm_bound(k)} coincide.
    """
    if k < 0:
        raise ValueError(f"weight must be >= 0, got {k}")
    return k // 12 + 1


def certifying_precision(*weights: int) -> int:
    """Precision that certifies q-expansion equality among forms of the given weights."""
    return sturm_bound(max(weights)) + 1


@dataclass(frozen=True, eq=False)
class FormSpace:
    """
    M_k or S_k mod p as an echelon basis of q-expansions.

    Row i has a_{offset + j} = delta_ij for j < dimension, where offset is 1
    for cusp forms and 0 otherwise.
    """

    p: Prime
    weight: int
    cuspidal: bool
    precision: int
    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64, copy=True).reshape(-1, self.precision)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def field(self) -> ExtensionField:
        return prime_field(self.p)

    @property
    def dimension(self) -> int:
        return self.rows.shape[0]

    @property
    def offset(self) -> int:
        return 1 if self.cuspidal else 0

    @property
    def pivots(self) -> List[int]:
        return list(range(self.offset, self.offset + self.dimension))

    @property
    def basis(self) -> Tuple[QSeries, ...]:
        return tuple(QSeries(row, self.weight, self.field) for row in self.rows)

    @property
    def label(self) -> str:
        return f"{'S' if self.cuspidal else 'M'}_{self.weight} mod {self.p}"

    def combination(self, coordinates, field: Optional[ExtensionField] = None) -> QSeries:
        """The form sum c_i f_i for coordinates in `field` (default F_p)."""
        field = field or self.field
        coordinates = np.asarray(coordinates, dtype=np.int64).reshape(1, -1)
        if coordinates.shape[1] != self.dimension:
            raise ValueError(f"{coordinates.shape[1]} coordinates for a {self.dimension}-dimensional space")
        if self.dimension == 0:
            return QSeries.zero(field, self.precision, self.weight)
        return QSeries(matmul(field, coordinates, self.rows)[0], self.weight, field)

    def coordinates(self, f: QSeries) -> Optional[np.ndarray]:
        """
        Coordinates of f in this basis, compared over the common precision.

        Args:
            f: Series over F_p or an extension of it

        Returns:
            Coordinate residues in f's field, or None if f is not in the span
        """
        if f.field.p != self.p:
            raise FieldMismatch(f"series over {f.field} tested against {self.label}")
        m = min(f.precision, self.precision)
        if m < self.offset + self.dimension:
            raise InsufficientPrecision(f"{m} coefficients cannot determine coordinates in {self.label}")
        coords = np.array(f.coefficients[self.offset:self.offset + self.dimension], dtype=np.int64)
        rebuilt = self.combination(coords, f.field)
        if not np.array_equal(rebuilt.coefficients[:m], f.coefficients[:m]):
            return None
        return coords


def miller_monomials(k: int, cuspidal: bool = False) -> List[Tuple[int, int, int]]:
    """
    Exponents (a, b, c) of the monomials E_4^a E_6^b Delta^c spanning M_k (or S_k).

    One monomial per power of Delta, in decreasing order of c; a <= 2 after
    removing Delta, so the leading term q^c makes the list triangular.
    """
    full = space_dimension(k, False)
    lowest = 1 if cuspidal else 0
    monomials = []
    for c in range(full - 1, lowest - 1, -1):
        rest = k - 12 * c
        b = 1 if rest % 4 == 2 else 0
        monomials.append(((rest - 6 * b) // 4, b, c))
    return monomials


@lru_cache(maxsize=256)
def _miller_rows(k: int, p: int, m: int, cuspidal: bool) -> np.ndarray:
    field = prime_field(p)
    monomials = miller_monomials(k, cuspidal)
    if not monomials:
        return np.zeros((0, m), dtype=np.int64)

    generators = np.stack([generator_powers(p, m, a, b, c).coefficients for a, b, c in monomials])
    rows, pivots = rref(field, generators)
    offset = 1 if cuspidal else 0
    expected = list(range(offset, offset + len(monomials)))
    if pivots != expected:
        raise ArithmeticError(f"Miller basis for weight {k} mod {p} has pivots {pivots}, expected {expected}")
    rows.setflags(write=False)
    return rows


def _is_miller_echelon(rows: np.ndarray, k: int, p: int, cuspidal: bool) -> bool:
    """Row count matches the dimension, residues lie in [0, p) and the pivot block is the identity."""
    dim = space_dimension(k, cuspidal)
    offset = 1 if cuspidal else 0
    if rows.shape[0] != dim or rows.shape[1] < offset + dim:
        return False
    if np.any(rows < 0) or np.any(rows >= p):
        return False
    return np.array_equal(rows[:, offset:offset + dim], np.eye(dim, dtype=np.int64))


def miller_basis(k: int, p: int, m: int, cuspidal: bool = False,
                 cache: Optional[BasisCache] = None) -> FormSpace:
    """
    Echelonized basis of M_k or S_k mod p.

    Args:
        k: Weight >= 0
        p: Prime >= 5
        m: Precision, at least sturm_bound(k) + 1
        cuspidal: True for S_k
        cache: Optional on-disk basis cache

    Returns:
        FormSpace with a_j(f_i) = delta_ij (shifted by one for S_k)

    Raises:
        InsufficientPrecision
    """
    p = modular_prime(p)
    if k < 0:
        raise ValueError(f"weight must be >= 0, got {k}")
    if m < sturm_bound(k) + 1:
        raise InsufficientPrecision(f"precision {m} is below sturm_bound({k}) + 1 = {sturm_bound(k) + 1}")

    if cache is not None:
        entry = cache.load(p, k, cuspidal, m)
        if entry is not None:
            rows = np.array(entry.rows, dtype=np.int64).reshape(-1, m)
            if _is_miller_echelon(rows, k, int(p), bool(cuspidal)):
                return FormSpace(p, k, cuspidal, m, rows)
            logger.warning(f"Ignoring cached basis of {'S' if cuspidal else 'M'}_{k} mod {p}: "
                           f"not an echelon basis of dimension {space_dimension(k, cuspidal)}")
            cache.discard(p, k, cuspidal)

    rows = _miller_rows(k, int(p), m, bool(cuspidal))
    logger.debug(f"Built basis of {'S' if cuspidal else 'M'}_{k} mod {p}: dim {rows.shape[0]}, prec {m}")

    if cache is not None:
        cache.store(CacheEntry.build(p, k, cuspidal, m, rows.tolist()))
    return FormSpace(p, k, cuspidal, m, rows)


def membership(f: QSeries, k: int, p: int, cache: Optional[BasisCache] = None) -> Optional[np.ndarray]:
    """
    Coordinates of f in the Miller basis of M_k, if f lies in M_k mod p.

    Equality is certified on the first sturm_bound(max(k, weight of f)) + 1
    coefficients.

    Args:
        f: Series with a weight tag
        k: Target weight
        p: Prime
        cache: Optional basis cache

    Returns:
        Coordinate residues (in f's field) or None

    Raises:
        InsufficientPrecision
    """
    p = modular_prime(p)
    if f.field.p != p:
        raise FieldMismatch(f"series over {f.field} tested mod {p}")
    m = certifying_precision(k, max(f.weight, 0))
    if f.precision < m:
        raise InsufficientPrecision(f"membership in weight {k} needs precision {m}, series has {f.precision}")

    head = f.truncate(m)
    dim = space_dimension(k)
    if head.is_zero():
        return np.zeros(dim, dtype=np.int64)
    # Nonzero forms mod p only share q-expansions across weights congruent mod p-1
    if k < 0 or dim == 0 or (k - f.weight) % (p - 1):
        return None
    return miller_basis(k, p, m, False, cache).coordinates(head)


@dataclass(frozen=True)
class FiltrationReport:
    """
    Result of a filtration computation.

    Attributes:
        p: Characteristic
        weight: Input weight k
        filtration: Least w = k (mod p-1) with f in M_w
        witness: Coordinates of the weight-w representative in the Miller basis of M_w
        representative: The representative itself, a series of weight w
    """

    p: Prime
    weight: int
    filtration: int
    witness: Tuple[FieldElement, ...]
    representative: QSeries

    @property
    def hasse_exponent(self) -> int:
        """n with f = A^n * representative."""
        return (self.weight - self.filtration) // (self.p - 1)


def filtration(f: QSeries, p: int, cache: Optional[BasisCache] = None) -> FiltrationReport:
    """
    Serre filtration of a mod-p modular form.

    Descends from the weight tag in steps of p-1 while the q-expansion still
    lies in the smaller space; dividing by A is a q-series identity since A = 1.

    Args:
        f: Nonzero form of weight tag k lying in M_k mod p
        p: Prime
        cache: Optional basis cache

    Returns:
        FiltrationReport

    Raises:
        ZeroForm, NotAModularForm, InsufficientPrecision
    """
    p = modular_prime(p)
    k = f.weight
    m = certifying_precision(k)
    if f.precision < m:
        raise InsufficientPrecision(f"filtration in weight {k} needs precision {m}, series has {f.precision}")
    if f.truncate(m).is_zero():
        raise ZeroForm("the zero form has no filtration")

    witness = membership(f, k, p, cache)
    if witness is None:
        raise NotAModularForm(f"series is not in M_{k} mod {p}")

    w = k
    while w - (p - 1) >= 0:
        lower = membership(f, w - (p - 1), p, cache)
        if lower is None:
            break
        w -= p - 1
        witness = lower
        logger.debug(f"q-expansion lies in M_{w} mod {p}")

    space = miller_basis(w, p, m, False, cache)
    representative = space.combination(witness, f.field)
    logger.info(f"Filtration of weight-{k} form mod {p} is {w}")
    return FiltrationReport(
        p=p,
        weight=k,
        filtration=w,
        witness=tuple(FieldElement(int(c), f.field) for c in witness),
        representative=representative,
    )


def hasse_injection(k: int, p: int, cuspidal: bool = False, m: Optional[int] = None,
                    cache: Optional[BasisCache] = None) -> np.ndarray:
    """
    Matrix of multiplication by A from weight k into weight k + p - 1.

    Column i holds the coordinates of A * f_i in the target Miller basis.

    Args:
        k: Source weight
        p: Prime
        cuspidal: Use S_k -> S_{k+p-1}
        m: Precision (defaults to the certifying precision of the target weight)
        cache: Optional basis cache

    Returns:
        (dim target) x (dim source) matrix over F_p
    """
    p = modular_prime(p)
    target_weight = k + p - 1
    m = m or certifying_precision(target_weight)
    source = miller_basis(k, p, m, cuspidal, cache)
    target = miller_basis(target_weight, p, m, cuspidal, cache)

    columns = []
    for f in source.basis:
        # A has q-expansion 1, so A*f is f re-tagged
        coords = target.coordinates(f.with_weight(target_weight))
        if coords is None:
            raise ArithmeticError(f"A * f is not in {target.label}")
        columns.append(coords)
    if not columns:
        return np.zeros((target.dimension, 0), dtype=np.int64)
    return np.stack(columns, axis=1)


def hasse_injection_rank(k: int, p: int, cuspidal: bool = False) -> int:
    return rank(prime_field(p), hasse_injection(k, p, cuspidal))


def new_filtration_dimension(k: int, p: int, cuspidal: bool = False) -> int:
    """Number of independent forms of filtration exactly k: dim X_k - dim X_{k-p+1}."""
    p = modular_prime(p)
    lower = k - (p - 1)
    return space_dimension(k, cuspidal) - (space_dimension(lower, cuspidal) if lower >= 0 else 0)
