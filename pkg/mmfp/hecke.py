"""
Hecke operators at level 1
T_l on q-expansions and on Miller coordinates, and the splitting of M_k / S_k mod p
into simultaneous eigensystems.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .field import (
    ExtensionField,
    FieldElement,
    Polynomial,
    Prime,
    find_roots,
    modular_prime,
    poly_divmod,
    prime_field,
)
from .linalg import charpoly, identity, matmul, matrix_power, nullspace, solve
from .qseries import QSeries
from .spaces import FormSpace, certifying_precision, sturm_bound
from .utils.config_manager import config
from .utils.errors import EllEqualsP, InsufficientPrecision, NotAnEigenform, NotPrime, ZeroForm
from .utils.log import get_logger
from .utils.utils import is_prime

logger = get_logger("Hecke")


@dataclass(frozen=True, eq=False)
class HeckeMatrix:
    """Matrix of T_l on a FormSpace; column i holds the coordinates of T_l f_i."""

    ell: int
    weight: int
    cuspidal: bool
    p: Prime
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "HeckeMatrix") -> np.ndarray:
        return matmul(prime_field(self.p), self.entries, other.entries)


@dataclass(frozen=True)
class Eigensystem:
    """Eigenvalues of T_l for primes l != p, in increasing order of l."""

    p: Prime
    values: Tuple[Tuple[int, FieldElement], ...]
    field: ExtensionField

    def __post_init__(self):
        primes = [ell for ell, _ in self.values]
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError(f"eigensystem primes must increase strictly: {primes}")
        if self.p in primes:
            raise EllEqualsP(f"T_{self.p} has no place in a mod-{self.p} eigensystem")
        object.__setattr__(self, "values", tuple((ell, self.field.embed(v)) for ell, v in self.values))

    @property
    def d(self) -> int:
        return self.field.d

    @property
    def primes(self) -> List[int]:
        return [ell for ell, _ in self.values]

    def value(self, ell: int) -> FieldElement:
        for prime, v in self.values:
            if prime == ell:
                return v
        raise KeyError(ell)

    def as_pairs(self) -> List[Tuple[int, FieldElement]]:
        return list(self.values)

    def residues(self) -> List[int]:
        return [v.residue for _, v in self.values]

    def restricted(self, primes: Iterable[int]) -> "Eigensystem":
        wanted = set(primes)
        return Eigensystem(self.p, tuple((ell, v) for ell, v in self.values if ell in wanted), self.field)

    def agrees_with(self, other: "Eigensystem") -> bool:
        """Same primes and equal eigenvalues (F_p values compare equal inside F_{p^2})."""
        if self.p != other.p or self.primes != other.primes:
            return False
        return all(a == b for (_, a), (_, b) in zip(self.values, other.values))

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for _, v in self.values) + ")"


@dataclass(frozen=True, eq=False)
class EigenformRecord:
    """
    One generalized eigenspace of the Hecke operators on a FormSpace.

    `dimension` is that of the generalized eigenspace; `eigenform` spans the
    common kernel of all T_l - lambda_l inside it and is normalized so its first
    nonzero coefficient is 1. Unresolved records (common kernel of dimension > 1,
    or eigenvalues outside the degree cap) carry a representative instead of an
    eigenform and a `reason` of "multiplicity" or "degree".
    """

    eigensystem: Eigensystem
    eigenform: QSeries
    weight: int
    cuspidal: bool
    resolved: bool
    dimension: int = 1
    reason: Optional[str] = None


def _check_ell(ell: int, p: int) -> int:
    if not is_prime(int(ell)):
        raise NotPrime(f"T_{ell}: {ell} is not prime")
    if int(ell) == int(p):
        raise EllEqualsP(f"T_{p} is not available mod {p}")
    return int(ell)


def _check_primes(primes: Iterable[int], p: int) -> List[int]:
    return sorted({_check_ell(ell, p) for ell in primes})


def apply_tl(f: QSeries, ell: int, p: int) -> QSeries:
    """
    Apply T_l to a q-expansion of weight k.

    a_n(T_l f) = a_{nl}(f) + l^{k-1} a_{n/l}(f), with a_{n/l} = 0 unless l | n.

    Args:
        f: Series with weight tag k and precision m
        ell: Prime different from p
        p: Characteristic

    Returns:
        T_l f with precision (m-1)//l + 1 and weight tag k

    Raises:
        EllEqualsP
    """
    p = modular_prime(p)
    ell = _check_ell(ell, p)
    field = f.field
    out = (f.precision - 1) // ell + 1
    if out < 1:
        raise InsufficientPrecision(f"T_{ell} of a series of precision {f.precision}")

    upper = f.coefficients[np.arange(out) * ell]
    lower = np.zeros(out, dtype=np.int64)
    count = len(range(0, out, ell))
    lower[::ell] = f.coefficients[:count]
    # ell^(k-1) is invertible mod p even for k = 0
    scalar = pow(ell, f.weight - 1, int(p))
    return QSeries(field.add(upper, field.mul(lower, scalar)), f.weight, field)


def eigenvalue_of(f: QSeries, ell: int, p: int) -> FieldElement:
    """
    T_l eigenvalue of an eigenform, checked to the certifying precision.

    Raises:
        NotAnEigenform, ZeroForm, InsufficientPrecision
    """
    m = certifying_precision(f.weight)
    tf = apply_tl(f, ell, p)
    if tf.precision < m:
        raise InsufficientPrecision(
            f"T_{ell} needs precision {ell * m} on a weight-{f.weight} form, series has {f.precision}"
        )
    v = f.truncate(m).valuation()
    if v is None:
        raise ZeroForm("the zero form has no eigenvalues")
    eigenvalue = tf[v] / f[v]
    if not tf.agrees_with(f.scale(eigenvalue), m):
        raise NotAnEigenform(f"form of weight {f.weight} is not a T_{ell} eigenform mod {p}")
    return eigenvalue


def hecke_matrix(space: FormSpace, ell: int) -> HeckeMatrix:
    """
    Matrix of T_l in the Miller coordinates of `space`.

    Args:
        space: FormSpace with precision >= l * (sturm_bound(k) + 1)
        ell: Prime different from p

    Returns:
        HeckeMatrix whose column i is the coordinate vector of T_l f_i

    Raises:
        InsufficientPrecision, EllEqualsP
    """
    ell = _check_ell(ell, space.p)
    needed = ell * (sturm_bound(space.weight) + 1)
    if space.precision < needed:
        raise InsufficientPrecision(f"T_{ell} on {space.label} needs precision {needed}, basis has {space.precision}")

    columns = []
    for f in space.basis:
        coords = space.coordinates(apply_tl(f, ell, space.p))
        if coords is None:
            raise ArithmeticError(f"T_{ell} does not preserve {space.label}")
        columns.append(coords)
    entries = np.stack(columns, axis=1) if columns else np.zeros((0, 0), dtype=np.int64)
    return HeckeMatrix(ell, space.weight, space.cuspidal, space.p, entries)


def eisenstein_eigensystem(k: int, p: int, primes: Sequence[int]) -> Eigensystem:
    """
    Eigensystem of E_k mod p: T_l -> 1 + l^{k-1}.

    Args:
        k: Even weight >= 4
        p: Prime
        primes: Primes different from p

    Returns:
        Eigensystem over F_p
    """
    p = modular_prime(p)
    if k < 4 or k % 2:
        raise ValueError(f"E_k needs even k >= 4, got {k}")
    field = prime_field(p)
    values = tuple((ell, field(1 + pow(ell, k - 1, int(p)))) for ell in _check_primes(primes, p))
    return Eigensystem(p, values, field)


class _EigenspaceSplitter:
    """Recursive splitting of a space by generalized eigenspaces of T_l, primes in increasing order."""

    def __init__(self, space: FormSpace, primes: List[int], matrices: List[np.ndarray], degree_cap: int):
        self.space = space
        self.primes = primes
        self.matrices = matrices
        self.degree_cap = degree_cap
        self.records: List[EigenformRecord] = []

    def split(self, subspace: np.ndarray, index: int, values: List[Tuple[int, FieldElement]],
              field: ExtensionField):
        r = subspace.shape[1]
        if index == len(self.primes):
            # a generalized eigenspace may hold a single eigenline (non-semisimple action)
            eigenspace = matmul(field, subspace, self._common_kernel(subspace, values, field))
            reason = None if eigenspace.shape[1] == 1 else "multiplicity"
            self._emit(eigenspace[:, 0], r, values, field, reason)
            return

        ell = self.primes[index]
        operator = solve(field, subspace, matmul(field, self.matrices[index], subspace))
        chi = charpoly(field, operator)
        pieces = []
        for eigenvalue in find_roots(chi, field):
            shifted = field.sub(operator, field.mul(identity(field, r), eigenvalue.residue))
            pieces.append((eigenvalue, nullspace(field, matrix_power(field, shifted, r))))
        covered = sum(kernel.shape[1] for _, kernel in pieces)

        if covered < r and field.d == 1 and self.degree_cap >= 2:
            logger.debug(f"T_{ell} does not split over {field}; extending to degree 2")
            self.split(subspace, index, values, ExtensionField.of(field.p, 2))
            return

        for eigenvalue, kernel in pieces:
            logger.debug(f"T_{ell} eigenvalue {eigenvalue}: generalized eigenspace of dimension {kernel.shape[1]}")
            self.split(matmul(field, subspace, kernel), index + 1, values + [(ell, eigenvalue)], field)

        if covered < r:
            rest = self._unsplit_part(operator, chi, pieces, field)
            logger.debug(f"T_{ell} leaves a {rest.shape[1]}-dimensional part beyond {field}")
            self._emit(matmul(field, subspace, rest)[:, 0], rest.shape[1], values, field, "degree")

    def _common_kernel(self, subspace: np.ndarray, values, field: ExtensionField) -> np.ndarray:
        """Kernel of all (T_l - lambda_l) stacked, in coordinates relative to `subspace`."""
        r = subspace.shape[1]
        blocks = []
        for matrix, (_, eigenvalue) in zip(self.matrices, values):
            operator = solve(field, subspace, matmul(field, matrix, subspace))
            blocks.append(field.sub(operator, field.mul(identity(field, r), eigenvalue.residue)))
        if not blocks:
            return identity(field, r)
        return nullspace(field, np.concatenate(blocks, axis=0))

    @staticmethod
    def _unsplit_part(operator: np.ndarray, chi: Polynomial, pieces, field: ExtensionField) -> np.ndarray:
        """Kernel of h(T) where h is chi with every linear factor found removed."""
        h = list(chi)
        for eigenvalue, kernel in pieces:
            for _ in range(kernel.shape[1]):
                h, _ = poly_divmod(h, [int(field.neg(eigenvalue.residue)), 1], field)
        size = operator.shape[0]
        value = np.zeros((size, size), dtype=np.int64)
        for c in reversed(h):
            value = field.add(matmul(field, value, operator), field.mul(identity(field, size), c))
        return nullspace(field, value)

    def _emit(self, coords: np.ndarray, dimension: int, values, field: ExtensionField, reason: Optional[str]):
        if field.d > 1 and np.all(coords < field.p) and all(v.in_prime_field() for _, v in values):
            field = prime_field(field.p)
            values = [(ell, FieldElement(v.residue, field)) for ell, v in values]
        eigenform = self.space.combination(coords, field).normalized()
        eigensystem = Eigensystem(self.space.p, tuple(values), field)
        self.records.append(EigenformRecord(
            eigensystem=eigensystem,
            eigenform=eigenform,
            weight=self.space.weight,
            cuspidal=self.space.cuspidal,
            resolved=reason is None,
            dimension=dimension,
            reason=reason,
        ))


def decompose_eigensystems(space: FormSpace, primes: Iterable[int],
                           degree_cap: Optional[int] = None) -> List[EigenformRecord]:
    """
    Split a FormSpace into common eigenspaces of T_l for the given primes.

    Eigenvalues come from the characteristic polynomial via find_roots; when it
    does not split over F_p the subspace is redone over F_{p^2} (if the degree
    cap allows). Splitting uses kernels of (T_l - lambda)^dim, so non-semisimple
    action is handled; a record is resolved when the common kernel of all
    T_l - lambda_l inside its generalized eigenspace is one-dimensional.

    Args:
        space: FormSpace with precision >= max(l) * (sturm_bound(k) + 1)
        primes: Primes different from p
        degree_cap: Largest eigenvalue field degree (default from config)

    Returns:
        EigenformRecords in deterministic order (primes increasing, roots by residue)

    Raises:
        InsufficientPrecision, EllEqualsP
    """
    primes = _check_primes(primes, space.p)
    if space.dimension == 0:
        return []
    cap = config.degree_cap if degree_cap is None else degree_cap
    matrices = [hecke_matrix(space, ell).entries for ell in primes]

    field = prime_field(space.p)
    splitter = _EigenspaceSplitter(space, primes, matrices, cap)
    splitter.split(identity(field, space.dimension), 0, [], field)

    resolved = sum(1 for record in splitter.records if record.resolved)
    logger.info(f"{space.label}: {resolved} resolved of {len(splitter.records)} eigenspaces")
    return splitter.records


def basis_precision(k_max: int, ell_max: int) -> int:
    """Precision budget l_max * (sturm_bound(k_max) + 1) + 1 for Hecke work up to weight k_max."""
    return max(ell_max, 1) * (sturm_bound(k_max) + 1) + 1
