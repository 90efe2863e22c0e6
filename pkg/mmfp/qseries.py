"""
Truncated q-expansions
QSeries over F_{p^d} with explicit precision and a weight tag, plus the classical
level-1 generators E_k, Delta and the Hasse invariant A = E_{p-1} mod p.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, List, Optional, Union

import numpy as np

from .field import ExtensionField, FieldElement, Prime, modular_prime, prime_field, reduce_rational
from .utils.errors import (
    DenominatorDivisibleByP,
    FieldMismatch,
    HasseNotConstant,
    InsufficientPrecision,
    WeightMismatch,
)
from .utils.log import get_logger

logger = get_logger("QSeries")

Scalar = Union[int, FieldElement]


@dataclass(frozen=True, eq=False)
class QSeries:
    """
    A truncated q-expansion a_0 + a_1 q + ... + a_{m-1} q^{m-1} + O(q^m).

    Attributes:
        coefficients: Residues of a_0 .. a_{m-1} in `field` (read-only int64 array)
        weight: Weight tag k
        field: Coefficient field
    """

    coefficients: np.ndarray
    weight: int
    field: ExtensionField

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=np.int64, copy=True).reshape(-1)
        if len(coefficients) < 1:
            raise InsufficientPrecision("a q-series needs precision >= 1")
        if np.any(coefficients < 0) or np.any(coefficients >= self.field.order):
            raise ValueError(f"coefficients are not canonical residues of {self.field}")
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_coefficients(cls, values: Iterable[Scalar], weight: int, field: ExtensionField) -> "QSeries":
        """Build a series from ints (reduced mod p) or FieldElements."""
        residues = []
        for v in values:
            if isinstance(v, FieldElement):
                residues.append(field.embed(v).residue)
            else:
                residues.append(field(int(v)).residue)
        return cls(np.array(residues, dtype=np.int64), weight, field)

    @classmethod
    def zero(cls, field: ExtensionField, precision: int, weight: int = 0) -> "QSeries":
        return cls(np.zeros(precision, dtype=np.int64), weight, field)

    @classmethod
    def one(cls, field: ExtensionField, precision: int, weight: int = 0) -> "QSeries":
        coefficients = np.zeros(precision, dtype=np.int64)
        coefficients[0] = 1
        return cls(coefficients, weight, field)

    # -- basic queries --------------------------------------------------------

    @property
    def precision(self) -> int:
        return len(self.coefficients)

    @property
    def p(self) -> Prime:
        return self.field.p

    def __len__(self) -> int:
        return self.precision

    def __getitem__(self, n: int) -> FieldElement:
        if not 0 <= n < self.precision:
            raise InsufficientPrecision(f"a_{n} requested from a series of precision {self.precision}")
        return FieldElement(int(self.coefficients[n]), self.field)

    def coefficient_list(self) -> List[FieldElement]:
        return [FieldElement(int(c), self.field) for c in self.coefficients]

    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, or None for the zero series."""
        nonzero = np.nonzero(self.coefficients)[0]
        return int(nonzero[0]) if len(nonzero) else None

    def leading_coefficient(self) -> Optional[FieldElement]:
        v = self.valuation()
        return None if v is None else self[v]

    def is_cuspidal(self) -> bool:
        return self.coefficients[0] == 0

    # -- transformations ------------------------------------------------------

    def truncate(self, precision: int) -> "QSeries":
        if precision > self.precision:
            raise InsufficientPrecision(
                f"cannot extend a series of precision {self.precision} to {precision}"
            )
        return QSeries(self.coefficients[:precision], self.weight, self.field)

    def with_weight(self, weight: int) -> "QSeries":
        return QSeries(self.coefficients, weight, self.field)

    def embed(self, field: ExtensionField) -> "QSeries":
        """The same series viewed over an extension of the prime field."""
        if field == self.field:
            return self
        if field.p != self.field.p or self.field.d != 1:
            raise FieldMismatch(f"cannot embed {self.field} into {field}")
        return QSeries(self.coefficients, self.weight, field)

    def scale(self, c: Scalar) -> "QSeries":
        c = self._scalar(c)
        return QSeries(self.field.mul(self.coefficients, c.residue), self.weight, self.field)

    def normalized(self) -> "QSeries":
        """Scale so the first nonzero coefficient is 1 (the zero series is returned as is)."""
        lead = self.leading_coefficient()
        if lead is None:
            return self
        return self.scale(lead.inverse())

    def _scalar(self, c: Scalar) -> FieldElement:
        if isinstance(c, FieldElement):
            return self.field.embed(c)
        return self.field(int(c))

    def _aligned(self, other: "QSeries") -> tuple[np.ndarray, np.ndarray, int]:
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} and {other.field}")
        m = min(self.precision, other.precision)
        return self.coefficients[:m], other.coefficients[:m], m

    # -- ring operations --------------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        if other.weight != self.weight:
            raise WeightMismatch(f"cannot add weights {self.weight} and {other.weight}")
        a, b, _ = self._aligned(other)
        return QSeries(self.field.add(a, b), self.weight, self.field)

    def __sub__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        if other.weight != self.weight:
            raise WeightMismatch(f"cannot subtract weights {self.weight} and {other.weight}")
        a, b, _ = self._aligned(other)
        return QSeries(self.field.sub(a, b), self.weight, self.field)

    def __neg__(self) -> "QSeries":
        return QSeries(self.field.neg(self.coefficients), self.weight, self.field)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return series_mul(self, other)
        if isinstance(other, (int, np.integer, FieldElement)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, exponent: int) -> "QSeries":
        if exponent < 0:
            raise ValueError("negative powers of q-series are not supported")
        result = QSeries.one(self.field, self.precision, 0)
        base = self
        while exponent > 0:
            if exponent & 1:
                result = series_mul(result, base)
            base = series_mul(base, base)
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.weight == other.weight
            and np.array_equal(self.coefficients, other.coefficients)
        )

    __hash__ = None

    def agrees_with(self, other: "QSeries", precision: Optional[int] = None) -> bool:
        """Coefficient equality up to `precision` (default: the common precision), ignoring weights."""
        a, b, m = self._aligned(other)
        if precision is not None:
            if precision > m:
                raise InsufficientPrecision(f"comparison to precision {precision} but only {m} terms known")
            a, b = a[:precision], b[:precision]
        return bool(np.array_equal(a, b))

    def __repr__(self) -> str:
        return f"QSeries(weight={self.weight}, {self.field}, {self.format(terms=8)})"

    def format(self, terms: Optional[int] = None) -> str:
        """Render as 'a_0 + a_1q + ... + O(q^m)', skipping zero terms."""
        parts = []
        limit = self.precision if terms is None else min(terms, self.precision)
        for n in range(limit):
            c = self[n]
            if not c:
                continue
            text = str(c)
            if self.field.d > 1 and not c.in_prime_field():
                text = f"({text})"
            if n == 0:
                parts.append(text)
            else:
                coefficient = "" if text == "1" else text
                parts.append(f"{coefficient}q" if n == 1 else f"{coefficient}q^{n}")
        parts.append(f"O(q^{limit})")
        return " + ".join(parts)


def series_mul(f: QSeries, g: QSeries) -> QSeries:
    """
    Product of two q-series.

    Args:
        f: First factor
        g: Second factor (same field)

    Returns:
        Truncated Cauchy product with precision min(prec f, prec g) and weight k_f + k_g

    Raises:
        FieldMismatch
    """
    if f.field != g.field:
        raise FieldMismatch(f"{f.field} and {g.field}")
    m = min(f.precision, g.precision)
    coefficients = f.field.convolve(f.coefficients, g.coefficients, m)
    return QSeries(coefficients, f.weight + g.weight, f.field)


# ---------------------------------------------------------------------------
# Arithmetic functions
# ---------------------------------------------------------------------------

def divisor_power_sum(n: int, r: int) -> int:
    """
    sigma_r(n) = sum of d^r over the divisors d of n.

    Args:
        n: Positive integer
        r: Nonnegative exponent

    Returns:
        Exact integer value
    """
    if n < 1:
        raise ValueError(f"sigma_r(n) needs n >= 1, got {n}")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** r
            e = n // d
            if e != d:
                total += e ** r
        d += 1
    return total


@lru_cache(maxsize=None)
def _bernoulli_table(k: int) -> tuple:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, which yields B_1 = -1/2
    table = [Fraction(1)]
    for m in range(1, k + 1):
        s = sum(Fraction(comb(m + 1, j)) * table[j] for j in range(m))
        table.append(-s / (m + 1))
    return tuple(table)


def bernoulli(k: int) -> Fraction:
    """
    Bernoulli number B_k as an exact rational (convention B_1 = -1/2).

    Args:
        k: Index >= 0

    Returns:
        B_k
    """
    if k < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {k}")
    if k >= 3 and k % 2 == 1:
        return Fraction(0)
    return _bernoulli_table(k)[k]


def divisor_power_sums_mod(r: int, p: int, precision: int) -> np.ndarray:
    """sigma_r(n) mod p for n = 0 .. precision-1 (entry 0 is 0), by a divisor sieve."""
    sums = np.zeros(precision, dtype=np.int64)
    for d in range(1, precision):
        sums[d::d] += pow(d, r, p)
    return sums % p


# ---------------------------------------------------------------------------
# Level-1 generators
# ---------------------------------------------------------------------------

def _check_precision(m: int, minimum: int = 1):
    if m < minimum:
        raise InsufficientPrecision(f"precision {m} is below the minimum {minimum}")


@lru_cache(maxsize=64)
def eisenstein_qexp(k: int, p: int, m: int) -> QSeries:
    """
    Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n reduced mod p.

    For k = 0 (mod p-1) the reduction is the constant 1.

    Args:
        k: Even weight >= 4
        p: Prime >= 5
        m: Precision

    Returns:
        E_k mod p to precision m with weight tag k

    Raises:
        DenominatorDivisibleByP: if -2k/B_k is not p-integral and k != 0 mod p-1
    """
    p = modular_prime(p)
    if k < 4 or k % 2:
        raise ValueError(f"E_k needs even k >= 4, got {k}")
    _check_precision(m)

    if k % (p - 1) == 0:
        logger.debug(f"E_{k} mod {p} is the constant 1 (k = 0 mod p-1)")
        return QSeries.one(prime_field(p), m, k)
    return _eisenstein_from_bernoulli(k, p, m)


def _eisenstein_from_bernoulli(k: int, p: Prime, m: int) -> QSeries:
    """1 - (2k/B_k) sum sigma_{k-1}(n) q^n with the constant reduced mod p."""
    constant = reduce_rational(Fraction(-2 * k) / bernoulli(k), p)
    coefficients = (divisor_power_sums_mod(k - 1, p, m) * constant.residue) % p
    coefficients[0] = 1
    return QSeries(coefficients, k, prime_field(p))


def _euler_product(field: ExtensionField, m: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) truncated to precision m."""
    p = int(field.p)
    coefficients = np.zeros(m, dtype=np.int64)
    coefficients[0] = 1
    for n in range(1, m):
        # multiply by (1 - q^n)
        shifted = np.zeros(m, dtype=np.int64)
        shifted[n:] = coefficients[:m - n]
        coefficients = (coefficients - shifted) % p
    return QSeries(coefficients, 0, field)


@lru_cache(maxsize=32)
def delta_qexp(p: int, m: int) -> QSeries:
    """
    Discriminant Delta = q prod (1 - q^n)^24 mod p.

    Args:
        p: Prime >= 5
        m: Precision >= 2

    Returns:
        Delta mod p to precision m with weight tag 12
    """
    p = modular_prime(p)
    _check_precision(m, 2)
    field = prime_field(p)

    eta = _euler_product(field, m - 1)
    eta8 = eta
    for _ in range(3):
        eta8 = series_mul(eta8, eta8)
    eta24 = series_mul(series_mul(eta8, eta8), eta8)

    coefficients = np.zeros(m, dtype=np.int64)
    coefficients[1:] = eta24.coefficients
    return QSeries(coefficients, 12, field)


@dataclass(frozen=True)
class HasseInvariant:
    """The Hasse invariant A mod p: weight p-1, q-expansion 1."""

    p: Prime
    as_series: QSeries

    @property
    def weight(self) -> int:
        return self.as_series.weight


def hasse_qexp(p: int, m: int) -> HasseInvariant:
    """
    The Hasse invariant as E_{p-1} mod p, with the E_{p-1} = 1 identity checked.

    The series is built from B_{p-1} and sigma_{p-2}; p divides the numerator
    of 2(p-1)/B_{p-1}, so every q^n coefficient must reduce to 0.

    Raises:
        HasseNotConstant: if the computed series is not the constant 1
    """
    p = modular_prime(p)
    _check_precision(m)
    series = _eisenstein_from_bernoulli(p - 1, p, m)
    if not series.agrees_with(QSeries.one(series.field, m)):
        raise HasseNotConstant(f"E_{p - 1} mod {p} = {series.format(8)} is not 1")
    return HasseInvariant(p, series)


def hasse_power(p: int, n: int, m: int) -> QSeries:
    """A^n as a series of weight n(p-1); its q-expansion is 1."""
    if n < 0:
        raise ValueError(f"Hasse exponent must be >= 0, got {n}")
    p = modular_prime(p)
    hasse_qexp(p, m)
    return QSeries.one(prime_field(p), m, n * (p - 1))


def generator_powers(p: int, m: int, a: int, b: int, c: int) -> QSeries:
    """The monomial E_4^a E_6^b Delta^c mod p to precision m."""
    field = prime_field(p)
    result = QSeries.one(field, m)
    if a:
        result = series_mul(result, eisenstein_qexp(4, p, m) ** a)
    if b:
        result = series_mul(result, eisenstein_qexp(6, p, m) ** b)
    if c:
        result = series_mul(result, delta_qexp(p, m) ** c)
    return result.with_weight(4 * a + 6 * b + 12 * c)
