"""
Finite field arithmetic
Prime fields F_p, small extensions F_{p^d} = F_p[x]/(modulus), exact rationals,
and exhaustive root finding.

Elements of F_{p^d} are stored as integer residues r = c_0 + c_1 p + ... + c_{d-1} p^{d-1}
where c_0 + c_1 x + ... is the reduced polynomial. F_p therefore sits inside every
F_{p^d} as the same integers. Bulk arithmetic works on numpy int64 arrays of residues.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .utils.config_manager import config
from .utils.errors import (
    DegreeBoundExceeded,
    DenominatorDivisibleByP,
    FieldMismatch,
    NotPrime,
    Unsupported,
    ZeroPolynomial,
)
from .utils.log import get_logger
from .utils.utils import is_prime

logger = get_logger("Field")

# Bernoulli numbers and other pre-reduction quantities are plain Fractions
ExactRational = Fraction

Polynomial = List[int]


class Prime(int):
    """A positive integer whose primality was checked at construction."""

    def __new__(cls, value: int):
        if isinstance(value, Prime):
            return value
        if isinstance(value, bool) or int(value) != value:
            raise NotPrime(f"{value!r} is not an integer")
        if not is_prime(int(value)):
            raise NotPrime(f"{value} is not prime")
        return super().__new__(cls, int(value))

    def __repr__(self) -> str:
        return f"Prime({int(self)})"


def modular_prime(p: int) -> Prime:
    """
    Check that p is usable for level-1 modular forms mod p.

    Args:
        p: Candidate characteristic

    Returns:
        p as a Prime

    Raises:
        NotPrime, Unsupported (p in {2, 3})
    """
    p = Prime(p)
    if p < 5:
        raise Unsupported(f"characteristic {p} is not supported; modular form operations need p >= 5")
    return p


# ---------------------------------------------------------------------------
# Polynomials over F_p (plain integer lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(poly: Sequence[int]) -> Polynomial:
    out = list(poly)
    while out and out[-1] == 0:
        out.pop()
    return out


def _prime_poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> Polynomial:
    """Remainder of a by monic-or-not b over F_p."""
    a = [x % p for x in a]
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], -1, p)
    while True:
        a = _trim(a)
        if len(a) < len(b):
            return a
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """
    Test a polynomial over F_p for irreducibility by trial division.

    Args:
        modulus: Coefficients, low degree first
        p: Characteristic

    Returns:
        True if the polynomial has no monic factor of degree 1..deg/2
    """
    poly = _trim([c % p for c in modulus])
    degree = len(poly) - 1
    if degree < 1:
        return False
    for factor_degree in range(1, degree // 2 + 1):
        for low in itertools.product(range(p), repeat=factor_degree):
            if not _prime_poly_mod(poly, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def irreducible_modulus(p: int, d: int) -> Tuple[int, ...]:
    """
    Deterministic modulus for F_{p^d}.

    The smallest monic irreducible of degree d, ordering candidates
    lexicographically by [c_0, c_1, ..., c_{d-1}] with c_0 compared first.

    Args:
        p: Characteristic
        d: Degree (>= 1)

    Returns:
        Coefficient tuple (c_0, ..., c_{d-1}, 1)
    """
    if d < 1:
        raise ValueError(f"extension degree must be >= 1, got {d}")
    if d == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=d):
        candidate = tuple(low) + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise ArithmeticError(f"no irreducible polynomial of degree {d} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionField:
    """F_{p^d} presented as F_p[x]/(modulus)."""

    p: Prime
    d: int
    modulus: Tuple[int, ...]

    def __post_init__(self):
        if self.d < 1 or len(self.modulus) != self.d + 1 or self.modulus[-1] != 1:
            raise ValueError(f"modulus {self.modulus} is not monic of degree {self.d}")
        if self.d > 1 and not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @classmethod
    def of(cls, p: int, d: int = 1) -> "ExtensionField":
        """The field F_{p^d} with its deterministic modulus."""
        return _field_of(int(Prime(p)), d)

    @property
    def order(self) -> int:
        return int(self.p) ** self.d

    @property
    def tag(self) -> Tuple[int, int, Tuple[int, ...]]:
        return (int(self.p), self.d, self.modulus)

    @property
    def is_prime_field(self) -> bool:
        return self.d == 1

    def __str__(self) -> str:
        if self.d == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.d} = F_{self.p}[a]/({format_polynomial(list(self.modulus), 'a')})"

    def __call__(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        """Coerce an integer, a coefficient list or an element of a subfield."""
        if isinstance(value, FieldElement):
            return self.embed(value)
        if isinstance(value, (list, tuple)):
            if len(value) > self.d:
                raise ValueError(f"{len(value)} coefficients given for a degree-{self.d} field")
            digits = [int(c) % self.p for c in value] + [0] * (self.d - len(value))
            return FieldElement(int(self.from_digits(np.array(digits, dtype=np.int64))), self)
        return FieldElement(int(value) % int(self.p), self)

    def embed(self, element: "FieldElement") -> "FieldElement":
        """Re-tag an element of F_p (or of this field) as an element of this field."""
        if element.field == self:
            return element
        if element.field.p != self.p or element.field.d != 1:
            raise FieldMismatch(f"cannot embed {element.field} into {self}")
        return FieldElement(element.residue, self)

    def elements(self) -> np.ndarray:
        """All residues 0 .. p^d - 1 in enumeration order."""
        return np.arange(self.order, dtype=np.int64)

    # -- residue encoding ---------------------------------------------------

    def to_digits(self, a) -> np.ndarray:
        """Residues -> array of shape a.shape + (d,) of polynomial coefficients."""
        a = np.asarray(a, dtype=np.int64)
        p = int(self.p)
        powers = p ** np.arange(self.d, dtype=np.int64)
        return (a[..., None] // powers) % p

    def from_digits(self, digits) -> np.ndarray:
        digits = np.asarray(digits, dtype=np.int64) % int(self.p)
        powers = int(self.p) ** np.arange(self.d, dtype=np.int64)
        return (digits * powers).sum(axis=-1)

    # -- bulk arithmetic on residue arrays -------------------------------------

    def add(self, a, b) -> np.ndarray:
        if self.d == 1:
            return (np.asarray(a, dtype=np.int64) + b) % int(self.p)
        return self.from_digits(self.to_digits(a) + self.to_digits(b))

    def sub(self, a, b) -> np.ndarray:
        if self.d == 1:
            return (np.asarray(a, dtype=np.int64) - b) % int(self.p)
        return self.from_digits(self.to_digits(a) - self.to_digits(b))

    def neg(self, a) -> np.ndarray:
        if self.d == 1:
            return (-np.asarray(a, dtype=np.int64)) % int(self.p)
        return self.from_digits(-self.to_digits(a))

    def mul(self, a, b) -> np.ndarray:
        if self.d == 1:
            return (np.asarray(a, dtype=np.int64) * b) % int(self.p)
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return self._combine(a, b, np.multiply)

    def convolve(self, a, b, length: int) -> np.ndarray:
        """Cauchy product of two coefficient arrays, truncated to `length` terms."""
        a = np.asarray(a, dtype=np.int64)[:length]
        b = np.asarray(b, dtype=np.int64)[:length]
        if len(a) == 0 or len(b) == 0:
            return np.zeros(length, dtype=np.int64)

        def conv(x, y):
            out = np.zeros(length, dtype=np.int64)
            full = np.convolve(x, y)[:length]
            out[:len(full)] = full
            return out

        if self.d == 1:
            return conv(a, b) % int(self.p)
        return self._combine(a, b, conv)

    def _combine(self, a: np.ndarray, b: np.ndarray, op: Callable) -> np.ndarray:
        """Multiply digit polynomials with `op` on the coefficient arrays, then reduce."""
        p = int(self.p)
        da = self.to_digits(a)
        db = self.to_digits(b)
        partial = [None] * (2 * self.d - 1)
        for i in range(self.d):
            for j in range(self.d):
                term = op(da[..., i], db[..., j]) % p
                partial[i + j] = term if partial[i + j] is None else (partial[i + j] + term) % p
        # x^t = -(c_0 + ... + c_{d-1} x^{d-1}) x^{t-d} for t >= d
        for t in range(2 * self.d - 2, self.d - 1, -1):
            top = partial[t]
            for s in range(self.d):
                partial[t - self.d + s] = (partial[t - self.d + s] - top * self.modulus[s]) % p
        return self.from_digits(np.stack(partial[:self.d], axis=-1))

    def power(self, a, exponent: int) -> np.ndarray:
        result = np.ones_like(np.asarray(a, dtype=np.int64))
        base = np.asarray(a, dtype=np.int64)
        while exponent > 0:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError(f"zero has no inverse in {self}")
        return self.power(a, self.order - 2)

    def sum(self, a, axis: Optional[int] = None) -> np.ndarray:
        if self.d == 1:
            return np.asarray(a, dtype=np.int64).sum(axis=axis) % int(self.p)
        digits = self.to_digits(a)
        if axis is None:
            digits = digits.reshape(-1, self.d)
            axis = 0
        elif axis < 0:
            axis -= 1
        return self.from_digits(digits.sum(axis=axis))

    def frobenius(self, a) -> np.ndarray:
        return self.power(a, int(self.p))


@lru_cache(maxsize=None)
def _field_of(p: int, d: int) -> ExtensionField:
    cap = config.degree_cap
    if d > max(cap, 1):
        raise DegreeBoundExceeded(f"extension degree {d} exceeds the configured cap {cap}")
    field = ExtensionField(Prime(p), d, irreducible_modulus(p, d))
    logger.debug(f"Constructed {field}")
    return field


def prime_field(p: int) -> ExtensionField:
    return ExtensionField.of(p, 1)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """A single element of an ExtensionField, stored as its canonical residue."""

    residue: int
    field: ExtensionField

    def __post_init__(self):
        if not 0 <= self.residue < self.field.order:
            raise ValueError(f"residue {self.residue} is not canonical in {self.field}")

    def _coerce(self, other):
        """Bring `other` into this element's field; F_p elements embed upward."""
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other
            if other.field.p == self.field.p and other.field.d == 1:
                return self.field.embed(other)
            raise FieldMismatch(f"{self.field} and {other.field}")
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return self.field(int(other))
        return NotImplemented

    def _binary(self, other, op: str):
        if isinstance(other, FieldElement) and self.field.d == 1 and other.field.d > 1:
            return other.field.embed(self)._binary(other, op)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        result = getattr(self.field, op)(self.residue, other.residue)
        return FieldElement(int(result), self.field)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self) -> "FieldElement":
        return FieldElement(int(self.field.neg(self.residue)), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(int(self.field.inv(self.residue)), self.field)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FieldElement(int(self.field.power(self.residue, exponent)), self.field)

    def frobenius(self) -> "FieldElement":
        return self ** int(self.field.p)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return self.residue == self.field(int(other)).residue
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field == self.field:
            return self.residue == other.residue
        if other.field.p == self.field.p and 1 in (self.field.d, other.field.d):
            return self.residue == other.residue
        return False

    def __hash__(self) -> int:
        # matches hash(int) for canonical residues, which compare equal above
        return hash(self.residue)

    def __bool__(self) -> bool:
        return self.residue != 0

    def __int__(self) -> int:
        if self.field.d != 1 and self.residue >= self.field.p:
            raise ValueError(f"{self} does not lie in the prime field")
        return self.residue

    def coefficients(self) -> List[int]:
        """Polynomial coefficients [c_0, ..., c_{d-1}] in the field generator."""
        return [int(c) for c in self.field.to_digits(self.residue)]

    def in_prime_field(self) -> bool:
        return self.residue < self.field.p

    def __repr__(self) -> str:
        return f"FieldElement({self}, {self.field.p}^{self.field.d})"

    def __str__(self) -> str:
        if self.field.d == 1:
            return str(self.residue)
        return format_polynomial(self.coefficients(), "a") or "0"


def format_polynomial(coefficients: Sequence[int], var: str = "x") -> str:
    """Human-readable polynomial, highest degree first."""
    terms = []
    for i in range(len(coefficients) - 1, -1, -1):
        c = int(coefficients[i])
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{'' if c == 1 else c}{var}")
        else:
            terms.append(f"{'' if c == 1 else c}{var}^{i}")
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def reduce_rational(r: Fraction, p: int) -> FieldElement:
    """
    Reduce an exact rational into F_p.

    Args:
        r: Rational number (lowest terms are taken automatically)
        p: Prime

    Returns:
        (num mod p) * (den mod p)^-1 as an element of F_p

    Raises:
        DenominatorDivisibleByP: if p divides the reduced denominator
    """
    p = Prime(p)
    r = Fraction(r)
    if r.denominator % p == 0:
        raise DenominatorDivisibleByP(f"{r} is not {p}-integral")
    value = (r.numerator % p) * pow(r.denominator % p, -1, int(p))
    return prime_field(p)(value)


# ---------------------------------------------------------------------------
# Polynomials over F_{p^d} (residue lists, low degree first)
# ---------------------------------------------------------------------------

def _as_residues(poly: Iterable, field: ExtensionField) -> Polynomial:
    out = []
    for c in poly:
        if isinstance(c, FieldElement):
            out.append(field.embed(c).residue)
        else:
            out.append(int(c) % int(field.p) if field.d == 1 else int(c))
    return out


def poly_eval(poly: Sequence[int], points, field: ExtensionField) -> np.ndarray:
    """Evaluate a residue polynomial at an array of points (Horner)."""
    points = np.asarray(points, dtype=np.int64)
    acc = np.zeros_like(points)
    for c in reversed(list(poly)):
        acc = field.add(field.mul(acc, points), c)
    return acc


def poly_mul(a: Sequence[int], b: Sequence[int], field: ExtensionField) -> Polynomial:
    if not a or not b:
        return []
    return _trim(int(c) for c in field.convolve(np.array(a), np.array(b), len(a) + len(b) - 1))


def poly_sub(a: Sequence[int], b: Sequence[int], field: ExtensionField) -> Polynomial:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim(int(c) for c in field.sub(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)))


def poly_scale(a: Sequence[int], c: int, field: ExtensionField) -> Polynomial:
    if not a:
        return []
    return _trim(int(x) for x in field.mul(np.array(a, dtype=np.int64), c))


def poly_divmod(a: Sequence[int], b: Sequence[int], field: ExtensionField) -> Tuple[Polynomial, Polynomial]:
    """
    Division with remainder over a field.

    Raises:
        ZeroPolynomial: if b is zero
    """
    b = _trim(b)
    if not b:
        raise ZeroPolynomial("division by the zero polynomial")
    rem = _trim(a)
    quotient = [0] * max(len(rem) - len(b) + 1, 0)
    inv_lead = int(field.inv(b[-1]))
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        factor = int(field.mul(rem[-1], inv_lead))
        quotient[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] = int(field.sub(rem[shift + i], field.mul(factor, c)))
        rem = _trim(rem)
    return _trim(quotient), rem


def find_roots(poly: Sequence, field: ExtensionField) -> List[FieldElement]:
    """
    All roots of a polynomial lying in `field`, by exhaustive evaluation.

    Args:
        poly: Coefficients (ints as residues, or FieldElements), low degree first
        field: Field to search

    Returns:
        Distinct roots in increasing residue order

    Raises:
        ZeroPolynomial: if poly is zero
        DegreeBoundExceeded: if deg(poly) exceeds the configured bound
    """
    coefficients = _trim(_as_residues(poly, field))
    if not coefficients:
        raise ZeroPolynomial("the zero polynomial has every element as a root")
    bound = config.root_degree_bound
    if len(coefficients) - 1 > bound:
        raise DegreeBoundExceeded(f"degree {len(coefficients) - 1} exceeds root-finding bound {bound}")

    points = field.elements()
    values = poly_eval(coefficients, points, field)
    return [FieldElement(int(r), field) for r in points[values == 0]]
