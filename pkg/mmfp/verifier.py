"""
Cuspidality of mod-p Hecke eigensystems
From a mod-p eigenform: filtration w, eigensystem Phi, and the cusp eigenform in S_w
or S_{w+p^2-1} that carries Phi. Also the sweeps over whole spaces M_k and the
regression run against published expansions.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import List, Optional, Tuple

from .field import Prime, modular_prime, prime_field
from .hecke import (
    EigenformRecord,
    Eigensystem,
    basis_precision,
    decompose_eigensystems,
    eigenvalue_of,
    eisenstein_eigensystem,
)
from .qseries import QSeries, delta_qexp, eisenstein_qexp
from .regression_fixtures import EXPANSION_LENGTH, REGRESSION_CASES, expected_coefficients
from .spaces import FiltrationReport, filtration, miller_basis, space_dimension
from .utils.basis_cache import BasisCache
from .utils.config_manager import config
from .utils.errors import (
    InvalidInput,
    MMFPError,
    TheoremViolation,
    UnresolvedEigensystem,
    Unsupported,
)
from .utils.log import get_logger
from .utils.utils import first_primes, primes_up_to

logger = get_logger("Verifier")

def weight_shift(p: int) -> int:
    """The shift p^2 - 1 between the two candidate cuspidal weights."""
    return int(p) * int(p) - 1


@dataclass(frozen=True, eq=False)
class SourceDescriptor:
    """
    Where the eigenform fed to verify_theorem comes from.

    Attributes:
        kind: 'eisenstein', 'delta', 'one' or 'series'
        weight: Weight of the form
        series: The q-expansion for kind 'series'
        name: Label for explicit series (file name, record id)
    """

    kind: str
    weight: int
    series: Optional[QSeries] = None
    name: Optional[str] = None

    @classmethod
    def eisenstein(cls, k: int) -> "SourceDescriptor":
        if k < 4 or k % 2:
            raise InvalidInput(f"E_k needs an even weight k >= 4, got {k}")
        return cls('eisenstein', int(k))

    @classmethod
    def delta(cls) -> "SourceDescriptor":
        return cls('delta', 12)

    @classmethod
    def one(cls) -> "SourceDescriptor":
        return cls('one', 0)

    @classmethod
    def explicit(cls, series: QSeries, name: Optional[str] = None) -> "SourceDescriptor":
        return cls('series', series.weight, series, name)

    @property
    def label(self) -> str:
        if self.kind == 'eisenstein':
            return f"eisenstein:{self.weight}"
        if self.kind == 'series':
            return f"series:{self.name or 'explicit'}:weight={self.weight}"
        return self.kind

    def qexp(self, p: int, m: int) -> QSeries:
        """
        The source form mod p at precision m.

        Explicit series are cut down to m when longer and returned unchanged otherwise;
        downstream precision checks report what is missing.
        """
        if self.kind == 'eisenstein':
            return eisenstein_qexp(self.weight, p, m)
        if self.kind == 'delta':
            return delta_qexp(p, m)
        if self.kind == 'one':
            return QSeries.one(prime_field(p), m, 0)
        if self.series.p != int(p):
            raise InvalidInput(f"source series is mod {self.series.p}, not mod {p}")
        return self.series.truncate(m) if self.series.precision > m else self.series


def parse_source(text: str) -> SourceDescriptor:
    """
    Parse 'eisenstein:K', 'delta' or 'one'.

    File sources ('file:PATH') are read by the command line layer and passed
    in through SourceDescriptor.explicit.
    """
    text = text.strip()
    if text in ('delta', 'one'):
        return SourceDescriptor.delta() if text == 'delta' else SourceDescriptor.one()
    kind, _, value = text.partition(':')
    if kind == 'eisenstein':
        try:
            k = int(value)
        except ValueError as e:
            raise InvalidInput(f"bad Eisenstein weight in source {text!r}") from e
        return SourceDescriptor.eisenstein(k)
    raise InvalidInput(f"unknown source {text!r}; expected eisenstein:K, delta, one or file:PATH")


@dataclass(frozen=True, eq=False)
class Verdict:
    """
    Outcome of verify_theorem.

    Attributes:
        p: Characteristic
        source: The source descriptor
        filtration: Filtration w of the source
        eigensystem: Eigensystem Phi of the source on `primes`
        source_is_cuspidal: Whether the source has a_0 = 0
        matched_weight: w or w + p^2 - 1
        matched: Cusp eigenform record carrying Phi
        multiplicity: Number of resolved records at matched_weight carrying Phi
        primes: Primes l <= L, l != p
        precision: q-expansion precision of the bases used
        report: Filtration details of the source
    """

    p: Prime
    source: SourceDescriptor
    filtration: int
    eigensystem: Eigensystem
    source_is_cuspidal: bool
    matched_weight: int
    matched: EigenformRecord
    multiplicity: int
    primes: Tuple[int, ...]
    precision: int
    report: FiltrationReport

    @property
    def shift(self) -> int:
        return self.matched_weight - self.filtration


def _check_characteristic(p: int) -> Prime:
    if int(p) == 2:
        raise Unsupported("p = 2 needs the supersingular-locus argument, which is not implemented")
    return modular_prime(p)


def prime_list(p: int, prime_bound: Optional[int] = None) -> List[int]:
    """Primes l <= L (default from config) other than p, in increasing order."""
    bound = config.prime_bound if prime_bound is None else int(prime_bound)
    primes = primes_up_to(bound, exclude=int(p))
    if not primes:
        raise InvalidInput(f"no primes l <= {bound} other than {p}")
    return primes


def _matches(records: List[EigenformRecord], phi: Eigensystem) -> Tuple[List[EigenformRecord], bool]:
    """Resolved records carrying phi, and whether some unresolved record could carry it."""
    resolved = [r for r in records if r.resolved and r.eigensystem.agrees_with(phi)]
    blocked = any(
        not r.resolved and phi.restricted(r.eigensystem.primes).agrees_with(r.eigensystem)
        for r in records
    )
    return resolved, blocked


def verify_theorem(p: int, source: SourceDescriptor, prime_bound: Optional[int] = None,
                   cache: Optional[BasisCache] = None) -> Verdict:
    """
    Find the cusp eigenform carrying the eigensystem of `source`.

    Computes the filtration w and the eigensystem Phi on every prime l <= L
    (l != p), then searches S_w and, failing that, S_{w+p^2-1}.

    Args:
        p: Prime >= 5
        source: Eigenform in some M_k mod p
        prime_bound: L (default from config)
        cache: Optional basis cache

    Returns:
        Verdict

    Raises:
        NotAnEigenform, ZeroForm, NotAModularForm, InsufficientPrecision,
        UnresolvedEigensystem, TheoremViolation, Unsupported
    """
    p = _check_characteristic(p)
    primes = prime_list(p, prime_bound)
    k = source.weight
    ell_max = primes[-1]

    f = source.qexp(p, basis_precision(k, ell_max))
    report = filtration(f, p, cache)
    w = report.filtration
    phi = Eigensystem(p, tuple((ell, eigenvalue_of(f, ell, p)) for ell in primes), f.field)
    cuspidal = bool(f.is_cuspidal())
    logger.info(f"{source.label} mod {p}: filtration {w}, {'cuspidal' if cuspidal else 'not cuspidal'}")

    precision = basis_precision(w + weight_shift(p), ell_max)
    blocked = False
    for weight in (w, w + weight_shift(p)):
        space = miller_basis(weight, p, precision, True, cache)
        matches, unresolved = _matches(decompose_eigensystems(space, primes), phi)
        blocked = blocked or unresolved
        if not matches:
            logger.debug(f"No eigenform in {space.label} carries the eigensystem of {source.label}")
            continue

        verdict = Verdict(
            p=p,
            source=source,
            filtration=w,
            eigensystem=phi,
            source_is_cuspidal=cuspidal,
            matched_weight=weight,
            matched=matches[0],
            multiplicity=len(matches),
            primes=tuple(primes),
            precision=precision,
            report=report,
        )
        if (weight == w) != cuspidal:
            raise TheoremViolation(
                f"{source.label} mod {p}: matched in weight {weight} with filtration {w}, "
                f"but the source is {'' if cuspidal else 'not '}cuspidal"
            )
        if verdict.multiplicity > 1:
            logger.info(f"{verdict.multiplicity} eigenforms in {space.label} carry the eigensystem; reporting the first")
        logger.info(f"{source.label} mod {p}: eigensystem found in {space.label}")
        return verdict

    if blocked:
        raise UnresolvedEigensystem(
            f"{source.label} mod {p}: the eigensystem lies in an eigenspace that did not split into eigenforms"
        )
    raise TheoremViolation(
        f"{source.label} mod {p}: no cusp eigenform of weight {w} or {w + weight_shift(p)} carries its eigensystem"
    )


@dataclass(frozen=True)
class CorollaryEntry:
    """One resolved eigenform of M_k in a corollary sweep."""

    weight: int
    eigenform_id: str
    filtration: int
    cuspidal: bool
    eigenform: QSeries = dataclass_field(compare=False, repr=False)

    @property
    def description(self) -> str:
        return self.eigenform.format(6)


@dataclass(frozen=True)
class CorollaryReport:
    """
    Filtrations of all resolved eigenforms of M_k mod p, k <= k_max.

    Attributes:
        p: Characteristic
        k_max: Largest weight swept
        prime_bound: L
        entries: Resolved eigenforms in weight order
        violations: Non-cuspidal entries with filtration > p + 1
        unresolved: (weight, record) for eigenspaces that did not resolve
    """

    p: Prime
    k_max: int
    prime_bound: int
    entries: Tuple[CorollaryEntry, ...]
    violations: Tuple[CorollaryEntry, ...]
    unresolved: Tuple[Tuple[int, EigenformRecord], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _space_records(p: Prime, k: int, primes: List[int], cache: Optional[BasisCache]) -> List[EigenformRecord]:
    space = miller_basis(k, p, basis_precision(k, primes[-1]), False, cache)
    return decompose_eigensystems(space, primes)


def corollary_sweep(p: int, k_max: int, prime_bound: Optional[int] = None,
                    cache: Optional[BasisCache] = None) -> CorollaryReport:
    """
    Check that every eigenform of filtration > p + 1 is a cusp form.

    Args:
        p: Prime >= 5
        k_max: Largest even weight to decompose
        prime_bound: L (default from config)
        cache: Optional basis cache

    Returns:
        CorollaryReport; unresolved eigenspaces are listed, never counted as violations
    """
    p = _check_characteristic(p)
    primes = prime_list(p, prime_bound)
    entries, violations, unresolved = [], [], []

    for k in range(0, k_max + 1, 2):
        if space_dimension(k) == 0:
            continue
        for index, record in enumerate(_space_records(p, k, primes, cache)):
            if not record.resolved:
                unresolved.append((k, record))
                continue
            entry = CorollaryEntry(
                weight=k,
                eigenform_id=f"M{k}.{index}",
                filtration=filtration(record.eigenform, p, cache).filtration,
                cuspidal=bool(record.eigenform.is_cuspidal()),
                eigenform=record.eigenform,
            )
            entries.append(entry)
            if entry.filtration > p + 1 and not entry.cuspidal:
                logger.warning(f"{entry.eigenform_id} mod {p} has filtration {entry.filtration} but a_0 != 0")
                violations.append(entry)

    logger.info(f"Corollary sweep mod {p} to weight {k_max}: {len(entries)} eigenforms, "
                f"{len(violations)} violations, {len(unresolved)} unresolved")
    return CorollaryReport(p, k_max, primes[-1], tuple(entries), tuple(violations), tuple(unresolved))


@dataclass(frozen=True)
class WeightShiftReport:
    """verify_theorem run over every resolved eigenform of M_k mod p, k <= k_max."""

    p: Prime
    k_max: int
    verdicts: Tuple[Verdict, ...]
    failures: Tuple[Tuple[str, str], ...]
    unresolved: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def weight_shift_sweep(p: int, k_max: int, prime_bound: Optional[int] = None,
                       cache: Optional[BasisCache] = None) -> WeightShiftReport:
    """
    Verify every resolved eigenform of M_k mod p for even k <= k_max.

    A verdict fails when matched_weight - w is not 0 or p^2 - 1, or when
    matched_weight = w disagrees with a_0 = 0. Eigenforms whose search ends
    in an unresolved eigenspace are listed separately.
    """
    p = _check_characteristic(p)
    primes = prime_list(p, prime_bound)
    verdicts, failures, unresolved = [], [], []

    for k in range(0, k_max + 1, 2):
        if space_dimension(k) == 0:
            continue
        for index, record in enumerate(_space_records(p, k, primes, cache)):
            name = f"M{k}.{index}"
            if not record.resolved:
                unresolved.append(name)
                continue
            try:
                verdict = verify_theorem(p, SourceDescriptor.explicit(record.eigenform, name), primes[-1], cache)
            except UnresolvedEigensystem:
                unresolved.append(name)
                continue
            except MMFPError as e:
                failures.append((name, str(e)))
                continue
            if verdict.shift not in (0, weight_shift(p)):
                failures.append((name, f"weight shift {verdict.shift}"))
            elif (verdict.shift == 0) != verdict.source_is_cuspidal:
                failures.append((name, "matched weight contradicts the constant term"))
            verdicts.append(verdict)

    return WeightShiftReport(p, k_max, tuple(verdicts), tuple(failures), tuple(unresolved))


@dataclass(frozen=True)
class RegressionResult:
    """
    One published example compared against the pipeline.

    coefficient_diffs holds (n, expected, got) for a_1 .. a_37 of the matched
    eigenform; eigensystem_diffs holds (origin, l, expected, got) where origin
    is 'eisenstein' (closed formula) or 'matched' (recovered from the cusp space).
    """

    name: str
    p: int
    k: int
    expected_filtration: int
    expected_weight: int
    filtration: Optional[int] = None
    matched_weight: Optional[int] = None
    coefficient_diffs: Tuple[Tuple[int, int, int], ...] = ()
    eigensystem_diffs: Tuple[Tuple[str, int, int, int], ...] = ()
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return (
            self.error is None
            and self.filtration == self.expected_filtration
            and self.matched_weight == self.expected_weight
            and not self.coefficient_diffs
            and not self.eigensystem_diffs
        )


@dataclass(frozen=True)
class RegressionReport:
    results: Tuple[RegressionResult, ...]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[RegressionResult]:
        return [result for result in self.results if not result.passed]


def _sequence_diffs(origin: str, eigensystem: Eigensystem, expected) -> List[Tuple[str, int, int, int]]:
    diffs = []
    for (ell, value), want in zip(eigensystem.as_pairs(), expected):
        if value != want:
            diffs.append((origin, ell, int(want), value.residue))
    return diffs


def _regression_case(name: str, cache: Optional[BasisCache]) -> RegressionResult:
    case = REGRESSION_CASES[name]
    p, k = case['p'], case['k']
    result = dict(name=name, p=p, k=k, expected_filtration=case['filtration'],
                  expected_weight=case['matched_weight'])
    try:
        verdict = verify_theorem(p, SourceDescriptor.eisenstein(k), EXPANSION_LENGTH, cache)
    except MMFPError as e:
        logger.warning(f"Regression case {name} raised {type(e).__name__}: {e}")
        return RegressionResult(**result, error=f"{type(e).__name__}: {e}")

    eigenform = verdict.matched.eigenform
    got = [eigenform[n].residue for n in range(1, EXPANSION_LENGTH + 1)]
    coefficient_diffs = tuple(
        (n, want, have)
        for n, (want, have) in enumerate(zip(expected_coefficients(name), got), start=1)
        if want != have
    )

    primes = first_primes(len(case['eigensystem']), exclude=p)
    eigensystem_diffs = _sequence_diffs('eisenstein', eisenstein_eigensystem(k, p, primes), case['eigensystem'])
    eigensystem_diffs += _sequence_diffs('matched', verdict.matched.eigensystem.restricted(primes), case['eigensystem'])

    return RegressionResult(
        **result,
        filtration=verdict.filtration,
        matched_weight=verdict.matched_weight,
        coefficient_diffs=coefficient_diffs,
        eigensystem_diffs=tuple(eigensystem_diffs),
    )


def regression_examples(cache: Optional[BasisCache] = None) -> RegressionReport:
    """
    Run the five published (p, E_k) examples; failures are report entries, never exceptions.

    Returns:
        RegressionReport with one result per case, in fixture order
    """
    results = tuple(_regression_case(name, cache) for name in REGRESSION_CASES)
    for result in results:
        status = "pass" if result.passed else "FAIL"
        logger.info(f"Regression {result.name}: {status}")
    return RegressionReport(results)

