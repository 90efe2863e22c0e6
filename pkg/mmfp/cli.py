"""
Command line front end for mmfp
Subcommands print text or JSON to stdout; logs go to stderr.
Exit codes: 0 success, 1 mathematical error (or failed check), 2 usage error.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .field import ExtensionField, FieldElement, modular_prime, prime_field
from .hecke import EigenformRecord, Eigensystem, basis_precision, decompose_eigensystems, hecke_matrix
from .qseries import QSeries
from .spaces import certifying_precision, filtration, miller_basis
from .utils.basis_cache import BasisCache
from .utils.errors import InvalidInput, MMFPError
from .utils.log import configure_logging, get_logger
from .utils.utils import decimal_strings, is_prime, validate_json_schema
from .verifier import (
    CorollaryReport,
    RegressionReport,
    SourceDescriptor,
    Verdict,
    corollary_sweep,
    parse_source,
    prime_list,
    regression_examples,
    verify_theorem,
)

logger = get_logger("CLI")

_INTEGER = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+$"}]}

QSERIES_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["weight", "p", "coefficients"],
    "properties": {
        "weight": _INTEGER,
        "p": _INTEGER,
        "coefficients": {"type": "array", "minItems": 1, "items": _INTEGER},
    },
}

Payload = Tuple[Dict[str, Any], List[str]]


# ---------------------------------------------------------------------------
# File sources
# ---------------------------------------------------------------------------

def validate_qseries_payload(data: Any) -> Tuple[bool, str]:
    """
    Check a JSON q-series {weight, p, coefficients}.

    Returns:
        Tuple of (is_valid, error_message)
    """
    is_valid, error = validate_json_schema(data, QSERIES_SCHEMA)
    if not is_valid:
        return False, error
    p, weight = int(data["p"]), int(data["weight"])
    if not is_prime(p) or p < 5:
        return False, f"p must be a prime >= 5, got {p}"
    if weight < 0:
        return False, f"weight must be >= 0, got {weight}"
    return True, ""


def load_qseries_file(path: str) -> QSeries:
    """
    Read a q-series source file.

    Raises:
        InvalidInput: unreadable file or invalid payload
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InvalidInput(f"cannot read q-series file {path}: {e}") from e

    is_valid, error = validate_qseries_payload(data)
    if not is_valid:
        raise InvalidInput(f"{path}: {error}")
    field = prime_field(int(data["p"]))
    return QSeries.from_coefficients([int(c) for c in data["coefficients"]], int(data["weight"]), field)


def resolve_source(text: str) -> SourceDescriptor:
    """eisenstein:K | delta | one | file:PATH"""
    if text.startswith("file:"):
        path = text[len("file:"):]
        return SourceDescriptor.explicit(load_qseries_file(path), Path(path).name)
    return parse_source(text)


# ---------------------------------------------------------------------------
# JSON encoding (integers as decimal strings)
# ---------------------------------------------------------------------------

def element_json(value: FieldElement):
    if value.field.d == 1:
        return str(value.residue)
    return decimal_strings(value.coefficients())


def field_json(field: ExtensionField) -> Dict[str, Any]:
    data = {"p": str(field.p), "degree": str(field.d)}
    if field.d > 1:
        data["modulus"] = decimal_strings(field.modulus)
    return data


def eigensystem_json(eigensystem: Eigensystem) -> Dict[str, Any]:
    return {
        "field": field_json(eigensystem.field),
        "values": [{"ell": str(ell), "value": element_json(v)} for ell, v in eigensystem.as_pairs()],
    }


def qseries_json(f: QSeries) -> Dict[str, Any]:
    return {
        "weight": str(f.weight),
        "field": field_json(f.field),
        "precision": str(f.precision),
        "coefficients": [element_json(c) for c in f.coefficient_list()],
    }


def record_json(record: EigenformRecord) -> Dict[str, Any]:
    return {
        "weight": str(record.weight),
        "cuspidal": record.cuspidal,
        "resolved": record.resolved,
        "dimension": str(record.dimension),
        "reason": record.reason,
        "eigensystem": eigensystem_json(record.eigensystem),
        "qexpansion": qseries_json(record.eigenform),
    }


def verdict_json(verdict: Verdict) -> Dict[str, Any]:
    return {
        "p": str(verdict.p),
        "source": verdict.source.label,
        "filtration": str(verdict.filtration),
        "eigensystem": eigensystem_json(verdict.eigensystem),
        "matched_weight": str(verdict.matched_weight),
        "qexpansion": qseries_json(verdict.matched.eigenform),
        "primes": decimal_strings(verdict.primes),
        "precision": str(verdict.precision),
        "source_is_cuspidal": verdict.source_is_cuspidal,
        "multiplicity": str(verdict.multiplicity),
    }


def _matrix_json(entries: np.ndarray) -> List[List[str]]:
    return [decimal_strings(row) for row in entries]


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_basis(args, cache: Optional[BasisCache]) -> Payload:
    p = modular_prime(args.p)
    m = args.prec or certifying_precision(args.k)
    space = miller_basis(args.k, p, m, args.cuspidal, cache)
    payload = {
        "p": str(p),
        "k": str(args.k),
        "cuspidal": args.cuspidal,
        "precision": str(m),
        "dimension": str(space.dimension),
        "basis": _matrix_json(space.rows),
    }
    lines = [f"{space.label}: dimension {space.dimension}, precision {m}"]
    lines += [f"f_{i + 1} = {f.format()}" for i, f in enumerate(space.basis)]
    return payload, lines


def cmd_hecke_matrix(args, cache: Optional[BasisCache]) -> Payload:
    p = modular_prime(args.p)
    m = args.prec or basis_precision(args.k, args.ell)
    space = miller_basis(args.k, p, m, args.cuspidal, cache)
    matrix = hecke_matrix(space, args.ell)
    payload = {
        "p": str(p),
        "k": str(args.k),
        "ell": str(args.ell),
        "cuspidal": args.cuspidal,
        "precision": str(m),
        "matrix": _matrix_json(matrix.entries),
    }
    lines = [f"T_{args.ell} on {space.label} (precision {m}):"]
    lines += ["  " + " ".join(f"{int(c):>3}" for c in row) for row in matrix.entries]
    return payload, lines


def cmd_eigensystems(args, cache: Optional[BasisCache]) -> Payload:
    p = modular_prime(args.p)
    primes = prime_list(p, args.primes)
    m = args.prec or basis_precision(args.k, primes[-1])
    space = miller_basis(args.k, p, m, args.cuspidal, cache)
    records = decompose_eigensystems(space, primes)
    payload = {
        "p": str(p),
        "k": str(args.k),
        "cuspidal": args.cuspidal,
        "precision": str(m),
        "primes": decimal_strings(primes),
        "records": [record_json(r) for r in records],
    }
    lines = [f"{space.label}: {len(records)} eigenspace(s), primes {primes[0]}..{primes[-1]}"]
    for i, record in enumerate(records):
        status = "resolved" if record.resolved else f"unresolved ({record.reason}, dim {record.dimension})"
        lines.append(f"[{i}] {status} over {record.eigensystem.field}")
        lines.append(f"    eigenvalues {record.eigensystem}")
        lines.append(f"    {record.eigenform.format(12)}")
    return payload, lines


def cmd_filtration(args, cache: Optional[BasisCache]) -> Payload:
    p = modular_prime(args.p)
    source = resolve_source(args.source)
    f = source.qexp(p, args.prec or certifying_precision(source.weight))
    report = filtration(f, p, cache)
    payload = {
        "p": str(p),
        "source": source.label,
        "weight": str(report.weight),
        "filtration": str(report.filtration),
        "hasse_exponent": str(report.hasse_exponent),
        "witness": [element_json(c) for c in report.witness],
    }
    return payload, [f"filtration = {report.filtration}"]


def cmd_verify(args, cache: Optional[BasisCache]) -> Payload:
    p = modular_prime(args.p)
    verdict = verify_theorem(p, resolve_source(args.source), args.primes, cache)
    kind = "cuspidal" if verdict.source_is_cuspidal else "not cuspidal"
    lines = [
        f"source          {verdict.source.label} mod {verdict.p} ({kind})",
        f"filtration      {verdict.filtration}",
        f"eigensystem     {verdict.eigensystem}",
        f"matched weight  {verdict.matched_weight} (shift {verdict.shift})",
        f"eigenform       {verdict.matched.eigenform.format(12)}",
        f"primes          {verdict.primes[0]}..{verdict.primes[-1]}, precision {verdict.precision}",
    ]
    if verdict.multiplicity > 1:
        lines.append(f"multiplicity    {verdict.multiplicity}")
    return verdict_json(verdict), lines


def cmd_corollary(args, cache: Optional[BasisCache]) -> Payload:
    report = corollary_sweep(args.p, args.k, args.primes, cache)
    payload = _corollary_json(report)
    lines = [f"eigenforms of M_k mod {report.p}, k <= {report.k_max} (primes up to {report.prime_bound})"]
    for entry in report.entries:
        kind = "cuspidal" if entry.cuspidal else "non-cuspidal"
        lines.append(f"  k={entry.weight:<3} {entry.eigenform_id:<8} w={entry.filtration:<3} {kind:<12} {entry.description}")
    for weight, record in report.unresolved:
        lines.append(f"  k={weight:<3} unresolved ({record.reason}, dim {record.dimension})")
    lines.append(f"violations: {len(report.violations)}")
    return payload, lines


def _corollary_json(report: CorollaryReport) -> Dict[str, Any]:
    def entry_json(entry):
        return {
            "k": str(entry.weight),
            "id": entry.eigenform_id,
            "filtration": str(entry.filtration),
            "cuspidal": entry.cuspidal,
        }

    return {
        "p": str(report.p),
        "k_max": str(report.k_max),
        "prime_bound": str(report.prime_bound),
        "entries": [entry_json(e) for e in report.entries],
        "violations": [entry_json(e) for e in report.violations],
        "unresolved": [
            {"k": str(k), "reason": record.reason, "dimension": str(record.dimension)}
            for k, record in report.unresolved
        ],
    }


def cmd_regression(args, cache: Optional[BasisCache]) -> Payload:
    report = regression_examples(cache)
    return _regression_json(report), _regression_lines(report)


def _regression_json(report: RegressionReport) -> Dict[str, Any]:
    return {
        "passed": report.passed,
        "cases": [
            {
                "name": r.name,
                "p": str(r.p),
                "k": str(r.k),
                "passed": r.passed,
                "filtration": None if r.filtration is None else str(r.filtration),
                "matched_weight": None if r.matched_weight is None else str(r.matched_weight),
                "coefficient_diffs": [
                    {"n": str(n), "expected": str(want), "got": str(got)} for n, want, got in r.coefficient_diffs
                ],
                "eigensystem_diffs": [
                    {"origin": origin, "ell": str(ell), "expected": str(want), "got": str(got)}
                    for origin, ell, want, got in r.eigensystem_diffs
                ],
                "error": r.error,
            }
            for r in report.results
        ],
    }


def _regression_lines(report: RegressionReport) -> List[str]:
    lines = []
    for r in report.results:
        status = "pass" if r.passed else "FAIL"
        lines.append(f"{r.name}: E_{r.k} mod {r.p} -> w={r.filtration}, S_{r.matched_weight}  {status}")
        if r.error:
            lines.append(f"    {r.error}")
        if r.filtration is not None and r.filtration != r.expected_filtration:
            lines.append(f"    filtration {r.filtration}, expected {r.expected_filtration}")
        if r.matched_weight is not None and r.matched_weight != r.expected_weight:
            lines.append(f"    matched weight {r.matched_weight}, expected {r.expected_weight}")
        for n, want, got in r.coefficient_diffs:
            lines.append(f"    a_{n}: expected {want}, got {got}")
        for origin, ell, want, got in r.eigensystem_diffs:
            lines.append(f"    {origin} T_{ell}: expected {want}, got {got}")
    lines.append("all cases pass" if report.passed else f"{len(report.failures)} case(s) failed")
    return lines



# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a value >= 0, got {value}")
    return value


def _positive(text: str) -> int:
    value = _non_negative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a value >= 1")
    return value


def _source(text: str) -> str:
    """Check the source grammar; file contents are read later by resolve_source."""
    if text.startswith("file:"):
        if not text[len("file:"):]:
            raise argparse.ArgumentTypeError("file: source needs a path")
        return text
    try:
        parse_source(text)
    except InvalidInput as e:
        raise argparse.ArgumentTypeError(str(e))
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="Output format")
    common.add_argument("--cache-dir", help="Basis cache directory (default: MMFP_CACHE_DIR)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    parser = argparse.ArgumentParser(
        prog="mmfp",
        description="Level-1 modular forms mod p: bases, Hecke eigensystems, filtrations and cuspidality checks",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    subparsers.required = True

    def add(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], help=help_text, description=help_text)
        sub.set_defaults(handler=handler)
        sub.add_argument("--p", type=_positive, required=True, help="Characteristic (prime >= 5)")
        return sub

    sub = add("basis", cmd_basis, "Echelonized Miller basis of M_k or S_k mod p")
    sub.add_argument("--k", type=_non_negative, required=True, help="Weight")
    sub.add_argument("--prec", type=_positive, help="Precision (default: Sturm bound + 1)")
    sub.add_argument("--cuspidal", action="store_true", help="Use S_k instead of M_k")

    sub = add("hecke-matrix", cmd_hecke_matrix, "Matrix of T_l on M_k or S_k mod p")
    sub.add_argument("--k", type=_non_negative, required=True, help="Weight")
    sub.add_argument("--ell", type=_positive, required=True, help="Prime l != p")
    sub.add_argument("--prec", type=_positive, help="Precision (default: l * (Sturm bound + 1) + 1)")
    sub.add_argument("--cuspidal", action="store_true", help="Use S_k instead of M_k")

    sub = add("eigensystems", cmd_eigensystems, "Hecke eigensystems of M_k or S_k mod p")
    sub.add_argument("--k", type=_non_negative, required=True, help="Weight")
    sub.add_argument("--primes", type=_positive, help="Use all primes l <= L, l != p")
    sub.add_argument("--prec", type=_positive, help="Precision (default from the Sturm bound and L)")
    sub.add_argument("--cuspidal", action="store_true", help="Use S_k instead of M_k")

    sub = add("filtration", cmd_filtration, "Filtration of a mod-p modular form")
    sub.add_argument("--source", type=_source, required=True, help="eisenstein:K | delta | one | file:PATH")
    sub.add_argument("--prec", type=_positive, help="Precision (default: Sturm bound + 1)")

    sub = add("verify", cmd_verify, "Locate the cusp eigenform carrying an eigensystem")
    sub.add_argument("--source", type=_source, required=True, help="eisenstein:K | delta | one | file:PATH")
    sub.add_argument("--primes", type=_positive, help="Use all primes l <= L, l != p")

    sub = add("corollary", cmd_corollary, "Check that eigenforms of filtration > p+1 are cusp forms")
    sub.add_argument("--k", type=_non_negative, required=True, help="Largest weight swept")
    sub.add_argument("--primes", type=_positive, help="Use all primes l <= L, l != p")

    sub = subparsers.add_parser("regression", parents=[common], help="Compare against published mod-p eigenforms")
    sub.set_defaults(handler=cmd_regression)
    return parser


def _failed(payload: Dict[str, Any], args) -> bool:
    if args.command == "regression":
        return not payload["passed"]
    if args.command == "corollary":
        return bool(payload["violations"])
    return False


def run_command(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])
        stdout: Stream for results (default: sys.stdout)

    Returns:
        Exit code: 0 success, 1 mathematical error or failed check, 2 usage error
    """
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    configure_logging({0: None, 1: "INFO"}.get(args.verbose, "DEBUG"))
    cache = BasisCache.from_config(args.cache_dir)

    try:
        payload, lines = args.handler(args, cache)
    except MMFPError as e:
        logger.debug(f"{args.command} failed with {type(e).__name__}")
        print(f"error: {e}", file=sys.stderr)
        return 1

    if args.format == "json":
        stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        stdout.write("\n".join(lines) + "\n")
    return 1 if _failed(payload, args) else 0


def main():
    sys.exit(run_command())
