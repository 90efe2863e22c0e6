"""
Utility functions for mmfp
Small prime helpers, JSON schema validation and atomic JSON writes.
"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema


def is_prime(n: int) -> bool:
    """
    Deterministic primality test by trial division.

    Args:
        n: Integer to test

    Returns:
        True if n is prime
    """
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_up_to(bound: int, exclude: Optional[int] = None) -> List[int]:
    """
    List the primes l <= bound, optionally leaving out one prime.

    Args:
        bound: Inclusive upper bound
        exclude: Prime to skip (usually the characteristic p)

    Returns:
        Primes in increasing order
    """
    return [n for n in range(2, bound + 1) if is_prime(n) and n != exclude]


def first_primes(count: int, exclude: Optional[int] = None) -> List[int]:
    """
    List the first `count` primes, skipping `exclude`.

    Args:
        count: Number of primes wanted
        exclude: Prime to skip

    Returns:
        Primes in increasing order
    """
    primes: List[int] = []
    n = 2
    while len(primes) < count:
        if is_prime(n) and n != exclude:
            primes.append(n)
        n += 1
    return primes


def validate_json_schema(data: Any, schema: Dict[str, Any]) -> tuple[bool, str]:
    """
    Validate JSON data against a Draft 7 schema.

    Args:
        data: Parsed JSON data
        schema: JSON schema

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        jsonschema.validate(instance=data, schema=schema, cls=jsonschema.Draft7Validator)
    except jsonschema.ValidationError as e:
        location = "/".join(str(part) for part in e.absolute_path)
        where = f" at {location}" if location else ""
        return False, f"{e.message}{where}"

    return True, ""


def write_json_atomic(path: Path, data: Any):
    """
    Write JSON to `path` via a temporary file in the same directory and a rename.

    Readers never observe a partially written file.

    Args:
        path: Destination file
        data: JSON-serializable value
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def decimal_strings(values) -> List[str]:
    """Serialize a sequence of integers as decimal strings."""
    return [str(int(v)) for v in values]
