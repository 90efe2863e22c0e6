"""
Basis Cache
Versioned on-disk cache of echelonized Miller bases, one JSON file per (p, k, M/S).
"""
import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from .config_manager import config
from .log import get_logger
from .utils import decimal_strings, validate_json_schema, write_json_atomic

logger = get_logger("BasisCache")

CACHE_FORMAT = "mmfp-cache-v1"

_DECIMAL = {"type": "string", "pattern": "^[0-9]+$"}

CACHE_ENTRY_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["format", "p", "k", "cuspidal", "precision", "basis"],
    "properties": {
        "format": {"const": CACHE_FORMAT},
        "p": _DECIMAL,
        "k": _DECIMAL,
        "cuspidal": {"type": "boolean"},
        "precision": _DECIMAL,
        "basis": {"type": "array", "items": {"type": "array", "items": _DECIMAL}},
    },
}


@dataclass(frozen=True)
class CacheEntry:
    """Basis rows of M_k or S_k mod p as integer residues."""

    p: int
    k: int
    cuspidal: bool
    precision: int
    rows: Tuple[Tuple[int, ...], ...]
    format: str = CACHE_FORMAT

    @classmethod
    def build(cls, p: int, k: int, cuspidal: bool, precision: int, rows: Sequence[Sequence[int]]) -> "CacheEntry":
        return cls(int(p), int(k), bool(cuspidal), int(precision), tuple(tuple(int(c) for c in row) for row in rows))

    def to_json(self) -> Dict[str, Any]:
        return {
            "format": self.format,
            "p": str(self.p),
            "k": str(self.k),
            "cuspidal": self.cuspidal,
            "precision": str(self.precision),
            "basis": [decimal_strings(row) for row in self.rows],
        }

    @classmethod
    def from_json(cls, data: Any) -> Optional["CacheEntry"]:
        """Parse a JSON entry; returns None for anything malformed or from another format version."""
        is_valid, error = validate_json_schema(data, CACHE_ENTRY_SCHEMA)
        if not is_valid:
            logger.debug(f"Rejecting cache entry: {error}")
            return None
        entry = cls.build(
            int(data["p"]), int(data["k"]), data["cuspidal"], int(data["precision"]),
            [[int(c) for c in row] for row in data["basis"]],
        )
        if any(len(row) != entry.precision for row in entry.rows):
            logger.debug("Rejecting cache entry: row length differs from precision")
            return None
        return entry

    def truncated(self, precision: int) -> "CacheEntry":
        """The same basis at a lower precision (echelon rows stay echelon)."""
        if precision > self.precision:
            raise ValueError(f"cannot raise cached precision {self.precision} to {precision}")
        return CacheEntry.build(self.p, self.k, self.cuspidal, precision, [row[:precision] for row in self.rows])


def cache_store(entry: CacheEntry, path: Union[str, Path]) -> bool:
    """
    Write an entry atomically (temporary file, then rename).

    Args:
        entry: Entry to persist
        path: Destination file

    Returns:
        True on success; IO failures are logged and reported as False
    """
    try:
        write_json_atomic(Path(path), entry.to_json())
    except OSError as e:
        logger.warning(f"Could not write cache file {path}: {e}")
        return False
    return True


def cache_load(path: Union[str, Path]) -> Optional[CacheEntry]:
    """
    Read an entry; absent, unreadable, malformed or mismatched files give None.

    Args:
        path: Cache file

    Returns:
        CacheEntry or None
    """
    path = Path(path)
    if not path.exists():
        return None
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as e:
        logger.warning(f"Ignoring unreadable cache file {path}: {e}")
        return None
    return CacheEntry.from_json(data)


class BasisCache:
    """Directory-backed basis cache with an in-process layer; writes are serialized."""

    def __init__(self, cache_dir: Union[str, Path]):
        """
        Initialize the cache.

        Args:
            cache_dir: Directory holding the JSON entries (created on first write)
        """
        self.cache_dir = Path(cache_dir)
        self._memory: Dict[Tuple[int, int, bool], CacheEntry] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_config(cls, cache_dir: Optional[Union[str, Path]] = None) -> Optional["BasisCache"]:
        """Cache for an explicit directory, else MMFP_CACHE_DIR, else None (no caching)."""
        directory = Path(cache_dir) if cache_dir else config.cache_dir
        return cls(directory) if directory else None

    def entry_path(self, p: int, k: int, cuspidal: bool) -> Path:
        kind = "S" if cuspidal else "M"
        return self.cache_dir / f"basis_p{int(p)}_k{int(k)}_{kind}.json"

    def load(self, p: int, k: int, cuspidal: bool, precision: int) -> Optional[CacheEntry]:
        """
        Look up a basis at `precision` or better.

        Returns:
            Entry truncated to `precision`, or None on a miss
        """
        key = (int(p), int(k), bool(cuspidal))
        entry = self._memory.get(key)
        if entry is None:
            entry = cache_load(self.entry_path(*key))
            if entry is not None and (entry.p, entry.k, entry.cuspidal) != key:
                logger.debug(f"Cache file for {key} describes another space; ignoring")
                entry = None
            if entry is not None:
                self._memory[key] = entry
        if entry is None or entry.precision < precision:
            return None
        logger.debug(f"Hit p={p} k={k} ({'S' if cuspidal else 'M'}, prec {entry.precision} >= {precision})")
        return entry.truncated(precision)

    def discard(self, p: int, k: int, cuspidal: bool):
        """Forget a rejected entry so the next store replaces the file."""
        with self._lock:
            self._memory.pop((int(p), int(k), bool(cuspidal)), None)

    def store(self, entry: CacheEntry) -> bool:
        """Persist an entry unless a stored one already has at least its precision."""
        key = (entry.p, entry.k, entry.cuspidal)
        with self._lock:
            current = self._memory.get(key)
            if current is not None and current.precision >= entry.precision:
                return True
            self._memory[key] = entry
            stored = cache_store(entry, self.entry_path(*key))
        if stored:
            logger.info(f"Stored basis p={entry.p} k={entry.k} ({'S' if entry.cuspidal else 'M'}, prec {entry.precision})")
        return stored
