import io
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from mmfp.cli import run_command
from mmfp.field import ExtensionField, prime_field
from mmfp.utils.basis_cache import BasisCache
from mmfp.utils.config_manager import ConfigManager


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep developer MMFP_* settings out of the tests."""
    for key in ("MMFP_CACHE_DIR", "MMFP_DEGREE_CAP", "MMFP_ROOT_DEGREE_BOUND", "MMFP_PRIME_BOUND", "MMFP_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)


@pytest.fixture
def f5():
    return prime_field(5)


@pytest.fixture
def f7():
    return prime_field(7)


@pytest.fixture
def f25():
    return ExtensionField.of(5, 2)


@pytest.fixture
def f49():
    return ExtensionField.of(7, 2)


@pytest.fixture
def cache_dir(tmp_path):
    return tmp_path / "cache"


@pytest.fixture
def basis_cache(cache_dir):
    return BasisCache(cache_dir)


@pytest.fixture
def isolated_config(tmp_path):
    """A ConfigManager rooted in an empty temporary directory."""
    return ConfigManager(root_dir=tmp_path)


@pytest.fixture
def run_cli():
    """Run the command line; returns (exit code, stdout text)."""
    def run(*argv):
        out = io.StringIO()
        code = run_command([str(a) for a in argv], stdout=out)
        return code, out.getvalue()
    return run
