import sys
from pathlib import Path

import pytest


@pytest.hookimpl(tryfirst=True)
def pytest_sessionstart():
    """Pytest hook to add project root to the sys path for cleaner imports in the tests"""
    project_root_str = str(Path(__file__).resolve().parent)
    if project_root_str not in sys.path:
        sys.path.append(project_root_str)
