import os
import shutil
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def cli() -> str:
    path = os.environ.get("GOSX_CLI") or shutil.which("gosx")
    if not path:
        candidate = Path(__file__).resolve().parents[2] / "build" / "gosx"
        path = str(candidate) if candidate.exists() else None
    if not path:
        pytest.skip("gosx executable not found; set GOSX_CLI")
    return path
