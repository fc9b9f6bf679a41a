"""Make the helper modules in this directory importable from any test."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
