import sys
from pathlib import Path

# make tests/ importable so suites can share the oracle helpers
sys.path.insert(0, str(Path(__file__).parent))
