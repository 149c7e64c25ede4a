import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# Run against the in-tree sources so a fresh checkout tests without install.
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

settings.register_profile(
    "ci", deadline=None, derandomize=True, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")
