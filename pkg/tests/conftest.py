import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# Make the sibling helper modules (oracle, graphs, strategies) importable
# from any test file regardless of how pytest was invoked.
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")
