"""
Test configuration and shared fixtures for the optimal cooling solver.
"""

import os

# Add project root to Python path for imports
import sys
from collections.abc import Generator
from pathlib import Path

import pytest
import yaml

sys.path.insert(0, str(Path(__file__).parent.parent))

from dynamics.model import NormalizedProblem, PhaseState, PhysicalParams, Protocol
from engine.evidence import Evidence, EvidenceCollector
from engine.extremals import ExtremalCandidate, SignBranch, build_candidate
from settings.model import DEFAULT_SETTINGS, SolverSettings

# ==================== FIXTURES: TEST DATA ====================


@pytest.fixture
def start_state() -> PhaseState:
    """The hot thermal state in normalized coordinates."""
    return PhaseState(1.0, 0.0)


@pytest.fixture
def sample_settings_data() -> dict:
    """A partial settings mapping as it would appear in a YAML file."""
    return {
        "endpoint_atol": 1e-7,
        "scan_brackets": 1024,
        "oracle_seeds": 4,
    }


# ==================== FIXTURES: OBJECTS ====================


@pytest.fixture
def problem_gamma2() -> NormalizedProblem:
    """gamma = 2, where one switching is optimal."""
    return NormalizedProblem.from_gamma(2.0)


@pytest.fixture
def problem_gamma100() -> NormalizedProblem:
    """gamma = 100, deep in the multi-switching regime."""
    return NormalizedProblem.from_gamma(100.0)


@pytest.fixture
def problem_gamma1000() -> NormalizedProblem:
    """gamma = 1000, the largest ratio the solver guarantees."""
    return NormalizedProblem.from_gamma(1000.0)


@pytest.fixture
def params_gamma2() -> PhysicalParams:
    """Natural units with omega_h = T_h = 1 and omega_c = 1/4."""
    return PhysicalParams.from_gamma(2.0)


@pytest.fixture
def settings() -> SolverSettings:
    return DEFAULT_SETTINGS


@pytest.fixture
def one_switch_candidate(problem_gamma2) -> ExtremalCandidate:
    """The n = 0 PLUS extremal at gamma = 2."""
    cand = build_candidate(0, SignBranch.PLUS, problem_gamma2)
    assert cand is not None
    return cand


@pytest.fixture
def two_segment_protocol() -> Protocol:
    """A short u1-then-u2 protocol at gamma = 2 (not optimal)."""
    return Protocol.from_segments(2.0, [(1.0 / 16.0, 0.5), (1.0, 0.25)])


@pytest.fixture
def empty_evidence_collector() -> EvidenceCollector:
    """Create an empty EvidenceCollector."""
    return EvidenceCollector()


@pytest.fixture
def sample_evidence() -> Evidence:
    """A passed endpoint check."""
    return Evidence(
        check="endpoint",
        subject="γ=2 n=0+",
        passed=True,
        measured=3.2e-12,
        threshold=1e-6,
        details={"x1": 2.0, "x2": 1e-13},
    )


# ==================== FIXTURES: FILES ====================


@pytest.fixture
def temp_settings_file(tmp_path, sample_settings_data) -> str:
    """A YAML settings file with a few overrides."""
    path = tmp_path / "settings.yaml"
    path.write_text(yaml.dump(sample_settings_data))
    return str(path)


@pytest.fixture
def output_dir(tmp_path) -> Path:
    """A fresh directory for written results."""
    return tmp_path / "results"


# ==================== CONFIGURATION ====================


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "integration: mark test as integration test (several packages)"
    )
    config.addinivalue_line("markers", "slow: mark test as slow running")
    config.addinivalue_line(
        "markers", "unit: mark test as unit test (fast, no external dependencies)"
    )


# ==================== HELPER FUNCTIONS ====================


@pytest.fixture
def create_problem() -> Generator:
    """Factory fixture for normalized problems."""

    def _create_problem(gamma: float = 2.0) -> NormalizedProblem:
        return NormalizedProblem.from_gamma(gamma)

    yield _create_problem


@pytest.fixture
def create_protocol() -> Generator:
    """Factory fixture for alternating u1/u2 protocols."""

    def _create_protocol(gamma: float = 2.0, durations: tuple = (0.5, 0.25)) -> Protocol:
        u1 = gamma**-4
        segments = [(u1 if k % 2 == 0 else 1.0, d) for k, d in enumerate(durations)]
        return Protocol.from_segments(gamma, segments)

    yield _create_protocol


# ==================== ENVIRONMENT ====================


@pytest.fixture(autouse=True)
def clean_env() -> Generator[None, None, None]:
    """Clean environment variables before each test."""
    original_env = os.environ.copy()

    for key in list(os.environ.keys()):
        if key.startswith("TEST_") or key == "COOLING_OUTPUT_DIR":
            del os.environ[key]

    yield

    os.environ.clear()
    os.environ.update(original_env)
