"""Pytest configuration and fixtures."""

from pathlib import Path

import pytest

from qboson.algebra.lattice import CartanData, cartan_preset
from qboson.config import Settings
from qboson.duality.pairing import PairingSession
from qboson.modules.action import SchrodingerAction

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def temp_report_dir(tmp_path: Path) -> Path:
    """Create a temporary report directory."""
    report_dir = tmp_path / "reports"
    report_dir.mkdir()
    return report_dir


@pytest.fixture
def test_settings(temp_report_dir: Path) -> Settings:
    """Create test settings writing reports to a temporary directory."""
    return Settings(report_path=temp_report_dir, max_degree=6)


@pytest.fixture
def a1() -> CartanData:
    return cartan_preset("A1")


@pytest.fixture
def a2() -> CartanData:
    return cartan_preset("A2")


@pytest.fixture
def quantum_session(a1: CartanData, test_settings: Settings) -> PairingSession:
    """Pairing of U~+ with U~- over sl2."""
    return PairingSession(a1, "quantum", test_settings)


@pytest.fixture
def boson_session(a1: CartanData, test_settings: Settings) -> PairingSession:
    """Pairing of B+ with B- over sl2."""
    return PairingSession(a1, "boson", test_settings)


@pytest.fixture
def boson_action(boson_session: PairingSession) -> SchrodingerAction:
    return SchrodingerAction(boson_session)


@pytest.fixture
def scrambled_module_path() -> Path:
    """H(2) + H(0) over sl2 in a scrambled weight basis."""
    return DATA_DIR / "h2_plus_h0_scrambled.json"
