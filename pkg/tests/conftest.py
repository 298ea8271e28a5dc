import math

import pytest
import yaml

from src import config
from src.models.beam_path import BeamPath
from src.models.constants import CONSTANTS
from src.models.flux_source import FluxSource, SourceKind
from src.models.vector import Vec3

RADIUS = 1.0e-3
B0 = 0.5


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    for name in ("AB_LOG_LEVEL", "AB_REL_TOL", "AB_ABS_TOL", "AB_MAX_SUBDIVISIONS",
                 "AB_GAUSS_ORDER", "AB_FD_STEP_FRACTION"):
        monkeypatch.delenv(name, raising=False)
    config.reset_settings()
    yield
    config.reset_settings()


@pytest.fixture
def infinite_source():
    return FluxSource(SourceKind.INFINITE_SOLENOID, radius=RADIUS, B0=B0)


@pytest.fixture
def finite_source():
    return FluxSource(SourceKind.FINITE_SOLENOID, radius=RADIUS, B0=B0, length=100.0 * RADIUS)


@pytest.fixture
def toroid_source():
    return FluxSource(SourceKind.TOROID, radius=4.0 * RADIUS, B0=B0, minor_radius=RADIUS)


def b0_for_flux(flux, radius):
    return flux / (math.pi * radius * radius)


def two_path(scale):
    """
    Caminhos C (lado -y) e D (lado +y) entre F = (-5s, 0, 0) e E = (5s, 0, 0)
    """
    split = Vec3(-5.0 * scale, 0.0, 0.0)
    join = Vec3(5.0 * scale, 0.0, 0.0)
    path_c = BeamPath((split, Vec3(0.0, -5.0 * scale, 0.0), join), speed=1.0e6)
    path_d = BeamPath((split, Vec3(0.0, 5.0 * scale, 0.0), join), speed=1.0e6)
    return path_c, path_d


def two_path_data(flux=None, radius=1.0e-6, **extra):
    """
    Dicionário de cenário com dois caminhos em torno de um solenoide
    infinito (Φ = h/2e por padrão)
    """
    flux = CONSTANTS.flux_quantum_pair if flux is None else flux
    path_c, path_d = two_path(radius)
    data = {
        "source": {
            "kind": "infinite_solenoid",
            "radius": radius,
            "B0": b0_for_flux(flux, radius),
        },
        "experiment": {
            "two_path": {
                "path_C": path_c.to_dict(),
                "path_D": path_d.to_dict(),
            }
        },
        "quadrature": {"rel_tol": 1.0e-9},
    }
    data.update(extra)
    return data


def squid_data(sweep, **extra):
    data = {
        "source": {"kind": "finite_solenoid", "radius": 1.0e-6, "length": 1.0e-4, "B0": 1.0e-3},
        "experiment": {"squid": {"loop_current_I0": 1.0e-6, "flux_sweep": list(sweep)}},
    }
    data["experiment"]["squid"].update(extra)
    return data


@pytest.fixture
def write_scenario(tmp_path):
    def write(data, name="scenario.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return str(path)

    return write
