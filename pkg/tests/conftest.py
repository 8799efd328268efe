import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pfcetd.grid import GridSpec, RealField, random_field
from pfcetd.spectral import lowpass

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture
def spec2d() -> GridSpec:
    return GridSpec(dim=2, n=16, length=2 * np.pi)


@pytest.fixture
def spec3d() -> GridSpec:
    return GridSpec(dim=3, n=8, length=2 * np.pi)


def rough_field(spec, seed, amplitude=1.0, shift=0.0) -> RealField:
    return random_field(spec, np.random.default_rng(seed), amplitude, shift)


def smooth_field(spec, seed, amplitude=1.0, shift=0.0, cutoff=None) -> RealField:
    f = rough_field(spec, seed, amplitude, shift)
    return lowpass(f, cutoff if cutoff is not None else max(1, spec.n // 4))
