import numpy as np
import pytest

from kinetic_case import CanonicalX, EigenPairing, KineticModel, build_theta
from kinetic_case.halfspace import DiffusionProblem, KramersProblem, solve_diffusion, solve_kramers

MAXWELL_C = (0.3, 0.5, 0.9)


def _machinery(model):
    xfn = CanonicalX(model, build_theta(model))
    return xfn, EigenPairing(xfn)


@pytest.fixture(scope="session")
def cmfp():
    return _machinery(KineticModel.cmfp())


@pytest.fixture(scope="session")
def maxwell():
    return {c: _machinery(KineticModel.maxwell(c)) for c in MAXWELL_C}


@pytest.fixture(scope="session")
def kramers(cmfp):
    return solve_kramers(KramersProblem(1.0), xfn=cmfp[0])


@pytest.fixture(scope="session")
def diffusion(maxwell):
    return solve_diffusion(DiffusionProblem(0.5, 1.0), xfn=maxwell[0.5][0])


@pytest.fixture(scope="session")
def kramers_study():
    """Three-level discrete-ordinates refinement at the default configuration (shared, ~30 s)."""
    import time

    from kinetic_case.oracle import OracleConfig, refinement_study

    start = time.perf_counter()
    report, finest = refinement_study(KineticModel.cmfp(), KramersProblem(1.0), OracleConfig())
    return report, finest, time.perf_counter() - start


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
