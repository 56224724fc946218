"""Shared fixtures; the expensive sweeps are session-scoped."""

import numpy as np
import pytest

import strichartzlab as sl
from strichartzlab.scaling_lab import ExponentPlan, run_sweep, select_parameters


@pytest.fixture(scope="session")
def ref_family():
    return sl.build_family(2, 0.0, "sin2", gamma=0.6)


@pytest.fixture(scope="session")
def ref_plan():
    return ExponentPlan(n=2, sigma=0.0, p=4.0, gamma=0.6, alpha=1.15)


@pytest.fixture(scope="session")
def ref_sweep(ref_family, ref_plan):
    grid = 2.0 ** np.arange(4, 15)
    return run_sweep(ref_plan, ref_family, grid)


@pytest.fixture(scope="session")
def sigma1_case():
    plan = select_parameters(2, 1.0, 4.0)
    Q = sl.build_family(2, 1.0, "sin2", gamma=plan.gamma)
    grid = 2.0 ** np.arange(4, 13)
    return plan, run_sweep(plan, Q, grid)


@pytest.fixture(scope="session")
def n3_case():
    plan = select_parameters(3, 0.0, 2.0)
    Q = sl.build_family(3, 0.0, "sin2", gamma=plan.gamma)
    grid = 2.0 ** np.arange(4, 13)
    return plan, run_sweep(plan, Q, grid)
