"""Shared fixtures; warms the compiled kernels once so measured runtimes
reflect the algorithms rather than JIT compilation."""

import numpy as np
import pytest

from adhyp import integrate, problems


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    spec = problems.get_problem("smooth1d")
    f = problems.make_initial_field(spec, 8)
    cfg = integrate.SchemeConfig(strategy="new", C=1.0, gamma=spec.gamma)
    integrate.run_to(f, 1e-4, cfg, spec.bc, max_steps=2)

    spec4 = problems.get_problem("ex4")
    f4 = problems.make_initial_field(spec4, 8, 8)
    cfg4 = integrate.SchemeConfig(strategy="new", C=spec4.C_new, gamma=spec4.gamma)
    integrate.run_to(f4, 1e-5, cfg4, spec4.bc, max_steps=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
