"""Shared fixtures and independently computed reference values."""

import numpy as np
import pytest

# Reference values computed with mpmath (50 digits) by quadrature or root
# finding, independent of the package code.
PHI_MINUS_HALF = 0.308537538725986896
PHI_MINUS_TWO = 0.0227501319481792072
SUP_G0_G1 = 0.382924922548026207
SUP_F10_LAPLACE1 = (np.e - 1.0) ** 2 / (4.0 * np.e * (1.0 + np.e))
LEVY_SINGLE_SAMPLE = 0.35958045205206454
TLAP_H_1_001 = 4.46492017589120791
TLAP_MOMENT_1_001 = 1.66402074385260498
TLAP_MOMENT_1_1EM5 = 1.99823315179090120
TLAP_H_1_1EM5 = 11.3611147784896
DGEOM_MOMENT_EPS1 = 1.84134718841558464
CLASSICAL_GAUSS_VAR_1_1EM5 = 23.4721380325688764
# 2-D quadrature of exp(-||x||_p^alpha): normalizer, E||X||^2, Fisher scalar.
QUAD_2D = {
    (3.0, 2.0): (3.533277500570899891, 1.132093360726319392, 1.8252357492792685829),
    (1.5, 3.0): (2.4715844717814452423, 0.57807743770172882551, 3.9139251438477919615),
}


@pytest.fixture
def grid():
    return np.linspace(0.0, 1.0, 1001)


@pytest.fixture
def grid201():
    return np.linspace(0.0, 1.0, 201)


# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
