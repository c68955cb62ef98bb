import numpy as np
import pytest
from hypothesis import settings, strategies as st

from periodic_jacobi import new_periodic_jacobi

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@st.composite
def jacobi_matrices(draw, p_min=1, p_max=8, a_lo=0.5, a_hi=2.0, b_lo=-1.0, b_hi=1.0):
    p = draw(st.integers(p_min, p_max))
    a = draw(st.lists(st.floats(a_lo, a_hi), min_size=p, max_size=p))
    b = draw(st.lists(st.floats(b_lo, b_hi), min_size=p, max_size=p))
    return new_periodic_jacobi(a, b)


def random_matrices(seed, count, p_min=2, p_max=10):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        p = int(rng.integers(p_min, p_max + 1))
        out.append(new_periodic_jacobi(rng.uniform(0.5, 2.0, p), rng.uniform(-1.0, 1.0, p)))
    return out


def transfer_discriminant(J, lam):
    """Trace of the one-period transfer matrix, straight from numpy."""
    T = np.eye(2)
    for n in range(J.period):
        an, aprev, bn = J.a_at(n), J.a_at(n - 1), J.b_at(n)
        T = np.array([[(lam - bn) / an, -aprev / an], [1.0, 0.0]]) @ T
    return np.trace(T)


def truncation_edges(J):
    """Band edges from numpy's eigvalsh on the (anti)periodic truncations."""
    p = J.period
    out = []
    for sign in (1.0, -1.0):
        H = np.diag(J.b_array)
        for j in range(p - 1):
            H[j, j + 1] += J.a[j]
            H[j + 1, j] += J.a[j]
        H[0, p - 1] += sign * J.a[p - 1]
        H[p - 1, 0] += sign * J.a[p - 1]
        out.append(np.linalg.eigvalsh(H))
    return np.sort(np.concatenate(out))


@pytest.fixture
def p2():
    return new_periodic_jacobi([1, 1], [1, -1])


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
