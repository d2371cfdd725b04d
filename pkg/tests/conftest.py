import numpy as np
import pytest

from perimeter_defense.geometry import build_perimeter, circle, piecewise_ellipse


@pytest.fixture(scope="session")
def square():
    return build_perimeter([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture(scope="session")
def circ():
    """Unit circle as a regular 2048-gon."""
    return circle(1.0, 2048)


@pytest.fixture(scope="session")
def circ512():
    return circle(1.0, 512)


@pytest.fixture(scope="session")
def ellipse():
    return piecewise_ellipse(n=512)


def random_convex(rng, n_points=40):
    """Hull of noisy points around a random ellipse."""
    a, b = rng.uniform(0.5, 2.0, 2)
    th = np.sort(rng.uniform(0, 2 * np.pi, n_points))
    rad = rng.uniform(0.8, 1.0, n_points)
    pts = np.column_stack((a * rad * np.cos(th), b * rad * np.sin(th)))
    return build_perimeter(pts)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""
    def report(n, ok, detail=""):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":").split("-")[0])):
            terminalreporter.write_line(line)
