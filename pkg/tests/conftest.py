from pathlib import Path

import numpy as np
import pytest
from hypothesis import assume, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oblique.euclid3 import Vec3, triple
from oblique.reciprocal import Basis3

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

B1_ROWS = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 1.0, 1.0]]


@pytest.fixture
def b1() -> Basis3:
    return Basis3.from_rows(B1_ROWS)


@pytest.fixture
def orthonormal() -> Basis3:
    return Basis3.from_rows(np.eye(3).tolist())


def random_basis_rows(rng: np.random.Generator, min_triple: float = 0.05) -> np.ndarray:
    """Three vectors with norms in [0.5, 2] and |a . (b x c)| > min_triple."""
    while True:
        d = rng.normal(size=(3, 3))
        d /= np.linalg.norm(d, axis=1)[:, None]
        e = d * rng.uniform(0.5, 2.0, size=3)[:, None]
        if abs(np.linalg.det(e)) > min_triple:
            return e


def random_basis(rng: np.random.Generator, min_triple: float = 0.05) -> Basis3:
    return Basis3.from_rows(random_basis_rows(rng, min_triple).tolist())


def random_spd(rng: np.random.Generator, n: int, cond: float = 1e6) -> np.ndarray:
    """Symmetric positive-definite matrix with eigenvalues spanning exactly [1, cond]."""
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    lam = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    lam[0], lam[-1] = 1.0, cond
    g = (q * lam) @ q.T
    return 0.5 * (g + g.T)


def rel_err(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


# zero or |x| >= 1e-100 keeps products clear of subnormals
unit_floats = st.one_of(st.just(0.0), st.floats(1e-100, 1.0), st.floats(-1.0, -1e-100))


@st.composite
def vec3s(draw, scale: float = 1.0) -> Vec3:
    return Vec3(*(scale * draw(unit_floats) for _ in range(3)))


@st.composite
def bases(draw, min_triple: float = 0.05) -> Basis3:
    """Vectors with norms in [0.5, 2] and |a . (b x c)| > min_triple."""
    rows = []
    for _ in range(3):
        d = draw(arrays(np.float64, 3, elements=st.floats(-1.0, 1.0)))
        length = np.linalg.norm(d)
        assume(length > 0.1)
        rows.append(d / length * draw(st.floats(0.5, 2.0)))
    e = np.array(rows)
    assume(abs(triple(*(Vec3(*r) for r in e))) > min_triple)
    return Basis3.from_rows(e.tolist())


# -- acceptance summary --------------------------------------------------------

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
