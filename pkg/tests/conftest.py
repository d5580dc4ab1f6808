import numpy as np
import pytest

from dea_frontier import Dataset

APPENDIX = {
    "A": (10, 20, 30),
    "B": (10, 12, 30),
    "C": (12, 13, 30),
    "D": (10, 15, 30),
    "E": (20, 30, 30),
    "G": (20, 40, 30),
    "H": (18, 10, 30),
    "I": (19, 10, 30),
    "J": (11, 11, 29),
}

APPENDIX_CSV = "id,capital,labour,output\n" + "".join(
    f"{k},{a},{b},{c}\n" for k, (a, b, c) in APPENDIX.items())


def appendix_dataset(labour_scale: float = 1.0) -> Dataset:
    data = np.array(list(APPENDIX.values()), dtype=float)
    x = data[:, :2] * [1.0, labour_scale]
    return Dataset(list(APPENDIX), ["capital", "labour"], ["output"], x, data[:, 2:], (0,))


@pytest.fixture
def appendix():
    return appendix_dataset()


def random_dataset(rng, n_max=12, m_max=3, s_max=2, low=1.0, high=100.0):
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    s = int(rng.integers(1, s_max + 1))
    x = rng.uniform(low, high, (n, m))
    y = rng.uniform(low, high, (n, s))
    k = int(rng.integers(1, m + 1))
    capital = tuple(sorted(int(i) for i in rng.choice(m, k, replace=False)))
    return Dataset([f"u{j}" for j in range(n)], [f"x{i}" for i in range(m)],
                   [f"y{r}" for r in range(s)], x, y, capital)


_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
