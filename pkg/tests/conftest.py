import functools
import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from frobpoisson import frobenius_form, load_algebra, presets  # noqa: E402

ALGEBRAS = Path(__file__).resolve().parent.parent / "algebras"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@functools.lru_cache(maxsize=None)
def algebra(label: str):
    return load_algebra(dict(presets.fleet())[label])


@functools.lru_cache(maxsize=None)
def form(label: str):
    return frobenius_form(algebra(label))


FLEET = [label for label, _ in presets.fleet()]
SMALL = [label for label in FLEET if label != "lambda_4"]


def random_log_canonical(rng, n, force_unimodular):
    """Coefficients c_ij (i < j) and presentation text; the forced family has zero row sums."""
    pairs = list(itertools.combinations(range(n), 2))
    if force_unimodular and n == 3:
        t = rng.choice([v for v in range(-3, 4) if v])
        c = {(0, 1): t, (0, 2): -t, (1, 2): t}
    elif force_unimodular:
        c = {}
    else:
        c = {p: rng.randint(-3, 3) for p in pairs}
    return c, presets.log_canonical(c, n)


def predicted_unimodular(c, n):
    """Delta(pi)(x_i) = -(sum_j c_ij) x_i, so unimodular iff every row sum vanishes."""
    full = {}
    for (i, j), v in c.items():
        full[(i, j)], full[(j, i)] = v, -v
    return all(sum(full.get((i, j), 0) for j in range(n)) == 0 for i in range(n))


@pytest.fixture
def lam22():
    return algebra("lambda_22")


@pytest.fixture
def xyz():
    return algebra("xyz")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
