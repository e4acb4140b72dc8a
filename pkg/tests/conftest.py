import itertools

import numpy as np
import pytest
from hypothesis import strategies as st


def count_tables(max_rows=3, max_cols=4, min_rows=1, min_cols=1, max_count=20):
    """Integer count tables with every row populated."""

    @st.composite
    def build(draw):
        nx = draw(st.integers(min_rows, max_rows))
        ny = draw(st.integers(min_cols, max_cols))
        rows = []
        for _ in range(nx):
            row = draw(st.lists(st.integers(0, max_count), min_size=ny, max_size=ny)
                       .filter(lambda r: sum(r) > 0))
            rows.append(row)
        return np.array(rows, dtype=float)

    return build()


def random_tables(rng, count, max_rows, max_cols, max_count=20, min_rows=1, min_cols=1):
    out = []
    while len(out) < count:
        nx = int(rng.integers(min_rows, max_rows + 1))
        ny = int(rng.integers(min_cols, max_cols + 1))
        n = rng.integers(0, max_count + 1, size=(nx, ny)).astype(float)
        if np.all(n.sum(axis=1) > 0):
            out.append(n)
    return out


def brute_force_loglik(counts, perms):
    """Max over all permutation tuples of sum_x sum_j N[x, tau_x(j)] log gamma_j,
    with gamma profiled out as the normalised pooled counts.  Pure Python loops."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    best = -np.inf
    for combo in itertools.product(perms, repeat=counts.shape[0]):
        pooled = [sum(counts[x][tau[j]] for x, tau in enumerate(combo))
                  for j in range(counts.shape[1])]
        ll = sum(s * np.log(s / total) for s in pooled if s > 0)
        best = max(best, ll)
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
