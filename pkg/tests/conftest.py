from types import SimpleNamespace

import numpy as np
import pytest

from mingap import (
    clique_pair,
    compute_overlaps,
    min_gap,
    partition_final_levels,
    sweep,
    toy_example_1,
    toy_example_2,
)

_BUILDERS = {"toy1": toy_example_1, "toy2": toy_example_2}
_ACCEPTANCE_LINES: list[tuple[int, str]] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    _ACCEPTANCE_LINES.append(
        (number, f"CRITERION {number}: {'PASS' if passed else 'FAIL'} - {detail}")
    )


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bundles():
    """Cached (pair, sweep, partition, series, min-gap) per fixture/alpha."""
    cache = {}

    def get(name: str, alpha, grid_points: int = 1001):
        key = (name, repr(alpha), grid_points)
        if key not in cache:
            instance = _BUILDERS[name](alpha)
            pair = clique_pair(instance.graph)
            partition = partition_final_levels(pair)
            swp = sweep(pair, np.linspace(0.0, 1.0, grid_points))
            series = compute_overlaps(swp, partition)
            cache[key] = SimpleNamespace(
                instance=instance,
                pair=pair,
                partition=partition,
                sweep=swp,
                series=series,
                mg=min_gap(pair, tol=1e-10),
            )
        return cache[key]

    return get
