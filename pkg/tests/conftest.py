import itertools
import json
import logging
from typing import List, Optional, Sequence

import numpy as np
import pytest

from setmember.services.estimation import MeasuredSet
from setmember.services.geometry import FeasibleSet, Slab


def interval(lower: float, upper: float) -> Slab:
    """1-D slab lower <= x <= upper."""
    return Slab(np.array([1.0]), lower, upper)


class FixedSource:
    """Measurement source returning the same region for a node at every instant."""

    def __init__(self, regions: Sequence[FeasibleSet]):
        self.regions = list(regions)

    @property
    def nodes(self) -> int:
        return len(self.regions)

    def measured_sets(
        self, instant: int, nodes: Optional[Sequence[int]] = None
    ) -> List[MeasuredSet]:
        selected = range(self.nodes) if nodes is None else nodes
        return [MeasuredSet(node=i, instant=instant, region=self.regions[i]) for i in selected]


def enumerated_strip_projection(directions, lower, upper, p, tol=1e-9):
    """
    Oracle: the nearest feasible point among the projections of `p` onto the
    affine hull of every face of {q : lower <= directions @ q <= upper}.
    """
    M, n = directions.shape
    best, best_distance = None, np.inf
    for size in range(n + 1):
        for strips in itertools.combinations(range(M), size):
            rows = list(strips)
            for sides in itertools.product((lower, upper), repeat=size):
                b = np.array([side[i] for side, i in zip(sides, rows)])
                if not np.all(np.isfinite(b)):
                    continue
                if size == 0:
                    z = np.array(p, dtype=float)
                else:
                    A = directions[rows]
                    gram = A @ A.T
                    if np.linalg.cond(gram) > 1e12:
                        continue
                    z = p + A.T @ np.linalg.solve(gram, b - A @ p)
                s = directions @ z
                if np.all(s >= lower - tol) and np.all(s <= upper + tol):
                    distance = float(np.linalg.norm(z - p))
                    if distance < best_distance:
                        best, best_distance = z, distance
    return best


@pytest.fixture(autouse=True)
def restore_root_logger():
    """Drop the stream handlers commands install on the root logger and restore its level."""
    root = logging.getLogger()
    level = root.level
    yield
    for handler in [h for h in root.handlers if type(h) is logging.StreamHandler]:
        root.removeHandler(handler)
    root.setLevel(level)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def zero_noise_document():
    """Two nodes, independent regressors, no noise: X = {theta*} after one instant."""
    return {
        "scenario": {
            "dim": 2,
            "nodes": 2,
            "seed": 3,
            "theta_star": [1.0, 2.0],
            "regressors": [[1.0, 0.0], [0.6, 0.8]],
            "noise_bounds": [0.0, 0.0],
            "initial_estimates": [[0.0, 0.0], [4.0, -3.0]],
        },
        "estimator": {"mode": "incremental-nstep", "stop": "distance", "max_steps": 500},
    }


@pytest.fixture
def zero_noise_ring_document():
    """Three noiseless nodes in the plane, each regressor pair independent."""
    return {
        "scenario": {
            "dim": 2,
            "nodes": 3,
            "seed": 11,
            "theta_star": [1.0, 2.0],
            "regressors": [[1.0, 0.0], [0.6, 0.8], [0.0, 1.0]],
            "noise_bounds": [0.0, 0.0, 0.0],
            "initial_estimates": [[0.0, 0.0], [4.0, -3.0], [-2.0, 5.0]],
        },
    }


@pytest.fixture
def write_config(tmp_path):
    def _write(document, name="experiment.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write
