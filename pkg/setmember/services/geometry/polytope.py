"""
Exact Euclidean projection onto a strip polytope {q : l <= Φq <= u}.

Dual active-set solve with an identity Hessian: start from the unconstrained
minimizer p, repeatedly add the most violated half-space and drop active
half-spaces whose multiplier would turn negative. Every iterate is the
projection onto the polyhedron of its active set, so the result is exact up
to rounding once no half-space is violated. Each strip contributes the two
half-spaces φᵀq >= l and -φᵀq >= -u; infinite bounds contribute nothing.
"""

import logging
from typing import List, Tuple

import numpy as np

from setmember.core.config import POLYTOPE_FEAS_TOL, POLYTOPE_MAX_ITERATIONS
from setmember.core.errors import DimensionMismatch, EmptySet, NoConvergence

logger = logging.getLogger(__name__)

_DEGENERATE = 1e-14


def _halfspaces(
    directions: np.ndarray, lower: np.ndarray, upper: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normals c, offsets b (cᵀq >= b) and the strip each half-space came from."""
    has_lower = np.isfinite(lower)
    has_upper = np.isfinite(upper)
    normals = np.vstack([directions[has_lower], -directions[has_upper]])
    offsets = np.concatenate([lower[has_lower], -upper[has_upper]])
    strips = np.concatenate([np.flatnonzero(has_lower), np.flatnonzero(has_upper)])
    return normals, offsets, strips


def project_onto_strips(
    directions,
    lower,
    upper,
    p,
    feas_tol: float = POLYTOPE_FEAS_TOL,
    max_iterations: int = POLYTOPE_MAX_ITERATIONS,
) -> np.ndarray:
    """
    Project `p` onto {q : lower <= directions @ q <= upper}.

    Args:
        directions: M x n matrix of strip normals.
        lower, upper: Per-strip bounds; infinite entries leave that side open.
        p: Point to project.
        feas_tol: Relative violation below which a half-space counts as met.
        max_iterations: Cap on active-set changes.

    Returns:
        The projected point.

    Raises:
        DimensionMismatch: If the shapes of the arguments disagree.
        EmptySet: If some strip has crossed bounds or the half-spaces admit no
            common point.
        NoConvergence: If the active-set cap is exhausted.
    """
    Phi = np.atleast_2d(np.asarray(directions, dtype=float))
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    x = np.array(p, dtype=float)
    if x.shape != (Phi.shape[1],):
        raise DimensionMismatch(
            "point and strip dimensions differ", expected=Phi.shape[1], got=x.shape[0]
        )
    if lower.shape != (Phi.shape[0],) or upper.shape != (Phi.shape[0],):
        raise DimensionMismatch(
            "need one lower and one upper bound per strip",
            expected=Phi.shape[0],
            got=[lower.shape[0], upper.shape[0]],
        )
    crossed = np.flatnonzero(lower > upper)
    if crossed.size:
        raise EmptySet("strip polytope is empty", node=int(crossed[0]))

    normals, offsets, strips = _halfspaces(Phi, lower, upper)
    if offsets.size == 0:
        return x
    threshold = feas_tol * (1.0 + np.max(np.abs(offsets)) + np.max(np.abs(x)))

    active: List[int] = []
    multipliers = np.zeros(0)
    iterations = 0
    while True:
        slack = normals @ x - offsets
        j = int(np.argmin(slack))
        if slack[j] >= -threshold:
            logger.debug("Strip projection solved with %d active half-spaces", len(active))
            return x

        n_plus = normals[j]
        dual = np.append(multipliers, 0.0)
        while True:
            iterations += 1
            if iterations > max_iterations:
                raise NoConvergence(
                    "strip projection exceeded its active-set cap",
                    iterations=max_iterations,
                    strips=int(Phi.shape[0]),
                )
            if active:
                N = normals[active].T
                r = np.linalg.lstsq(N, n_plus, rcond=None)[0]
                z = n_plus - N @ r
            else:
                r = np.zeros(0)
                z = n_plus

            # largest dual step before an active multiplier reaches zero
            t_drop, k = np.inf, -1
            blocking = np.flatnonzero(r > _DEGENERATE)
            if blocking.size:
                ratios = dual[blocking] / r[blocking]
                k = int(blocking[np.argmin(ratios)])
                t_drop = float(np.min(ratios))

            zz = float(z @ z)
            t_full = float(offsets[j] - n_plus @ x) / zz if zz > _DEGENERATE else np.inf
            t = min(t_drop, t_full)
            if not np.isfinite(t):
                raise EmptySet("strip polytope is empty", node=int(strips[j]))

            if np.isfinite(t_full):
                x = x + t * z
            dual[:-1] -= t * r
            dual[-1] += t
            if t_full <= t_drop:
                active.append(j)
                multipliers = dual
                break
            del active[k]
            dual = np.delete(dual, k)


def distance_to_strips(directions, lower, upper, p, **kwargs) -> float:
    """||p - P(p)|| for the strip polytope, see project_onto_strips."""
    x = np.asarray(p, dtype=float)
    return float(np.linalg.norm(x - project_onto_strips(directions, lower, upper, x, **kwargs)))
