"""
Projection onto a finite intersection of convex sets.

Dykstra's cyclic scheme keeps one correction term per member; unlike plain
alternating projections it converges to the Euclidean projection onto the
intersection, not merely to some point inside it.
"""

import logging
from typing import TYPE_CHECKING, Sequence

import numpy as np

from setmember.core.config import DYKSTRA_MAX_SWEEPS, DYKSTRA_TOL
from setmember.core.errors import (
    DimensionMismatch,
    EmptySet,
    InvalidGeometry,
    NoConvergence,
)

if TYPE_CHECKING:
    from setmember.services.geometry.sets import FeasibleSet

logger = logging.getLogger(__name__)


def dykstra_project(
    members: Sequence["FeasibleSet"],
    p: np.ndarray,
    tol: float = DYKSTRA_TOL,
    max_sweeps: int = DYKSTRA_MAX_SWEEPS,
) -> np.ndarray:
    """
    Project `p` onto the intersection of `members`.

    Args:
        members: Convex sets whose intersection is assumed nonempty.
        p: Point to project.
        tol: Target accuracy. Sweeps stop once a full sweep changes neither
            the iterate nor any correction term by more than tol / 10 and
            the iterate lies within tol of every member.
        max_sweeps: Sweep cap.

    Returns:
        The projected point.

    Raises:
        EmptySet: If any member is flagged empty.
        NoConvergence: If the sweep cap is exhausted, which usually means the
            intersection is empty.
    """
    members = list(members)
    if not members:
        raise InvalidGeometry("dykstra_project needs at least one set")
    if tol <= 0:
        raise InvalidGeometry("tolerance must be positive", tol=tol)

    x = np.asarray(p, dtype=float)
    dim = members[0].dim
    for member in members:
        if member.is_empty:
            raise EmptySet("cannot project onto an empty member set")
        if member.dim != dim or x.shape != (dim,):
            raise DimensionMismatch(
                "dimension mismatch in dykstra_project",
                expected=dim,
                got=member.dim if member.dim != dim else x.shape[0],
            )

    if len(members) == 1:
        return members[0].project(x)

    increments = np.zeros((len(members), dim))
    threshold = tol / 10.0
    for sweep in range(1, max_sweeps + 1):
        start = x
        previous = increments.copy()
        for j, member in enumerate(members):
            y = x + increments[j]
            x = member._project(y)
            increments[j] = y - x
        if (
            np.linalg.norm(x - start) < threshold
            and np.max(np.linalg.norm(increments - previous, axis=1)) < threshold
            and max(member._distance(x) for member in members) <= tol
        ):
            logger.debug("Dykstra converged after %d sweeps", sweep)
            return x

    raise NoConvergence(
        "Dykstra projection did not converge; the intersection may be empty",
        sweeps=max_sweeps,
        members=len(members),
    )
