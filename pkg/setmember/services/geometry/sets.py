"""
Convex feasible sets and exact Euclidean projections.

Vectors are 1-D float numpy arrays. Sets are immutable: their arrays are
marked read-only and no operation mutates its argument, so points may be
shared freely between sets, estimators and threads.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from setmember.core.config import DYKSTRA_TOL, MEMBERSHIP_TOL, UNIT_NORM_TOL
from setmember.core.errors import DimensionMismatch, EmptySet, InvalidGeometry
from setmember.services.geometry.dykstra import dykstra_project
from setmember.services.geometry.polytope import project_onto_strips


def as_vector(values, dim: Optional[int] = None) -> np.ndarray:
    """Validate and convert `values` to a finite, read-only 1-D float vector."""
    vector = np.array(values, dtype=float)
    if vector.ndim != 1 or vector.shape[0] < 1:
        raise DimensionMismatch("a vector must be 1-D and nonempty", shape=vector.shape)
    if dim is not None and vector.shape[0] != dim:
        raise DimensionMismatch(
            "vector has the wrong dimension", expected=dim, got=vector.shape[0]
        )
    if not np.all(np.isfinite(vector)):
        raise InvalidGeometry("vector entries must be finite")
    vector.flags.writeable = False
    return vector


def _unit(values) -> Tuple[np.ndarray, float]:
    vector = as_vector(values)
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        raise InvalidGeometry("direction must be a nonzero vector")
    if abs(norm - 1.0) <= UNIT_NORM_TOL:
        return vector, 1.0
    unit = vector / norm
    unit.flags.writeable = False
    return unit, norm


class FeasibleSet(ABC):
    """Closed convex subset of R^n."""

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @property
    def is_empty(self) -> bool:
        return False

    @abstractmethod
    def _project(self, p: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _distance(self, p: np.ndarray) -> float: ...

    def project(self, p) -> np.ndarray:
        """Nearest point of the set to `p`; returns `p` itself when inside."""
        return self._project(self._checked(p))

    def distance(self, p) -> float:
        return self._distance(self._checked(p))

    def contains(self, p, tol: float = MEMBERSHIP_TOL) -> bool:
        if tol < 0:
            raise InvalidGeometry("membership tolerance must be nonnegative", tol=tol)
        return self._distance(self._checked(p)) <= tol

    def intersect(self, other: "FeasibleSet") -> "FeasibleSet":
        """Intersection with another set, e.g. a new measurement set."""
        return Intersection.of(self, other)

    def _checked(self, p) -> np.ndarray:
        if self.is_empty:
            raise EmptySet(f"{type(self).__name__} is empty")
        point = np.asarray(p, dtype=float)
        if point.shape != (self.dim,):
            raise DimensionMismatch(
                "point and set dimensions differ",
                expected=self.dim,
                got=point.shape[0] if point.ndim == 1 else point.shape,
            )
        return point


@dataclass(frozen=True, eq=False)
class Slab(FeasibleSet):
    """
    Strip {θ : lower <= directionᵀθ <= upper}.

    The direction is normalized on construction and the bounds are rescaled
    with it, so the represented set never changes. Infinite bounds are
    allowed; `Slab.unbounded(n)` stands for the whole space. Crossed bounds
    (lower > upper) put the slab in the empty state, and every operation on
    it raises EmptySet.
    """

    direction: np.ndarray
    lower: float
    upper: float

    def __post_init__(self):
        unit, norm = _unit(self.direction)
        lower, upper = float(self.lower), float(self.upper)
        if np.isnan(lower) or np.isnan(upper):
            raise InvalidGeometry("slab bounds must not be NaN")
        object.__setattr__(self, "direction", unit)
        object.__setattr__(self, "lower", lower / norm)
        object.__setattr__(self, "upper", upper / norm)

    @classmethod
    def unbounded(cls, dim: int) -> "Slab":
        direction = np.zeros(dim)
        direction[0] = 1.0
        return cls(direction, -np.inf, np.inf)

    @classmethod
    def from_measurement(cls, direction, value: float, bound: float) -> "Slab":
        """Measurement strip |directionᵀθ - value| <= bound."""
        return cls(direction, value - bound, value + bound)

    def with_bounds(self, lower: float, upper: float) -> "Slab":
        """Slab sharing this (already validated) direction array with new bounds."""
        slab = object.__new__(Slab)
        object.__setattr__(slab, "direction", self.direction)
        object.__setattr__(slab, "lower", float(lower))
        object.__setattr__(slab, "upper", float(upper))
        return slab

    @property
    def dim(self) -> int:
        return self.direction.shape[0]

    @property
    def is_empty(self) -> bool:
        return self.lower > self.upper

    @property
    def is_unbounded(self) -> bool:
        return self.lower == -np.inf and self.upper == np.inf

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def _project(self, p: np.ndarray) -> np.ndarray:
        s = float(self.direction @ p)
        if s > self.upper:
            return p + (self.upper - s) * self.direction
        if s < self.lower:
            return p + (self.lower - s) * self.direction
        return p

    def _distance(self, p: np.ndarray) -> float:
        s = float(self.direction @ p)
        return max(0.0, s - self.upper, self.lower - s)

    def parallel_bounds(self, other: "Slab") -> Optional[Tuple[float, float]]:
        """Bounds of `other` along this slab's direction, or None if not parallel."""
        if other.direction is self.direction or np.array_equal(
            other.direction, self.direction
        ):
            return other.lower, other.upper
        if np.allclose(other.direction, self.direction, rtol=0.0, atol=UNIT_NORM_TOL):
            return other.lower, other.upper
        if np.allclose(other.direction, -self.direction, rtol=0.0, atol=UNIT_NORM_TOL):
            return -other.upper, -other.lower
        return None

    def intersect(self, other: FeasibleSet) -> FeasibleSet:
        if isinstance(other, Slab):
            if other.dim != self.dim:
                raise DimensionMismatch(
                    "cannot intersect sets of different dimension",
                    expected=self.dim,
                    got=other.dim,
                )
            if self.is_unbounded:
                return other
            if other.is_unbounded:
                return self
            bounds = self.parallel_bounds(other)
            if bounds is not None:
                return self.with_bounds(
                    max(self.lower, bounds[0]), min(self.upper, bounds[1])
                )
        return Intersection.of(self, other)


@dataclass(frozen=True, eq=False)
class Box(FeasibleSet):
    """Axis-aligned box lower <= θ <= upper (componentwise)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = as_vector(self.lower)
        upper = as_vector(self.upper, dim=lower.shape[0])
        if np.any(lower > upper):
            raise InvalidGeometry("box lower corner exceeds upper corner")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, dim: int, low: float, high: float) -> "Box":
        return cls(np.full(dim, low), np.full(dim, high))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def _project(self, p: np.ndarray) -> np.ndarray:
        if np.all(p >= self.lower) and np.all(p <= self.upper):
            return p
        return np.clip(p, self.lower, self.upper)

    def _distance(self, p: np.ndarray) -> float:
        return float(np.linalg.norm(p - np.clip(p, self.lower, self.upper)))

    def sample(self, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
        """Uniform draw(s) from the box; shape (dim,) or (size, dim)."""
        shape = self.lower.shape if size is None else (size, self.dim)
        return rng.uniform(self.lower, self.upper, size=shape)


@dataclass(frozen=True, eq=False)
class Halfspace(FeasibleSet):
    """Halfspace {θ : normalᵀθ <= offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        unit, norm = _unit(self.normal)
        object.__setattr__(self, "normal", unit)
        object.__setattr__(self, "offset", float(self.offset) / norm)

    @classmethod
    def supporting(cls, p, q) -> "Halfspace":
        """
        Halfspace bounded by the hyperplane through `q` orthogonal to p - q,
        on the side away from `p`. Contains any convex set whose projection
        of `p` is `q`.
        """
        p, q = as_vector(p), as_vector(q)
        normal = p - q
        return cls(normal, float(normal @ q))

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def _project(self, p: np.ndarray) -> np.ndarray:
        excess = float(self.normal @ p) - self.offset
        if excess <= 0.0:
            return p
        return p - excess * self.normal

    def _distance(self, p: np.ndarray) -> float:
        return max(0.0, float(self.normal @ p) - self.offset)


@dataclass(frozen=True, eq=False)
class Ball(FeasibleSet):
    """Euclidean ball of the given center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        radius = float(self.radius)
        if not radius >= 0.0:
            raise InvalidGeometry("ball radius must be nonnegative", radius=radius)
        object.__setattr__(self, "center", as_vector(self.center))
        object.__setattr__(self, "radius", radius)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def _project(self, p: np.ndarray) -> np.ndarray:
        offset = p - self.center
        norm = float(np.linalg.norm(offset))
        if norm <= self.radius:
            return p
        return self.center + offset * (self.radius / norm)

    def _distance(self, p: np.ndarray) -> float:
        return max(0.0, float(np.linalg.norm(p - self.center)) - self.radius)


@dataclass(frozen=True, eq=False)
class Intersection(FeasibleSet):
    """
    Finite intersection of convex sets. Intersections of strips are projected
    exactly by an active-set solve; any other member mix goes through Dykstra.
    """

    members: Tuple[FeasibleSet, ...]
    tol: float = DYKSTRA_TOL

    def __post_init__(self):
        members = tuple(_flatten(self.members))
        if not members:
            raise InvalidGeometry("an intersection needs at least one member")
        dim = members[0].dim
        for member in members[1:]:
            if member.dim != dim:
                raise DimensionMismatch(
                    "intersection members differ in dimension",
                    expected=dim,
                    got=member.dim,
                )
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, *sets: FeasibleSet) -> "Intersection":
        return cls(tuple(sets))

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def is_empty(self) -> bool:
        return any(member.is_empty for member in self.members)

    def _project(self, p: np.ndarray) -> np.ndarray:
        if all(member._distance(p) == 0.0 for member in self.members):
            return p
        if all(isinstance(member, Slab) for member in self.members):
            return project_onto_strips(
                np.vstack([member.direction for member in self.members]),
                [member.lower for member in self.members],
                [member.upper for member in self.members],
                p,
            )
        return dykstra_project(self.members, p, tol=self.tol)

    def _distance(self, p: np.ndarray) -> float:
        return float(np.linalg.norm(p - self._project(p)))

    def contains(self, p, tol: float = MEMBERSHIP_TOL) -> bool:
        point = self._checked(p)
        return all(member.contains(point, tol) for member in self.members)

    def lower_bound_distance(self, p) -> float:
        """Largest single-member distance; never exceeds the true distance."""
        point = self._checked(p)
        return max(member._distance(point) for member in self.members)

    def intersect(self, other: FeasibleSet) -> FeasibleSet:
        if isinstance(other, Slab) and not other.is_unbounded:
            merged = list(self.members)
            for index, member in enumerate(merged):
                if isinstance(member, Slab) and member.parallel_bounds(other) is not None:
                    merged[index] = member.intersect(other)
                    return Intersection(tuple(merged), tol=self.tol)
        if isinstance(other, Slab) and other.is_unbounded:
            return self
        return Intersection(self.members + (other,), tol=self.tol)


def _flatten(sets: Iterable[FeasibleSet]) -> Iterable[FeasibleSet]:
    for item in sets:
        if isinstance(item, Intersection):
            yield from item.members
        else:
            yield item


def project(feasible_set: FeasibleSet, p) -> np.ndarray:
    """Euclidean projection of `p` onto `feasible_set`."""
    return feasible_set.project(p)


def contains(feasible_set: FeasibleSet, p, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff `p` lies within distance `tol` of `feasible_set`."""
    return feasible_set.contains(p, tol)


def slab_distance(slab: Slab, p) -> float:
    """max(0, φᵀp - u, l - φᵀp): the distance from `p` to the slab."""
    return slab.distance(p)


def intersection_of(sets: Sequence[FeasibleSet]) -> FeasibleSet:
    """Single set for one member, an Intersection otherwise."""
    if len(sets) == 1:
        return sets[0]
    return Intersection(tuple(sets))
