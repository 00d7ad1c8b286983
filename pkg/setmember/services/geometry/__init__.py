from setmember.services.geometry.dykstra import dykstra_project
from setmember.services.geometry.polytope import distance_to_strips, project_onto_strips
from setmember.services.geometry.sets import (
    Ball,
    Box,
    FeasibleSet,
    Halfspace,
    Intersection,
    Slab,
    as_vector,
    contains,
    intersection_of,
    project,
    slab_distance,
)

__all__ = [
    "Ball",
    "Box",
    "FeasibleSet",
    "Halfspace",
    "Intersection",
    "Slab",
    "as_vector",
    "contains",
    "distance_to_strips",
    "dykstra_project",
    "intersection_of",
    "project",
    "project_onto_strips",
    "slab_distance",
]
