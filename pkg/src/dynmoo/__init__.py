"""Dynamic multi-objective evolutionary optimization toolkit.

Response strategies for changing environments (center-point prediction with
memory and diversity, generational drift prediction, and classic baselines),
the FDA/dMOP/F benchmark problems, IGD/hypervolume quality indicators, and a
reproducible experiment harness.
"""

from .core import (
    Bounds,
    Individual,
    Population,
    TimeContext,
    crowding_distance,
    dominates,
    environmental_select,
    fast_nondominated_sort,
    nondominated_set,
    time_of,
)
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
