"""Region membership, convexity/slope verification and figure-data sampling."""

from dataclasses import dataclass

import numpy as np

from .fixedpoint import phi_hub, phi_leaf, phi_middle, tail_curve, tail_state_of_hub
from .meanfield import step_level
from .model import ModelParams, StarlikeTopology, as_level_state


def _require_three_levels(topo: StarlikeTopology):
    if topo.k != 3:
        raise ValueError("this operation is defined for 3-level topologies only")


def in_region_one(d, params: ModelParams, topo: StarlikeTopology) -> bool:
    """True iff the state strictly exceeds all three partial-fixed-point bounds."""
    _require_three_levels(topo)
    d = as_level_state(d, topo)
    x, y, z = d
    n1, n2 = topo.branching
    return bool(
        x > phi_hub(y, params, n1)
        and y > phi_middle(x, z, params, n2)
        and z > phi_leaf(y, params)
    )


def region_slice(z_level: float, grid_n: int, params: ModelParams,
                 topo: StarlikeTopology) -> np.ndarray:
    """Membership matrix of Region I on a uniform (x, y) grid at fixed z.

    Entry [i, j] is membership at x = i/(grid_n-1), y = j/(grid_n-1).
    """
    _require_three_levels(topo)
    if not (0.0 <= z_level <= 1.0):
        raise ValueError("z_level must lie in [0,1]")
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    xs = np.linspace(0.0, 1.0, grid_n)
    ys = np.linspace(0.0, 1.0, grid_n)
    n1, n2 = topo.branching
    x = xs[:, None]
    y = ys[None, :]
    return (
        (x > phi_hub(y, params, n1))
        & (y > phi_middle(x, np.full_like(x, z_level), params, n2))
        & (z_level > phi_leaf(y, params))
    )


def strict_decrease_check(d, params: ModelParams, topo: StarlikeTopology) -> bool:
    """True iff one map step strictly decreases every coordinate of a Region I point."""
    _require_three_levels(topo)
    d = as_level_state(d, topo)
    if not in_region_one(d, params, topo):
        raise ValueError("state is not in Region I")
    return bool(np.all(step_level(d, params, topo) < d))


@dataclass
class ConvexityReport:
    grid: np.ndarray
    min_second_difference: float
    max_second_difference: float
    verdict: str  # "convex" | "concave" | "indeterminate"


def check_convexity(f, domain, grid_n: int, tol: float = 1e-12) -> ConvexityReport:
    """Classify a scalar function by central second differences on a uniform grid.

    A function passing both checks (affine) is reported convex; that tie rule
    is arbitrary but fixed.
    """
    lo, hi = domain
    if not lo < hi:
        raise ValueError("domain must satisfy lo < hi")
    if grid_n < 3:
        raise ValueError("grid_n must be >= 3")
    grid = np.linspace(lo, hi, grid_n)
    vals = np.array([float(f(t)) for t in grid])
    second = vals[:-2] - 2.0 * vals[1:-1] + vals[2:]
    mn, mx = float(second.min()), float(second.max())
    if mn >= -tol:
        verdict = "convex"
    elif mx <= tol:
        verdict = "concave"
    else:
        verdict = "indeterminate"
    return ConvexityReport(grid=grid, min_second_difference=mn,
                           max_second_difference=mx, verdict=verdict)


def tail_composition(d1: float, params: ModelParams, topo: StarlikeTopology) -> float:
    """Level-2 coordinate of the tail curve as a function of the hub coordinate.

    This is the direction in which the composed curve is concave.
    """
    return float(tail_state_of_hub(d1, params, topo)[1])


@dataclass
class SlopeReport:
    hub_slope: float        # closed form b*n1/(1-a)
    tail_slope: float       # closed form ((1-a)^2 - b^2*n2) / (b*(1-a))
    hub_slope_fd: float
    tail_slope_fd: float


def slopes_at_zero(params: ModelParams, topo: StarlikeTopology,
                   step: float = 1e-7) -> SlopeReport:
    """Closed-form slopes at the origin of the two intersection curves, plus
    one-sided finite-difference estimates (curves vanish at 0, so the secant
    through the origin suffices)."""
    _require_three_levels(topo)
    a, b = params.a, params.b
    n1, n2 = topo.branching
    hub_slope = b * n1 / (1.0 - a)
    tail_slope = ((1.0 - a) ** 2 - b * b * n2) / (b * (1.0 - a))
    hub_fd = float(phi_hub(step, params, n1)) / step
    tail_fd = float(tail_curve(step, params, topo)[0]) / step
    return SlopeReport(hub_slope=hub_slope, tail_slope=tail_slope,
                       hub_slope_fd=hub_fd, tail_slope_fd=tail_fd)


def sample_curves(params: ModelParams, topo: StarlikeTopology, grid_n: int,
                  t_min: float = 1e-3) -> np.ndarray:
    """Sample both intersection curves on a grid of the curve parameter.

    Columns: t, hub-curve d1 (= phi_hub at the tail curve's d2), tail-curve
    d1, tail-curve d2.  Interior sign changes of column2 - column1 count the
    nontrivial fixed points.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    ts = np.linspace(t_min, 1.0, grid_n)
    d = tail_curve(ts, params, topo)
    hub_curve = phi_hub(d[:, 1], params, topo.branching[0])
    return np.column_stack([ts, hub_curve, d[:, 0], d[:, 1]])
