"""Thresholds, partial-fixed-point functions, tail curve and the dual solver."""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .meanfield import iterate, step_level
from .model import ModelParams, StarlikeTopology


class SolverInvariantError(RuntimeError):
    """An internal solver invariant failed (e.g. no bracket in the supercritical regime)."""


class RegimeKind(enum.Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    b_crit: float


@dataclass
class FixedPointReport:
    regime: Regime
    trivial_point: np.ndarray
    nontrivial_point: Optional[np.ndarray]
    iteration_residual: float
    curve_root_residual: float
    agreement: float


def critical_b(a: float, branching) -> float:
    """Critical transmission probability (1 - a) / sqrt(n1 + ... + n_{k-1})."""
    if not (0.0 < a < 1.0):
        raise ValueError(f"a must be in (0,1), got {a}")
    branching = tuple(int(n) for n in branching)
    if len(branching) == 0 or any(n < 1 for n in branching):
        raise ValueError(f"invalid branching vector {branching}")
    return (1.0 - a) / np.sqrt(sum(branching))


def classify_regime(params: ModelParams, topo: StarlikeTopology, eq_tol: float = 0.0) -> Regime:
    """Compare b against the critical threshold; ties within eq_tol classify as critical."""
    if eq_tol < 0:
        raise ValueError("eq_tol must be >= 0")
    bc = critical_b(params.a, topo.branching)
    if params.b < bc - eq_tol:
        kind = RegimeKind.SUBCRITICAL
    elif params.b <= bc + eq_tol:
        kind = RegimeKind.CRITICAL
    else:
        kind = RegimeKind.SUPERCRITICAL
    return Regime(kind=kind, b_crit=bc)


def phi_hub(d2, params: ModelParams, n1: int):
    """Hub partial fixed point: d1 such that the hub coordinate is invariant."""
    a, b = params.a, params.b
    q = (1.0 - b * np.asarray(d2, dtype=float)) ** n1
    return (1.0 - q) / (1.0 - a * q)


def phi_hub_inverse(d1, params: ModelParams, n1: int):
    """Hub curve expressed as d2 versus d1, inverting phi_hub in closed form.

    This is the direction in which the hub curve is convex; phi_hub itself is
    concave as a function of d2.  Values can exceed 1 near d1 = 1 (the curve
    reaches d2 = 1/b there), which callers compare against the unit interval.
    """
    a, b = params.a, params.b
    x = np.asarray(d1, dtype=float)
    q = (1.0 - x) / (1.0 - a * x)
    return (1.0 - q ** (1.0 / n1)) / b


def phi_middle(d_prev, d_next, params: ModelParams, n_m: int):
    """Middle-level partial fixed point given the two adjacent levels."""
    a, b = params.a, params.b
    q = (1.0 - b * np.asarray(d_prev, dtype=float)) * (1.0 - b * np.asarray(d_next, dtype=float)) ** n_m
    return (1.0 - q) / (1.0 - a * q)


def phi_leaf(d_prev, params: ModelParams):
    """Leaf partial fixed point given the parent level."""
    a, b = params.a, params.b
    d_prev = np.asarray(d_prev, dtype=float)
    return b * d_prev / (1.0 - a + a * b * d_prev)


def tail_curve(t, params: ModelParams, topo: StarlikeTopology) -> np.ndarray:
    """Full state on the tail-consistency curve, parameterized by t = d_{k-1}.

    Levels 2..k satisfy their partial-fixed-point equations exactly; the hub
    value is whatever the chain of solved equations produces and may leave
    [0,1] (returned raw -- the root finder needs the sign).  Scalar t gives a
    (k,) vector, an array of shape (...,) gives (..., k).
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0.0) or np.any(t_arr > 1.0):
        raise ValueError("curve parameter t must lie in (0, 1]")
    a, b = params.a, params.b
    k = topo.k
    n = topo.branching
    d = np.empty(t_arr.shape + (k,))
    d[..., k - 2] = t_arr
    d[..., k - 1] = phi_leaf(t_arr, params)
    # Solve each middle equation for the level above, walking toward the hub.
    with np.errstate(divide="ignore", invalid="ignore"):
        for m in range(k - 1, 1, -1):
            dm = d[..., m - 1]
            dnext = d[..., m]
            d[..., m - 2] = 1.0 / b + (dm - 1.0) / (
                b * (1.0 - a * dm) * (1.0 - b * dnext) ** n[m - 1]
            )
    return d


def hub_gap(t, params: ModelParams, topo: StarlikeTopology):
    """Signed mismatch d1_curve - phi_hub(d2_curve) along the tail curve.

    Its roots on (0, 1] are the nontrivial fixed points of the reduced map.
    """
    d = tail_curve(t, params, topo)
    return d[..., 0] - phi_hub(d[..., 1], params, topo.branching[0])


def tail_state_of_hub(d1: float, params: ModelParams, topo: StarlikeTopology,
                      t_min: float = 1e-14) -> np.ndarray:
    """Tail-curve state whose hub value equals d1, on the first rising branch.

    Inverts t -> d1_curve(t) by bracketed bisection starting from t_min and
    expanding geometrically; used to express the tail composition as a
    function of the hub coordinate.
    """
    if d1 <= 0.0:
        raise ValueError("d1 must be positive")

    def f(t):
        return float(tail_curve(t, params, topo)[0]) - d1

    lo = t_min
    if f(lo) >= 0.0:
        raise SolverInvariantError(f"hub inversion: d1={d1} below curve start at t={t_min}")
    hi = lo
    while True:
        nxt = min(hi * 1.5, 1.0)
        v = f(nxt)
        if np.isfinite(v) and v >= 0.0:
            hi = nxt
            break
        if not np.isfinite(v) or nxt >= 1.0:
            raise SolverInvariantError(f"hub inversion: no bracket for d1={d1}")
        hi = nxt
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return tail_curve(0.5 * (lo + hi), params, topo)


def _bracket_root(params: ModelParams, topo: StarlikeTopology,
                  t_start: float = 1e-9, grid_points: int = 4096):
    """Locate the first sign change of hub_gap on a geometric grid of (t_start, 1]."""
    ts = np.geomspace(t_start, 1.0, grid_points)
    h = hub_gap(ts, params, topo)
    finite = np.isfinite(h)
    for i in range(len(ts) - 1):
        if finite[i] and finite[i + 1] and h[i] * h[i + 1] < 0.0:
            return ts[i], ts[i + 1]
        if finite[i + 1] and h[i + 1] == 0.0:
            return ts[i + 1], ts[i + 1]
    return None


def _bisect_root(params, topo, lo, hi, width: float = 1e-14) -> float:
    flo = float(hub_gap(lo, params, topo))
    if flo == 0.0 or lo == hi:
        return lo
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        fm = float(hub_gap(mid, params, topo))
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _residual(d, params, topo) -> float:
    return float(np.max(np.abs(step_level(d, params, topo) - d)))


def solve_fixed_point(params: ModelParams, topo: StarlikeTopology,
                      tol: float = 1e-12) -> FixedPointReport:
    """Classify the regime and, above threshold, find the nontrivial fixed point two ways.

    Route (i) iterates the reduced map from the all-ones state; route (ii)
    bisects the tail-curve mismatch.  Their sup-norm distance is reported as
    `agreement`.  A missing bracket above threshold contradicts uniqueness and
    raises SolverInvariantError.
    """
    regime = classify_regime(params, topo)
    trivial = np.zeros(topo.k)
    if regime.kind is not RegimeKind.SUPERCRITICAL:
        return FixedPointReport(
            regime=regime,
            trivial_point=trivial,
            nontrivial_point=None,
            iteration_residual=0.0,
            curve_root_residual=0.0,
            agreement=0.0,
        )

    traj = iterate(np.ones(topo.k), params, topo, tol=tol, max_iter=10**6)
    point_iter = traj.limit
    # Polish: a few extra map applications push the iterate to the
    # floating-point limit without changing the contract.
    for _ in range(200):
        point_iter = step_level(point_iter, params, topo)
    iteration_residual = _residual(point_iter, params, topo)

    bracket = _bracket_root(params, topo)
    if bracket is None:
        raise SolverInvariantError(
            "supercritical regime but no sign change of the tail-curve mismatch on (1e-9, 1]; "
            f"a={params.a}, b={params.b}, branching={topo.branching}, b_crit={regime.b_crit}"
        )
    t_root = _bisect_root(params, topo, *bracket)
    point_curve = tail_curve(t_root, params, topo)
    curve_root_residual = _residual(np.clip(point_curve, 0.0, 1.0), params, topo)

    agreement = float(np.max(np.abs(point_iter - point_curve)))
    return FixedPointReport(
        regime=regime,
        trivial_point=trivial,
        nontrivial_point=point_iter,
        iteration_residual=iteration_residual,
        curve_root_residual=curve_root_residual,
        agreement=agreement,
    )
