"""Independent numerical eigen-solver for the full squared wave equation.

The radial problem is integrated as psi'' = U(r) psi with U expanded directly
from the potentials,

    U(r) = (m + V_S)^2 - (E - V_V)^2
         = kappa^2 + q1/r + q2/r^2 + q3/r^3 + q4/r^4,   kappa^2 = m^2 - E^2,

so every local index (origin power, decay rates, turning points) is recomputed
from U itself.  Nothing here consumes the closed-form coefficients of the
analytic spectrum: this module has to be able to falsify them.

Eigenvalues are located by two-sided shooting: integrate outward from near the
origin with the asymptotic seed of the regular solution, inward from far
outside the classically allowed region with the decaying seed, and drive the
normalized Wronskian of the two solutions at an interior matching radius to
zero.  Both sweep directions are dominance-stable, so seed truncation errors
decay as the integration proceeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._radial import STATUS_OK, sweep, u_eval
from .errors import ConvergenceError, DomainError, FallToCenterError, NoBoundStateError
from .model import PotentialParams
from .spectrum import EnergyLevel, SolverConfig, solve_levels

__all__ = [
    "GridConfig",
    "ShootingResult",
    "DeviationReport",
    "kg_match_defect",
    "kg_eigensolve",
    "deviation_report",
]

_TINY = 1e-300


@dataclass(frozen=True)
class GridConfig:
    """Discretization rules for the shooting integrations.

    steps sets the maximum step h_max = (r_max - r_min)/steps; the adaptive
    controller refines below it under ``integrator_tolerance`` local error.
    The origin radius is chosen so the decaying origin factor contributes
    ``origin_exponent`` e-folds; the outer radius covers ``tail_lengths``
    decay lengths 1/kappa and ``peak_factor`` times the turning-region scale.
    """

    steps: int = 4000
    integrator_tolerance: float = 1e-10
    origin_exponent: float = 30.0
    tail_lengths: float = 50.0
    peak_factor: float = 10.0
    energy_scan_points: int = 61
    defect_tolerance: float = 1e-5

    def __post_init__(self):
        if self.steps < 1000:
            raise ValueError("steps must be >= 1000")
        if self.integrator_tolerance <= 0 or self.defect_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.energy_scan_points < 8:
            raise ValueError("energy_scan_points must be >= 8")


@dataclass(frozen=True)
class ShootingResult:
    """Matched eigenvalue with its shooting diagnostics."""

    energy: float
    node_count: int
    match_defect: float
    bracket: tuple[float, float]
    grid: GridConfig
    defect_evaluations: int = 0


@dataclass(frozen=True)
class DeviationReport:
    """Closed-form (implicit-equation) level versus the shooting eigenvalue."""

    n: int
    branch: str
    analytic_energy: float
    oracle_energy: float
    deviation: float
    analytic_level: EnergyLevel
    shooting: ShootingResult


def u_series(params: PotentialParams, energy: float):
    """Coefficients (kappa2, q1, q2, q3, q4) of U(r), straight from V_S, V_V."""
    kappa2 = params.m * params.m - energy * energy
    q4 = params.a1 * params.a1 - params.a2 * params.a2
    q3 = -2.0 * (params.a1 * params.b1 - params.a2 * params.b2)
    q2 = 2.0 * (params.m * params.a1 + energy * params.a2) \
        + params.b1 * params.b1 - params.b2 * params.b2
    q1 = -2.0 * (params.m * params.b1 + energy * params.b2)
    return kappa2, q1, q2, q3, q4


def _origin_guard(q2: float, q3: float, q4: float) -> None:
    """Reject supercritical origins: attraction stronger than -1/(4 r^2)."""
    if q4 < 0.0:
        raise FallToCenterError(
            f"U ~ {q4}/r^4 at the origin: attractive inverse-quartic, fall to center"
        )
    if q4 == 0.0 and q3 < 0.0:
        raise FallToCenterError(
            f"U ~ {q3}/r^3 at the origin: attractive inverse-cube, fall to center"
        )
    if q4 == 0.0 and q3 == 0.0 and q2 <= -0.25:
        raise FallToCenterError(
            f"inverse-square coefficient {q2} <= -1/4 at the origin: "
            "no self-adjoint ground state"
        )


@dataclass(frozen=True)
class _Domain:
    r_min: float
    r_match: float
    r_max: float
    h_max: float
    max_steps: int
    e_reference: float = field(default=0.0)


def _outward_seed(params: PotentialParams, energy: float, r_min: float):
    """(psi, dpsi) of the regular solution at r_min, up to overall scale."""
    kappa2, q1, q2, q3, q4 = u_series(params, energy)
    _origin_guard(q2, q3, q4)
    if q4 > 0.0:
        a_u = math.sqrt(q4)
        power = 1.0 + q3 / (2.0 * a_u)
        log_deriv = a_u / (r_min * r_min) + power / r_min
    elif q3 > 0.0:
        log_deriv = 0.75 / r_min + math.sqrt(q3) / r_min ** 1.5
    else:
        p = 0.5 + math.sqrt(0.25 + q2)
        b1 = q1 / (2.0 * p)
        log_deriv = (p + (p + 1.0) * b1 * r_min) / (r_min * (1.0 + b1 * r_min))
    return 1.0, log_deriv


def _domain(params: PotentialParams, energy: float, grid: GridConfig) -> _Domain:
    """Fix the integration geometry (radii and step cap) at one reference E."""
    kappa2, q1, q2, q3, q4 = u_series(params, energy)
    if kappa2 <= 0.0:
        raise DomainError(f"shooting needs E^2 < m^2, got E={energy}, m={params.m}")
    _origin_guard(q2, q3, q4)
    kappa = math.sqrt(kappa2)

    # Outer radius: far beyond both the decay scale and the turning region.
    r_turn = 0.0
    if q1 < 0.0:
        r_turn = -q1 / kappa2
    if q2 < 0.0:
        r_turn = max(r_turn, math.sqrt(-q2) / kappa)
    r_max = max(grid.tail_lengths / kappa, grid.peak_factor * r_turn)

    # Origin radius per the dominant balance of U near r = 0.
    if q4 > 0.0:
        r_min = math.sqrt(q4) / grid.origin_exponent
    elif q3 > 0.0:
        r_min = 4.0 * q3 / (grid.origin_exponent * grid.origin_exponent)
    else:
        p = 0.5 + math.sqrt(0.25 + q2)
        b1 = abs(q1) / (2.0 * p)
        r_min = min(1e-3 / (1.0 + b1), 1e-3 / (1.0 + kappa))
    r_min = min(r_min, 1e-3 * r_max)

    # Matching radius: geometric middle of the classically allowed region,
    # where both shooting solutions are large and the Wronskian is best
    # conditioned; fall back to the (clamped) minimum of U if U >= 0.
    radii = np.geomspace(max(r_min, 1e-12), r_max, 600)
    u_vals = np.array([u_eval(kappa2, q1, q2, q3, q4, r) for r in radii])
    negative = np.nonzero(u_vals < 0.0)[0]
    if negative.size:
        inner = max(radii[negative[0]], 2.0 * r_min)
        outer = radii[negative[-1]]
        r_match = math.sqrt(inner * outer)
    else:
        r_match = radii[int(np.argmin(u_vals))]
    r_match = min(max(r_match, 4.0 * r_min), 0.25 * r_max)

    h_max = (r_max - r_min) / grid.steps
    return _Domain(
        r_min=r_min,
        r_match=r_match,
        r_max=r_max,
        h_max=h_max,
        max_steps=200 * grid.steps,
        e_reference=energy,
    )


def _defect_on_domain(params, energy, grid: GridConfig, dom: _Domain):
    """Normalized Wronskian defect and node count on a fixed geometry."""
    kappa2, q1, q2, q3, q4 = u_series(params, energy)
    if kappa2 <= 0.0:
        raise DomainError(f"shooting needs E^2 < m^2, got E={energy}")
    kappa = math.sqrt(kappa2)

    y0, log_deriv = _outward_seed(params, energy, dom.r_min)
    y_out, dy_out, nodes_out, status_out, _ = sweep(
        kappa2, q1, q2, q3, q4,
        dom.r_min, dom.r_match, y0, log_deriv * y0,
        dom.h_max, grid.integrator_tolerance, dom.max_steps,
    )
    if status_out != STATUS_OK:
        raise ConvergenceError(
            f"outward integration failed (status {status_out}) at E={energy}"
        )

    sigma = -q1 / (2.0 * kappa)
    tail_log_deriv = -kappa + sigma / dom.r_max
    y_in, dy_in, nodes_in, status_in, _ = sweep(
        kappa2, q1, q2, q3, q4,
        dom.r_max, dom.r_match, 1.0, tail_log_deriv,
        dom.h_max, grid.integrator_tolerance, dom.max_steps,
    )
    if status_in != STATUS_OK:
        raise ConvergenceError(
            f"inward integration failed (status {status_in}) at E={energy}"
        )

    cross_a = dy_out * y_in
    cross_b = y_out * dy_in
    defect = (cross_a - cross_b) / (abs(cross_a) + abs(cross_b) + _TINY)
    return defect, nodes_out + nodes_in


def kg_match_defect(
    params: PotentialParams, energy: float, grid: GridConfig | None = None
) -> tuple[float, int]:
    """Shooting mismatch at one trial energy.

    The defect is a continuous function of E that changes sign across every
    eigenvalue; the node count is the number of interior zeros of the
    outward/inward composite solution.
    """
    grid = grid or GridConfig()
    dom = _domain(params, energy, grid)
    return _defect_on_domain(params, energy, grid, dom)


def _reference_domain(params, lo, hi, grid) -> _Domain:
    """Geometry for a bracket: fixed radii keep the defect continuous in E."""
    last_error: Exception | None = None
    for e_ref in (0.5 * (lo + hi), lo, hi):
        try:
            return _domain(params, e_ref, grid)
        except FallToCenterError as exc:
            last_error = exc
    raise last_error  # supercritical across the whole bracket


def kg_eigensolve(
    params: PotentialParams,
    n: int,
    bracket: tuple[float, float],
    grid: GridConfig | None = None,
) -> ShootingResult | None:
    """Search one energy bracket for the eigenvalue with exactly n nodes.

    Returns None when no matching eigenvalue lies in the bracket (this is a
    result, not a failure); raises ConvergenceError when an integration or
    the refinement itself breaks down.
    """
    grid = grid or GridConfig()
    if n < 0 or int(n) != n:
        raise DomainError(f"node count target must be a nonnegative integer, got {n!r}")
    n = int(n)
    m = params.m
    lo = max(min(bracket), -m + 1e-9 * m)
    hi = min(max(bracket), m - 1e-9 * m)
    if not lo < hi:
        raise DomainError(f"bracket {bracket} does not intersect (-m, m)")

    dom = _reference_domain(params, lo, hi, grid)
    evaluations = 0

    def defect_at(e: float):
        nonlocal evaluations
        evaluations += 1
        return _defect_on_domain(params, e, grid, dom)

    energies = np.linspace(lo, hi, grid.energy_scan_points)
    samples: list[tuple[float, float, int] | None] = []
    for e in energies:
        try:
            d, nodes = defect_at(float(e))
            samples.append((float(e), d, nodes))
        except FallToCenterError:
            samples.append(None)

    tol_e = 1e-8 * m
    for left, right in zip(samples, samples[1:]):
        if left is None or right is None:
            continue
        e_lo, d_lo, nodes_lo = left
        e_hi, d_hi, nodes_hi = right
        if d_lo == 0.0:
            d_lo = -d_hi  # grid point exactly on the eigenvalue
        if (d_lo < 0.0) == (d_hi < 0.0):
            continue
        if not (min(nodes_lo, nodes_hi) <= n <= max(nodes_lo, nodes_hi)):
            continue
        a, b, d_a = e_lo, e_hi, d_lo
        while b - a > tol_e:
            mid = 0.5 * (a + b)
            d_mid, _ = defect_at(mid)
            if d_mid == 0.0:
                a = b = mid
                break
            if (d_mid < 0.0) == (d_a < 0.0):
                a, d_a = mid, d_mid
            else:
                b = mid
        e_star = 0.5 * (a + b)
        defect_star, nodes_star = defect_at(e_star)
        if nodes_star != n:
            continue
        return ShootingResult(
            energy=e_star,
            node_count=nodes_star,
            match_defect=defect_star,
            bracket=(a, b),
            grid=grid,
            defect_evaluations=evaluations,
        )
    return None


def deviation_report(
    params: PotentialParams,
    n: int,
    grid: GridConfig | None = None,
    config: SolverConfig | None = None,
    branch: str = "particle",
) -> DeviationReport:
    """Compare the implicit-equation level against the shooting eigenvalue.

    The shooting search is seeded with a bracket around the closed-form value
    and widened geometrically until the eigenvalue is captured.  Failures are
    labeled by their source ("analytic:" for the implicit solve, "oracle:" for
    the shooting solve).
    """
    grid = grid or GridConfig()
    try:
        levels = [lvl for lvl in solve_levels(params, n, config) if lvl.branch == branch]
    except (DomainError, ConvergenceError) as exc:
        raise type(exc)(f"analytic: {exc}") from exc
    if not levels:
        raise NoBoundStateError(f"analytic: no {branch} level exists at n={n}")
    level = max(levels, key=lambda lvl: lvl.energy) if branch == "particle" \
        else min(levels, key=lambda lvl: lvl.energy)
    e_analytic = level.energy

    m = params.m
    width = max(0.4 * (m - abs(e_analytic)), 1e-3 * m)
    result = None
    try:
        for _attempt in range(6):
            bracket = (e_analytic - width, e_analytic + width)
            result = kg_eigensolve(params, n, bracket, grid)
            if result is not None:
                break
            width *= 2.0
            if width > 2.0 * m:
                break
    except (DomainError, ConvergenceError) as exc:
        raise type(exc)(f"oracle: {exc}") from exc
    if result is None:
        raise NoBoundStateError(
            f"oracle: no {n}-node eigenvalue found near E={e_analytic}"
        )
    return DeviationReport(
        n=n,
        branch=branch,
        analytic_energy=e_analytic,
        oracle_energy=result.energy,
        deviation=abs(e_analytic - result.energy),
        analytic_level=level,
        shooting=result,
    )
