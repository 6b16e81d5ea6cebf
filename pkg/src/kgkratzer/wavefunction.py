"""Ground-state wavefunction, superpotentials and decomposition residuals.

The full ground state factorizes as psi = chi * phi with

    chi(r) = r^(c+1) * exp(-k*r / (2*(c+1)))     (nonrelativistic factor)
    phi(r) = exp(-a/r)                           (short-range correction)

and superpotentials W = -chi'/chi, dW = -phi'/phi = -a/r^2, W_susy = W + dW
(unit-factor convention: no sqrt(2m) scaling anywhere).

Two residual identities quantify where the factorized spectrum is exact:

* chi identity (unconditional): chi''/chi - [2*(m*V_S + E*V_V) - eps0] == 0
  by construction, so its sampled residual measures pure roundoff.
* phi identity: phi''/phi + 2*(chi'/chi)*(phi'/phi) - (V_S^2 - V_V^2)
  collapses to M3/r^3 + M2/r^2 with

      M3 = 2*a*c + 2*(a1*b1 - a2*b2)
      M2 = -a*k/(c+1) - (b1^2 - b2^2)

  (the 1/r^4 parts cancel identically because a^2 = a1^2 - a2^2).  Both
  coefficients vanish exactly on the V_V = +-V_S manifolds, which is where
  the closed-form spectrum is an exact eigenvalue set; elsewhere M3, M2
  measure the defect.

All residuals are evaluated through logarithmic-derivative algebra (never
numerical differentiation) and are normalized by the largest individual term
entering them at each radius, so the reported numbers are scale-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, QuadratureError
from .model import PotentialParams, derived_coefficients, potentials_at

__all__ = [
    "GroundStateEval",
    "ResidualReport",
    "QuadratureConfig",
    "NormalizationResult",
    "eval_ground_state",
    "residual_report",
    "mismatch_coefficients",
    "normalization",
    "chi_peak_radius",
]

_TINY = 1e-300


@dataclass(frozen=True)
class GroundStateEval:
    """Pointwise ground-state factors and superpotentials at one radius."""

    r: float
    chi: float
    phi: float
    psi: float
    w: float
    dw: float
    w_susy: float


@dataclass(frozen=True)
class ResidualReport:
    """Sampled decomposition residuals plus their closed-form structure.

    Samples hold (r, relative residual).  ``eq1_samples`` stores the
    composite residual per unit wavefunction, i.e. R1(r)/psi(r), normalized
    like the others.  ``chi_identity_max``, ``phi_structure_max`` and
    ``composite_factorization_max`` are the worst deviations of each identity
    from its exact closed form; ``quartic_cancellation`` is the relative
    residue of a^2 - (a1^2 - a2^2).
    """

    m3: float
    m2: float
    eq3_samples: tuple[tuple[float, float], ...]
    eq4_samples: tuple[tuple[float, float], ...]
    eq1_samples: tuple[tuple[float, float], ...]
    on_exact_manifold: bool
    chi_identity_max: float
    phi_structure_max: float
    composite_factorization_max: float
    quartic_cancellation: float
    c_diagnostic_consistent: float | None


def _coefficients_or_raise(params: PotentialParams, energy: float):
    coeffs = derived_coefficients(params, energy)
    if coeffs.a is None:
        raise DomainError("a undefined: a1^2 < a2^2")
    if coeffs.c is None:
        raise DomainError(
            f"centrifugal index undefined at E={energy}: radicand "
            f"{coeffs.centrifugal_radicand} < 0"
        )
    return coeffs


def chi_peak_radius(c: float, k: float) -> float:
    """Radius where chi (and, for a = 0, psi) is maximal: 2*(c+1)^2/k."""
    if k <= 0.0:
        raise DomainError(f"peak radius needs k > 0, got k={k}")
    return 2.0 * (c + 1.0) ** 2 / k


def eval_ground_state(params: PotentialParams, energy: float, r: float) -> GroundStateEval:
    """Evaluate chi, phi, psi and the superpotentials at radius r > 0.

    Requires c >= 0 and k > 0 (normalizable configuration); a = 0 simply
    gives phi == 1.  The factors are unnormalized.
    """
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got r={r!r}")
    coeffs = _coefficients_or_raise(params, energy)
    a, c, k = coeffs.a, coeffs.c, coeffs.k
    if c < 0.0:
        raise DomainError(f"ground-state factor needs c >= 0, got c={c}")
    if k <= 0.0:
        raise DomainError(f"ground-state factor needs k > 0, got k={k}")

    chi = r ** (c + 1.0) * math.exp(-k * r / (2.0 * (c + 1.0)))
    phi = math.exp(-a / r)
    w = -(c + 1.0) / r + k / (2.0 * (c + 1.0))
    dw = -a / (r * r)
    return GroundStateEval(r=r, chi=chi, phi=phi, psi=chi * phi, w=w, dw=dw, w_susy=w + dw)


def mismatch_coefficients(params: PotentialParams, energy: float) -> tuple[float, float]:
    """Closed-form (M3, M2) of the phi-identity defect at (params, energy)."""
    coeffs = _coefficients_or_raise(params, energy)
    a, c, k = coeffs.a, coeffs.c, coeffs.k
    m3 = 2.0 * a * c + 2.0 * (params.a1 * params.b1 - params.a2 * params.b2)
    m2 = -a * k / (c + 1.0) - (params.b1 ** 2 - params.b2 ** 2)
    return m3, m2


def residual_report(params: PotentialParams, energy: float, sample_radii) -> ResidualReport:
    """Sample all three decomposition residuals on the given radii.

    The composite samples are meaningful as a factorization check only when
    ``energy`` solves the implicit spectrum equation; the chi and phi
    identities are energy-agnostic.
    """
    coeffs = _coefficients_or_raise(params, energy)
    a, c, k = coeffs.a, coeffs.c, coeffs.k
    eps0 = coeffs.epsilon_n
    m, e = params.m, energy
    m3, m2 = mismatch_coefficients(params, energy)

    a_sq_target = params.a1 ** 2 - params.a2 ** 2
    quartic = abs(a * a - a_sq_target) / max(a * a, abs(a_sq_target), _TINY)

    # The phi-identity defect collapses to M3/r^3 + M2/r^2; M3 = 0 is the
    # consistency condition the ratio definition of c would need, with the
    # opposite sign: c = (a2*b2 - a1*b1)/a.
    c_consistent = None
    if a > 0.0:
        c_consistent = (params.a2 * params.b2 - params.a1 * params.b1) / a

    eq3, eq4, eq1 = [], [], []
    worst3 = worst4 = worst1 = 0.0
    for r in sample_radii:
        if not r > 0.0:
            raise DomainError(f"sample radius must be positive, got {r!r}")
        r = float(r)
        v_s, v_v, _ = potentials_at(params, e, r)

        dlchi = (c + 1.0) / r - k / (2.0 * (c + 1.0))
        t_sq = dlchi * dlchi
        t_curv = -(c + 1.0) / (r * r)
        t_pot = 2.0 * (m * v_s + e * v_v)
        t_eps = -eps0
        scale3 = max(abs(t_sq), abs(t_curv), abs(t_pot), abs(t_eps), _TINY)
        rel3 = ((t_sq + t_curv) - (t_pot + t_eps)) / scale3
        eq3.append((r, rel3))
        worst3 = max(worst3, abs(rel3))

        dlphi = a / (r * r)
        u_sq = dlphi * dlphi
        u_curv = -2.0 * a / (r * r * r)
        u_cross = 2.0 * dlchi * dlphi
        v_s2, v_v2 = v_s * v_s, v_v * v_v
        scale4 = max(abs(u_sq), abs(u_curv), abs(u_cross), v_s2, v_v2, _TINY)
        raw4 = (u_sq + u_curv + u_cross) - (v_s2 - v_v2)
        rel4 = raw4 / scale4
        eq4.append((r, rel4))
        structure = m3 / r ** 3 + m2 / r ** 2
        worst4 = max(worst4, abs(raw4 - structure) / scale4)

        dlpsi = dlchi + dlphi
        psi_curv = t_curv + u_curv
        lhs = dlpsi * dlpsi + psi_curv           # psi''/psi
        mass_term = (m + v_s) ** 2
        energy_term = (e - v_v) ** 2
        scale1 = max(abs(dlpsi * dlpsi), abs(psi_curv), mass_term, energy_term, _TINY)
        r1_over_psi = (mass_term - energy_term) - lhs
        eq1.append((r, r1_over_psi / scale1))
        worst1 = max(worst1, abs(r1_over_psi + structure) / scale1)

    m3_scale = max(abs(2.0 * a * c), 2.0 * abs(params.a1 * params.b1),
                   2.0 * abs(params.a2 * params.b2), _TINY)
    m2_scale = max(abs(a * k / (c + 1.0)), params.b1 ** 2, params.b2 ** 2, _TINY)
    on_manifold = abs(m3) / m3_scale < 1e-12 and abs(m2) / m2_scale < 1e-12

    return ResidualReport(
        m3=m3,
        m2=m2,
        eq3_samples=tuple(eq3),
        eq4_samples=tuple(eq4),
        eq1_samples=tuple(eq1),
        on_exact_manifold=on_manifold,
        chi_identity_max=worst3,
        phi_structure_max=worst4,
        composite_factorization_max=worst1,
        quartic_cancellation=quartic,
        c_diagnostic_consistent=c_consistent,
    )


@dataclass(frozen=True)
class QuadratureConfig:
    """Adaptive-Simpson settings for the normalization integral."""

    rel_tolerance: float = 1e-10
    max_depth: int = 60
    tail_exponent: float = 120.0

    def __post_init__(self):
        if self.rel_tolerance <= 0 or self.max_depth < 4 or self.tail_exponent < 40:
            raise ValueError("invalid quadrature configuration")


@dataclass(frozen=True)
class NormalizationResult:
    """Normalization integral of psi^2 with its refinement error estimate.

    ``closed_form_integral`` carries Gamma(2c+3) * ((c+1)/k)^(2c+3) whenever
    a = 0, where that closed form is exact; it is the independent cross-check
    of the quadrature.
    """

    integral: float
    norm_constant: float
    error_estimate: float
    closed_form_integral: float | None
    peak_radius: float
    evaluations: int


def _adaptive_simpson(f, lo, hi, tol, max_depth):
    """Adaptive Simpson with Richardson acceptance |S2 - S1|/15 <= tol_local."""
    evals = [0]

    def g(x):
        evals[0] += 1
        return f(x)

    def recurse(x0, x2, f0, f1, f2, whole, tol_local, depth):
        x1l = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + x1l)
        xr = 0.5 * (x1l + x2)
        fl, fr = g(xl), g(xr)
        h = x2 - x0
        left = h / 12.0 * (f0 + 4.0 * fl + f1)
        right = h / 12.0 * (f1 + 4.0 * fr + f2)
        delta = left + right - whole
        # Safety factor 10 on the Richardson criterion so the summed true
        # error stays below the requested tolerance, not just near it.
        if abs(delta) <= 1.5 * tol_local or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 1.5 * tol_local:
                raise QuadratureError(
                    f"adaptive quadrature stalled on [{x0}, {x2}]: "
                    f"refinement delta {delta} above tolerance {tol_local}"
                )
            return left + right + delta / 15.0, abs(delta) / 15.0
        vl, el = recurse(x0, x1l, f0, fl, f1, left, 0.5 * tol_local, depth + 1)
        vr, er = recurse(x1l, x2, f1, fr, f2, right, 0.5 * tol_local, depth + 1)
        return vl + vr, el + er

    f0, f1, f2 = g(lo), g(0.5 * (lo + hi)), g(hi)
    whole = (hi - lo) / 6.0 * (f0 + 4.0 * f1 + f2)
    value, err = recurse(lo, hi, f0, f1, f2, whole, tol, 0)
    return value, err, evals[0]


def normalization(
    params: PotentialParams,
    energy: float,
    quad_config: QuadratureConfig | None = None,
) -> NormalizationResult:
    """Integral of psi^2 over (0, inf) and the constant N = 1/sqrt(integral).

    The integration domain is split at the peak of psi^2 so the adaptive rule
    never straddles the essential singularity of exp(-2a/r), and truncated
    where the integrand has decayed by ``tail_exponent`` e-folds relative to
    the peak.
    """
    cfg = quad_config or QuadratureConfig()
    coeffs = _coefficients_or_raise(params, energy)
    a, c, k = coeffs.a, coeffs.c, coeffs.k
    if c < 0.0 or k <= 0.0 or a < 0.0:
        raise DomainError(
            f"psi^2 is not integrable: need c >= 0, k > 0, a >= 0 "
            f"(got c={c}, k={k}, a={a})"
        )

    slope = k / (c + 1.0)           # outer decay rate of psi^2
    power = 2.0 * c + 2.0

    def integrand(r):
        if r <= 0.0:
            return 0.0
        log_val = power * math.log(r) - 2.0 * a / r - slope * r
        return math.exp(log_val) if log_val > -745.0 else 0.0

    # Peak of psi^2: positive root of (slope/2)*r^2 - (c+1)*r - a = 0.
    half = c + 1.0
    r_peak = (half + math.sqrt(half * half + 2.0 * a * slope)) / slope
    log_peak = power * math.log(r_peak) - 2.0 * a / r_peak - slope * r_peak

    if a > 0.0:
        r_lo = a / (0.5 * cfg.tail_exponent)
        while power * math.log(r_lo) - 2.0 * a / r_lo > log_peak - cfg.tail_exponent:
            r_lo *= 0.5
    else:
        r_lo = 0.0
    r_hi = r_peak + (cfg.tail_exponent + power * max(1.0, math.log1p(r_peak))) / slope
    while integrand(r_hi) > math.exp(log_peak - cfg.tail_exponent):
        r_hi *= 1.5

    coarse = integrand(r_peak) * (r_hi - r_lo)  # scale for the absolute tolerance
    tol = cfg.rel_tolerance * coarse
    left, err_l, n_l = _adaptive_simpson(integrand, r_lo, r_peak, 0.5 * tol, cfg.max_depth)
    right, err_r, n_r = _adaptive_simpson(integrand, r_peak, r_hi, 0.5 * tol, cfg.max_depth)
    total = left + right
    if total <= 0.0:
        raise QuadratureError("normalization integral evaluated to a nonpositive value")

    closed = None
    if a == 0.0:
        closed = math.gamma(2.0 * c + 3.0) * ((c + 1.0) / k) ** (2.0 * c + 3.0)

    return NormalizationResult(
        integral=total,
        norm_constant=1.0 / math.sqrt(total),
        error_estimate=err_l + err_r,
        closed_form_integral=closed,
        peak_radius=r_peak,
        evaluations=n_l + n_r,
    )
