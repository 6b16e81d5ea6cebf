import math
import random

import pytest

from kgkratzer import (
    DomainError,
    PotentialParams,
    admissibility,
    derived_coefficients,
    potentials_at,
)


def test_params_require_positive_finite_mass():
    with pytest.raises(DomainError):
        PotentialParams(m=0.0)
    with pytest.raises(DomainError):
        PotentialParams(m=-1.0)
    with pytest.raises(DomainError):
        PotentialParams(m=float("nan"), b1=0.5)
    with pytest.raises(DomainError):
        PotentialParams(m=1.0, b2=float("inf"))


def test_coulomb_reduction():
    params = PotentialParams(m=1.0, b1=1.0)
    coeffs = derived_coefficients(params, energy=1.0, n=0)
    assert coeffs.a == 0.0
    assert coeffs.c == 0.0
    assert coeffs.k == 2.0
    assert coeffs.epsilon_n == -1.0
    assert coeffs.c_diagnostic is None  # a = 0: ratio definition undefined


def test_perfect_square_radicand_gives_exact_c():
    params = PotentialParams(m=1.0, a1=1.0, b1=0.5)
    coeffs = derived_coefficients(params, energy=0.5)
    assert coeffs.a == 1.0
    assert coeffs.c == 1.0  # radicand 2.25 is a perfect square
    assert coeffs.k == 1.0


def test_mixed_coupling_coefficients():
    params = PotentialParams(m=1.0, a1=5.0, b1=0.5, a2=3.0, b2=0.25)
    coeffs = derived_coefficients(params, energy=0.8)
    assert coeffs.a == 4.0  # 3-4-5 triple
    assert math.isclose(coeffs.c, 3.3794329482541646, rel_tol=1e-12)
    assert math.isclose(coeffs.k, 1.4, rel_tol=1e-15)
    # c solves the quadratic c*(c+1) = 2*(m*a1 + E*a2) = 14.8
    assert math.isclose(coeffs.c * (coeffs.c + 1.0), 14.8, rel_tol=1e-12)
    assert coeffs.c_diagnostic == pytest.approx(0.4375, rel=1e-15)


def test_centrifugal_quadratic_identity_randomized():
    rng = random.Random(42)
    for _ in range(500):
        m = rng.uniform(0.5, 2.0)
        a1 = rng.uniform(0.0, 2.0)
        a2 = rng.uniform(-a1, a1) if a1 else 0.0
        energy = rng.uniform(-m, m)
        params = PotentialParams(m=m, a1=a1, a2=a2)
        coeffs = derived_coefficients(params, energy)
        target = 2.0 * (m * a1 + energy * a2)
        assert coeffs.c is not None
        assert abs(coeffs.c * (coeffs.c + 1.0) - target) <= 1e-12 * max(abs(target), 1.0)
        if coeffs.a is not None:
            a_sq = a1 * a1 - a2 * a2
            assert abs(coeffs.a ** 2 - a_sq) <= 1e-14 * max(a_sq, 1.0)


def test_undefined_quantities_are_none_not_nan():
    params = PotentialParams(m=1.0, a1=0.0, a2=1.0)
    coeffs = derived_coefficients(params, energy=-0.5)
    assert coeffs.a is None          # a1^2 < a2^2
    assert coeffs.c is None          # radicand 0.25 - 1 < 0
    assert coeffs.epsilon_n is None
    assert not coeffs.a_defined and not coeffs.c_defined


def test_level_index_validation():
    params = PotentialParams(m=1.0, b1=0.5)
    with pytest.raises(DomainError):
        derived_coefficients(params, 0.5, n=-1)
    with pytest.raises(DomainError):
        derived_coefficients(params, float("nan"))


def test_potentials_direct_substitution():
    params = PotentialParams(m=1.0, a1=1.0, b1=2.0)
    v_s, _, _ = potentials_at(params, 0.0, 1.0)
    assert v_s == -1.0


def test_scalar_potential_vertex():
    params = PotentialParams(m=1.0, a1=1.0, b1=1.0)
    v_s, _, _ = potentials_at(params, 0.0, 2.0)  # minimum at r = 2*a1/b1
    assert v_s == -0.25
    for r in (1.5, 2.5):
        assert potentials_at(params, 0.0, r)[0] > -0.25


def test_equal_potentials_squares_cancel():
    params = PotentialParams(m=1.0, b1=0.5, b2=0.5)
    v_s, v_v, v_eff = potentials_at(params, 0.6, 1.0)
    assert v_s == v_v == -0.5
    assert v_eff == pytest.approx(-1.6, rel=1e-15)


def test_potentials_scaling_homogeneity():
    rng = random.Random(7)
    for _ in range(50):
        lam = rng.uniform(0.1, 10.0)
        a1, b1 = rng.uniform(0, 2), rng.uniform(-1, 1)
        r = rng.uniform(0.05, 20.0)
        base = PotentialParams(m=1.0, a1=a1, b1=b1)
        scaled = PotentialParams(m=1.0, a1=lam * lam * a1, b1=lam * b1)
        v_base = potentials_at(base, 0.0, r)[0]
        v_scaled = potentials_at(scaled, 0.0, lam * r)[0]
        assert v_scaled == pytest.approx(v_base, rel=1e-12, abs=1e-15)


def test_potentials_reject_nonpositive_radius():
    params = PotentialParams(m=1.0)
    with pytest.raises(DomainError):
        potentials_at(params, 0.0, 0.0)
    with pytest.raises(DomainError):
        potentials_at(params, 0.0, -1.0)


def test_admissibility_imaginary_a_inadmissible():
    params = PotentialParams(m=1.0, a1=0.0, a2=1.0)
    for energy in (-0.5, 0.0, 0.5):
        report = admissibility(params, energy)
        assert not report.a_real
        assert report.overall == "inadmissible"
        assert any("a imaginary" in reason for reason in report.reasons)


def test_admissibility_superluminal_energy():
    params = PotentialParams(m=1.0, b1=0.5, b2=0.25)
    report = admissibility(params, 1.2)
    assert not report.energy_subluminal
    assert report.overall == "inadmissible"


def test_admissibility_equal_coulomb_boundary():
    params = PotentialParams(m=1.0, b1=0.5, b2=0.5)
    report = admissibility(params, 0.6)
    assert report.k_positive
    assert report.c_value == 0.0
    assert report.overall == "boundary"


def test_admissibility_strictly_admissible_case():
    params = PotentialParams(m=1.0, a1=5.0, b1=0.5, a2=3.0, b2=0.25)
    report = admissibility(params, 0.8)
    assert report.overall == "admissible"
    assert report.reasons == ()


def test_scalar_dominance_is_advisory_only():
    # Pure scalar coupling violates |b1| < |b2| yet can be admissible.
    params = PotentialParams(m=1.0, a1=1.0, b1=0.5)
    report = admissibility(params, 0.8)
    assert not report.scalar_dominance
    assert report.overall == "admissible"


def test_admissibility_is_deterministic():
    params = PotentialParams(m=1.0, a1=5.0, b1=0.5, a2=3.0, b2=0.25)
    assert admissibility(params, 0.8) == admissibility(params, 0.8)
