import math

import pytest

from kgkratzer import (
    ConvergenceError,
    DomainError,
    PotentialParams,
    SolverConfig,
    StructuralConstraintError,
    approx_energy,
    closed_form,
    nonrel_epsilon,
    solve_levels,
    solve_spectrum,
    spectrum_residual,
)

SQRT2 = math.sqrt(2.0)


def particle_energies(levels):
    return [lvl.energy for lvl in levels if lvl.branch == "particle"]


def test_residual_vanishing_couplings():
    params = PotentialParams(m=1.0, b2=1.0)
    assert spectrum_residual(params, 0, 0.0) == -1.0


def test_residual_zero_at_vector_coulomb_root():
    params = PotentialParams(m=1.0, b2=1.0)
    assert abs(spectrum_residual(params, 0, 1.0 / SQRT2)) < 1e-12


def test_residual_nonnegative_at_mass_boundary():
    for params in (
        PotentialParams(m=1.0, b1=0.3, b2=0.7),
        PotentialParams(m=1.0, a1=1.0, b1=0.5),
        PotentialParams(m=1.0, a1=0.5, a2=0.5, b1=0.2, b2=0.6),
    ):
        assert spectrum_residual(params, 0, params.m) >= 0.0


def test_residual_domain_error():
    params = PotentialParams(m=1.0, a2=1.0)
    with pytest.raises(DomainError):
        spectrum_residual(params, 0, -0.5)  # radicand 1 + 8E < 0


def test_pure_vector_coulomb_pair():
    params = PotentialParams(m=1.0, b2=1.0)
    levels = solve_levels(params, 0)
    assert len(levels) == 2
    neg, pos = levels
    assert pos.energy == pytest.approx(1.0 / SQRT2, abs=1e-9)
    assert neg.energy == pytest.approx(-1.0 / SQRT2, abs=1e-9)
    assert pos.branch == "particle"
    assert neg.branch == "antiparticle"


def test_coulomb_general_roots_and_branches():
    params = PotentialParams(m=1.0, b1=0.6, b2=0.8)
    levels = solve_levels(params, 0)
    assert len(levels) == 2
    neg, pos = levels
    assert pos.energy == pytest.approx(0.39717734749907076, abs=1e-9)
    assert neg.energy == pytest.approx(-0.98254320115760734, abs=1e-9)
    # k(E) = 2*(0.6 + E*0.8) is negative at the lower root
    assert neg.branch == "antiparticle"
    assert pos.branch == "particle"


def test_equal_coulomb_single_admissible_root():
    params = PotentialParams(m=1.0, b1=0.5, b2=0.5)
    levels = solve_levels(params, 0)
    assert len(levels) == 1
    assert levels[0].energy == pytest.approx(0.6, abs=1e-9)
    assert levels[0].branch == "particle"
    assert levels[0].admissibility.overall == "boundary"  # a = c = 0 exactly


def test_spectrum_equal_three_levels():
    params = PotentialParams(m=1.0, b1=0.5, b2=0.5)
    run = solve_spectrum(params, 2)
    assert run.failures == ()
    energies = [run.table[(n, "particle")][0].energy for n in range(3)]
    expected = (0.6, 0.88235294117647059, 0.94594594594594595)
    for got, want in zip(energies, expected):
        assert got == pytest.approx(want, abs=1e-9)
    assert energies == sorted(energies)
    assert all(e < params.m for e in energies)


def test_no_bound_states_without_coulomb_term():
    for a1, a2 in ((0.0, 0.0), (1.0, 0.0), (1.0, 0.5)):
        params = PotentialParams(m=1.0, a1=a1, a2=a2)
        assert solve_levels(params, 0) == []
        assert solve_spectrum(params, 2).table == {}


def test_pure_scalar_symmetric_pair():
    params = PotentialParams(m=1.0, b1=0.5)
    levels = solve_levels(params, 0)
    assert [lvl.energy for lvl in levels] == pytest.approx(
        [-0.86602540378443865, 0.86602540378443865], abs=1e-9
    )
    # scalar-only coupling keeps k = 2*m*b1 > 0 at both roots
    assert {lvl.branch for lvl in levels} == {"particle"}


def test_back_substitution_invariant():
    cfg = SolverConfig()
    for params in (
        PotentialParams(m=1.0, b1=0.6, b2=0.8),
        PotentialParams(m=1.5, a1=1.2, b1=0.4, a2=-0.3, b2=0.5),
        PotentialParams(m=1.0, a1=5.0, b1=0.5, a2=3.0, b2=0.25),
    ):
        for n in range(3):
            for lvl in solve_levels(params, n, cfg):
                assert lvl.residual < cfg.root_tolerance
                assert abs(lvl.energy) < params.m
                assert abs(spectrum_residual(params, n, lvl.energy)) < cfg.root_tolerance


def test_partial_radicand_domain_is_split():
    # radicand 1 + 8*E*a2 turns negative inside (-m, m); the scan must stay
    # on the valid side and still find the states there.
    params = PotentialParams(m=1.0, a2=0.5, b1=0.5)
    levels = solve_levels(params, 0)
    assert levels, "expected a root on the valid subinterval"
    for lvl in levels:
        assert 1.0 + 8.0 * lvl.energy * params.a2 >= 0.0


def test_equal_manifold_monotone_energies():
    params = PotentialParams(m=1.0, a1=0.5, b1=0.5, a2=0.5, b2=0.5)
    energies = []
    for n in range(4):
        roots = particle_energies(solve_levels(params, n))
        assert len(roots) == 1
        energies.append(roots[0])
    assert all(e2 > e1 for e1, e2 in zip(energies, energies[1:]))
    assert all(e < params.m for e in energies)


def test_closed_form_pure_scalar():
    params = PotentialParams(m=1.0, b1=0.5)
    result = closed_form(params, 0, "pure_scalar")
    assert sorted(result.energies) == pytest.approx(
        [-0.86602540378443865, 0.86602540378443865], rel=1e-15
    )


def test_closed_form_opposite():
    params = PotentialParams(m=1.0, b1=0.5, b2=-0.5)
    result = closed_form(params, 0, "opposite")
    assert list(result) == pytest.approx([-0.6], rel=1e-15)


def test_closed_form_coulomb_general():
    params = PotentialParams(m=1.0, b1=0.6, b2=0.8)
    result = closed_form(params, 0, "coulomb_general")
    assert sorted(result.energies) == pytest.approx(
        [-0.98254320115760734, 0.39717734749907076], rel=1e-13
    )


def test_closed_form_equal_matches_quadratic_fraction():
    for n in range(4):
        nu = float(n + 1)
        params = PotentialParams(m=1.0, b1=0.5, b2=0.5)
        (energy,) = closed_form(params, n, "equal").energies
        assert energy == pytest.approx(
            (nu ** 2 - 0.25) / (nu ** 2 + 0.25), rel=1e-15
        )


def test_closed_form_filters_out_of_window_roots():
    params = PotentialParams(m=1.0, b1=0.9, b2=-0.9)
    result = closed_form(params, 0, "coulomb_general")
    assert all(abs(e) < 1.0 for e in result.energies)
    assert result.notes  # the E = m root is reported, not silently dropped


def test_closed_form_structural_constraints():
    with pytest.raises(StructuralConstraintError):
        closed_form(PotentialParams(m=1.0, a1=0.1, b1=0.5), 0, "coulomb_general")
    with pytest.raises(StructuralConstraintError):
        closed_form(PotentialParams(m=1.0, b1=0.5, b2=0.1), 0, "pure_scalar")
    with pytest.raises(StructuralConstraintError):
        closed_form(PotentialParams(m=1.0, b1=0.5, b2=0.4), 0, "equal")
    with pytest.raises(StructuralConstraintError):
        closed_form(PotentialParams(m=1.0, a1=0.5, a2=0.5, b1=0.5, b2=0.5), 0, "equal")
    with pytest.raises(StructuralConstraintError):
        closed_form(PotentialParams(m=1.0, b1=0.5), 0, "no_such_case")


def test_closed_forms_are_zeros_of_the_implicit_equation():
    cases = (
        (PotentialParams(m=1.0, b1=0.3, b2=0.7), "coulomb_general"),
        (PotentialParams(m=1.0, a1=1.5, b1=0.8), "pure_scalar"),
        (PotentialParams(m=1.0, b2=0.45), "pure_vector_coulomb"),
        (PotentialParams(m=1.0, b1=0.7, b2=0.7), "equal"),
        (PotentialParams(m=1.0, b1=0.7, b2=-0.7), "opposite"),
    )
    for params, case in cases:
        for n in range(4):
            for energy in closed_form(params, n, case):
                assert abs(spectrum_residual(params, n, energy)) < 1e-10


def test_series_pure_vector():
    params = PotentialParams(m=1.0, a2=0.1, b2=0.2)
    assert approx_energy(params, 0, "pure_vector_series") == pytest.approx(
        0.98611111111111111, rel=1e-15
    )


def test_series_equal_vs_exact():
    params = PotentialParams(m=1.0, b1=0.1, b2=0.1)
    series = approx_energy(params, 0, "equal_series")
    assert series == pytest.approx(0.98, rel=1e-15)
    (exact,) = closed_form(params, 0, "equal").energies
    assert exact == pytest.approx(0.9801980198019802, rel=1e-15)
    assert abs(series - exact) < 3e-4


def test_series_opposite_verbatim():
    params = PotentialParams(m=1.0, b1=SQRT2, b2=-SQRT2)
    # coefficient cancellation: 2*(n+1)^2/b1^2 = 1 forces zero
    assert abs(approx_energy(params, 0, "opposite_series")) < 1e-12
    (exact,) = closed_form(params, 0, "opposite").energies
    assert exact == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_series_opposite_rejects_zero_coupling():
    params = PotentialParams(m=1.0)
    with pytest.raises(DomainError):
        approx_energy(params, 0, "opposite_series")


def test_nonrel_epsilon_values():
    # c = 0, k = 2 at (m=1, E=1, b1=1)
    assert nonrel_epsilon(PotentialParams(m=1.0, b1=1.0), 1.0, 0) == -1.0
    # c = 1, k = 1 at (m=1, E=0.5, a1=1, b1=0.5)
    params = PotentialParams(m=1.0, a1=1.0, b1=0.5)
    assert nonrel_epsilon(params, 0.5, 0) == pytest.approx(-0.0625, rel=1e-15)
    values = [nonrel_epsilon(params, 0.5, n) for n in range(6)]
    assert all(v < 0 for v in values)
    assert values == sorted(values)  # increases toward zero from below


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(scan_points=10)
    with pytest.raises(ValueError):
        SolverConfig(root_tolerance=0.0)
    with pytest.raises(ValueError):
        SolverConfig(energy_margin=-1.0)


def test_convergence_error_on_tiny_budget():
    params = PotentialParams(m=1.0, b1=0.5, b2=0.5)
    cfg = SolverConfig(max_iterations=2)
    with pytest.raises(ConvergenceError):
        solve_levels(params, 0, cfg)
    # solve_spectrum records per-level failures instead of raising
    run = solve_spectrum(params, 1, cfg)
    assert len(run.failures) == 2
