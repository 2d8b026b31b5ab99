import math
from fractions import Fraction

import pytest

from ergopt.config import BudgetExceeded
from ergopt.doubling import doubling_solve
from ergopt.potentials import GridPotential, LocallyConstantPotential
from ergopt.subaction import half_iteration, residual, verify_subaction


def test_embedded_cylinder_indicator():
    A = GridPotential.from_locally_constant(
        LocallyConstantPotential.indicator("01", 2), 16
    )
    res = doubling_solve(A)
    assert res.subaction.converged
    assert res.alpha == pytest.approx(0.5, abs=1e-12)
    words = [o.word for o in res.orbits]
    assert (0, 1) in words


def test_sin2_detects_period_two_orbit():
    A = GridPotential.builtin("sin2", 1024)
    res = doubling_solve(A)
    assert res.subaction.converged
    # orbit {1/3, 2/3}: both lattice words and the sampled points line up
    assert [o.word for o in res.orbits] == [(0, 1)]
    orb = res.orbits[0]
    assert orb.period == 2
    assert sorted(orb.points) == [Fraction(1, 3), Fraction(2, 3)]
    assert orb.max_residual <= 1e-4
    # mean of sin^2(2 pi x) on the orbit is 3/4; discretization bias is O(1/n)
    assert res.alpha == pytest.approx(0.75, abs=0.01)


def test_pwlinear_detects_period_two_orbit():
    A = GridPotential.builtin("pwlinear", 1024)
    res = doubling_solve(A)
    assert [o.word for o in res.orbits] == [(0, 1)]
    assert res.alpha == pytest.approx(0.0, abs=0.01)


def test_forward_residual_formula_and_sign():
    A = GridPotential.builtin("sin2", 256)
    u = half_iteration(A)
    R = residual(u, A)
    tol = 1e-9 * (1 + abs(u.alpha))
    assert min(R.values) >= -tol
    n = A.n
    for j in (0, 1, 7, 100, 255):
        expect = u.values[(2 * j) % n] - u.values[j] - A.values[j] + u.alpha
        assert R.values[j] == pytest.approx(expect, abs=1e-15)
    report = verify_subaction(u, A)
    assert report.is_subaction and report.is_calibrated


def test_constant_shift_moves_alpha():
    A = GridPotential.builtin("sin2", 256)
    B = GridPotential(256, tuple(v + 2.5 for v in A.values))
    ra = doubling_solve(A)
    rb = doubling_solve(B)
    assert rb.alpha == pytest.approx(ra.alpha + 2.5, abs=1e-9)
    assert [o.word for o in rb.orbits] == [o.word for o in ra.orbits]


def test_orbit_scan_budget():
    A = GridPotential.builtin("sin2", 256)
    with pytest.raises(BudgetExceeded):
        doubling_solve(A, max_period=64)


def test_detected_orbits_meet_tolerance():
    A = GridPotential.builtin("sin2", 4096)
    res = doubling_solve(A)
    for orb in res.orbits:
        assert orb.max_residual <= res.orbit_tol
        # orbit points are genuinely periodic under doubling
        pts = set(orb.points)
        for p in orb.points:
            q = (2 * p) % 1
            assert q in pts


def test_grid_size_must_be_power_of_two():
    with pytest.raises(ValueError):
        GridPotential(12, tuple(0.0 for _ in range(12)))
    with pytest.raises(ValueError):
        GridPotential(8, (0.0, math.nan) + (0.0,) * 6)
