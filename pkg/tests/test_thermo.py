"""Transfer-operator tests against a hand-solved two-state model.

For A = I_01 the transfer matrix is [[1, e^b], [1, 1]] with leading
eigenvalue 1 + e^(b/2), right eigenvector (e^(b/2), 1) and left eigenvector
(1, e^(b/2)).  That gives pi = (1/2, 1/2) exactly, transition probabilities
p_00 = p_11 = 1/lam, p_01 = p_10 = e^(b/2)/lam, and the cylinder masses
mu(01) = e^(b/2)/(2 lam), mu(11) = 1/(2 lam).  Everything below is checked
against those formulas evaluated in log-space.
"""
import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from ergopt import (
    ConvergenceError,
    LocallyConstantPotential,
    equilibrium,
    integrate,
)

I01 = LocallyConstantPotential(2, 2, {(0, 1): Fraction(1)})


def log_lam(beta: float) -> float:
    return float(np.logaddexp(0.0, beta / 2.0))


def test_pressure_closed_form():
    for beta in (0.0, 1.0, 5.0, 20.0, 100.0, 500.0):
        res = equilibrium(I01, beta)
        assert res.pressure == pytest.approx(
            log_lam(beta), rel=1e-10, abs=1e-12
        )


def test_zero_temperature_anchors():
    res = equilibrium(I01, 0.0)
    assert res.pressure == pytest.approx(math.log(2), abs=1e-12)
    assert res.entropy == pytest.approx(math.log(2), abs=1e-12)
    assert res.energy == pytest.approx(0.25, abs=1e-12)
    # all transitions are 1/2, so every depth-2 cylinder has mass 1/4
    for w in itertools.product(range(2), repeat=2):
        assert res.cylinder_mass(w) == pytest.approx(0.25, abs=1e-12)
    A3 = LocallyConstantPotential(3, 1, {(2,): Fraction(1, 3)})
    assert equilibrium(A3, 0.0).pressure == pytest.approx(
        math.log(3), abs=1e-12
    )


def test_stationary_and_cylinder_oracles():
    for beta in (1.0, 5.0, 20.0, 200.0):
        res = equilibrium(I01, beta)
        ll = log_lam(beta)
        assert res.cylinder_mass((0,)) == pytest.approx(0.5, abs=1e-11)
        assert res.cylinder_mass((1,)) == pytest.approx(0.5, abs=1e-11)
        assert res.log_cylinder_mass((0, 1)) == pytest.approx(
            beta / 2.0 - math.log(2) - ll, abs=1e-10
        )
        assert res.log_cylinder_mass((1, 1)) == pytest.approx(
            -math.log(2) - ll, abs=1e-10
        )
        # mu(010) = pi_0 p_01 p_10 = e^beta / (2 lam^2)
        assert res.log_cylinder_mass((0, 1, 0)) == pytest.approx(
            beta - math.log(2) - 2.0 * ll, abs=1e-10
        )
        assert res.energy == pytest.approx(
            math.exp(beta / 2.0 - math.log(2) - ll), rel=1e-10
        )


def test_log_mass_survives_underflow():
    # at beta = 500 the (11) cylinder is ~1e-109; the log lane keeps full
    # precision and exp() round-trips to the float lane
    res = equilibrium(I01, 500.0)
    lm = res.log_cylinder_mass((1, 1))
    assert lm == pytest.approx(-math.log(2) - log_lam(500.0), abs=1e-9)
    assert res.cylinder_mass((1, 1)) == pytest.approx(math.exp(lm), rel=1e-12)
    masses = [
        res.cylinder_mass(w) for w in itertools.product(range(2), repeat=2)
    ]
    assert sum(masses) == pytest.approx(1.0, abs=1e-10)


def random_depth2(rng: random.Random) -> LocallyConstantPotential:
    terms = {
        w: Fraction(rng.randint(-100, 100), 100)
        for w in itertools.product(range(2), repeat=2)
    }
    return LocallyConstantPotential(2, 2, terms)


def test_variational_identity_random():
    rng = random.Random(20240817)
    for _ in range(20):
        A = random_depth2(rng)
        for beta in (0.5, 1.0, 2.0, 4.0):
            res = equilibrium(A, beta)
            defect = abs(res.pressure - (res.entropy + beta * res.energy))
            assert defect <= 1e-10 * (1.0 + abs(res.pressure))
            assert res.variational_defect == pytest.approx(defect, abs=1e-15)
            assert res.energy == pytest.approx(
                float(integrate(res.measure, A)), abs=1e-12
            )


def test_equilibrium_measure_is_invariant():
    rng = random.Random(7)
    for _ in range(5):
        A = random_depth2(rng)
        res = equilibrium(A, 2.0)
        mu = res.measure
        total = 0.0
        for w in itertools.product(range(2), repeat=2):
            total += mu.cylinder_mass(w)
            pushed = sum(mu.cylinder_mass((s,) + w) for s in range(2))
            assert abs(mu.cylinder_mass(w) - pushed) <= 1e-12
        assert total == pytest.approx(1.0, abs=1e-12)


def test_order_two_chain():
    rng = random.Random(99)
    terms = {
        w: Fraction(rng.randint(-50, 50), 50)
        for w in itertools.product(range(3), repeat=3)
    }
    A = LocallyConstantPotential(3, 3, terms)
    res = equilibrium(A, 2.0)
    assert res.variational_defect <= 1e-10 * (1.0 + abs(res.pressure))
    mu = res.measure
    total = 0.0
    for w in itertools.product(range(3), repeat=3):
        total += mu.cylinder_mass(w)
        pushed = sum(mu.cylinder_mass((s,) + w) for s in range(3))
        assert abs(mu.cylinder_mass(w) - pushed) <= 1e-12
    assert total == pytest.approx(1.0, abs=1e-12)


def test_iteration_cap_raises():
    with pytest.raises(ConvergenceError):
        equilibrium(I01, 5.0, max_iters=1)
