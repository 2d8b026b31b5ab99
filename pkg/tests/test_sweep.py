"""Beta-sweep verdicts and the residual-sum rate function.

The I_01 sweep has a closed form to pin against: mu_beta(01) =
e^(b/2)/(2(1+e^(b/2))), so the depth-3 vectors collapse onto the (01)-orbit
masses at the 1e-6 scale once e^(-b/2) does, and the pressure gap
log(1+e^(-b/2)) decays to zero from above.
"""
import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest

from ergopt import (
    BudgetExceeded,
    LocallyConstantPotential,
    PointSpec,
    beta_sweep,
    build_debruijn,
    depth_profile,
    exact_subaction,
    half_iteration,
    ldp_rate,
    ldp_slope_check,
    periodic_measure,
)
from ergopt.sweep import _verdict

I01 = LocallyConstantPotential(2, 2, {(0, 1): Fraction(1)})
SCHEDULE = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0, 64.0)


def test_sweep_anchor_converges_to_orbit_measure():
    sweep = beta_sweep(I01, SCHEDULE, depth=3)
    assert sweep.alpha == Fraction(1, 2)
    assert sweep.verdict == "converged-to-measure"
    target = depth_profile(periodic_measure((0, 1), 2), 3)
    for got, want in zip(sweep.limit_vector, target):
        assert got == pytest.approx(float(want), abs=1e-6)
    # closed form at the last beta
    mu = sweep.results[-1].cylinder_mass((0, 1))
    lam = 1.0 + math.exp(32.0)
    assert mu == pytest.approx(math.exp(32.0) / (2.0 * lam), rel=1e-12)
    # energy climbs toward alpha, the pressure gap decays through it
    for lo, hi in zip(sweep.energies, sweep.energies[1:]):
        assert hi >= lo - 1e-15
    for a, b in zip(sweep.pressure_gaps, sweep.pressure_gaps[1:]):
        assert 0.0 < b < a
    assert sweep.pressure_gaps[-1] == pytest.approx(
        math.log1p(math.exp(-32.0)), abs=1e-12
    )


def test_verdict_rules():
    a, b = (0.0, 1.0), (1.0, 0.0)
    assert _verdict([a, a, a]) == ("converged-to-measure", a)
    assert _verdict([a, b, a, b, a, b]) == ("oscillating", None)
    assert _verdict([a, b])[0] == "inconclusive"
    drift = [(0.1 * k,) for k in range(6)]
    assert _verdict(drift)[0] == "inconclusive"


def test_sweep_input_validation():
    with pytest.raises(ValueError):
        beta_sweep(I01, ())
    with pytest.raises(BudgetExceeded):
        beta_sweep(I01, (1.0, 2.0), depth=30)


def test_sweep_parallel_matches_serial():
    serial = beta_sweep(I01, (1.0, 2.0, 4.0, 8.0), jobs=1)
    parallel = beta_sweep(I01, (1.0, 2.0, 4.0, 8.0), jobs=2)
    assert serial.cylinder_vectors == parallel.cylinder_vectors
    assert serial.verdict == parallel.verdict


def test_rate_function_anchors():
    G = build_debruijn(I01)
    u = exact_subaction(G)
    on_orbit = ldp_rate(PointSpec(2, (), (0, 1)), u, I01)
    assert on_orbit.value == 0
    assert on_orbit.exact
    entering = ldp_rate(PointSpec(2, (1, 1), (0, 1)), u, I01)
    assert entering.value == Fraction(1, 2)
    # once past the preperiod the partial sums sit at the final value
    assert entering.partial_sums[-1] == Fraction(1, 2)
    off_orbit = ldp_rate(PointSpec(2, (), (1,)), u, I01)
    assert off_orbit.value == math.inf
    sums = off_orbit.partial_sums
    assert all(t >= s for s, t in zip(sums, sums[1:]))
    assert sums[-1] > 0


def test_rate_function_requires_calibrated_exact_subaction():
    G = build_debruijn(I01)
    u = exact_subaction(G)
    broken = dataclasses.replace(
        u, values=tuple(v + Fraction(1, 3) * i for i, v in enumerate(u.values))
    )
    with pytest.raises(ValueError, match="calibrated"):
        ldp_rate(PointSpec(2, (), (0, 1)), broken, I01)
    approx = half_iteration(I01)
    with pytest.raises(ValueError, match="exact"):
        ldp_rate(PointSpec(2, (), (0, 1)), approx, I01)


def test_slope_check_anchor():
    schedule = np.geomspace(32.0, 128.0, 9)
    res = ldp_slope_check(I01, (1, 1), schedule)
    assert res.predicted_q == -0.5
    assert res.empirical_slope == pytest.approx(-0.5, abs=0.02)
    assert res.gap <= 0.02
    assert not res.underflow
    assert res.best_point is not None
    assert res.best_point.period in ((0, 1), (1, 0))
    zero_q = ldp_slope_check(I01, (0, 1), schedule)
    assert zero_q.predicted_q == 0.0
    assert zero_q.empirical_slope == pytest.approx(0.0, abs=0.02)
    with pytest.raises(ValueError):
        ldp_slope_check(I01, (1, 1), (32.0, 64.0, 128.0))
