from mpmath import mp

import pytest

from toporna.asymptotics import (
    GENUS1_TYPE_DENOMINATOR,
    GENUS1_TYPE_NUMERATORS,
    arc_law,
    fit_power_exponent,
    genus1_type_probability,
    mean_arc_grid,
    singularity,
)
from toporna.genfun import StructureClass, structure_counts

PLAIN = StructureClass(1, 1)


def test_singularity_plain():
    rho = singularity(PLAIN)
    with mp.workdps(60):
        assert abs(rho - mp.mpf(1) / 3) < mp.mpf(10) ** -40


def test_singularity_spaced():
    rho = singularity(StructureClass(2, 1))
    with mp.workdps(60):
        exact = (3 - mp.sqrt(5)) / 2
        assert abs(rho - exact) < mp.mpf(10) ** -40


def test_arc_law_plain_exact():
    law = arc_law(PLAIN)
    with mp.workdps(60):
        assert abs(law.mean - mp.mpf(1) / 3) < mp.mpf(10) ** -35
        assert abs(law.variance - mp.mpf(1) / 18) < mp.mpf(10) ** -35


def test_arc_law_spot_values():
    spots = {
        (2, 1): "0.2764",
        (2, 2): "0.3172",
        (4, 3): "0.3113",
        (6, 6): "0.3359",
    }
    for (lam, r), want in spots.items():
        mean = arc_law(StructureClass(lam, r)).mean
        assert f"{float(mean):.4f}" == want, (lam, r)


def test_mean_arc_grid_shape_and_monotonicity():
    grid = mean_arc_grid()
    assert len(grid) == 26
    assert all(lam <= r + 1 for lam, r in grid)
    for lam in range(1, 7):
        row = [grid[(lam, r)] for r in range(1, 7) if (lam, r) in grid]
        assert all(a < b for a, b in zip(row, row[1:])), lam
        assert all(0.25 < v < 0.40 for v in row), lam


def test_type_asymptotics_partition_exact():
    total = [0, 0, 0]
    for triple in GENUS1_TYPE_NUMERATORS.values():
        for i in range(3):
            total[i] += triple[i]
    assert tuple(total) == GENUS1_TYPE_DENOMINATOR


def test_type_probability_values():
    p_h = genus1_type_probability("H", 500)
    assert 0.0362 < p_h < 0.0363
    with mp.workdps(30):
        total = sum(genus1_type_probability(k, 500) for k in "HKLM")
        assert abs(total - 1) < mp.mpf(10) ** -20
    # M dominates for long sequences
    assert genus1_type_probability("M", 10**6) > 0.9


def test_fit_recovers_synthetic_exponent():
    with mp.workdps(40):
        rho = mp.mpf(1) / 4
        values = {n: 5 * mp.mpf(n) ** 2.5 * 4**n for n in range(50, 151)}
    d, _ = fit_power_exponent(values, 50, 150, rho)
    assert abs(d - 2.5) < 1e-10


def test_fit_on_plain_secondary_counts():
    counts = structure_counts(PLAIN, 0, 161)
    rho = singularity(PLAIN)
    d, _ = fit_power_exponent(counts, 100, 160, rho)
    assert abs(d - (-1.5)) < 0.1


def test_fit_rejects_nonpositive():
    with pytest.raises(ValueError):
        fit_power_exponent([0] * 20, 5, 15, 0.5)
