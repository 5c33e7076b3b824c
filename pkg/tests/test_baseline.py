import numpy as np
import pytest

from gridmul import (
    ChecksumCodedProduct, OutcomeKind, Scenario, ShapeError, checksum_detect_correct, checksum_multiply,
    GridCodeSpec, inject, multiply, random_matrix, sample_scenario,
)


def test_identity():
    p = checksum_multiply(np.eye(2), np.eye(2))
    assert p.data.tolist() == [[1, 0], [0, 1]]
    assert p.full[2, :2].tolist() == [1, 1] and p.full[:2, 2].tolist() == [1, 1] and p.full[2, 2] == 2


def test_zero():
    assert not checksum_multiply(np.zeros((3, 2)), np.zeros((2, 3))).full.any()


def test_shape_errors():
    with pytest.raises(ShapeError):
        checksum_multiply(np.zeros((2, 3)), np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        ChecksumCodedProduct(np.zeros((3, 3)), 3, 3)


def _with(p, errs):
    d = p.data.copy()
    for (i, j), v in errs.items():
        d[i, j] += v
    return p.with_data(d)


def test_single_fault_repaired():
    a, b = random_matrix(6, 4, 1), random_matrix(4, 6, 2)
    p = checksum_multiply(a, b)
    res = checksum_detect_correct(_with(p, {(2, 3): 4.0}), 0.1)
    assert res.kind is OutcomeKind.CORRECTED and len(res.repairs) == 1
    assert np.abs(res.corrected.data - multiply(a, b)).max() <= 1e-12


def test_two_output_faults_refused():
    a, b = random_matrix(6, 4, 1), random_matrix(4, 6, 2)
    p = checksum_multiply(a, b)
    res = checksum_detect_correct(_with(p, {(1, 1): 4.0, (3, 4): -2.0}), 0.1, a, b)
    assert res.kind is OutcomeKind.UNCORRECTABLE


def test_clean():
    p = checksum_multiply(random_matrix(4, 4, 1), random_matrix(4, 4, 2))
    assert checksum_detect_correct(p, 0.01).kind is OutcomeKind.CLEAN


def test_operand_fault_without_operands_refused():
    spec = GridCodeSpec(8, 8, 8)
    a, b = random_matrix(8, 8, 3), random_matrix(8, 8, 4)
    c, _ = inject(a, b, sample_scenario("a", spec, 0.1, 5), spec)
    res = checksum_detect_correct(checksum_multiply(a, b).with_data(c.data), 0.1)
    assert res.kind is OutcomeKind.UNCORRECTABLE


@pytest.mark.parametrize("scen", [Scenario.A_SINGLE, Scenario.B_SINGLE, Scenario.C_SINGLE])
def test_single_scenarios_recovered(scen):
    spec = GridCodeSpec(16, 16, 16)
    for seed in range(30):
        a, b = random_matrix(16, 16, seed), random_matrix(16, 16, seed + 1)
        c, _ = inject(a, b, sample_scenario(scen, spec, 0.1, seed), spec)
        res = checksum_detect_correct(checksum_multiply(a, b).with_data(c.data), 0.1, a, b)
        assert res.kind is OutcomeKind.CORRECTED
        assert np.abs(res.corrected.data - multiply(a, b)).max() <= spec.tau()
