import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibsic.modmat import ModMatrix, canonical_matrices
from fibsic.search import coneigen_data, frame_potential, haar_random_vector
from fibsic.verify import (
    VerificationReport,
    cross_overlaps,
    gram_check,
    overlaps,
    stabilizer_probe,
    triple_products,
    verify,
)
from oracles import dense_displacement, exact_fiducial_4a, gram_deviation_dense


def test_overlaps_match_dense_oracle(rng):
    for d in (2, 3, 4, 7, 8):
        psi = haar_random_vector(d, rng)
        O = overlaps(psi)
        for a in range(d):
            for b in range(d):
                assert abs(O[a, b] - np.vdot(psi, dense_displacement(a, b, d) @ psi)) < 1e-12


def test_cross_overlaps_definition(rng):
    d = 5
    psi, chi = haar_random_vector(d, rng), haar_random_vector(d, rng)
    T = cross_overlaps(psi, chi)
    for a in range(d):
        for b in range(d):
            assert abs(T[a, b] - np.vdot(dense_displacement(a, b, d) @ psi, chi)) < 1e-12


def test_exact_fiducial_passes():
    psi = exact_fiducial_4a()
    report = gram_check(psi, 1e-12)
    assert report.passed
    assert report.max_gram_deviation < 1e-12
    assert gram_deviation_dense(psi) < 1e-12
    O = overlaps(psi)
    assert O[0, 0] == pytest.approx(1)
    off = np.abs(O).ravel()[1:]
    np.testing.assert_allclose(off, 1 / np.sqrt(5), atol=1e-10)
    assert np.sum(off**2) == pytest.approx(3, abs=1e-12)


def test_exact_fiducial_is_coneigenvector_with_unit_eigenvalue():
    psi = exact_fiducial_4a()
    assert coneigen_data(None, 4).residual(psi) < 1e-12


def test_basis_vector_fails():
    e0 = np.array([1, 0], dtype=complex)
    report = gram_check(e0)
    assert not report.passed
    assert report.max_gram_deviation == pytest.approx(1 - 1 / 3)
    e0 = np.zeros(4, dtype=complex)
    e0[0] = 1
    assert gram_check(e0).max_gram_deviation == pytest.approx(0.8)


def test_gram_check_requires_unit_norm():
    with pytest.raises(ValueError):
        gram_check(np.ones(4))


def test_search_output_certified(fiducials):
    for d, psi in fiducials.items():
        report = gram_check(psi, 1e-9)
        assert report.passed
        assert gram_deviation_dense(psi) < 1e-9
        assert report.overlap_modulus_deviation < 1e-9


@pytest.mark.parametrize("d", [2, 3, 5, 8, 19, 48])
def test_overlap_sum_is_d(d, rng):
    psi = haar_random_vector(d, rng)
    assert np.sum(np.abs(overlaps(psi)) ** 2) == pytest.approx(d, abs=1e-10)


def test_gram_and_frame_potential_consistent(rng, fiducials):
    # both are functions of the same overlaps: f - 2/(d+1) = (1/d) sum_{p != 0} (|O_p|^2 - 1/(d+1))^2
    # so a Gram deviation eps bounds the excess by d * eps^2
    for d in (4, 8):
        for psi in (fiducials[d], haar_random_vector(d, rng)):
            report = gram_check(psi)
            excess = frame_potential(psi) - 2 / (d + 1)
            assert excess <= d * report.max_gram_deviation**2 + 1e-14


def test_phases_principal_and_divisor(fiducials):
    psi = fiducials[8]
    report = gram_check(psi, phase_divisor=2)
    assert len(report.phases) == 63
    assert all(-np.pi < p <= np.pi for p in report.phases.values())
    O = overlaps(psi)
    assert report.phases[(1, 3)] == pytest.approx(np.angle(O[1, 3]))
    sub = max(abs(report.phases[(a, b)]) for a in (0, 2, 4, 6) for b in (0, 2, 4, 6) if (a, b) != (0, 0))
    assert report.sublattice_phase_max == pytest.approx(sub)


def test_triple_products(fiducials):
    for d in (4, 8):
        t = triple_products(fiducials[d])
        n = d * d
        assert t.values.shape == (n, n)
        assert t[0, 0] == pytest.approx(1)
        diag = np.diag(t.values)[1:]
        np.testing.assert_allclose(diag, 1 / (d + 1), atol=1e-12)
        off = np.ones((n, n), dtype=bool)
        off[0, :] = off[:, 0] = False
        np.fill_diagonal(off, False)
        np.testing.assert_allclose(np.abs(t.values[off]), (d + 1) ** -1.5, atol=1e-12)
        np.testing.assert_allclose(t.values, t.values.conj().T, atol=1e-14)


def test_triple_products_size_guard():
    with pytest.raises(ValueError):
        triple_products(haar_random_vector(65, 0))


def test_probe_accepts_fibonacci(fiducials):
    for d, order in ((4, 6), (8, 12)):
        results, group = stabilizer_probe(fiducials[d], [canonical_matrices(d, 2 * d).F_f])
        assert results[0].accepted and results[0].antiunitary
        assert group == order


def test_probe_rejects_non_stabilizer(fiducials):
    results, group = stabilizer_probe(fiducials[4], [ModMatrix(1, 1, 0, 1, 8)])
    assert not results[0].accepted
    assert results[0].best_overlap < 0.99
    assert group == 1


def test_probe_random_unitaries_rejected(fiducials):
    rng = np.random.default_rng(3)
    rejected = 0
    for _ in range(20):
        while True:
            a, b, c = (int(x) for x in rng.integers(0, 8, size=3))
            if a % 2:
                M = ModMatrix(a, b, c, (1 + b * c) * pow(a, -1, 8), 8)
                break
        results, _ = stabilizer_probe(fiducials[4], [M])
        rejected += not results[0].accepted
    # the stabilizer mod phases has 6 elements among |SL(2, Z_8)| = 384
    assert rejected >= 15


def test_probe_requires_sic():
    with pytest.raises(ValueError):
        stabilizer_probe(haar_random_vector(4, 0), [ModMatrix(0, 1, 1, 1, 8)])


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 2 * np.pi), st.integers(0, 3), st.integers(0, 3))
def test_probe_verdict_phase_and_translate_invariant(theta, a, b):
    psi = exact_fiducial_4a()
    moved = np.exp(1j * theta) * dense_displacement(a, b, 4) @ psi
    for M, expected in ((ModMatrix(0, 1, 1, 1, 8), True), (ModMatrix(1, 1, 0, 1, 8), False)):
        results, _ = stabilizer_probe(moved, [M])
        assert results[0].accepted is expected


def test_verify_combines_checks(fiducials):
    Ff = ModMatrix(0, 1, 1, 1, 8)
    report = verify(fiducials[4], candidates=[Ff], coneigen_symmetry=Ff)
    assert report.passed
    assert report.detected_antiunitary_order == 6
    assert report.coneigen_residual < 1e-10
    assert report.frame_potential == pytest.approx(0.4, abs=1e-12)
    assert report.accepted_symmetries == [((0, 1), (1, 1))]


def test_verify_failed_vector_skips_probes():
    report = verify(haar_random_vector(4, 1), candidates=[ModMatrix(0, 1, 1, 1, 8)])
    assert not report.passed
    assert report.detected_group_order is None


def test_report_dict_roundtrip(fiducials):
    report = verify(fiducials[8], candidates=[ModMatrix(0, 1, 1, 1, 16)], phase_divisor=4)
    again = VerificationReport.from_dict(report.to_dict())
    assert again == report
