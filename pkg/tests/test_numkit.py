import numpy as np
import pytest

from embedlab import numkit
from embedlab.errors import (
    IllConditioned,
    NegativeRealEigenvalue,
    Overflow,
    PerturbationFailed,
    RepeatedEigenvalues,
    SingularMatrix,
)
from helpers import (
    EXP_GEN_A,
    GEN_A,
    GEN_B,
    SCALED_TRIANGLE,
    min_eig_gap,
    random_intensity,
    random_inverse_m,
    random_stochastic,
)

CFG = numkit.DEFAULT_TOL


class TestToleranceConfig:
    def test_defaults(self):
        assert CFG.entry_tol == 1e-9
        assert CFG.recon_tol == 1e-8
        assert CFG.distinct_tol == 1e-7
        assert CFG.perturb_scale == 1e-6

    @pytest.mark.parametrize("name", ["entry_tol", "recon_tol", "distinct_tol", "perturb_scale"])
    def test_positivity_enforced(self, name):
        with pytest.raises(ValueError):
            numkit.ToleranceConfig(**{name: 0.0})


class TestEig:
    def test_identity_flags_repeated(self):
        e = numkit.eig(np.eye(3))
        assert np.allclose(e.eigenvalues, 1.0)
        assert e.min_pairwise_gap == 0.0
        assert e.is_repeated(CFG)

    def test_triangular_exponential_spectrum(self):
        e = numkit.eig(numkit.expm(GEN_A))
        assert np.allclose(e.eigenvalues, [1.0, np.exp(-1), np.exp(-2)], atol=1e-12)
        assert not e.is_repeated(CFG)

    def test_rotation_conjugate_pair(self):
        e = numkit.eig(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        assert set(np.round(e.eigenvalues, 12)) == {1j, -1j}
        # exact conjugates at the level of paired values
        assert e.eigenvalues[0] == np.conj(e.eigenvalues[1])

    def test_canonical_order_and_invariants_fuzzed(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            n = int(rng.integers(1, 7))
            A = rng.normal(size=(n, n))
            try:
                e = numkit.eig(A)
            except IllConditioned:
                continue
            lam = e.eigenvalues
            keys = [(-abs(l), -l.real, l.imag) for l in lam]
            assert keys == sorted(keys)
            # conjugate-pair symmetry is exact, not approximate
            assert sorted(map(complex, lam), key=lambda z: (z.real, z.imag)) == sorted(
                map(complex, np.conj(lam)), key=lambda z: (z.real, z.imag)
            )
            assert np.allclose(A @ e.right_eigenvectors, e.right_eigenvectors * lam)
            assert numkit.relative_residual(e.reconstruct(), A) <= CFG.recon_tol

    def test_defective_raises(self):
        with pytest.raises(IllConditioned):
            numkit.eig(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_nonsquare_and_nonfinite(self):
        with pytest.raises(ValueError):
            numkit.eig(np.ones((2, 3)))
        with pytest.raises(ValueError):
            numkit.eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestExpm:
    def test_zero_matrix(self):
        assert np.array_equal(numkit.expm(np.zeros((4, 4))), np.eye(4))

    def test_triangular_closed_form(self):
        E = numkit.expm(GEN_A)
        assert np.allclose(E, EXP_GEN_A, atol=1e-12)
        # the three-decimal rendering used throughout the fixtures
        assert np.allclose(
            E, [[0.135, 0.233, 0.632], [0, 0.368, 0.632], [0, 0, 1]], atol=5e-4
        )

    def test_symmetric_closed_form(self):
        Q = np.array([[-1.0, 1.0], [1.0, -1.0]])
        c = (1 + np.exp(-2)) / 2
        assert np.allclose(numkit.expm(Q), [[c, 1 - c], [1 - c, c]], atol=1e-12)

    def test_overflow(self):
        with pytest.raises(Overflow):
            numkit.expm(np.array([[1e4]]))

    def test_intensity_exponentials_stochastic(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            n = int(rng.integers(2, 7))
            P = numkit.expm(random_intensity(rng, n))
            assert np.min(P) >= -CFG.entry_tol
            assert np.max(np.abs(P.sum(axis=1) - 1.0)) <= n * CFG.entry_tol


class TestLogmBranch:
    def test_identity_principal_is_zero(self):
        e = numkit.eig(np.eye(3))
        L = numkit.logm_branch(e, [0, 0, 0])
        assert np.allclose(L, 0.0)

    def test_cluster_offsets_must_agree(self):
        e = numkit.eig(np.eye(3))
        with pytest.raises(RepeatedEigenvalues):
            numkit.logm_branch(e, [0, 1, 0])

    def test_product_fixture_has_negative_offdiagonal(self):
        P = numkit.expm(GEN_B) @ numkit.expm(GEN_A)
        L = numkit.as_real(numkit.logm_branch(numkit.eig(P), [0, 0, 0]))
        assert L is not None
        off = L[~np.eye(3, dtype=bool)]
        assert np.min(off) < -1e-3

    def test_two_state_closed_form(self):
        P = np.array([[0.9, 0.1], [0.2, 0.8]])
        # rank-one update form: log P = log(l2)/(l2 - 1) * (P - I) with l2 = det
        expected = (np.log(0.7) / (0.7 - 1.0)) * (P - np.eye(2))
        L = numkit.as_real(numkit.logm_branch(numkit.eig(P), [0, 0]))
        assert np.allclose(L, expected, atol=1e-12)
        assert np.allclose(
            L, [[-0.11889, 0.11889], [0.23778, -0.23778]], atol=5e-6
        )

    def test_singular_raises(self):
        e = numkit.eig(np.diag([1.0, 0.0]))
        with pytest.raises(SingularMatrix):
            numkit.logm_branch(e, [0, 0])

    def test_nonzero_offset_shifts_eigenvalue(self):
        e = numkit.eig(np.diag([2.0, 0.5]))
        L = numkit.logm_branch(e, [1, 0])
        assert np.allclose(np.diag(L), [np.log(2) + 2j * np.pi, np.log(0.5)])

    def test_round_trip_fuzzed(self):
        rng = np.random.default_rng(2)
        done = 0
        while done < 300:
            n = int(rng.integers(2, 7))
            P = random_stochastic(rng, n)
            lam = np.linalg.eigvals(P)
            # a real principal logarithm needs the spectrum off the closed
            # negative real axis
            if np.any((lam.real < 0) & (np.abs(lam.imag) <= 1e-9 * (1 + np.abs(lam)))):
                continue
            if min_eig_gap(P) < CFG.distinct_tol:
                continue
            done += 1
            L = numkit.as_real(numkit.logm_branch(numkit.eig(P), [0] * n))
            assert L is not None
            assert numkit.relative_residual(numkit.expm(L), P) <= 1e-8


class TestPrimaryRoot:
    def test_order_one_is_identity_map(self):
        A = np.array([[2.0, 1.0], [0.5, 3.0]])
        assert np.array_equal(numkit.primary_root(A, 1), A)

    def test_scalar_multiple_of_identity(self):
        assert np.allclose(numkit.primary_root(4.0 * np.eye(3), 2), 2.0 * np.eye(3))

    def test_triangular_square_root(self):
        E = numkit.expm(GEN_A)
        R = numkit.primary_root(E, 2)
        assert np.allclose(np.diag(R), [np.exp(-1), np.exp(-0.5), 1.0], atol=1e-10)
        assert np.allclose(R @ R, E, atol=1e-8)

    def test_errors(self):
        with pytest.raises(SingularMatrix):
            numkit.primary_root(np.diag([1.0, 0.0]), 2)
        with pytest.raises(NegativeRealEigenvalue):
            numkit.primary_root(np.array([[0.0, 1.0], [1.0, 0.0]]), 2)
        with pytest.raises(ValueError):
            numkit.primary_root(np.eye(2), 0)

    def test_repeated_power_reconstructs_inverse_m(self):
        rng = np.random.default_rng(3)
        for k in range(200):
            n = int(rng.integers(2, 7))
            B = random_inverse_m(rng, n)
            order = (2, 3, 5, 7)[k % 4]
            R = numkit.primary_root(B, order)
            assert numkit.relative_residual(np.linalg.matrix_power(R, order), B) <= 1e-7


class TestPerturbDistinct:
    def test_distinct_input_unchanged(self):
        A = np.diag([1.0, 2.0, 3.0])
        assert np.array_equal(numkit.perturb_distinct(A), A)

    def test_identity_two_by_two(self):
        A = numkit.perturb_distinct(np.eye(2))
        assert np.max(np.abs(A - np.eye(2))) <= 1e-6
        assert min_eig_gap(A) >= CFG.distinct_tol

    def test_triangular_fixture_pattern_preserved(self):
        A = numkit.perturb_distinct(SCALED_TRIANGLE)
        assert np.array_equal(
            np.abs(A) > CFG.entry_tol, np.abs(SCALED_TRIANGLE) > CFG.entry_tol
        )
        assert len(set(np.round(np.diag(A), 12))) == 3
        assert min_eig_gap(A) >= CFG.distinct_tol

    def test_stochastic_rows_compensated(self):
        # repeated eigenvalues, every row with at least two pattern entries
        P = np.array([[0.5, 0.25, 0.25], [0.25, 0.5, 0.25], [0.25, 0.25, 0.5]])
        assert min_eig_gap(P) < CFG.distinct_tol
        A = numkit.perturb_distinct(P)
        assert np.max(np.abs(A.sum(axis=1) - 1.0)) <= 3 * CFG.entry_tol
        assert min_eig_gap(A) >= CFG.distinct_tol
        assert np.max(np.abs(A - P)) <= 1e-6 * (1 + np.linalg.norm(P))

    def test_zero_matrix_fails(self):
        with pytest.raises(PerturbationFailed):
            numkit.perturb_distinct(np.zeros((2, 2)))


class TestAsReal:
    def test_small_residue_truncated(self):
        M = np.eye(2) + 1e-12j * np.ones((2, 2))
        R = numkit.as_real(M)
        assert R is not None and R.dtype == float

    def test_large_residue_rejected(self):
        assert numkit.as_real(np.eye(2) + 0.5j * np.ones((2, 2))) is None

    def test_real_input_passthrough(self):
        A = np.ones((2, 2))
        assert np.array_equal(numkit.as_real(A), A)
