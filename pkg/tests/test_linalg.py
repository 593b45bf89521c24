import numpy as np
import pytest

from satnull.linalg import fix_phase, hermitian_eig_max, least_squares, null_space


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


class TestHermitianEigMax:
    def test_diagonal(self):
        val, vec = hermitian_eig_max(np.diag([2.0, 1.0]))
        assert val == pytest.approx(2.0)
        np.testing.assert_allclose(vec, [1.0, 0.0], atol=1e-14)

    def test_identity_deterministic(self):
        val, vec = hermitian_eig_max(np.eye(3))
        assert val == pytest.approx(1.0)
        assert np.linalg.norm(vec) == pytest.approx(1.0)
        # largest-magnitude entry real nonnegative, identical across calls
        assert vec[np.argmax(np.abs(vec))].imag == 0.0
        _, again = hermitian_eig_max(np.eye(3))
        np.testing.assert_array_equal(vec, again)

    def test_2x2_hand_oracle(self):
        # characteristic polynomial of [[1, j], [-j, 1]] is l^2 - 2l, so the
        # top eigenpair is (2, [1, -j]/sqrt(2)) under the phase convention
        a = np.array([[1.0, 1j], [-1j, 1.0]])
        val, vec = hermitian_eig_max(a)
        assert val == pytest.approx(2.0, abs=1e-12)
        expected = np.array([1.0, -1j]) / np.sqrt(2.0)
        np.testing.assert_allclose(vec, expected, atol=1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            hermitian_eig_max(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        a = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ValueError, match="Hermitian"):
            hermitian_eig_max(a)

    def test_rejects_non_finite(self):
        a = np.array([[np.inf, 0.0], [0.0, 1.0]])
        with pytest.raises(ValueError, match="non-finite"):
            hermitian_eig_max(a)

    def test_random_residual(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(2, 17))
            m = crandn(rng, n, n)
            a = m + m.conj().T
            val, vec = hermitian_eig_max(a)
            residual = np.linalg.norm(a @ vec - val * vec)
            assert residual <= 1e-8 * max(1.0, abs(val))


class TestNullSpace:
    def test_coordinate(self):
        basis = null_space(np.array([[1.0, 0.0]]))
        assert basis.shape == (2, 1)
        np.testing.assert_allclose(np.abs(basis[:, 0]), [0.0, 1.0], atol=1e-14)

    def test_full_rank_empty(self):
        assert null_space(np.eye(2)).shape == (2, 0)

    def test_symmetric_pair(self):
        basis = null_space(np.array([[1.0, 1.0]]))
        expected = np.array([1.0, -1.0]) / np.sqrt(2.0)
        np.testing.assert_allclose(basis[:, 0], expected, atol=1e-12)

    def test_zero_rows_gives_identity(self):
        basis = null_space(np.zeros((0, 3)))
        np.testing.assert_array_equal(basis, np.eye(3))

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError, match="tol"):
            null_space(np.eye(2), tol=0.0)

    def test_rank_deficient_products(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            m, r, n = (int(v) for v in rng.integers(3, 9, size=3))
            r = min(r, m, n) - 1 or 1
            a = crandn(rng, m, r) @ crandn(rng, r, n)
            basis = null_space(a)
            assert basis.shape[1] == n - min(r, n)
            if basis.shape[1]:
                assert np.linalg.norm(a @ basis) <= 1e-8 * np.linalg.norm(a)
                gram = basis.conj().T @ basis
                np.testing.assert_allclose(gram, np.eye(basis.shape[1]), atol=1e-10)


class TestLeastSquares:
    def test_identity(self):
        b = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_allclose(least_squares(np.eye(2), b), b, atol=1e-14)

    def test_scaling(self):
        x = least_squares(2.0 * np.eye(2), np.eye(2))
        np.testing.assert_allclose(x, 0.5 * np.eye(2), atol=1e-14)

    def test_normal_equations_hand_oracle(self):
        # A = [1; 1], B = [1; 3]: A^H A x = A^H B gives 2x = 4, x = 2
        x = least_squares(np.array([[1.0], [1.0]]), np.array([[1.0], [3.0]]))
        assert x[0, 0] == pytest.approx(2.0)

    def test_rejects_row_mismatch(self):
        with pytest.raises(ValueError, match="row mismatch"):
            least_squares(np.eye(2), np.ones((3, 1)))

    def test_residual_orthogonal_to_columns(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = crandn(rng, 8, 3)
            b = crandn(rng, 8, 2)
            x = least_squares(a, b)
            residual = a @ x - b
            assert np.max(np.abs(a.conj().T @ residual)) <= 1e-8


class TestFixPhase:
    def test_largest_entry_real_nonnegative(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            v = crandn(rng, 6)
            fixed = fix_phase(v)
            pivot = fixed[np.argmax(np.abs(fixed))]
            assert pivot.imag == pytest.approx(0.0, abs=1e-15)
            assert pivot.real >= 0.0
            assert np.linalg.norm(fixed) == pytest.approx(np.linalg.norm(v))

    def test_zero_vector_unchanged(self):
        np.testing.assert_array_equal(fix_phase(np.zeros(3, complex)), np.zeros(3, complex))
