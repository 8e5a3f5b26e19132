import numpy as np
import pytest

from specsub import (
    IndexOutOfRange,
    NonHermitianInput,
    eigh,
    operator_norm,
    require_hermitian,
    sharp_example_2x2,
    sign_split,
    spectral_projector,
)


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


class TestRequireHermitian:
    def test_accepts_real_symmetric(self):
        a = np.array([[1.0, 2.0], [2.0, -1.0]])
        out = require_hermitian(a)
        assert out.dtype == np.float64

    def test_accepts_complex_hermitian(self):
        a = np.array([[1.0, 1j], [-1j, 2.0]])
        assert require_hermitian(a).dtype == np.complex128

    def test_rejects_asymmetric(self):
        with pytest.raises(NonHermitianInput):
            require_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(NonHermitianInput):
            require_hermitian(np.zeros((2, 3)))

    def test_rejects_nonfinite(self):
        with pytest.raises(NonHermitianInput):
            require_hermitian(np.array([[np.nan, 0.0], [0.0, 0.0]]))

    def test_tolerates_rounding_level_asymmetry(self):
        a = np.array([[1.0, 0.5], [0.5 + 1e-14, 1.0]])
        require_hermitian(a)


class TestEigh:
    def test_diagonal(self):
        dec = eigh(np.diag([-0.5, 0.5]))
        np.testing.assert_allclose(dec.eigenvalues, [-0.5, 0.5], rtol=0, atol=0)
        np.testing.assert_allclose(np.abs(dec.eigenvectors), np.eye(2), atol=1e-15)

    def test_symmetry_forced_pair(self):
        dec = eigh(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-15)

    def test_sharp_example_balanced_split(self):
        # v_plus = v_minus = 1/4 makes the perturbed spectrum symmetric at
        # +-sqrt(1 - 1/4)/2 = +-sqrt(3)/4
        inst, _ = sharp_example_2x2(0.25, 0.25)
        dec = eigh(inst.a + inst.v)
        expected = np.sqrt(3.0) / 4.0
        np.testing.assert_allclose(dec.eigenvalues, [-expected, expected], atol=1e-15)

    def test_ascending_and_orthonormal(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(1, 13))
            h = random_hermitian(rng, n)
            dec = eigh(h)
            assert np.all(np.diff(dec.eigenvalues) >= 0)
            gram = dec.eigenvectors.conj().T @ dec.eigenvectors
            assert np.max(np.abs(gram - np.eye(n))) <= 1e-10
            resid = np.linalg.norm(
                h @ dec.eigenvectors - dec.eigenvectors * dec.eigenvalues, axis=0
            )
            assert resid.max() <= 1e-10 * (1.0 + np.abs(dec.eigenvalues).max())

    def test_deterministic(self):
        rng = np.random.default_rng(6)
        h = random_hermitian(rng, 9)
        d1, d2 = eigh(h), eigh(h.copy())
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)


class TestOperatorNorm:
    def test_zero(self):
        assert operator_norm(np.zeros((3, 3))) == 0.0

    def test_diagonal(self):
        assert operator_norm(np.diag([-3.0, 2.0])) == 3.0

    def test_sharp_example_perturbation(self):
        # spec(V) = {-v_minus, v_plus}, so the norm is max(v_plus, v_minus)
        inst, _ = sharp_example_2x2(0.3, 0.2)
        assert operator_norm(inst.v) == pytest.approx(0.3, abs=1e-12)

    def test_matches_svd(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            h = random_hermitian(rng, int(rng.integers(2, 10)))
            s = np.linalg.svd(h, compute_uv=False)[0]
            assert operator_norm(h) == pytest.approx(s, rel=1e-12)


class TestSignSplit:
    def test_positive_semidefinite_has_no_negative_part(self):
        rng = np.random.default_rng(8)
        g = rng.standard_normal((4, 4))
        psd = g @ g.T
        split = sign_split(psd)
        assert split.norm_minus == 0.0
        assert np.max(np.abs(split.v_minus)) <= 1e-10 * (1.0 + split.norm_v)

    def test_diagonal_split(self):
        split = sign_split(np.diag([2.0, -1.0]))
        np.testing.assert_allclose(split.v_plus, np.diag([2.0, 0.0]), atol=1e-12)
        np.testing.assert_allclose(split.v_minus, np.diag([0.0, 1.0]), atol=1e-12)
        assert split.norm_plus == 2.0
        assert split.norm_minus == 1.0

    def test_sharp_example_norms(self):
        inst, _ = sharp_example_2x2(0.3, 0.2)
        split = sign_split(inst.v)
        assert split.norm_plus == pytest.approx(0.3, abs=1e-12)
        assert split.norm_minus == pytest.approx(0.2, abs=1e-12)

    def test_zero_matrix(self):
        split = sign_split(np.zeros((3, 3)))
        assert split.norm_plus == split.norm_minus == split.norm_v == 0.0

    def test_invariants_on_random_matrices(self):
        # reconstruction, positive semidefiniteness, orthogonal ranges, and
        # the norm ordering, over 1000 draws with n <= 12
        rng = np.random.default_rng(9)
        for _ in range(1000):
            n = int(rng.integers(1, 13))
            v = random_hermitian(rng, n)
            split = sign_split(v)
            tol = 1e-10 * (1.0 + split.norm_v)
            assert np.max(np.abs(split.v_plus - split.v_minus - v)) <= tol
            assert np.linalg.eigvalsh(split.v_plus).min() >= -tol
            assert np.linalg.eigvalsh(split.v_minus).min() >= -tol
            prod_tol = 1e-10 * (1.0 + split.norm_v**2)
            assert np.max(np.abs(split.v_plus @ split.v_minus)) <= prod_tol
            assert max(split.norm_plus, split.norm_minus) <= split.norm_v + 1e-12


class TestSpectralProjector:
    def test_empty_set_gives_zero(self):
        dec = eigh(np.diag([1.0, 2.0, 3.0]))
        p = spectral_projector(dec, [])
        assert p.rank == 0
        assert np.max(np.abs(p.matrix)) == 0.0

    def test_all_indices_give_identity(self):
        rng = np.random.default_rng(10)
        dec = eigh(random_hermitian(rng, 5))
        p = spectral_projector(dec, range(5))
        assert p.rank == 5
        assert np.max(np.abs(p.matrix - np.eye(5))) <= 1e-10

    def test_selected_eigenvalue_of_diagonal(self):
        # component {1/2} of diag(1/2, -1/2) projects onto the first axis
        dec = eigh(np.diag([0.5, -0.5]))
        (idx,) = [k for k, lam in enumerate(dec.eigenvalues) if lam > 0]
        p = spectral_projector(dec, [idx])
        np.testing.assert_allclose(p.matrix, np.diag([1.0, 0.0]), atol=1e-14)

    def test_out_of_range(self):
        dec = eigh(np.diag([1.0, 2.0]))
        with pytest.raises(IndexOutOfRange):
            spectral_projector(dec, [2])
        with pytest.raises(IndexOutOfRange):
            spectral_projector(dec, [-1])

    def test_projector_invariants_and_complementarity(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 13))
            dec = eigh(random_hermitian(rng, n))
            k = int(rng.integers(1, n))
            idx = rng.choice(n, size=k, replace=False)
            p = spectral_projector(dec, idx)
            q = spectral_projector(dec, sorted(set(range(n)) - set(idx.tolist())))
            assert np.max(np.abs(p.matrix @ p.matrix - p.matrix)) <= 1e-10
            assert np.max(np.abs(p.matrix - p.matrix.conj().T)) <= 1e-12
            assert abs(np.trace(p.matrix).real - p.rank) <= 1e-8
            assert np.max(np.abs(p.matrix + q.matrix - np.eye(n))) <= 1e-10

    def test_projector_difference_norm_at_most_one(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            n = int(rng.integers(2, 10))
            d1 = eigh(random_hermitian(rng, n))
            d2 = eigh(random_hermitian(rng, n))
            p = spectral_projector(d1, range(int(rng.integers(1, n))))
            q = spectral_projector(d2, range(int(rng.integers(1, n))))
            assert operator_norm(p.matrix - q.matrix) <= 1.0 + 1e-10

    def test_degenerate_eigenspace_is_basis_independent(self):
        # rotate the basis of a degenerate eigenspace; the projector onto the
        # degenerate cluster must not move
        rng = np.random.default_rng(13)
        q = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))[0]
        vals = np.array([-2.0, 1.0, 1.0, 1.0, 3.0])
        h = (q * vals) @ q.conj().T
        h = 0.5 * (h + h.conj().T)
        dec = eigh(h)
        idx = [k for k, lam in enumerate(dec.eigenvalues) if abs(lam - 1.0) < 1e-8]
        assert len(idx) == 3
        p_ref = spectral_projector(dec, idx)
        for trial in range(5):
            u = dec.eigenvectors.copy()
            rot = np.linalg.qr(
                rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            )[0]
            u[:, idx] = u[:, idx] @ rot
            cols = u[:, idx]
            p_rot = cols @ cols.conj().T
            assert np.max(np.abs(p_rot - p_ref.matrix)) <= 1e-10
