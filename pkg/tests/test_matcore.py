import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpure import matcore as mc
from qpure.errors import DimensionMismatch, NotHermitian, NotSquare, QpureError
from qpure.rng import Xoshiro256, ginibre
from qpure.states import random_density


def random_hermitian(dim, seed):
    g = ginibre(dim, dim, Xoshiro256(seed))
    return g + mc.dag(g)


class TestHermitianEig:
    def test_identity(self):
        w, v = mc.hermitian_eig(mc.identity(2))
        np.testing.assert_allclose(w, [1, 1])
        np.testing.assert_allclose(v, mc.identity(2), atol=1e-15)

    def test_diagonal_sorted_descending(self):
        w, v = mc.hermitian_eig(np.diag([0.25, 0.75]))
        np.testing.assert_allclose(w, [0.75, 0.25])
        np.testing.assert_allclose(v[:, 0], [0, 1], atol=1e-15)
        np.testing.assert_allclose(v[:, 1], [1, 0], atol=1e-15)

    def test_pauli_x(self):
        # characteristic polynomial lambda^2 - 1
        w, _ = mc.hermitian_eig([[0, 1], [1, 0]])
        np.testing.assert_allclose(w, [1, -1], atol=1e-15)

    def test_errors(self):
        with pytest.raises(NotSquare):
            mc.hermitian_eig(np.zeros((2, 3)))
        with pytest.raises(NotHermitian):
            mc.hermitian_eig([[0, 1], [0, 0]])

    def test_phase_convention(self):
        w, v = mc.hermitian_eig(random_hermitian(5, 3))
        for col in v.T:
            pivot = col[np.argmax(np.abs(col))]
            assert abs(pivot.imag) < 1e-15 and pivot.real > 0

    def test_deterministic_under_degeneracy(self):
        m = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        first = mc.hermitian_eig(m)
        second = mc.hermitian_eig(m.copy())
        assert np.array_equal(first[1], second[1])

    def test_reconstruction_random(self):
        worst = 0.0
        for seed in range(500):
            dim = 1 + seed % 8
            m = random_hermitian(dim, seed)
            w, v = mc.hermitian_eig(m)
            assert np.all(np.diff(w) <= 0)
            worst = max(worst, mc.max_abs(v @ np.diag(w) @ mc.dag(v) - m))
            assert mc.max_abs(mc.dag(v) @ v - mc.identity(dim)) < 1e-12
        assert worst <= 1e-10


class TestSvd:
    def test_identity(self):
        _, s, _ = mc.svd(mc.identity(3))
        np.testing.assert_allclose(s, [1, 1, 1])

    def test_zero(self):
        _, s, _ = mc.svd(np.zeros((2, 2)))
        np.testing.assert_allclose(s, [0, 0])

    def test_hand_example(self):
        # M^dagger M = identity / 2
        _, s, _ = mc.svd(0.5 * np.array([[1, -1], [1, 1]]))
        np.testing.assert_allclose(s, [2**-0.5, 2**-0.5], atol=1e-15)

    def test_reconstruction_random(self):
        worst = 0.0
        for seed in range(500):
            gen = Xoshiro256(seed)
            rows = 1 + int(gen.uniform() * 6)
            cols = 1 + int(gen.uniform() * 6)
            m = ginibre(rows, cols, gen)
            left, s, right = mc.svd(m)
            assert np.all(np.diff(s) <= 0)
            worst = max(worst, mc.max_abs(left @ np.diag(s) @ mc.dag(right) - m))
            assert mc.is_isometry(left) and mc.is_isometry(right)
        assert worst <= 1e-10

    def test_full_factors_are_unitary(self):
        m = ginibre(4, 2, Xoshiro256(1))
        left, s, right = mc.svd(m, full=True)
        assert mc.is_unitary(left) and mc.is_unitary(right)
        assert mc.max_abs(left[:, :2] @ np.diag(s) @ mc.dag(right) - m) < 1e-12


class TestTensor:
    def test_identities(self):
        np.testing.assert_array_equal(mc.tensor(mc.identity(2), mc.identity(3)), mc.identity(6))

    def test_diagonals(self):
        out = mc.tensor(np.diag([1, 0]), np.diag([0, 1]))
        np.testing.assert_array_equal(out, np.diag([0, 1, 0, 0]))

    def test_basis_columns(self):
        out = mc.tensor(mc.basis_vector(0, 2), mc.basis_vector(1, 2))
        np.testing.assert_array_equal(out, mc.basis_vector(1, 4))

    def test_index_convention(self):
        a = np.arange(4).reshape(2, 2)
        b = np.arange(9).reshape(3, 3)
        t = mc.tensor(a, b)
        for ia in range(2):
            for ja in range(2):
                for ib in range(3):
                    for jb in range(3):
                        assert t[ia * 3 + ib, ja * 3 + jb] == a[ia, ja] * b[ib, jb]

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_associative(self, seed):
        gen = Xoshiro256(seed)
        a, b, c = (ginibre(2, 3, gen) for _ in range(3))
        lhs = mc.tensor(mc.tensor(a, b), c)
        rhs = mc.tensor(a, mc.tensor(b, c))
        assert mc.max_abs(lhs - rhs) <= 1e-12


class TestPartialTrace:
    def test_product_state(self):
        rho = random_density(3, 2, 1).matrix
        sigma = random_density(2, 2, 2).matrix
        out = mc.partial_trace(mc.tensor(rho, sigma), (3, 2), keep="first")
        assert mc.max_abs(out - rho) < 1e-15

    def test_bell_state(self):
        bell = (mc.basis_vector(0, 4) + mc.basis_vector(3, 4)) / np.sqrt(2)
        out = mc.partial_trace(mc.projector(bell), (2, 2), keep="first")
        np.testing.assert_allclose(out, mc.identity(2) / 2, atol=1e-15)

    def test_trace_first_factor(self):
        out = mc.partial_trace(mc.identity(4) / 4, (2, 2), keep="second")
        np.testing.assert_allclose(out, mc.identity(2) / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mc.partial_trace(mc.identity(5), (2, 2))

    @given(st.integers(0, 10_000))
    @settings(max_examples=100, deadline=None)
    def test_tensor_then_trace(self, seed):
        gen = Xoshiro256(seed)
        da = 1 + int(gen.uniform() * 4)
        db = 1 + int(gen.uniform() * 4)
        a, b = ginibre(da, da, gen), ginibre(db, db, gen)
        out = mc.partial_trace(mc.tensor(a, b), (da, db), keep="first")
        assert mc.max_abs(out - a * np.trace(b)) <= 1e-12
        assert abs(np.trace(out) - np.trace(mc.tensor(a, b))) <= 1e-12


def test_tolerances_bounds():
    assert mc.Tolerances().eig_zero == 1e-9
    with pytest.raises(QpureError):
        mc.Tolerances(eig_zero=1e-3)
    with pytest.raises(QpureError):
        mc.Tolerances(equal_tol=-1.0)


def test_non_finite_rejected():
    with pytest.raises(QpureError):
        mc.as_matrix([[np.nan, 0], [0, 1]])


def test_orthocomplement():
    cols = np.array([[1, 0], [0, 1], [0, 0]], dtype=complex)
    comp = mc.orthocomplement(cols, 3)
    assert comp.shape == (3, 1)
    assert mc.max_abs(mc.dag(cols) @ comp) < 1e-15
