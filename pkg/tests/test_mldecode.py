"""Vectorization, QR, sphere decoding vs exhaustive search, FD analysis."""

import numpy as np
import pytest

from relaystc.codes import BudgetExceededError, STCodeLattice, build_lattice, normalize_unit_volume
from relaystc.mldecode import (
    DegenerateChannelError,
    RealizedLattice,
    complexity_profile,
    decoding_exponent,
    exhaustive_ml,
    fd_analyze,
    hr_orthogonal_pairs,
    qr_factor,
    sphere_decode,
    vectorize_real,
)


def _rand_channel(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


# -- vectorization ------------------------------------------------------------------


def test_vectorize_identity_basis():
    B = vectorize_real(np.eye(2, dtype=complex), [np.eye(2, dtype=complex)])
    np.testing.assert_allclose(B[:, 0], [1, 0, 0, 1, 0, 0, 0, 0])


def test_vectorize_imaginary_channel():
    B = vectorize_real(1j * np.eye(2), [np.eye(2, dtype=complex)])
    np.testing.assert_allclose(B[:, 0], [0, 0, 0, 0, 1, 0, 0, 1])


def test_vectorize_column_stacking_order():
    H = np.eye(2, dtype=complex)
    M = np.array([[1, 2], [3, 4]], dtype=complex)
    B = vectorize_real(H, [M])
    np.testing.assert_allclose(B[:, 0], [1, 3, 2, 4, 0, 0, 0, 0])


def test_vectorize_linear():
    rng = np.random.default_rng(0)
    H = _rand_channel(rng, 1, 4)
    A = _rand_channel(rng, 4, 4)
    B = _rand_channel(rng, 4, 4)
    lhs = vectorize_real(H, [A + B])
    rhs = vectorize_real(H, [A]) + vectorize_real(H, [B])
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_vectorize_dimension_mismatch():
    with pytest.raises(ValueError):
        vectorize_real(np.eye(3, dtype=complex), [np.eye(2, dtype=complex)])


# -- QR -----------------------------------------------------------------------------


def test_qr_orthonormal_input():
    B = np.eye(4)[:, :2]
    Q, R = qr_factor(B)
    np.testing.assert_allclose(Q, B, atol=1e-14)
    np.testing.assert_allclose(R, np.eye(2), atol=1e-14)


def test_qr_diagonal_input():
    Q, R = qr_factor(np.diag([2.0, 3.0]))
    np.testing.assert_allclose(Q, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(R, np.diag([2.0, 3.0]), atol=1e-14)


def test_qr_invariants_random():
    rng = np.random.default_rng(1)
    for _ in range(100):
        B = rng.standard_normal((8, 8))
        Q, R = qr_factor(B)
        np.testing.assert_allclose(Q @ R, B, atol=1e-10)
        np.testing.assert_allclose(Q.T @ Q, np.eye(8), atol=1e-10)
        assert np.all(np.diag(R) >= 0)
        assert np.allclose(R, np.triu(R))


def test_qr_rank_deficient_raises():
    B = np.ones((6, 3))
    with pytest.raises(DegenerateChannelError):
        qr_factor(B)


# -- decoding -----------------------------------------------------------------------


def _manual_lattice(R):
    k = R.shape[0]
    return RealizedLattice(B=R.copy(), Q=np.eye(k), R=R.copy())


def test_sphere_hand_example_two_vars():
    R = np.array([[1.0, 0.5], [0.0, 1.0]])
    lat = _manual_lattice(R)
    y = np.array([0.6, 0.9])
    z, nodes = sphere_decode(y, lat, (-1, 1))
    np.testing.assert_array_equal(z, [1, 1])
    np.testing.assert_array_equal(exhaustive_ml(y, lat, (-1, 1)), [1, 1])
    assert nodes >= 2


def test_sphere_noiseless_recovery():
    rng = np.random.default_rng(2)
    code = normalize_unit_volume(build_lattice("golden"))
    for _ in range(20):
        H = _rand_channel(rng, 1, 8)
        lat = RealizedLattice.realize(H, code.basis_complex)
        z0 = rng.choice([-1, 1], size=16)
        y = lat.B @ z0.astype(float)
        z, _ = sphere_decode(y, lat, (-1, 1))
        np.testing.assert_array_equal(z, z0)


def test_sphere_matches_exhaustive_small_dims():
    rng = np.random.default_rng(3)
    code = normalize_unit_volume(build_lattice("silver_-1"))
    for k in (2, 4, 8):
        basis = code.basis_complex[:k]
        for _ in range(400):
            H = _rand_channel(rng, 1, 8)
            lat = RealizedLattice.realize(H, basis)
            z0 = rng.choice([-1, 1], size=k).astype(float)
            y = lat.B @ z0 + rng.standard_normal(lat.B.shape[0]) * 0.4
            zs, _ = sphere_decode(y, lat, (-1, 1))
            ze = exhaustive_ml(y, lat, (-1, 1))
            np.testing.assert_array_equal(zs, ze)


def test_sphere_matches_exhaustive_wider_alphabet():
    rng = np.random.default_rng(4)
    code = normalize_unit_volume(build_lattice("golden"))
    basis = code.basis_complex[:4]
    J = (-3, -1, 1, 3)
    for _ in range(200):
        H = _rand_channel(rng, 1, 8)
        lat = RealizedLattice.realize(H, basis)
        z0 = rng.choice(J, size=4).astype(float)
        y = lat.B @ z0 + rng.standard_normal(lat.B.shape[0]) * 0.5
        zs, _ = sphere_decode(y, lat, J)
        np.testing.assert_array_equal(zs, exhaustive_ml(y, lat, J))


def test_tie_break_lexicographic():
    lat = _manual_lattice(np.eye(2))
    y = np.zeros(2)  # all four candidates are equidistant
    zs, _ = sphere_decode(y, lat, (-1, 1))
    np.testing.assert_array_equal(zs, [-1, -1])
    np.testing.assert_array_equal(exhaustive_ml(y, lat, (-1, 1)), [-1, -1])


def test_finite_initial_radius_still_exact():
    rng = np.random.default_rng(5)
    R = np.triu(rng.standard_normal((4, 4))) + 4 * np.eye(4)
    lat = _manual_lattice(R)
    z0 = np.array([1, -1, 1, 1], dtype=float)
    y = R @ z0 + 0.05 * rng.standard_normal(4)
    z_inf, _ = sphere_decode(y, lat, (-1, 1))
    z_tiny, _ = sphere_decode(y, lat, (-1, 1), initial_radius=1e-6)
    np.testing.assert_array_equal(z_inf, z_tiny)


def test_decode_invariant_under_joint_rescale():
    rng = np.random.default_rng(6)
    code = normalize_unit_volume(build_lattice("golden"))
    basis = code.basis_complex[:6]
    H = _rand_channel(rng, 1, 8)
    lat = RealizedLattice.realize(H, basis)
    z0 = rng.choice([-1, 1], size=6).astype(float)
    y = lat.B @ z0 + 0.3 * rng.standard_normal(lat.B.shape[0])
    z1, _ = sphere_decode(y, lat, (-1, 1))
    lat2 = RealizedLattice.realize(H, 7.5 * basis)
    z2, _ = sphere_decode(7.5 * y, lat2, (-1, 1))
    np.testing.assert_array_equal(z1, z2)


def test_k_equals_one_visits_alphabet_size_nodes():
    lat = _manual_lattice(np.array([[2.0]]))
    z, nodes = sphere_decode(np.array([1.9]), lat, (-1, 1))
    np.testing.assert_array_equal(z, [1])
    assert nodes == 2


def test_exhaustive_budget_guard():
    lat = _manual_lattice(np.eye(16))
    with pytest.raises(BudgetExceededError):
        exhaustive_ml(np.zeros(16), lat, (-3, -1, 1, 3))


# -- fast-decodability --------------------------------------------------------------


def _alamouti_lattice() -> STCodeLattice:
    """Real generator family of the 2x2 orthogonal design (k = 4)."""
    basis = [
        np.array([[1, 0], [0, 1]], dtype=complex),
        np.array([[1j, 0], [0, -1j]], dtype=complex),
        np.array([[0, -1], [1, 0]], dtype=complex),
        np.array([[0, 1j], [1j, 0]], dtype=complex),
    ]
    return STCodeLattice("alamouti", 2, 4, basis)


def test_fd_orthogonal_design():
    lat = _alamouti_lattice()
    rep = fd_analyze(lat, trials=50, tol=1e-9, rng_seed=0, n_d=2)
    assert len(rep.hr_pairs) == 6  # all pairs
    off_diag = np.triu(np.ones((4, 4), dtype=bool), 1)
    assert np.array_equal(rep.zero_mask, off_diag)
    assert rep.complexity_exponent == 1
    assert rep.exact_exponent == 1
    assert rep.fast_decodable and rep.exact_certified


def test_hr_pairs_never_include_diagonal():
    lat = _alamouti_lattice()
    pairs = hr_orthogonal_pairs(lat.basis_complex)
    assert all(i < j for i, j in pairs)


def test_fd_golden_not_fast_decodable():
    code = normalize_unit_volume(build_lattice("golden"))
    rep = fd_analyze(code, trials=100, tol=1e-9, rng_seed=1)
    assert rep.complexity_exponent == code.k - 1
    assert not rep.fast_decodable


def test_fd_silver_variants_fast_decodable():
    for name in ("silver_-17", "silver_-1"):
        code = normalize_unit_volume(build_lattice(name))
        rep = fd_analyze(code, trials=100, tol=1e-9, rng_seed=1)
        assert rep.complexity_exponent < code.k - 1
        assert rep.fast_decodable


def test_fd_block_diagonal_inherits_block_zeros():
    """Zeros certified for the 4x4 iterated block survive in the 8x8 lattice."""
    from relaystc.algebra import iterate_alpha
    from relaystc.codes import silver_codeword
    from relaystc.exactfield import silver_field
    from relaystc.algebra import IterationSpec

    f = silver_field()
    it = IterationSpec(tau="sigma", theta=f.from_rational(-17))
    blocks = []
    for mult in (1, 1j):
        for slot in range(8):
            xv, yv = [0] * 4, [0] * 4
            if slot < 4:
                xv[slot] = mult
            else:
                yv[slot - 4] = mult
            blocks.append(iterate_alpha(silver_codeword(*xv), silver_codeword(*yv), it))
    small = STCodeLattice("silver4", 4, 16, blocks)
    rep4 = fd_analyze(small, trials=60, tol=1e-9, rng_seed=2, n_d=2)
    rep8 = fd_analyze(normalize_unit_volume(build_lattice("silver_-17")),
                      trials=60, tol=1e-9, rng_seed=2)
    assert np.all(rep8.zero_mask[rep4.zero_mask])


def test_decoding_exponent_full_mask_is_k_minus_one():
    k = 6
    mask = np.zeros((k, k), dtype=bool)
    assert decoding_exponent(mask) == k - 1


def test_complexity_profile_bounds_and_determinism():
    code = normalize_unit_volume(build_lattice("silver_-1"))
    p1 = complexity_profile(code, channels=25, rng_seed=9)
    p2 = complexity_profile(code, channels=25, rng_seed=9)
    assert p1 == p2
    assert p1["max_nodes"] <= 2 ** code.k
    one = STCodeLattice("unit", 1, 1, [np.eye(1, dtype=complex)])
    prof = complexity_profile(one, channels=10, rng_seed=3)
    assert prof["mean_nodes"] == 2.0
