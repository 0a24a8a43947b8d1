import numpy as np
import pytest

from accretive import (
    assemble_elliptic,
    decay_fit,
    default_fit_window,
    extract_factorization,
    general_eig,
    hermitian_eig,
    make_grid,
    numerical_range,
    psd_sqrt,
    resolvent,
    resolvent_real_part,
    schatten_norm,
    singular_values,
)
from accretive.exceptions import (
    NonAccretive,
    NonpositiveValue,
    NotHermitian,
    NotPositiveDefinite,
    SpectrumHit,
    WindowTooSmall,
)
from conftest import WORKED_2X2, random_accretive


def test_hermitian_eig_diagonal():
    spec, vecs = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(spec.values, [1.0, 2.0, 3.0])
    assert np.allclose(vecs.conj().T @ vecs, np.eye(3), atol=1e-10)
    assert spec.residual <= 1e-10


def test_hermitian_eig_dirichlet_stencil():
    T = assemble_elliptic(make_grid(0, 1, 3), 1.0)
    spec, _ = hermitian_eig(T.entries)
    assert np.allclose(spec.values, [16 * (2 - np.sqrt(2)), 32.0, 16 * (2 + np.sqrt(2))])


def test_hermitian_eig_guard():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_general_eig_worked_2x2():
    spec = general_eig(WORKED_2X2)
    assert sorted(spec.values, key=lambda z: z.imag) == pytest.approx([2 - 1j, 2 + 1j])
    assert spec.residual <= 1e-12


def test_general_eig_triangular():
    M = np.triu(np.arange(1.0, 10.0).reshape(3, 3)) + np.diag([5.0, 7.0, 9.0])
    spec = general_eig(M)
    assert np.allclose(sorted(spec.values.real), sorted(np.diag(M)))


def test_general_eig_similarity_invariance(rng):
    M = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    P = np.eye(12) + 0.1 * rng.standard_normal((12, 12))
    transformed = P @ M @ np.linalg.inv(P)
    a = np.sort_complex(general_eig(M).values)
    b = np.sort_complex(general_eig(transformed).values)
    assert np.allclose(a, b, atol=1e-8)


def test_general_eig_descending_modulus():
    spec = general_eig(np.diag([1.0, -4.0, 2.0]))
    assert np.all(np.diff(np.abs(spec.values)) <= 1e-14)


def test_general_eig_surfaces_convergence_failure(monkeypatch):
    from accretive.exceptions import ConvergenceFailure

    def boom(_):
        raise np.linalg.LinAlgError("did not converge")

    monkeypatch.setattr(np.linalg, "eig", boom)
    with pytest.raises(ConvergenceFailure):
        general_eig(np.eye(3))


def test_psd_sqrt_scalar():
    half, inv_half = psd_sqrt(2.0 * np.eye(4))
    assert np.allclose(half, np.sqrt(2) * np.eye(4))
    assert np.allclose(inv_half, np.eye(4) / np.sqrt(2))


def test_psd_sqrt_reconstruction(rng):
    Q = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    H = Q @ Q.conj().T / 64 + 0.1 * np.eye(64)
    half, inv_half = psd_sqrt(H)
    assert np.linalg.norm(half @ half - H, 2) <= 1e-10 * np.linalg.norm(H, 2)
    assert np.linalg.norm(half @ inv_half - np.eye(64), 2) <= 1e-10


def test_psd_sqrt_guard():
    with pytest.raises(NotPositiveDefinite):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_factorization_worked_2x2():
    fac = extract_factorization(WORKED_2X2)
    assert np.allclose(fac.hermitian, 2.0 * np.eye(2), atol=1e-12)
    assert np.allclose(fac.balanced_skew, [[0.0, 0.5], [0.5, 0.0]], atol=1e-12)
    assert fac.skew_norm == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(fac.distortion, 1.25 * np.eye(2), atol=1e-12)
    assert fac.distortion_norm == pytest.approx(1.25, abs=1e-12)
    assert fac.distortion_inv_norm == pytest.approx(0.8, abs=1e-12)


def test_factorization_hermitian_case():
    H = np.diag([1.0, 3.0]).astype(complex)
    fac = extract_factorization(H)
    assert np.allclose(fac.balanced_skew, 0.0, atol=1e-14)
    assert np.allclose(fac.distortion, np.eye(2), atol=1e-14)


def test_factorization_requires_accretive():
    with pytest.raises(NonAccretive):
        extract_factorization(np.diag([1.0, -1.0]).astype(complex))


@pytest.mark.parametrize("n", [8, 32, 64])
def test_factorization_reconstruction(rng, n):
    W = random_accretive(rng, n)
    fac = extract_factorization(W)
    rebuilt = fac.root @ (np.eye(n) + 1j * fac.balanced_skew) @ fac.root
    assert np.linalg.norm(rebuilt - W, 2) <= 1e-10 * np.linalg.norm(W, 2)
    # resolvent identity through the factorization
    direct = np.linalg.inv(W)
    via = fac.inv_root @ np.linalg.inv(np.eye(n) + 1j * fac.balanced_skew) @ fac.inv_root
    assert np.linalg.norm(direct - via, 2) <= 1e-10 * np.linalg.norm(direct, 2)


def test_cayley_pair_identity(rng):
    W = random_accretive(rng, 24)
    B = extract_factorization(W).balanced_skew
    eye = np.eye(24)
    lhs = np.linalg.inv(eye + 1j * B) + np.linalg.inv(eye - 1j * B)
    rhs = 2.0 * np.linalg.inv(eye + B @ B)
    assert np.linalg.norm(lhs - rhs, 2) <= 1e-12


def test_distortion_norms_bounds(rng):
    for n in (6, 20):
        fac = extract_factorization(random_accretive(rng, n))
        assert np.linalg.eigvalsh(fac.distortion)[0] >= 1.0 - 1e-12
        assert fac.distortion_inv_norm <= 1.0 + 1e-12


def test_skew_norm_bounded_by_range_aperture(model_64):
    fac = extract_factorization(model_64.operator)
    sample = numerical_range(model_64.operator, m_angles=32, m_random=32, seed=0)
    assert fac.skew_norm <= np.tan(sample.aperture) + 1e-8


def test_root_floor_matches_hermitian_floor(model_64):
    fac = extract_factorization(model_64.operator)
    floor = np.linalg.eigvalsh(fac.hermitian)[0]
    assert np.linalg.eigvalsh(fac.root)[0] >= np.sqrt(floor) - 1e-10


def test_resolvent_scalar():
    assert np.allclose(resolvent(2.0 * np.eye(3), 1.0), np.eye(3) / 3.0)


def test_resolvent_worked_2x2():
    expected = np.array([[2.0, -1j], [-1j, 2.0]]) / 5.0
    assert np.allclose(resolvent(WORKED_2X2, 0.0), expected, atol=1e-14)


def test_resolvent_spectrum_hit():
    with pytest.raises(SpectrumHit):
        resolvent(np.diag([1.0, 2.0]).astype(complex), -2.0)


def test_resolvent_real_part_worked_2x2():
    assert np.allclose(resolvent_real_part(WORKED_2X2), 0.4 * np.eye(2), atol=1e-14)


def test_resolvent_real_part_hermitian_case():
    H = np.diag([2.0, 4.0]).astype(complex)
    assert np.allclose(resolvent_real_part(H), np.linalg.inv(H))


def test_resolvent_real_part_identity_has_no_half(rng):
    W = random_accretive(rng, 16)
    fac = extract_factorization(W)
    V = resolvent_real_part(W)
    via = fac.inv_root @ np.linalg.inv(fac.distortion) @ fac.inv_root
    assert np.linalg.norm(V - via, 2) <= 1e-10 * np.linalg.norm(V, 2)
    halved = 0.5 * via
    assert np.linalg.norm(V - halved, 2) > 0.1 * np.linalg.norm(V, 2)


def test_singular_values_diagonal():
    s = singular_values(np.diag([3.0, -4.0]))
    assert np.allclose(s, [4.0, 3.0])
    assert schatten_norm(np.diag([3.0, -4.0]), 2.0) == pytest.approx(5.0)


def test_singular_values_unitary_invariance(rng):
    M = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
    Q, _ = np.linalg.qr(rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10)))
    assert np.allclose(singular_values(Q @ M), singular_values(M), atol=1e-10)


def test_singular_values_of_hermitian_psd():
    H = np.diag([0.5, 2.0, 7.0]).astype(complex)
    assert np.allclose(singular_values(H), [7.0, 2.0, 0.5])


def test_resolvent_real_part_snumbers_equal_eigenvalues(model_64):
    V = resolvent_real_part(model_64.operator)
    eigs = np.sort(np.linalg.eigvalsh(V))[::-1]
    assert eigs[-1] > 0
    assert np.allclose(singular_values(V), eigs, atol=1e-12)


def test_schatten_norm_rejects_small_p():
    with pytest.raises(ValueError):
        schatten_norm(np.eye(2), 0.5)


def test_decay_fit_exact_power_law():
    values = np.arange(1.0, 101.0) ** -2.0
    fit = decay_fit(values, window=(1, 100))
    assert fit.exponent == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_decay_fit_dirichlet_inverse_spectrum():
    T = assemble_elliptic(make_grid(0, 1, 256), 1.0)
    lam = np.sort(1.0 / np.linalg.eigvalsh(T.entries.real))[::-1]
    fit = decay_fit(lam, window=(5, 128))
    assert 1.90 <= fit.exponent <= 2.05


def test_decay_fit_guards():
    with pytest.raises(NonpositiveValue):
        decay_fit(np.array([1.0, 0.5, 0.0, 0.2, 0.1, 0.05]), window=(1, 6))
    with pytest.raises(WindowTooSmall):
        decay_fit(np.ones(10), window=(1, 3))


def test_default_fit_window_shapes():
    assert default_fit_window(256) == (5, 128)
    assert default_fit_window(64) == (4, 32)
    lo, hi = default_fit_window(8)
    assert hi - lo + 1 >= 5
