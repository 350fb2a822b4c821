import numpy as np
import pytest
from scipy.linalg import expm

from fermi_lab.fock import (
    ModeSpace,
    annihilation,
    creation,
    dense,
    dgamma,
    gram_inner,
    parity_of,
    second_quantize,
    wedge_vector,
)

RNG = np.random.default_rng(20260809)


def random_vector(m):
    return RNG.normal(size=m) + 1j * RNG.normal(size=m)


def random_unitary(m):
    a = RNG.normal(size=(m, m)) + 1j * RNG.normal(size=(m, m))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def anticommutator(x, y):
    return x @ y + y @ x


def test_mode_space_guard():
    with pytest.raises(ValueError):
        ModeSpace(13)
    ModeSpace(13, max_modes=14)  # configurable cap
    with pytest.raises(ValueError):
        ModeSpace(0)


def test_zero_vector_gives_zero_operator():
    space = ModeSpace(3)
    assert creation(space, np.zeros(3)).nnz == 0


def test_single_mode_raising():
    space = ModeSpace(1)
    ad = creation(space, np.array([1.0]))
    vac = space.vacuum()
    one = ad @ vac
    assert np.allclose(one, [0.0, 1.0])
    assert np.allclose(ad @ one, 0.0)


def test_car_relations():
    for m in (3, 4, 6):
        space = ModeSpace(m)
        eye = np.eye(space.dim)
        for _ in range(10):
            f, g = random_vector(m), random_vector(m)
            lhs = anticommutator(dense(annihilation(space, f)), dense(creation(space, g)))
            assert np.max(np.abs(lhs - np.vdot(f, g) * eye)) <= 1e-12
            cc = anticommutator(dense(creation(space, f)), dense(creation(space, g)))
            assert np.max(np.abs(cc)) <= 1e-12


def test_pauli_exclusion_exact():
    space = ModeSpace(4)
    f = random_vector(4)
    sq = creation(space, f) @ creation(space, f)
    assert np.max(np.abs(dense(sq))) <= 1e-12


def test_annihilation_is_adjoint_and_kills_vacuum():
    space = ModeSpace(3)
    f = random_vector(3)
    assert np.allclose(dense(annihilation(space, f)), dense(creation(space, f)).conj().T)
    assert np.allclose(annihilation(space, f) @ space.vacuum(), 0.0)


def test_parity_grading():
    space = ModeSpace(4)
    f = random_vector(4)
    assert parity_of(creation(space, f), 4) == "odd"
    assert parity_of(annihilation(space, f), 4) == "odd"
    assert parity_of(dgamma(space, np.eye(4)), 4) == "even"
    mixed = creation(space, f) + dgamma(space, np.eye(4))
    assert parity_of(mixed, 4) == "mixed"


def test_second_quantize_identity_and_functoriality():
    space = ModeSpace(3)
    eye3 = np.eye(3)
    assert np.allclose(dense(second_quantize(space, eye3)), np.eye(space.dim))
    for _ in range(5):
        u, v = random_unitary(3), random_unitary(3)
        lhs = dense(second_quantize(space, u) @ second_quantize(space, v))
        rhs = dense(second_quantize(space, u @ v))
        assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_second_quantize_rejects_non_unitary():
    space = ModeSpace(2)
    with pytest.raises(ValueError):
        second_quantize(space, np.array([[1.0, 0.0], [0.0, 2.0]]))


def test_exponentiated_dgamma_matches_second_quantization():
    space = ModeSpace(3)
    for _ in range(4):
        h = RNG.normal(size=(3, 3)) + 1j * RNG.normal(size=(3, 3))
        h = h + h.conj().T
        t = 0.37
        lhs = expm(1j * t * dense(dgamma(space, h)))
        rhs = dense(second_quantize(space, expm(1j * t * h)))
        assert np.max(np.abs(lhs - rhs)) <= 1e-8


def test_dgamma_rank_one_and_number_operator():
    space = ModeSpace(3)
    assert dgamma(space, np.zeros((3, 3))).nnz == 0
    f, g = random_vector(3), random_vector(3)
    rank_one = np.outer(f, g.conj())
    lhs = dense(dgamma(space, rank_one))
    rhs = dense(creation(space, f) @ annihilation(space, g))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12
    num = dense(dgamma(space, np.eye(3)))
    pops = [bin(i).count("1") for i in range(space.dim)]
    assert np.allclose(num, np.diag(pops))


def test_gram_inner_edge_cases():
    assert gram_inner([], []) == 1.0
    u, v = random_vector(4), random_vector(4)
    assert gram_inner([u], [v]) == pytest.approx(np.vdot(u, v))
    assert gram_inner([u], []) == 0.0


def test_gram_inner_matches_dense_fock():
    space = ModeSpace(4)

    def unit(v):
        return v / np.linalg.norm(v)

    for length in (1, 2, 3, 4):
        for _ in range(6):
            left = [unit(random_vector(4)) for _ in range(length)]
            right = [unit(random_vector(4)) for _ in range(length)]
            bra = wedge_vector(space, left)
            ket = wedge_vector(space, right)
            direct = np.vdot(bra, ket)
            assert gram_inner(left, right) == pytest.approx(direct, abs=1e-12)
