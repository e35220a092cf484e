import pytest
import numpy as np

from ray_stmod.exceptions import Mismatch, UsageError
from ray_stmod.hom import (end_basis, find_isomorphism, hom_basis,
                           is_stably_trivial, module_generators, phom_basis,
                           presentation, stable_hom_basis)
from ray_stmod.linalg import eye, matmul, rank
from ray_stmod.module import (ModuleMap, direct_sum, identity_map,
                              jordan_block, regular_representation,
                              sign_module, trivial)
from ray_stmod.stable import desuspend


def _ints(A):
    return A.view(np.ndarray).tolist()


def test_end_of_regular(c3, gf3):
    kG = regular_representation(c3, gf3)
    assert end_basis(kG).dim == 3
    assert module_generators(kG) == (0, )


@pytest.mark.parametrize("a", [1, 2, 4, 9])
@pytest.mark.parametrize("b", [1, 3, 5])
def test_hom_between_jordan_blocks(c9, gf3, a, b):
    hb = hom_basis(jordan_block(c9, gf3, a), jordan_block(c9, gf3, b))
    assert hb.dim == min(a, b)
    for f in hb:
        assert f.is_equivariant()


@pytest.mark.parametrize("method", ["kron", "presentation"])
def test_methods_agree(c9, a4, gf3, gf4, method):
    pairs = [(jordan_block(c9, gf3, 3), jordan_block(c9, gf3, 5)),
             (trivial(a4, gf4), regular_representation(a4, gf4)),
             (regular_representation(a4, gf4), trivial(a4, gf4))]
    for M, N in pairs:
        ours = hom_basis(M, N, method)
        reference = hom_basis(M, N, "kron")
        assert _ints(ours.coords) == _ints(reference.coords)
        assert _ints(ours.mats) == _ints(reference.mats)


def test_hom_basis_rejects_unknown_method(c3, gf3):
    k = trivial(c3, gf3)
    with pytest.raises(UsageError):
        hom_basis(k, k, "guess")


def test_hom_basis_needs_common_field(c3, gf2, gf3):
    with pytest.raises(Mismatch):
        hom_basis(trivial(c3, gf2), trivial(c3, gf3))


def test_presentation_of_direct_sum(c9, gf3):
    M = direct_sum([jordan_block(c9, gf3, 2), jordan_block(c9, gf3, 3)])
    pres = presentation(M.module)
    assert pres.generators[0] == 0
    assert pres.cover.shape == (5, pres.rank * 9)
    assert not np.any(matmul(pres.cover, pres.relations.T).view(np.ndarray))
    assert _ints(matmul(pres.cover, pres.section)) == np.eye(
        5, dtype=int).tolist()


def test_combination_and_contains(c9, gf3):
    J3 = jordan_block(c9, gf3, 3)
    hb = end_basis(J3)
    f = hb.combination([1, 2, 0])
    assert f.is_equivariant()
    assert hb.contains(f)
    assert hb.contains(identity_map(J3))
    with pytest.raises(UsageError):
        hb.combination([1])


def test_phom_values(c3, gf3, c3_table):
    k = trivial(c3, gf3)
    kG = regular_representation(c3, gf3)
    J2 = jordan_block(c3, gf3, 2)
    assert phom_basis(k, k, table=c3_table).dim == 0
    assert phom_basis(kG, kG, table=c3_table).dim == 3
    assert phom_basis(J2, J2, table=c3_table).dim == 1
    assert phom_basis(k, J2, table=c3_table).dim == 0


def _trace_rank(M, N):
    """Rank of the image of the relative trace Hom_k(M, N) -> Hom_kG(M, N)
    (Higman's criterion: this image is the projectively trivial maps)."""
    GF = M.GF
    inv = M.group.inverses
    images = []
    for i in range(N.dim):
        for j in range(M.dim):
            E = GF.Zeros((N.dim, M.dim))
            E[i, j] = 1
            T = GF.Zeros((N.dim, M.dim))
            for g in range(M.group.order):
                T += matmul(matmul(N.element_matrices[g], E),
                            M.element_matrices[int(inv[g])])
            images.append(T.reshape(-1))
    return rank(GF(np.stack([t.view(np.ndarray) for t in images])))


def test_phom_matches_trace_image(c3, s3, gf3, c3_table):
    J2 = jordan_block(c3, gf3, 2)
    cases = [(J2, J2, c3_table),
             (trivial(c3, gf3), regular_representation(c3, gf3), c3_table)]
    for M, N in [(trivial(s3, gf3), regular_representation(s3, gf3)),
                 (sign_module(s3, gf3), sign_module(s3, gf3)),
                 (regular_representation(s3, gf3), trivial(s3, gf3))]:
        cases.append((M, N, None))
    for M, N, table in cases:
        assert phom_basis(M, N, table=table).dim == _trace_rank(M, N)


def test_stable_hom(c3, gf3, c3_table):
    k = trivial(c3, gf3)
    kG = regular_representation(c3, gf3)
    J2 = jordan_block(c3, gf3, 2)
    assert stable_hom_basis(J2, J2, table=c3_table).dimension == 1
    assert stable_hom_basis(k, J2, table=c3_table).dimension == 1
    assert stable_hom_basis(kG, kG, table=c3_table).dimension == 0
    stable = stable_hom_basis(k, k, table=c3_table)
    assert stable.dimension == 1
    assert stable.lifted.dim == 1


def test_is_stably_trivial(c3, gf3, c3_table):
    kG = regular_representation(c3, gf3)
    J2 = jordan_block(c3, gf3, 2)
    assert is_stably_trivial(identity_map(kG), table=c3_table)
    assert not is_stably_trivial(identity_map(J2), table=c3_table)
    nilpotent = [f for f in end_basis(J2) if f.rank == 1]
    assert nilpotent
    assert all(is_stably_trivial(f, table=c3_table) for f in nilpotent)
    # Omega k is J2; 1 - x on it factors through kC3
    omega = desuspend(trivial(c3, gf3), c3_table)
    one_minus_x = ModuleMap(omega, omega,
                            eye(gf3.GF, 2) - omega.gens[0])
    assert one_minus_x.rank == 1
    assert is_stably_trivial(one_minus_x, table=c3_table)
    stable = stable_hom_basis(trivial(c3, gf3), omega, table=c3_table)
    assert stable.dimension == 1


def test_find_isomorphism(c9, s3, gf3):
    parts = [jordan_block(c9, gf3, 1), jordan_block(c9, gf3, 2)]
    M = direct_sum(parts).module
    N = direct_sum(parts[::-1]).module
    iso = find_isomorphism(M, N)
    assert iso is not None
    assert iso.is_equivariant() and iso.is_injective()
    assert find_isomorphism(trivial(s3, gf3), sign_module(s3, gf3)) is None
    assert find_isomorphism(parts[0], parts[1]) is None


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
