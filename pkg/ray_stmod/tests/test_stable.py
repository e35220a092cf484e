import pytest

from ray_stmod.field import FieldSpec
from ray_stmod.ghost import create_random_module
from ray_stmod.group import parse_group
from ray_stmod.hom import find_isomorphism
from ray_stmod.module import (direct_sum, identity_map, jordan_block,
                              regular_representation, trivial, zero_map)
from ray_stmod.projective import decompose_regular, projective_free_summand
from ray_stmod.stable import (SigmaCache, cofibre, desuspend, fibre,
                              injective_hull, projective_cover,
                              replace_with_inj, replace_with_surj, suspend,
                              suspension_power)


def test_hull_and_cover_of_trivial(c3, gf3, c3_table):
    k = trivial(c3, gf3)
    hull = injective_hull(k, c3_table)
    assert hull.added_dim == 3
    assert hull.added == ((0, 1), )
    assert hull.replaced.is_injective()
    cover = projective_cover(k, c3_table)
    assert cover.added_dim == 3
    assert cover.dualized
    assert cover.replaced.is_surjective()


def test_replacement_of_injective_map_is_trivial(c9, gf3, c9_table):
    J = jordan_block(c9, gf3, 3)
    rep = replace_with_inj(identity_map(J), c9_table)
    assert rep.added == ()
    assert rep.replaced is rep.original
    rep = replace_with_surj(identity_map(J), c9_table)
    assert rep.added_dim == 0


def test_replaced_maps_are_equivariant(a4, gf4, a4_table):
    k = trivial(a4, gf4)
    rep = replace_with_inj(zero_map(k, k), a4_table)
    assert rep.replaced.is_equivariant()
    assert rep.replaced.is_injective()
    assert rep.replaced.target.dim == 1 + rep.added_dim
    rep = replace_with_surj(zero_map(k, k), a4_table)
    assert rep.replaced.is_equivariant()
    assert rep.replaced.is_surjective()


def test_suspension_of_trivial_over_c3(c3, gf3, c3_table):
    k = trivial(c3, gf3)
    assert suspend(k, c3_table).dim == 2
    assert desuspend(k, c3_table).dim == 2
    twice = suspension_power(k, 2, table=c3_table)
    assert twice.dim == 1
    assert find_isomorphism(twice, k) is not None


def test_suspend_undoes_desuspend(c9, gf3, c9_table):
    J2 = jordan_block(c9, gf3, 2)
    omega = desuspend(J2, c9_table)
    assert omega.dim == 7
    back = suspend(omega, c9_table)
    assert find_isomorphism(back, J2) is not None


def _sweep_modules(group, field, table, cache):
    """Jordan blocks over cyclic groups, the simples, and a few random
    modules."""
    if group.num_generators == 1:
        for d in range(1, group.order):
            yield jordan_block(group, field, d)
    yield from table.simples
    for seed in range(3):
        yield create_random_module(group, field, 1, 2, 1, seed=seed,
                                   cache=cache, table=table).module


@pytest.mark.slow
@pytest.mark.parametrize("group_name,field_name", [
    ("c3", "gf3"),
    ("c9", "gf3"),
    ("a4", "gf4"),
])
def test_shifts_are_mutually_inverse(request, group_name, field_name):
    group = request.getfixturevalue(group_name)
    field = request.getfixturevalue(field_name)
    table = request.getfixturevalue(f"{group_name}_table")
    cache = SigmaCache(table)
    checked = 0
    for M in _sweep_modules(group, field, table, cache):
        core = projective_free_summand(M, table).core
        if not 0 < core.dim <= 30:
            continue
        there_and_back = suspend(desuspend(core, table), table)
        assert find_isomorphism(there_and_back, core, seed=0) is not None
        back_and_there = desuspend(suspend(core, table), table)
        assert find_isomorphism(back_and_there, core, seed=0) is not None
        checked += 1
    assert checked >= 3


def test_periodicity(c9, q8, gf2, gf3, c9_table):
    k = trivial(c9, gf3)
    cache = SigmaCache(c9_table)
    assert cache.power(k, -1).dim == 8
    iso = find_isomorphism(cache.power(k, -2), k)
    assert iso is not None and iso.is_equivariant()

    k = trivial(q8, gf2)
    dims = [suspension_power(k, -n).dim for n in range(1, 5)]
    assert dims == [7, 9, 7, 1]
    iso = find_isomorphism(suspension_power(k, -4), k)
    assert iso is not None and iso.rank == 1


def test_cofibre_and_fibre(c3, gf3, c3_table):
    k = trivial(c3, gf3)
    assert cofibre(identity_map(k), c3_table).module.dim == 0
    assert fibre(identity_map(k), c3_table).module.dim == 0
    cone = cofibre(zero_map(k, k), c3_table)
    assert cone.module.dim == 3
    assert cone.leg.is_equivariant()
    assert cone.leg.source.dim == 1
    fib = fibre(zero_map(k, k), c3_table)
    assert fib.module.dim == 3
    assert fib.leg.is_equivariant()
    assert fib.leg.target.dim == 1


def test_sigma_cache(c3, gf3, c3_table):
    cache = SigmaCache(c3_table)
    k = trivial(c3, gf3)
    first = cache.power(k, 2)
    assert len(cache) == 3
    assert cache.power(k, 2) is first
    assert cache.power(k, 1).dim == 2
    assert cache.power(k, 3).dim == 2
    assert len(cache) == 4
    assert cache.sphere(c3, gf3, -1).dim == 2
    assert cache.power(k, 1).label == "Sigma^1 k"
    assert cache.hull(k) is cache.hull(k)


def test_blocks_name_the_class_of_their_projective(a4, gf4, a4_table):
    # over GF(4) two of the three characters of A4 are dual to each other
    assert sorted(a4_table.dual_indices) == [0, 1, 2]
    fixed = [i for i, j in enumerate(a4_table.dual_indices) if i == j]
    assert len(fixed) == 1
    k = trivial(a4, gf4)
    for i, S in enumerate(a4_table.simples):
        cover = projective_cover(S, a4_table)
        assert [b.index for b in cover.blocks] == [i]
        assert cover.added == ((i, 1), )
        assert [b.index for b in injective_hull(S, a4_table).blocks] == [i]
        M = direct_sum([a4_table.projectives[i], k]).module
        split = projective_free_summand(M, a4_table)
        assert split.summands == (i, )
        assert split.core.dim == 1


@pytest.mark.parametrize("n,dim", [(1, 3), (2, 5), (-1, 3), (-2, 5)])
def test_small_suspensions_over_a4(a4, gf4, a4_table, n, dim):
    k = trivial(a4, gf4)
    assert suspension_power(k, n, table=a4_table).dim == dim


def test_projective_core_at_degree_zero(c3, gf3, c3_table):
    M = direct_sum([trivial(c3, gf3),
                    regular_representation(c3, gf3)]).module
    assert suspension_power(M, 0, table=c3_table).dim == 1


@pytest.mark.slow
def test_a4_suspension_dimensions(a4, gf4, a4_table):
    cache = SigmaCache(a4_table)
    k = trivial(a4, gf4)
    assert cache.power(k, 30).dim == 61
    assert cache.power(k, 31).dim == 63
    assert cache.power(k, 50).dim == 101
    assert cache.power(k, -50).dim == 101


@pytest.mark.slow
def test_a4_hull_of_thirtieth_suspension(a4, gf4, a4_table):
    cache = SigmaCache(a4_table)
    k = trivial(a4, gf4)
    hull = injective_hull(cache.power(k, 30), a4_table)
    assert hull.added_dim == 124
    cover = projective_cover(cache.power(k, -30), a4_table)
    assert cover.added_dim == 124


@pytest.mark.slow
def test_elementary_abelian_suspensions():
    group = parse_group("C3xC3")
    field = FieldSpec(3)
    table = decompose_regular(group, field)
    cache = SigmaCache(table)
    k = trivial(group, field)
    assert cache.power(k, 50).dim == 226
    assert cache.power(k, -50).dim == 226


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
