import pytest

from ray_stmod.bench import (bench_replacement, compare_random_replacements,
                             free_replace_with_inj, free_replace_with_surj,
                             free_suspension_power, legacy_projective_free)
from ray_stmod.exceptions import UsageError
from ray_stmod.field import FieldSpec, parse_field
from ray_stmod.group import parse_group
from ray_stmod.module import trivial, zero_map, zero_module
from ray_stmod.projective import decompose_regular
from ray_stmod.stable import SigmaCache


def test_free_hull_of_trivial(a4, gf4, a4_table):
    k = trivial(a4, gf4)
    rep = free_replace_with_inj(zero_map(k, zero_module(a4, gf4)), a4_table)
    assert rep.copies == 1
    assert rep.added_dim == 12
    assert rep.replaced.is_injective()
    assert rep.replaced.is_equivariant()


def test_free_cover_of_trivial(a4, gf4, a4_table):
    k = trivial(a4, gf4)
    rep = free_replace_with_surj(zero_map(zero_module(a4, gf4), k), a4_table)
    assert rep.added_dim == 12
    assert rep.replaced.is_surjective()
    assert rep.replaced.is_equivariant()


@pytest.mark.parametrize("n,dim", [(1, 11), (2, 13), (-1, 11)])
def test_free_suspensions_keep_projectives(a4, gf4, a4_table, n, dim):
    k = trivial(a4, gf4)
    assert free_suspension_power(k, n, a4_table).dim == dim


def test_legacy_projective_free(a4, gf4, a4_table):
    module = free_suspension_power(trivial(a4, gf4), 1, a4_table)
    legacy = legacy_projective_free(module, a4_table, seed=0)
    assert legacy.dim == 3


def test_legacy_projective_free_limit(a4, gf4, a4_table, monkeypatch):
    monkeypatch.setattr("ray_stmod.bench._warned_legacy", True)
    monkeypatch.setenv("STMOD_LEGACY_MAX_DIM", "5")
    module = free_suspension_power(trivial(a4, gf4), 1, a4_table)
    assert legacy_projective_free(module, a4_table) is None


def test_random_comparison(a4, gf4, a4_table):
    frame = compare_random_replacements(a4, gf4, 6, seed=3, table=a4_table)
    assert len(frame) == 6
    assert (frame["new_added"] <= frame["old_added"]).all()
    assert (frame["old_added"] % 12 == 0).all()


def test_random_comparison_for_p_groups():
    group = parse_group("C3xC3")
    field = FieldSpec(3)
    table = decompose_regular(group, field)
    frame = compare_random_replacements(group, field, 4, seed=1, m=1,
                                        table=table)
    assert (frame["new_added"] == frame["old_added"]).all()


def test_bench_suspend(a4, gf4, a4_table):
    report = bench_replacement("suspend", a4, gf4, n=2, table=a4_table)
    assert (report.new_dim, report.old_dim, report.delta) == (5, 13, 8)
    d = report.to_dict(include_timing=False)
    assert "timing" not in d
    assert d["params"]["n"] == 2


def test_bench_projfree(a4, gf4, a4_table):
    report = bench_replacement("projfree", a4, gf4, n=1, table=a4_table)
    assert report.new_dim == 3
    assert report.old_dim == 3
    assert report.extra == {"input_dim": 11, "removed_dim": 8}


def test_bench_random(a4, gf4, a4_table):
    report = bench_replacement(
        "random", a4, gf4, tasks=3, seed=2, table=a4_table)
    assert report.extra["worse"] == 0
    assert report.delta >= 0
    assert report.params["tasks"] == 3


def test_bench_rejects_unknown_task(a4, gf4, a4_table):
    with pytest.raises(UsageError):
        bench_replacement("fast", a4, gf4, table=a4_table)
    with pytest.raises(UsageError):
        compare_random_replacements(a4, gf4, -1, table=a4_table)


@pytest.mark.slow
@pytest.mark.parametrize("group_name,field_name", [
    ("C3", "GF3"),
    ("C9", "GF3"),
    ("S3", "GF3"),
    ("A4", "GF4"),
    ("Q8", "GF2"),
    ("C3xS3", "GF3"),
])
def test_random_replacements_never_add_more(group_name, field_name):
    group = parse_group(group_name)
    field = parse_field(field_name)
    table = decompose_regular(group, field)
    report = bench_replacement(
        "random", group, field, tasks=50, seed=0, table=table)
    assert report.params["tasks"] == 50
    assert report.extra["worse"] == 0
    assert report.new_dim <= report.old_dim


@pytest.mark.slow
def test_free_strategy_at_fifty(a4, gf4, a4_table):
    report = bench_replacement("suspend", a4, gf4, n=50, table=a4_table)
    assert (report.new_dim, report.old_dim) == (101, 109)
    report = bench_replacement("suspend", a4, gf4, n=-50, table=a4_table)
    assert (report.new_dim, report.old_dim) == (101, 109)


@pytest.mark.slow
def test_free_strategy_projfree_skips_legacy(a4, gf4, a4_table, monkeypatch):
    monkeypatch.setattr("ray_stmod.bench._warned_legacy", False)
    with pytest.warns(UserWarning, match="STMOD_LEGACY_MAX_DIM"):
        report = bench_replacement("projfree", a4, gf4, n=31,
                                   table=a4_table)
    assert report.new_dim == 63
    assert report.old_dim is None
    assert report.extra["input_dim"] == 71


@pytest.mark.slow
def test_free_hull_of_thirtieth_suspension(a4, gf4, a4_table):
    M = SigmaCache(a4_table).power(trivial(a4, gf4), 30)
    rep = free_replace_with_inj(zero_map(M, zero_module(a4, gf4)), a4_table)
    assert rep.added_dim == 132


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
