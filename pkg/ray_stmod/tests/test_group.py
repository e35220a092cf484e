import pytest

from ray_stmod.exceptions import GroupTooLarge, UsageError
from ray_stmod.group import (cyclic_group, enumerate_group, parse_group,
                             subgroup)


@pytest.mark.parametrize("name,order", [("C3", 3), ("C9", 9), ("S3", 6),
                                        ("A4", 12), ("Q8", 8),
                                        ("C3xS3", 18), ("C3xC3", 9)])
def test_preset_orders(name, order):
    group = parse_group(name)
    assert group.order == order
    assert group.elements[0] == tuple(range(group.degree))
    assert group.mult_table[0].tolist() == list(range(order))


def test_direct_product_generator_names(c3xs3):
    assert c3xs3.generator_names == ("x", "y", "z")
    assert c3xs3.preset == "C3xS3"


def test_group_bound():
    with pytest.raises(GroupTooLarge) as exc:
        cyclic_group(9, bound=5)
    assert exc.value.context["bound"] == 5


def test_bound_from_environment(monkeypatch):
    monkeypatch.setenv("STMOD_GROUP_BOUND", "10")
    with pytest.raises(GroupTooLarge):
        parse_group("A4")
    monkeypatch.setenv("STMOD_GROUP_BOUND", "ten")
    with pytest.raises(UsageError):
        parse_group("C3")


def test_words(c9):
    assert c9.evaluate_word("x^9") == 0
    assert c9.evaluate_word("1") == 0
    x = c9.evaluate_word("x")
    inverse = c9.evaluate_word("x^-1")
    assert c9.multiply(x, inverse) == 0
    assert c9.evaluate_word("x^3*x^6") == 0
    with pytest.raises(UsageError):
        c9.evaluate_word("y")
    with pytest.raises(UsageError):
        c9.evaluate_word("x^")


def test_quaternion_relations(q8):
    assert q8.evaluate_word("a^4") == 0
    assert q8.evaluate_word("a^2") == q8.evaluate_word("b^2")
    assert q8.evaluate_word("b^-1*a*b") == q8.evaluate_word("a^-1")
    assert q8.evaluate_word("a^2") != 0
    assert q8.order == 8
    # a single involution, a^2
    squares_to_one = [g for g in range(8) if q8.multiply(g, g) == 0]
    assert squares_to_one == [0, q8.evaluate_word("a^2")]


def test_inverses(a4):
    inverses = a4.inverses
    for g in range(a4.order):
        assert a4.multiply(g, int(inverses[g])) == 0


def test_subgroup(c3xs3, c9):
    H = subgroup(c3xs3, ["x", "z"])
    assert H.order == 6
    assert H.generator_names == ("x", "z")
    K = subgroup(c9, ["x^3"])
    assert K.order == 3
    assert K.generator_names == ("h0", )


def test_enumerate_validation():
    with pytest.raises(UsageError):
        enumerate_group([])
    with pytest.raises(UsageError):
        enumerate_group([(0, 0, 1)])
    with pytest.raises(UsageError):
        enumerate_group([(1, 0)], names=["a", "b"])


def test_unknown_preset():
    with pytest.raises(UsageError):
        parse_group("D4")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
