import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setconc import selfbound as sb
from setconc import setfn
from setconc.corpus import random_directed_cut, random_monotone_submodular
from setconc.errors import CapacityError, InputError, RangeConditionError
from setconc.setfn import scaled_to_lipschitz

F = Fraction


def brute_minimal_a(f: setfn.SetFunction, b: Fraction) -> Fraction | None:
    """Plain-loop oracle: recompute the min-extension and decrement sums
    directly from the table, no package helpers."""
    n = f.n
    best = F(0)
    for x in range(1 << n):
        fx = f.values[x]
        total = F(0)
        for i in range(n):
            bit = 1 << i
            fi = min(f.values[x | bit], f.values[x & ~bit])
            d = fx - fi
            assert 0 <= d <= 1, "oracle requires the range condition"
            total += d
        if fx == 0:
            if total > b:
                return None
        else:
            best = max(best, (total - b) / fx)
    return best


def test_edge_min_extension_decrements():
    f = setfn.directed_edge()
    w = sb.min_extension(f)
    x = 0b01  # (x1, x2) = (1, 0)
    assert f.value(x) - w.value(1, x) == 1
    assert f.value(x) - w.value(2, x) == 1
    assert w.decrement_sum(f, x) == 2


def test_edge_argmin_sides():
    w = sb.min_extension(setfn.directed_edge())
    # dropping x2 at x1=1: f(1,0)=1, f(1,1)=0 -> min on the 1 side
    assert w.argmin_sides[1][1] == 1
    # dropping x2 at x1=0: tie (0 = 0) -> assigned to the 0 side
    assert w.argmin_sides[1][0] == 0


def test_additive_ones_decrements():
    f = setfn.additive([1, 1])
    w = sb.min_extension(f)
    assert f.value(0b11) - w.value(1, 0b11) == 1
    assert f.value(0b11) - w.value(2, 0b11) == 1


def test_constant_zero_decrements():
    f = setfn.SetFunction.from_table([0, 0, 0, 0])
    w = sb.min_extension(f)
    for x in range(4):
        assert w.decrement_sum(f, x) == 0


def test_min_property_of_witness():
    f = setfn.three_element("3/2")
    w = sb.min_extension(f)
    for x in range(8):
        for i in range(1, 4):
            assert w.value(i, x) <= f.value(x)
            assert w.value(i, x) <= f.value(x ^ (1 << (i - 1)))


@pytest.mark.parametrize(
    "build,a,b,verdict",
    [
        (lambda: setfn.three_element("3/2"), 1, 0, True),
        (lambda: setfn.directed_edge(), 1, 0, False),
        (lambda: setfn.directed_edge(), 2, 0, True),
    ],
)
def test_certify_examples(build, a, b, verdict):
    f = build()
    res = sb.certify(f, sb.min_extension(f), sb.SelfBoundingParams.of(a, b))
    assert res.verdict is verdict


def test_edge_sum_violation_location():
    f = setfn.directed_edge()
    res = sb.certify(f, sb.min_extension(f), sb.SelfBoundingParams.plain())
    assert res.sum_violation == 0b01
    assert res.worst_point == 0b01
    assert res.worst_slack == 1  # sum 2 vs f = 1


@pytest.mark.parametrize(
    "build,b,expected",
    [
        (lambda: setfn.directed_edge(), 0, F(2)),
        (lambda: setfn.additive([1, 1, 1, 1]), 0, F(1)),
        (lambda: setfn.staircase(16), 0, F(7, 5)),
    ],
)
def test_minimal_a_values(build, b, expected):
    f = build()
    assert sb.minimal_a(f, sb.min_extension(f), b) == expected


def test_staircase_16_minimal_a_against_brute_force():
    f = setfn.staircase(16)
    assert brute_minimal_a(f, F(0)) == F(7, 5)
    # the ratio is attained at |S| = 7 where the sum is 7 and f is 5
    levels = setfn.staircase_levels(16)
    assert levels[7] == 5 and levels[7] - levels[6] == 1


def test_minimal_a_matches_brute_force_on_corpus():
    rng = random.Random(99)
    for _ in range(25):
        f = scaled_to_lipschitz(random_monotone_submodular(rng, max_n=7))
        w = sb.min_extension(f)
        for b in (F(0), F(1, 2)):
            assert sb.minimal_a(f, w, b) == brute_minimal_a(f, b)


def test_minimal_a_monotone_in_b():
    rng = random.Random(3)
    for _ in range(15):
        f = scaled_to_lipschitz(random_monotone_submodular(rng, max_n=6))
        w = sb.min_extension(f)
        a0 = sb.minimal_a(f, w, 0)
        a1 = sb.minimal_a(f, w, F(1, 2))
        a2 = sb.minimal_a(f, w, 1)
        assert a2 <= a1 <= a0


def test_minimal_a_is_optimal():
    rng = random.Random(7)
    checked = 0
    for _ in range(20):
        f = scaled_to_lipschitz(random_monotone_submodular(rng, max_n=6))
        w = sb.min_extension(f)
        a_star = sb.minimal_a(f, w, 0)
        assert sb.certify(f, w, sb.SelfBoundingParams(a_star, F(0))).verdict
        if a_star > 0:
            smaller = a_star - min(F(1, 1000), a_star / 2)
            assert not sb.certify(f, w, sb.SelfBoundingParams(smaller, F(0))).verdict
            checked += 1
    assert checked > 0


def test_monotone_argmin_always_zero_side():
    rng = random.Random(11)
    for _ in range(20):
        f = random_monotone_submodular(rng, max_n=7)
        w = sb.min_extension(f)
        assert all(s == 0 for side in w.argmin_sides for s in side)


def test_lemma_style_properties_small():
    rng = random.Random(1234)
    plain = sb.SelfBoundingParams.plain()
    two = sb.SelfBoundingParams.of(2, 0)
    for _ in range(40):
        f = scaled_to_lipschitz(random_monotone_submodular(rng))
        assert sb.certify(f, sb.min_extension(f), plain).verdict
    for _ in range(40):
        g = random_directed_cut(rng)
        assert sb.certify(g, sb.min_extension(g), two).verdict


def test_external_witness_unbounded():
    # a zero-value point with positive decrement sum only arises with an
    # externally supplied witness (the min-extension of f >= 0 cannot dip
    # below zero); f(x) = x2 with w_1 dipping to -1/2 keeps every
    # decrement inside [0,1] while the all-zeros point gets sum 1/2
    f = setfn.SetFunction.from_table([0, 0, 1, 1])
    w = sb.SelfBoundingWitness(
        2,
        ((F(-1, 2), F(1)), (F(0), F(0))),
        ((0, 0), (0, 0)),
    )
    assert sb.certify(f, w, sb.SelfBoundingParams.plain()).range_violation is None
    assert sb.minimal_a(f, w, 0) is None
    assert sb.minimal_a(f, w, F(1, 2)) == F(1, 2)


def test_range_condition_error():
    f = setfn.SetFunction.from_table([0, 2])
    w = sb.min_extension(f)
    res = sb.certify(f, w, sb.SelfBoundingParams.plain())
    assert not res.verdict
    assert res.range_violation == (0b1, 1)
    with pytest.raises(RangeConditionError) as err:
        sb.minimal_a(f, w, 0)
    assert err.value.point == 0b1 and err.value.coordinate == 1


def test_dimension_mismatch():
    f = setfn.directed_edge()
    w = sb.min_extension(setfn.three_element(1))
    with pytest.raises(InputError):
        sb.certify(f, w, sb.SelfBoundingParams.plain())


def test_capacity_cap():
    f = setfn.SetFunction(setfn.GroundSet(25), (F(0),) * (1 << 25))
    with pytest.raises(CapacityError):
        sb.min_extension(f)


def test_negative_function_rejected_by_minimal_a():
    f = setfn.SetFunction.from_table([F(-1), F(-1, 2)])
    w = sb.min_extension(f)
    with pytest.raises(InputError, match="f >= 0"):
        sb.minimal_a(f, w, 0)


def test_symmetric_minimal_a_matches_dense():
    for n in (9, 16):
        dense = setfn.staircase(n)
        sym = setfn.staircase_symmetric(n)
        for b in (F(0), F(1)):
            assert sb.minimal_a_symmetric(sym, b) == sb.minimal_a(
                dense, sb.min_extension(dense), b
            )


@settings(max_examples=40)
@given(
    st.integers(min_value=2, max_value=8),
    st.data(),
)
def test_symmetric_minimal_a_matches_dense_random(n, data):
    steps = data.draw(
        st.lists(
            st.sampled_from([F(0), F(1, 2), F(1)]), min_size=n, max_size=n
        )
    )
    levels = [F(0)]
    for s in steps:
        levels.append(levels[-1] + s)
    g = setfn.SymmetricSetFunction(n, tuple(levels))
    dense = g.to_dense()
    assert sb.minimal_a_symmetric(g, 0) == sb.minimal_a(
        dense, sb.min_extension(dense), 0
    )


def test_params_validation():
    with pytest.raises(InputError):
        sb.SelfBoundingParams.of(-1, 0)
    assert sb.SelfBoundingParams.plain() == sb.SelfBoundingParams.of(1, 0)
