import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from setconc import setfn
from setconc.errors import InputError


def test_ground_set_bounds():
    assert setfn.GroundSet(1).size == 2
    assert setfn.GroundSet(30).n == 30
    for bad in (0, -1, 31, "3"):
        with pytest.raises(InputError):
            setfn.GroundSet(bad)


def test_three_element_table():
    f = setfn.three_element("3/2")
    assert f.values == (0, 1, 1, 1, 1, 1, 1, Fraction(3, 2))


def test_directed_edge_values():
    f = setfn.directed_edge()
    assert f.value(0b01) == 1  # S = {1}
    assert f.value(0) == 0
    assert f.value(0b10) == 0
    assert f.value(0b11) == 0


def test_evaluate_out_of_range():
    f = setfn.directed_edge()
    with pytest.raises(InputError):
        f.value(4)


@pytest.mark.parametrize(
    "mask,j,expected",
    [
        (0, 1, 1),       # adding 1 to the empty set cuts the edge
        (0b10, 1, 0),    # f(1,1) = f(0,1) = 0
        (0b01, 2, -1),   # closing the cut
    ],
)
def test_directed_edge_marginals(mask, j, expected):
    assert setfn.directed_edge().marginal(mask, j) == expected


def test_marginal_preconditions():
    f = setfn.additive([2, 3])
    assert f.marginal(0, 2) == 3
    with pytest.raises(InputError):
        f.marginal(0b01, 1)  # already in the set
    with pytest.raises(InputError):
        f.marginal(0, 3)


def _staircase_level_oracle(n: int, k: int) -> Fraction:
    # independent piecewise restatement
    root = math.isqrt(n)
    lo = Fraction(n - root, 2)
    hi = Fraction(n + root, 2)
    if k < root:
        return Fraction(k)
    if k <= lo:
        return Fraction(root)
    if k < hi:
        return Fraction(root) + k - lo
    return Fraction(2 * root)


def test_staircase_16_levels():
    levels = setfn.staircase_levels(16)
    assert levels[:11] == (0, 1, 2, 3, 4, 4, 4, 5, 6, 7, 8)
    assert set(levels[10:]) == {8}
    assert all(levels[k] == _staircase_level_oracle(16, k) for k in range(17))
    # every step is 0 or 1
    assert all(levels[k] - levels[k - 1] in (0, 1) for k in range(1, 17))


def test_staircase_dense_evaluation():
    f = setfn.staircase(16)
    assert isinstance(f, setfn.SetFunction)
    mask_8 = (1 << 8) - 1
    assert f.value(mask_8) == 6  # 4 + 8 - 6 from the middle ramp
    assert f.lipschitz_constant() == 1


def test_staircase_validation():
    with pytest.raises(InputError):
        setfn.staircase(15)
    with pytest.raises(InputError):
        setfn.staircase(4)  # sqrt(n) < 3 would need a step of 2
    assert isinstance(setfn.staircase(9), setfn.SetFunction)


def test_large_generators_return_symmetric():
    g = setfn.staircase(10000)
    assert isinstance(g, setfn.SymmetricSetFunction)
    r = setfn.cardinality_relu(400)
    assert isinstance(r, setfn.SymmetricSetFunction)
    assert r.value_at_size(200) == 0
    assert r.value_at_size(220) == 20
    assert isinstance(setfn.cardinality_relu(8), setfn.SetFunction)


@pytest.mark.parametrize(
    "build,expected",
    [
        (lambda: setfn.staircase(16), Fraction(1)),
        (lambda: setfn.additive([1, 1, 1]), Fraction(1)),
        (lambda: setfn.additive([2, 1]), Fraction(2)),
        (lambda: setfn.SetFunction.from_table([5, 5]), Fraction(0)),
    ],
)
def test_lipschitz_constant(build, expected):
    assert build().lipschitz_constant() == expected


def test_additive_table():
    assert setfn.additive([1, 1]).values == (0, 1, 1, 2)


def test_coverage_small():
    # element 1 covers item 1, element 2 covers items 1 and 2
    f = setfn.coverage([5, 7], [[1], [1, 2]])
    assert f.value(0) == 0
    assert f.value(0b01) == 5
    assert f.value(0b10) == 12
    assert f.value(0b11) == 12


def test_uniform_matroid_rank():
    f = setfn.uniform_matroid_rank(4, 2)
    assert f.value(0b1111) == 2
    assert f.value(0b0011) == 2
    assert f.value(0b0100) == 1


def test_budget_additive():
    f = setfn.budget_additive([2, 3, 4], 5)
    assert f.value(0b111) == 5
    assert f.value(0b011) == 5
    assert f.value(0b001) == 2


def test_directed_cut_matches_edge():
    f = setfn.directed_cut(2, {(1, 2): 1})
    assert f.values == setfn.directed_edge().values
    g = setfn.directed_cut(3, {(1, 2): Fraction(1, 2), (3, 1): Fraction(1, 2)})
    assert g.value(0b001) == Fraction(1, 2)   # {1}: edge 1->2 cut
    assert g.value(0b101) == Fraction(1, 2)   # {1,3}: only 1->2 cut
    assert g.value(0b100) == Fraction(1, 2)   # {3}: edge 3->1 cut


def test_scaled_to_lipschitz():
    f = setfn.additive([4, 6])
    g = setfn.scaled_to_lipschitz(f)
    assert g.lipschitz_constant() == 1
    assert g.value(0b10) == 1
    # already within the target: unchanged
    assert setfn.scaled_to_lipschitz(g) is g


_GENERATOR_CASES = [
    lambda: setfn.three_element(Fraction(3, 2)),
    lambda: setfn.directed_edge(),
    lambda: setfn.staircase(9),
    lambda: setfn.cardinality_relu(5),
    lambda: setfn.coverage([1, 2, 3], [[1, 2], [3], []]),
    lambda: setfn.uniform_matroid_rank(5, 3),
    lambda: setfn.budget_additive([1, 2, 3], Fraction(7, 2)),
    lambda: setfn.additive([Fraction(1, 3), 2]),
]


@pytest.mark.parametrize("build", _GENERATOR_CASES)
def test_marginal_definitional_identity(build):
    f = build()
    for mask in range(f.ground.size):
        for j in range(1, f.n + 1):
            if mask >> (j - 1) & 1:
                continue
            assert f.marginal(mask, j) == f.value(mask | (1 << (j - 1))) - f.value(mask)


@pytest.mark.parametrize("top", ["0", "1/2", "9/10", "1", "3/2", "2", "9/4"])
def test_three_element_monotone_iff_top_at_least_one(top):
    from setconc.hierarchy import is_monotone

    f = setfn.three_element(top)
    assert is_monotone(f)[0] == (Fraction(top) >= 1)


@given(
    st.integers(min_value=1, max_value=4),
    st.data(),
)
def test_symmetric_to_dense_round_trip(n, data):
    levels = data.draw(
        st.lists(
            st.fractions(min_value=-2, max_value=5, max_denominator=4),
            min_size=n + 1,
            max_size=n + 1,
        )
    )
    g = setfn.SymmetricSetFunction.from_levels(n, levels)
    f = g.to_dense()
    for mask in range(1 << n):
        assert f.value(mask) == g.value_at_size(mask.bit_count())
    assert f.lipschitz_constant() <= g.lipschitz_constant() or n == 1


# --- JSON function files ---------------------------------------------------


def test_load_function_exact_decimals(tmp_path):
    path = tmp_path / "f.json"
    path.write_text('{"n": 1, "values": [0.1, "3/2"]}')
    f = setfn.load_function(str(path))
    assert f.values == (Fraction(1, 10), Fraction(3, 2))


def test_load_function_generator_form(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"generator": "three-element", "params": {"top": "3/2"}}')
    f = setfn.load_function(str(path))
    assert f.values[-1] == Fraction(3, 2)


def test_load_function_bad_length(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3, "values": [0, 1, 1]}')
    with pytest.raises(InputError, match=r"length 3 != expected 2\^3 = 8"):
        setfn.load_function(str(path))


def test_load_function_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 1, ')
    with pytest.raises(InputError, match="line"):
        setfn.load_function(str(path))


def test_function_json_round_trip():
    f = setfn.three_element("3/2")
    blob = json.dumps(setfn.function_to_json(f))
    g = setfn.function_from_json(json.loads(blob, parse_float=Fraction))
    assert g == f


def test_unknown_generator():
    with pytest.raises(InputError, match="unknown generator"):
        setfn.build_generator("nope", {})
