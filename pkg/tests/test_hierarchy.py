import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setconc import hierarchy as cl
from setconc import lp, setfn
from setconc.corpus import random_monotone_submodular
from setconc.errors import CapacityError

F = Fraction


# --- independent reference sweeps (direct quantifier translation) ----------


def ref_nonnegative(f):
    for m in range(f.ground.size):
        if f.values[m] < 0:
            return False, m
    return True, None


def ref_monotone(f):
    for m in range(f.ground.size):
        for j in range(1, f.n + 1):
            bit = 1 << (j - 1)
            if not m & bit and f.values[m | bit] < f.values[m]:
                return False, (m, j)
    return True, None


def ref_submodular(f):
    for m in range(f.ground.size):
        for j in range(1, f.n + 1):
            bj = 1 << (j - 1)
            if m & bj:
                continue
            for k in range(1, f.n + 1):
                bk = 1 << (k - 1)
                if k == j or m & bk:
                    continue
                if f.values[m | bj] - f.values[m] < f.values[m | bj | bk] - f.values[m | bk]:
                    return False, (m, j, k)
    return True, None


def ref_subadditive(f):
    size = f.ground.size
    for a in range(size):
        for b in range(size):
            if f.values[a | b] > f.values[a] + f.values[b]:
                return False, (a, b)
    return True, None


def ref_xos_verdict(f):
    """Exact full-dual solve per target: no greedy path, no row generation."""
    size = f.ground.size
    if any(v < 0 for v in f.values):
        return False
    if f.values[0] > 0:
        return False
    for target in range(1, size):
        bits = [b for b in range(f.n) if target >> b & 1]
        rows = []
        for mask in range(size):
            rows.append(
                ([F(1) if mask >> b & 1 else F(0) for b in bits], f.values[mask])
            )
        res = lp.solve_max([F(1)] * len(bits), rows)
        if res.value < f.values[target]:
            return False
    return True


small_functions = st.builds(
    lambda n, vals: setfn.SetFunction.from_table(vals[: 1 << n], n=n),
    st.integers(1, 3),
    st.lists(
        st.fractions(min_value=-2, max_value=3, max_denominator=4),
        min_size=8,
        max_size=8,
    ),
)


# --- separating examples ----------------------------------------------------


@pytest.mark.parametrize(
    "top,nonneg,mono,subm,xos,subadd",
    [
        ("1", True, True, True, True, True),
        ("3/2", True, True, False, True, True),
        ("2", True, True, False, False, True),
        ("9/4", True, True, False, False, False),
    ],
)
def test_three_element_hierarchy(top, nonneg, mono, subm, xos, subadd):
    report = cl.classify(setfn.three_element(top))
    assert report.nonnegative is nonneg
    assert report.monotone is mono
    assert report.submodular is subm
    assert report.fractionally_subadditive is xos
    assert report.subadditive is subadd


def test_three_element_two_violation_cover():
    f = setfn.three_element(2)
    ok, violation = cl.is_fractionally_subadditive(f)
    assert not ok
    assert violation.target == 0b111
    assert violation.is_feasible_cover(f)
    # the optimal cover value is 3/2, giving violation amount 1/2
    assert violation.violation_amount(f) == F(1, 2)


def test_directed_edge_report():
    f = setfn.directed_edge()
    report = cl.classify(f)
    assert report.nonnegative and report.submodular and report.subadditive
    assert report.monotone is False
    assert report.monotone_witness == (0b01, 2)
    assert report.fractionally_subadditive is False
    assert report.xos_result.is_feasible_cover(f)
    assert report.xos_result.violation_amount(f) > 0
    assert report.notes  # non-monotone input is flagged


def test_constant_zero_is_everything():
    f = setfn.SetFunction.from_table([0, 0, 0, 0])
    r = cl.classify(f)
    assert (
        r.nonnegative
        and r.monotone
        and r.submodular
        and r.fractionally_subadditive
        and r.subadditive
    )


def test_negative_additive_witness():
    ok, witness = cl.is_nonnegative(setfn.additive([-1]))
    assert not ok and witness == 0b1


def test_staircase_16_monotone_and_subadditive():
    f = setfn.staircase(16)
    assert cl.is_monotone(f)[0]
    # the 4^16 pair sweep is beyond the subadditivity cap; the symmetric
    # structure lets a cardinality sweep stand in
    levels = setfn.staircase_levels(16)
    for a in range(17):
        for b in range(17):
            assert levels[min(a + b, 16)] <= levels[a] + levels[b]


def test_staircase_9_subadditive_exhaustive():
    ok, _ = cl.is_subadditive(setfn.staircase(9))
    assert ok


def test_overlapping_pairs_are_checked():
    # all disjoint pairs fine, the only violation needs A = B = {1}
    f = setfn.SetFunction.from_table([0, -1, 1, 0])
    ok, witness = cl.is_subadditive(f)
    assert not ok
    assert witness == (0b01, 0b01)


def test_capacity_errors():
    big = setfn.uniform_matroid_rank(14, 3)
    with pytest.raises(CapacityError):
        cl.is_subadditive(big)
    with pytest.raises(CapacityError):
        cl.is_fractionally_subadditive(setfn.uniform_matroid_rank(13, 3))
    report = cl.classify(big)
    assert report.subadditive is None
    assert report.fractionally_subadditive is None
    assert set(report.not_computed) == {"subadditive", "fractionally_subadditive"}
    assert report.nonnegative and report.monotone and report.submodular


def test_classify_deterministic():
    f = setfn.three_element(2)
    assert cl.classify(f) == cl.classify(f)


# --- witness replay and oracle agreement ------------------------------------


@settings(max_examples=80)
@given(small_functions)
def test_sweeps_match_reference(f):
    assert cl.is_nonnegative(f) == ref_nonnegative(f)
    assert cl.is_monotone(f) == ref_monotone(f)
    assert cl.is_submodular(f) == ref_submodular(f)
    assert cl.is_subadditive(f) == ref_subadditive(f)


@settings(max_examples=60)
@given(small_functions)
def test_xos_matches_full_dual_reference(f):
    ok, result = cl.is_fractionally_subadditive(f)
    assert ok == ref_xos_verdict(f)
    if ok:
        assert result.check(f)
    else:
        assert result.is_feasible_cover(f)
        assert result.violation_amount(f) > 0


@settings(max_examples=40)
@given(small_functions)
def test_xos_implies_monotone_and_zero_at_empty(f):
    ok, _ = cl.is_fractionally_subadditive(f)
    if ok:
        assert f.values[0] == 0
        assert cl.is_monotone(f)[0]
        assert cl.is_nonnegative(f)[0]


def test_xos_strong_duality_at_violation():
    # the reported cover's value equals the exact full-dual optimum
    for f in (setfn.three_element(2), setfn.directed_edge()):
        ok, violation = cl.is_fractionally_subadditive(f)
        assert not ok
        target = violation.target
        bits = [b for b in range(f.n) if target >> b & 1]
        rows = [
            ([F(1) if m >> b & 1 else F(0) for b in bits], f.values[m])
            for m in range(f.ground.size)
        ]
        dual_opt = lp.solve_max([F(1)] * len(bits), rows).value
        cover_value = sum(
            (beta * f.values[mask] for mask, beta in violation.cover), F(0)
        )
        assert cover_value == dual_opt


def test_certificate_structure():
    f = setfn.three_element("3/2")
    ok, cert = cl.is_fractionally_subadditive(f)
    assert ok
    assert set(cert.vectors) == set(range(8))
    y = cert.vectors[0b111]
    assert sum(y) >= F(3, 2)
    assert cert.check(f)


# --- inclusion chain on the generated corpus ---------------------------------


def test_lemma_chain_on_corpus():
    rng = random.Random(20240817)
    for _ in range(60):
        f = random_monotone_submodular(rng)
        report = cl.classify(f)
        assert report.nonnegative and report.monotone and report.submodular
        # chain confirmed by the checkers themselves, not inferred
        assert report.fractionally_subadditive is True
        assert report.subadditive is True


def test_report_json_shape():
    payload = cl.classify(setfn.three_element(2)).to_json()
    assert payload["fractionally_subadditive"] is False
    cover = payload["witnesses"]["fractionally_subadditive"]["cover"]
    assert {c["coefficient"] for c in cover} == {"1/2"}
    assert payload["witnesses"]["fractionally_subadditive"]["target_set"] == [1, 2, 3]
