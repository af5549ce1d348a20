import pytest
from hypothesis import given, settings, strategies as st

from exactsets import exactnum as xn
from exactsets.errors import DependentInput, SingularMatrix
from exactsets.exactnum import LinRow, LpProblem, lp_solve, rat, row, vec


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6).map(rat)


def test_rat_normalization():
    q = rat(3, -6)
    assert q.numerator == -1 and q.denominator == 2
    assert rat("3/4") == rat(3, 4)
    assert rat("0.25") == rat(1, 4)
    assert xn.rfloor(rat(-3, 2)) == -2
    assert xn.rfloor(rat(3, 2)) == 1
    assert xn.rceil(rat(1, 3)) == 1


def test_mat_inverse_identity():
    assert xn.mat_inverse(xn.identity(3)) == xn.identity(3)


def test_mat_inverse_diagonal():
    m = xn.matrix([[2, 0], [0, 1]])
    assert xn.mat_inverse(m) == xn.matrix([["1/2", 0], [0, 1]])


def test_mat_inverse_product_is_identity():
    m = xn.matrix([[1, 1], [0, 1]])
    inv = xn.mat_inverse(m)
    assert inv == xn.matrix([[1, -1], [0, 1]])
    assert xn.mat_mul(m, inv) == xn.identity(2)


def test_mat_inverse_singular():
    with pytest.raises(SingularMatrix):
        xn.mat_inverse(xn.matrix([[1, 2], [2, 4]]))


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_mat_inverse_involution(entries):
    m = tuple(tuple(r) for r in entries)
    try:
        inv = xn.mat_inverse(m)
    except SingularMatrix:
        return
    assert xn.mat_inverse(inv) == m
    assert xn.mat_mul(m, inv) == xn.identity(3)


def test_det_matches_bareiss():
    assert xn.det(xn.matrix([[2, 0], [0, 3]])) == 6
    assert xn.det(xn.matrix([["1/2", 1], [1, 2]])) == 0
    assert xn.det(xn.matrix([[0, 1], [1, 0]])) == -1


def test_gram_schmidt_axis():
    out = xn.gram_schmidt_complement([vec([1, 0])])
    assert len(out) == 1
    assert out[0][0] == 0 and out[0][1] != 0


def test_gram_schmidt_diagonal():
    out = xn.gram_schmidt_complement([vec([1, 1])])
    assert len(out) == 1
    assert xn.vdot(out[0], vec([1, 1])) == 0
    # a nonzero multiple of (1, -1)
    assert out[0][0] == -out[0][1] and out[0][0] != 0


def test_gram_schmidt_full_rank_gives_empty():
    assert xn.gram_schmidt_complement([vec([1, 0]), vec([0, 1])]) == []


def test_gram_schmidt_dependent_rejected():
    with pytest.raises(DependentInput):
        xn.gram_schmidt_complement([vec([1, 1]), vec([2, 2])])


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=1, max_size=2))
@settings(max_examples=40, deadline=None)
def test_gram_schmidt_orthogonality_property(vs):
    vs = [tuple(v) for v in vs]
    if xn.rank(tuple(vs)) < len(vs):
        return
    out = xn.gram_schmidt_complement(vs)
    assert len(out) == 3 - len(vs)
    for w in out:
        for v in vs:
            assert xn.vdot(w, v) == 0
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            assert xn.vdot(out[i], out[j]) == 0


def test_lp_simple_max():
    out = lp_solve(LpProblem(1, (row([1], 3),), vec([1])))
    assert out.kind == "optimal" and out.value == 3 and out.point == (rat(3),)


def test_lp_strict_supremum():
    out = lp_solve(LpProblem(1, (row([1], 3, strict=True),), vec([1])))
    assert out.kind == "supremum" and out.value == 3


def test_lp_unbounded():
    out = lp_solve(LpProblem(1, (row([-1], 0),), vec([1])))
    assert out.kind == "unbounded"


def test_lp_infeasible_strict():
    rows = (row([1], 1, strict=True), row([-1], -1, strict=True))
    assert lp_solve(LpProblem(1, rows, vec([0]))).kind == "infeasible"


def test_lp_strict_interior_point():
    rows = (row([1], 1, strict=True), row([-1], 0, strict=True))
    out = lp_solve(LpProblem(1, rows, vec([0])))
    assert out.kind == "optimal"
    assert rat(0) < out.point[0] < rat(1)


def test_lp_zero_variables():
    assert lp_solve(LpProblem(0, (), ())).kind == "optimal"
    assert lp_solve(LpProblem(0, (LinRow((), rat(-1), False),), ())).kind == "infeasible"


def test_lp_zero_rows():
    assert lp_solve(LpProblem(2, (), vec([0, 0]))).kind == "optimal"
    assert lp_solve(LpProblem(2, (), vec([1, 0]))).kind == "unbounded"


def test_lp_equality_via_two_rows():
    rows = (row([1, 1], 2), row([-1, -1], -2), row([1, 0], 5))
    out = lp_solve(LpProblem(2, rows, vec([1, 0])))
    assert out.kind == "optimal" and out.value == 5
    assert sum(out.point) == 2


def test_lp_optimal_point_satisfies_rows_exactly():
    rows = (row([2, 1], 4), row([-1, 0], 0), row([0, -1], 0), row([1, 3], 6, strict=True))
    out = lp_solve(LpProblem(2, rows, vec([1, 1])))
    assert out.kind in ("optimal", "supremum")
    if out.kind == "optimal":
        for r in rows:
            assert r.holds(out.point)
        assert xn.vdot(vec([1, 1]), out.point) == out.value


def test_lp_degenerate_redundant_rows():
    rows = (row([1], 1), row([1], 1), row([2], 2), row([-1], 0))
    out = lp_solve(LpProblem(1, rows, vec([1])))
    assert out.kind == "optimal" and out.value == 1
