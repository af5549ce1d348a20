import itertools

import pytest

from exactsets import polyhedra as ph
from exactsets.errors import DimensionMismatch, EmptyInput
from exactsets.exactnum import rat, vec


def halfline(b, strict=False):
    # {x <= b} in R^1
    return ph.from_inequalities(1, [([1], b, strict)])


def interval(lo, hi, strict_lo=False, strict_hi=False):
    return ph.from_inequalities(
        1, [([1], hi, strict_hi), ([-1], -rat(lo), strict_lo)]
    )


def grid1(lo, hi, den):
    x = rat(lo)
    step = rat(1, den)
    while x <= rat(hi):
        yield (x,)
        x += step


def grid2(lo, hi, den):
    for (x,) in grid1(lo, hi, den):
        for (y,) in grid1(lo, hi, den):
            yield (x, y)


def test_membership_boundary():
    assert halfline(1).contains([1])
    assert not halfline(1, strict=True).contains([1])


def test_membership_mixed_strictness():
    p = ph.from_inequalities(2, [([-1, 0], 0, False), ([0, -1], 0, True)])
    assert p.contains([0, rat(1, 3)])
    assert not p.contains([0, 0])
    assert not p.contains([rat(-1, 4), rat(1, 3)])


def test_membership_dimension_check():
    with pytest.raises(DimensionMismatch):
        halfline(1).contains([1, 2])


def test_closure_drops_strict():
    c = ph.closure(halfline(1, strict=True))
    assert c.contains([1])
    assert not any(r.strict for r in c.rows)


def test_closure_of_empty_is_canonical_empty():
    p = ph.from_inequalities(1, [([1], 1, True), ([-1], -1, True)])
    c = ph.closure(p)
    assert c.is_empty()
    assert not c.contains([1])


def test_closure_idempotent_on_regular():
    p = interval(0, 1)
    assert ph.closure(p).rows == p.rows


def test_decompose_halfplane_strip():
    p = ph.from_inequalities(2, [([-1, 0], 0, False), ([0, -1], 0, True)])
    pieces = ph.decompose_relatively_open(p)
    assert len(pieces) == 2
    # one piece is the open quadrant, the other the x1 = 0 open edge
    probes = [(rat(1), rat(1)), (rat(0), rat(1))]
    for probe in probes:
        assert sum(1 for q in pieces if q.contains(probe)) == 1
    assert not any(q.contains((rat(0), rat(0))) for q in pieces)


def test_decompose_singleton():
    p = ph.from_inequalities(1, [([1], 2, False), ([-1], -2, False)])
    pieces = ph.decompose_relatively_open(p)
    assert len(pieces) == 1
    assert pieces[0].contains([2])
    assert not pieces[0].contains([1])


def test_decompose_open_halfplane_is_itself():
    p = ph.from_inequalities(2, [([1, 0], 1, True)])
    pieces = ph.decompose_relatively_open(p)
    assert len(pieces) == 1
    assert pieces[0].contains([0, 5])


def test_decompose_partition_property():
    p = ph.from_inequalities(
        2, [([1, 0], 2, False), ([-1, 0], 0, False), ([0, 1], 1, True), ([0, -1], 1, False)]
    )
    pieces = ph.decompose_relatively_open(p)
    for pt in grid2(-2, 3, 2):
        want = 1 if p.contains(pt) else 0
        assert sum(1 for q in pieces if q.contains(pt)) == want
    for q in pieces:
        assert ph.is_relatively_open(q)


def test_minkowski_weyl_open_ray():
    q = ph.from_inequalities(1, [([-1], 0, True)])  # x > 0
    part, rays = ph.minkowski_weyl_relopen(q)
    assert part.bounded
    assert rays == [(rat(1),)]
    for probe, inside in [((rat(-1),), False), ((rat(1, 2),), True),
                          ((rat(1),), True), ((rat(10),), True)]:
        got = _in_sum(part.body, rays, probe)
        assert got == inside
        assert q.contains(probe) == inside


def _in_sum(body, rays, x):
    """Exact membership in body + cone(rays) via an LP feasibility check."""
    from exactsets.exactnum import LinRow, R0, feasible_point, unit, vneg, zeros

    n = body.dim
    k = len(rays)
    rows = []
    for r in body.rows:
        rows.append(LinRow(r.a + zeros(k), r.b, r.strict))
    for j in range(k):
        coef = zeros(n) + tuple(-rat(1) if i == j else rat(0) for i in range(k))
        rows.append(LinRow(coef, R0, False))
    for i in range(n):
        a = list(unit(n, i)) + [rays[j][i] for j in range(k)]
        rows.append(LinRow(tuple(a), rat(x[i]), False))
        rows.append(LinRow(vneg(tuple(a)), -rat(x[i]), False))
    return feasible_point(n + k, rows) is not None


def test_minkowski_weyl_bounded_returns_no_rays():
    q = ph.from_inequalities(1, [([1], 1, True), ([-1], 0, True)])
    part, rays = ph.minkowski_weyl_relopen(q)
    assert rays == []
    for pt in grid1(-1, 2, 3):
        assert part.body.contains(pt) == q.contains(pt)


def test_minkowski_weyl_full_space_lineality():
    q = ph.from_inequalities(2, [])
    part, rays = ph.minkowski_weyl_relopen(q)
    dirs = set(rays)
    assert len(rays) == 4
    for pt in [(rat(3), rat(-5)), (rat(0), rat(0)), (rat(-2), rat(7))]:
        assert _in_sum(part.body, rays, pt)


def test_minkowski_weyl_halfline_with_offset():
    q = ph.from_inequalities(1, [([-1], -2, False)])  # x >= 2, regular & rel-open? no
    # make it relatively open: x > 2
    q = ph.from_inequalities(1, [([-1], -2, True)])
    part, rays = ph.minkowski_weyl_relopen(q)
    assert rays == [(rat(1),)]
    for pt in grid1(0, 6, 2):
        assert _in_sum(part.body, rays, pt) == q.contains(pt)


def test_minkowski_weyl_empty_input_raises():
    with pytest.raises(EmptyInput):
        ph.minkowski_weyl_relopen(ph.canonical_empty(1))


def test_minkowski_sum_unit_intervals():
    s = ph.minkowski_sum(interval(0, 1), interval(0, 1))
    for pt in grid1(-1, 3, 4):
        want = rat(0) <= pt[0] <= rat(2)
        assert any(q.contains(pt) for q in s) == want


def test_minkowski_sum_open_plus_point():
    s = ph.minkowski_sum(interval(0, 1, strict_lo=True, strict_hi=True),
                         interval(2, 2))
    for pt in grid1(1, 4, 4):
        want = rat(2) < pt[0] < rat(3)
        assert any(q.contains(pt) for q in s) == want


def test_minkowski_sum_opposite_halflines_cover_line():
    a = ph.from_inequalities(1, [([-1], 0, False)])  # x >= 0
    b = ph.from_inequalities(1, [([1], 0, False)])   # x <= 0
    s = ph.minkowski_sum(a, b)
    for pt in grid1(-3, 3, 2):
        assert any(q.contains(pt) for q in s)


def test_fm_strictness_rule_1d():
    # eliminate y from {y <= x (weak), y >= 1 (strict reversed)} and
    # from weak-weak pairs; derived strictness = parent-or
    from exactsets.exactnum import LinRow

    rows = [
        LinRow(vec([-1, 1]), rat(0), False),   # y <= x
        LinRow(vec([0, -1]), rat(-1), True),   # y > 1
    ]
    out = ph.eliminate(rows, 2, [1])
    assert len(out) == 1
    assert out[0].strict
    rows[1] = LinRow(vec([0, -1]), rat(-1), False)
    out = ph.eliminate(rows, 2, [1])
    assert not out[0].strict


def test_project_keeps_strictness():
    p = ph.from_inequalities(2, [([1, 0], 1, True), ([0, 1], 1, False), ([0, -1], 0, False)])
    pr = ph.project(p, [0])
    assert pr.contains([0])
    assert not pr.contains([1])


def test_linear_image_scaling():
    p = interval(0, 1)
    img = ph.linear_image(p, ((rat(2),),))
    for pt in grid1(-1, 3, 2):
        assert img.contains(pt) == (rat(0) <= pt[0] <= rat(2))


def test_is_bounded():
    assert ph.is_bounded(interval(0, 1))
    assert not ph.is_bounded(halfline(1))
    assert ph.is_bounded(ph.canonical_empty(2))


def test_extreme_rays_quadrant():
    from exactsets.exactnum import LinRow

    cone = [LinRow(vec([-1, 0]), rat(0), False), LinRow(vec([0, -1]), rat(0), False)]
    rays = ph.extreme_rays(cone, 2)
    assert set(rays) == {(rat(1), rat(0)), (rat(0), rat(1))}
