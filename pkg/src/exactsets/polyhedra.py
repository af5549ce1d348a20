"""Generalized polyhedra: finite intersections of open and closed halfspaces.

A regular polyhedron has no strict rows; a relatively open polyhedron equals
its relative interior.  The operations here implement the structural toolkit
used by the set-representation layer: decomposition of a generalized
polyhedron into disjoint relatively open pieces, a Minkowski-Weyl split of a
relatively open polyhedron into a relatively open polytope plus recession
generators, Minkowski sums via lifted Fourier-Motzkin elimination with
strictness propagation, topological closure, and exact membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, EmptyInput
from . import exactnum as xn
from .exactnum import (
    LinRow,
    R0,
    R1,
    Vec,
    clear_denominators,
    feasible_point,
    is_zero_vec,
    kernel_basis,
    mat_vec,
    rat,
    unit,
    vadd,
    vdot,
    vec,
    vneg,
    vscale,
    vsub,
    zeros,
)


def _normalize_row(r: LinRow) -> LinRow:
    """Scale so the normal is a primitive integer vector (orientation kept)."""
    if is_zero_vec(r.a):
        return r
    prim = clear_denominators(r.a)
    nz = next(i for i, x in enumerate(r.a) if x != 0)
    scale = prim[nz] / r.a[nz]
    if scale < 0:
        scale = -scale
        prim = vneg(prim)
    return LinRow(prim, r.b * scale, r.strict)


def prune_rows(rows: Iterable[LinRow], dim: int):
    """Normalize, drop tautologies, dedupe dominated parallel rows.

    Returns None when a trivially contradictory row (0 <= negative) shows up.
    """
    best = {}
    order = []
    for r in rows:
        r = _normalize_row(r)
        if is_zero_vec(r.a):
            if r.b < 0 or (r.b == 0 and r.strict):
                return None
            continue
        key = r.a
        cur = best.get(key)
        if cur is None:
            best[key] = (r.b, r.strict)
            order.append(key)
        else:
            b, s = cur
            if r.b < b or (r.b == b and r.strict and not s):
                best[key] = (r.b, r.strict)
    return [LinRow(a, best[a][0], best[a][1]) for a in order]


@dataclass(frozen=True)
class GeneralizedPolyhedron:
    dim: int
    rows: tuple

    def __post_init__(self):
        for r in self.rows:
            if len(r.a) != self.dim:
                raise DimensionMismatch("row width != ambient dimension")

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionMismatch(f"point of dim {len(x)} in R^{self.dim}")
        return all(r.holds(x) for r in self.rows)

    def is_empty(self) -> bool:
        return _is_empty(self)

    def is_regular(self) -> bool:
        return not any(r.strict for r in self.rows)

    def weak_rows(self) -> tuple:
        return tuple(r.weakened() for r in self.rows)

    def translate(self, t: Sequence) -> "GeneralizedPolyhedron":
        t = vec(t)
        return GeneralizedPolyhedron(
            self.dim,
            tuple(LinRow(r.a, r.b + vdot(r.a, t), r.strict) for r in self.rows),
        )

    def intersect_rows(self, extra: Iterable[LinRow]) -> "GeneralizedPolyhedron":
        return GeneralizedPolyhedron(self.dim, self.rows + tuple(extra))

    def feasible_point(self) -> Optional[Vec]:
        return feasible_point(self.dim, self.rows)


def polyhedron(dim, rows) -> GeneralizedPolyhedron:
    return GeneralizedPolyhedron(dim, tuple(rows))


def from_inequalities(dim, triples) -> GeneralizedPolyhedron:
    """Build from (a, b, strict) triples encoding <a,x> <= b or < b."""
    return GeneralizedPolyhedron(
        dim, tuple(LinRow(vec(a), rat(b), bool(s)) for a, b, s in triples)
    )


def full_space(dim: int) -> GeneralizedPolyhedron:
    return GeneralizedPolyhedron(dim, ())


def canonical_empty(dim: int) -> GeneralizedPolyhedron:
    return GeneralizedPolyhedron(dim, (LinRow(zeros(dim), rat(-1), False),))


def box(bounds, strict_hi=False, strict_lo=False) -> GeneralizedPolyhedron:
    """Axis box from per-dimension (lo, hi) pairs."""
    dim = len(bounds)
    rows = []
    for i, (lo, hi) in enumerate(bounds):
        rows.append(LinRow(unit(dim, i), rat(hi), strict_hi))
        rows.append(LinRow(vneg(unit(dim, i)), -rat(lo), strict_lo))
    return GeneralizedPolyhedron(dim, tuple(rows))


_EMPTY_CACHE: dict = {}


def _is_empty(p: GeneralizedPolyhedron) -> bool:
    hit = _EMPTY_CACHE.get(p)
    if hit is None:
        hit = feasible_point(p.dim, p.rows) is None
        _EMPTY_CACHE[p] = hit
    return hit


def membership(p: GeneralizedPolyhedron, x) -> bool:
    return p.contains(x)


def closure(p: GeneralizedPolyhedron) -> GeneralizedPolyhedron:
    """Drop strict flags; an empty input maps to the canonical empty set."""
    if p.is_empty():
        return canonical_empty(p.dim)
    return GeneralizedPolyhedron(p.dim, p.weak_rows())


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination with strictness propagation
# ---------------------------------------------------------------------------


def _substitute_equality(rows, j, a, b):
    """Rewrite rows using <a,x> = b to eliminate coordinate j (a[j] != 0)."""
    aj = a[j]
    out = []
    for r in rows:
        c = r.a[j]
        if c == 0:
            out.append(r)
            continue
        f = c / aj
        new_a = tuple(x - f * y for x, y in zip(r.a, a))
        out.append(LinRow(new_a, r.b - f * b, r.strict))
    return out


def _find_equality(rows, j):
    """An equality pair covering coordinate j, as (a, b), if present."""
    seen = {}
    for r in rows:
        if r.strict or r.a[j] == 0:
            continue
        key = r.a
        nk = vneg(key)
        if nk in seen and seen[nk] == -r.b:
            return key, r.b
        seen[key] = r.b
    return None


def eliminate(rows, dim, drop: Sequence[int]):
    """Project rows onto the complement of the ``drop`` coordinates.

    Rows stay in the full coordinate space with zero coefficients on dropped
    coordinates; a derived row is strict iff at least one parent was strict.
    Returns None when the input system is syntactically contradictory.
    """
    rows = prune_rows(rows, dim)
    if rows is None:
        return None
    for j in sorted(drop):
        eq = _find_equality(rows, j)
        if eq is not None:
            rows = _substitute_equality(rows, j, *eq)
        else:
            pos = [r for r in rows if r.a[j] > 0]
            neg = [r for r in rows if r.a[j] < 0]
            zero = [r for r in rows if r.a[j] == 0]
            derived = []
            for rp in pos:
                cp = rp.a[j]
                for rn in neg:
                    cn = -rn.a[j]
                    new_a = tuple(cn * x + cp * y for x, y in zip(rp.a, rn.a))
                    derived.append(
                        LinRow(new_a, cn * rp.b + cp * rn.b, rp.strict or rn.strict)
                    )
            rows = zero + derived
        rows = prune_rows(rows, dim)
        if rows is None:
            return None
    return rows


def project(p: GeneralizedPolyhedron, keep: Sequence[int]) -> GeneralizedPolyhedron:
    """Orthogonal projection onto the ``keep`` coordinates (ordered)."""
    drop = [j for j in range(p.dim) if j not in set(keep)]
    rows = eliminate(p.rows, p.dim, drop)
    if rows is None:
        return canonical_empty(len(keep))
    out = []
    for r in rows:
        out.append(LinRow(tuple(r.a[k] for k in keep), r.b, r.strict))
    return GeneralizedPolyhedron(len(keep), tuple(out))


def linear_image(p: GeneralizedPolyhedron, m) -> GeneralizedPolyhedron:
    """Image of p under x -> M x, via lifted elimination."""
    n_out = len(m)
    lifted = []
    for r in p.rows:
        lifted.append(LinRow(zeros(n_out) + r.a, r.b, r.strict))
    for i in range(n_out):
        a = list(unit(n_out, i)) + [-x for x in m[i]]
        lifted.append(LinRow(tuple(a), R0, False))
        lifted.append(LinRow(vneg(tuple(a)), R0, False))
    q = GeneralizedPolyhedron(n_out + p.dim, tuple(lifted))
    return project(q, list(range(n_out)))


# ---------------------------------------------------------------------------
# Affine hull and relative-interior structure
# ---------------------------------------------------------------------------


def implicit_equalities(p: GeneralizedPolyhedron):
    """Indices of weak rows that hold with equality on all of p.

    Assumes p nonempty.  A weak row is an implicit equality iff the reverse
    inequality is valid over the weak relaxation, which carries the same
    closure as p.
    """
    out = []
    for i, r in enumerate(p.rows):
        if r.strict:
            continue
        lo, _ = xn.weak_range(p.dim, p.rows, r.a)
        if lo is not None and lo == r.b:
            out.append(i)
    return out


def is_relatively_open(p: GeneralizedPolyhedron) -> bool:
    """Whether p equals its relative interior."""
    if p.is_empty():
        return False
    eq = set(implicit_equalities(p))
    for i, r in enumerate(p.rows):
        if r.strict or i in eq:
            continue
        tight = p.intersect_rows(
            [LinRow(r.a, r.b, False), LinRow(vneg(r.a), -r.b, False)]
        )
        if not tight.is_empty():
            return False
    return True


def relative_interior(p: GeneralizedPolyhedron) -> GeneralizedPolyhedron:
    """Relative interior of a nonempty p: non-implicit weak rows go strict."""
    eq = set(implicit_equalities(p))
    rows = []
    for i, r in enumerate(p.rows):
        if i in eq:
            rows.append(LinRow(r.a, r.b, False))
            rows.append(LinRow(vneg(r.a), -r.b, False))
        else:
            rows.append(LinRow(r.a, r.b, True))
    return GeneralizedPolyhedron(p.dim, tuple(rows))


def decompose_relatively_open(p: GeneralizedPolyhedron):
    """Pairwise disjoint relatively open polyhedra whose union is p.

    The recursion keeps the open piece (all non-implicit rows strict) and
    recurses on each facet, made disjoint by requiring earlier facet rows to
    hold strictly.
    """
    if p.is_empty():
        return []
    eq_idx = implicit_equalities(p)
    eq_set = set(eq_idx)
    hull_rows = []
    for i in eq_idx:
        r = p.rows[i]
        hull_rows.append(LinRow(r.a, r.b, False))
        hull_rows.append(LinRow(vneg(r.a), -r.b, False))
    facet_idx = [
        i for i, r in enumerate(p.rows) if not r.strict and i not in eq_set
    ]
    open_rows = list(hull_rows)
    for i, r in enumerate(p.rows):
        if i in eq_set:
            continue
        open_rows.append(LinRow(r.a, r.b, True))
    pieces = [GeneralizedPolyhedron(p.dim, tuple(open_rows))]
    for pos, i in enumerate(facet_idx):
        r = p.rows[i]
        sub_rows = list(hull_rows)
        sub_rows.append(LinRow(r.a, r.b, False))
        sub_rows.append(LinRow(vneg(r.a), -r.b, False))
        for k in facet_idx[:pos]:
            rk = p.rows[k]
            sub_rows.append(LinRow(rk.a, rk.b, True))
        for k, rk in enumerate(p.rows):
            if k in eq_set or k == i or k in facet_idx[:pos]:
                continue
            sub_rows.append(rk)
        sub = GeneralizedPolyhedron(p.dim, tuple(sub_rows))
        pieces.extend(decompose_relatively_open(sub))
    return pieces


# ---------------------------------------------------------------------------
# Vertices, recession cones, Minkowski-Weyl for relatively open polyhedra
# ---------------------------------------------------------------------------


def recession_rows(p: GeneralizedPolyhedron):
    """Rows of the recession cone of cl(p): homogenized weak rows."""
    return tuple(LinRow(r.a, R0, False) for r in p.rows)


def lineality_basis(p: GeneralizedPolyhedron):
    """Basis of the lineality space {r : a_i . r = 0 for all rows}."""
    mat = tuple(r.a for r in p.rows)
    if not mat:
        return [unit(p.dim, i) for i in range(p.dim)]
    return [clear_denominators(v) for v in kernel_basis(mat, p.dim)]


def is_bounded(p: GeneralizedPolyhedron) -> bool:
    """Whether cl(p) is bounded (trivial recession cone)."""
    if p.is_empty():
        return True
    for i in range(p.dim):
        lo, hi = xn.weak_range(p.dim, p.rows, unit(p.dim, i))
        if lo is None or hi is None:
            return False
    return True


def vertices(rows, dim):
    """Vertices of the weak system (unique basic feasible solutions)."""
    rows = [r.weakened() for r in rows]
    if dim == 0:
        return [()]
    out = []
    seen = set()
    for subset in itertools.combinations(range(len(rows)), dim):
        mat = tuple(rows[i].a for i in subset)
        try:
            inv = xn.mat_inverse(mat)
        except xn.SingularMatrix:
            continue
        pt = mat_vec(xn.transpose(inv), tuple(rows[i].b for i in subset))
        if pt in seen:
            continue
        if all(r.holds(pt) for r in rows):
            seen.add(pt)
            out.append(pt)
    return out


def _basic_point_bound(rows, dim, rhs_shifts):
    """1 + max |coordinate| over basic solutions for each shifted rhs.

    Includes infeasible basic solutions, which over-approximates the set of
    vertices of every intermediate shrunk system; any bound covering those
    suffices for the relatively open Minkowski-Weyl construction.
    """
    best = R0
    for subset in itertools.combinations(range(len(rows)), dim):
        mat = tuple(rows[i].a for i in subset)
        try:
            inv = xn.mat_inverse(mat)
        except xn.SingularMatrix:
            continue
        for shift in rhs_shifts:
            rhs = tuple(rows[i].b - shift for i in subset)
            pt = mat_vec(xn.transpose(inv), rhs)
            for c in pt:
                if abs(c) > best:
                    best = abs(c)
    return best + 1


def extreme_rays(cone_rows, dim):
    """Extreme rays of the pointed cone {r : a_i . r <= 0}, primitive integer."""
    if dim == 0:
        return []
    if dim == 1:
        out = []
        for cand in (vec([1]), vec([-1])):
            if all(vdot(r.a, cand) <= 0 for r in cone_rows):
                out.append(cand)
        return out
    out = []
    seen = set()
    for subset in itertools.combinations(range(len(cone_rows)), dim - 1):
        mat = tuple(cone_rows[i].a for i in subset)
        if xn.rank(mat) != dim - 1:
            continue
        kb = kernel_basis(mat, dim)
        if len(kb) != 1:
            continue
        for cand in (kb[0], vneg(kb[0])):
            cand = clear_denominators(cand)
            if cand in seen:
                continue
            if all(vdot(r.a, cand) <= 0 for r in cone_rows):
                seen.add(cand)
                out.append(cand)
    return out


@dataclass(frozen=True)
class VPolytopeRel:
    """A relatively open polytope with a certified boundedness flag."""

    body: GeneralizedPolyhedron
    bounded: bool


def _pullback_rows(rows_t, basis, origin, hull_rows, dim):
    """Rows over t pulled back through x = origin + B t (B columns = basis).

    Uses the left inverse t = (B^T B)^{-1} B^T (x - origin); emits the hull
    equalities too so the result describes the same set in x-space.
    """
    btb = xn.mat_mul(tuple(basis), xn.transpose(tuple(basis)))
    binv = xn.mat_inverse(btb)
    # pinv row i of t = sum_j binv[i][j] * basis[j]
    pinv = xn.mat_mul(binv, tuple(basis))  # k x dim
    out = list(hull_rows)
    for r in rows_t:
        a_x = tuple(
            sum((r.a[i] * pinv[i][j] for i in range(len(basis))), R0)
            for j in range(dim)
        )
        out.append(LinRow(a_x, r.b + vdot(a_x, origin), r.strict))
    return out


def minkowski_weyl_relopen(q: GeneralizedPolyhedron):
    """Split a nonempty relatively open polyhedron as Q = P + cone(R).

    Returns (VPolytopeRel, rays); P is a relatively open polytope cut from
    cl(Q) by an open box big enough to contain all basic solutions of the
    shrunk systems, and R generates rec(cl(Q)).  Lineality is projected out
    first and returned as opposite ray pairs.
    """
    if q.is_empty():
        raise EmptyInput("minkowski_weyl_relopen of an empty polyhedron")
    # Work in hull coordinates x = x0 + B t.
    eq_idx = implicit_equalities(q)
    eq_set = set(eq_idx)
    normals = tuple(q.rows[i].a for i in eq_idx)
    x0 = feasible_point(q.dim, q.weak_rows())
    hull_rows = []
    for i in eq_idx:
        r = q.rows[i]
        hull_rows.append(LinRow(r.a, r.b, False))
        hull_rows.append(LinRow(vneg(r.a), -r.b, False))
    if normals:
        basis = [clear_denominators(v) for v in kernel_basis(normals, q.dim)]
    else:
        basis = [unit(q.dim, i) for i in range(q.dim)]
    k = len(basis)
    if k == 0:
        # singleton {x0}
        body = GeneralizedPolyhedron(q.dim, tuple(hull_rows))
        return VPolytopeRel(body, True), []
    # rows over t (all made strict: q is relatively open, so non-implicit
    # rows can be made strict without changing the set)
    rows_t = []
    for i, r in enumerate(q.rows):
        if i in eq_set:
            continue
        a_t = tuple(vdot(r.a, bvec) for bvec in basis)
        if is_zero_vec(a_t):
            continue
        rows_t.append(LinRow(a_t, r.b - vdot(r.a, x0), True))
    rows_t = prune_rows(rows_t, k)
    # lineality of the t-space closure
    lin = lineality_basis(GeneralizedPolyhedron(k, tuple(rows_t)))
    if lin:
        comp = xn.gram_schmidt_complement(lin, k) if len(lin) < k else []
        # t = W w + L l; rows only involve w since rows.a is orthogonal to lin
        w_rows = []
        for r in rows_t:
            a_w = tuple(vdot(r.a, wv) for wv in comp)
            w_rows.append(LinRow(a_w, r.b, r.strict))
        if comp:
            sub_body_w, rays_w = _pointed_split(
                GeneralizedPolyhedron(len(comp), tuple(prune_rows(w_rows, len(comp))))
            )
            rays_t = [mat_vec(xn.transpose(tuple(comp)), rw) for rw in rays_w]
            body_rows_t = _pullback_rows(sub_body_w.rows, comp, zeros(k), [], k)
            # t confined to span(comp); comp is orthogonal to lin by
            # construction, so the lin vectors serve as span normals
            for lv in lin:
                body_rows_t.append(LinRow(lv, R0, False))
                body_rows_t.append(LinRow(vneg(lv), R0, False))
            body_t = GeneralizedPolyhedron(k, tuple(body_rows_t))
        else:
            # lineality fills the whole hull: P degenerates to {0}
            pin = []
            for lv in lin:
                pin.append(LinRow(lv, R0, False))
                pin.append(LinRow(vneg(lv), R0, False))
            body_t = GeneralizedPolyhedron(k, tuple(pin))
            rays_t = []
        for lv in lin:
            rays_t.append(lv)
            rays_t.append(vneg(lv))
    else:
        body_t, rays_t = _pointed_split(GeneralizedPolyhedron(k, tuple(rows_t)))
        rays_t = list(rays_t)
    # map back to x-space
    body_rows = _pullback_rows(body_t.rows, basis, x0, hull_rows, q.dim)
    body = GeneralizedPolyhedron(q.dim, tuple(body_rows))
    rays = [
        clear_denominators(mat_vec(xn.transpose(tuple(basis)), rt)) for rt in rays_t
    ]
    return VPolytopeRel(body, True), rays


def _pointed_split(q_t: GeneralizedPolyhedron):
    """Pointed-closure case of the relatively open Minkowski-Weyl split.

    q_t is full-dimensional with all rows strict; returns (open polytope,
    extreme rays of the recession cone).
    """
    k = q_t.dim
    rows = list(q_t.rows)
    m_bound = _basic_point_bound(rows, k, (R0, R1)) if rows else R1
    box_rows = []
    for i in range(k):
        box_rows.append(LinRow(unit(k, i), m_bound, True))
        box_rows.append(LinRow(vneg(unit(k, i)), m_bound, True))
    body = GeneralizedPolyhedron(k, tuple(rows + box_rows))
    rays = extreme_rays(recession_rows(q_t), k)
    return body, rays


def minkowski_sum(p: GeneralizedPolyhedron, q: GeneralizedPolyhedron):
    """P + Q as a list of relatively open generalized polyhedra.

    Decomposes both inputs into relatively open pieces and sums each pair via
    a lifted projection (u in P-piece, v in Q-piece, x = u + v).
    """
    if p.dim != q.dim:
        raise DimensionMismatch("Minkowski sum across dimensions")
    n = p.dim
    out = []
    for pp in decompose_relatively_open(p):
        for qq in decompose_relatively_open(q):
            lifted = []
            for r in pp.rows:
                lifted.append(LinRow(zeros(n) + r.a + zeros(n), r.b, r.strict))
            for r in qq.rows:
                lifted.append(LinRow(zeros(n) + zeros(n) + r.a, r.b, r.strict))
            for i in range(n):
                a = list(unit(n, i)) + [-x for x in unit(n, i)] + [
                    -x for x in unit(n, i)
                ]
                lifted.append(LinRow(tuple(a), R0, False))
                lifted.append(LinRow(vneg(tuple(a)), R0, False))
            lp = GeneralizedPolyhedron(3 * n, tuple(lifted))
            piece = project(lp, list(range(n)))
            if not piece.is_empty():
                out.append(piece)
    return out
