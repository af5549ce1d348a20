"""Linear images of mixed-integer points in generalized polyhedra.

A GmilpSet is L(body ∩ {z : z_i integer for i in I}) for a generalized
polyhedron body in the lifted space R^N and a rational linear map L onto the
ambient space.  A DmilpSet is a finite union of such pieces.  The family of
DmilpSets over a fixed ambient space is closed under union, intersection and
complement; complements route through the normal form (bounded relatively
open polytope + finitely generated monoid per piece) and the lattice/monoid
complement constructions.

Membership runs two engines: the default enumerates integer assignments
inside LP-derived bounds on the lifted system (with exact strict-row
certification at the leaves), and the normal-form engine enumerates monoid
candidates near the query point.  They are deliberately independent and
cross-check each other in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch
from . import exactnum as xn
from . import polyhedra as ph
from .exactnum import (
    LinRow,
    R0,
    R1,
    clear_denominators,
    feasible_point,
    identity,
    mat_vec,
    rat,
    rceil,
    rfloor,
    unit,
    vadd,
    vdot,
    vec,
    vneg,
    vscale,
    zeros,
)
from .polyhedra import GeneralizedPolyhedron


@dataclass(frozen=True)
class GmilpSet:
    """One mixed-integer representable piece: L(body ∩ integer slab)."""

    ambient: int
    body: GeneralizedPolyhedron
    integer_indices: tuple
    map: tuple  # ambient x lifted rational matrix

    def __post_init__(self):
        if len(self.map) != self.ambient:
            raise DimensionMismatch("map rows != ambient dimension")
        for r in self.map:
            if len(r) != self.body.dim:
                raise DimensionMismatch("map cols != lifted dimension")
        for i in self.integer_indices:
            if not 0 <= i < self.body.dim:
                raise DimensionMismatch("integer index out of range")

    @property
    def lifted_dim(self):
        return self.body.dim

    def contains(self, x) -> bool:
        x = vec(x)
        if len(x) != self.ambient:
            raise DimensionMismatch("point dimension != ambient")
        rows = list(self.body.rows)
        for i in range(self.ambient):
            rows.append(LinRow(self.map[i], x[i], False))
            rows.append(LinRow(vneg(self.map[i]), -x[i], False))
        return _mixed_feasible(self.body.dim, rows, self.integer_indices)

    def body_nonempty(self) -> bool:
        return not self.body.is_empty()


def piece_from_polyhedron(p: GeneralizedPolyhedron, integer_indices=()) -> GmilpSet:
    return GmilpSet(p.dim, p, tuple(integer_indices), identity(p.dim))


@dataclass(frozen=True)
class DmilpSet:
    """Finite union of GmilpSet pieces with a common ambient dimension."""

    ambient: int
    pieces: tuple

    def __post_init__(self):
        for p in self.pieces:
            if p.ambient != self.ambient:
                raise DimensionMismatch("piece ambient mismatch")

    def contains(self, x) -> bool:
        x = vec(x)
        return any(p.contains(x) for p in self.pieces)

    def is_empty_syntactically(self) -> bool:
        return not self.pieces


def empty_set(ambient: int) -> DmilpSet:
    return DmilpSet(ambient, ())


def full_set(ambient: int) -> DmilpSet:
    return DmilpSet(ambient, (piece_from_polyhedron(ph.full_space(ambient)),))


def from_pieces(ambient: int, pieces: Iterable[GmilpSet]) -> DmilpSet:
    kept = tuple(p for p in pieces if p.body_nonempty())
    return DmilpSet(ambient, kept)


# ---------------------------------------------------------------------------
# Mixed-integer feasibility of a lifted row system
# ---------------------------------------------------------------------------


def _integer_range(n, rows, j):
    """Integer values available to coordinate j under the weak relaxation."""
    lo, hi = xn.weak_range(n, rows, unit(n, j))
    if lo is None or hi is None:
        return None
    return rceil(lo), rfloor(hi)


def _mixed_feasible(n, rows, int_indices):
    """Exact feasibility of {rows, z_i integer}; strictness honoured.

    Enumerates integer assignments over LP-derived bounds, tightest variable
    first, pruning with weak-relaxation LPs.  Falls back to the normal-form
    membership engine when some integer direction is unbounded.
    """
    weak = [r.weakened() for r in rows]
    if feasible_point(n, weak) is None:
        return False
    todo = [j for j in int_indices]
    if not todo:
        return feasible_point(n, rows) is not None
    ranges = {}
    for j in todo:
        rng = _integer_range(n, weak, j)
        if rng is None:
            return _unbounded_fallback(n, rows, int_indices)
        if rng[0] > rng[1]:
            return False
        ranges[j] = rng
    j = min(todo, key=lambda t: ranges[t][1] - ranges[t][0])
    rest = tuple(t for t in todo if t != j)
    for v in range(ranges[j][0], ranges[j][1] + 1):
        pin = [
            LinRow(unit(n, j), rat(v), False),
            LinRow(vneg(unit(n, j)), rat(-v), False),
        ]
        if _mixed_feasible(n, rows + pin, rest):
            return True
    return False


def _unbounded_fallback(n, rows, int_indices):
    """Normal-form membership for systems with unbounded integer directions."""
    body = GeneralizedPolyhedron(n, tuple(rows))
    piece = GmilpSet(0, body, tuple(int_indices), zero_map(0, n))
    nf = to_normal_form(piece)
    return nf.contains(())


def zero_map(rows: int, cols: int):
    return tuple(zeros(cols) for _ in range(rows))


# ---------------------------------------------------------------------------
# Algebra: union, intersection, complement, closure
# ---------------------------------------------------------------------------


def union(a: DmilpSet, b: DmilpSet, canonical: bool = False) -> DmilpSet:
    """Union by piece-list concatenation; optional common-ambient lifting."""
    if a.ambient != b.ambient:
        raise DimensionMismatch("union across ambient dimensions")
    out = DmilpSet(a.ambient, a.pieces + b.pieces)
    return canonicalize(out) if canonical else out


def canonicalize(d: DmilpSet) -> DmilpSet:
    """Re-lift all pieces into one shared lifted space.

    Every output piece lives in R^(n + sum N_i) with the same integer index
    set; piece i pins x = L_i(z_i) and its own body rows, leaving the other
    blocks free.
    """
    n = d.ambient
    if not d.pieces:
        return d
    total = n + sum(p.lifted_dim for p in d.pieces)
    offsets = []
    pos = n
    for p in d.pieces:
        offsets.append(pos)
        pos += p.lifted_dim
    all_ints = []
    for p, off in zip(d.pieces, offsets):
        all_ints.extend(off + i for i in p.integer_indices)
    all_ints = tuple(sorted(all_ints))
    proj = tuple(unit(total, i) for i in range(n))
    new_pieces = []
    for p, off in zip(d.pieces, offsets):
        rows = []
        for r in p.body.rows:
            a = zeros(off) + r.a + zeros(total - off - p.lifted_dim)
            rows.append(LinRow(a, r.b, r.strict))
        for i in range(n):
            a = list(zeros(total))
            a[i] = R1
            for j, c in enumerate(p.map[i]):
                a[off + j] = -c
            rows.append(LinRow(tuple(a), R0, False))
            rows.append(LinRow(vneg(tuple(a)), R0, False))
        body = GeneralizedPolyhedron(total, tuple(rows))
        new_pieces.append(GmilpSet(n, body, all_ints, proj))
    return DmilpSet(n, tuple(new_pieces))


def intersect(a: DmilpSet, b: DmilpSet) -> DmilpSet:
    """Pairwise piece intersection by stacking lifted systems."""
    if a.ambient != b.ambient:
        raise DimensionMismatch("intersection across ambient dimensions")
    n = a.ambient
    out = []
    for pa in a.pieces:
        for pb in b.pieces:
            na, nb = pa.lifted_dim, pb.lifted_dim
            rows = []
            for r in pa.body.rows:
                rows.append(LinRow(r.a + zeros(nb), r.b, r.strict))
            for r in pb.body.rows:
                rows.append(LinRow(zeros(na) + r.a, r.b, r.strict))
            for i in range(n):
                coef = tuple(pa.map[i]) + tuple(-c for c in pb.map[i])
                rows.append(LinRow(coef, R0, False))
                rows.append(LinRow(vneg(coef), R0, False))
            body = GeneralizedPolyhedron(na + nb, tuple(rows))
            if body.is_empty():
                continue
            ints = tuple(pa.integer_indices) + tuple(na + i for i in pb.integer_indices)
            newmap = tuple(tuple(pa.map[i]) + zeros(nb) for i in range(n))
            out.append(GmilpSet(n, body, ints, newmap))
    return DmilpSet(n, tuple(out))


def intersect_all(parts: Sequence[DmilpSet], ambient: int) -> DmilpSet:
    acc = full_set(ambient)
    for part in parts:
        acc = intersect(acc, part)
        if not acc.pieces:
            break
    return acc


def apply_map(d: DmilpSet, m) -> DmilpSet:
    """Linear image of a DmilpSet: compose every piece map with m."""
    m = tuple(vec(r) for r in m)
    out = []
    for p in d.pieces:
        out.append(GmilpSet(len(m), p.body, p.integer_indices, xn.mat_mul(m, p.map)))
    return DmilpSet(len(m), tuple(out))


def complement(a: DmilpSet) -> DmilpSet:
    """Set complement inside R^ambient, via normal form and De Morgan."""
    from . import lattice_monoid as lm

    n = a.ambient
    if not a.pieces:
        return full_set(n)
    parts = []
    for piece in a.pieces:
        nf = to_normal_form(piece)
        for q, mon in nf.pairs:
            parts.append(lm.complement_general(q, mon))
    return intersect_all(parts, n)


def closure(a: DmilpSet) -> DmilpSet:
    """Topological closure: close each normal-form polytope, keep monoids."""
    n = a.ambient
    pairs = []
    for piece in a.pieces:
        nf = to_normal_form(piece)
        pairs.extend((ph.closure(q), mon) for q, mon in nf.pairs)
    closed = NormalForm(n, tuple((q, m) for q, m in pairs if not q.is_empty()))
    return normal_form_to_dmilp(closed)


def membership(a: DmilpSet, x) -> bool:
    return a.contains(x)


# ---------------------------------------------------------------------------
# Normal form: union of (bounded relatively open polytope + f.g. monoid)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    """Pairs (Q, M): the set is the union of Minkowski sums Q + M."""

    ambient: int
    pairs: tuple  # of (GeneralizedPolyhedron, FinGenMonoid)

    def contains(self, x) -> bool:
        from . import lattice_monoid as lm

        x = vec(x)
        return any(lm.pm_contains(q, m, x) for q, m in self.pairs)


def _ray_box(rays, dim):
    """H-rep of {sum lambda_i r_i : 0 <= lambda_i <= 1} via lifted projection."""
    k = len(rays)
    rows = []
    for j in range(k):
        lam = unit(k, j)
        rows.append(LinRow(zeros(dim) + lam, R1, False))
        rows.append(LinRow(zeros(dim) + vneg(lam), R0, False))
    for i in range(dim):
        a = list(unit(dim, i)) + [-r[i] for r in rays]
        rows.append(LinRow(tuple(a), R0, False))
        rows.append(LinRow(vneg(tuple(a)), R0, False))
    lifted = GeneralizedPolyhedron(dim + k, tuple(rows))
    return ph.project(lifted, list(range(dim)))


def _integerize_gens(gens):
    """Scale generators to integer vectors; return (gens', per-gen multiple)."""
    out = []
    mults = []
    for g in gens:
        prim = clear_denominators(g)
        nz = next((i for i, c in enumerate(g) if c != 0), None)
        if nz is None:
            continue
        c = prim[nz] / g[nz]  # positive integer scale
        out.append(prim)
        mults.append(int(c))
    return out, mults


def to_normal_form(piece: GmilpSet) -> NormalForm:
    """Generalized Jeroslow-Lowe normal form of one piece.

    Decomposes the lifted body into relatively open polyhedra, splits each as
    polytope + recession cone, folds the recession generators into a closed
    box so the bounded part can be sliced along its integer coordinates, and
    maps everything to the ambient space.  Ambient monoid generators are
    scaled to integer vectors, expanding the bounded parts by the residual
    multiples so the represented set is unchanged.
    """
    from . import lattice_monoid as lm

    n = piece.ambient
    pairs = []
    for q_ro in ph.decompose_relatively_open(piece.body):
        part, rays = ph.minkowski_weyl_relopen(q_ro)
        rays = [clear_denominators(r) for r in rays]
        if rays:
            t_pieces = ph.minkowski_sum(part.body, _ray_box(rays, piece.lifted_dim))
        else:
            t_pieces = [part.body]
        amb_gens, mults = _integerize_gens([mat_vec(piece.map, r) for r in rays])
        mon = lm.FinGenMonoid(tuple(amb_gens))
        shifts = [zeros(n)]
        for g, c in zip(amb_gens, mults):
            if c == 1:
                continue
            base = vscale(rat(1, c), g)
            shifts = [vadd(s, vscale(rat(j), base)) for s in shifts for j in range(c)]
        for tp in t_pieces:
            for sub in _integer_slices(tp, piece.integer_indices):
                q_amb = ph.linear_image(sub, piece.map)
                if q_amb.is_empty():
                    continue
                for s in shifts:
                    pairs.append((q_amb.translate(s), mon))
    return NormalForm(n, tuple(pairs))


def _integer_slices(tp: GeneralizedPolyhedron, int_indices):
    """Slices of a bounded polyhedron along integer values of given coords."""
    if not int_indices:
        if not tp.is_empty():
            yield tp
        return
    j = int_indices[0]
    rest = tuple(int_indices[1:])
    rng = _integer_range(tp.dim, tp.rows, j)
    if rng is None:
        raise ValueError("unbounded integer direction in a polytope slice")
    for v in range(rng[0], rng[1] + 1):
        pin = (
            LinRow(unit(tp.dim, j), rat(v), False),
            LinRow(vneg(unit(tp.dim, j)), rat(-v), False),
        )
        sub = tp.intersect_rows(pin)
        if sub.is_empty():
            continue
        yield from _integer_slices(sub, rest)


def dmilp_to_normal_form(d: DmilpSet) -> NormalForm:
    pairs = []
    for piece in d.pieces:
        pairs.extend(to_normal_form(piece).pairs)
    return NormalForm(d.ambient, tuple(pairs))


def normal_form_to_dmilp(nf: NormalForm) -> DmilpSet:
    """Re-encode (Q, M) pairs as lifted pieces: x = u + G w, w integer >= 0."""
    n = nf.ambient
    out = []
    for q, mon in nf.pairs:
        gens = [g for g in mon.generators if not xn.is_zero_vec(g)]
        k = len(gens)
        rows = []
        for r in q.rows:
            rows.append(LinRow(r.a + zeros(k), r.b, r.strict))
        for j in range(k):
            rows.append(LinRow(zeros(n) + vneg(unit(k, j)), R0, False))
        body = GeneralizedPolyhedron(n + k, tuple(rows))
        if body.is_empty():
            continue
        newmap = tuple(
            tuple(unit(n, i)) + tuple(g[i] for g in gens) for i in range(n)
        )
        ints = tuple(range(n, n + k))
        out.append(GmilpSet(n, body, ints, newmap))
    return DmilpSet(n, tuple(out))
