"""Exact rational scalars, vectors, matrices, and an exact LP kernel.

Everything in this package runs on arbitrary-precision rationals; there is no
floating point anywhere in the computational paths.  Rationals are gmpy2.mpq
when available (about 5x faster) and fractions.Fraction otherwise; both store
lowest terms with positive denominator and hash/compare identically.

Vectors are tuples of rationals, matrices are tuples of row tuples.  All
functions are pure: no operation mutates its arguments, so every object here
is safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DependentInput, DimensionMismatch, SingularMatrix

try:
    from gmpy2 import mpq as _mpq

    def rat(x, y=None):
        """Build a rational from ints, strings ('p/q' or decimal), or rationals."""
        if y is not None:
            return _mpq(x, y)
        if isinstance(x, str):
            if "." in x or "e" in x or "E" in x:
                return _mpq(Fraction(x))
            return _mpq(x)
        if isinstance(x, float):
            raise TypeError("refusing float -> rational conversion; pass a string")
        return _mpq(x)

except ImportError:  # pragma: no cover - exercised only without gmpy2
    def rat(x, y=None):
        if y is not None:
            return Fraction(x, y)
        if isinstance(x, float):
            raise TypeError("refusing float -> rational conversion; pass a string")
        return Fraction(x)

R0 = rat(0)
R1 = rat(1)

Vec = tuple
Mat = tuple


def rfloor(q) -> int:
    """Exact floor of a rational, as a Python int."""
    return int(q.numerator) // int(q.denominator)


def rceil(q) -> int:
    return -((-int(q.numerator)) // int(q.denominator))


def vec(items) -> Vec:
    return tuple(rat(v) for v in items)


def zeros(n: int) -> Vec:
    return (R0,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(R1 if j == i else R0 for j in range(n))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(s, v: Vec) -> Vec:
    return tuple(s * a for a in v)


def vneg(v: Vec) -> Vec:
    return tuple(-a for a in v)


def vdot(u: Vec, v: Vec):
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), R0)


def is_zero_vec(v: Vec) -> bool:
    return all(a == 0 for a in v)


def matrix(rows) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix rows")
    return m


def identity(n: int) -> Mat:
    return tuple(unit(n, i) for i in range(n))


def zero_matrix(rows: int, cols: int) -> Mat:
    return tuple(zeros(cols) for _ in range(rows))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(vdot(ra, cb) for cb in bt) for ra in a)


def hstack(a: Mat, b: Mat) -> Mat:
    return tuple(ra + rb for ra, rb in zip(a, b))


def _rref(rows, ncols):
    """Reduced row echelon form in place on a list of lists.

    Returns the list of pivot column indices.
    """
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(m: Mat) -> int:
    if not m:
        return 0
    rows = [list(r) for r in m]
    return len(_rref(rows, len(m[0])))


def det(m: Mat):
    """Determinant by fraction-free (Bareiss) elimination on a cleared copy."""
    n = len(m)
    if n == 0:
        return R1
    if any(len(r) != n for r in m):
        raise DimensionMismatch("determinant of a non-square matrix")
    den = 1
    for row in m:
        for x in row:
            den = math.lcm(den, int(x.denominator))
    a = [[int(x * den) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return R0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return rat(sign * a[n - 1][n - 1], den ** n)


def mat_inverse(m: Mat) -> Mat:
    """Exact inverse; raises SingularMatrix when rank < n."""
    n = len(m)
    if n == 0:
        return ()
    if any(len(r) != n for r in m):
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [list(row) + list(unit(n, i)) for i, row in enumerate(m)]
    pivots = _rref(aug, n)
    if len(pivots) < n:
        raise SingularMatrix(f"matrix of rank {len(pivots)} < {n}")
    return tuple(tuple(aug[i][n:]) for i in range(n))


def solve_linear(a: Mat, b: Vec) -> Optional[Vec]:
    """One solution of a x = b, or None when inconsistent.

    Free variables are set to zero.
    """
    if not a:
        return zeros(0) if all(x == 0 for x in b) else None
    ncols = len(a[0])
    rows = [list(ra) + [bb] for ra, bb in zip(a, b)]
    pivots = _rref(rows, ncols)
    for row in rows:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    x = [R0] * ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][ncols]
    return tuple(x)


def kernel_basis(a: Mat, ncols: Optional[int] = None) -> list:
    """Basis of the rational null space {x : a x = 0}."""
    if ncols is None:
        if not a:
            raise DimensionMismatch("kernel of empty matrix needs ncols")
        ncols = len(a[0])
    rows = [list(r) for r in a]
    pivots = _rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [R0] * ncols
        v[free] = R1
        for r, c in enumerate(pivots):
            v[c] = -rows[r][free]
        basis.append(tuple(v))
    return basis


def clear_denominators(v: Vec) -> Vec:
    """Smallest positive integer multiple of v with integer entries."""
    if not v:
        return v
    lcm = 1
    for x in v:
        lcm = math.lcm(lcm, int(x.denominator))
    w = [int(x * lcm) for x in v]
    g = math.gcd(*[abs(x) for x in w]) if any(w) else 1
    if g > 1:
        w = [x // g for x in w]
    return tuple(rat(x) for x in w)


def gram_schmidt_complement(vectors: Sequence[Vec], n: Optional[int] = None) -> list:
    """Integer-scaled orthogonal basis of the complement of span(vectors) in Q^n.

    The returned n-k vectors are pairwise orthogonal and orthogonal to every
    input vector; inputs union outputs form a basis of Q^n.  Raises
    DependentInput when the inputs are linearly dependent.
    """
    vectors = [vec(v) for v in vectors]
    if n is None:
        if not vectors:
            raise DimensionMismatch("need dimension for empty input")
        n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise DimensionMismatch("mixed vector lengths")
    if rank(tuple(vectors)) < len(vectors):
        raise DependentInput("input vectors are linearly dependent")
    ortho = []  # orthogonalized copies of the inputs, then of the additions
    for v in vectors:
        w = v
        for u in ortho:
            uu = vdot(u, u)
            w = vsub(w, vscale(vdot(w, u) / uu, u))
        ortho.append(w)
    out = []
    for i in range(n):
        cand = unit(n, i)
        w = cand
        for u in ortho:
            uu = vdot(u, u)
            if uu == 0:
                continue
            w = vsub(w, vscale(vdot(w, u) / uu, u))
        if not is_zero_vec(w):
            w = clear_denominators(w)
            ortho.append(w)
            out.append(w)
        if len(vectors) + len(out) == n:
            break
    return out


# ---------------------------------------------------------------------------
# Exact linear programming
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinRow:
    """One constraint <a, x> <= b (weak) or < b (strict)."""

    a: Vec
    b: object
    strict: bool = False

    def weakened(self) -> "LinRow":
        return self if not self.strict else LinRow(self.a, self.b, False)

    def holds(self, x: Vec) -> bool:
        v = vdot(self.a, x)
        return v < self.b if self.strict else v <= self.b


def row(a, b, strict=False) -> LinRow:
    return LinRow(vec(a), rat(b), strict)


@dataclass(frozen=True)
class LpProblem:
    n: int
    rows: tuple
    objective: Vec  # maximised


@dataclass(frozen=True)
class LpOutcome:
    kind: str  # "infeasible" | "unbounded" | "optimal" | "supremum"
    value: object = None
    point: Optional[Vec] = None

    @property
    def is_optimal(self):
        return self.kind == "optimal"


INFEASIBLE = LpOutcome("infeasible")
UNBOUNDED = LpOutcome("unbounded")


def _pivot(tab, basis, r, s):
    pr = tab[r]
    pv = pr[s]
    if pv != 1:
        inv = 1 / pv
        tab[r] = pr = [x * inv for x in pr]
    for i, ri in enumerate(tab):
        if i != r and ri[s] != 0:
            f = ri[s]
            tab[i] = [x - f * y for x, y in zip(ri, pr)]
    basis[r] = s


def _reduced_costs(tab, basis, c):
    """Objective row c_j - c_B B^-1 A_j and current value, from scratch."""
    m = len(tab)
    ncols = len(tab[0]) - 1
    z = list(c) + [R0] * (ncols - len(c))
    val = R0
    for i in range(m):
        cb = c[basis[i]] if basis[i] < len(c) else R0
        if cb != 0:
            ri = tab[i]
            z = [zj - cb * rij for zj, rij in zip(z, ri[:-1])]
            val += cb * ri[-1]
    return z, val


def _simplex_loop(tab, basis, c):
    """Bland's-rule simplex on a feasible tableau; maximises c.

    Returns ("optimal", value) or ("unbounded", None).  ``c`` is padded with
    zeros to the tableau width.
    """
    while True:
        z, val = _reduced_costs(tab, basis, c)
        enter = next((j for j, zj in enumerate(z) if zj > 0), None)
        if enter is None:
            return "optimal", val
        leave = None
        best = None
        for i, ri in enumerate(tab):
            a = ri[enter]
            if a > 0:
                ratio = ri[-1] / a
                if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded", None
        _pivot(tab, basis, leave, enter)


def _solve_standard(a_rows, b, c):
    """Maximise c^T w over {E w = b, w >= 0}; two-phase, exact.

    a_rows: list of coefficient lists; returns LpOutcome with point w.
    """
    m = len(a_rows)
    q = len(c)
    if m == 0:
        if any(cj > 0 for cj in c):
            return UNBOUNDED
        return LpOutcome("optimal", R0, (R0,) * q)
    tab = []
    for i in range(m):
        r = list(a_rows[i])
        rhs = b[i]
        if rhs < 0:
            r = [-x for x in r]
            rhs = -rhs
        tab.append(r + [R0] * m + [rhs])
    for i in range(m):
        tab[i][q + i] = R1
    basis = [q + i for i in range(m)]
    phase1_c = [R0] * q + [rat(-1)] * m
    status, val = _simplex_loop(tab, basis, phase1_c)
    if val != 0:
        return INFEASIBLE
    # Drive remaining artificials out of the basis, dropping redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= q:
            s = next((j for j in range(q) if tab[i][j] != 0), None)
            if s is None:
                continue  # redundant row
            _pivot(tab, basis, i, s)
        keep.append(i)
    tab = [tab[i][:q] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    status, val = _simplex_loop(tab, basis, list(c))
    if status == "unbounded":
        return UNBOUNDED
    w = [R0] * q
    for i, bi in enumerate(basis):
        w[bi] = tab[i][-1]
    return LpOutcome("optimal", val, tuple(w))


def _solve_weak(n, rows, objective):
    """Maximise over the weak system {<a,x> <= b}; x free."""
    rows = [r for r in rows]
    if n == 0:
        if any(r.b < 0 for r in rows):
            return INFEASIBLE
        return LpOutcome("optimal", R0, ())
    m = len(rows)
    a_std = []
    for i, r in enumerate(rows):
        slack = [R0] * m
        slack[i] = R1
        a_std.append(list(r.a) + [-x for x in r.a] + slack)
    b = [r.b for r in rows]
    c = list(objective) + [-x for x in objective] + [R0] * m
    out = _solve_standard(a_std, b, c)
    if out.kind != "optimal":
        return out
    w = out.point
    x = tuple(w[j] - w[n + j] for j in range(n))
    return LpOutcome("optimal", out.value, x)


def _strict_feasible_point(n, rows):
    """A point satisfying weak rows weakly and strict rows strictly, or None."""
    weak = [r.weakened() for r in rows]
    base = _solve_weak(n, weak, zeros(n))
    if base.kind == "infeasible":
        return None
    stricts = [r for r in rows if r.strict]
    if not stricts:
        return base.point
    witnesses = []
    for r in stricts:
        # maximise an explicit slack variable t <= b - <a,x>, t <= 1; the
        # upper cap keeps the LP bounded while preserving sign(sup slack)
        lifted = [LinRow(w.a + (R0,), w.b, False) for w in weak]
        lifted.append(LinRow(r.a + (R1,), r.b, False))
        lifted.append(LinRow(zeros(n) + (R1,), R1, False))
        out = _solve_weak(n + 1, lifted, zeros(n) + (R1,))
        if out.kind != "optimal" or out.value <= 0:
            return None
        witnesses.append(out.point[:n])
    k = rat(len(witnesses))
    avg = zeros(n)
    for w in witnesses:
        avg = vadd(avg, w)
    return tuple(x / k for x in avg)


def lp_solve(p: LpProblem) -> LpOutcome:
    """Exact outcome over the generalized region of ``p``.

    Strict rows are certified per row by maximising their slack over the weak
    relaxation; the supremum of the objective over a nonempty generalized
    region equals the weak maximum, and the outcome is ``supremum`` when that
    value is not attained by any strictly feasible point.
    """
    for r in p.rows:
        if len(r.a) != p.n:
            raise DimensionMismatch("row width != n")
    if len(p.objective) != p.n:
        raise DimensionMismatch("objective width != n")
    feas = _strict_feasible_point(p.n, p.rows)
    if feas is None:
        return INFEASIBLE
    weak = [r.weakened() for r in p.rows]
    out = _solve_weak(p.n, weak, p.objective)
    if out.kind == "unbounded":
        return UNBOUNDED
    v = out.value
    pinned = list(p.rows)
    pinned.append(LinRow(p.objective, v, False))
    pinned.append(LinRow(vneg(p.objective), -v, False))
    pt = _strict_feasible_point(p.n, pinned)
    if pt is not None:
        return LpOutcome("optimal", v, pt)
    return LpOutcome("supremum", v, None)


def feasible_point(n: int, rows: Iterable[LinRow]) -> Optional[Vec]:
    return _strict_feasible_point(n, list(rows))


def maximize(n: int, rows: Iterable[LinRow], objective: Vec) -> LpOutcome:
    return lp_solve(LpProblem(n, tuple(rows), vec(objective)))


def weak_range(n: int, rows: Iterable[LinRow], objective: Vec):
    """(inf, sup) of <objective, x> over the weak relaxation; None = unbounded.

    For a nonempty generalized region these equal the inf/sup over the region
    itself (strict rows do not move the closure).
    """
    rows = [r.weakened() for r in rows]
    hi = _solve_weak(n, rows, vec(objective))
    lo = _solve_weak(n, rows, vneg(vec(objective)))
    if hi.kind == "infeasible" or lo.kind == "infeasible":
        return None, None
    sup = hi.value if hi.kind == "optimal" else None
    inf = -lo.value if lo.kind == "optimal" else None
    return inf, sup
