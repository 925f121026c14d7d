"""Exact integer linear algebra over free abelian groups of finite rank.

Everything here is arbitrary-precision: matrices hold Python ints, ranks
and kernels are computed over Q with fractions, and no floating point is
used anywhere.  Smith normal form uses a fixed pivoting rule (smallest
absolute nonzero entry, row-major tie break) so all outputs are
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple[int, ...]


def vdot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def vadd(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c: int, a: Sequence[int]) -> Vec:
    return tuple(c * x for x in a)


def vneg(a: Sequence[int]) -> Vec:
    return tuple(-x for x in a)


def gcdv(a: Sequence[int]) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
    return g


def primitive(a: Sequence[int]) -> Vec:
    """Divide out the gcd of the entries, preserving orientation."""
    g = gcdv(a)
    if g <= 1:
        return tuple(a)
    return tuple(x // g for x in a)


def is_zero_vec(a: Sequence[int]) -> bool:
    return all(x == 0 for x in a)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable dense integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[Vec, ...]

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rs = tuple(tuple(int(x) for x in r) for r in rows)
        if rs:
            n = len(rs[0])
            if any(len(r) != n for r in rs):
                raise ValueError("ragged matrix")
        else:
            n = 0 if cols is None else cols
        return IntMatrix(len(rs), n, rs)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(r: int, c: int) -> "IntMatrix":
        return IntMatrix(r, c, tuple(tuple(0 for _ in range(c)) for _ in range(r)))

    def row(self, i: int) -> Vec:
        return self.entries[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else tuple(() for _ in range(self.cols)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose()
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(vdot(r, c) for c in ot.entries) for r in self.entries))

    def mulvec(self, v: Sequence[int]) -> Vec:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(vdot(r, v) for r in self.entries)

    def is_zero(self) -> bool:
        return all(is_zero_vec(r) for r in self.entries)


def rank_of_rows(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free Gaussian elimination."""
    mat = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    col = 0
    while rank < len(mat) and col < ncols:
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        for i in range(rank + 1, len(mat)):
            if mat[i][col] != 0:
                f = mat[i][col] / pv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[Vec, ...]:
    """Row-style HNF: echelon rows, positive pivots, entries above a pivot
    reduced into [0, pivot).  Zero rows are dropped.  Canonical basis for
    the row span over Z."""
    mat = [list(r) for r in rows if not is_zero_vec(r)]
    if not mat:
        return ()
    ncols = len(mat[0])
    done = 0
    for col in range(ncols):
        # gcd the column below `done` into one row
        while True:
            nz = [i for i in range(done, len(mat)) if mat[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(mat[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = mat[i][col] // mat[i0][col]
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[i0])]
        nz = [i for i in range(done, len(mat)) if mat[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        mat[done], mat[i0] = mat[i0], mat[done]
        if mat[done][col] < 0:
            mat[done] = [-a for a in mat[done]]
        # reduce entries above the pivot
        p = mat[done][col]
        for i in range(done):
            q = mat[i][col] // p
            if q:
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[done])]
        done += 1
    return tuple(tuple(r) for r in mat[:done] if not is_zero_vec(r))


@dataclass(frozen=True)
class SmithDecomposition:
    """U*A*V = D with U, V unimodular and D diagonal, d_i | d_{i+1}."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(self.D.rows, self.D.cols)
        facs = tuple(self.D.entries[i][i] for i in range(k))
        return tuple(d for d in facs if d != 0)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _round_div(a: int, b: int) -> int:
    """Quotient q minimizing |a - q*b| (nearest integer, ties toward zero)."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    m, n = A.rows, A.cols
    D = [list(r) for r in A.entries]
    U = [list(r) for r in IntMatrix.identity(m).entries]
    V = [list(r) for r in IntMatrix.identity(n).entries]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def addmul_row(i, j, q):
        # row_i -= q*row_j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def addmul_col(i, j, q):
        # col_i -= q*col_j
        for r in D:
            r[i] -= q * r[j]
        for r in V:
            r[i] -= q * r[j]

    t = 0
    while t < min(m, n):
        # pivot: smallest absolute nonzero entry, row-major tie break
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (piv is None or abs(D[i][j]) < abs(D[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            moved = False
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    q = _round_div(D[i][t], D[t][t])
                    addmul_row(i, t, q)
                    if D[i][t] != 0:
                        swap_rows(i, t)
                        moved = True
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    q = _round_div(D[t][j], D[t][t])
                    addmul_col(j, t, q)
                    if D[t][j] != 0:
                        swap_cols(j, t)
                        moved = True
            if moved:
                continue
            # column and row at t are clear; enforce divisibility
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % D[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            addmul_row(t, offender, -1)  # add offending row to pivot row
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return SmithDecomposition(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(D, n), IntMatrix.from_rows(V, n)
    )


def _unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (entries stay integral)."""
    n = M.rows
    aug = [[Fraction(x) for x in r] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, r in enumerate(M.entries)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [a / pv for a in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    inv = []
    for r in aug:
        row = []
        for a in r[n:]:
            if a.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(a))
        inv.append(row)
    return IntMatrix.from_rows(inv, n)


@dataclass(frozen=True)
class Sublattice:
    """A pure-data sublattice of Z^n given by a basis (rows)."""

    ambient_rank: int
    basis: IntMatrix
    saturated: bool

    @staticmethod
    def from_rows(ambient_rank: int, rows: Iterable[Sequence[int]]) -> "Sublattice":
        canon = hermite_normal_form(tuple(tuple(r) for r in rows))
        basis = IntMatrix.from_rows(canon, ambient_rank)
        if canon and basis.rows != rank_of_rows(canon):
            raise ValueError("basis rows are linearly dependent")
        sat = True
        if canon:
            snf = smith_normal_form(basis)
            sat = all(d == 1 for d in snf.invariant_factors)
        return Sublattice(ambient_rank, basis, sat)

    @property
    def rank(self) -> int:
        return self.basis.rows

    def contains(self, v: Sequence[int]) -> bool:
        x = solve_integer(self.basis.transpose(), v)
        return x is not None


@dataclass(frozen=True)
class LatticeMap:
    """Homomorphism Z^source -> Z^target given by a matrix acting on column
    vectors (matrix is target_rank x source_rank)."""

    matrix: IntMatrix
    source_rank: int
    target_rank: int

    def __post_init__(self):
        if self.matrix.rows != self.target_rank or self.matrix.cols != self.source_rank:
            raise ValueError("matrix dimensions do not match declared ranks")

    def apply(self, v: Sequence[int]) -> Vec:
        return self.matrix.mulvec(v)


def kernel_basis(A: IntMatrix) -> Sublattice:
    """Saturated sublattice {x in Z^cols : A x = 0}."""
    snf = smith_normal_form(A)
    r = snf.rank
    rows = [snf.V.col(j) for j in range(r, A.cols)]
    return Sublattice.from_rows(A.cols, rows)


def saturate(S: Sublattice) -> Sublattice:
    """Smallest saturated sublattice containing S."""
    if S.rank == 0:
        return Sublattice(S.ambient_rank, IntMatrix.from_rows((), S.ambient_rank), True)
    # orthogonal complement of the row space: {y : B y = 0}
    comp = kernel_basis(S.basis)
    if comp.rank == 0:
        return Sublattice.from_rows(S.ambient_rank, IntMatrix.identity(S.ambient_rank).entries)
    return kernel_basis(comp.basis)


def solve_integer(A: IntMatrix, b: Sequence[int]) -> Optional[Vec]:
    """Some integer x with A x = b, or None.  Witness verifies by
    substitution; absence is a value, not an error."""
    if len(b) != A.rows:
        raise ValueError("dimension mismatch")
    snf = smith_normal_form(A)
    c = snf.U.mulvec(b)
    y = []
    for i in range(A.cols):
        d = snf.D.entries[i][i] if i < min(A.rows, A.cols) else 0
        ci = c[i] if i < A.rows else 0
        if d == 0:
            y.append(0)
        else:
            if ci % d != 0:
                return None
            y.append(ci // d)
    for i in range(A.cols, A.rows):
        if c[i] != 0:
            return None
    # also rows beyond cols handled above; rows within rank have d != 0
    if A.cols < A.rows:
        pass
    for i in range(min(A.rows, A.cols)):
        d = snf.D.entries[i][i]
        if d == 0 and c[i] != 0:
            return None
    x = snf.V.mulvec(y)
    if A.mulvec(x) != tuple(b):
        return None
    return x


def cokernel_projection(S: Sublattice) -> tuple[LatticeMap, tuple[int, ...]]:
    """Projection of Z^n onto the free part of Z^n / S, plus the torsion
    invariant factors of the quotient."""
    n = S.ambient_rank
    if S.rank == 0:
        return LatticeMap(IntMatrix.identity(n), n, n), ()
    A = S.basis.transpose()  # n x k, columns = basis vectors
    snf = smith_normal_form(A)
    r = snf.rank
    torsion = tuple(d for d in snf.invariant_factors if d > 1)
    proj_rows = [snf.U.row(i) for i in range(r, n)]
    pi = LatticeMap(IntMatrix.from_rows(proj_rows, n), n, n - r)
    return pi, torsion
