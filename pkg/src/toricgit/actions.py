"""Subtorus actions on toric varieties and their semistable loci.

The acting torus H is given by an injective lattice map phi: Z^d -> N
(columns are one-parameter subgroups).  A linearization of a divisor
group is a character shift per basis divisor; the canonical
linearization is the zero shift.  Semistability of an orbit is decided
chart by chart: the orbit of a face gamma is semistable iff some face
tau >= gamma admits an invariant multi-monomial section whose
nonvanishing locus is exactly the affine chart of tau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cones import Cone, dual as cone_dual, image as cone_image, intersect, \
    relative_interior_point
from math import gcd

from .fans import (
    DivisorGroup,
    Fan,
    FaceKey,
    SubfanLocus,
    ToricDivisor,
    chart_witness,
    is_cartier_on,
)
from .intlinalg import (
    IntMatrix,
    LatticeMap,
    Sublattice,
    Vec,
    is_zero_vec,
    kernel_basis,
    primitive,
    rank_of_rows,
    saturate,
    vneg,
)


class ActionError(Exception):
    pass


class NotAffine(Exception):
    """Raised by operations that require a single-cone (affine) fan."""


@dataclass(frozen=True)
class SubtorusAction:
    """H = (K*)^d embedded in the big torus via phi: Z^d -> N."""

    phi: LatticeMap

    def __post_init__(self):
        ker = kernel_basis(self.phi.matrix)
        if ker.rank != 0:
            raise ActionError(
                f"phi is not injective; kernel basis {ker.basis.entries}")

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], ambient_rank: int) -> "SubtorusAction":
        rows = [tuple(col[j] for col in columns) for j in range(ambient_rank)]
        mat = IntMatrix.from_rows(rows, len(columns))
        return SubtorusAction(LatticeMap(mat, len(columns), ambient_rank))

    @property
    def d(self) -> int:
        return self.phi.source_rank

    @property
    def ambient_rank(self) -> int:
        return self.phi.target_rank

    @property
    def sublattice(self) -> Sublattice:
        """L = saturation of phi(Z^d) in N."""
        cols = [tuple(self.phi.matrix.entries[j][i] for j in range(self.ambient_rank))
                for i in range(self.d)]
        if not cols:
            return Sublattice.from_rows(self.ambient_rank, [])
        return saturate(Sublattice.from_rows(self.ambient_rank, cols))

    def phi_star(self, u: Sequence[int]) -> Vec:
        """Dual weight map M -> Z^d."""
        return tuple(sum(self.phi.matrix.entries[j][i] * u[j]
                         for j in range(self.ambient_rank))
                     for i in range(self.d))

    def phi_star_rows(self) -> list[Vec]:
        return [tuple(self.phi.matrix.entries[j][i] for j in range(self.ambient_rank))
                for i in range(self.d)]


@dataclass(frozen=True)
class Linearization:
    """Character shift per basis divisor; all-zero = the canonical
    linearization coming from the action on the function field."""

    shifts: tuple[Vec, ...]

    @staticmethod
    def canonical(num_divisors: int, d: int) -> "Linearization":
        return Linearization(tuple(tuple(0 for _ in range(d))
                                   for _ in range(num_divisors)))


def weight_of(action: SubtorusAction, u: Sequence[int],
              degree: Sequence[int], lin: Linearization) -> Vec:
    """phi_star(u) + sum_i degree_i * shift_i."""
    w = list(action.phi_star(u))
    for c, s in zip(degree, lin.shifts):
        for t in range(action.d):
            w[t] += c * s[t]
    return tuple(w)


@dataclass(frozen=True)
class SemistabilityCertificate:
    """Replayable witness for one certified chart.

    degree is (n,) for a single divisor (n > 0) and the coefficient
    vector of D_0 in the group basis otherwise.  monomials maps each ray
    of the chart (or None for the zero face) to its u in M.  cartier maps
    each basis divisor index to its local equation m on the chart.  For
    the group case, invertibles lists (degree coefficients c, witness w)
    pairs spanning a finite-index subgroup of invertibly-realized degrees.
    """

    chart: FaceKey
    degree: Vec
    monomials: tuple[tuple[Optional[int], Vec], ...]
    cartier: tuple[Vec, ...]
    invertibles: tuple[tuple[Vec, Vec], ...] = ()
    group_case: bool = False


@dataclass(frozen=True)
class SemistableLocus:
    locus: SubfanLocus
    certificates: tuple[tuple[FaceKey, SemistabilityCertificate], ...]

    def certificate_for(self, key: FaceKey) -> Optional[SemistabilityCertificate]:
        for k, c in self.certificates:
            if k == key:
                return c
        return None


def _single_shift(lin: Linearization, d: int) -> Vec:
    if not lin.shifts:
        return tuple(0 for _ in range(d))
    return lin.shifts[0]


def _locus_with_certs(fan: Fan, passing: dict) -> SemistableLocus:
    locus = SubfanLocus.closure(fan, passing.keys())
    maxes = locus.maximal_keys()
    certs = tuple((k, passing[k]) for k in maxes)
    return SemistableLocus(locus, certs)


def _q_cartier_witness(fan: Fan, D: ToricDivisor,
                       key: FaceKey) -> Optional[tuple[int, Vec]]:
    """Smallest n > 0 such that n*D is principal on the chart of key,
    with a witness m (so <m, v_rho> = -n*a_rho on the chart's rays), or
    None when no positive multiple works.

    The pairs (m, n) solving the homogeneous system form a lattice; the
    n-components of its basis generate g*Z, and an element with n = g is
    assembled by running the extended gcd over the basis."""
    idx = sorted(key)
    rank = fan.ambient_rank
    if not idx:
        return 1, tuple(0 for _ in range(rank))
    rows = [tuple(fan.rays[i]) + (D.coefficients[i],) for i in idx]
    ker = kernel_basis(IntMatrix.from_rows(rows, rank + 1))
    acc = None
    for v in ker.basis.entries:
        if v[-1] == 0:
            continue
        if acc is None:
            acc = list(v)
            continue
        # extended gcd: x*acc[-1] + y*v[-1] = g
        g = gcd(acc[-1], v[-1])
        a, b = acc[-1], v[-1]
        x0, x1 = 1, 0
        while b:
            q, a, b = a // b, b, a % b
            x0, x1 = x1, x0 - q * x1
        y = (g - x0 * acc[-1]) // v[-1]
        acc = [x0 * p + y * q for p, q in zip(acc, v)]
    if acc is None:
        return None
    if acc[-1] < 0:
        acc = [-x for x in acc]
    return acc[-1], tuple(acc[:-1])


def semistable_divisor(D: ToricDivisor, lin: Linearization,
                       action: SubtorusAction, fan: Fan) -> SemistableLocus:
    """Semistable locus of the single linearized divisor D: charts tau
    realized by an invariant section of some positive multiple nD that is
    itself principal on tau (the same multiple for both conditions; a
    common n always exists when each holds separately, since feasible
    section degrees form a ray and principal multiples a subgroup)."""
    shift = _single_shift(lin, action.d)
    degree_rows = [(a,) for a in D.coefficients]
    weight_rows = [(m_row, (s,)) for m_row, s in
                   zip(action.phi_star_rows(), shift)]
    passing = {}
    for key in fan.face_keys():
        qc = _q_cartier_witness(fan, D, key)
        if qc is None:
            continue
        n0, m0 = qc
        wit = chart_witness(fan, key, degree_rows, weight_rows,
                            shared_strict=((1,),))
        if wit is None:
            continue
        nw = wit["degree"][0]
        # align the two witnesses on the common degree n0*nw
        passing[key] = SemistabilityCertificate(
            chart=key,
            degree=(n0 * nw,),
            monomials=tuple(sorted(
                ((rho, tuple(n0 * x for x in u))
                 for rho, u in wit["monomials"].items()),
                key=lambda kv: (kv[0] is None, kv[0]))),
            cartier=(tuple(nw * x for x in m0),),
        )
    return _locus_with_certs(fan, passing)


def _invertible_degrees(fan: Fan, group: DivisorGroup, lin: Linearization,
                        action: SubtorusAction, key: FaceKey):
    """Kernel of the invertibility system over (w in M, c in Z^k):
    <w, v_rho> + sum_i c_i a_i(rho) = 0 on the chart's rays and
    phi_star(w) + sum_i c_i shift_i = 0.  Returns (rank of the projection
    to c, list of (c, w) generators with independent c-parts)."""
    n = fan.ambient_rank
    k = group.rank
    rows = []
    for i in sorted(key):
        rows.append(tuple(fan.rays[i]) +
                    tuple(d.coefficients[i] for d in group.basis))
    for t, m_row in enumerate(action.phi_star_rows()):
        rows.append(tuple(m_row) + tuple(s[t] for s in lin.shifts))
    if rows:
        ker = kernel_basis(IntMatrix.from_rows(rows, n + k))
        gens = [row for row in ker.basis.entries]
    else:
        gens = [tuple(1 if j == i else 0 for j in range(n + k))
                for i in range(n + k)]
    c_parts = [g[n:] for g in gens]
    chosen: list[tuple[Vec, Vec]] = []
    basis_rows: list[Vec] = []
    for g, c in zip(gens, c_parts):
        if is_zero_vec(c):
            continue
        if rank_of_rows(basis_rows + [c]) > len(basis_rows):
            basis_rows.append(c)
            chosen.append((c, g[:n]))
    return len(basis_rows), chosen


def semistable_group(group: DivisorGroup, lin: Linearization,
                     action: SubtorusAction, fan: Fan) -> SemistableLocus:
    """Semistable locus of a linearized divisor group: degrees range over
    the whole group (no positivity), every basis divisor must be Cartier
    on the chart, and the invertibly-realized degrees must have finite
    index in the group."""
    k = group.rank
    degree_rows = [tuple(d.coefficients[j] for d in group.basis)
                   for j in range(len(fan.rays))]
    weight_rows = [(m_row, tuple(s[t] for s in lin.shifts))
                   for t, m_row in enumerate(action.phi_star_rows())]
    passing = {}
    for key in fan.face_keys():
        cartiers = []
        ok = True
        for d in group.basis:
            m = is_cartier_on(fan, d, key)
            if m is None:
                ok = False
                break
            cartiers.append(m)
        if not ok:
            continue
        inv_rank, invertibles = _invertible_degrees(fan, group, lin, action, key)
        if inv_rank != k:
            continue
        wit = chart_witness(fan, key, degree_rows, weight_rows)
        if wit is None:
            continue
        passing[key] = SemistabilityCertificate(
            chart=key,
            degree=wit["degree"],
            monomials=tuple(sorted(wit["monomials"].items(),
                                   key=lambda kv: (kv[0] is None, kv[0]))),
            cartier=tuple(cartiers),
            invertibles=tuple(invertibles),
            group_case=True,
        )
    return _locus_with_certs(fan, passing)


def _require_affine(fan: Fan) -> FaceKey:
    if len(fan.maximal_cones) != 1:
        raise NotAffine("operation requires a fan with a single maximal cone")
    return frozenset(fan.maximal_cones[0])


def mumford_trivial_semistable(chi: Sequence[int], action: SubtorusAction,
                               fan: Fan) -> SemistableLocus:
    """Semistable locus of the trivial bundle on an affine toric variety
    linearized by the character chi: charts realized by a regular
    invariant function of weight n*chi, n >= 1."""
    _require_affine(fan)
    chi = tuple(chi)
    if len(chi) != action.d:
        raise ActionError(f"character has length {len(chi)}, expected {action.d}")
    D0 = ToricDivisor.zero(fan)
    lin = Linearization((vneg(chi),))
    return semistable_divisor(D0, lin, action, fan)


def achievable_weight_cone(gamma: FaceKey, action: SubtorusAction,
                           fan: Fan) -> Cone:
    """K_gamma = phi_star(sigma_dual intersect gamma^perp): weights of
    regular monomials nonvanishing on the orbit of gamma."""
    top = _require_affine(fan)
    slab = Cone.from_inequalities(
        fan.ambient_rank,
        [fan.rays[i] for i in sorted(top)],
        [fan.rays[i] for i in sorted(gamma)],
    )
    rows = action.phi_star_rows()
    f = LatticeMap(IntMatrix.from_rows(rows, fan.ambient_rank),
                   fan.ambient_rank, action.d)
    return cone_image(slab, f)


def git_chambers(action: SubtorusAction, fan: Fan):
    """Chamber decomposition of character space: on each returned cone
    the trivial-bundle semistable locus is constant; sampled at a
    relative interior character.  Covers phi_star(sigma_dual)."""
    top = _require_affine(fan)
    d = action.d
    kcones = {key: achievable_weight_cone(key, action, fan)
              for key in fan.face_keys()}
    support = kcones[frozenset()]

    hyperplanes = set()
    for c in kcones.values():
        for h in list(c.facet_normals) + list(c.span_equalities):
            p = primitive(h)
            if is_zero_vec(p):
                continue
            if next(x for x in p if x != 0) < 0:
                p = vneg(p)
            hyperplanes.add(p)

    cells = [support]
    for h in sorted(hyperplanes):
        nxt = []
        for cell in cells:
            plus = Cone.from_inequalities(
                d, list(cell.facet_normals) + [h], list(cell.span_equalities))
            minus = Cone.from_inequalities(
                d, list(cell.facet_normals) + [vneg(h)], list(cell.span_equalities))
            for piece in (plus, minus):
                if piece.dim == cell.dim and piece not in nxt:
                    nxt.append(piece)
            if not any(p.dim == cell.dim for p in (plus, minus)):
                nxt.append(cell)
        cells = nxt

    from .cones import faces as cone_faces
    chambers = []
    for cell in cells:
        for f in cone_faces(cell):
            if f not in chambers:
                chambers.append(f)
    chambers.sort(key=lambda c: (-c.dim, c.generators, c.lineality_basis))

    out = []
    for ch in chambers:
        chi = relative_interior_point(ch)
        locus = mumford_trivial_semistable(chi, action, fan)
        out.append((ch, chi, locus))
    return out


@dataclass(frozen=True)
class ObstructionReport:
    required: SubfanLocus
    weight_cones: tuple[tuple[FaceKey, Cone], ...]
    pairwise: tuple[tuple[FaceKey, FaceKey, Cone], ...]
    common: Cone
    locus_at_zero: SemistableLocus
    verdict: str  # "obstructed" | "not-obstructed" | "inconclusive"


def obstruction_report(required: SubfanLocus, action: SubtorusAction,
                       fan: Fan) -> ObstructionReport:
    """Can `required` be the trivial-bundle semistable locus for some
    character?  Any such character lies in every K_gamma for the maximal
    faces of `required`; if those cones meet only in 0 and the zero
    character fails, no character works."""
    _require_affine(fan)
    maxes = required.maximal_keys()
    kcones = [(key, achievable_weight_cone(key, action, fan)) for key in maxes]
    pairwise = []
    common = None
    for i, (k1, c1) in enumerate(kcones):
        common = c1 if common is None else intersect(common, c1)
        for k2, c2 in kcones[i + 1:]:
            pairwise.append((k1, k2, intersect(c1, c2)))
    if common is None:
        common = Cone.full_space(action.d)
    locus0 = mumford_trivial_semistable(tuple(0 for _ in range(action.d)),
                                        action, fan)
    zero_matches = locus0.locus == required
    if zero_matches:
        verdict = "not-obstructed"
    elif common.is_zero():
        verdict = "obstructed"
    else:
        verdict = "inconclusive"
    return ObstructionReport(required, tuple(kcones), tuple(pairwise),
                             common, locus0, verdict)
