"""Rational polyhedral cones with exact dual descriptions.

The workhorse is a double description conversion over the integers:
given homogeneous inequalities and equalities we compute a minimal set
of extreme rays plus a lineality basis, and by running the conversion
twice every cone carries both a generator and a facet description in
canonical form.  Cones are hashable and are used as dictionary keys by
the fan and quotient layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .intlinalg import (
    IntMatrix,
    LatticeMap,
    Sublattice,
    Vec,
    gcdv,
    hermite_normal_form,
    is_zero_vec,
    kernel_basis,
    primitive,
    rank_of_rows,
    saturate,
    vdot,
    vneg,
    vscale,
    vsub,
)


def _dedupe(vecs: Sequence[Vec]) -> list[Vec]:
    seen = set()
    out = []
    for v in vecs:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _reduce_mod_rows(v: Sequence[int], hnf_rows: Sequence[Vec]) -> Vec:
    """Canonical representative of v modulo the Q-span of the given HNF
    rows: zero out the pivot coordinates, then clear denominators.
    Positive multiples of v map to positive multiples of the result."""
    if not hnf_rows:
        return tuple(v)
    w = [Fraction(x) for x in v]
    for row in hnf_rows:
        j = next(i for i, x in enumerate(row) if x != 0)
        if w[j] != 0:
            f = w[j] / row[j]
            w = [a - f * b for a, b in zip(w, row)]
    den = math.lcm(*(a.denominator for a in w))
    ints = tuple(int(a * den) for a in w)
    return primitive(ints)


def double_description(
    ambient: int,
    inequalities: Sequence[Sequence[int]],
    equalities: Sequence[Sequence[int]] = (),
) -> tuple[list[Vec], list[Vec]]:
    """Extreme rays and lineality basis of
    {x : a.x >= 0 for all inequalities, b.x = 0 for all equalities}.

    Rays are primitive and minimal modulo the lineality space."""
    constraints: list[Vec] = []
    for b in equalities:
        t = primitive(tuple(b))
        if not is_zero_vec(t):
            constraints.append(t)
            constraints.append(vneg(t))
    for a in inequalities:
        t = primitive(tuple(a))
        if not is_zero_vec(t):
            constraints.append(t)
    constraints = _dedupe(constraints)

    lin: list[Vec] = [tuple(1 if i == j else 0 for j in range(ambient)) for i in range(ambient)]
    rays: list[Vec] = []

    def extreme_only(rs: list[Vec], upto: int, lin_dim: int) -> list[Vec]:
        # r is extreme mod the lineality space iff its active constraints
        # cut out a space of dimension lin_dim + 1
        out = []
        for r in rs:
            active = [constraints[i] for i in range(upto) if vdot(constraints[i], r) == 0]
            dim = ambient - rank_of_rows(active) if active else ambient
            if dim == lin_dim + 1:
                out.append(r)
        return out

    for k, a in enumerate(constraints):
        l0 = next((l for l in lin if vdot(a, l) != 0), None)
        if l0 is not None:
            if vdot(a, l0) < 0:
                l0 = vneg(l0)
            p = vdot(a, l0)
            lin = [primitive(vsub(vscale(p, l), vscale(vdot(a, l), l0)))
                   for l in lin if l is not l0]
            lin = [l for l in lin if not is_zero_vec(l)]
            rays = [primitive(vsub(vscale(p, r), vscale(vdot(a, r), l0))) for r in rays]
            rays = _dedupe(r for r in rays if not is_zero_vec(r))
            rays.append(l0)
            rays = extreme_only(rays, k + 1, len(lin))
            continue
        zsets = {r: frozenset(i for i in range(k) if vdot(constraints[i], r) == 0)
                 for r in rays}
        pos = [r for r in rays if vdot(a, r) > 0]
        zero = [r for r in rays if vdot(a, r) == 0]
        neg = [r for r in rays if vdot(a, r) < 0]
        new = pos + zero
        for rp in pos:
            sp = vdot(a, rp)
            for rn in neg:
                common = zsets[rp] & zsets[rn]
                if any(r3 is not rp and r3 is not rn and common <= zsets[r3]
                       for r3 in rays):
                    continue
                w = primitive(vsub(vscale(sp, rn), vscale(vdot(a, rn), rp)))
                if not is_zero_vec(w):
                    new.append(w)
        rays = extreme_only(_dedupe(new), k + 1, len(lin))

    if lin:
        lin_rows = [tuple(r) for r in
                    saturate(Sublattice.from_rows(ambient, lin)).basis.entries]
    else:
        lin_rows = []
    ray_vecs = []
    for r in rays:
        rv = _reduce_mod_rows(r, lin_rows)
        if not is_zero_vec(rv):
            ray_vecs.append(rv)
    ray_vecs = _dedupe(ray_vecs)
    ray_vecs.sort()
    return ray_vecs, [tuple(r) for r in lin_rows]


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone with both descriptions in canonical form.

    generators/lineality_basis span the cone; facet_normals together with
    span_equalities cut it out:
    cone = {x : u.x >= 0 for facet normals u, e.x = 0 for span equalities e}.
    """

    ambient_rank: int
    generators: tuple[Vec, ...]
    lineality_basis: tuple[Vec, ...]
    facet_normals: tuple[Vec, ...]
    span_equalities: tuple[Vec, ...]

    @property
    def lineality_rank(self) -> int:
        return len(self.lineality_basis)

    @property
    def dim(self) -> int:
        return self.ambient_rank - len(self.span_equalities)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return (self.ambient_rank, self.generators, self.lineality_basis) == (
            other.ambient_rank, other.generators, other.lineality_basis)

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.generators, self.lineality_basis))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def _from_dd(ambient: int, rays: Sequence[Vec], lin: Sequence[Vec]) -> "Cone":
        normals, dual_lin = double_description(
            ambient,
            inequalities=list(rays),
            equalities=list(lin),
        )
        # the dual's lineality is the orthogonal complement of our span
        span_eqs = hermite_normal_form(dual_lin)
        return Cone(ambient, tuple(rays), tuple(lin), tuple(normals), tuple(span_eqs))

    @staticmethod
    def from_generators(ambient: int, generators: Sequence[Sequence[int]],
                        lineality: Sequence[Sequence[int]] = ()) -> "Cone":
        gens = [primitive(tuple(g)) for g in generators if not is_zero_vec(g)]
        lins = [tuple(l) for l in lineality if not is_zero_vec(l)]
        # V-to-H: the dual cone of span(lins)+cone(gens) is cut out by the
        # generators; compute it, then its rays/lineality give our H-form.
        dual_rays, dual_lin = double_description(ambient, gens, lins)
        # H-to-V on our own H-form for canonical generators
        rays, lin = double_description(ambient, dual_rays, dual_lin)
        span_eqs = hermite_normal_form(dual_lin)
        return Cone(ambient, tuple(rays), tuple(lin), tuple(dual_rays), tuple(span_eqs))

    @staticmethod
    def from_inequalities(ambient: int, inequalities: Sequence[Sequence[int]],
                          equalities: Sequence[Sequence[int]] = ()) -> "Cone":
        rays, lin = double_description(ambient, inequalities, equalities)
        return Cone._from_dd(ambient, rays, lin)

    @staticmethod
    def zero(ambient: int) -> "Cone":
        return Cone.from_generators(ambient, ())

    @staticmethod
    def full_space(ambient: int) -> "Cone":
        return Cone.from_inequalities(ambient, ())

    # -- predicates ------------------------------------------------------

    def is_pointed(self) -> bool:
        return self.lineality_rank == 0

    def is_zero(self) -> bool:
        return not self.generators and not self.lineality_basis

    def contains_point(self, x: Sequence[int]) -> bool:
        return (all(vdot(u, x) >= 0 for u in self.facet_normals)
                and all(vdot(e, x) == 0 for e in self.span_equalities))

    def interior_contains(self, x: Sequence[int]) -> bool:
        """Relative-interior membership."""
        return (all(vdot(u, x) > 0 for u in self.facet_normals)
                and all(vdot(e, x) == 0 for e in self.span_equalities))

    def contains_cone(self, other: "Cone") -> bool:
        return (all(self.contains_point(g) for g in other.generators)
                and all(self.contains_point(l) for l in other.lineality_basis)
                and all(self.contains_point(vneg(l)) for l in other.lineality_basis))


def dual(c: Cone) -> Cone:
    """{u : u.x >= 0 for all x in c}."""
    ineqs = list(c.generators)
    eqs = list(c.lineality_basis)
    return Cone.from_inequalities(c.ambient_rank, ineqs, eqs)


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.ambient_rank != c2.ambient_rank:
        raise ValueError("ambient rank mismatch")
    return Cone.from_inequalities(
        c1.ambient_rank,
        list(c1.facet_normals) + list(c2.facet_normals),
        list(c1.span_equalities) + list(c2.span_equalities),
    )


def image(c: Cone, f: LatticeMap) -> Cone:
    if f.source_rank != c.ambient_rank:
        raise ValueError("ambient rank mismatch")
    return Cone.from_generators(
        f.target_rank,
        [f.apply(g) for g in c.generators],
        [f.apply(l) for l in c.lineality_basis],
    )


def faces(c: Cone) -> tuple[Cone, ...]:
    """All faces of c (including c itself and its minimal face), each of
    the form c intersected with the kernel of a supporting normal."""
    seen = {c}
    queue = [c]
    while queue:
        f = queue.pop()
        for u in c.facet_normals:
            child = Cone.from_inequalities(
                c.ambient_rank,
                list(f.facet_normals),
                list(f.span_equalities) + [u],
            )
            if child not in seen:
                seen.add(child)
                queue.append(child)
    out = sorted(seen, key=lambda f: (f.dim, f.generators, f.lineality_basis))
    return tuple(out)


def supporting_normal(c: Cone, face: Cone) -> Vec:
    """A u in the dual of c with face = c âˆ© u^perp."""
    active = [u for u in c.facet_normals
              if all(vdot(u, g) == 0 for g in face.generators)
              and all(vdot(u, l) == 0 for l in face.lineality_basis)]
    if not active:
        return tuple(0 for _ in range(c.ambient_rank))
    s = active[0]
    for u in active[1:]:
        s = tuple(a + b for a, b in zip(s, u))
    return s


def relative_interior_point(c: Cone) -> Vec:
    """Integer point strictly inside every facet of c (sum of the
    generators; 0 for a linear subspace or the zero cone)."""
    p = tuple(0 for _ in range(c.ambient_rank))
    for g in c.generators:
        p = tuple(a + b for a, b in zip(p, g))
    return p


@dataclass(frozen=True)
class FeasibilitySystem:
    """Homogeneous system of integer linear forms over a common variable
    space: equalities (= 0), weak inequalities (>= 0), strict (> 0)."""

    dim: int
    equalities: tuple[Vec, ...] = ()
    weak: tuple[Vec, ...] = ()
    strict: tuple[Vec, ...] = ()

    def __post_init__(self):
        for group in (self.equalities, self.weak, self.strict):
            for f in group:
                if len(f) != self.dim:
                    raise ValueError("form length does not match system dimension")

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return (all(vdot(e, x) == 0 for e in self.equalities)
                and all(vdot(w, x) >= 0 for w in self.weak)
                and all(vdot(s, x) > 0 for s in self.strict))


def feasible_strict(sys: FeasibilitySystem) -> Optional[Vec]:
    """Integer witness satisfying all equalities, weak forms, and strictly
    all strict forms, or None.

    Weaken the strict forms, take a relative interior point p of the
    resulting cone, and accept iff every strict form is positive at p: a
    form that is nonnegative on a cone is either identically zero on it
    or positive on its relative interior."""
    cone = Cone.from_inequalities(
        sys.dim, list(sys.weak) + list(sys.strict), list(sys.equalities))
    p = relative_interior_point(cone)
    if sys.satisfied_by(p):
        return p
    return None


def product_feasible_strict(
    shared_dim: int,
    blocks: Sequence[FeasibilitySystem],
    block_dims: Sequence[int],
    shared_strict: Sequence[Vec] = (),
    shared_weak: Sequence[Vec] = (),
) -> Optional[Vec]:
    """Strict feasibility for a block-structured system.

    Each block i has its own variables (block_dims[i] of them) followed by
    the shared variables; its forms live in dimension block_dims[i] +
    shared_dim.  shared_strict/shared_weak are forms over the shared
    variables only.  Returns a full integer witness
    (block_0 vars, block_1 vars, ..., shared vars) or None.

    Works by projecting each block cone to the shared coordinates,
    intersecting, picking a relative interior point there, and lifting it
    through each block fiber; the assembled point lies in the relative
    interior of the product cone, so the strict-form sign test is exact.
    """
    if not blocks:
        sysm = FeasibilitySystem(shared_dim, (), tuple(shared_weak), tuple(shared_strict))
        return feasible_strict(sysm)
    cones_ = []
    projs = []
    for sysb, bd in zip(blocks, block_dims):
        cb = Cone.from_inequalities(
            sysb.dim, list(sysb.weak) + list(sysb.strict), list(sysb.equalities))
        cones_.append(cb)
        proj = LatticeMap(
            IntMatrix.from_rows(
                [tuple(1 if j == bd + i else 0 for j in range(bd + shared_dim))
                 for i in range(shared_dim)],
                bd + shared_dim),
            bd + shared_dim, shared_dim)
        projs.append(image(cb, proj))
    shared_cone = Cone.from_inequalities(shared_dim, list(shared_weak) + list(shared_strict), ())
    inter = shared_cone
    for p in projs:
        inter = intersect(inter, p)
    m_hat = relative_interior_point(inter)
    if not all(vdot(w, m_hat) >= 0 for w in shared_weak):
        return None
    if not all(vdot(s, m_hat) > 0 for s in shared_strict):
        return None
    # lift through each block: substitute shared vars = t * m_hat, t >= 0
    parts: list[Fraction] = []
    block_points: list[tuple[Fraction, ...]] = []
    for sysb, bd in zip(blocks, block_dims):
        def subst(form: Vec) -> Vec:
            u_part = form[:bd]
            m_part = form[bd:]
            return tuple(u_part) + (vdot(m_part, m_hat),)
        ineqs = [subst(f) for f in list(sysb.weak) + list(sysb.strict)]
        ineqs.append(tuple(0 for _ in range(bd)) + (1,))  # t >= 0
        eqs = [subst(f) for f in sysb.equalities]
        fib = Cone.from_inequalities(bd + 1, ineqs, eqs)
        q = relative_interior_point(fib)
        t = q[-1]
        if t <= 0:
            return None
        block_points.append(tuple(Fraction(x, t) for x in q[:bd]))
    # assemble and clear denominators (positive scaling, homogeneous system)
    den = math.lcm(*(a.denominator for bp in block_points for a in bp)) if block_points else 1
    full: list[int] = []
    for bp in block_points:
        full.extend(int(a * den) for a in bp)
    full.extend(x * den for x in m_hat)
    witness = tuple(full)
    # verify every clause by substitution before returning
    off = 0
    for sysb, bd in zip(blocks, block_dims):
        xb = witness[off:off + bd] + witness[-shared_dim:] if shared_dim else witness[off:off + bd]
        if not sysb.satisfied_by(xb):
            return None
        off += bd
    mvec = witness[-shared_dim:] if shared_dim else ()
    if not all(vdot(w, mvec) >= 0 for w in shared_weak):
        return None
    if not all(vdot(s, mvec) > 0 for s in shared_strict):
        return None
    return witness
