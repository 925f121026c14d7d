"""Fans, invariant Weil divisors, and torus-invariant open loci.

A fan is stored as primitive ray generators plus maximal cones given by
ray indices.  Faces are keyed by the frozenset of incident ray indices;
for a valid pointed fan this keying is faithful and subset order on keys
is exactly the face order, which the locus bookkeeping relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .cones import (
    Cone,
    FeasibilitySystem,
    faces as cone_faces,
    intersect,
    product_feasible_strict,
)
from .intlinalg import (
    IntMatrix,
    Vec,
    is_zero_vec,
    kernel_basis,
    primitive,
    rank_of_rows,
    solve_integer,
    vdot,
)

FaceKey = frozenset


class FanError(Exception):
    """Structured fan rejection; kind is one of NonPrimitiveRay,
    DuplicateRay, IntersectionNotFace, NotPointed, BadIndex."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


@dataclass(frozen=True)
class Fan:
    ambient_rank: int
    rays: tuple[Vec, ...]
    maximal_cones: tuple[tuple[int, ...], ...]
    _faces: tuple[tuple[FaceKey, Cone], ...]

    def face_keys(self) -> tuple[FaceKey, ...]:
        return tuple(k for k, _ in self._faces)

    def face_cone(self, key: FaceKey) -> Cone:
        for k, c in self._faces:
            if k == key:
                return c
        raise KeyError(f"not a face of the fan: {sorted(key)}")

    def has_face(self, key: FaceKey) -> bool:
        return any(k == key for k, _ in self._faces)

    @property
    def maximal_keys(self) -> tuple[FaceKey, ...]:
        return tuple(frozenset(c) for c in self.maximal_cones)

    def all_keys_under(self, key: FaceKey) -> tuple[FaceKey, ...]:
        return tuple(k for k, _ in self._faces if k <= key)


def validate_fan(ambient_rank: int, rays: Sequence[Sequence[int]],
                 maximal_cones: Sequence[Sequence[int]]) -> Fan:
    ray_tuples: list[Vec] = []
    for r in rays:
        t = tuple(int(x) for x in r)
        if len(t) != ambient_rank:
            raise FanError("BadIndex", f"ray {t} has wrong length")
        if is_zero_vec(t) or primitive(t) != t:
            raise FanError("NonPrimitiveRay", f"ray {t} is not primitive")
        if t in ray_tuples:
            raise FanError("DuplicateRay", f"ray {t} listed twice")
        ray_tuples.append(t)

    max_keys: list[frozenset[int]] = []
    for idx_list in maximal_cones:
        idx = tuple(sorted(set(int(i) for i in idx_list)))
        for i in idx:
            if not 0 <= i < len(ray_tuples):
                raise FanError("BadIndex", f"ray index {i} out of range")
        max_keys.append(frozenset(idx))
    if not max_keys:
        max_keys.append(frozenset())  # the fan of the big torus alone

    cones = {}
    for key in max_keys:
        c = Cone.from_generators(ambient_rank, [ray_tuples[i] for i in key])
        if c.lineality_rank != 0:
            raise FanError("NotPointed",
                           f"cone on rays {sorted(key)} contains a line")
        cones[key] = c

    # faces, keyed by incident fan rays
    face_map: dict[frozenset[int], Cone] = {}
    for key, c in cones.items():
        for f in cone_faces(c):
            fkey = frozenset(i for i, rv in enumerate(ray_tuples)
                             if f.contains_point(rv))
            prev = face_map.get(fkey)
            if prev is not None and prev != f:
                raise FanError("IntersectionNotFace",
                               f"rays {sorted(fkey)} span two different faces")
            face_map[fkey] = f

    keys = list(face_map)
    for i, k1 in enumerate(max_keys):
        for k2 in max_keys[i + 1:]:
            inter = intersect(cones[k1], cones[k2])
            ikey = frozenset(i for i, rv in enumerate(ray_tuples)
                             if inter.contains_point(rv))
            if ikey not in face_map or face_map[ikey] != inter or not (
                    ikey <= k1 and ikey <= k2):
                raise FanError(
                    "IntersectionNotFace",
                    f"cones {sorted(k1)} and {sorted(k2)} do not meet in a common face")

    ordered = tuple(sorted(face_map.items(),
                           key=lambda kv: (len(kv[0]), sorted(kv[0]))))
    return Fan(ambient_rank, tuple(ray_tuples),
               tuple(tuple(sorted(k)) for k in max_keys), ordered)


@dataclass(frozen=True)
class ToricDivisor:
    """Invariant Weil divisor sum a_rho * D_rho, one coefficient per ray
    in fan order."""

    coefficients: tuple[int, ...]

    @staticmethod
    def zero(fan: Fan) -> "ToricDivisor":
        return ToricDivisor(tuple(0 for _ in fan.rays))


@dataclass(frozen=True)
class DivisorGroup:
    basis: tuple[ToricDivisor, ...]

    def __post_init__(self):
        rows = [d.coefficients for d in self.basis]
        if rows and rank_of_rows(rows) != len(rows):
            raise ValueError("divisor group basis is not Z-linearly independent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence[int]) -> ToricDivisor:
        r = len(self.basis[0].coefficients) if self.basis else 0
        out = [0] * r
        for c, d in zip(coeffs, self.basis):
            for j, a in enumerate(d.coefficients):
                out[j] += c * a
        return ToricDivisor(tuple(out))


@dataclass(frozen=True)
class SubfanLocus:
    """Face-closed set of fan faces, i.e. an invariant open subset."""

    faces: frozenset

    def __contains__(self, key: FaceKey) -> bool:
        return key in self.faces

    def __eq__(self, other) -> bool:
        if isinstance(other, SubfanLocus):
            return self.faces == other.faces
        return NotImplemented

    def __hash__(self):
        return hash(self.faces)

    def sorted_keys(self) -> list:
        return sorted(self.faces, key=lambda k: (len(k), sorted(k)))

    def maximal_keys(self) -> list:
        return [k for k in self.sorted_keys()
                if not any(k < k2 for k2 in self.faces)]

    @staticmethod
    def closure(fan: Fan, keys) -> "SubfanLocus":
        out = set()
        for k in keys:
            out.update(fan.all_keys_under(k))
        return SubfanLocus(frozenset(out))

    @staticmethod
    def whole(fan: Fan) -> "SubfanLocus":
        return SubfanLocus(frozenset(fan.face_keys()))

    @staticmethod
    def empty() -> "SubfanLocus":
        return SubfanLocus(frozenset())


def is_cartier_on(fan: Fan, D: ToricDivisor, key: FaceKey) -> Optional[Vec]:
    """m in M with <m, v_rho> = -a_rho for every ray of the face, if any."""
    idx = sorted(key)
    if not idx:
        return tuple(0 for _ in range(fan.ambient_rank))
    A = IntMatrix.from_rows([fan.rays[i] for i in idx], fan.ambient_rank)
    b = tuple(-D.coefficients[i] for i in idx)
    return solve_integer(A, b)


def cartier_locus(group: DivisorGroup, fan: Fan) -> SubfanLocus:
    keys = [k for k in fan.face_keys()
            if all(is_cartier_on(fan, d, k) is not None for d in group.basis)]
    # solvable on a cone implies solvable on its faces, so already closed
    return SubfanLocus(frozenset(keys))


@dataclass(frozen=True)
class ClassGroupInfo:
    cl_rank: int
    cl_torsion: tuple[int, ...]
    pic_rank: int
    torus_factor_rank: int


def class_group(fan: Fan) -> ClassGroupInfo:
    """Divisor class group Z^rays / (principal divisors) and the rank of
    its Picard subgroup (classes Cartier on every maximal cone)."""
    from .intlinalg import Sublattice, cokernel_projection

    r = len(fan.rays)
    n = fan.ambient_rank
    ray_rows = [tuple(fan.rays[i][j] for i in range(r)) for j in range(n)]
    ray_rank = rank_of_rows([rw for rw in ray_rows if not is_zero_vec(rw)]) \
        if any(not is_zero_vec(rw) for rw in ray_rows) else 0
    if r == 0:
        return ClassGroupInfo(0, (), 0, n)
    principal = Sublattice.from_rows(r, [rw for rw in ray_rows
                                         if not is_zero_vec(rw)])
    _, torsion = cokernel_projection(principal)
    cl_rank = r - principal.rank

    # Cartier divisors: (a, m_sigma per maximal cone) with
    # <m_sigma, v_rho> + a_rho = 0 on each cone's rays
    maxes = fan.maximal_keys
    nvars = r + n * len(maxes)
    rows = []
    for s, key in enumerate(maxes):
        for i in sorted(key):
            row = [0] * nvars
            row[i] = 1
            for j in range(n):
                row[r + n * s + j] = fan.rays[i][j]
            rows.append(tuple(row))
    if rows:
        ker = kernel_basis(IntMatrix.from_rows(rows, nvars))
        a_parts = [row[:r] for row in ker.basis.entries]
    else:
        a_parts = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    cdiv_rank = rank_of_rows([p for p in a_parts if not is_zero_vec(p)]) \
        if any(not is_zero_vec(p) for p in a_parts) else 0
    return ClassGroupInfo(cl_rank, torsion, cdiv_rank - ray_rank, n - ray_rank)


def section_system(fan: Fan, D: ToricDivisor) -> FeasibilitySystem:
    """Homogenized weak system over (u, n): <u, v_rho> + n*a_rho >= 0; its
    degree-n slices are the monomial global sections of nD."""
    forms = [tuple(v) + (a,) for v, a in zip(fan.rays, D.coefficients)]
    return FeasibilitySystem(fan.ambient_rank + 1, weak=tuple(forms))


def zero_pattern(fan: Fan, D: ToricDivisor, u: Sequence[int], n: int) -> tuple[int, ...]:
    return tuple(vdot(u, v) + n * a for v, a in zip(fan.rays, D.coefficients))


def open_complement(fan: Fan, b: Sequence[int]) -> SubfanLocus:
    """Faces all of whose rays have coefficient zero: the invariant open
    set where the section is nonvanishing."""
    zero_rays = frozenset(i for i, x in enumerate(b) if x == 0)
    return SubfanLocus(frozenset(k for k in fan.face_keys() if k <= zero_rays))


def is_affine(fan: Fan, locus: SubfanLocus) -> Optional[FaceKey]:
    """The single cone whose face poset the locus is, if it is one."""
    maxes = locus.maximal_keys()
    if len(maxes) != 1:
        return None
    top = maxes[0]
    if set(locus.faces) == set(fan.all_keys_under(top)):
        return top
    return None


def chart_witness(fan: Fan, tau: FaceKey,
                  degree_rows: Sequence[Vec],
                  weight_rows: Sequence[tuple[Vec, Vec]] = (),
                  shared_strict: Sequence[Vec] = ()) -> Optional[dict]:
    """Strict feasibility of the multi-monomial chart system for the face
    tau: one monomial u_rho per ray of tau (a single monomial when tau is
    the zero face), coupled through shared degree variables s in Z^k.

    degree_rows[j] gives the divisor coefficient at ray j as a linear form
    in s.  Each monomial must satisfy <u, v_j> + deg_j(s) >= 0 at every
    fan ray, with equality at its own ray and strict inequality at rays
    outside tau, plus the equalities weight_rows (m_row . u + s_row . s = 0).
    Returns {"monomials": {rho: u}, "degree": s} or None.
    """
    n = fan.ambient_rank
    k = len(degree_rows[0]) if degree_rows else 0
    ray_indices = sorted(tau) if tau else [None]
    blocks = []
    for rho in ray_indices:
        eqs, weak, strict = [], [], []
        for j, v in enumerate(fan.rays):
            form = tuple(v) + tuple(degree_rows[j])
            if j == rho:
                eqs.append(form)
            elif j in tau:
                weak.append(form)
            else:
                strict.append(form)
        for m_row, s_row in weight_rows:
            eqs.append(tuple(m_row) + tuple(s_row))
        blocks.append(FeasibilitySystem(n + k, tuple(eqs), tuple(weak), tuple(strict)))
    wit = product_feasible_strict(k, blocks, [n] * len(blocks),
                                  shared_strict=tuple(shared_strict))
    if wit is None:
        return None
    monomials = {}
    for pos, rho in enumerate(ray_indices):
        monomials[rho] = wit[pos * n:(pos + 1) * n]
    degree = wit[len(ray_indices) * n:]
    return {"monomials": monomials, "degree": degree}


def ample_locus(group: DivisorGroup, fan: Fan) -> SubfanLocus:
    """Faces admitting, for some divisor in the group, a section whose
    nonvanishing locus is exactly the affine chart of the face — the
    chart witness system with no weight constraint."""
    cartier = cartier_locus(group, fan)
    degree_rows = [tuple(d.coefficients[j] for d in group.basis)
                   for j in range(len(fan.rays))]
    passing = []
    for key in fan.face_keys():
        if key not in cartier:
            continue
        if chart_witness(fan, key, degree_rows) is not None:
            passing.append(key)
    return SubfanLocus.closure(fan, passing)
