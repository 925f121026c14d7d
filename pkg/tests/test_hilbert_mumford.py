"""Support-pattern limits, destabilizing subgroups, Hilbert bases, and
the ambient cross-validation of toric semistability."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricgit.actions import Linearization
from toricgit.cones import Cone
from toricgit.hilbert_mumford import (
    AmbientModel,
    HilbertBasisTooLarge,
    LinearAction,
    PointPattern,
    ambient_model,
    ambient_semistable,
    cross_validate,
    destabilize,
    hilbert_basis,
    limit,
)
from toricgit.intlinalg import vdot
from toricgit.oracle import destabilize_boxed


def _lin0(d):
    return Linearization.canonical(1, d)


# --- limits -------------------------------------------------------------

def test_limit_basic():
    act = LinearAction(((1,), (-1,)))
    p = PointPattern.of([0, 1])
    assert limit((1,), p, act) is None  # negative pairing on coord 1
    assert limit((0,), p, act) == p     # fixed
    q = PointPattern.of([0])
    assert limit((1,), q, act) == PointPattern.of([])
    assert limit((-1,), q, act) is None


def test_limit_mixed_weights():
    act = LinearAction(((1, 0), (0, 1), (1, -1)))
    p = PointPattern.of([0, 2])
    got = limit((1, 1), p, act)
    assert got == PointPattern.of([2])  # weight (1,-1) pairs to 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_limit_scale_invariance(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    n = rng.randint(1, 5)
    act = LinearAction(tuple(tuple(rng.randint(-3, 3) for _ in range(d))
                             for _ in range(n)))
    p = PointPattern(frozenset(i for i in range(n) if rng.random() < 0.6))
    lam = tuple(rng.randint(-3, 3) for _ in range(d))
    l1 = limit(lam, p, act)
    l2 = limit(tuple(3 * x for x in lam), p, act)
    assert l1 == l2
    if l1 is not None:
        assert l1.support <= p.support
        # limits are idempotent
        assert limit(lam, l1, act) == l1


# --- destabilize ----------------------------------------------------------

def test_destabilize_finds_witness():
    act = LinearAction(((1,), (-1,)))
    p = PointPattern.of([0])
    lam = destabilize(p, lambda q: not q.support, act)
    assert lam is not None
    assert limit(lam, p, act) == PointPattern.of([])


def test_destabilize_infeasible():
    act = LinearAction(((1,), (-1,)))
    p = PointPattern.of([0, 1])
    # cannot kill both coordinates: weights are opposite
    assert destabilize(p, lambda q: not q.support, act) is None


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_destabilize_matches_box_search(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 2)
    n = rng.randint(1, 4)
    act = LinearAction(tuple(tuple(rng.randint(-2, 2) for _ in range(d))
                             for _ in range(n)))
    p = PointPattern(frozenset(i for i in range(n) if rng.random() < 0.7))
    targets = set()
    for i in range(n + 1):
        t = frozenset(j for j in p.support if rng.random() < 0.5)
        targets.add(t)
    lam = destabilize(p, lambda q: q.support in targets, act)
    boxed = destabilize_boxed(p.support, act.weights, targets, 4)
    if lam is not None:
        lim = limit(lam, p, act)
        assert lim is not None and lim.support in targets
    else:
        assert boxed is None


# --- Hilbert bases ---------------------------------------------------------

def test_hilbert_basis_quadrant():
    c = Cone.from_generators(2, [(1, 0), (0, 1)])
    assert hilbert_basis(c) == [(0, 1), (1, 0)]


def test_hilbert_basis_singular_cone():
    # cone over (1,0),(1,2): index-2 quotient singularity needs (1,1)
    c = Cone.from_generators(2, [(1, 0), (1, 2)])
    assert hilbert_basis(c) == [(1, 0), (1, 1), (1, 2)]


def test_hilbert_basis_generates():
    c = Cone.from_generators(2, [(2, -1), (-1, 2)])
    hb = hilbert_basis(c)
    # the extreme generators alone do not generate; the interior axis
    # points are irreducible too
    assert (1, 0) in hb and (0, 1) in hb
    # every small lattice point of the cone is an N-combination of hb:
    # verified by greedy reduction
    for x in range(-4, 5):
        for y in range(-4, 5):
            p = (x, y)
            if not c.contains_point(p):
                continue
            cur = p
            progress = True
            while any(v != 0 for v in cur) and progress:
                progress = False
                for h in hb:
                    nxt = tuple(a - b for a, b in zip(cur, h))
                    if c.contains_point(nxt):
                        cur = nxt
                        progress = True
                        break
            assert all(v == 0 for v in cur), (p, hb)


def test_hilbert_basis_rejects_non_pointed():
    with pytest.raises(ValueError):
        hilbert_basis(Cone.from_generators(2, [(1, 0), (-1, 0)]))


def test_hilbert_basis_guard():
    c = Cone.from_generators(2, [(1, 0), (1, 1000)])
    with pytest.raises(HilbertBasisTooLarge):
        hilbert_basis(c, max_points=100)


# --- ambient model / cross-validation --------------------------------------

def test_ambient_model_intro(plane_fan, hyperbolic_action, div_z):
    model = ambient_model(plane_fan, hyperbolic_action, div_z, _lin0(1))
    assert len(model.basis) == 3
    # degree-0 coordinates are the chart functions z*w-type invariants of
    # the section ring; every weight carries its degree in the last slot
    for h, w in zip(model.basis, model.action.weights):
        assert w[-1] == h[-1]
    whole = model.pattern_for(frozenset())
    assert whole.support == frozenset(range(len(model.basis)))


def test_ambient_semistable_examples(plane_fan, hyperbolic_action, div_z):
    model = ambient_model(plane_fan, hyperbolic_action, div_z, _lin0(1))
    assert ambient_semistable(model.pattern_for(frozenset()), model.action)
    assert not ambient_semistable(PointPattern.of([]), model.action)


def test_cross_validate_intro(plane_fan, hyperbolic_action, div_z):
    cv = cross_validate(plane_fan, hyperbolic_action, div_z, _lin0(1))
    assert cv.agrees
    d = {k: (t, a) for k, t, a in cv.per_face}
    assert d[frozenset()] == (True, True)
    assert d[frozenset({1})] == (True, True)
    assert d[frozenset({0})] == (False, False)
    assert d[frozenset({0, 1})] == (False, False)


def test_cross_validate_quadric(quadric_fan, quadric_action, quadric_divisor):
    cv = cross_validate(quadric_fan, quadric_action, quadric_divisor,
                        _lin0(2))
    assert cv.agrees
    assert len(cv.model.basis) == 9
    semis = {k for k, t, _ in cv.per_face if t}
    assert semis == {frozenset(), frozenset({0}), frozenset({2})}
