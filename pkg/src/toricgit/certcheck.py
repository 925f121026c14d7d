"""Independent replay of semistability certificates.

Validates every clause of the chart-witness definition from the
certificate data alone, using nothing but integer arithmetic and a local
rank computation — in particular it never calls the cone/feasibility
engine whose output it is checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failures: tuple[str, ...]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rank(rows) -> int:
    mat = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for j in range(cols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][j] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][j] != 0:
                f = mat[i][j] / mat[rank][j]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def check_certificate(rays: Sequence[tuple], face_keys: Sequence[frozenset],
                      divisor_rows: Sequence[tuple], shifts: Sequence[tuple],
                      phi_columns: Sequence[tuple], cert) -> CheckResult:
    """Replay one SemistabilityCertificate against raw problem data."""
    failures = []
    k = len(divisor_rows)
    r = len(rays)
    chart = cert.chart

    if not any(chart == key for key in face_keys):
        failures.append("chart-is-face")

    degree = tuple(cert.degree)
    if cert.group_case:
        if len(degree) != k:
            failures.append("degree-length")
    else:
        if len(degree) != 1 or degree[0] <= 0:
            failures.append("degree-positive")

    a = [sum(degree[i] * divisor_rows[i][j] for i in range(len(degree)))
         for j in range(r)]
    shift = tuple(sum(degree[i] * shifts[i][t] for i in range(len(degree)))
                  for t in range(len(phi_columns)))

    expected_rhos = sorted(chart) if chart else [None]
    got_rhos = [rho for rho, _ in cert.monomials]
    if sorted(got_rhos, key=lambda x: (x is None, x)) != expected_rhos:
        failures.append("monomial-per-ray")

    min_pattern = None
    for rho, u in cert.monomials:
        b = [_dot(u, rays[j]) + a[j] for j in range(r)]
        if any(x < 0 for x in b):
            failures.append(f"section-nonnegative@{rho}")
        if rho is not None and b[rho] != 0:
            failures.append(f"vanishing-order-zero@{rho}")
        if any(b[j] <= 0 for j in range(r) if j not in chart):
            failures.append(f"strict-outside-chart@{rho}")
        w = [_dot(col, u) + s for col, s in zip(phi_columns, shift)]
        if any(x != 0 for x in w):
            failures.append(f"invariant-weight@{rho}")
        min_pattern = b if min_pattern is None else [
            min(x, y) for x, y in zip(min_pattern, b)]

    if min_pattern is not None:
        zero_set = frozenset(j for j, x in enumerate(min_pattern) if x == 0)
        if zero_set != chart:
            failures.append("complement-is-chart")
        # affineness of the complement: every fan face inside the zero set
        # must be a face of the chart, i.e. keyed by a subset
        if any(not key <= chart for key in face_keys if key <= zero_set):
            failures.append("complement-affine")

    expected_cartier = k if cert.group_case else 1
    if len(cert.cartier) != expected_cartier:
        failures.append("cartier-witness-count")
    if cert.group_case:
        # each basis divisor must be principal on the chart
        check_rows = list(divisor_rows)
    else:
        # the certified multiple n*D must be principal on the chart
        check_rows = [a]
    for m, row in zip(cert.cartier, check_rows):
        if any(_dot(m, rays[i]) != -row[i] for i in sorted(chart)):
            failures.append("cartier-witness")

    if cert.group_case:
        cs = []
        for c, w in cert.invertibles:
            cs.append(tuple(c))
            bad = False
            for i in sorted(chart):
                val = _dot(w, rays[i]) + sum(
                    c[t] * divisor_rows[t][i] for t in range(k))
                if val != 0:
                    bad = True
            wv = [_dot(col, w) + sum(c[t] * shifts[t][j] for t in range(k))
                  for j, col in enumerate(phi_columns)]
            if any(x != 0 for x in wv):
                bad = True
            if bad:
                failures.append("invertible-witness")
        if _rank(cs) != k:
            failures.append("finite-index")

    return CheckResult(not failures, tuple(failures))


def check_locus(fan, divisor_rows, shifts, phi_columns, ss) -> CheckResult:
    """Replay every certificate of a SemistableLocus; also checks that
    the locus is face-closed and that every maximal face is certified."""
    failures = []
    keys = list(fan.face_keys())
    for key in ss.locus.faces:
        if not any(k2 == key for k2 in keys):
            failures.append("locus-face-exists")
        if not all(k2 in ss.locus.faces for k2 in keys if k2 <= key):
            failures.append("locus-face-closed")
    certified = {k for k, _ in ss.certificates}
    for key in ss.locus.maximal_keys():
        if key not in certified:
            failures.append("maximal-face-certified")
    for _, cert in ss.certificates:
        res = check_certificate(list(fan.rays), keys, divisor_rows, shifts,
                                phi_columns, cert)
        failures.extend(res.failures)
    return CheckResult(not failures, tuple(failures))
