"""Problem file parsing: a single JSON tree describing a fan, an acting
subtorus, named divisors with optional character shifts, and optional
divisor groups.  Unknown fields and non-integer data are rejected with
messages naming the offending entry."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .actions import Linearization, SubtorusAction
from .fans import DivisorGroup, Fan, ToricDivisor, validate_fan


class ParseError(Exception):
    pass


KNOWN_FIELDS = {"lattice_rank", "rays", "cones", "action", "divisors",
                "shifts", "group", "weights"}


@dataclass
class Problem:
    fan: Fan
    action: Optional[SubtorusAction]
    divisors: dict
    shifts: dict
    groups: dict            # name -> list of divisor names
    weights: Optional[tuple]

    def divisor(self, name: str) -> ToricDivisor:
        if name not in self.divisors:
            raise ParseError(f"unknown divisor name: {name!r}")
        return self.divisors[name]

    def group(self, name: str) -> tuple[DivisorGroup, Linearization]:
        if name not in self.groups:
            raise ParseError(f"unknown group name: {name!r}")
        names = self.groups[name]
        basis = tuple(self.divisor(nm) for nm in names)
        d = self.action.d if self.action else 0
        shifts = tuple(self.shift_for(nm, d) for nm in names)
        return DivisorGroup(basis), Linearization(shifts)

    def shift_for(self, divisor_name: str, d: int) -> tuple:
        s = self.shifts.get(divisor_name)
        if s is None:
            return tuple(0 for _ in range(d))
        if len(s) != d:
            raise ParseError(
                f"shift for {divisor_name!r} has length {len(s)}, expected {d}")
        return s

    def linearization_for(self, divisor_name: str) -> Linearization:
        d = self.action.d if self.action else 0
        return Linearization((self.shift_for(divisor_name, d),))


def _int_vector(value, where: str) -> tuple:
    if not isinstance(value, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ParseError(f"{where}: expected a list of integers, got {value!r}")
    return tuple(value)


def parse_problem(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise ParseError("problem file must be a JSON object")
    unknown = set(data) - KNOWN_FIELDS
    if unknown:
        raise ParseError(f"unknown fields: {sorted(unknown)}")
    for required in ("lattice_rank", "rays", "cones"):
        if required not in data:
            raise ParseError(f"missing required field {required!r}")

    rank = data["lattice_rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        raise ParseError(f"lattice_rank must be a nonnegative integer")
    rays = [_int_vector(r, f"rays[{i}]") for i, r in enumerate(data["rays"])]
    cones = data["cones"]
    if not isinstance(cones, list):
        raise ParseError("cones must be a list of ray-index lists")
    fan = validate_fan(rank, rays, cones)

    action = None
    if "action" in data:
        cols = [_int_vector(c, f"action[{i}]")
                for i, c in enumerate(data["action"])]
        for c in cols:
            if len(c) != rank:
                raise ParseError(f"action column {c} has wrong length")
        action = SubtorusAction.from_columns(cols, rank)

    divisors = {}
    for name, coeffs in (data.get("divisors") or {}).items():
        v = _int_vector(coeffs, f"divisors[{name!r}]")
        if len(v) != len(rays):
            raise ParseError(
                f"divisor {name!r} has {len(v)} coefficients for {len(rays)} rays")
        divisors[name] = ToricDivisor(v)

    shifts = {}
    for name, vec in (data.get("shifts") or {}).items():
        if name not in divisors:
            raise ParseError(f"shift given for unknown divisor {name!r}")
        shifts[name] = _int_vector(vec, f"shifts[{name!r}]")

    groups = {}
    g = data.get("group")
    if g is not None:
        if isinstance(g, list):
            groups["G"] = [str(x) for x in g]
        elif isinstance(g, dict):
            for name, names in g.items():
                if not isinstance(names, list):
                    raise ParseError(f"group {name!r} must list divisor names")
                groups[name] = [str(x) for x in names]
        else:
            raise ParseError("group must be a list of divisor names or a "
                             "mapping of group names to such lists")
        for gname, names in groups.items():
            for nm in names:
                if nm not in divisors:
                    raise ParseError(
                        f"group {gname!r} references unknown divisor {nm!r}")

    weights = None
    if "weights" in data:
        weights = tuple(_int_vector(w, f"weights[{i}]")
                        for i, w in enumerate(data["weights"]))

    return Problem(fan, action, divisors, shifts, groups, weights)


def load_problem(path: str) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON at line {e.lineno}: {e.msg}")
    return parse_problem(data)
