"""Lattice points on sphere shells: all n in Z^d with |n|^2 = m.

A shell is only nonempty for integer m, so m (the squared radius) is the
primary parameter everywhere; the radius itself is sqrt(m) and is never
materialized as a float inside any exact predicate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

Point = tuple[int, ...]


@dataclass(frozen=True)
class Shell:
    """All lattice points with squared norm m in dimension d, in lex order."""

    d: int
    m: int
    points: tuple[Point, ...] = field(repr=False)

    def __post_init__(self):
        for p in self.points:
            if len(p) != self.d:
                raise ValueError(f"point {p} has wrong dimension")
            if sum(c * c for c in p) != self.m:
                raise ValueError(f"point {p} is not on the shell m={self.m}")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return not self.points

    def to_json(self) -> str:
        return json.dumps({"d": self.d, "m": self.m, "points": [list(p) for p in self.points]})

    @classmethod
    def from_json(cls, text: str) -> "Shell":
        obj = json.loads(text)
        return cls(d=int(obj["d"]), m=int(obj["m"]),
                   points=tuple(tuple(int(c) for c in p) for p in obj["points"]))


def _check_args(d: int, m: int) -> None:
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")


def _descend(m: int, d: int, prefix: list[int], out: list[Point]) -> None:
    # each coordinate ranges only over values whose square fits the budget
    if d == 1:
        r = isqrt(m)
        if r * r == m:
            if r == 0:
                out.append(tuple(prefix) + (0,))
            else:
                out.append(tuple(prefix) + (-r,))
                out.append(tuple(prefix) + (r,))
        return
    r = isqrt(m)
    for x in range(-r, r + 1):
        prefix.append(x)
        _descend(m - x * x, d - 1, prefix, out)
        prefix.pop()


def enumerate_shell(d: int, m: int) -> Shell:
    """Enumerate Z^d intersected with the sphere of squared radius m.

    Recursive descent with remaining-budget pruning; output is in
    lexicographic order and deterministic.
    """
    _check_args(d, m)
    out: list[Point] = []
    _descend(m, d, [], out)
    out.sort()
    return Shell(d=d, m=m, points=tuple(out))


def representation_count(d: int, m: int) -> int:
    """r_d(m): the number of lattice points on the shell."""
    return len(enumerate_shell(d, m).points)


def representation_count_vector(d: int, max_m: int) -> np.ndarray:
    """r_d(m) for every m in [0, max_m] at once, by iterated convolution.

    The one-dimensional count vector r_1 (2 at positive squares, 1 at 0) is
    convolved with itself d times; counts stay well inside int64 at desk
    scale.  Used by sweeps and as a fast cross-check against enumeration.
    """
    _check_args(d, max_m)
    r1 = np.zeros(max_m + 1, dtype=np.int64)
    r1[0] = 1
    squares = np.arange(1, isqrt(max_m) + 1) ** 2
    r1[squares] = 2
    acc = r1
    for _ in range(d - 1):
        acc = np.convolve(acc, r1)[: max_m + 1]
    return acc


def shell_table(d: int, max_m: int) -> list[list[Point]]:
    """Points of every shell m <= max_m, built by extending a cached lower-
    dimensional table one coordinate at a time.

    Entry [m] is the lex-sorted point list of Shell(d, m).  Total size is the
    number of lattice points in the d-ball of radius sqrt(max_m), so keep
    max_m at desk scale (d=3, max_m=10^4 is a few million points).
    """
    _check_args(d, max_m)
    if d == 2:
        table: list[list[Point]] = [[] for _ in range(max_m + 1)]
        r = isqrt(max_m)
        for x in range(-r, r + 1):
            x2 = x * x
            for y in range(-isqrt(max_m - x2), isqrt(max_m - x2) + 1):
                table[x2 + y * y].append((x, y))
        for pts in table:
            pts.sort()
        return table
    lower = shell_table(d - 1, max_m)
    table = [[] for _ in range(max_m + 1)]
    r = isqrt(max_m)
    for x in range(-r, r + 1):
        x2 = x * x
        for m_rest in range(max_m - x2 + 1):
            rest = lower[m_rest]
            if rest:
                bucket = table[x2 + m_rest]
                for p in rest:
                    bucket.append((x,) + p)
    # first coordinate ascends in the outer loop and the lower table is
    # sorted, so each bucket is already in lex order
    return table
