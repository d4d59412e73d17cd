import itertools
import json
import random
from math import isqrt

import numpy as np
import pytest

from capbands.shell import (
    Shell,
    enumerate_shell,
    representation_count,
    representation_count_vector,
    shell_table,
)


def brute_force_shell(d, m):
    r = isqrt(m)
    pts = [p for p in itertools.product(range(-r, r + 1), repeat=d)
           if sum(c * c for c in p) == m]
    return sorted(pts)


def test_shell_2_25():
    sh = enumerate_shell(2, 25)
    expected = {(3, 4), (4, 3), (5, 0), (0, 5)}
    expected |= {(-x, y) for x, y in expected} | {(x, -y) for x, y in expected} \
        | {(-x, -y) for x, y in expected}
    assert set(sh.points) == expected
    assert len(sh) == 12


def test_shell_3_1_unit_vectors():
    sh = enumerate_shell(3, 1)
    assert set(sh.points) == {(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0),
                              (0, 0, 1), (0, 0, -1)}


def test_shell_2_3_empty():
    sh = enumerate_shell(2, 3)
    assert sh.is_empty
    assert len(sh) == 0


def test_representation_counts():
    assert representation_count(2, 25) == 12
    assert representation_count(3, 2) == 12
    assert representation_count(2, 3) == 0
    sh = enumerate_shell(3, 2)
    perms = {(1, 1, 0), (1, 0, 1), (0, 1, 1)}
    got = {tuple(abs(c) for c in p) for p in sh.points}
    assert got == perms


def test_argument_validation():
    with pytest.raises(ValueError):
        enumerate_shell(1, 5)
    with pytest.raises(ValueError):
        enumerate_shell(2, 0)
    with pytest.raises(ValueError):
        enumerate_shell(3, -4)


def test_points_satisfy_norm_exactly():
    for d, m in [(2, 100), (3, 101), (4, 33)]:
        sh = enumerate_shell(d, m)
        for p in sh.points:
            assert sum(c * c for c in p) == m


def test_symmetry_closure():
    rng = random.Random(7)
    for _ in range(20):
        d = rng.choice([2, 3])
        m = rng.randint(1, 500)
        pts = set(enumerate_shell(d, m).points)
        for p in pts:
            for signs in itertools.product((1, -1), repeat=d):
                assert tuple(s * c for s, c in zip(signs, p)) in pts
            for perm in itertools.permutations(p):
                assert perm in pts


def test_lexicographic_order_and_determinism():
    sh = enumerate_shell(3, 50)
    assert list(sh.points) == sorted(sh.points)
    assert sh.points == enumerate_shell(3, 50).points


def test_oracle_equivalence_sampled():
    rng = random.Random(11)
    cases = [(2, m) for m in rng.sample(range(1, 2000), 25)]
    cases += [(3, m) for m in rng.sample(range(1, 800), 12)]
    cases += [(4, m) for m in rng.sample(range(1, 200), 6)]
    for d, m in cases:
        assert list(enumerate_shell(d, m).points) == brute_force_shell(d, m)


def test_shell_invariant_rejects_bad_points():
    with pytest.raises(ValueError):
        Shell(d=2, m=25, points=((3, 4), (1, 1)))
    with pytest.raises(ValueError):
        Shell(d=2, m=25, points=((3, 4, 0),))


def test_json_round_trip():
    sh = enumerate_shell(3, 25)
    again = Shell.from_json(sh.to_json())
    assert again == sh
    obj = json.loads(sh.to_json())
    assert set(obj) == {"d", "m", "points"}


def test_count_vector_matches_enumeration():
    for d in (2, 3, 4):
        vec = representation_count_vector(d, 120)
        for m in range(1, 121):
            assert vec[m] == len(brute_force_shell(d, m)), (d, m)
    assert representation_count_vector(2, 25)[25] == 12


def test_shell_table_matches_enumeration():
    for d in (2, 3):
        table = shell_table(d, 150)
        for m in range(1, 151):
            assert table[m] == list(enumerate_shell(d, m).points), (d, m)


def test_count_vector_is_int64_exact():
    vec = representation_count_vector(2, 10000)
    assert vec.dtype == np.int64
    # Gauss: partial sums equal the lattice count of the closed disk
    assert int(vec[:101].sum()) == len(
        [1 for x in range(-10, 11) for y in range(-10, 11) if x * x + y * y <= 100])
