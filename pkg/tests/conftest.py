from __future__ import annotations

import random
import sys
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ambistl.lexicon import load_default_lexicon
from ambistl.stl import And, Atom, F, Formula, G, Interval, Not, Or, TrueF, Until
from ambistl.trajectory import Box, RegionMap, Trajectory


@pytest.fixture(scope="session")
def lexicon():
    return load_default_lexicon()


@pytest.fixture(scope="session")
def corpus() -> dict[str, str]:
    text = resources.files("ambistl.data").joinpath("corpus.tsv").read_text(encoding="utf-8")
    rows = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        sid, _, sentence = line.partition("\t")
        rows[sid] = sentence
    return rows


# Demo geometry shared by robustness tests: four rooms around the origin,
# the A-room sits between the start and the B-room.
DEMO_BOXES = {
    "a": (2.0, 0.0, 4.0, 2.0),
    "b": (6.0, 0.0, 8.0, 2.0),
    "c": (6.0, 6.0, 8.0, 8.0),
    "d": (0.0, 6.0, 2.0, 8.0),
}


@pytest.fixture(scope="session")
def demo_regions() -> RegionMap:
    return RegionMap({name: Box(*coords) for name, coords in DEMO_BOXES.items()})


@pytest.fixture(scope="session")
def through_a_trajectory() -> Trajectory:
    """Straight run through region A into region B, 11 steps."""
    return Trajectory(np.array([(0.8 * t, 1.0) for t in range(11)]))


def random_formula(rng: random.Random, depth: int) -> Formula:
    """Random formula over the demo atoms with interval bounds <= 2."""
    atoms = ["a", "b", "c", "d"]
    if depth == 0:
        return TrueF() if rng.random() < 0.1 else Atom(rng.choice(atoms))
    kind = rng.choice(["atom", "not", "and", "or", "F", "G", "until"])
    if kind == "atom":
        return Atom(rng.choice(atoms))
    if kind == "not":
        return Not(random_formula(rng, depth - 1))
    if kind in ("and", "or"):
        children = tuple(random_formula(rng, depth - 1) for _ in range(rng.choice([2, 2, 3])))
        return And(children) if kind == "and" else Or(children)
    lo = rng.randint(0, 2)
    hi = rng.randint(lo, 2)
    interval = Interval(lo, hi)
    if kind == "F":
        return F(interval, random_formula(rng, depth - 1))
    if kind == "G":
        return G(interval, random_formula(rng, depth - 1))
    return Until(interval, random_formula(rng, depth - 1), random_formula(rng, depth - 1))


def random_trajectory(rng: random.Random, min_len: int = 7, max_len: int = 10) -> Trajectory:
    length = rng.randint(min_len, max_len)
    pts = [(rng.uniform(-1.0, 9.0), rng.uniform(-1.0, 9.0)) for _ in range(length)]
    return Trajectory(np.array(pts))
