"""Acceptance suite: every criterion the package must meet, one test each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.  Expected values are either hand-built reference formulas
(constructed directly as syntax trees, independent of the pipeline) or
checked against the brute-force oracle in ``oracle.py``.
"""

from __future__ import annotations

import math
import random
import time

import numpy as np
import pytest

from ambistl.pipeline import translate
from ambistl.stl import (
    And,
    F,
    G,
    Interval,
    Not,
    Or,
    TrueF,
    Until,
    canonicalize,
    extent,
    format_formula,
    robustness,
)
from ambistl.trajectory import Box, RegionMap, Trajectory, evaluate_candidates

from conftest import DEMO_BOXES, random_formula, random_trajectory
from oracle import brute_force_robustness
from reference_formulas import EXPECTED_COUNTS, EXPECTED_TOP, REFERENCE, S8_GLOBAL, S8_LOCAL

DEMO_REGIONS = RegionMap({k: Box(*v) for k, v in DEMO_BOXES.items()})

ORDER = [f"S{i}" for i in range(1, 13)]


def _canon(formula):
    return format_formula(canonicalize(formula))


def _canon_set(formulas):
    return {_canon(f) for f in formulas}


@pytest.fixture(scope="module")
def results(lexicon, corpus):
    started = time.perf_counter()
    sets = {sid: translate(corpus[sid], lexicon, n=40) for sid in ORDER}
    elapsed = time.perf_counter() - started
    return sets, elapsed


def test_candidate_counts_reproduced(results):
    """Candidate counts for the twelve corpus sentences are exactly
    (1,1,1,1,1,1,1,2,2,2,3,5), computed in under five seconds."""
    sets, elapsed = results
    counts = [len(sets[sid].candidates) for sid in ORDER]
    assert counts == [EXPECTED_COUNTS[sid] for sid in ORDER]
    assert counts == [1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 5]
    assert elapsed < 5.0, f"corpus translation took {elapsed:.2f}s"
    print(f"\nPASS candidate counts {tuple(counts)} in {elapsed:.2f}s")


def test_formula_sets_reproduced_for_ambiguous_sentences(results):
    """For S8-S12 the canonical candidate sets equal the reference sets."""
    sets, _ = results
    for sid in ["S8", "S9", "S10", "S11", "S12"]:
        got = {_canon(c.formula) for c in sets[sid].candidates}
        want = _canon_set(REFERENCE[sid])
        assert got == want, f"{sid}: {sorted(got)} != {sorted(want)}"
    print("\nPASS formula sets for S8-S12 match the reference readings")


def test_scope_ambiguity_pair(results):
    """S8 yields exactly the local-scope and global-scope readings."""
    sets, _ = results
    got = {_canon(c.formula) for c in sets["S8"].candidates}
    assert got == {_canon(S8_LOCAL), _canon(S8_GLOBAL)}
    print("\nPASS S8 produces exactly the local/global reading pair")


def test_rank_order_and_probability_normalisation(results):
    """Exact probability values are parser-specific and not reproduced;
    the substituted contract: the local attachment ranks first for S8-S11,
    every probability vector sums to one, and S12 has five strictly
    positive candidates."""
    sets, _ = results
    for sid, top in EXPECTED_TOP.items():
        first = sets[sid].candidates[0]
        assert _canon(first.formula) == _canon(top), f"{sid} top candidate is not the local reading"
        assert first.probability > sets[sid].candidates[1].probability
    for sid in ORDER:
        total = sum(c.probability for c in sets[sid].candidates)
        assert abs(total - 1.0) <= 1e-9
    s12 = sets["S12"]
    assert len(s12.candidates) == 5
    assert all(c.probability > 0 for c in s12.candidates)
    print("\nPASS local readings rank first for S8-S11; probabilities normalised; S12 positive")


def test_robustness_oracle_suite():
    """200 random formulas x random trajectories: the recursive evaluator
    agrees with the brute-force transcription, the always/eventually
    duality holds, and eventually equals true-until, all within 1e-12."""

    def close(u, v, tol=1e-12):
        if math.isinf(u) or math.isinf(v):
            return u == v
        return abs(u - v) <= tol

    started = time.perf_counter()
    rng = random.Random(20260810)
    checked = 0
    for _ in range(200):
        formula = random_formula(rng, depth=3)
        lo = rng.randint(0, 2)
        wrapper = Interval(lo, lo + rng.randint(0, 2))
        needed = extent(formula) + wrapper.hi + 1
        x = random_trajectory(rng, min_len=needed, max_len=max(needed, 10))
        points = [tuple(p) for p in x.states]

        lib = robustness(formula, x, DEMO_REGIONS, 0)
        oracle = brute_force_robustness(formula, points, DEMO_BOXES, 0)
        assert close(lib, oracle), f"{format_formula(formula)}: {lib} != {oracle}"

        dual_lhs = robustness(G(wrapper, formula), x, DEMO_REGIONS, 0)
        dual_rhs = -robustness(F(wrapper, Not(formula)), x, DEMO_REGIONS, 0)
        assert close(dual_lhs, dual_rhs)

        until_lhs = robustness(F(wrapper, formula), x, DEMO_REGIONS, 0)
        until_rhs = robustness(Until(wrapper, TrueF(), formula), x, DEMO_REGIONS, 0)
        assert close(until_lhs, until_rhs)
        checked += 1
    elapsed = time.perf_counter() - started
    assert checked == 200
    assert elapsed < 10.0, f"oracle suite took {elapsed:.2f}s"
    print(f"\nPASS robustness oracle suite: 200 formulas, dualities within 1e-12, {elapsed:.2f}s")


def test_sequence_derivations_deduplicate(results):
    """S7 collapses every derivation to one canonical sequence formula."""
    sets, _ = results
    s7 = sets["S7"]
    assert len(s7.candidates) == 1
    assert s7.candidates[0].support_count >= 1
    assert _canon(s7.candidates[0].formula) == _canon(REFERENCE["S7"][0])
    print(
        f"\nPASS S7 deduplication: {s7.candidates[0].support_count} derivation(s), one candidate"
    )


def test_behavioral_discrimination(results):
    """A trajectory through region A that still reaches B within ten steps
    satisfies S8's local reading and violates its global reading."""
    sets, _ = results
    x = Trajectory(np.array([(0.8 * t, 1.0) for t in range(11)]))
    report = evaluate_candidates(sets["S8"], x, DEMO_REGIONS)
    by_formula = {row.formula: row for row in report.rows}
    local = by_formula[_canon(S8_LOCAL)]
    global_ = by_formula[_canon(S8_GLOBAL)]
    assert local.robustness > 0
    assert global_.robustness < 0

    points = [tuple(p) for p in x.states]
    assert brute_force_robustness(S8_LOCAL, points, DEMO_BOXES, 0) > 0
    assert brute_force_robustness(S8_GLOBAL, points, DEMO_BOXES, 0) < 0
    print(
        "\nPASS discriminating trajectory: local "
        f"{local.robustness:+.3f}, global {global_.robustness:+.3f} (signs oracle-checked)"
    )


def test_canonicalization_property_suite():
    """500 random formulas: canonicalization is idempotent and invariant
    under permutations of connective children, with exact equality."""
    rng = random.Random(987_654_321)

    def permute(g):
        if isinstance(g, (And, Or)):
            children = [permute(c) for c in g.children]
            rng.shuffle(children)
            return type(g)(tuple(children))
        if isinstance(g, Not):
            return Not(permute(g.child))
        if isinstance(g, (F, G)):
            return type(g)(g.interval, permute(g.child))
        if isinstance(g, Until):
            return Until(g.interval, permute(g.left), permute(g.right))
        return g

    for _ in range(500):
        formula = random_formula(rng, depth=rng.randint(1, 4))
        once = canonicalize(formula)
        assert canonicalize(once) == once
        assert canonicalize(permute(formula)) == once
    print("\nPASS canonicalization: idempotent and permutation-invariant on 500 formulas")
