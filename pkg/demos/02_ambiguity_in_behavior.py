"""Why keeping both readings matters: the same command, two trajectories.

"Within 10 seconds, reach B or reach C while avoiding A." has a local
reading (avoid A only while heading for C) and a global one (avoid A no
matter what).  A planner that commits to the wrong formula accepts or
rejects the wrong runs.  This demo evaluates both candidates on:

* a straight dash through region A into B, and
* a detour that skirts A before dropping into B.

The robustness signs show that the dash is fine under the local reading
but forbidden under the global one, while the detour satisfies both.

Run:  python3 demos/02_ambiguity_in_behavior.py
"""

from pathlib import Path

from ambistl import evaluate_candidates, load_regions, load_trajectory, translate

DATA = Path(__file__).parent / "data"
SENTENCE = "Within 10 seconds, reach B or reach C while avoiding A."


def show(title: str, report) -> None:
    print(f"\n{title}")
    print("-" * len(title))
    for line in report.format_table().splitlines():
        print(f"  {line}")


def main() -> None:
    with open(DATA / "regions.txt") as fh:
        regions = load_regions(fh)
    print(f"command: {SENTENCE}")
    print(f"regions: {', '.join(sorted(regions.names()))} "
          "(axis-aligned rooms; A sits between the start and B)")

    candidates = translate(SENTENCE)
    print("\ncandidate formulas:")
    for rank, cand in enumerate(candidates.candidates, start=1):
        print(f"  {rank}. p={cand.probability:.3f}  {cand.formula}")

    for name, label in [
        ("traj_through_a.csv", "trajectory 1: straight through A into B"),
        ("traj_detour.csv", "trajectory 2: detour around A, then into B"),
    ]:
        with open(DATA / name, newline="") as fh:
            trajectory = load_trajectory(fh)
        report = evaluate_candidates(candidates, trajectory, regions)
        show(label, report)

    print("\nReading the tables: positive robustness = satisfied, and the")
    print("magnitude is the margin in map units. The dash through A flips the")
    print("global reading negative while leaving the local reading positive,")
    print("which is exactly the disagreement the candidate set preserves.")


if __name__ == "__main__":
    main()
