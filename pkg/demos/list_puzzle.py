"""Learn `last` from five positive and five negative lists, then show the
sub-programs that failure explanation found along the way.

    python demos/list_puzzle.py [task] [seed]
"""
import sys
from collections import Counter

from lffx.learner import LearnerConfig, learn
from lffx.tasks import gen_list_task


def main(name="last", seed=0):
    task = gen_list_task(name, seed=seed)
    for e in task.positives[:2] + task.negatives[:2]:
        print(("+ " if e in task.positives else "- ") + str(e))
    print("...")
    reports = {m: learn(task, LearnerConfig(mode=m)) for m in ("baseline", "explain")}
    for mode, rep in reports.items():
        t = sum(rep.stage_times.values())
        print(f"\n{mode}: {rep.programs_generated} programs in {t:.2f}s")
        print(rep.solution)
    origins = Counter(c.origin for s in reports["explain"].history for c in s.added)
    print(f"\nexplain constraints by origin: {dict(origins)}")
    sub = [c for s in reports["explain"].history for c in s.added if c.origin == "subprogram"]
    print("a few failing sub-programs:")
    for c in sub[:5]:
        print(f"  {c.kind:<15} {c.source.canonical_key}   (from {c.example})")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(args[0] if args else "last", int(args[1]) if len(args) > 1 else 0)
