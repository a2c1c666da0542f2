"""Step through the droplast pool in both modes and show what each failed
program teaches the learner.

    python demos/appendix_walkthrough.py
"""
from lffx.learner import LearnerConfig, learn
from lffx.tasks import appendix_task


def main():
    task = appendix_task()
    names = {p.canonical_key: f"h{i}" for i, p in enumerate(task.bias.pool, start=1)}
    print("examples:")
    for e in task.positives:
        print(f"  +  {e}")
    for e in task.negatives:
        print(f"  -  {e}")
    for mode in ("baseline", "explain"):
        rep = learn(task, LearnerConfig(mode=mode))
        print(f"\n== {mode} ==")
        for step in rep.history:
            name = names[step.program.canonical_key]
            print(f"{name}: {step.outcome}")
            for line in str(step.program).splitlines():
                print(f"      {line}")
            for c in step.added:
                print(f"   -> {c.kind:<15} {c.source.canonical_key}  [{c.origin}]")
        order = " ".join(names[k] for k in rep.generated_keys)
        print(f"generated {rep.programs_generated}: {order}; returned {names[rep.solution.canonical_key]}")


if __name__ == "__main__":
    main()
