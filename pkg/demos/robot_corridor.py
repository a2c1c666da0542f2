"""Compare how many programs each mode tests on the robot corridor.

    python demos/robot_corridor.py [max_n]
"""
import sys

from lffx import bench
from lffx.tasks import gen_robot_task


def main(max_n: int = 5):
    records = []
    for n in range(1, max_n + 1):
        records += bench.run(gen_robot_task(n))
    print(bench.summarize(records))
    best = [r for r in records if r.mode == "explain" and r.task == f"robot-{max_n}"][0]
    print(f"\nrobot-{max_n} solution: {best.solution}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 5)
