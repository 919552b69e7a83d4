"""Regenerates the bundled toy datasets (deterministic)."""
import csv
import random
from pathlib import Path

HERE = Path(__file__).parent


def write(name, rows, header):
    with open(HERE / name, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def inside(x):
    return 2 <= x[0] <= 5 and 3 <= x[1] <= 6


def main():
    rng = random.Random(7)
    header = ["f0", "f1", "f2", "f3", "target"]

    rows = []
    for _ in range(72):
        x = [rng.randint(0, 7) for _ in range(4)]
        rows.append(x + [int(inside(x))])
    write("toy_separable.csv", rows, header)

    rows = []
    for _ in range(90):
        x = [rng.randint(0, 7) for _ in range(4)]
        y = int(inside(x))
        if rng.random() < 0.1:
            y = 1 - y
        rows.append(x + [y])
    write("toy_noisy.csv", rows, header)

    rows = []
    for _ in range(60):
        a, b = rng.randint(0, 7), rng.randint(0, 7)
        rows.append([a, b, a, b, int(inside([a, b]))])
    write("toy_duplicated.csv", rows, ["f0", "f1", "f0_copy", "f1_copy", "target"])


if __name__ == "__main__":
    main()
