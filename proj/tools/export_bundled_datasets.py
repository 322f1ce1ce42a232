#!/usr/bin/env python3
"""Export the UCI datasets that scikit-learn bundles into the canonical CSV
layout used by `eal` (header f0..fN,label; shortest round-trip floats).

Only iris, wine and breast_cancer ship with scikit-learn; everything else in
the manifest needs a live `eal fetch`.  Labels are written in the original
UCI spelling so a genuine fetch produces the same file.
"""

import argparse
import os

import numpy as np
from sklearn import datasets


def shortest(x: float) -> str:
    # repr() of a Python float is the shortest round-trip form, same contract
    # as C++ std::to_chars except that integral values keep a trailing ".0".
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def write_csv(path: str, features: np.ndarray, labels: list[str]) -> None:
    n, d = features.shape
    with open(path, "w", newline="\n") as out:
        out.write(",".join([f"f{j}" for j in range(d)] + ["label"]) + "\n")
        for i in range(n):
            cells = [shortest(features[i, j]) for j in range(d)]
            out.write(",".join(cells + [labels[i]]) + "\n")
    print(f"wrote {path}: {n} rows, {d} features, {len(set(labels))} classes")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-dir", default="data")
    args = parser.parse_args()
    os.makedirs(args.data_dir, exist_ok=True)

    iris = datasets.load_iris()
    write_csv(
        os.path.join(args.data_dir, "iris.csv"),
        iris.data,
        ["Iris-" + iris.target_names[t] for t in iris.target],
    )

    wine = datasets.load_wine()
    write_csv(
        os.path.join(args.data_dir, "wine.csv"),
        wine.data,
        [str(t + 1) for t in wine.target],  # UCI wine classes are 1..3
    )

    cancer = datasets.load_breast_cancer()
    # UCI WDBC spells the diagnosis M/B; sklearn index 0 = malignant.
    write_csv(
        os.path.join(args.data_dir, "breast_cancer.csv"),
        cancer.data,
        ["M" if t == 0 else "B" for t in cancer.target],
    )


if __name__ == "__main__":
    main()
