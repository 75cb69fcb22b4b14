#!/usr/bin/env python3
"""Convert a Planetoid citation dataset (ind.<name>.* files) into the
plain-text dataset layout consumed by fedgraph-sim:

    meta.tsv      n <TAB> d <TAB> c
    edges.tsv     one undirected edge "u<TAB>v" per line, u < v, no self-loops
    features.tsv  n lines of d space-separated floats (row-normalized)
    labels.tsv    one class id per line, -1 for unlabeled
    train.txt     training node ids, one per line
    test.txt      test node ids, one per line

Usage: convert_planetoid.py <planetoid-data-dir> <name> <out-dir>

The split follows the standard transductive protocol: the first len(y)
nodes form the training mask and the test.index nodes form the test mask.
Features are row-normalized (x / sum(x); all-zero rows stay zero).
"""
import sys
import os
import pickle
import numpy as np
import scipy.sparse as sp


def load_pickle(path):
    with open(path, "rb") as f:
        return pickle.load(f, encoding="latin1")


def fmt(v):
    return "0" if v == 0 else np.format_float_positional(v, precision=9, trim="-")


def main():
    if len(sys.argv) != 4:
        sys.exit(__doc__)
    src, name, out = sys.argv[1], sys.argv[2], sys.argv[3]

    x, y, tx, ty, allx, ally, graph = (
        load_pickle(os.path.join(src, f"ind.{name}.{ext}"))
        for ext in ("x", "y", "tx", "ty", "allx", "ally", "graph"))
    test_idx_reorder = np.loadtxt(os.path.join(src, f"ind.{name}.test.index"), dtype=int)
    test_idx_range = np.sort(test_idx_reorder)

    if name == "citeseer":
        # isolated citeseer test nodes are missing from tx/ty: pad zero rows
        full = np.arange(test_idx_reorder.min(), test_idx_reorder.max() + 1)
        tx_ext = sp.lil_matrix((len(full), x.shape[1]))
        tx_ext[test_idx_range - test_idx_reorder.min(), :] = tx
        ty_ext = np.zeros((len(full), y.shape[1]))
        ty_ext[test_idx_range - test_idx_reorder.min(), :] = ty
        tx, ty = tx_ext, ty_ext

    features = sp.vstack((allx, tx)).tolil()
    features[test_idx_reorder, :] = features[test_idx_range, :]
    labels_onehot = np.vstack((ally, ty))
    labels_onehot[test_idx_reorder, :] = labels_onehot[test_idx_range, :]

    n, d = features.shape
    c = labels_onehot.shape[1]

    # row-normalize
    feats = np.asarray(features.todense(), dtype=np.float64)
    rowsum = feats.sum(axis=1)
    rowsum[rowsum == 0] = 1.0
    feats = feats / rowsum[:, None]

    # -1 for rows without a one-hot label (possible for padded nodes)
    labels = np.where(labels_onehot.sum(axis=1) > 0,
                      labels_onehot.argmax(axis=1), -1)

    # undirected edge list, deduplicated, self-loops dropped
    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            if u != v:
                edges.add((min(u, v), max(u, v)))
    edges = sorted(edges)

    train_idx = np.arange(len(y))
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "meta.tsv"), "w") as f:
        f.write(f"{n}\t{d}\t{c}\n")
    with open(os.path.join(out, "edges.tsv"), "w") as f:
        for u, v in edges:
            f.write(f"{u}\t{v}\n")
    with open(os.path.join(out, "features.tsv"), "w") as f:
        for i in range(n):
            f.write(" ".join(fmt(v) for v in feats[i]) + "\n")
    with open(os.path.join(out, "labels.tsv"), "w") as f:
        for l in labels:
            f.write(f"{l}\n")
    with open(os.path.join(out, "train.txt"), "w") as f:
        for i in train_idx:
            f.write(f"{i}\n")
    with open(os.path.join(out, "test.txt"), "w") as f:
        for i in test_idx_range:
            f.write(f"{i}\n")

    print(f"{name}: n={n} d={d} c={c} undirected_edges={len(edges)} "
          f"train={len(train_idx)} test={len(test_idx_range)} "
          f"label_rate={100.0 * len(train_idx) / n:.1f}%")


if __name__ == "__main__":
    main()
