#!/usr/bin/env python3
"""Convert a pickled averaged-perceptron tagger model (weights, tagdict, classes)
into the gzipped tab-separated format read by revguard::PerceptronTagger."""
import argparse
import gzip
import pickle


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("pickle_path")
    ap.add_argument("out_path")
    args = ap.parse_args()

    with open(args.pickle_path, "rb") as f:
        weights, tagdict, classes = pickle.load(f, encoding="latin1")

    with gzip.open(args.out_path, "wt", encoding="utf-8", newline="\n") as out:
        out.write("# revguard perceptron tagger model v1\n")
        out.write("classes\t" + "\t".join(sorted(classes)) + "\n")
        for word in sorted(tagdict):
            out.write(f"tag\t{word}\t{tagdict[word]}\n")
        # Insertion order of the per-feature dicts is kept; score sums follow it.
        for feat, labels in weights.items():
            if "\t" in feat or "\n" in feat:
                raise SystemExit(f"unsupported feature string: {feat!r}")
            cells = "\t".join(f"{label}={w!r}" for label, w in labels.items())
            out.write(f"feat\t{feat}\t{cells}\n")


if __name__ == "__main__":
    main()
