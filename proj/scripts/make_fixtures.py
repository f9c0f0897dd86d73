#!/usr/bin/env python3
"""Generates the bundled synthetic corpora under data/.

Documents mix words from a class vocabulary, from a "sibling" class that
shares topic words, and from a shared background vocabulary. A per-document
signal strength makes some documents easy and others ambiguous.
"""

import argparse
import random
from pathlib import Path

LETTERS = "abcdefghijklmnopqrstuvwxyz"
VOWELS = "aeiou"
CONSONANTS = "".join(c for c in LETTERS if c not in VOWELS)


def make_word(rng, used):
    while True:
        n = rng.randint(4, 9)
        w = "".join(rng.choice(CONSONANTS if i % 2 == 0 else VOWELS) for i in range(n))
        if w not in used:
            used.add(w)
            return w


def zipf_weights(n, s=1.0):
    return [1.0 / (r + 1) ** s for r in range(n)]


class Generator:
    def __init__(self, seed, num_classes, class_vocab, shared_vocab, sibling_share, signal, length):
        self.rng = random.Random(seed)
        used = set()
        self.k = num_classes
        self.class_words = [[make_word(self.rng, used) for _ in range(class_vocab)] for _ in range(num_classes)]
        self.shared = [make_word(self.rng, used) for _ in range(shared_vocab)]
        self.cw = zipf_weights(class_vocab)
        self.sw = zipf_weights(shared_vocab)
        self.sibling_share = sibling_share
        self.signal = signal  # (alpha, beta) of the per-document signal strength
        self.length = length

    def sibling(self, c):
        return c ^ 1 if (c ^ 1) < self.k else c

    def document(self, c):
        rng = self.rng
        s = rng.betavariate(*self.signal)
        n = rng.randint(*self.length)
        words = []
        for _ in range(n):
            u = rng.random()
            if u < s:
                src = self.class_words[c] if rng.random() >= self.sibling_share else self.class_words[self.sibling(c)]
                words.append(rng.choices(src, weights=self.cw)[0])
            else:
                words.append(rng.choices(self.shared, weights=self.sw)[0])
        return " ".join(words)

    def corpus(self, n):
        labels = [i % self.k for i in range(n)]
        self.rng.shuffle(labels)
        return [(self.document(c), f"class_{c}") for c in labels]


def write_tsv(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for text, label in rows:
            f.write(f"{text}\t{label}\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    # Label-noise fixture: 2k training documents, K=4, plus a clean dev set.
    g = Generator(seed=11, num_classes=4, class_vocab=800, shared_vocab=2000, sibling_share=0.1,
                  signal=(3.0, 5.0), length=(15, 40))
    write_tsv(out / "noise4_train.tsv", g.corpus(2000))
    write_tsv(out / "noise4_dev.tsv", g.corpus(1000))

    # Semi-supervised fixture: 7.5k documents; 600 labeled + 5.4k unlabeled + 1.5k dev.
    g = Generator(seed=23, num_classes=4, class_vocab=1500, shared_vocab=3000, sibling_share=0.2,
                  signal=(3.0, 5.0), length=(15, 40))
    write_tsv(out / "ssl4.tsv", g.corpus(7500))
    write_tsv(out / "ssl4_test.tsv", g.corpus(2000))


if __name__ == "__main__":
    main()
