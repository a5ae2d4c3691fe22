"""Shared random generators for the property and acceptance suites."""

import random

from twistlab.braid.word import BraidWord


def random_word(rng: random.Random, n: int, length: int) -> BraidWord:
    return BraidWord(n, tuple(rng.choice((1, -1)) * rng.randrange(1, n) for _ in range(length)))


def rewrite(rng: random.Random, w: BraidWord, steps: int) -> BraidWord:
    """Apply random braid relations; the result represents the same braid."""
    letters = list(w.letters)
    n = w.n
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 0:
            g = rng.choice((1, -1)) * rng.randrange(1, n)
            k = rng.randrange(len(letters) + 1)
            letters[k:k] = [g, -g]
        elif kind == 1 and len(letters) > 1:
            k = rng.randrange(len(letters) - 1)
            a, b = letters[k], letters[k + 1]
            if abs(abs(a) - abs(b)) > 1:
                letters[k], letters[k + 1] = b, a
        elif len(letters) > 2:
            k = rng.randrange(len(letters) - 2)
            a, b, c = letters[k:k + 3]
            if a == c and a * b > 0 and abs(abs(a) - abs(b)) == 1:
                letters[k:k + 3] = [b, a, b]
    return BraidWord(n, tuple(letters))


def perturb(rng: random.Random, w: BraidWord) -> BraidWord:
    """Change one letter; usually a different braid."""
    letters = list(w.letters) or [1]
    k = rng.randrange(len(letters))
    letters[k] = -letters[k] if rng.random() < 0.5 else rng.choice((1, -1)) * rng.randrange(1, w.n)
    return BraidWord(w.n, tuple(letters))


def random_moves(rng: random.Random, length: int, count: int) -> list[tuple[int, int]]:
    return [(rng.randrange(1, length), rng.choice((1, -1))) for _ in range(count)]
