"""Pure-Python similarity kernels.

Reference implementation of the two hot primitives behind language-label
normalization. The compiled twin in ``_kernels.pyx`` must agree with these
bit for bit; the dispatcher in ``similarity`` picks whichever is available.
Inputs are expected to be case-folded already.
"""

from __future__ import annotations

BACKEND = "python"


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance (insert, delete, substitute all cost 1)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    current = [0] * (len(b) + 1)
    for i, ca in enumerate(a, start=1):
        current[0] = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous, current = current, previous
    return previous[len(b)]


def dice(a: str, b: str) -> float:
    """Dice coefficient over character-bigram multisets.

    Strings shorter than two characters have no bigrams: two such strings
    score 1.0 when equal; any other pairing with an empty multiset is 0.0.
    """
    if len(a) < 2 and len(b) < 2:
        return 1.0 if a == b else 0.0
    if len(a) < 2 or len(b) < 2:
        return 0.0
    counts: dict[str, int] = {}
    for i in range(len(a) - 1):
        bigram = a[i : i + 2]
        counts[bigram] = counts.get(bigram, 0) + 1
    shared = 0
    for i in range(len(b) - 1):
        bigram = b[i : i + 2]
        remaining = counts.get(bigram, 0)
        if remaining > 0:
            counts[bigram] = remaining - 1
            shared += 1
    return 2.0 * shared / (len(a) - 1 + len(b) - 1)
