"""String similarity metrics for language-label normalization.

Both metrics map string pairs to [0, 1], are symmetric, and return 1.0
exactly when the case-folded inputs are equal. The inner loops live in a
compiled kernel when one was built; otherwise the pure-Python fallback
takes over transparently. Set LRCAT_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LRCAT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND

METRIC_DICE = "dice"
METRIC_LEVENSHTEIN = "levenshtein"
METRICS = (METRIC_DICE, METRIC_LEVENSHTEIN)


def _fold(s: str) -> str:
    return s.lower()


def dice_bigram(a: str, b: str) -> float:
    """Dice coefficient over character-bigram multisets, case-folded."""
    return _impl.dice(_fold(a), _fold(b))


def levenshtein_distance(a: str, b: str) -> int:
    """Raw edit distance, case-folded."""
    return _impl.levenshtein(_fold(a), _fold(b))


def levenshtein_sim(a: str, b: str) -> float:
    """1 - editDistance/max(len); 1.0 when both strings are empty."""
    fa, fb = _fold(a), _fold(b)
    longest = max(len(fa), len(fb))
    if longest == 0:
        return 1.0
    return 1.0 - _impl.levenshtein(fa, fb) / longest


def metric_similarity(metric: str, a: str, b: str) -> float:
    if metric == METRIC_DICE:
        return dice_bigram(a, b)
    if metric == METRIC_LEVENSHTEIN:
        return levenshtein_sim(a, b)
    raise ValueError(f"unknown metric {metric!r}")
