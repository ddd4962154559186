"""Ordered factors and their baseline design-matrix encodings.

An ordered factor is a categorical variable whose levels carry a fixed,
user-supplied order.  This module turns such a factor into numeric design
columns: plain integer scores 1..K, orthonormal polynomial contrasts, or a
per-observation expansion of an arbitrary score vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidDegree

__all__ = [
    "OrderedFactor",
    "integer_scores",
    "polynomial_contrasts",
    "contrast_names",
    "expand_scores",
]


@dataclass(frozen=True)
class OrderedFactor:
    """A named categorical variable with K ordered levels.

    ``levels`` fixes the order once and for all; it is never re-sorted.
    ``codes`` holds one index in 1..K per observation.
    """

    name: str
    levels: tuple[str, ...]
    codes: np.ndarray

    def __post_init__(self):
        levels = tuple(str(v) for v in self.levels)
        if len(levels) < 2:
            raise ValueError(f"factor {self.name!r}: needs at least 2 levels")
        if len(set(levels)) != len(levels):
            raise ValueError(f"factor {self.name!r}: level labels must be distinct")
        codes = np.asarray(self.codes, dtype=np.int64)
        if codes.ndim != 1:
            raise ValueError(f"factor {self.name!r}: codes must be a 1-d array")
        if codes.size and (codes.min() < 1 or codes.max() > len(levels)):
            raise ValueError(
                f"factor {self.name!r}: codes must lie in 1..{len(levels)}"
            )
        codes = codes.copy()
        codes.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "codes", codes)

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @classmethod
    def from_labels(
        cls, name: str, values: Sequence[str], levels: Sequence[str]
    ) -> "OrderedFactor":
        """Build a factor from raw string observations and an ordered level list."""
        index = {str(lab): k + 1 for k, lab in enumerate(levels)}
        codes = np.empty(len(values), dtype=np.int64)
        for i, v in enumerate(values):
            try:
                codes[i] = index[str(v)]
            except KeyError:
                raise ValueError(
                    f"factor {name!r}: value {v!r} not in the level list"
                ) from None
        return cls(name=name, levels=tuple(str(v) for v in levels), codes=codes)


def integer_scores(factor: OrderedFactor) -> np.ndarray:
    """Basic scores 1, 2, ..., K."""
    return np.arange(1, factor.n_levels + 1, dtype=float)


def polynomial_contrasts(n_levels: int, degree: int) -> np.ndarray:
    """Orthonormal polynomial contrast matrix of shape (K, degree).

    Column d is a degree-d polynomial in the level index over the equally
    spaced points 1..K, with zero sum and unit Euclidean norm, and all
    columns mutually orthogonal.  Signs follow the convention that each
    column is positive at the highest level.
    """
    k = int(n_levels)
    if not 1 <= degree <= k - 1:
        raise InvalidDegree(
            f"contrast degree must be in 1..{k - 1} for {k} levels, got {degree}"
        )
    x = np.arange(1, k + 1, dtype=float)
    # Centering keeps the Vandermonde matrix well conditioned.
    vand = np.vander(x - x.mean(), degree + 1, increasing=True)
    q, _ = np.linalg.qr(vand)
    contrasts = q[:, 1:]
    return contrasts * np.where(contrasts[-1, :] > 0, 1.0, -1.0)


_CONTRAST_SUFFIXES = {1: "L", 2: "Q", 3: "C"}


def contrast_names(name: str, degree: int) -> list[str]:
    """R-style column labels: name.L, name.Q, name.C, name^4, ..."""
    out = []
    for d in range(1, degree + 1):
        if d in _CONTRAST_SUFFIXES:
            out.append(f"{name}.{_CONTRAST_SUFFIXES[d]}")
        else:
            out.append(f"{name}^{d}")
    return out


def expand_scores(factor: OrderedFactor, scores: np.ndarray) -> np.ndarray:
    """Per-observation column X with X[i] = scores[codes[i]]."""
    scores = np.asarray(scores, dtype=float)
    if scores.shape != (factor.n_levels,):
        raise ValueError(
            f"factor {factor.name!r}: expected {factor.n_levels} scores, "
            f"got shape {scores.shape}"
        )
    return scores[factor.codes - 1]
