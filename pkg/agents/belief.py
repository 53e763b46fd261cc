"""
An agent's internal model of the treasure location and its update rules.

A belief is a float vector over locations. It is either a distribution
(non-negative, summing to one) or the degenerate all-zero vector a
certainty-model agent reaches after ruling out every location.
"""

import numpy as np

from utils.errors import InvalidDistributionError

TIE_TOLERANCE = 1e-12
LIKELIHOOD_TOLERANCE = 1e-6


def new_uniform(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError(f"location count must be at least 2, got {n}")
    return np.full(n, 1.0 / n)


def is_degenerate(b: np.ndarray) -> bool:
    return not np.any(b)


def validate_likelihood(L) -> np.ndarray:
    """P(A=a | T=t) indexed [a, t]; columns must sum to 1 and entries be positive"""
    likelihood = np.asarray(L, dtype=np.float64)
    if likelihood.ndim != 2 or likelihood.shape[0] != likelihood.shape[1]:
        raise InvalidDistributionError(f"likelihood matrix must be square, got shape {likelihood.shape}")
    if not np.isfinite(likelihood).all() or (likelihood <= 0).any():
        raise InvalidDistributionError("likelihood entries must be finite and strictly positive")
    if np.abs(likelihood.sum(axis=0) - 1.0).max() > LIKELIHOOD_TOLERANCE:
        raise InvalidDistributionError("every likelihood column must sum to 1")
    return likelihood


def select_action(b: np.ndarray, rng: np.random.Generator) -> int:
    """Visit the most likely location, breaking ties uniformly; random search when degenerate"""
    peak = b.max()
    if peak <= 0.0:
        return int(rng.integers(b.size))
    candidates = np.flatnonzero(b >= peak - TIE_TOLERANCE)
    if candidates.size == 1:
        return int(candidates[0])
    return int(candidates[rng.integers(candidates.size)])


def observe_location_result(b: np.ndarray, loc: int, contains_treasure: bool) -> np.ndarray:
    """Reset on a find, otherwise rule the location out and rescale the rest"""
    if contains_treasure:
        return new_uniform(b.size)
    updated = b.copy()
    updated[loc] = 0.0
    remaining = updated.sum()
    if remaining <= 0.0:
        return np.zeros_like(updated)
    return updated / remaining


def social_update(b: np.ndarray, observed_action: int, L: np.ndarray) -> np.ndarray:
    """Naive Bayesian update on another agent's observed action"""
    if is_degenerate(b):
        return b.copy()
    posterior = b * L[observed_action]
    return posterior / posterior.sum()


def apply_social_updates(beliefs: np.ndarray, observers: np.ndarray, observed_action: int,
                         L: np.ndarray) -> None:
    """In-place `social_update` of the rows of `beliefs` listed in `observers`"""
    if observers.size == 0:
        return
    rows = beliefs[observers] * L[observed_action][np.newaxis, :]
    totals = rows.sum(axis=1)
    normal = totals > 0.0
    rows[normal] /= totals[normal, np.newaxis]
    beliefs[observers] = rows


def apply_uncertainty(b: np.ndarray, p_change: float, n: int) -> np.ndarray:
    """Mix the belief with the uniform distribution by the relocation probability"""
    if not 0.0 <= p_change <= 1.0:
        raise ValueError(f"change probability must lie in [0, 1], got {p_change}")
    if is_degenerate(b):
        raise InvalidDistributionError("cannot apply the uncertainty model to a degenerate belief")
    return p_change / n + (1.0 - p_change) * b
