"""
Discrete information measures over finite distributions.

All values are in bits. Entries equal to zero contribute nothing
(0 * log 0 = 0), and zero-probability columns are skipped when
conditioning.
"""

import numpy as np
from scipy.special import entr, xlogy

from schemas.treasure import JointCounts
from utils.errors import EmptyCountsError, InvalidDistributionError

SUM_TOLERANCE = 1e-9
LN2 = np.log(2.0)


def validate_distribution(probs) -> np.ndarray:
    """Return `probs` as a float vector, raising if it is not a distribution"""
    d = np.asarray(probs, dtype=np.float64)
    if d.ndim != 1 or d.size < 1:
        raise InvalidDistributionError(f"distribution must be a non-empty vector, got shape {d.shape}")
    if not np.isfinite(d).all() or (d < 0).any():
        raise InvalidDistributionError("distribution entries must be finite and non-negative")
    total = d.sum()
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise InvalidDistributionError(f"distribution sums to {total!r}, expected 1")
    return d


def validate_joint(probs) -> np.ndarray:
    j = np.asarray(probs, dtype=np.float64)
    if j.ndim != 2 or j.size < 1:
        raise InvalidDistributionError(f"joint distribution must be a non-empty matrix, got shape {j.shape}")
    if not np.isfinite(j).all() or (j < 0).any():
        raise InvalidDistributionError("joint entries must be finite and non-negative")
    total = j.sum()
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise InvalidDistributionError(f"joint distribution sums to {total!r}, expected 1")
    return j


def entropy(d) -> float:
    """H(X) = -sum p log2 p"""
    p = validate_distribution(d)
    return float(entr(p).sum() / LN2)


def conditional_entropy(j) -> float:
    """H(row | column) of a joint distribution"""
    joint = validate_joint(j)
    column_marginal = joint.sum(axis=0)
    present = column_marginal > 0
    # -sum p(x,y) log2 p(x|y), columns without mass contribute 0
    conditional = np.zeros_like(joint)
    conditional[:, present] = joint[:, present] / column_marginal[present]
    return float(-xlogy(joint[:, present], conditional[:, present]).sum() / LN2)


def mutual_information(j) -> float:
    """I(row; column) = H(row) - H(row | column), clamped at 0 within tolerance"""
    joint = validate_joint(j)
    row_marginal = joint.sum(axis=1)
    value = float(entr(row_marginal).sum() / LN2) - conditional_entropy(joint)
    if value < 0.0:
        if value < -SUM_TOLERANCE:
            raise InvalidDistributionError(f"mutual information evaluated to {value!r}")
        value = 0.0
    return value


def joint_from_counts(c: JointCounts) -> np.ndarray:
    """Plug-in estimate of the joint distribution from co-occurrence counts"""
    counts = c.counts if isinstance(c, JointCounts) else np.asarray(c)
    total = counts.sum()
    if total <= 0:
        raise EmptyCountsError("cannot estimate a joint distribution from an empty count table")
    return counts.astype(np.float64) / float(total)


def location_observation_information(n: int) -> float:
    """
    Information one empty/treasure inspection of a single location carries
    about a uniformly placed treasure among `n` locations.
    """
    if n < 2:
        raise ValueError(f"location count must be at least 2, got {n}")
    return float(np.log2(n) - (1.0 - 1.0 / n) * np.log2(n - 1))
