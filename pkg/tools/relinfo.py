"""
Relevant information: the least mutual information I(A;R) a strategy
p(a|r) needs to reach an expected utility of at least u.

Strategies are matrices indexed by (action, world state); every column is
a distribution over actions. Utility matrices use the same layout.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import logsumexp, xlogy

from schemas.treasure import TradeoffPoint
from tools.infotheory import SUM_TOLERANCE, mutual_information, validate_distribution
from utils.errors import ConvergenceError, InfeasibleUtilityError, InvalidDistributionError

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 10_000
BETA_START = 0.5
BETA_CAP = 2.0 ** 16
MAX_BISECTIONS = 200


def utility_treasure_matrix(n: int) -> np.ndarray:
    """Pay-off 1 when the visited location holds the treasure, else 0"""
    if n < 2:
        raise ValueError(f"location count must be at least 2, got {n}")
    return np.eye(n, dtype=np.float64)


def _validate_utility(U, prior: np.ndarray) -> np.ndarray:
    utility = np.asarray(U, dtype=np.float64)
    if utility.ndim != 2:
        raise InvalidDistributionError(f"utility matrix must be two-dimensional, got shape {utility.shape}")
    if not np.isfinite(utility).all():
        raise InvalidDistributionError("utility matrix entries must be finite")
    if utility.shape[1] != prior.size:
        raise InvalidDistributionError(
            f"utility matrix has {utility.shape[1]} world states but the prior has {prior.size}"
        )
    return utility


def _validate_strategy(s, n_actions: Optional[int], n_states: int) -> np.ndarray:
    strategy = np.asarray(s, dtype=np.float64)
    if strategy.ndim != 2 or strategy.shape[1] != n_states:
        raise InvalidDistributionError(
            f"strategy of shape {strategy.shape} does not match {n_states} world states"
        )
    if n_actions is not None and strategy.shape[0] != n_actions:
        raise InvalidDistributionError(
            f"strategy has {strategy.shape[0]} actions, utility matrix has {n_actions}"
        )
    if (strategy < 0).any() or not np.isfinite(strategy).all():
        raise InvalidDistributionError("strategy entries must be finite and non-negative")
    if np.abs(strategy.sum(axis=0) - 1.0).max() > SUM_TOLERANCE:
        raise InvalidDistributionError("every strategy column must sum to 1")
    return strategy


def strategy_performance(s, U, prior) -> float:
    """Expected utility sum_a sum_r U(a,r) p(a|r) p(r)"""
    p = validate_distribution(prior)
    utility = _validate_utility(U, p)
    strategy = _validate_strategy(s, utility.shape[0], p.size)
    return float((utility * strategy * p[np.newaxis, :]).sum())


def strategy_information(s, prior) -> float:
    """I(A;R) of the joint p(a,r) = p(a|r) p(r)"""
    p = validate_distribution(prior)
    strategy = _validate_strategy(s, None, p.size)
    return mutual_information(strategy * p[np.newaxis, :])


def symmetric_strategy(hit: float, n: int) -> np.ndarray:
    """Strategy that visits the treasure with probability `hit` and spreads the rest evenly"""
    if n < 2:
        raise ValueError(f"location count must be at least 2, got {n}")
    if not 0.0 <= hit <= 1.0:
        raise ValueError(f"hit probability must lie in [0, 1], got {hit}")
    strategy = np.full((n, n), (1.0 - hit) / (n - 1))
    np.fill_diagonal(strategy, hit)
    return strategy


def ri_closed_form(u: float, n: int) -> float:
    """
    Relevant information of the treasure task with `n` locations.

    Levels at or below chance (1/n) need no information; above chance the
    cheapest strategy hits with probability u and spreads the misses evenly.
    """
    if n < 2:
        raise ValueError(f"location count must be at least 2, got {n}")
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"performance level must lie in [0, 1], got {u}")
    if u <= 1.0 / n:
        return 0.0
    bits = np.log2(n) + (xlogy(u, u) + xlogy(1.0 - u, (1.0 - u) / (n - 1))) / np.log(2.0)
    return float(max(bits, 0.0))


def ri_curve(levels: Sequence[float], n: int) -> List[float]:
    return [ri_closed_form(float(u), n) for u in levels]


def _converge_strategy(utility: np.ndarray, prior: np.ndarray, beta: float, tol: float,
                       max_iter: int = MAX_ITERATIONS) -> np.ndarray:
    """Alternate p(a|r) ~ q(a) exp(beta U(a,r)) and q(a) = sum_r p(r) p(a|r)"""
    n_actions = utility.shape[0]
    # uniform start, a zero in q(a) would be absorbing
    log_q = np.full(n_actions, -np.log(n_actions))
    previous = None
    strategy = np.full(utility.shape, 1.0 / n_actions)
    for iteration in range(1, max_iter + 1):
        logits = log_q[:, np.newaxis] + beta * utility
        strategy = np.exp(logits - logsumexp(logits, axis=0, keepdims=True))
        if previous is not None and np.abs(strategy - previous).max() < tol:
            return strategy
        previous = strategy
        marginal = strategy @ prior
        with np.errstate(divide="ignore"):
            log_q = np.log(marginal)
    raise ConvergenceError(
        f"strategy iteration did not converge within {max_iter} iterations at beta={beta:.6g}",
        last_strategy=strategy,
        iterations=max_iter,
    )


def ri_minimize(U, prior, u: float, tol: float = 1e-6, max_iter: int = MAX_ITERATIONS) -> TradeoffPoint:
    """
    Find the least-information strategy whose expected utility reaches `u`.

    Traces the trade-off family over an inverse temperature beta: a
    geometric grid brackets the target and bisection narrows the bracket to
    the smallest beta whose converged strategy meets the utility floor.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    p = validate_distribution(prior)
    utility = _validate_utility(U, p)

    achievable = float(p @ utility.max(axis=0))
    if u > achievable + SUM_TOLERANCE:
        raise InfeasibleUtilityError(u, achievable)

    # the best constant action is feasible at zero information
    constant_payoff = utility @ p
    best_action = int(np.argmax(constant_payoff))
    if u <= constant_payoff[best_action] + SUM_TOLERANCE:
        strategy = np.zeros_like(utility)
        strategy[best_action, :] = 1.0
        return TradeoffPoint(
            utility=float(constant_payoff[best_action]), information=0.0, strategy=strategy, beta=0.0
        )

    def performance(strategy: np.ndarray) -> float:
        return float((utility * strategy * p[np.newaxis, :]).sum())

    beta_low, beta_high = 0.0, BETA_START
    best = None
    while True:
        candidate = _converge_strategy(utility, p, beta_high, tol, max_iter)
        logger.debug(f"beta={beta_high:.6g} performance={performance(candidate):.9f}")
        if performance(candidate) >= u:
            best = candidate
            break
        if beta_high >= BETA_CAP:
            if performance(candidate) >= u - tol:
                logger.warning(f"Accepting performance {performance(candidate):.9f} for level {u} "
                               f"within tolerance {tol:g} at the beta cap")
                best = candidate
                break
            raise ConvergenceError(
                f"performance {performance(candidate):.9f} still below {u} at the beta cap",
                last_strategy=candidate,
                iterations=max_iter,
            )
        beta_low, beta_high = beta_high, beta_high * 2.0

    for _ in range(MAX_BISECTIONS):
        if performance(best) - u <= tol * 1e-3 or beta_high - beta_low <= 1e-12 * max(1.0, beta_high):
            break
        beta_mid = 0.5 * (beta_low + beta_high)
        candidate = _converge_strategy(utility, p, beta_mid, tol, max_iter)
        if performance(candidate) >= u:
            beta_high, best = beta_mid, candidate
        else:
            beta_low = beta_mid

    information = strategy_information(best, p)
    return TradeoffPoint(utility=performance(best), information=information, strategy=best, beta=beta_high)


def tradeoff_curve(U, prior, levels: Sequence[float], tol: float = 1e-6) -> List[TradeoffPoint]:
    """Solve `ri_minimize` for each level in order"""
    return [ri_minimize(U, prior, float(u), tol) for u in levels]
