from typing import Optional

from schemas.treasure import AgentSelector, RunRecord, TradeoffPoint
from tools.infotheory import joint_from_counts, mutual_information
from tools.relinfo import ri_closed_form
from utils.errors import EmptyCountsError


def _selected_totals(r: RunRecord, selector: AgentSelector):
    indices = r.agent_indices(selector)
    if indices.size == 0:
        raise EmptyCountsError(f"agent selector {selector!r} selects no agents")
    actions = int(r.actions[indices].sum())
    if actions == 0:
        raise EmptyCountsError(f"agent selector {selector!r} has no recorded actions")
    return int(r.hits[indices].sum()), actions


def performance_ratio(r: RunRecord, selector: AgentSelector = "population") -> float:
    """Fraction of the selected agents' actions that hit the treasure"""
    hits, actions = _selected_totals(r, selector)
    return hits / actions


def mi_estimate(r: RunRecord, selector: AgentSelector = "population") -> float:
    """Plug-in I(A;T) over the pooled (action, treasure) pairs of the selected agents"""
    counts = r.counts_for(selector)
    if counts.total == 0:
        raise EmptyCountsError(f"agent selector {selector!r} has no recorded actions")
    return mutual_information(joint_from_counts(counts))


def mean_turns_to_find(r: RunRecord, selector: AgentSelector = "population") -> Optional[float]:
    """Actions per find; None when nothing was found"""
    hits, actions = _selected_totals(r, selector)
    if hits == 0:
        return None
    return actions / hits


def tradeoff_point(r: RunRecord, selector: AgentSelector = "population",
                   n: Optional[int] = None) -> TradeoffPoint:
    """Performance and information of the selected agents' behaviour"""
    if n is not None and n != r.n_locations:
        raise ValueError(f"record covers {r.n_locations} locations, not {n}")
    return TradeoffPoint(utility=performance_ratio(r, selector), information=mi_estimate(r, selector))


def excess_information(point: TradeoffPoint, n: int) -> float:
    """Bits processed beyond the relevant information for the achieved performance"""
    return point.information - ri_closed_form(min(max(point.utility, 0.0), 1.0), n)
