# -*- coding: utf-8 -*-
"""
Counterfactual explanations: sets of temporal edges whose removal moves a
prediction toward a target.

:func:`greedy_counterfactual` runs a tree search over removal sets with
select / simulate / expand / backpropagate phases; :func:`brute_force_counterfactual`
enumerates every subset of a small team and serves as its oracle.
"""

import dataclasses
import itertools
import json
import logging
import math
import pathlib
import typing as ty

import numpy as np

from ..graph_extract import DynamicTeam, EdgeRef
from ..model import TeamModel
from ._factual import EXPECTED_TEAMWORK, Target, target_score

__all__ = (
    'Objective',
    'SearchNode',
    'CounterfactualResult',
    'BRUTE_FORCE_MAX_EDGES',
    'default_objective',
    'greedy_counterfactual',
    'brute_force_counterfactual',
    'counterfactual_to_dot',
)

BRUTE_FORCE_MAX_EDGES = 20

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Objective:
    """
    target :
        The scalar prediction to move; see :data:`Target`.
    direction :
        ``increase`` or ``decrease``.
    threshold :
        The target is met once the score reaches the threshold (``>=`` when
        increasing, ``<=`` when decreasing). ``None`` never stops early, so the
        search looks for the best score instead.
    """
    target: Target = EXPECTED_TEAMWORK
    direction: str = 'increase'
    threshold: ty.Optional[float] = None

    def __post_init__(self):
        if self.direction not in ('increase', 'decrease'):
            raise ValueError(f"Direction must be 'increase' or 'decrease', got '{self.direction}'.")

    def value(self, score: float) -> float:
        """Larger is better."""
        return score if self.direction == 'increase' else -score

    def met(self, score: float) -> bool:
        if self.threshold is None:
            return False
        return score >= self.threshold if self.direction == 'increase' else score <= self.threshold

    def as_dict(self) -> dict:
        target = self.target if isinstance(self.target, str) else list(self.target)
        return {'target': target, 'direction': self.direction, 'threshold': self.threshold}


def default_objective(
    model: TeamModel,
    teams: ty.Sequence[DynamicTeam],
    target: Target = EXPECTED_TEAMWORK,
    direction: str = 'increase',
    percentile: float = 75.0,
) -> Objective:
    """
    Move ``target`` past the given percentile of its team-level values over
    ``teams`` (the mirrored percentile when decreasing).
    """
    task = target if isinstance(target, str) else target[0]
    values = [target_score(model, team, task).item() for team in teams]
    level = percentile if direction == 'increase' else 100.0 - percentile
    return Objective(target, direction, float(np.percentile(values, level)))


@dataclasses.dataclass
class SearchNode:
    """
    A removal set in the search tree. Children extend it by one edge that comes
    after its last edge in the sorted edge order, so every set has one node.
    """
    removed: ty.Tuple[int, ...]
    score: float
    value: float
    visits: int = 1
    children: ty.List['SearchNode'] = dataclasses.field(default_factory=list)
    exhausted: bool = False

    def next_candidate(self, n_edges: int) -> ty.Optional[int]:
        start = self.removed[-1] + 1 if self.removed else 0
        candidate = start + len(self.children)
        return candidate if candidate < n_edges else None


@dataclasses.dataclass(frozen=True)
class CounterfactualResult:  # pylint: disable=too-many-instance-attributes
    """
    ``counterfactual_score`` comes from a fresh forward pass on the team with
    exactly ``removed`` deleted. ``evaluations`` counts search simulations;
    the original and verification passes are not part of it.
    """
    team_id: str
    objective: Objective
    removed: ty.Tuple[EdgeRef, ...]
    original_score: float
    counterfactual_score: float
    evaluations: int
    achieved_target: bool

    def as_dict(self) -> dict:
        return {
            'team_id': self.team_id,
            'objective': self.objective.as_dict(),
            'removed': [dataclasses.asdict(edge) for edge in self.removed],
            'original_score': self.original_score,
            'counterfactual_score': self.counterfactual_score,
            'evaluations': self.evaluations,
            'achieved_target': self.achieved_target,
        }

    def to_json(self, path: ty.Union[str, pathlib.Path]) -> None:
        with open(path, 'w', encoding='utf8') as handle:
            json.dump(self.as_dict(), handle, indent=2)
            handle.write('\n')


def _scorer(model: TeamModel, team: DynamicTeam, objective: Objective, edges: ty.Sequence[EdgeRef]):

    def score(removed: ty.Iterable[int]) -> float:
        return target_score(model, team.without_edges(edges[index] for index in removed), objective.target).item()

    return score


def _result(  # pylint: disable=too-many-arguments
    team: DynamicTeam,
    objective: Objective,
    edges: ty.Sequence[EdgeRef],
    removed: ty.Sequence[int],
    original: float,
    score: float,
    evaluations: int,
) -> CounterfactualResult:
    return CounterfactualResult(
        team_id=team.team_id,
        objective=objective,
        removed=tuple(edges[index] for index in removed),
        original_score=original,
        counterfactual_score=score,
        evaluations=evaluations,
        achieved_target=objective.met(score),
    )


def _better(node: SearchNode, best: SearchNode, objective: Objective) -> bool:
    node_key = (objective.met(node.score), node.value, -len(node.removed))
    best_key = (objective.met(best.score), best.value, -len(best.removed))
    return node_key > best_key


def greedy_counterfactual(
    model: TeamModel,
    team: DynamicTeam,
    objective: Objective,
    budget: int,
    c_explore: float = math.sqrt(2.0),
) -> CounterfactualResult:  # pylint: disable=too-many-locals
    """
    Search edge-removal sets that meet ``objective`` within ``budget`` model
    evaluations.

    Selection descends by ``value + c_explore * sqrt(ln(parent visits) / visits)``
    where a node's value is the best objective value found in its subtree;
    the first node with an unexpanded child is expanded by one edge, the new
    set is simulated with one forward pass, and the result is propagated to
    the ancestors. The search stops when a set meets the threshold, when the
    budget is spent or when every set has been evaluated, and returns the best
    set found.
    """
    edges = sorted(team.edge_refs())
    if not edges:
        raise ValueError(f'Team {team.team_id} has no edges to remove.')
    if budget < 1:
        raise ValueError(f'Budget must be at least 1, got {budget}.')
    score = _scorer(model, team, objective, edges)
    original = score(())
    root = SearchNode(removed=(), score=original, value=objective.value(original))
    best = root
    evaluations = 0
    while evaluations < budget and not objective.met(best.score) and not root.exhausted:
        path = [root]
        node = root
        while node.next_candidate(len(edges)) is None:
            live = [child for child in node.children if not child.exhausted]
            if not live:
                node.exhausted = True
                break
            log_visits = math.log(node.visits)
            node = max(live, key=lambda child: child.value + c_explore * math.sqrt(log_visits / child.visits))
            path.append(node)
        if node.exhausted:
            continue
        candidate = node.next_candidate(len(edges))
        assert candidate is not None
        removed = node.removed + (candidate, )
        child_score = score(removed)
        evaluations += 1
        child = SearchNode(removed=removed, score=child_score, value=objective.value(child_score))
        child.exhausted = child.next_candidate(len(edges)) is None
        node.children.append(child)
        for ancestor in path:
            ancestor.visits += 1
            ancestor.value = max(ancestor.value, child.value)
        if _better(child, best, objective):
            best = child
    logger.info(
        'Counterfactual search on %s: %d evaluations, best set of %d edges, target %s.', team.team_id, evaluations,
        len(best.removed), 'met' if objective.met(best.score) else 'not met'
    )
    return _result(team, objective, edges, best.removed, original, score(best.removed), evaluations)


def brute_force_counterfactual(
    model: TeamModel,
    team: DynamicTeam,
    objective: Objective,
    max_edges: int = BRUTE_FORCE_MAX_EDGES,
) -> CounterfactualResult:
    """
    Evaluate removal sets in order of size, then lexicographic edge order.

    Returns the smallest set meeting the objective, preferring the best
    objective value among sets of that size. When no set meets it, returns the
    set with the best objective value, preferring smaller sets.
    """
    edges = sorted(team.edge_refs())
    if len(edges) > min(max_edges, BRUTE_FORCE_MAX_EDGES):
        raise ValueError(f'Team {team.team_id} has {len(edges)} edges; exhaustive search is capped at {max_edges}.')
    score = _scorer(model, team, objective, edges)
    original = score(())
    evaluations = 0
    best_removed: ty.Tuple[int, ...] = ()
    best_score = original
    for size in range(len(edges) + 1):
        met_here: ty.Optional[ty.Tuple[ty.Tuple[int, ...], float]] = None
        for removed in itertools.combinations(range(len(edges)), size):
            value = original if not removed else score(removed)
            evaluations += 1
            if objective.met(value):
                if met_here is None or objective.value(value) > objective.value(met_here[1]):
                    met_here = (removed, value)
            elif objective.value(value) > objective.value(best_score):
                best_removed, best_score = removed, value
        if met_here is not None:
            best_removed, best_score = met_here
            break
    return _result(team, objective, edges, best_removed, original, score(best_removed), evaluations)


def counterfactual_to_dot(team: DynamicTeam, result: CounterfactualResult) -> str:
    """Topology before and after: kept edges solid, removed edges dashed red."""
    removed = set(result.removed)
    lines = [f'digraph "{team.team_id}" {{']
    for index, snapshot in enumerate(team.snapshots):
        lines.append(f'  subgraph cluster_t{index} {{')
        lines.append(f'    label="t={index}";')
        for member in snapshot.members:
            lines.append(f'    "t{index}_m{member}" [label="{member}"];')
        for src, dst in snapshot.edges:
            style = ' [style=dashed, color=red]' if EdgeRef(index, src, dst) in removed else ''
            lines.append(f'    "t{index}_m{src}" -> "t{index}_m{dst}"{style};')
        lines.append('  }')
    lines.append('}')
    return '\n'.join(lines) + '\n'
