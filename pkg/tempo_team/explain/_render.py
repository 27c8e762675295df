# -*- coding: utf-8 -*-
"""
Binned attribution reports and their JSON and DOT forms.
"""

import dataclasses
import json
import pathlib
import typing as ty

import numpy as np

from ..graph_extract import DynamicTeam
from ._factual import AttributionMap

__all__ = ('BinnedCell', 'BinnedAttribution', 'render_attribution', 'dot_colour')

REDUCTIONS = ('timestep', 'member')


@dataclasses.dataclass(frozen=True)
class BinnedCell:
    member: int
    t: ty.Optional[int]
    score: float
    level: int


@dataclasses.dataclass(frozen=True)
class BinnedAttribution:
    """
    Attribution scores quantised into ``bins`` equal-width levels ``0..bins-1``
    spanning the map's own minimum and maximum.
    """
    team_id: str
    bins: int
    reduction: str
    cells: ty.Tuple[BinnedCell, ...]

    def as_dict(self) -> dict:
        return {
            'team_id': self.team_id,
            'bins': self.bins,
            'reduction': self.reduction,
            'cells': [dataclasses.asdict(cell) for cell in self.cells],
        }

    def to_json(self, path: ty.Union[str, pathlib.Path]) -> None:
        with open(path, 'w', encoding='utf8') as handle:
            json.dump(self.as_dict(), handle, indent=2)
            handle.write('\n')

    def to_dot(self, team: DynamicTeam) -> str:
        """One cluster per snapshot; nodes are filled by level, edges are the snapshot's."""
        if self.reduction != 'timestep':
            raise ValueError('DOT export needs per-timestep cells.')
        level_of = {(cell.member, cell.t): cell.level for cell in self.cells}
        lines = [f'digraph "{team.team_id}" {{', '  node [style=filled];']
        for index, snapshot in enumerate(team.snapshots):
            lines.append(f'  subgraph cluster_t{index} {{')
            lines.append(f'    label="t={index}";')
            for member in snapshot.members:
                level = level_of[(member, index)]
                lines.append(
                    f'    "t{index}_m{member}" [label="{member}", fillcolor="{dot_colour(level, self.bins)}", '
                    f'tooltip="level {level}"];'
                )
            for src, dst in snapshot.edges:
                lines.append(f'    "t{index}_m{src}" -> "t{index}_m{dst}";')
            lines.append('  }')
        lines.append('}')
        return '\n'.join(lines) + '\n'


def dot_colour(level: int, bins: int) -> str:
    """White for the lowest level through to red for the highest."""
    fraction = level / (bins - 1) if bins > 1 else 1.0
    fade = int(round(255 * (1.0 - fraction)))
    return f'#ff{fade:02x}{fade:02x}'


def render_attribution(amap: AttributionMap, bins: int = 5, reduction: str = 'timestep') -> BinnedAttribution:
    """
    Quantise the per-member-per-timestep (or per-member) scores of ``amap``.

    The maximum always lands in the top level; a map whose scores are all equal
    puts every cell there.
    """
    if bins < 1:
        raise ValueError(f'Need at least one bin, got {bins}.')
    if reduction not in REDUCTIONS:
        raise ValueError(f"Unknown reduction '{reduction}', expected one of {REDUCTIONS}.")
    if reduction == 'timestep':
        scores = amap.per_member_timestep
        keys = [(member, t) for member in amap.members for t in range(scores.shape[1])]
    else:
        scores = amap.per_member[:, None]
        keys = [(member, None) for member in amap.members]
    flat = scores.reshape(-1)
    low, high = float(flat.min()), float(flat.max())
    if high > low:
        levels = np.minimum(np.floor((flat - low) / (high - low) * bins).astype(int), bins - 1)
    else:
        levels = np.full(flat.shape, bins - 1)
    cells = tuple(
        BinnedCell(member=member, t=t, score=float(score), level=int(level))
        for (member, t), score, level in zip(keys, flat, levels)
    )
    return BinnedAttribution(team_id=amap.team_id, bins=bins, reduction=reduction, cells=cells)
