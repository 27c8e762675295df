# -*- coding: utf-8 -*-
"""
Nested leave-one-group-out fold plans.
"""

import dataclasses
import itertools
import typing as ty

__all__ = ('Fold', 'FoldPlan', 'fold_plan')


@dataclasses.dataclass(frozen=True)
class Fold:
    """One (validation, test) group pair; every other group trains."""
    val_group: str
    test_group: str
    train_groups: ty.Tuple[str, ...]

    def __post_init__(self):
        if self.val_group == self.test_group:
            raise ValueError(f'Group {self.val_group} cannot be both validation and test.')
        if {self.val_group, self.test_group} & set(self.train_groups):
            raise ValueError(f'Training groups overlap the held-out groups {self.val_group}, {self.test_group}.')


@dataclasses.dataclass(frozen=True)
class FoldPlan:
    groups: ty.Tuple[str, ...]
    folds: ty.Tuple[Fold, ...]

    def __len__(self) -> int:
        return len(self.folds)

    def __iter__(self) -> ty.Iterator[Fold]:
        return iter(self.folds)


def fold_plan(groups: ty.Sequence[str]) -> FoldPlan:
    """Every ordered pair of distinct groups, in ``groups`` order: ``n (n - 1)`` folds."""
    groups = tuple(groups)
    if len(set(groups)) != len(groups):
        raise ValueError(f'Groups {list(groups)} contain duplicates.')
    if len(groups) < 3:
        raise ValueError(f'Leave-one-group-out needs at least 3 groups, got {len(groups)}.')
    folds = tuple(
        Fold(val, test, tuple(group for group in groups if group not in (val, test)))
        for val, test in itertools.permutations(groups, 2)
    )
    return FoldPlan(groups=groups, folds=folds)
