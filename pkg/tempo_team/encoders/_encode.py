# -*- coding: utf-8 -*-
"""
The four encoder paradigms, producing one social embedding per member.
"""

import typing as ty

import numpy as np

from ..graph_extract import DynamicTeam
from ..numerics import ShapeError, Tensor, add, concat_rows, constant, matmul, mean_rows, stack_mean, take_rows
from ._layers import MhaParams, activate, gcn_layer, mha_temporal, normalized_adjacency
from ._spec import EncoderSpec

__all__ = ('SocialEmbedding', 'encode', 'team_inputs')

# ``n x hidden`` tensor, one row per roster member.
SocialEmbedding = Tensor


def team_inputs(team: DynamicTeam) -> ty.List[Tensor]:
    """The team's feature rows as one constant ``n x d`` tensor per snapshot."""
    return [constant(snapshot.feature_matrix) for snapshot in team.snapshots]


def encode(
    team: DynamicTeam,
    spec: EncoderSpec,
    params: ty.Mapping[str, Tensor],
    inputs: ty.Optional[ty.Sequence[Tensor]] = None,
    attention_out: ty.Optional[ty.List[np.ndarray]] = None,
) -> SocialEmbedding:
    """
    Embed every member of ``team``.

    ``inputs`` replaces the team's feature rows (one ``n x d_in`` tensor per
    snapshot); the model passes standardised inputs here, and the explainers
    pass tensors that require gradients. The team still provides the topology.
    """
    inputs = list(inputs) if inputs is not None else team_inputs(team)
    if len(inputs) != team.n_snapshots:
        raise ShapeError(f'encode: {len(inputs)} input tensors for {team.n_snapshots} snapshots')
    expected = (team.n_members, spec.d_in)
    for tensor in inputs:
        if tensor.shape != expected:
            raise ShapeError(f'encode: input of shape {tensor.shape} for team {team.team_id}, expected {expected}')
    try:
        if spec.paradigm == 'snn':
            return _encode_snn(spec, params, inputs)
        if spec.paradigm == 'tnn':
            return _temporal(spec, params, inputs, attention_out)
        if spec.paradigm == 'renn':
            propagation = normalized_adjacency(team.n_members, _union_pairs(team))
            return _gcn_stack(spec, params, propagation, stack_mean(inputs))
        hidden = [
            _gcn_stack(spec, params, normalized_adjacency(team.n_members, snapshot.edge_index_pairs()), tensor)
            for snapshot, tensor in zip(team.snapshots, inputs)
        ]
        return _temporal(spec, params, hidden, attention_out)
    except KeyError as exc:
        raise ValueError(f'Parameters do not match encoder paradigm {spec.paradigm}: missing {exc}') from exc


def _union_pairs(team: DynamicTeam) -> ty.List[ty.Tuple[int, int]]:
    index_of = team.snapshots[0].index_of
    return [(index_of[src], index_of[dst]) for src, dst in team.union_edges()]


def _encode_snn(spec: EncoderSpec, params, inputs: ty.Sequence[Tensor]) -> Tensor:
    hidden = stack_mean(inputs)
    for layer in range(spec.gcn_layers):
        hidden = activate(add(matmul(hidden, params[f'enc.dense{layer}.W']), params[f'enc.dense{layer}.b']),
                          spec.activation)
    return hidden


def _gcn_stack(spec: EncoderSpec, params, propagation: np.ndarray, features: Tensor) -> Tensor:
    hidden = features
    for layer in range(spec.gcn_layers):
        bias = params[f'enc.gcn{layer}.b'] if spec.gcn_bias else None
        hidden = gcn_layer(propagation, hidden, params[f'enc.gcn{layer}.W'], bias, spec.activation)
    return hidden


def _temporal(
    spec: EncoderSpec,
    params,
    sequence: ty.Sequence[Tensor],
    attention_out: ty.Optional[ty.List[np.ndarray]],
) -> Tensor:
    """Attend over each member's own rows across snapshots, then mean-pool over time."""
    mha = MhaParams.from_store(params, spec.heads)
    stacked = concat_rows(sequence)
    n_members = sequence[0].shape[0]
    rows = []
    for member in range(n_members):
        member_seq = take_rows(stacked, [t * n_members + member for t in range(len(sequence))])
        attended = mha_temporal(member_seq, mha, spec.use_positional_encoding, attention_out)
        rows.append(mean_rows(attended))
    return concat_rows(rows)
