# -*- coding: utf-8 -*-
"""
The graph convolution and temporal multi-head attention layers.
"""

import dataclasses
import typing as ty

import numpy as np

from ..graph_extract import StaticTeamSnapshot
from ..numerics import (
    ShapeError, Tensor, add, concat_cols, constant, matmul, relu, scale, softmax_rows, transpose
)

__all__ = (
    'normalized_adjacency',
    'gcn_layer',
    'positional_encoding',
    'MhaParams',
    'mha_temporal',
    'activate',
)

Graph = ty.Union[StaticTeamSnapshot, np.ndarray]


def normalized_adjacency(n_nodes: int, edge_pairs: ty.Iterable[ty.Tuple[int, int]]) -> np.ndarray:
    """
    The propagation matrix ``D^-1/2 (A + I) D^-1/2``.

    ``edge_pairs`` holds ``(src_row, dst_row)`` positions; row ``dst`` of the
    adjacency collects the messages it receives, and degrees are row sums.
    """
    if n_nodes < 1:
        raise ShapeError('Cannot build the adjacency of a graph without nodes.')
    adjacency = np.eye(n_nodes)
    for src, dst in edge_pairs:
        adjacency[dst, src] = 1.0
    inv_sqrt = 1.0 / np.sqrt(adjacency.sum(axis=1))
    return adjacency * inv_sqrt[:, None] * inv_sqrt[None, :]


def activate(tensor: Tensor, activation: str) -> Tensor:
    if activation == 'relu':
        return relu(tensor)
    if activation == 'identity':
        return tensor
    raise ValueError(f"Unknown activation '{activation}'.")


def gcn_layer(
    graph: Graph,
    h_prev: Tensor,
    weight: Tensor,
    bias: ty.Optional[Tensor] = None,
    activation: str = 'relu',
) -> Tensor:
    """
    One graph convolution ``phi(A_hat H W + b)``.

    ``graph`` is a snapshot, whose edges define the adjacency, or an already
    normalised ``n x n`` propagation matrix.
    """
    if isinstance(graph, StaticTeamSnapshot):
        propagation = normalized_adjacency(len(graph.members), graph.edge_index_pairs())
    else:
        propagation = np.asarray(graph, dtype=np.float64)
    if propagation.shape[0] == 0:
        raise ShapeError('gcn_layer: graph has no nodes')
    if h_prev.shape[0] != propagation.shape[0]:
        raise ShapeError(f'gcn_layer: shape mismatch {propagation.shape} propagation vs {h_prev.shape} features')
    out = matmul(constant(propagation), matmul(h_prev, weight))
    if bias is not None:
        out = add(out, bias)
    return activate(out, activation)


def positional_encoding(length: int, width: int) -> np.ndarray:
    """Sinusoidal encoding: ``sin`` on even columns, ``cos`` on odd ones."""
    positions = np.arange(length, dtype=np.float64)[:, None]
    pairs = np.arange(0, width, 2, dtype=np.float64)
    angles = positions / np.power(10000.0, pairs / width)
    encoding = np.zeros((length, width))
    encoding[:, 0::2] = np.sin(angles)
    encoding[:, 1::2] = np.cos(angles[:, :width // 2])
    return encoding


@dataclasses.dataclass
class MhaParams:
    """Per-head query/key/value projections and the shared output projection."""
    queries: ty.Sequence[Tensor]
    keys: ty.Sequence[Tensor]
    values: ty.Sequence[Tensor]
    output: Tensor

    def __post_init__(self):
        if not len(self.queries) == len(self.keys) == len(self.values) >= 1:
            raise ValueError('Attention needs the same positive number of query, key and value projections.')

    @property
    def heads(self) -> int:
        return len(self.queries)

    @classmethod
    def from_store(cls, params: ty.Mapping[str, Tensor], heads: int, prefix: str = 'enc.mha') -> 'MhaParams':
        return cls(
            queries=[params[f'{prefix}.head{head}.Wq'] for head in range(heads)],
            keys=[params[f'{prefix}.head{head}.Wk'] for head in range(heads)],
            values=[params[f'{prefix}.head{head}.Wv'] for head in range(heads)],
            output=params[f'{prefix}.Wo'],
        )


def mha_temporal(
    seq: Tensor,
    params: MhaParams,
    use_positional_encoding: bool = True,
    attention_out: ty.Optional[ty.List[np.ndarray]] = None,
) -> Tensor:
    """
    Multi-head self-attention over a ``K x d`` sequence.

    Each head computes ``softmax(Q K^T / sqrt(d_k)) V`` from learned projections
    of the (position-encoded) sequence; the heads are concatenated and projected
    by the output matrix. When ``attention_out`` is given, the ``K x K``
    attention matrix of each head is appended to it.
    """
    if seq.shape[0] < 1:
        raise ShapeError('mha_temporal: empty sequence')
    width = params.output.shape[1]
    if width % params.heads:
        raise ShapeError(f'mha_temporal: width {width} is not divisible by {params.heads} heads')
    if use_positional_encoding:
        seq = add(seq, constant(positional_encoding(seq.shape[0], seq.shape[1])))
    outputs = []
    for query_w, key_w, value_w in zip(params.queries, params.keys, params.values):
        queries, keys, values = matmul(seq, query_w), matmul(seq, key_w), matmul(seq, value_w)
        scores = scale(matmul(queries, transpose(keys)), 1.0 / np.sqrt(key_w.shape[1]))
        weights = softmax_rows(scores)
        if attention_out is not None:
            attention_out.append(weights.numpy())
        outputs.append(matmul(weights, values))
    return matmul(concat_cols(outputs), params.output)
