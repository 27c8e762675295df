# -*- coding: utf-8 -*-
"""
The team model: an encoder, one head per task and, for multi-task models, the
task-weight logits, together with the input and target standardisation fitted
on the training teams.
"""

import dataclasses
import json
import logging
import pathlib
import typing as ty

import numpy as np

from .decoders_losses import ALPHA_PARAM, HeadSpec, decode, init_head_params, task_weights
from .encoders import EncoderSpec, SocialEmbedding, encode, init_encoder_params, team_inputs
from .graph_extract import DynamicTeam
from .numerics import ParamStore, ShapeError, Tensor, add, constant, mul, sub

__all__ = ('TeamModel', 'ModelConfig', 'CHECKPOINT_FORMAT')

Seed = ty.Union[int, ty.Sequence[int]]

CHECKPOINT_FORMAT = 'tempo-team-model/1'

logger = logging.getLogger(__name__)


class TeamModel:
    """
    Predicts an ``n x m`` score matrix for a team, one column per task.

    Inputs are standardised with ``(x - input_shift) / input_scale`` before the
    encoder, and head outputs are mapped back to label units with
    ``y * target_scale + target_shift``. These constants are not trained.
    """

    def __init__(  # pylint: disable=too-many-arguments
        self,
        encoder_spec: EncoderSpec,
        head_spec: HeadSpec,
        params: ParamStore,
        input_shift: ty.Optional[np.ndarray] = None,
        input_scale: ty.Optional[np.ndarray] = None,
        target_shift: ty.Optional[np.ndarray] = None,
        target_scale: ty.Optional[np.ndarray] = None,
    ):
        if head_spec.d_in != encoder_spec.hidden:
            raise ShapeError(f'Heads read width {head_spec.d_in}, encoder produces {encoder_spec.hidden}')
        self.encoder_spec = encoder_spec
        self.head_spec = head_spec
        self.params = params
        self.set_normalisation(input_shift, input_scale, target_shift, target_scale)

    @classmethod
    def create(cls, encoder_spec: EncoderSpec, head_spec: HeadSpec, seed: Seed = 0) -> 'TeamModel':
        """A freshly initialised model; weights are reproducible under ``seed``."""
        rng = np.random.default_rng(seed)
        params = ParamStore()
        init_encoder_params(encoder_spec, rng, params)
        init_head_params(head_spec, rng, params)
        return cls(encoder_spec, head_spec, params)

    def set_normalisation(
        self,
        input_shift: ty.Optional[np.ndarray] = None,
        input_scale: ty.Optional[np.ndarray] = None,
        target_shift: ty.Optional[np.ndarray] = None,
        target_scale: ty.Optional[np.ndarray] = None,
    ) -> None:
        """Set the standardisation constants; omitted ones become the identity."""
        d_in, n_tasks = self.encoder_spec.d_in, len(self.head_spec.tasks)
        self.input_shift = _row(input_shift, d_in, 0.0, 'input_shift')
        self.input_scale = _row(input_scale, d_in, 1.0, 'input_scale')
        self.target_shift = _row(target_shift, n_tasks, 0.0, 'target_shift')
        self.target_scale = _row(target_scale, n_tasks, 1.0, 'target_scale')
        if np.any(self.input_scale <= 0) or np.any(self.target_scale <= 0):
            raise ValueError('Standardisation scales must be positive.')

    @property
    def tasks(self) -> ty.Tuple[str, ...]:
        return self.head_spec.tasks

    @property
    def multi_task(self) -> bool:
        return self.head_spec.multi_task

    @property
    def paradigm(self) -> str:
        """``mt-trenn`` for multi-task models, the encoder paradigm otherwise."""
        if self.multi_task and self.encoder_spec.paradigm == 'trenn':
            return 'mt-trenn'
        return self.encoder_spec.paradigm

    @property
    def alpha(self) -> ty.Optional[Tensor]:
        return self.params.get(ALPHA_PARAM)

    def task_weights(self) -> np.ndarray:
        return task_weights(self.params)

    def param_count(self) -> int:
        return self.params.param_count()

    def standardise_inputs(self, team: DynamicTeam, inputs: ty.Optional[ty.Sequence[Tensor]] = None) -> ty.List[Tensor]:
        inputs = list(inputs) if inputs is not None else team_inputs(team)
        shift, inverse = constant(self.input_shift), constant(1.0 / self.input_scale)
        return [mul(sub(tensor, shift), inverse) for tensor in inputs]

    def embed(self, team: DynamicTeam, inputs: ty.Optional[ty.Sequence[Tensor]] = None) -> SocialEmbedding:
        return encode(team, self.encoder_spec, self.params, self.standardise_inputs(team, inputs))

    def forward_standardised(self, team: DynamicTeam, inputs: ty.Optional[ty.Sequence[Tensor]] = None) -> Tensor:
        """Head outputs in standardised target units, as used by the training objective."""
        return decode(self.embed(team, inputs), self.head_spec, self.params)

    def forward(self, team: DynamicTeam, inputs: ty.Optional[ty.Sequence[Tensor]] = None) -> Tensor:
        """Predictions in label units; ``inputs`` replaces the team's raw feature rows."""
        out = self.forward_standardised(team, inputs)
        return add(mul(out, constant(self.target_scale)), constant(self.target_shift))

    def predict(self, team: DynamicTeam) -> np.ndarray:
        return self.forward(team).numpy()

    def standardise_targets(self, labels: np.ndarray) -> np.ndarray:
        return (np.asarray(labels, dtype=np.float64) - self.target_shift) / self.target_scale

    def to_dict(self) -> dict:
        return {
            'format': CHECKPOINT_FORMAT,
            'encoder': self.encoder_spec.to_dict(),
            'heads': self.head_spec.to_dict(),
            'normalisation': {
                'input_shift': self.input_shift.reshape(-1).tolist(),
                'input_scale': self.input_scale.reshape(-1).tolist(),
                'target_shift': self.target_shift.reshape(-1).tolist(),
                'target_scale': self.target_scale.reshape(-1).tolist(),
            },
            'params': self.params.to_dict(),
        }

    @classmethod
    def from_dict(cls, content: ty.Mapping) -> 'TeamModel':
        if content.get('format') != CHECKPOINT_FORMAT:
            raise ValueError(
                f"Unsupported checkpoint format {content.get('format')!r}, expected {CHECKPOINT_FORMAT!r}."
            )
        heads = dict(content['heads'])
        heads['tasks'] = tuple(heads['tasks'])
        normalisation = {key: np.array(value) for key, value in content['normalisation'].items()}
        return cls(
            EncoderSpec(**content['encoder']),
            HeadSpec(**heads),
            ParamStore.from_dict(content['params']),
            **normalisation,
        )

    def save(self, path: ty.Union[str, pathlib.Path]) -> None:
        with open(path, 'w', encoding='utf8') as handle:
            json.dump(self.to_dict(), handle)
        logger.debug('Wrote %s checkpoint to %s.', self.paradigm, path)

    @classmethod
    def load(cls, path: ty.Union[str, pathlib.Path]) -> 'TeamModel':
        with open(path, encoding='utf8') as handle:
            return cls.from_dict(json.load(handle))

    def copy(self) -> 'TeamModel':
        return TeamModel(
            self.encoder_spec,
            self.head_spec,
            ParamStore(self.params.arrays()),
            self.input_shift,
            self.input_scale,
            self.target_shift,
            self.target_scale,
        )

    def __repr__(self) -> str:
        return f'<TeamModel {self.paradigm} tasks={list(self.tasks)} params={self.param_count()}>'


def _row(values: ty.Optional[np.ndarray], width: int, default: float, name: str) -> np.ndarray:
    if values is None:
        return np.full((1, width), default)
    row = np.array(values, dtype=np.float64).reshape(1, -1)
    if row.shape[1] != width:
        raise ShapeError(f'{name} has {row.shape[1]} entries, expected {width}')
    return row


@dataclasses.dataclass(frozen=True)
class ModelConfig:  # pylint: disable=too-many-instance-attributes
    """
    The ``model`` section of a run configuration.

    ``paradigm`` is one of the four encoder paradigms, each trained as one
    single-task model per task, or ``mt-trenn``: a single ``trenn`` model with
    one head per task.
    """
    paradigm: str = 'mt-trenn'
    hidden: int = 16
    gcn_layers: int = 2
    heads: int = 2
    head_dim: ty.Optional[int] = None
    positional_encoding: bool = True
    gcn_bias: bool = True
    head_hidden: int = 16
    activation: str = 'relu'
    init_seed: int = 0

    @classmethod
    def from_mapping(cls, mapping: ty.Mapping[str, ty.Any]) -> 'ModelConfig':
        return cls(**mapping)

    @property
    def multi_task(self) -> bool:
        return self.paradigm == 'mt-trenn'

    def encoder_spec(self, d_in: int) -> EncoderSpec:
        return EncoderSpec(
            paradigm='trenn' if self.multi_task else self.paradigm,
            d_in=d_in,
            hidden=self.hidden,
            gcn_layers=self.gcn_layers,
            heads=self.heads,
            head_dim=self.head_dim,
            use_positional_encoding=self.positional_encoding,
            activation=self.activation,
            gcn_bias=self.gcn_bias,
        )

    def task_groups(self, tasks: ty.Sequence[str]) -> ty.List[ty.Tuple[str, ...]]:
        """The task tuple served by each model of this configuration."""
        if self.multi_task:
            if len(tasks) < 2:
                raise ValueError(f'A multi-task model needs at least two tasks, got {list(tasks)}.')
            return [tuple(tasks)]
        return [(task, ) for task in tasks]

    def build(self, d_in: int, tasks: ty.Sequence[str], seed: Seed = 0) -> ty.List[TeamModel]:
        """Freshly initialised models covering ``tasks``."""
        encoder_spec = self.encoder_spec(d_in)
        models = []
        for index, group in enumerate(self.task_groups(tasks)):
            head_spec = HeadSpec(tasks=group, d_in=self.hidden, hidden=self.head_hidden)
            base = [seed] if isinstance(seed, int) else list(seed)
            models.append(TeamModel.create(encoder_spec, head_spec, seed=[self.init_seed, *base, index]))
        return models
