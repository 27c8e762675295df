#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Implements the ``tempo-team`` executable: dataset synthesis and validation,
training, leave-one-group-out evaluation and explanations.

Exit codes: 0 on success, 1 on an internal error, 2 on invalid input.
"""

import logging
import os
import pathlib
import shutil
import sys
import typing as ty

import click

from .._config import PARADIGMS, ConfigError, RunConfig
from .._env_keys import EnvKeys
from ..decoders_losses import LossConfig
from ..evaluation import TrainConfig, TrainResult, efficiency_audit, fit_normalisation, logo_run, train_model
from ..explain import (
    EXPECTED_TEAMWORK, Objective, brute_force_counterfactual, counterfactual_to_dot, default_objective,
    expected_teamwork, greedy_counterfactual, render_attribution, saliency, teamwork_level
)
from ..graph_extract import (
    TW_TASKS, DatasetValidationError, SignalConfig, TeamDataset, load_dataset, save_dataset, synth_dataset
)
from ..model import ModelConfig, TeamModel

__all__ = ('cli', 'run', 'BadInput')

logger = logging.getLogger(__name__)


class BadInput(click.ClickException):
    """Invalid configuration, dataset or checkpoint."""
    exit_code = 2


class _State:

    def __init__(self, config: RunConfig):
        self.config = config

    def echo_config(self, out_dir: pathlib.Path) -> None:
        """Write the resolved configuration, and a verbatim copy of its source document."""
        out_dir.mkdir(parents=True, exist_ok=True)
        self.config.to_file(out_dir / 'config.json')
        if self.config.file_path is not None:
            source = pathlib.Path(self.config.file_path)
            shutil.copyfile(source, out_dir / f'config.source{source.suffix}')


def _override(config: RunConfig, section: ty.Optional[str] = None, **fields) -> None:
    try:
        config.override(section, **fields)
    except ConfigError as exc:
        raise BadInput(str(exc)) from exc


def _load(path: ty.Union[str, pathlib.Path]) -> TeamDataset:
    try:
        return load_dataset(path)
    except DatasetValidationError as exc:
        raise BadInput(f'{path}: {exc}') from exc


def _dataset(config: RunConfig) -> TeamDataset:
    """The configured dataset file, or a synthetic dataset from the ``synth`` section."""
    if config['dataset']:
        return _load(config['dataset'])
    synth = config['synth']
    return synth_dataset(
        seed=synth['seed'],
        n_teams=synth['teams'],
        roster_size=synth['roster'],
        K=synth['snapshots'],
        d=synth['features'],
        signal_cfg=SignalConfig(synth['relational_strength'], synth['temporal_strength'], synth['noise']),
    )


def _tasks(option: ty.Optional[str]) -> ty.Optional[ty.List[str]]:
    return [task.strip() for task in option.split(',') if task.strip()] if option else None


def _configure_logging(verbose: int) -> None:
    level = os.environ.get(EnvKeys.LOG_LEVEL.value)
    if verbose:
        level = 'DEBUG' if verbose > 1 else 'INFO'
    logging.basicConfig(level=(level or 'WARNING').upper(), format='%(levelname)s %(name)s: %(message)s')


@click.group()
@click.option(
    '--config',
    'config_path',
    type=click.Path(exists=True, dir_okay=False),
    envvar=EnvKeys.CONFIG.value,
    help='Run configuration (JSON). Defaults to .tempo-team.json in the working directory or a parent.'
)
@click.option('-v', '--verbose', count=True, help='Log progress (-v) or debugging output (-vv).')
@click.pass_context
def cli(ctx, config_path, verbose):
    """Tempo-relational team modeling."""
    _configure_logging(verbose)
    try:
        config = RunConfig.from_file(config_path) if config_path else RunConfig.search()
    except ConfigError as exc:
        raise BadInput(str(exc)) from exc
    ctx.obj = _State(config)


@cli.command()
@click.option('--seed', type=int, help='Generator seed.')
@click.option('--teams', type=int, help='Number of teams.')
@click.option('--roster', type=int, help='Members per team (3 or 4).')
@click.option('--snapshots', type=int, help='Snapshots per team.')
@click.option('--features', type=int, help='Features per member and snapshot.')
@click.option('--relational-strength', type=float, help='Weight of the relational signal in the labels, in [0, 1].')
@click.option('--temporal-strength', type=float, help='Weight of the temporal signal in the labels, in [0, 1].')
@click.option('--noise', type=float, help='Label and feature noise.')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True, help='Dataset file to write.')
@click.pass_obj
def synth(state, out_path, **fields):  # pylint: disable=redefined-outer-name
    """Write a synthetic dataset with planted relational and temporal signals."""
    _override(state.config, 'synth', **fields)
    config = state.config['synth']
    try:
        dataset = synth_dataset(
            seed=config['seed'],
            n_teams=config['teams'],
            roster_size=config['roster'],
            K=config['snapshots'],
            d=config['features'],
            signal_cfg=SignalConfig(config['relational_strength'], config['temporal_strength'], config['noise']),
        )
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    save_dataset(dataset, out_path)
    click.echo(f'Wrote {len(dataset.teams)} teams to {out_path}.')


@cli.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
def validate(path):
    """Check a dataset file against the interchange format."""
    dataset = _load(path)
    click.echo(
        f'{path}: OK ({len(dataset.teams)} teams, {len(dataset.groups)} groups, '
        f'{dataset.feature_dim} features, tasks {", ".join(dataset.tasks)})'
    )


def _fit(
    models: ty.Sequence[TeamModel],
    data: TeamDataset,
    val_group: str,
    train_cfg: TrainConfig,
    loss_cfg: LossConfig,
    seed: int,
) -> ty.List[TrainResult]:  # pylint: disable=too-many-arguments
    """Train every model on all groups but ``val_group``, which drives early stopping."""
    train_teams = data.teams_in([group for group in data.groups if group != val_group])
    val_teams = data.teams_in([val_group])
    results = []
    for model in models:
        fit_normalisation(model, train_teams, train_cfg.standardize_targets)
        results.append(train_model(model, train_teams, val_teams, train_cfg, loss_cfg, seed=seed))
    return results


def _model_options(function):
    options = [
        click.option('--dataset', type=click.Path(exists=True, dir_okay=False), help='Dataset file.'),
        click.option('--tasks', help='Comma-separated tasks to model (default: every labeled task).'),
        click.option('--out', 'out_dir', type=click.Path(file_okay=False), help='Output directory.'),
    ]
    for option in reversed(options):
        function = option(function)
    return function


@cli.command()
@_model_options
@click.option('--paradigm', type=click.Choice(PARADIGMS), help='Model paradigm.')
@click.option('--seed', type=int, default=0, show_default=True, help='Training seed.')
@click.option('--val-group', help='Group used for early stopping (default: the last group).')
@click.pass_obj
def train(  # pylint: disable=too-many-arguments,too-many-locals
    state, dataset, tasks, out_dir, paradigm, seed, val_group
):
    """Train checkpoints on every group but the validation group."""
    _override(state.config, dataset=dataset, out=out_dir)
    _override(state.config, 'model', paradigm=paradigm)
    _override(state.config, 'train', tasks=_tasks(tasks))
    config = state.config
    data = _dataset(config)
    groups = data.groups
    if len(groups) < 2:
        raise BadInput('Training needs at least two groups: one to train on and one for early stopping.')
    val_group = val_group or groups[-1]
    if val_group not in groups:
        raise BadInput(f"Unknown validation group '{val_group}', groups are {list(groups)}.")
    train_cfg = TrainConfig.from_mapping(config['train'])
    model_cfg = ModelConfig.from_mapping(config['model'])
    task_list = train_cfg.tasks or data.tasks
    try:
        models = model_cfg.build(data.feature_dim, task_list, seed=seed)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    out = pathlib.Path(config['out'])
    state.echo_config(out)
    results = _fit(models, data, val_group, train_cfg, LossConfig(**config['loss']), seed)
    for model, result in zip(models, results):
        suffix = '' if model.multi_task else f'-{model.tasks[0]}'
        path = out / f'model-{model.paradigm}{suffix}.json'
        model.save(path)
        click.echo(f'{path}: {result.epochs} epochs, best epoch {result.best_epoch}, '
                   f'validation loss {result.best_val_loss:.4f}')


@cli.command(name='eval')
@_model_options
@click.option('--paradigm', type=click.Choice(PARADIGMS + ('all', )), help='Model paradigm, or all of them.')
@click.option('--seeds', help='Comma-separated seeds (default: 0..9).')
@click.option('--jobs', type=int, envvar=EnvKeys.JOBS.value, help='Worker processes for the folds.')
@click.option('--no-timing', is_flag=True, default=False, help='Report zero timings for reproducible output.')
@click.pass_obj
def evaluate(  # pylint: disable=too-many-arguments,too-many-locals
    state, dataset, tasks, out_dir, paradigm, seeds, jobs, no_timing
):
    """Run leave-one-group-out evaluation and write report.csv, report.json and efficiency.csv."""
    try:
        seed_list = [int(seed) for seed in seeds.split(',')] if seeds else None
    except ValueError as exc:
        raise BadInput(f'Invalid seed list {seeds!r}.') from exc
    _override(
        state.config,
        dataset=dataset,
        out=out_dir,
        seeds=seed_list,
        jobs=jobs,
        record_timing=False if no_timing else None,
    )
    _override(state.config, 'train', tasks=_tasks(tasks))
    config = state.config
    data = _dataset(config)
    paradigms = PARADIGMS if paradigm == 'all' else (paradigm or config['model']['paradigm'], )
    train_cfg = TrainConfig.from_mapping(config['train'])
    loss_cfg = LossConfig(**config['loss'])
    task_list = train_cfg.tasks or data.tasks
    report = None
    for name in paradigms:
        model_cfg = ModelConfig.from_mapping({**config['model'], 'paradigm': name})
        try:
            current = logo_run(data, model_cfg, train_cfg, config['seeds'], loss_cfg, config['jobs'],
                               config['record_timing'])
        except ValueError as exc:
            raise BadInput(str(exc)) from exc
        report = current if report is None else report.merged(current)
    assert report is not None

    out = pathlib.Path(config['out'])
    state.echo_config(out)
    report.to_csv(out / 'report.csv')
    report.to_json(out / 'report.json')

    systems = {
        'trenn': ModelConfig.from_mapping({**config['model'], 'paradigm': 'trenn'}).build(data.feature_dim, task_list),
    }
    if len(task_list) >= 2:
        systems['mt-trenn'] = ModelConfig.from_mapping({
            **config['model'], 'paradigm': 'mt-trenn'
        }).build(data.feature_dim, task_list)
    logger.info('Training the audited systems with group %s held out for early stopping.', data.groups[-1])
    for models in systems.values():
        _fit(models, data, data.groups[-1], train_cfg, loss_cfg, config['seeds'][0])
    efficiency = efficiency_audit(systems, data.teams, loss_cfg, config['record_timing'])
    efficiency.to_csv(out / 'efficiency.csv')

    for row in report.rows:
        if row.metric == 'acc@1' or row.task in ('TW', 'LS'):
            click.echo(f'{row.model:>9} {row.task:<20} {row.metric:<8} {row.mean:.4f} +- {row.std:.4f}')
    if 'mt-trenn' in systems:
        savings = efficiency.reductions('mt-trenn', 'trenn')
        click.echo('mt-trenn vs single-task trenn: ' +
                   ', '.join(f'{key} -{100 * value:.0f}%' for key, value in savings.items()))
    click.echo(f'Reports written to {out}.')


@cli.command()
@click.option('--checkpoint', type=click.Path(exists=True, dir_okay=False), required=True, help='Model checkpoint.')
@click.option('--dataset', type=click.Path(exists=True, dir_okay=False), help='Dataset file holding the team.')
@click.option('--team', 'team_id', required=True, help='Team to explain.')
@click.option('--method', type=click.Choice(('saliency', 'counterfactual')), default='saliency', show_default=True)
@click.option('--member', type=int, help='Target member (default: team mean).')
@click.option('--task', default=EXPECTED_TEAMWORK, show_default=True, help='Target task.')
@click.option('--signed', is_flag=True, default=False, help='Keep the sign of saliency gradients.')
@click.option('--bins', type=int, default=5, show_default=True, help='Importance levels of the saliency report.')
@click.option('--budget', type=int, default=100, show_default=True, help='Model evaluations of the search.')
@click.option('--direction', type=click.Choice(('increase', 'decrease')), default='increase', show_default=True)
@click.option('--threshold', type=float, help='Target score (default: 75th percentile over the dataset).')
@click.option('--exhaustive', is_flag=True, default=False, help='Enumerate every removal set instead of searching.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), help='Output directory.')
@click.pass_obj
def explain(state, checkpoint, dataset, team_id, method, member, task, signed, bins, budget, direction, threshold,
            exhaustive, out_dir):  # pylint: disable=too-many-arguments,too-many-locals
    """Write a saliency map or a counterfactual for one team."""
    _override(state.config, dataset=dataset, out=out_dir)
    config = state.config
    try:
        model = TeamModel.load(checkpoint)
    except (ValueError, KeyError, TypeError) as exc:
        raise BadInput(f'{checkpoint}: not a valid checkpoint ({exc})') from exc
    data = _dataset(config)
    teams = {team.team_id: team for team in data.teams}
    if team_id not in teams:
        raise BadInput(f"Unknown team '{team_id}'.")
    team = teams[team_id]
    out = pathlib.Path(config['out'])
    state.echo_config(out)
    stem = team_id.replace('/', '_')
    try:
        if method == 'saliency':
            amap = saliency(model, team, member, task, signed=signed)
            binned = render_attribution(amap, bins=bins)
            binned.to_json(out / f'saliency-{stem}.json')
            (out / f'saliency-{stem}.dot').write_text(binned.to_dot(team), encoding='utf8')
            click.echo(f'Saliency of {task} written to {out}.')
            if all(name in model.tasks for name in TW_TASKS):
                score = expected_teamwork(model, team)
                click.echo(f'Expected teamwork {score:.3f} (level {teamwork_level(score)} of 7).')
            return
        target = task if member is None else (task, member)
        if threshold is None:
            objective = default_objective(model, data.teams, target, direction)
        else:
            objective = Objective(target, direction, threshold)
        if exhaustive:
            result = brute_force_counterfactual(model, team, objective)
        else:
            result = greedy_counterfactual(model, team, objective, budget)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    result.to_json(out / f'counterfactual-{stem}.json')
    (out / f'counterfactual-{stem}.dot').write_text(counterfactual_to_dot(team, result), encoding='utf8')
    removed = ', '.join(f'{edge.src}->{edge.dst}@t{edge.t}' for edge in result.removed) or 'none'
    click.echo(f'Removed edges: {removed}; score {result.original_score:.3f} -> {result.counterfactual_score:.3f} '
               f'({"target met" if result.achieved_target else "target not met"}, {result.evaluations} evaluations).')


def run() -> None:
    """Console script entry point, mapping unexpected errors to exit code 1."""
    try:
        code = cli.main(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        click.echo('Aborted!', err=True)
        sys.exit(1)
    except Exception:  # pylint: disable=broad-except
        logger.exception('Internal error.')
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)
