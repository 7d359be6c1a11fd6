"""Command-line interface for viswork."""

import sys
import traceback
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import click

from . import __version__
from .core.config_parser import SuiteConfig, default_verify_suite, load_config
from .core.errors import (
    DegenerateInput,
    InvalidQuery,
    NotCCW,
    NotSimple,
    OffsetOutside,
    PolygonParseError,
    ViewpointOutside,
    VisworkError,
)
from .core.polygon_store import format_polygon, load_file, read_polygon
from .core.runner import Instance, RunOptions, bench, run, verify
from .generators.testgen import DegenerateKind, Family, GenSpec, generate
from .output.formats import format_json, format_text, format_verify_json, write_csv
from .output.svg import render_svg
from .utils.logger import ROOT_LOGGER, setup_logger, verbosity_level

EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_INVALID_INPUT = 3
EXIT_INTERNAL = 4

INVALID_INPUT_ERRORS = (DegenerateInput, NotSimple, NotCCW, ViewpointOutside, OffsetOutside, InvalidQuery)

ALGO_CHOICES = ["const", "dnc-det", "dnc-rand"]


def _fail(error: BaseException, verbose: bool) -> None:
    """Print an error and exit with the code for its class."""
    if isinstance(error, PolygonParseError):
        code = EXIT_PARSE
    elif isinstance(error, INVALID_INPUT_ERRORS):
        code = EXIT_INVALID_INPUT
    else:
        code = EXIT_INTERNAL
    click.secho(f"Error: {error}", fg='red', err=True)
    if verbose:
        click.echo(traceback.format_exc(), err=True)
    sys.exit(code)


def _int_list(text: Optional[str]) -> List[int]:
    """Parse '1,2,8' or '1-64' (or a mix) into integers."""
    if not text:
        return []
    out: List[int] = []
    for part in text.split(','):
        part = part.strip()
        if '-' in part[1:]:
            lo, hi = part.split('-', 1) if not part.startswith('-') else part[1:].split('-', 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        out.write_text(text, encoding='utf-8')


def _collect_instances(inputs: Sequence[Path], family: Optional[str], sizes: Optional[str],
                       seeds: Optional[str], suite: Optional[SuiteConfig]) -> List[Instance]:
    instances: List[Instance] = []
    if suite is not None:
        instances.extend(suite.build_instances())
    if family:
        for size in _int_list(sizes):
            for seed in _int_list(seeds) or [0]:
                spec = GenSpec(Family(family), size, seed)
                vertices, q = generate(spec)
                instances.append(Instance(spec.label(), family, vertices, q))
    for path in inputs:
        vertices, q = read_polygon(path)
        instances.append(Instance(path.name, "file", vertices, q))
    return instances


@click.group()
@click.version_option(version=__version__)
def main():
    """Visibility polygons under a constrained-workspace model."""


def _common_options(fn):
    fn = click.option('--verbose', '-v', is_flag=True, help='Enable verbose output')(fn)
    fn = click.option('--strict/--no-strict', default=None,
                      help='O(n^2) simplicity check (default: on for n <= 10000)')(fn)
    return fn


@main.command()
@click.option('--input', 'input_path', required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Polygon file')
@click.option('--algo', type=click.Choice(ALGO_CHOICES), default='const', show_default=True)
@click.option('--s', 's', type=click.IntRange(min=1), default=1, show_default=True,
              help='Workspace parameter for divide and conquer')
@click.option('--seed', type=int, default=0, show_default=True, help='Seed for dnc-rand')
@click.option('--format', 'fmt', type=click.Choice(['text', 'json', 'svg']), default='text',
              show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Write to a file instead of standard output')
@click.option('--debug', is_flag=True, help='Check chain preconditions while running')
@_common_options
def compute(input_path: Path, algo: str, s: int, seed: int, fmt: str, out: Optional[Path],
            debug: bool, strict: Optional[bool], verbose: bool):
    """Compute the visibility polygon of the viewpoint in INPUT."""
    setup_logger(ROOT_LOGGER, verbosity_level(verbose))
    try:
        h = load_file(input_path, strict=strict)
        events, report = run(h, algo, RunOptions(s=s, seed=seed, debug=debug),
                             family=input_path.name)
    except (VisworkError, OSError) as e:
        _fail(e, verbose)
        return

    if fmt == 'text':
        _emit(format_text(events), out)
    elif fmt == 'json':
        _emit(format_json(events, report) + "\n", out)
    else:
        _emit(render_svg(h, events) + "\n", out)


def _instance_options(fn):
    fn = click.option('--threads', type=click.IntRange(min=1), default=None, envvar='VISWORK_THREADS',
                      help='Worker processes (env: VISWORK_THREADS; default: suite threads or 1)')(fn)
    fn = click.option('--suite', type=click.Path(exists=True, dir_okay=False, path_type=Path),
                      default=None, help='YAML suite file')(fn)
    fn = click.option('--seeds', default=None, help="Generator seeds, e.g. '0-4'")(fn)
    fn = click.option('--sizes', default=None, help="Family sizes, e.g. '1-64' or '8,16,32'")(fn)
    fn = click.option('--family', type=click.Choice([f.value for f in Family if f is not Family.DEGENERATE]),
                      default=None, help='Generated family')(fn)
    fn = click.option('--input', 'inputs', multiple=True,
                      type=click.Path(exists=True, dir_okay=False, path_type=Path),
                      help='Polygon file (repeatable)')(fn)
    fn = click.option('--algo', 'algos', multiple=True, type=click.Choice(ALGO_CHOICES),
                      help='Algorithm (repeatable)')(fn)
    fn = click.option('--s', 's_values', default=None, help="Workspace parameters, e.g. '1-8'")(fn)
    fn = click.option('--seed', 'rng_seeds', default=None, help="RNG seeds for dnc-rand, e.g. '0-4'")(fn)
    return fn


def _threads(threads: Optional[int], config: Optional[SuiteConfig]) -> int:
    if threads is not None:
        return threads
    return config.threads if config is not None else 1


def _resolve(suite_path: Optional[Path], use_default: bool) -> Optional[SuiteConfig]:
    if suite_path is not None:
        return load_config(suite_path)
    if use_default:
        return default_verify_suite()
    return None


@main.command(name='verify')
@_instance_options
@click.option('--default-suite', is_flag=True, help='Use the built-in suite')
@click.option('--check-contracts', is_flag=True,
              help='Also check every partition rank and split against the oracle')
@_common_options
def verify_cmd(inputs, family, sizes, seeds, suite, threads, algos, s_values, rng_seeds,
               default_suite: bool, check_contracts: bool, strict: Optional[bool], verbose: bool):
    """Compare algorithms against the full-memory oracle; prints a JSON summary."""
    setup_logger(ROOT_LOGGER, verbosity_level(verbose))
    try:
        config = _resolve(suite, default_suite)
        instances = _collect_instances(inputs, family, sizes, seeds, config)
    except (VisworkError, OSError, ValueError) as e:
        _fail(e if isinstance(e, VisworkError) else PolygonParseError(str(e)), verbose)
        return
    if not instances:
        click.secho("Error: nothing to verify; give --input, --family, --suite or --default-suite",
                    fg='red', err=True)
        sys.exit(EXIT_PARSE)

    algorithms = list(algos) or (config.algorithms if config else ["const"])
    s_list = _int_list(s_values) or (config.s_values if config else [1])
    seed_list = _int_list(rng_seeds) or (config.rng_seeds if config else [0])
    if config is not None and strict is None:
        strict = config.strict
    try:
        summary = verify(instances, algorithms, s_list, seed_list, check_contracts=check_contracts,
                         strict=strict, threads=_threads(threads, config))
    except VisworkError as e:
        _fail(e, verbose)
        return

    click.echo(format_verify_json(summary))
    if not summary.ok:
        first = summary.mismatches[0]
        click.secho(f"Mismatch on {first.instance} ({first.algo}, s={first.s}, seed={first.seed}): "
                    f"{first.reason}", fg='red', err=True)
        sys.exit(EXIT_MISMATCH)


@main.command(name='bench')
@_instance_options
@click.option('--reps', type=click.IntRange(min=1), default=None, help='Repetitions per run')
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Write CSV to a file instead of standard output')
@_common_options
def bench_cmd(inputs, family, sizes, seeds, suite, threads, algos, s_values, rng_seeds,
              reps: Optional[int], out: Optional[Path], strict: Optional[bool], verbose: bool):
    """Benchmark accesses, workspace and time; prints CSV."""
    setup_logger(ROOT_LOGGER, verbosity_level(verbose))
    try:
        config = _resolve(suite, False)
        instances = _collect_instances(inputs, family, sizes, seeds, config)
        if not instances:
            raise PolygonParseError("nothing to benchmark; give --input, --family or --suite")
        algorithms = list(algos) or (config.algorithms if config else ["const"])
        s_list = _int_list(s_values) or (config.s_values if config else [1])
        seed_list = _int_list(rng_seeds) or (config.rng_seeds if config else [0])
        repetitions = reps or (config.repetitions if config else 1)
        reports = bench(instances, algorithms, s_list, seed_list, repetitions,
                        strict=strict if strict is not None else (config.strict if config else None),
                        threads=_threads(threads, config))
    except (VisworkError, OSError, ValueError) as e:
        _fail(e if isinstance(e, VisworkError) else PolygonParseError(str(e)), verbose)
        return

    if out is None:
        write_csv(reports, sys.stdout)
    else:
        with open(out, 'w', encoding='utf-8', newline='') as f:
            write_csv(reports, f)


@main.command(name='gen')
@click.argument('family', type=click.Choice([f.value for f in Family]))
@click.argument('param')
@click.option('--seed', type=int, default=None, help='Generator seed (convex: omit for canonical)')
@click.option('--outer', default='4', show_default=True, help='Star outer radius')
@click.option('--inner', default='2', show_default=True, help='Star inner radius')
@click.option('--offset', default='0,0', show_default=True, help="Star viewpoint offset 'x,y'")
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Write to a file instead of standard output')
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose output')
def gen_cmd(family: str, param: str, seed: Optional[int], outer: str, inner: str, offset: str,
            out: Optional[Path], verbose: bool):
    """
    Generate a polygon file.

    PARAM is the size (convex: n, comb: teeth, star: n) or, for the
    degenerate family, one of collinear-pair, vertex-on-p0-ray, q-on-boundary.
    """
    setup_logger(ROOT_LOGGER, verbosity_level(verbose))
    fam = Family(family)
    try:
        if fam is Family.DEGENERATE:
            spec = GenSpec(fam, 0, seed, {"kind": DegenerateKind(param)})
        else:
            ox, oy = (Fraction(part.strip()) for part in offset.split(','))
            params = {"outer": outer, "inner": inner, "offset": (str(ox), str(oy))}
            size = int(param)
            if fam is not Family.CONVEX and seed is None:
                seed = 0
            spec = GenSpec(fam, size, seed, params)
        vertices, q = generate(spec)
    except ValueError as e:
        if isinstance(e, VisworkError):
            _fail(e, verbose)
        raise click.BadParameter(str(e), param_hint="PARAM")
    except VisworkError as e:
        _fail(e, verbose)
        return

    _emit(format_polygon(vertices, q, comment=f"viswork gen {family} {param}"), out)


if __name__ == '__main__':
    main()
