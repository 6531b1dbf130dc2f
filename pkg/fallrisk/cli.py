# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

"""
Command line front end of the pipeline.

Every command writes its outputs into ``--out-dir`` under fixed file names,
followed by a ``manifest.json`` describing the run. Exit status is 0 on
success, 2 when an input or argument fails validation, 3 when the solver did
not converge (outputs are still written) and 4 on I/O failures. Failures print
a JSON object with ``error``, ``message`` and ``exit_code`` to stderr.
"""

import argparse
import hashlib
import json
import logging
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, NamedTuple, Optional, Sequence

import pandas as pd
from beartype.roar import BeartypeCallHintViolation
from sklearn.exceptions import ConvergenceWarning

from fallrisk.cohort import (
    LabelingPolicy,
    build_cohort,
    check_policy,
    read_cohort,
    read_encounters,
    write_cohort,
    write_encounters,
    write_exclusion_tally,
)
from fallrisk.evaluate import (
    SWEEP_THRESHOLDS,
    evaluate_cohort,
    lambda_sweep,
    sensitivity_sweep,
    share_ranges,
    write_report,
)
from fallrisk.featurize import build_matrix, jhfrat_only, read_matrix, write_matrix
from fallrisk.plot import (
    differential_plot,
    pr_plot,
    roc_plot,
    save_svg,
    score_distribution_plot,
)
from fallrisk.scoring import scored_frame
from fallrisk.simulations import SynthConfig, generate, write_truth
from fallrisk.solver import FitConfig, fit_matrix
from fallrisk.types import Dict, List, Tuple
from fallrisk.utils import atomic_write, config_hash, dumps
from fallrisk.version import __version

logger = logging.getLogger("fallrisk.cli")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NOT_CONVERGED = 3
EXIT_IO = 4

MANIFEST = "manifest.json"

# eval tables the report command carries next to its figures
REPORT_TABLES: Tuple[str, ...] = (
    "fold_metrics.csv",
    "oof_scores.csv",
    "unknown_scores.csv",
    "coefficients.csv",
    "confusion.csv",
    "concordance.csv",
    "transitions.csv",
    "stability.csv",
    "differentials.csv",
    "occurrence_rates.csv",
    "summary.json",
)

# arguments that locate files or tune execution rather than configure results
_NON_CONFIG = {"command", "func", "verbose", "out_dir", "workers"}
_INPUTS = ("encounters", "cohort", "features", "eval_dir")


class RunManifest(NamedTuple):
    """
    Provenance of one command run, written as ``manifest.json`` into its
    output directory.

    Attributes
    ----------
    command : str
    config : Dict[str, Any]
        Result-affecting arguments
    config_hash : str
        SHA-256 of the canonical JSON of ``config``
    inputs : Dict[str, str]
        Input paths by argument name
    outputs : Dict[str, str]
        SHA-256 of every output file by name relative to the output directory
    seed : Optional[int]
    version : str
    started : str
    finished : str
        UTC timestamps in ISO 8601
    """

    command: str
    config: Dict[str, Any]
    config_hash: str
    inputs: Dict[str, str]
    outputs: Dict[str, str]
    seed: Optional[int]
    version: str
    started: str
    finished: str


class CommandResult(NamedTuple):
    outputs: List[Path]
    converged: bool = True


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _run_config(arguments: argparse.Namespace) -> Dict[str, Any]:
    return {
        key: value
        for key, value in sorted(vars(arguments).items())
        if key not in _NON_CONFIG and key not in _INPUTS
    }


def _write_manifest(
    arguments: argparse.Namespace, result: CommandResult, started: str
) -> Path:
    out_dir = Path(arguments.out_dir)
    config = _run_config(arguments)
    manifest = RunManifest(
        command=arguments.command,
        config=config,
        config_hash=config_hash(config),
        inputs={
            key: str(getattr(arguments, key))
            for key in _INPUTS
            if getattr(arguments, key, None) is not None
        },
        outputs={
            path.relative_to(out_dir).as_posix(): _sha256(path)
            for path in sorted(result.outputs)
        },
        seed=getattr(arguments, "seed", None),
        version=__version(),
        started=started,
        finished=_now(),
    )
    path = out_dir / MANIFEST
    with atomic_write(path) as handle:
        handle.write(dumps(manifest._asdict()))
        handle.write("\n")
    return path


def _policy(arguments: argparse.Namespace) -> LabelingPolicy:
    policy = LabelingPolicy(high_min_per_window=arguments.high_threshold)
    check_policy(policy)
    return policy


def _fit_config(arguments: argparse.Namespace) -> FitConfig:
    return FitConfig(
        lambda_=arguments.lambda_, tol=arguments.tol, method=arguments.method
    )


def cmd_synth(arguments: argparse.Namespace) -> CommandResult:
    out_dir = Path(arguments.out_dir)
    cohort = generate(
        SynthConfig(n_encounters=arguments.n_encounters, seed=arguments.seed),
        workers=arguments.workers,
    )
    encounters_path = out_dir / "encounters.jsonl"
    truth_path = out_dir / "truth.csv"
    write_encounters(encounters_path, cohort.encounters)
    write_truth(truth_path, cohort)
    return CommandResult([encounters_path, truth_path])


def cmd_label(arguments: argparse.Namespace) -> CommandResult:
    out_dir = Path(arguments.out_dir)
    encounters = read_encounters(arguments.encounters)
    cohort = build_cohort(encounters, _policy(arguments))
    cohort_path = out_dir / "cohort.jsonl"
    tally_path = out_dir / "exclusions.csv"
    counts_path = out_dir / "label_counts.json"
    write_cohort(cohort_path, cohort)
    write_exclusion_tally(tally_path, cohort.exclusion_tally)
    with atomic_write(counts_path) as handle:
        handle.write(
            dumps({**cohort.label_counts, "promoted": cohort.n_promoted})
        )
        handle.write("\n")
    return CommandResult([cohort_path, tally_path, counts_path])


def cmd_features(arguments: argparse.Namespace) -> CommandResult:
    out_dir = Path(arguments.out_dir)
    cohort = read_cohort(arguments.cohort)
    matrix = build_matrix(cohort, augmented=arguments.augmented)
    unknown = build_matrix(cohort, augmented=arguments.augmented, include_unknown=True)
    outputs = []
    for name, frame in (("features.csv", matrix), ("unknown_features.csv", unknown)):
        path = out_dir / name
        write_matrix(path, frame)
        outputs.extend([path, path.with_suffix(".dictionary.json")])
    return CommandResult(outputs)


def cmd_fit(arguments: argparse.Namespace) -> CommandResult:
    out_dir = Path(arguments.out_dir)
    matrix = read_matrix(arguments.features)
    if not arguments.augmented:
        matrix = jhfrat_only(matrix)
    model = fit_matrix(matrix, _fit_config(arguments))
    model_path = out_dir / "model.json"
    scores_path = out_dir / "scores.csv"
    with atomic_write(model_path) as handle:
        handle.write(dumps(model.to_dict()))
        handle.write("\n")
    with atomic_write(scores_path) as handle:
        scored_frame(model, matrix).to_csv(handle, index=False, float_format="%.10g")
    return CommandResult([model_path, scores_path], model.metadata.converged)


def cmd_eval(arguments: argparse.Namespace) -> CommandResult:
    report = evaluate_cohort(
        read_cohort(arguments.cohort),
        _fit_config(arguments),
        k=arguments.folds,
        seed=arguments.seed,
        augmented=arguments.augmented,
        workers=arguments.workers,
    )
    return CommandResult(write_report(arguments.out_dir, report))


def cmd_sweep(arguments: argparse.Namespace) -> CommandResult:
    out_dir = Path(arguments.out_dir)
    if arguments.lambdas and arguments.features is None:
        raise ValueError("--lambdas needs --features")
    config = _fit_config(arguments)
    result = sensitivity_sweep(
        read_encounters(arguments.encounters),
        thresholds=arguments.thresholds,
        config=config,
        augmented=arguments.augmented,
        workers=arguments.workers,
    )
    tables = {
        "sweep_counts.csv": result.counts.reset_index(),
        "sweep_coefficients.csv": result.coefficients.reset_index(),
        "sweep_stability.csv": result.stability.reset_index(),
        "sweep_shares.csv": share_ranges(result).reset_index(),
    }
    converged = all(point.converged or point.beta is None for point in result.points)
    if arguments.lambdas:
        frame = lambda_sweep(
            read_matrix(arguments.features),
            lambdas=arguments.lambdas,
            config=config,
            workers=arguments.workers,
        )
        tables["lambda_sweep.csv"] = frame.reset_index()
        converged = converged and bool(frame["converged"].all())
    outputs = []
    for name, frame in tables.items():
        path = out_dir / name
        with atomic_write(path) as handle:
            frame.to_csv(handle, index=False, float_format="%.10g")
        outputs.append(path)
    return CommandResult(outputs, converged)


def cmd_report(arguments: argparse.Namespace) -> CommandResult:
    eval_dir = Path(arguments.eval_dir)
    out_dir = Path(arguments.out_dir)
    outputs = []
    for name in REPORT_TABLES:
        with open(eval_dir / name, "rb") as source:
            content = source.read()
        path = out_dir / name
        with atomic_write(path, "wb") as handle:
            handle.write(content)
        outputs.append(path)

    oof = pd.read_csv(
        out_dir / "oof_scores.csv", dtype={"id": str}, float_precision="round_trip"
    )
    models = [c[len("score_") :] for c in oof.columns if c.startswith("score_")]
    if not models:
        raise ValueError(f"{eval_dir / 'oof_scores.csv'} holds no score columns")
    differentials = pd.read_csv(
        out_dir / "differentials.csv", dtype={"id": str}, float_precision="round_trip"
    )
    fitted = [m for m in models if m in set(differentials["model"])]

    figures = {
        "roc.svg": roc_plot(oof, models).get_figure(),
        "pr.svg": pr_plot(oof, models).get_figure(),
        "score_distribution.svg": score_distribution_plot(oof, models),
    }
    if fitted:
        # the richest fitted model comes last in the table
        deltas = differentials.loc[differentials["model"] == fitted[-1], "delta"]
        figures["differential.svg"] = differential_plot(
            deltas.to_numpy()
        ).get_figure()
    for name, figure in figures.items():
        path = out_dir / name
        save_svg(figure, path)
        outputs.append(path)
    return CommandResult(outputs)


def _step(
    arguments: argparse.Namespace,
    command: str,
    func: Callable[[argparse.Namespace], CommandResult],
    **overrides: Any,
) -> Tuple[Path, bool]:
    step = argparse.Namespace(**{**vars(arguments), **overrides})
    step.command = command
    Path(step.out_dir).mkdir(parents=True, exist_ok=True)
    started = _now()
    result = func(step)
    return _write_manifest(step, result, started), result.converged


def cmd_run(arguments: argparse.Namespace) -> CommandResult:
    root = Path(arguments.out_dir)
    manifests = []
    converged = True
    plan: Sequence[Tuple[str, Callable[[argparse.Namespace], CommandResult], Dict]] = (
        ("synth", cmd_synth, {}),
        ("label", cmd_label, {"encounters": root / "synth" / "encounters.jsonl"}),
        ("features", cmd_features, {"cohort": root / "label" / "cohort.jsonl"}),
        ("fit", cmd_fit, {"features": root / "features" / "features.csv"}),
        ("eval", cmd_eval, {"cohort": root / "label" / "cohort.jsonl"}),
        (
            "sweep",
            cmd_sweep,
            {
                "encounters": root / "synth" / "encounters.jsonl",
                "features": root / "features" / "features.csv",
            },
        ),
        ("report", cmd_report, {"eval_dir": root / "eval"}),
    )
    for command, func, paths in plan:
        logger.info(f"Running {command}")
        manifest, step_converged = _step(
            arguments, command, func, out_dir=root / command, **paths
        )
        manifests.append(manifest)
        converged = converged and step_converged
    return CommandResult(manifests, converged)


def _add_out_dir(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out-dir", dest="out_dir", required=True, help="output directory"
    )


def _add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=1, help="random seed")


def _add_workers(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="parallel jobs; results do not depend on it",
    )


def _add_labeling(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--high-threshold",
        dest="high_threshold",
        type=int,
        default=LabelingPolicy().high_min_per_window,
        help="minimum targeted interventions in a window counting towards High",
    )


def _add_augmented(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--augmented",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="append the EHR indicator features to the JHFRAT items",
    )


def _add_solver(parser: argparse.ArgumentParser) -> None:
    defaults = FitConfig()
    parser.add_argument(
        "--lambda",
        dest="lambda_",
        type=float,
        default=defaults.lambda_,
        help="weight of the low threshold log-likelihood",
    )
    parser.add_argument(
        "--method",
        choices=("newton", "gradient"),
        default=defaults.method,
        help="projected Newton or spectral projected gradient ascent",
    )
    parser.add_argument(
        "--tol", type=float, default=defaults.tol, help="solver tolerance"
    )


def _add_synth(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--n-encounters",
        dest="n_encounters",
        type=int,
        default=SynthConfig().n_encounters,
        help="number of synthetic encounters",
    )


def _add_folds(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--folds", type=int, default=5, help="cross-validation folds")


def _add_sweep(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--thresholds",
        type=int,
        nargs="+",
        default=list(SWEEP_THRESHOLDS),
        help="High labeling thresholds to sweep",
    )
    parser.add_argument(
        "--lambdas",
        type=float,
        nargs="*",
        default=None,
        help="also refit the features over these lambda values",
    )


def _parser() -> argparse.ArgumentParser:
    root_parser = argparse.ArgumentParser(
        prog="fallrisk",
        description="Weak labeling, constrained score optimization and evaluation "
        "of inpatient fall risk scores",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    root_parser.add_argument(
        "--verbose", action="store_true", default=False, help="log progress"
    )
    subparsers = root_parser.add_subparsers(dest="command", help="pipeline step")
    subparsers.required = True

    def add(name: str, func: Callable, summary: str) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(
            name, help=summary, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        _add_out_dir(parser)
        parser.set_defaults(func=func)
        return parser

    synth = add("synth", cmd_synth, "generate a synthetic cohort")
    _add_synth(synth)
    _add_seed(synth)
    _add_workers(synth)

    label = add("label", cmd_label, "apply exclusions and label encounters")
    label.add_argument("--encounters", required=True, help="encounters JSON Lines")
    _add_labeling(label)

    features = add("features", cmd_features, "build the feature matrices")
    features.add_argument("--cohort", required=True, help="labeled cohort JSON Lines")
    _add_augmented(features)

    fit = add("fit", cmd_fit, "fit the constrained score")
    fit.add_argument("--features", required=True, help="feature matrix CSV")
    _add_augmented(fit)
    _add_solver(fit)

    evaluate = add("eval", cmd_eval, "cross-validate fixed and optimized scores")
    evaluate.add_argument("--cohort", required=True, help="labeled cohort JSON Lines")
    _add_augmented(evaluate)
    _add_solver(evaluate)
    _add_folds(evaluate)
    _add_seed(evaluate)
    _add_workers(evaluate)

    sweep = add("sweep", cmd_sweep, "relabel and refit across thresholds")
    sweep.add_argument("--encounters", required=True, help="encounters JSON Lines")
    sweep.add_argument(
        "--features", default=None, help="feature matrix CSV for --lambdas"
    )
    _add_sweep(sweep)
    _add_augmented(sweep)
    _add_solver(sweep)
    _add_workers(sweep)

    report = add("report", cmd_report, "render figures from an eval directory")
    report.add_argument("--eval-dir", dest="eval_dir", required=True)

    run = add("run", cmd_run, "synth, label, features, fit, eval, sweep and report")
    _add_synth(run)
    _add_seed(run)
    _add_labeling(run)
    _add_augmented(run)
    _add_solver(run)
    _add_folds(run)
    _add_sweep(run)
    _add_workers(run)
    return root_parser


def _fail(error: BaseException, exit_code: int) -> int:
    print(
        json.dumps(
            {
                "error": type(error).__name__,
                "message": str(error),
                "exit_code": exit_code,
            }
        ),
        file=sys.stderr,
    )
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    arguments = _parser().parse_args(argv)

    if arguments.verbose is True:
        logging.basicConfig(
            format="%(asctime)s:%(levelname)s:%(name)s, %(message)s", level=logging.INFO
        )

    started = _now()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        try:
            Path(arguments.out_dir).mkdir(parents=True, exist_ok=True)
            result = arguments.func(arguments)
            _write_manifest(arguments, result, started)
        except BeartypeCallHintViolation as error:
            return _fail(error, EXIT_VALIDATION)
        except (ValueError, TypeError) as error:
            return _fail(error, EXIT_VALIDATION)
        except OSError as error:
            return _fail(error, EXIT_IO)
    not_converged = [w for w in caught if issubclass(w.category, ConvergenceWarning)]
    for warning in caught:
        if warning not in not_converged:
            logger.warning(str(warning.message))
    if not_converged or not result.converged:
        message = (
            str(not_converged[0].message)
            if not_converged
            else "the solver did not converge"
        )
        return _fail(ConvergenceWarning(message), EXIT_NOT_CONVERGED)
    return EXIT_OK
