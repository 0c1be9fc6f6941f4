"""Command-line entry point.

Subcommands wire the pipeline end to end:

    synth          write a synthetic corpus with planted signals
    extract        corpus + theory config -> feature matrix CSV + report
    train          feature matrix -> additive classifier model JSON
    tune-ensemble  fit soft-voting weights over trained classifiers
    predict        write per-instance per-theory probabilities + score
    evaluate       score an ensemble against labels, write a report
    explain        export feature functions / local / global explanations

Exit codes: 0 success, 2 anticipated validation/user error, 1 bug.
Every artifact-producing command writes `<out>.manifest.json` capturing
input/output hashes, arguments, seed, and wall time.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
import traceback

import numpy as np
import yaml

from . import ensemble as ens
from . import explain as expl
from . import ga2m
from .corpus import class_counts, read_corpus, write_corpus
from .errors import EngineError, ConfigError
from .featurize import featurize
from .manifest import RunManifest, manifest_path_for
from .matrix import (
    FeatureMatrix,
    read_feature_matrix,
    read_labels,
    write_feature_matrix,
)
from .simplex import SimplexSettings
from .specs import (
    load_shipped_config,
    read_theory_config,
    shipped_config_names,
)
from .synth import DEFAULT_CHANNELS, SynthSpec, generate

THREADS_ENV_VAR = "HUMOR_ENGINE_THREADS"


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(
                f"{THREADS_ENV_VAR} must be an integer, got {env!r}"
            ) from None
    return 1


def _load_config(path_or_name: str):
    if path_or_name in shipped_config_names():
        return load_shipped_config(path_or_name)
    return read_theory_config(path_or_name)


def _require_file(path: str, what: str) -> None:
    if not os.path.exists(path):
        raise EngineError(f"{what} not found: {path}")


# ---------------------------------------------------------------------------
# subcommand implementations


def _cmd_synth(args: argparse.Namespace) -> int:
    started = time.monotonic()
    spec = SynthSpec(
        n_instances=args.n,
        positive_rate=args.positive_rate,
        channels=tuple(args.channels) if args.channels else DEFAULT_CHANNELS,
        signal_strength=args.signal,
        length_range=(args.min_len, args.max_len),
        noise_std=args.noise_std,
        seed=args.seed,
        id_prefix=args.id_prefix,
    )
    records = generate(spec)
    write_corpus(records, args.out)
    pos, neg, unlabeled = class_counts(records)
    print(f"wrote {len(records)} instances to {args.out}")
    print(f"class counts: positive={pos} negative={neg} unlabeled={unlabeled}")
    manifest = RunManifest(
        command="synth",
        arguments={
            "n": args.n,
            "positive_rate": args.positive_rate,
            "signal": args.signal,
            "length_range": [args.min_len, args.max_len],
            "noise_std": args.noise_std,
            "channels": list(spec.channels),
            "id_prefix": args.id_prefix,
        },
        seed=args.seed,
        wall_time_s=round(time.monotonic() - started, 3),
    )
    manifest.add_output(args.out)
    manifest.write(manifest_path_for(args.out))
    return 0


def _cmd_extract(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _require_file(args.corpus, "corpus file")
    config = _load_config(args.config)
    records = read_corpus(args.corpus)
    pos, neg, unlabeled = class_counts(records)
    print(
        f"read {len(records)} instances "
        f"(positive={pos} negative={neg} unlabeled={unlabeled})"
    )
    matrix, report = featurize(records, config)
    write_feature_matrix(matrix, args.out)
    print(
        f"wrote {matrix.n_rows}x{matrix.n_features} matrix "
        f"for theory {config.name!r} to {args.out}"
    )
    outputs = [args.out]
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
        outputs.append(args.report)
    manifest = RunManifest(
        command="extract",
        arguments={"config": args.config, "theory": config.name},
        seed=args.seed,
        wall_time_s=round(time.monotonic() - started, 3),
    )
    manifest.add_input(args.corpus)
    if os.path.exists(args.config):
        manifest.add_input(args.config)
    for path in outputs:
        manifest.add_output(path)
    manifest.write(manifest_path_for(args.out))
    return 0


def _read_train_settings(path: str | None, seed: int) -> ga2m.TrainSettings:
    if path is None:
        return ga2m.TrainSettings(seed=seed)
    _require_file(path, "settings file")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: settings must be a mapping")
    doc.setdefault("seed", seed)
    return ga2m.TrainSettings.from_dict(doc)


def _cmd_train(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _require_file(args.features, "feature matrix")
    matrix = read_feature_matrix(args.features)
    settings = _read_train_settings(args.settings, args.seed)
    feature_specs = None
    if args.config:
        config = _load_config(args.config)
        feature_specs = config.features
    model = ga2m.train(
        matrix, settings, theory=args.theory_name, feature_specs=feature_specs
    )
    ga2m.save_model(model, args.model_out)
    print(
        f"trained theory {args.theory_name!r} on {matrix.n_rows} rows, "
        f"{matrix.n_features} features; {len(model.pairs)} pair terms"
    )
    print(
        "bag epochs (mains): "
        + ", ".join(str(e) for e in model.meta["bag_epochs_mains"])
    )
    manifest = RunManifest(
        command="train",
        arguments={
            "theory_name": args.theory_name,
            "settings": settings.to_dict(),
            "config": args.config,
        },
        seed=settings.seed,
        wall_time_s=round(time.monotonic() - started, 3),
    )
    manifest.add_input(args.features)
    manifest.add_output(args.model_out)
    manifest.write(manifest_path_for(args.model_out))
    return 0


def _aligned_probas(
    model_paths: list[str], feature_paths: list[str]
) -> tuple[list[str], tuple[str, ...], np.ndarray]:
    """Load per-theory models and matrices, check id alignment, return
    (classifier names, ids, probas with one column per classifier)."""
    if len(model_paths) != len(feature_paths):
        raise EngineError(
            f"{len(model_paths)} models but {len(feature_paths)} feature files"
        )
    names: list[str] = []
    ids: tuple[str, ...] | None = None
    columns: list[np.ndarray] = []
    for model_path, feature_path in zip(model_paths, feature_paths):
        _require_file(model_path, "model file")
        _require_file(feature_path, "feature matrix")
        model = ga2m.load_model(model_path)
        matrix = read_feature_matrix(feature_path)
        if ids is None:
            ids = matrix.ids
        elif matrix.ids != ids:
            raise EngineError(
                f"feature matrices are not row-aligned by id: {feature_path} "
                "disagrees with the first matrix"
            )
        name = model.theory or os.path.splitext(os.path.basename(model_path))[0]
        if name in names:
            name = f"{name}#{len(names)}"
        names.append(name)
        columns.append(ga2m.predict_matrix_probas(model, matrix))
    assert ids is not None
    return names, ids, np.column_stack(columns)


def _labels_for_ids(labels_path: str, ids: tuple[str, ...]) -> np.ndarray:
    labels_map = read_labels(labels_path)
    missing = [i for i in ids if i not in labels_map]
    if missing:
        raise EngineError(
            f"label file lacks {len(missing)} instance id(s), e.g. {missing[:3]}"
        )
    return np.asarray([labels_map[i] for i in ids], dtype=np.int64)


def _cmd_tune_ensemble(args: argparse.Namespace) -> int:
    started = time.monotonic()
    names, ids, probas = _aligned_probas(args.models, args.features)
    if len(ids) == 0:
        raise EngineError("cannot tune an ensemble on an empty matrix")
    y = _labels_for_ids(args.labels, ids)
    result = ens.fit_weights(probas, y, names)
    result.model.diagnostics["fit_split"] = args.fit_split
    ens.save_ensemble(result.model, args.out)
    print(f"fitted weights on split {args.fit_split!r} ({len(ids)} instances)")
    print(f"{'classifier':<28} weight")
    for name, weight in zip(names, result.model.weights):
        print(f"{name:<28} {weight:.4f}")
    print(
        f"fit AP {result.ap:.4f} (uniform {result.uniform_ap:.4f}, "
        f"{result.iterations} simplex iterations)"
    )
    manifest = RunManifest(
        command="tune-ensemble",
        arguments={"classifiers": names, "fit_split": args.fit_split},
        seed=args.seed,
        wall_time_s=round(time.monotonic() - started, 3),
    )
    for path in [*args.models, *args.features, args.labels]:
        manifest.add_input(path)
    manifest.add_output(args.out)
    manifest.write(manifest_path_for(args.out))
    return 0


def _load_ensemble_for(names: list[str], path: str) -> ens.EnsembleModel:
    model = ens.load_ensemble(path)
    if tuple(names) != model.classifier_names:
        raise EngineError(
            "ensemble classifiers do not match the provided models: "
            f"ensemble has {list(model.classifier_names)}, got {names}"
        )
    return model


def _cmd_predict(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _require_file(args.ensemble, "ensemble file")
    names, ids, probas = _aligned_probas(args.models, args.features)
    model = _load_ensemble_for(names, args.ensemble)
    scores = ens.ensemble_score(model.weights, probas)
    with open(args.scores_out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *names, "ensemble_score"])
        for i, instance_id in enumerate(ids):
            writer.writerow(
                [
                    instance_id,
                    *(repr(float(p)) for p in probas[i]),
                    repr(float(scores[i])),
                ]
            )
    print(f"wrote scores for {len(ids)} instances to {args.scores_out}")
    manifest = RunManifest(
        command="predict",
        arguments={"classifiers": names},
        seed=args.seed,
        wall_time_s=round(time.monotonic() - started, 3),
    )
    for path in [*args.models, *args.features, args.ensemble]:
        manifest.add_input(path)
    manifest.add_output(args.scores_out)
    manifest.write(manifest_path_for(args.scores_out))
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _require_file(args.ensemble, "ensemble file")
    names, ids, probas = _aligned_probas(args.models, args.features)
    if len(ids) == 0:
        raise EngineError("cannot evaluate on an empty test set")
    model = _load_ensemble_for(names, args.ensemble)
    y = _labels_for_ids(args.labels, ids)
    report = ens.evaluate(model, probas, y)
    print(f"{'classifier':<28} {'F1':>7} {'weight':>8}")
    for name, weight in zip(names, model.weights):
        print(f"{name:<28} {report.per_classifier_f1[name]:>7.3f} {weight:>8.3f}")
    print(f"{'ensemble':<28} {report.f1:>7.3f} {'':>8}")
    print(f"average precision: {report.ap:.4f}")
    doc = report.to_dict()
    doc["n_instances"] = len(ids)
    doc["weights"] = {n: float(w) for n, w in zip(names, model.weights)}
    with open(args.report_out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    manifest = RunManifest(
        command="evaluate",
        arguments={"classifiers": names},
        seed=args.seed,
        wall_time_s=round(time.monotonic() - started, 3),
    )
    for path in [*args.models, *args.features, args.ensemble, args.labels]:
        manifest.add_input(path)
    manifest.add_output(args.report_out)
    manifest.write(manifest_path_for(args.report_out))
    return 0


def _row_mapping(matrix: FeatureMatrix, instance_id: str) -> dict[str, float | None]:
    try:
        i = matrix.ids.index(instance_id)
    except ValueError:
        raise EngineError(
            f"instance id {instance_id!r} not present in the feature matrix"
        ) from None
    row: dict[str, float | None] = {}
    for j, name in enumerate(matrix.feature_names):
        value = matrix.values[i, j]
        row[name] = None if np.isnan(value) else float(value)
    return row


def _cmd_explain(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _require_file(args.model, "model file")
    model = ga2m.load_model(args.model)
    inputs = [args.model]
    if args.mode == "function":
        view = expl.export_feature_function(model, args.feature)
        doc = view.to_dict()
        if args.overlay:
            overlay = expl.hypothesis_overlay(view, args.overlay, args.magnitude)
            doc["overlay"] = overlay.to_dict()
            print(
                f"overlay {args.overlay!r} agreement with learned function: "
                f"{overlay.agreement:.3f}"
            )
        if args.plot_csv:
            _write_function_csv(view, doc.get("overlay"), args.plot_csv)
    elif args.mode == "local":
        _require_file(args.features, "feature matrix")
        matrix = read_feature_matrix(args.features)
        inputs.append(args.features)
        row = _row_mapping(matrix, args.id)
        explanation = expl.explain_local(model, row, args.id, args.top_k)
        doc = explanation.to_dict()
        print(
            f"instance {args.id}: proba {explanation.proba:.4f} "
            f"(logit {explanation.logit:+.4f}, intercept {explanation.intercept:+.4f})"
        )
        for term, contribution, _ in explanation.entries:
            print(f"  {contribution.value:+.4f}  {term}")
    else:  # global
        _require_file(args.features, "feature matrix")
        matrix = read_feature_matrix(args.features)
        inputs.append(args.features)
        report = expl.explain_global(model, matrix)
        doc = report.to_dict()
        for term, importance in report.entries[:10]:
            print(f"  {importance:.4f}  {term}")
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    manifest = RunManifest(
        command=f"explain {args.mode}",
        arguments={
            key: getattr(args, key, None)
            for key in ("feature", "overlay", "magnitude", "id", "top_k")
        },
        seed=args.seed,
        wall_time_s=round(time.monotonic() - started, 3),
    )
    for path in inputs:
        manifest.add_input(path)
    manifest.add_output(args.out)
    if args.mode == "function" and args.plot_csv:
        manifest.add_output(args.plot_csv)
    manifest.write(manifest_path_for(args.out))
    return 0


def _write_function_csv(
    view: expl.FeatureFunctionView, overlay_doc: dict | None, path: str
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["bin", "lower", "upper", "logit", "env_min", "env_max", "count"]
        if overlay_doc:
            header.append("overlay")
        writer.writerow(header)
        for i in range(len(view.logits)):
            row = [
                i,
                "" if view.bin_lower[i] is None else repr(view.bin_lower[i]),
                "" if view.bin_upper[i] is None else repr(view.bin_upper[i]),
                repr(view.logits[i]),
                repr(view.env_min[i]),
                repr(view.env_max[i]),
                view.counts[i],
            ]
            if overlay_doc:
                row.append(repr(overlay_doc["overlay"][i]))
            writer.writerow(row)
        missing_row = [
            "missing",
            "",
            "",
            repr(view.missing_logit),
            repr(view.missing_env_min),
            repr(view.missing_env_max),
            view.missing_count,
        ]
        if overlay_doc:
            missing_row.append("")
        writer.writerow(missing_row)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="humor-engine",
        description=(
            "Interpretable humor classification over per-token time series: "
            "proxy features, additive classifiers, soft-voting ensemble, "
            "faithful explanations."
        ),
    )
    parser.add_argument("--seed", type=int, default=0, help="global random seed")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker cap (default: ${THREADS_ENV_VAR} or 1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic corpus with planted signals")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, required=True, help="number of instances")
    p.add_argument("--positive-rate", type=float, default=0.45)
    p.add_argument("--signal", type=float, default=1.0)
    p.add_argument("--min-len", type=int, default=6)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--noise-std", type=float, default=0.02)
    p.add_argument("--channels", nargs="*", default=None)
    p.add_argument("--id-prefix", default="synth")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("extract", help="corpus + theory config -> feature matrix")
    p.add_argument("--corpus", required=True)
    p.add_argument(
        "--config",
        required=True,
        help="theory config path, or a shipped name: "
        + ", ".join(shipped_config_names()),
    )
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None, help="optional JSON report path")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("train", help="feature matrix -> classifier model")
    p.add_argument("--features", required=True)
    p.add_argument("--theory-name", required=True)
    p.add_argument("--settings", default=None, help="YAML training settings")
    p.add_argument(
        "--config",
        default=None,
        help="theory config to attach hypothesis metadata to the model",
    )
    p.add_argument("--model-out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("tune-ensemble", help="fit soft-voting weights")
    p.add_argument("--models", nargs="+", required=True)
    p.add_argument("--features", nargs="+", required=True)
    p.add_argument("--labels", required=True, help="CSV id,label")
    p.add_argument(
        "--fit-split",
        required=True,
        help="name of the split these matrices came from (recorded, not inferred)",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_tune_ensemble)

    p = sub.add_parser("predict", help="write per-instance scores")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--models", nargs="+", required=True)
    p.add_argument("--features", nargs="+", required=True)
    p.add_argument("--scores-out", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="score an ensemble against labels")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--models", nargs="+", required=True)
    p.add_argument("--features", nargs="+", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--report-out", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("explain", help="export explanation data")
    explain_sub = p.add_subparsers(dest="mode", required=True)

    pf = explain_sub.add_parser("function", help="feature-function plot data")
    pf.add_argument("--model", required=True)
    pf.add_argument("--feature", required=True)
    pf.add_argument("--overlay", choices=expl.OVERLAY_SHAPES, default=None)
    pf.add_argument("--magnitude", type=float, default=1.0)
    pf.add_argument("--out", required=True)
    pf.add_argument("--plot-csv", default=None)
    pf.set_defaults(func=_cmd_explain)

    pl = explain_sub.add_parser("local", help="per-instance contributions")
    pl.add_argument("--model", required=True)
    pl.add_argument("--features", required=True)
    pl.add_argument("--id", required=True)
    pl.add_argument("--top-k", type=int, default=None)
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=_cmd_explain)

    pg = explain_sub.add_parser("global", help="term importances over a matrix")
    pg.add_argument("--model", required=True)
    pg.add_argument("--features", required=True)
    pg.add_argument("--out", required=True)
    pg.set_defaults(func=_cmd_explain)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads = _resolve_threads(args.threads)
        os.environ.setdefault("OMP_NUM_THREADS", str(threads))
        return args.func(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
