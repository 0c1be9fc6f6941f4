"""End-to-end experiment on a synthetic corpus.

Generates labeled train/test corpora, extracts features with two of the
shipped theory configurations, trains one classifier per theory, tunes
the soft-voting ensemble on the train split, and reports F1-positive
for each classifier and for the ensemble on the held-out split.

Usage:
    python scripts/run_synthetic_pipeline.py --out-dir runs/synth
    python scripts/run_synthetic_pipeline.py --n-train 2000 --n-test 500
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

import numpy as np

from humor_engine import (
    SynthSpec,
    TrainSettings,
    average_precision,
    ensemble_predict,
    ensemble_score,
    f1_positive,
    featurize,
    fit_weights,
    generate,
    load_shipped_config,
    predict_matrix_probas,
    save_ensemble,
    save_model,
    train,
    write_corpus,
    write_feature_matrix,
)


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("runs/synth"))
    parser.add_argument("--n-train", type=int, default=600)
    parser.add_argument("--n-test", type=int, default=200)
    parser.add_argument("--signal", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--theories",
        nargs="+",
        default=["incongruity", "relief"],
        help="shipped configuration names to train classifiers for",
    )
    parser.add_argument(
        "--pair-budget",
        type=int,
        default=40,
        help="pair terms per model (all candidate pairs of a 48-feature "
        "config would be slow; 40 keeps the strongest interactions)",
    )
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()

    train_corpus = generate(
        SynthSpec(
            n_instances=args.n_train,
            signal_strength=args.signal,
            seed=args.seed + 101,
            id_prefix="tr",
        )
    )
    test_corpus = generate(
        SynthSpec(
            n_instances=args.n_test,
            signal_strength=args.signal,
            seed=args.seed + 202,
            id_prefix="te",
        )
    )
    write_corpus(train_corpus, args.out_dir / "train.jsonl")
    write_corpus(test_corpus, args.out_dir / "test.jsonl")
    y_train = np.asarray([r.label for r in train_corpus])
    y_test = np.asarray([r.label for r in test_corpus])
    print(f"corpus: {len(train_corpus)} train / {len(test_corpus)} test")

    settings = TrainSettings(seed=args.seed, pair_budget=args.pair_budget)
    summary: dict[str, dict[str, float]] = {}
    train_probas, test_probas = [], []
    for name in args.theories:
        config = load_shipped_config(name)
        t0 = time.perf_counter()
        matrix_train, report = featurize(train_corpus, config)
        matrix_test, _ = featurize(test_corpus, config)
        write_feature_matrix(matrix_train, args.out_dir / f"{name}-train.csv")
        write_feature_matrix(matrix_test, args.out_dir / f"{name}-test.csv")
        t1 = time.perf_counter()
        model = train(matrix_train, settings, theory=name, feature_specs=config.features)
        t2 = time.perf_counter()
        save_model(model, args.out_dir / f"{name}-model.json")

        p_train = predict_matrix_probas(model, matrix_train)
        p_test = predict_matrix_probas(model, matrix_test)
        train_probas.append(p_train)
        test_probas.append(p_test)
        f1 = f1_positive(y_test, (p_test > 0.5).astype(int))
        ap = average_precision(y_test.tolist(), p_test.tolist())
        summary[name] = {"f1_positive": f1, "average_precision": ap}
        print(
            f"{name}: {len(config.features)} features "
            f"(extract {t1 - t0:.1f}s, train {t2 - t1:.1f}s) "
            f"test F1 {f1:.3f}, AP {ap:.3f}"
        )

    result = fit_weights(np.column_stack(train_probas), y_train, list(args.theories))
    save_ensemble(result.model, args.out_dir / "ensemble.json")
    scores = ensemble_score(result.model.weights, np.column_stack(test_probas))
    ensemble_f1 = f1_positive(y_test, ensemble_predict(scores))
    ensemble_ap = average_precision(y_test.tolist(), scores.tolist())
    weights = ", ".join(f"{w:.3f}" for w in result.model.weights)
    print(f"ensemble weights: [{weights}] (AP on train {result.ap:.3f})")
    print(f"ensemble: test F1 {ensemble_f1:.3f}, AP {ensemble_ap:.3f}")
    summary["ensemble"] = {"f1_positive": ensemble_f1, "average_precision": ensemble_ap}

    with open(args.out_dir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"artifacts in {args.out_dir} ({time.perf_counter() - started:.1f}s total)")


if __name__ == "__main__":
    main()
