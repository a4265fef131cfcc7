"""Command-line entry point wiring the whole pipeline.

Exit codes: 0 success, 1 usage error, 2 runtime failure. Machine-readable
key=value output goes to stdout; diagnostics go to stderr. An optional
`--config file.json` presets any flag (same key names, dashes or
underscores); `serve` also honors CLONEVAL_PORT / CLONEVAL_STORE /
CLONEVAL_MODEL / CLONEVAL_GAMMA.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import CloneValError
from .fragments import ClonePair, CodeFragment, Label
from .models import (
    MODEL_KINDS,
    Prediction,
    TfIdfCloneScorer,
    TrainingSet,
    decide,
    load_model_file,
    make_classifier,
    save_model,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cloneval", description="Clone-pair validation toolkit")
    parser.add_argument("--config", default=None, help="JSON file presetting flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="load detector-reported pairs into a store")
    p.add_argument("--store")
    p.add_argument("--format", choices=["generic-csv", "pairs-directory"])
    p.add_argument("--path")
    p.add_argument("--detector", default=None)
    p.add_argument("--lang", default="Java")

    p = sub.add_parser("label", help="interactive terminal labeling of queued pairs")
    p.add_argument("--store")
    p.add_argument("--labeler")
    p.add_argument("--limit", type=int, default=0)

    p = sub.add_parser("features", help="emit the feature CSV for a store")
    p.add_argument("--store")
    p.add_argument("--out", default="-")
    p.add_argument("--extras", action="store_true")

    p = sub.add_parser("train", help="train a model, report cross-validation")
    p.add_argument("--store")
    p.add_argument("--features", dest="features_csv")
    p.add_argument("--model", choices=[*MODEL_KINDS, "fica"], default="nn")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--learning-rate", type=float, default=None)
    p.add_argument("--max-epochs", type=int, default=None)
    p.add_argument("--extras", action="store_true")

    p = sub.add_parser("evaluate", help="metrics, curves and feature scores for a model")
    p.add_argument("--store")
    p.add_argument("--model", help="model document path")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--curves", default=None, help="prefix for roc/pr CSV files")
    p.add_argument("--chi2", action="store_true")
    p.add_argument("--type-space", default=None)

    p = sub.add_parser("mutate", help="generate an artificial clone benchmark")
    p.add_argument("--corpus", default=None, help="directory of .java fragments")
    p.add_argument("--synthesize", type=int, default=0, help="generate N synthetic fragments")
    p.add_argument("--true", dest="true_count", type=int)
    p.add_argument("--false", dest="false_count", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--mix", default=None, help="e.g. RENAME_SYSTEMATIC=2,LINE_MODIFY=1")

    p = sub.add_parser("serve", help="start the validation HTTP service")
    p.add_argument("--store", default=None, help="store path (or CLONEVAL_STORE)")
    p.add_argument("--model", default=None, help="model document (or CLONEVAL_MODEL)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None, help="port (or CLONEVAL_PORT, default 8000)")
    p.add_argument("--gamma", type=float, default=None, help="default threshold (or CLONEVAL_GAMMA)")
    p.add_argument("--ui", default=None, help="directory with the labeling UI bundle")

    p = sub.add_parser("report", help="feature distribution report for labeled pairs")
    p.add_argument("--store")
    p.add_argument("--extras", action="store_true")

    p = sub.add_parser("validate", help="classify two fragment files with a model")
    p.add_argument("--model")
    p.add_argument("--a", dest="file_a")
    p.add_argument("--b", dest="file_b")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--lang", default="Java")

    return parser


def _open_store(path: str):
    from .store import CloneStore

    return CloneStore(path)


def _cmd_import(args) -> int:
    from .store import ImportSpec

    store = _open_store(args.store)
    report = store.import_pairs(
        ImportSpec(format=args.format, path=args.path, detector=args.detector, lang=args.lang)
    )
    for message in report.messages:
        print(f"skipped: {message}", file=sys.stderr)
    print(f"imported={report.imported} deduplicated={report.deduplicated} malformed={report.malformed}")
    return 0


def _cmd_label(args) -> int:
    store = _open_store(args.store)
    pending = store.unlabeled()
    if args.limit > 0:
        pending = pending[: args.limit]
    labeled = 0
    for record in pending:
        print(f"--- pair {record.pair_id} (detector: {record.detector or 'unknown'}) ---")
        print(">>> fragment 1:")
        print(record.fragment1.source_text)
        print(">>> fragment 2:")
        print(record.fragment2.source_text)
        while True:
            print("[t]rue positive / [f]alse positive / [s]kip / [q]uit? ", end="", flush=True)
            choice = sys.stdin.readline()
            if not choice:
                choice = "q"
            choice = choice.strip().lower()
            if choice in ("t", "f", "s", "q"):
                break
        if choice == "q":
            break
        if choice == "s":
            continue
        label = Label.TRUE_POSITIVE if choice == "t" else Label.FALSE_POSITIVE
        store.record_label(record.pair_id, args.labeler, label)
        labeled += 1
    print(f"labeled={labeled}")
    return 0


def _cmd_features(args) -> int:
    from .features import write_features_csv

    store = _open_store(args.store)
    rows = [
        (r.pair_id, store.features_for(r, include_extras=args.extras), r.current_label)
        for r in sorted(store.records(), key=lambda r: r.pair_id)
    ]
    if args.out == "-":
        write_features_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as stream:
            write_features_csv(rows, stream)
        print(f"rows={len(rows)} out={args.out}")
    return 0


def _load_training_set(args) -> TrainingSet:
    if args.features_csv:
        from .features import read_features_csv

        with open(args.features_csv, "r", encoding="utf-8", newline="") as stream:
            rows = read_features_csv(stream)
        return TrainingSet.from_feature_rows(rows)
    if not args.store:
        raise UsageError("train needs --store or --features")
    store = _open_store(args.store)
    ts = store.assemble_training_set(include_extras=args.extras)
    if ts is None:
        raise CloneValError("store has no labeled pairs")
    return ts


def _cmd_train(args) -> int:
    from .evaluation import k_fold_cross_validate

    if args.model == "fica":
        if not args.store:
            raise UsageError("fica training needs --store (pairs, not feature rows)")
        store = _open_store(args.store)
        pairs = [r.to_pair() for r in sorted(store.labeled(), key=lambda r: r.pair_id)]
        model = TfIdfCloneScorer().fit(pairs)
        save_model(model, args.out)
        print(f"model=fica rows={len(pairs)} out={args.out}")
        return 0

    ts = _load_training_set(args)
    config: dict = {"model": args.model, "seed": args.seed}
    if args.learning_rate is not None:
        config["learning_rate"] = args.learning_rate
    if args.max_epochs is not None:
        config["max_epochs"] = args.max_epochs

    if args.k >= 2 and len(ts) >= args.k:
        report = k_fold_cross_validate(ts, k=args.k, model_config=config, seed=args.seed)
        print(report.to_text(), end="", file=sys.stderr)
        print(
            f"cv_mean_accuracy={report.mean_accuracy:.6f} cv_mean_f1={report.means['f1']:.6f} k={args.k}"
        )
    model = make_classifier(dict(config))
    model.fit(ts)
    save_model(model, args.out)
    print(f"model={args.model} rows={len(ts)} out={args.out}")
    return 0


def _predict_record(model, store, record) -> Prediction:
    if hasattr(model, "score"):
        return model.score(record.to_pair())
    names = getattr(model, "feature_names_", None) or ()
    features = store.features_for(record, include_extras=len(names) > 8)
    return model.predict_one(features.values)


def _cmd_evaluate(args) -> int:
    from .evaluation import (
        chi_squared_feature_scores,
        compute_metrics,
        curve_and_auc,
        export_type_space,
        recommend_gamma,
        write_type_space_csv,
    )

    store = _open_store(args.store)
    model = load_model_file(args.model)
    records = sorted(store.labeled(), key=lambda r: r.pair_id)
    if not records:
        raise CloneValError("store has no labeled pairs to evaluate")
    predictions = [_predict_record(model, store, r) for r in records]
    labels = [r.current_label for r in records]

    metrics = compute_metrics(predictions, labels, args.gamma)
    print(metrics.to_text())
    roc = curve_and_auc(predictions, labels, "roc")
    pr = curve_and_auc(predictions, labels, "pr")
    print(f"roc_auc={roc.auc:.6f} pr_auc={pr.auc:.6f} recommended_gamma={recommend_gamma(roc):.6f}")
    if args.curves:
        for report, suffix in ((roc, "roc"), (pr, "pr")):
            path = f"{args.curves}.{suffix}.csv"
            with open(path, "w", encoding="utf-8", newline="") as stream:
                report.write_csv(stream)
            print(f"curve={suffix} out={path}")
    if args.chi2:
        ts = store.assemble_training_set()
        for name, score in chi_squared_feature_scores(ts):
            print(f"chi2 {name}={score:.6f}")
    if args.type_space:
        feature_rows = [store.features_for(r) for r in records]
        rows = export_type_space(feature_rows, predictions, labels, args.gamma)
        with open(args.type_space, "w", encoding="utf-8", newline="") as stream:
            write_type_space_csv(rows, stream)
        print(f"type_space_rows={len(rows)} out={args.type_space}")
    return 0


def _read_corpus(args) -> list[CodeFragment]:
    from .mutation import synthesize_corpus

    fragments: list[CodeFragment] = []
    if args.corpus:
        root = Path(args.corpus)
        if not root.is_dir():
            raise CloneValError(f"corpus directory not found: {root}")
        for path in sorted(root.rglob("*.java")):
            text = path.read_text(encoding="utf-8")
            if text.strip():
                fragments.append(CodeFragment(text.rstrip("\n"), file_path=str(path)))
    if args.synthesize > 0:
        fragments.extend(synthesize_corpus(args.synthesize, seed=args.seed))
    if not fragments:
        raise UsageError("mutate needs --corpus and/or --synthesize")
    return fragments


def _parse_mix(text: str | None):
    from .mutation import MutationOperator

    if not text:
        return None
    mix = {}
    for part in text.split(","):
        name, _, weight = part.partition("=")
        try:
            op = MutationOperator[name.strip()]
        except KeyError:
            raise UsageError(f"unknown mutation operator {name!r}")
        mix[op] = float(weight) if weight else 1.0
    return mix


def _cmd_mutate(args) -> int:
    from .mutation import export_benchmark, generate_benchmark

    corpus = _read_corpus(args)
    pairs, manifest = generate_benchmark(
        corpus,
        true_count=args.true_count,
        false_count=args.false_count,
        operator_mix=_parse_mix(args.mix),
        seed=args.seed,
    )
    export_benchmark(pairs, manifest, args.out)
    counts = manifest.counts()
    type_counts = " ".join(
        f"{name.lower()}={counts.get(name, 0)}" for name in ("TYPE1", "TYPE2", "TYPE3")
    )
    print(
        f"pairs={len(pairs)} true={counts.get('TP', 0)} false={counts.get('FP', 0)} "
        f"{type_counts} seed={args.seed} out={args.out}"
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import build_service

    # flags win over environment, environment over built-in defaults
    store = args.store or os.environ.get("CLONEVAL_STORE")
    if not store:
        raise UsageError("serve needs --store or CLONEVAL_STORE")
    model = args.model or os.environ.get("CLONEVAL_MODEL")
    port = args.port if args.port is not None else int(os.environ.get("CLONEVAL_PORT", 8000))
    gamma = args.gamma if args.gamma is not None else float(os.environ.get("CLONEVAL_GAMMA", 0.5))
    app = build_service(store, model, default_gamma=gamma, ui_dir=args.ui)
    print(f"serving on http://{args.host}:{port}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def _cmd_report(args) -> int:
    from .features import feature_distribution_report

    store = _open_store(args.store)
    records = sorted(store.labeled(), key=lambda r: r.pair_id)
    if not records:
        raise CloneValError("store has no labeled pairs")
    dataset = [
        (store.features_for(r, include_extras=args.extras), r.current_label) for r in records
    ]
    report = feature_distribution_report(dataset)
    print(report.to_text(), end="")
    return 0


def _cmd_validate(args) -> int:
    model = load_model_file(args.model)
    pair = ClonePair(
        id="cli",
        fragment1=CodeFragment(Path(args.file_a).read_text(encoding="utf-8"), language=args.lang),
        fragment2=CodeFragment(Path(args.file_b).read_text(encoding="utf-8"), language=args.lang),
    )
    if hasattr(model, "score"):
        prediction = model.score(pair)
    else:
        from .features import extract_features

        names = getattr(model, "feature_names_", None) or ()
        features = extract_features(pair, include_extras=len(names) > 8)
        prediction = model.predict_one(features.values)
    decision = decide(prediction, args.gamma)
    print(
        f"decision={decision.value} prob_true={prediction.prob_true:.6f} "
        f"prob_false={prediction.prob_false:.6f} gamma={args.gamma}"
    )
    return 0


_COMMANDS = {
    "import": _cmd_import,
    "label": _cmd_label,
    "features": _cmd_features,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "mutate": _cmd_mutate,
    "serve": _cmd_serve,
    "report": _cmd_report,
    "validate": _cmd_validate,
}


# requiredness enforced after parsing so --config values count
_REQUIRED = {
    "import": ["store", "format", "path"],
    "label": ["store", "labeler"],
    "features": ["store"],
    "train": ["out"],
    "evaluate": ["store", "model"],
    "mutate": ["true_count", "false_count", "out"],
    "serve": [],
    "report": ["store"],
    "validate": ["model", "file_a", "file_b"],
}
_FLAG_NAMES = {"true_count": "--true", "false_count": "--false",
               "features_csv": "--features", "file_a": "--a", "file_b": "--b"}


def _check_required(args) -> None:
    for dest in _REQUIRED[args.command]:
        if getattr(args, dest, None) is None:
            flag = _FLAG_NAMES.get(dest, f"--{dest.replace('_', '-')}")
            raise UsageError(f"{args.command} requires {flag} (flag or config file)")


def _expand_config(argv: list[str]) -> list[str]:
    """Splice --config JSON values in as flags right after the subcommand.

    Later (explicit) flags override earlier ones in argparse, so the file
    acts as defaults. Boolean true becomes a bare flag, false is dropped.
    """
    path = None
    skip = set()
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            skip.update((i, i + 1))
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
            skip.add(i)
    if path is None:
        return argv
    with open(path, "r", encoding="utf-8") as stream:
        payload = json.load(stream)
    if not isinstance(payload, dict):
        raise UsageError("config file must hold a JSON object of flag values")
    injected: list[str] = []
    for key, value in payload.items():
        flag = f"--{key.replace('_', '-')}"
        if isinstance(value, bool):
            if value:
                injected.append(flag)
        else:
            injected.extend([flag, str(value)])
    command_at = next(
        (i for i, token in enumerate(argv) if i not in skip and not token.startswith("-")),
        None,
    )
    if command_at is None:
        return argv + injected  # let the parser report the missing subcommand
    return argv[: command_at + 1] + injected + argv[command_at + 1 :]


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_expand_config(argv))
        _check_required(args)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except CloneValError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
