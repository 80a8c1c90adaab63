"""Command-line driver for the whole pipeline.

Each subcommand is one stage; stages communicate through plain files in
the work directory, and a manifest records which config and inputs
produced each artifact. Exit status: 0 success, 1 stage error, 2 usage
error, 3 partial run (some items left pending).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from dialex import baselines as bl
from dialex import corpus, dataset, matcher, metrics, service, vocab
from dialex.config import RunConfig, load_config
from dialex.errors import ConfigError, DialexError, PartialRunError
from dialex.llm import runner as llm_runner
from dialex.llm import templates as llm_templates
from dialex.manifest import RunManifest

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_PARTIAL = 3

BASELINE_SYSTEMS = ("random", "ld-threshold", "majority", "logreg")


def _load_run_config(args: argparse.Namespace) -> tuple[RunConfig, str]:
    if args.config:
        config = load_config(args.config)
        text = Path(args.config).read_text(encoding="utf-8")
    else:
        config, text = RunConfig(), ""
    if args.seed is not None:
        config.pipeline = vocab.PipelineConfig(
            n=config.pipeline.n,
            k=config.pipeline.k,
            c=config.pipeline.c,
            window=config.pipeline.window,
            seed=args.seed,
        )
    return config, text


def _manifest(config: RunConfig, config_text: str) -> RunManifest:
    work = Path(config.work_dir)
    work.mkdir(parents=True, exist_ok=True)
    return RunManifest.load_or_create(work, config_text, config.pipeline.seed)


def _need(path: Path, producer: str) -> Path:
    if not path.exists():
        raise DialexError(
            f"missing artifact: {path} (produce it with `dialex {producer}`)"
        )
    return path


def _load_dataset(config: RunConfig) -> list[dataset.DatasetItem]:
    path = _need(config.work_path("dataset.tsv"), "adjudicate")
    with open(path, encoding="utf-8") as handle:
        return dataset.load_released_dataset(handle)


def _split_items(
    items: list[dataset.DatasetItem], split: str
) -> list[dataset.DatasetItem]:
    if split == "all":
        return items
    chosen = [item for item in items if item.split == split]
    if not chosen:
        raise DialexError(
            f"no items in split {split!r} (assign splits with `dialex split`)"
        )
    return chosen


def _task_items(
    items: list[dataset.DatasetItem], task: str
) -> list[dataset.DatasetItem]:
    if task in ("translate", "translation"):
        sliced = dataset.translation_slice(items)
        if not sliced:
            raise DialexError("no gold-yes items to translate in this selection")
        return sliced
    return items


# --- stage commands -------------------------------------------------------


def cmd_ingest(args, config: RunConfig, config_text: str) -> int:
    tagged_path = args.tagged or config.tagged_corpus
    dialect_path = args.dialect or config.dialect_corpus
    if not tagged_path or not dialect_path:
        raise ConfigError(
            "ingest needs both corpora: pass --tagged/--dialect or set "
            "[paths] tagged_corpus / dialect_corpus in the config"
        )
    fmt = args.dialect_format or config.dialect_format
    doc_id = args.doc_id or config.dialect_doc_id
    manifest = _manifest(config, config_text)

    with open(tagged_path, "rb") as handle:
        tokens = list(corpus.ingest_tagged_corpus(handle, doc_id=Path(tagged_path).stem))
    tagged_out = config.work_path("corpus_tagged.tsv")
    with open(tagged_out, "w", encoding="utf-8") as handle:
        corpus.write_tagged_corpus(tokens, handle)
    manifest.record_stage("ingest.tagged", tagged_out)

    with open(dialect_path, "rb") as handle:
        records = list(
            corpus.ingest_dialect_corpus(handle, format=fmt, doc_id=doc_id)
        )
    dialect_out = config.work_path("dialect_sentences.tsv")
    with open(dialect_out, "w", encoding="utf-8") as handle:
        corpus.write_sentence_records(records, handle)
    manifest.record_stage("ingest.dialect", dialect_out)
    manifest.save(config.work_dir)
    print(f"ingested {len(tokens)} tagged tokens -> {tagged_out}")
    print(f"ingested {len(records)} dialect sentences -> {dialect_out}")
    return EXIT_OK


def cmd_vocab(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    tagged_path = _need(config.work_path("corpus_tagged.tsv"), "ingest")
    dialect_path = _need(config.work_path("dialect_sentences.tsv"), "ingest")
    n = args.n or config.pipeline.n
    fold_case = args.fold_case_filter or config.fold_case_filter

    with open(tagged_path, "rb") as handle:
        tokens = corpus.ingest_tagged_corpus(handle)
        standard = vocab.build_standard_vocab(tokens, n)
    with open(dialect_path, encoding="utf-8") as handle:
        records = corpus.read_sentence_records(handle)
    dialect_full = vocab.build_dialect_vocab(records)
    standard_lemmas = {entry.lemma for entry in standard}
    dialect_terms = vocab.filter_shared(
        dialect_full, standard_lemmas, fold_case=fold_case
    )

    standard_out = config.work_path("standard_vocab.tsv")
    with open(standard_out, "w", encoding="utf-8") as handle:
        vocab.write_standard_vocab(standard, handle)
    manifest.record_stage("vocab.standard", standard_out)
    dialect_out = config.work_path("dialect_vocab.tsv")
    with open(dialect_out, "w", encoding="utf-8") as handle:
        vocab.write_dialect_vocab(dialect_terms, handle)
    manifest.record_stage("vocab.dialect", dialect_out)
    manifest.save(config.work_dir)
    shared = len(dialect_full) - len(dialect_terms)
    print(f"standard vocab: {len(standard)} lemmas -> {standard_out}")
    print(
        f"dialect vocab: {len(dialect_terms)} terms "
        f"({shared} shared terms filtered) -> {dialect_out}"
    )
    return EXIT_OK


def cmd_match(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    standard_path = _need(config.work_path("standard_vocab.tsv"), "vocab")
    dialect_path = _need(config.work_path("dialect_vocab.tsv"), "vocab")
    sentences_path = _need(config.work_path("dialect_sentences.tsv"), "ingest")

    pipeline = vocab.PipelineConfig(
        n=config.pipeline.n,
        k=args.k or config.pipeline.k,
        c=args.contexts if args.contexts is not None else config.pipeline.c,
        window=args.window or config.pipeline.window,
        seed=config.pipeline.seed,
    )
    index_kind = args.index or config.index_kind

    with open(standard_path, encoding="utf-8") as handle:
        standard = vocab.read_standard_vocab(handle)
    with open(dialect_path, encoding="utf-8") as handle:
        dialect_terms = vocab.read_dialect_vocab(handle)
    with open(sentences_path, encoding="utf-8") as handle:
        records = corpus.read_sentence_records(handle)

    rows = matcher.build_candidate_table(
        standard, dialect_terms, records, pipeline, index_kind=index_kind
    )
    out_path = config.work_path("candidates.jsonl")
    with open(out_path, "w", encoding="utf-8") as handle:
        matcher.write_candidate_table(rows, handle)
    manifest.record_stage("match", out_path)
    manifest.save(config.work_dir)
    pairs = sum(len(row.pairs) for row in rows)
    print(f"matched {len(rows)} lemmas, {pairs} candidate pairs -> {out_path}")
    return EXIT_OK


def cmd_export_tasks(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    candidates_path = _need(config.work_path("candidates.jsonl"), "match")
    with open(candidates_path, encoding="utf-8") as handle:
        rows = matcher.read_candidate_table(handle)
    tasks = service.tasks_from_candidate_table(
        rows, contexts_per_pair=config.pipeline.c
    )
    out_path = config.work_path("tasks.jsonl")
    with open(out_path, "w", encoding="utf-8") as handle:
        service.write_tasks(tasks, handle)
    manifest.record_stage("export-tasks", out_path)
    manifest.save(config.work_dir)
    print(f"exported {len(tasks)} annotation tasks -> {out_path}")
    return EXIT_OK


def cmd_serve(args, config: RunConfig, config_text: str) -> int:
    tasks_path = _need(config.work_path("tasks.jsonl"), "export-tasks")
    tasks = service.load_tasks(tasks_path)
    store = dataset.AnnotationStore(
        config.log_path(), known_pairs={t.pair_id for t in tasks}
    )
    print(
        f"serving {len(tasks)} tasks on http://{args.host}:{args.port} "
        f"(log: {config.log_path()})"
    )
    service.serve(tasks, store, host=args.host, port=args.port)
    return EXIT_OK


def cmd_adjudicate(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    tasks_path = _need(config.work_path("tasks.jsonl"), "export-tasks")
    log_path = config.log_path()
    if not log_path.exists():
        raise DialexError(
            f"missing annotation log: {log_path} (collect labels with "
            f"`dialex serve` first)"
        )
    tasks = service.load_tasks(tasks_path)
    items = [
        dataset.DatasetItem(
            pair_id=t.pair_id,
            lemma=t.lemma,
            pos_max=t.pos_max,
            term=t.term,
            distance=t.distance,
            contexts=t.contexts,
        )
        for t in tasks
    ]
    store = dataset.AnnotationStore(log_path, known_pairs={t.pair_id for t in tasks})
    adjudicated = dataset.apply_adjudication(items, store)
    resolved = [item for item in adjudicated if item.gold in dataset.LABELS]
    dropped = len(adjudicated) - len(resolved)
    kept = adjudicated if args.keep_unresolved else resolved
    out_path = config.work_path("dataset.tsv")
    with open(out_path, "w", encoding="utf-8") as handle:
        dataset.write_dataset_tsv(kept, handle)
    manifest.record_stage("adjudicate", out_path)
    manifest.save(config.work_dir)
    verb = "kept" if args.keep_unresolved else "dropped"
    print(
        f"adjudicated {len(items)} pairs: {len(resolved)} resolved, "
        f"{dropped} unresolved ({verb}) -> {out_path}"
    )
    return EXIT_OK


def cmd_split(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    items = _load_dataset(config)
    dev_size = args.dev_size or config.dev_size
    assigned = dataset.split_dev_test(items, dev_size, config.pipeline.seed)
    out_path = config.work_path("dataset.tsv")
    with open(out_path, "w", encoding="utf-8") as handle:
        dataset.write_dataset_tsv(assigned, handle)
    manifest.record_stage("split", out_path)
    manifest.save(config.work_dir)
    n_dev = sum(1 for item in assigned if item.split == "dev")
    print(
        f"split {len(assigned)} items: {n_dev} dev, "
        f"{len(assigned) - n_dev} test -> {out_path}"
    )
    return EXIT_OK


# --- evaluation commands --------------------------------------------------


def _baseline_predictions(
    system: str,
    items: list[dataset.DatasetItem],
    config: RunConfig,
    model: bl.LogRegModel | None = None,
) -> dict[str, str]:
    if system == "random":
        rng = random.Random(config.pipeline.seed)
        return {item.pair_id: bl.predict_random(item, rng) for item in items}
    if system == "ld-threshold":
        return {item.pair_id: bl.predict_ld_threshold(item) for item in items}
    if system == "majority":
        return {item.pair_id: bl.predict_majority(item) for item in items}
    if system == "logreg":
        if model is None:
            raise DialexError(
                "logreg needs a trained model (run `dialex baselines`)"
            )
        return {item.pair_id: bl.predict_logreg(model, item) for item in items}
    raise ConfigError(f"unknown baseline {system!r}")


def _prediction_records(
    system: str, items: list[dataset.DatasetItem], predictions: dict[str, str]
) -> list[llm_runner.PredictionRecord]:
    return [
        llm_runner.PredictionRecord(
            pair_id=item.pair_id,
            model=system,
            template_id=0,
            variant="baseline",
            raw=predictions[item.pair_id],
            outcome=predictions[item.pair_id],
            latency_ms=0,
        )
        for item in items
    ]


def cmd_baselines(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    items = _load_dataset(config)
    eval_items = _split_items(items, args.split)
    out_dir = config.work_path("baselines")
    out_dir.mkdir(parents=True, exist_ok=True)

    train_items = [item for item in items if item.split == "dev"]
    model = None
    if "logreg" in args.systems:
        if not train_items:
            raise DialexError(
                "logreg training needs dev items (assign with `dialex split`)"
            )
        model = bl.train_logreg(train_items)
        model_path = out_dir / "logreg.model.json"
        with open(model_path, "w", encoding="utf-8") as handle:
            bl.save_model(model, handle)
        manifest.record_stage("baselines.logreg-model", model_path)

    for system in args.systems:
        predictions = _baseline_predictions(system, eval_items, config, model)
        records = _prediction_records(system, eval_items, predictions)
        pred_path = out_dir / f"{system}.predictions.jsonl"
        llm_runner.write_predictions(records, pred_path)
        manifest.record_stage(f"baselines.{system}", pred_path)
        report = metrics.score_judgment(predictions, eval_items, system=system)
        report_path = out_dir / f"{system}.report.json"
        report_path.write_text(report.to_json() + "\n", encoding="utf-8")
        print(
            f"{system}: macro-F1 {report.overall:.4f} "
            f"accuracy {report.accuracy:.4f} ({report.n_items} items)"
        )
    manifest.save(config.work_dir)
    return EXIT_OK


def _resolve_endpoint(args, config: RunConfig):
    if args.base_url:
        return llm_runner.ModelEndpointConfig(
            base_url=args.base_url,
            model_name=args.model_name or args.endpoint,
            api_key_env=args.api_key_env,
        )
    return config.endpoint(args.endpoint)


def _template_pool(args) -> list[llm_templates.PromptTemplate]:
    pool = llm_templates.bundled_pool()
    return llm_templates.pool_slice(
        pool, args.task, language=args.language, with_context=args.with_context
    )


def cmd_llm_select(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    items = _load_dataset(config)
    dev_items = _task_items(_split_items(items, "dev"), args.task)
    pool = _template_pool(args)
    endpoint = _resolve_endpoint(args, config)
    llm_dir = config.work_path("llm")
    llm_dir.mkdir(parents=True, exist_ok=True)
    cache_path = Path(args.cache) if args.cache else llm_dir / f"{args.endpoint}.cache.jsonl"
    scores_path = llm_dir / f"{args.endpoint}.{args.task}.scores.json"
    best = llm_runner.select_best_prompt(
        pool,
        dev_items,
        endpoint,
        args.task,
        cache_path,
        scores_path=scores_path,
        max_concurrency=args.concurrency,
    )
    manifest.record_stage(f"llm-select.{args.endpoint}.{args.task}", scores_path)
    manifest.save(config.work_dir)
    print(
        f"selected template {best} for {args.endpoint}/{args.task} "
        f"over {len(dev_items)} dev items -> {scores_path}"
    )
    return EXIT_OK


def cmd_llm_run(args, config: RunConfig, config_text: str) -> int:
    manifest = _manifest(config, config_text)
    items = _load_dataset(config)
    run_items = _task_items(_split_items(items, args.split), args.task)
    pool = _template_pool(args)
    chosen = [t for t in pool if t.id == args.template_id]
    if not chosen:
        raise ConfigError(
            f"no bundled {args.task}/{args.language}"
            f"{'+ctx' if args.with_context else ''} template with id "
            f"{args.template_id}"
        )
    template = chosen[0]
    endpoint = _resolve_endpoint(args, config)
    llm_dir = config.work_path("llm")
    llm_dir.mkdir(parents=True, exist_ok=True)
    cache_path = Path(args.cache) if args.cache else llm_dir / f"{args.endpoint}.cache.jsonl"
    out_path = (
        Path(args.out)
        if args.out
        else llm_dir
        / f"{args.endpoint}.{args.task}.{template.id:02d}.{template.variant}.predictions.jsonl"
    )
    result = llm_runner.run_task(
        args.task,
        run_items,
        template,
        endpoint,
        cache_path,
        predictions_path=out_path,
        max_concurrency=args.concurrency,
    )
    manifest.record_stage(
        f"llm-run.{args.endpoint}.{args.task}.{template.id:02d}.{template.variant}",
        out_path,
    )
    manifest.save(config.work_dir)
    print(
        f"{len(result.records)} predictions "
        f"({len(result.pending)} pending) -> {out_path}"
    )
    if result.pending:
        print(
            f"partial run: rerun `dialex llm-run` to retry the "
            f"{len(result.pending)} pending items (cache: {cache_path})",
            file=sys.stderr,
        )
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_score(args, config: RunConfig, config_text: str) -> int:
    items = _load_dataset(config)
    scored_items = _task_items(_split_items(items, args.split), args.task)
    if args.predictions:
        records = llm_runner.read_predictions(
            _need(Path(args.predictions), "llm-run")
        )
        predictions = {record.pair_id: record.outcome for record in records}
        system = args.system or (records[0].model if records else "unknown")
    elif args.system:
        if args.system == "logreg":
            model_path = _need(
                config.work_path("baselines") / "logreg.model.json", "baselines"
            )
            with open(model_path, encoding="utf-8") as handle:
                model = bl.load_model(handle)
            predictions = _baseline_predictions(
                "logreg", scored_items, config, model
            )
        else:
            predictions = _baseline_predictions(
                args.system, scored_items, config
            )
        system = args.system
    else:
        raise ConfigError("score needs --predictions FILE or --system NAME")

    if args.task == "judgment":
        report = metrics.score_judgment(
            predictions, scored_items, system=system, if_policy=args.if_policy
        )
    else:
        report = metrics.score_translation(
            predictions, scored_items, system=system
        )
    print(metrics.report_to_text(report))
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(report.to_json() + "\n", encoding="utf-8")
        manifest = _manifest(config, config_text)
        manifest.record_stage(f"score.{system}.{args.task}", out_path)
        manifest.save(config.work_dir)
        print(f"report -> {out_path}")
    return EXIT_OK


def _load_report(path: Path) -> dict:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DialexError(f"cannot read report {path}: {exc}") from exc
    if not isinstance(data, dict) or "task" not in data:
        raise DialexError(f"{path} is not an evaluation report")
    return data


def cmd_report(args, config: RunConfig, config_text: str) -> int:
    paths = [Path(p) for p in args.inputs]
    if not paths:
        paths = sorted(Path(config.work_dir).glob("**/*.report.json"))
    if not paths:
        raise DialexError(
            f"no report files under {config.work_dir} "
            f"(produce them with `dialex baselines` or `dialex score --out`)"
        )
    reports = [_load_report(path) for path in paths]
    header = f"{'system':<24} {'task':<12} {'items':>7} {'overall':>8} {'acc':>7} {'IF%':>6}"
    print(header)
    print("-" * len(header))
    for rep in reports:
        print(
            f"{rep.get('system', '?'):<24} {rep['task']:<12} "
            f"{rep.get('n_items', 0):>7} {rep.get('overall', 0.0):>8.4f} "
            f"{rep.get('accuracy', 0.0):>7.4f} "
            f"{100.0 * rep.get('if_error_rate', 0.0):>6.2f}"
        )
    if args.delta:
        name_a, name_b = args.delta
        by_system = {rep.get("system"): rep for rep in reports}
        for name in (name_a, name_b):
            if name not in by_system:
                raise DialexError(
                    f"no loaded report for system {name!r} "
                    f"(available: {', '.join(sorted(k for k in by_system if k))})"
                )
        rep_a, rep_b = by_system[name_a], by_system[name_b]
        if rep_a["task"] != rep_b["task"]:
            raise DialexError("delta requires two reports for the same task")
        keys_pos = sorted(
            set(rep_a.get("per_pos", {})) | set(rep_b.get("per_pos", {}))
        )
        keys_ld = sorted(
            set(rep_a.get("per_ld", {})) | set(rep_b.get("per_ld", {}))
        )
        delta = {
            "system_a": name_a,
            "system_b": name_b,
            "task": rep_a["task"],
            "delta_overall": rep_b.get("overall", 0.0) - rep_a.get("overall", 0.0),
            "delta_if_rate": rep_b.get("if_error_rate", 0.0)
            - rep_a.get("if_error_rate", 0.0),
            "per_pos": {
                k: rep_b.get("per_pos", {}).get(k, 0.0)
                - rep_a.get("per_pos", {}).get(k, 0.0)
                for k in keys_pos
            },
            "per_ld": {
                k: rep_b.get("per_ld", {}).get(k, 0.0)
                - rep_a.get("per_ld", {}).get(k, 0.0)
                for k in keys_ld
            },
        }
        print()
        print(f"delta {name_b} - {name_a} ({delta['task']}):")
        print(f"  overall {delta['delta_overall']:+.4f}")
        print(f"  IF rate {delta['delta_if_rate']:+.4f}")
        if args.csv_out:
            csv_path = Path(args.csv_out)
            csv_path.parent.mkdir(parents=True, exist_ok=True)
            csv_path.write_text(metrics.delta_to_csv(delta), encoding="utf-8")
            print(f"  csv -> {csv_path}")
    return EXIT_OK


# --- argument parsing -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dialex",
        description="Induce and evaluate a dialect variation dictionary.",
    )
    parser.add_argument("--config", help="TOML run configuration file")
    parser.add_argument(
        "--seed", type=int, help="override the configured random seed"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and normalize both corpora")
    p.add_argument("--tagged", help="tagged standard-language corpus (TSV)")
    p.add_argument("--dialect", help="dialect corpus file")
    p.add_argument(
        "--dialect-format",
        choices=corpus.DIALECT_FORMATS,
        help="dialect corpus layout",
    )
    p.add_argument("--doc-id", help="document id for the dialect corpus")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("vocab", help="build standard and dialect vocabularies")
    p.add_argument("--n", type=int, help="standard vocabulary size cap")
    p.add_argument(
        "--fold-case-filter",
        action="store_true",
        help="case-insensitive shared-token filtering",
    )
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("match", help="k nearest candidates per lemma")
    p.add_argument("--k", type=int, help="candidates per lemma")
    p.add_argument("--contexts", type=int, help="usage examples per candidate")
    p.add_argument("--window", type=int, help="context characters each side")
    p.add_argument(
        "--index", choices=matcher.INDEX_KINDS, help="neighbor index structure"
    )
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("export-tasks", help="flatten candidates into tasks")
    p.set_defaults(func=cmd_export_tasks)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("adjudicate", help="majority-vote labels into a dataset")
    p.add_argument(
        "--keep-unresolved",
        action="store_true",
        help="keep pairs without a majority label in the dataset",
    )
    p.set_defaults(func=cmd_adjudicate)

    p = sub.add_parser("split", help="hold out a uniform development set")
    p.add_argument("--dev-size", type=int, help="development items to hold out")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("baselines", help="run and score baseline systems")
    p.add_argument(
        "--systems",
        nargs="+",
        choices=BASELINE_SYSTEMS,
        default=list(BASELINE_SYSTEMS),
        help="baselines to run",
    )
    p.add_argument("--split", default="test", choices=("dev", "test", "all"))
    p.set_defaults(func=cmd_baselines)

    def add_llm_common(p):
        p.add_argument("--endpoint", required=True, help="configured endpoint name")
        p.add_argument("--task", required=True, choices=llm_templates.TASKS)
        p.add_argument("--language", default="en", choices=llm_templates.LANGUAGES)
        p.add_argument("--with-context", action="store_true")
        p.add_argument("--cache", help="response cache path override")
        p.add_argument("--concurrency", type=int, default=1)
        p.add_argument("--base-url", help="endpoint URL (bypasses config)")
        p.add_argument("--model-name", help="model name for --base-url")
        p.add_argument("--api-key-env", help="env var holding the API key")

    p = sub.add_parser("llm-select", help="pick the best prompt on dev items")
    add_llm_common(p)
    p.set_defaults(func=cmd_llm_select)

    p = sub.add_parser("llm-run", help="run one template over a split")
    add_llm_common(p)
    p.add_argument("--template-id", type=int, required=True)
    p.add_argument("--split", default="test", choices=("dev", "test", "all"))
    p.add_argument("--out", help="predictions file path override")
    p.set_defaults(func=cmd_llm_run)

    p = sub.add_parser("score", help="score predictions against gold labels")
    p.add_argument("task", choices=("judgment", "translation"))
    p.add_argument("--predictions", help="predictions JSONL to score")
    p.add_argument(
        "--system",
        help="score a closed-form baseline directly "
        f"({', '.join(BASELINE_SYSTEMS)}), or name the system in --predictions",
    )
    p.add_argument("--split", default="test", choices=("dev", "test", "all"))
    p.add_argument(
        "--if-policy",
        default="invalid",
        choices=metrics.IF_POLICIES,
        help="how instruction-following failures enter per-class scores",
    )
    p.add_argument("--out", help="write the report as JSON")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("report", help="tabulate and compare saved reports")
    p.add_argument("inputs", nargs="*", help="report JSON files (default: work dir)")
    p.add_argument(
        "--delta", nargs=2, metavar=("SYSTEM_A", "SYSTEM_B"),
        help="print metric deltas between two systems",
    )
    p.add_argument("--csv-out", help="write the delta as CSV")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, config_text = _load_run_config(args)
        return args.func(args, config, config_text)
    except PartialRunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    except DialexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
