"""Command-line driver: ingest, rank-scan, factorize, classify, coherence,
sweep, and plot-heatmap.

Every command is deterministic given its flags; random choices always
come from explicit seeds with documented defaults, and output files are
byte-identical across reruns. A JSON config file (``--config``) may supply
any flag of its subcommand, with command-line flags taking precedence.

Exit codes: 0 success, 1 runtime or numeric failure, 2 usage or input
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .evaluation import (
    EvalReport,
    avg_coherence,
    coherence,
    macro_f1,
    save_report,
    threshold_predictions,
    topics_table,
)
from .factorization import (
    FactorizationError,
    ModelConfig,
    fit,
    load_result,
    save_result,
    top_keywords,
)
from .linalg import singular_values
from .supervision import (
    build_label_matrix,
    build_seed_matrix,
    load_label_assignments,
    load_mask,
    load_seed_words,
    save_mask,
    split_mask,
)
from .textpipe import (
    PipelineParams,
    Vocabulary,
    build_corpus,
    doc_token_sets,
    load_corpus,
    load_stopwords,
    read_corpus_dir,
    save_corpus,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _float_list(text) -> list[float]:
    try:
        if isinstance(text, (list, tuple)):
            return [float(v) for v in text]
        return [float(v) for v in str(text).split(",") if v.strip() != ""]
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        ) from None


def _int_list(text) -> list[int]:
    try:
        if isinstance(text, (list, tuple)):
            return [int(v) for v in text]
        return [int(v) for v in str(text).split(",") if v.strip() != ""]
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def run_ingest(args) -> int:
    docs = read_corpus_dir(args.corpus_dir)
    if not docs:
        raise ValueError("no documents")
    stop = load_stopwords(args.stopwords) if args.stopwords else None
    params = PipelineParams(
        max_df=args.max_df,
        min_df=args.min_df,
        max_features=args.max_features,
        stopwords=stop,
    )
    corpus = build_corpus(docs, params)
    save_corpus(corpus, args.out)
    density = float(np.count_nonzero(corpus.x)) / corpus.x.size
    print(
        f"terms={corpus.n_terms} documents={corpus.n_docs} density={density:.4f}"
    )
    print(f"wrote {args.out}")
    return EXIT_OK


def run_rank_scan(args) -> int:
    corpus = load_corpus(args.corpus_file)
    spectrum = singular_values(corpus.x, args.top)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("index,singular_value\n")
        for i, s in enumerate(spectrum.singular_values, start=1):
            fh.write(f"{i},{s!r}\n")
    print(f"wrote {args.out} ({args.top} singular values, "
          f"largest={spectrum.singular_values[0]:.6g})")
    return EXIT_OK


def _model_config(args) -> ModelConfig:
    if args.rank is None:
        raise ValueError("--rank is required")
    return ModelConfig(
        rank=args.rank,
        lam=args.lam,
        mu=args.mu,
        max_iters=args.max_iters,
        rng_seed=args.rng_seed,
        eps=args.eps,
        tol=args.tol,
    )


def run_factorize(args) -> int:
    corpus = load_corpus(args.corpus_file)
    config = _model_config(args)
    if config.lam > 0 and not args.seeds:
        raise ValueError("--lambda > 0 requires --seeds FILE")
    if config.mu > 0 and not args.labels:
        raise ValueError("--mu > 0 requires --labels FILE")

    seed_matrix = None
    if args.seeds:
        seed_matrix = build_seed_matrix(load_seed_words(args.seeds), corpus.vocab)
        for word in seed_matrix.dropped:
            print(f"warning: seed word '{word}' not in vocabulary", file=sys.stderr)

    labels = mask = None
    label_names = None
    if args.labels:
        assignments = load_label_assignments(args.labels)
        labels = build_label_matrix(assignments, corpus.doc_ids)
        label_names = labels.label_names
        mask = split_mask(
            corpus.n_docs, args.train_fraction, args.split_seed,
            len(labels.label_names),
        )

    result = fit(corpus, config, y=seed_matrix, z=labels, l=mask)
    save_result(result, args.out, doc_ids=corpus.doc_ids, label_names=label_names)
    if mask is not None:
        save_mask(mask, Path(args.out) / "mask.json")

    losses = result.final_losses
    print(
        "final losses: "
        f"total={losses['total']:.6g} reconstruction={losses['reconstruction']:.6g} "
        f"guiding={losses['guiding']:.6g} label={losses['label']:.6g}"
    )
    print(
        f"objective: first={result.objective_trace[0]:.6g} "
        f"last={result.objective_trace[-1]:.6g} iterations={result.iterations}"
    )
    print(f"wrote {args.out}")
    return EXIT_OK


def run_classify(args) -> int:
    result, manifest = load_result(args.result_dir)
    if result.c is None:
        raise ValueError("model was not label-supervised")
    doc_ids = manifest.get("doc_ids")
    if not doc_ids:
        raise ValueError(
            f"{args.result_dir}: manifest carries no document ids; "
            "re-run factorize on the corpus"
        )
    assignments = load_label_assignments(args.labels_file)
    labels = build_label_matrix(assignments, doc_ids)
    mask = load_mask(args.mask_file)
    p, n = labels.z.shape
    if mask.l.shape != (p, n):
        raise ValueError(
            f"mask is {mask.l.shape[0]}x{mask.l.shape[1]} but labels are {p}x{n}"
        )
    if result.h.shape[1] != n:
        raise ValueError(
            f"model has {result.h.shape[1]} document columns but labels have {n}"
        )

    ch = result.c @ result.h
    test = mask.test_ids
    truth = labels.z[:, test]
    counts = [int(v) for v in truth.sum(axis=0)]
    preds = threshold_predictions(ch[:, test], counts)
    macro, per_class = macro_f1(preds, truth)
    report = EvalReport(
        macro_f1=macro, per_class_f1=per_class, label_names=labels.label_names
    )
    if args.out:
        save_report(report, args.out)
        print(f"wrote {args.out}")
    print(f"macro_f1={macro:.6f} over {len(test)} test documents")
    for name, f1 in zip(labels.label_names, per_class):
        print(f"  f1[{name}]={f1:.6f}")
    return EXIT_OK


def run_coherence(args) -> int:
    result, _ = load_result(args.result_dir)
    corpus = load_corpus(args.corpus_file)
    if result.w.shape[0] != corpus.n_terms:
        raise ValueError(
            f"model has {result.w.shape[0]} term rows but corpus has "
            f"{corpus.n_terms}; corpora mismatch"
        )
    if args.n_top < 2:
        raise ValueError(f"--n-top must be >= 2, got {args.n_top}")
    token_sets = doc_token_sets(corpus)
    k = result.w.shape[1]
    topics = [top_keywords(result.w, corpus.vocab, t, args.n_top) for t in range(k)]
    per_topic = [coherence(kw, token_sets) for kw in topics]
    report = EvalReport(
        per_topic_coherence=per_topic,
        avg_coherence=avg_coherence(per_topic),
        topics=topics,
    )
    if args.out:
        save_report(report, args.out)
        print(f"wrote {args.out}")
    if args.table:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write(topics_table(report))
        print(f"wrote {args.table}")
    for i, c in enumerate(per_topic, start=1):
        print(f"topic {i}: coherence={c:.3f} keywords={' '.join(topics[i - 1][:10])}")
    print(f"avg_coherence={report.avg_coherence:.3f}")
    return EXIT_OK


# --- sweep ------------------------------------------------------------------

@dataclass
class SweepSpec:
    """Grid axes and trial plan for a sweep run.

    Trial ``t`` derives its split and initialization seed as
    ``base_rng_seed + t``, so any cell can be reproduced in isolation.
    """

    lambda_grid: list[float]
    mu_grid: list[float]
    ranks: list[int]
    trials: int
    base_rng_seed: int
    train_fraction: float
    metric: str

    def __post_init__(self):
        if not self.ranks or not self.lambda_grid or not self.mu_grid:
            raise ValueError(
                "--ranks, --lambda-grid, and --mu-grid must be non-empty"
            )
        if any(v < 0 for v in self.lambda_grid + self.mu_grid):
            raise ValueError("grid values must be >= 0")
        if any(r < 1 for r in self.ranks):
            raise ValueError("ranks must be >= 1")
        if self.trials < 1:
            raise ValueError(f"--trials must be >= 1, got {self.trials}")
        if self.metric not in ("macro_f1", "avg_coherence"):
            raise ValueError(f"unknown metric '{self.metric}'")

    def cells(self):
        return [
            (rank, lam, mu, trial)
            for rank in sorted(self.ranks)
            for lam in sorted(self.lambda_grid)
            for mu in sorted(self.mu_grid)
            for trial in range(self.trials)
        ]


_WORKER_PAYLOAD = {}


def _sweep_init(payload):
    _WORKER_PAYLOAD["payload"] = payload


def _sweep_run_task(task):
    return _sweep_eval(_WORKER_PAYLOAD["payload"], task)


def _sweep_eval(payload, task):
    """Evaluate one (rank, lambda, mu, trial) cell; returns its CSV row tuple."""
    rank, lam, mu, trial = task
    try:
        seed = payload["base_seed"] + trial
        n = payload["x"].shape[1]
        mask = split_mask(n, payload["train_fraction"], seed, payload["n_classes"])
        config = ModelConfig(
            rank=rank,
            lam=lam,
            mu=mu,
            max_iters=payload["max_iters"],
            rng_seed=seed,
            eps=payload["eps"],
            tol=payload["tol"],
        )
        result = fit(payload["x"], config, y=payload["y"], z=payload["z"], l=mask)
        if payload["metric"] == "macro_f1":
            ch = result.c @ result.h
            test = mask.test_ids
            truth = payload["z"][:, test]
            counts = [int(v) for v in truth.sum(axis=0)]
            preds = threshold_predictions(ch[:, test], counts)
            value, _ = macro_f1(preds, truth)
        else:
            vocab = Vocabulary(payload["vocab_terms"])
            topics = [
                top_keywords(result.w, vocab, t, payload["n_top"])
                for t in range(rank)
            ]
            value = avg_coherence(
                [coherence(kw, payload["token_sets"]) for kw in topics]
            )
    except (ValueError, FactorizationError) as exc:
        raise type(exc)(
            f"sweep cell (rank={rank}, lambda={lam}, mu={mu}, trial={trial}): {exc}"
        ) from None
    return rank, lam, mu, trial, value


def run_sweep(args) -> int:
    spec = SweepSpec(
        lambda_grid=args.lambda_grid or [],
        mu_grid=args.mu_grid or [],
        ranks=args.ranks or [],
        trials=args.trials,
        base_rng_seed=args.base_seed,
        train_fraction=args.train_fraction,
        metric=args.metric,
    )
    corpus = load_corpus(args.corpus_file)
    seeds = build_seed_matrix(load_seed_words(args.seeds_file), corpus.vocab)
    assignments = load_label_assignments(args.labels_file)
    labels = build_label_matrix(assignments, corpus.doc_ids)
    payload = {
        "x": corpus.x,
        "y": seeds.y,
        "z": labels.z,
        "n_classes": len(labels.label_names),
        "vocab_terms": corpus.vocab.terms,
        "token_sets": doc_token_sets(corpus),
        "train_fraction": spec.train_fraction,
        "base_seed": spec.base_rng_seed,
        "metric": spec.metric,
        "n_top": args.n_top,
        "max_iters": args.max_iters,
        "eps": args.eps,
        "tol": args.tol,
    }
    tasks = spec.cells()
    if args.jobs > 1:
        with ProcessPoolExecutor(
            max_workers=args.jobs, initializer=_sweep_init, initargs=(payload,)
        ) as pool:
            rows = list(pool.map(_sweep_run_task, tasks))
    else:
        rows = [_sweep_eval(payload, task) for task in tasks]
    # The collector owns the output order regardless of scheduling.
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))

    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("rank,lambda,mu,trial,metric_value\n")
        for rank, lam, mu, trial, value in rows:
            fh.write(f"{rank},{lam!r},{mu!r},{trial},{value!r}\n")
    print(f"wrote {args.out} ({len(rows)} rows)")

    means: dict[tuple, list[float]] = {}
    for rank, lam, mu, _, value in rows:
        means.setdefault((rank, lam, mu), []).append(value)
    out_mean = args.out_mean or str(Path(args.out).with_suffix(".mean.csv"))
    with open(out_mean, "w", encoding="utf-8") as fh:
        fh.write("rank,lambda,mu,mean_metric_value\n")
        for (rank, lam, mu), values in sorted(means.items()):
            fh.write(f"{rank},{lam!r},{mu!r},{sum(values) / len(values)!r}\n")
    print(f"wrote {out_mean} ({len(means)} cells)")

    if args.best_by_lambda:
        best: dict[tuple, tuple] = {}
        for (rank, lam, mu), values in sorted(means.items()):
            mean = sum(values) / len(values)
            key = (rank, lam)
            # Strict > keeps the smallest mu on ties.
            if key not in best or mean > best[key][1]:
                best[key] = (mu, mean)
        with open(args.best_by_lambda, "w", encoding="utf-8") as fh:
            fh.write("rank,lambda,best_mu,mean_metric_value\n")
            for (rank, lam), (mu, mean) in sorted(best.items()):
                fh.write(f"{rank},{lam!r},{mu!r},{mean!r}\n")
        print(f"wrote {args.best_by_lambda}")
    return EXIT_OK


# --- plot-heatmap -----------------------------------------------------------

def _heat_color(t: float) -> str:
    """Linear white-to-blue ramp, t in [0, 1]."""
    lo, hi = (247, 251, 255), (8, 48, 107)
    r, g, b = (round(l + (h - l) * t) for l, h in zip(lo, hi))
    return f"#{r:02x}{g:02x}{b:02x}"


def run_plot_heatmap(args) -> int:
    rows = []
    with open(args.mean_csv, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "rank,lambda,mu,mean_metric_value":
            raise ValueError(f"{args.mean_csv}: not a sweep mean CSV")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 4:
                raise ValueError(f"{args.mean_csv}:{lineno}: expected 4 fields")
            rows.append((int(fields[0]), float(fields[1]), float(fields[2]),
                         float(fields[3])))
    if not rows:
        raise ValueError(f"{args.mean_csv}: no data rows")
    ranks = sorted({r[0] for r in rows})
    rank = args.rank if args.rank is not None else ranks[0]
    cells = {(lam, mu): v for rk, lam, mu, v in rows if rk == rank}
    if not cells:
        raise ValueError(f"rank {rank} not present in {args.mean_csv} "
                         f"(available: {ranks})")
    lams = sorted({lam for lam, _ in cells})
    mus = sorted({mu for _, mu in cells})
    vmin = min(cells.values())
    vmax = max(cells.values())
    span = vmax - vmin

    cell, left, top = 56, 86, 46
    width = left + cell * len(mus) + 20
    height = top + cell * len(lams) + 40
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="11">',
        f'<text x="{left}" y="18">mean metric by lambda (rows) and mu '
        f'(columns), rank {rank}</text>',
        f'<text x="{left}" y="34">linear color scale: {vmin:.6g} (light) to '
        f'{vmax:.6g} (dark)</text>',
    ]
    for col, mu in enumerate(mus):
        parts.append(
            f'<text x="{left + col * cell + 4}" y="{top - 6}">{mu:.6g}</text>'
        )
    for row, lam in enumerate(lams):
        y0 = top + row * cell
        parts.append(f'<text x="6" y="{y0 + cell // 2}">{lam:.6g}</text>')
        for col, mu in enumerate(mus):
            v = cells.get((lam, mu))
            x0 = left + col * cell
            if v is None:
                parts.append(
                    f'<rect x="{x0}" y="{y0}" width="{cell}" height="{cell}" '
                    f'fill="none" stroke="#999"/>'
                )
                continue
            t = 0.5 if span == 0 else (v - vmin) / span
            shade = _heat_color(t)
            text_fill = "#000000" if t < 0.6 else "#ffffff"
            parts.append(
                f'<rect x="{x0}" y="{y0}" width="{cell}" height="{cell}" '
                f'fill="{shade}" stroke="#555"/>'
            )
            parts.append(
                f'<text x="{x0 + 3}" y="{y0 + cell // 2 + 4}" '
                f'fill="{text_fill}">{v:.4g}</text>'
            )
    parts.append("</svg>")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
    print(f"wrote {args.out} ({len(lams)}x{len(mus)} cells)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and config handling
# ---------------------------------------------------------------------------

def _add_config_flag(sp):
    sp.add_argument(
        "--config",
        help="JSON file supplying any flag of this command; flags override it",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gssnmf",
        description=(
            "Topic factorization of text corpora with optional seed-word "
            "guidance and document-label supervision."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}

    sp = sub.add_parser("ingest", help="build a tf-idf corpus file from .txt files")
    sp.add_argument("corpus_dir")
    sp.add_argument("--out", required=True, help="corpus file to write")
    sp.add_argument("--max-df", type=float, default=1.0)
    sp.add_argument("--min-df", type=float, default=0.0)
    sp.add_argument("--max-features", type=int, default=None)
    sp.add_argument("--stopwords", help="stopword file (one token per line)")
    _add_config_flag(sp)
    sp.set_defaults(func=run_ingest)
    commands["ingest"] = sp

    sp = sub.add_parser("rank-scan", help="leading singular values of a corpus")
    sp.add_argument("corpus_file")
    sp.add_argument("--out", required=True, help="CSV of (index, singular value)")
    sp.add_argument("--top", type=int, default=20)
    _add_config_flag(sp)
    sp.set_defaults(func=run_rank_scan)
    commands["rank-scan"] = sp

    sp = sub.add_parser("factorize", help="run the multiplicative-update solver")
    sp.add_argument("corpus_file")
    sp.add_argument("--out", required=True, help="result directory to write")
    sp.add_argument("--rank", type=int, default=None)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0,
                    help="seed-guidance weight")
    sp.add_argument("--mu", type=float, default=0.0, help="label-supervision weight")
    sp.add_argument("--max-iters", type=int, default=200)
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.add_argument("--tol", type=float, default=0.0,
                    help="relative objective-change early stop; 0 disables")
    sp.add_argument("--seeds", help="seed word file")
    sp.add_argument("--labels", help="label assignments CSV")
    sp.add_argument("--train-fraction", type=float, default=0.7)
    sp.add_argument("--split-seed", type=int, default=0)
    _add_config_flag(sp)
    sp.set_defaults(func=run_factorize)
    commands["factorize"] = sp

    sp = sub.add_parser("classify", help="score label reconstruction on test columns")
    sp.add_argument("result_dir")
    sp.add_argument("labels_file")
    sp.add_argument("mask_file")
    sp.add_argument("--out", help="report JSON to write")
    _add_config_flag(sp)
    sp.set_defaults(func=run_classify)
    commands["classify"] = sp

    sp = sub.add_parser("coherence", help="score topic keyword coherence")
    sp.add_argument("result_dir")
    sp.add_argument("corpus_file")
    sp.add_argument("--n-top", type=int, default=30,
                    help="keywords per topic entering the score")
    sp.add_argument("--out", help="report JSON to write")
    sp.add_argument("--table", help="plain-text topic table to write")
    _add_config_flag(sp)
    sp.set_defaults(func=run_coherence)
    commands["coherence"] = sp

    sp = sub.add_parser("sweep", help="grid of (rank, lambda, mu) runs over trials")
    sp.add_argument("corpus_file")
    sp.add_argument("labels_file")
    sp.add_argument("seeds_file")
    sp.add_argument("--out", required=True, help="long-form CSV to write")
    sp.add_argument("--out-mean", default=None,
                    help="mean-aggregated CSV (default: <out>.mean.csv)")
    sp.add_argument("--best-by-lambda", default=None,
                    help="optional per-lambda best-mu CSV")
    sp.add_argument("--ranks", type=_int_list, default=None)
    sp.add_argument("--lambda-grid", dest="lambda_grid", type=_float_list,
                    default=None)
    sp.add_argument("--mu-grid", dest="mu_grid", type=_float_list, default=None)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--base-seed", type=int, default=0,
                    help="trial t uses seed base+t for its split and init")
    sp.add_argument("--train-fraction", type=float, default=0.7)
    sp.add_argument("--metric", choices=("macro_f1", "avg_coherence"),
                    default="macro_f1")
    sp.add_argument("--n-top", type=int, default=30)
    sp.add_argument("--max-iters", type=int, default=200)
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.add_argument("--tol", type=float, default=0.0)
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker processes; output order is identical for any value")
    _add_config_flag(sp)
    sp.set_defaults(func=run_sweep)
    commands["sweep"] = sp

    sp = sub.add_parser("plot-heatmap", help="SVG heatmap from a sweep mean CSV")
    sp.add_argument("mean_csv")
    sp.add_argument("--out", required=True, help="SVG file to write")
    sp.add_argument("--rank", type=int, default=None,
                    help="rank slice to plot (default: smallest present)")
    _add_config_flag(sp)
    sp.set_defaults(func=run_plot_heatmap)
    commands["plot-heatmap"] = sp

    return parser, commands


def _apply_config(argv, commands) -> None:
    """Install config-file values as subcommand defaults before parsing."""
    cmd = next((a for a in argv if not a.startswith("-")), None)
    if cmd not in commands:
        return
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    with open(known.config, "r", encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"{known.config}:{exc.lineno}: invalid config: {exc.msg}"
            ) from None
    if not isinstance(cfg, dict):
        raise ValueError(f"{known.config}: config must be a JSON object")
    sp = commands[cmd]
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest == "lambda":
            dest = "lam"
        if dest not in actions or dest in ("help", "config"):
            raise ValueError(f"unknown config key '{key}' for command '{cmd}'")
        action = actions[dest]
        try:
            if action.type is not None and value is not None:
                if isinstance(value, list) and action.type not in (_int_list,
                                                                   _float_list):
                    raise ValueError("expected a scalar value")
                value = action.type(value)
        except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
            raise ValueError(f"config key '{key}': {exc}") from None
        defaults[dest] = value
    sp.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, commands = build_parser()
    try:
        _apply_config(argv, commands)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FactorizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
