"""Command-line pipeline: normalize, pairs, score, histogram, trend,
taxonomy, ensemble, correlate, synth.

Exit codes: 0 success, 1 invalid input or usage, 2 internal error. All data
goes to the requested files or stdout; diagnostics go to stderr. Identical
inputs, flags and seed produce byte-identical outputs, whatever ``--jobs``.

The ``RANKROBUST_CONFIG`` environment variable supplies a default
normalization config file for commands that accept ``--config``.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from datetime import date
from pathlib import Path

from . import ensemble as ensemble_mod
from . import ingest, pairs as pairs_mod, report as report_mod, synth, taxonomy
from .normalize import NormalizationConfig, default_config, load_config, normalize_query

_SCORE_CHUNK = 256


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; this toolkit reserves 2 for crashes."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _resolve_config(args) -> NormalizationConfig:
    path = getattr(args, "config", None) or os.environ.get("RANKROBUST_CONFIG")
    return load_config(path) if path else default_config()


def _add_config_flag(parser) -> None:
    parser.add_argument("--config", help="normalization config file")


def _add_filter_flags(parser) -> None:
    parser.add_argument("--locale", action="append", default=None,
                        help="allowed locale (repeatable; default en-US)")
    parser.add_argument("--bottom-cut", type=float, default=ingest.DEFAULT_BOTTOM_CUT,
                        help="fraction of lowest-frequency records to drop")
    parser.add_argument("--min-len", type=int, default=ingest.DEFAULT_MIN_LEN,
                        help="required ranking length (lists truncate to it)")
    parser.add_argument("--top-k", type=int, default=ingest.DEFAULT_TOP_K_PER_GROUP,
                        help="most-searched queries kept per key group")


def _dataset_for(args, cfg: NormalizationConfig) -> ingest.WeeklyDataset:
    week = date.fromisoformat(args.week) if args.week else None
    if args.dataset:
        if week is None:
            datasets = ingest.load_datasets(args.dataset)
            if len(datasets) != 1:
                raise ValueError("--week is required for a multi-week dataset")
            return datasets[0]
        return ingest.load_dataset_week(args.dataset, week)
    parsed = ingest.parse_log(args.log, strict=args.strict)
    if parsed.malformed:
        _log(f"skipped {len(parsed.malformed)} malformed line(s)")
    byweek = ingest.split_weeks(parsed.records)
    if week is None:
        if len(byweek) != 1:
            raise ValueError("--week is required for a multi-week log")
        week = next(iter(byweek))
    if week not in byweek:
        raise ValueError(f"no records for week {week.isoformat()}")
    return ingest.apply_filters(
        byweek[week],
        locale_allow=frozenset(args.locale or ingest.DEFAULT_LOCALES),
        bottom_cut=args.bottom_cut,
        min_len=args.min_len,
        top_k_queries_per_tps=args.top_k,
        cfg=cfg,
    )


def _open_out(path):
    if path and path != "-":
        return open(path, "w", encoding="utf-8", newline="")
    return sys.stdout


def _emit(text: str, path) -> None:
    if path and path != "-":
        Path(path).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _cmd_normalize(args) -> int:
    cfg = _resolve_config(args)
    source = sys.stdin if args.infile == "-" else open(args.infile, encoding="utf-8")
    out = _open_out(args.out)
    try:
        for line in source:
            query = line.rstrip("\n")
            if not query.strip():
                continue
            out.write(f"{query}\t{normalize_query(query, cfg).key}\n")
    finally:
        if source is not sys.stdin:
            source.close()
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_pairs(args) -> int:
    cfg = _resolve_config(args)
    if args.sim_table:
        table = pairs_mod.SimScoreTable.load(args.sim_table)
        week = date.fromisoformat(args.week) if args.week else None
        generated = pairs_mod.topk_pairs(table, k=args.topk, min_score=args.min_score,
                                         week=week)
    else:
        if not (args.dataset or args.log):
            raise ValueError("need --dataset, --log or --sim-table")
        ds = _dataset_for(args, cfg)
        generated = pairs_mod.tps_pairs(ds, cfg)
    pairs_mod.write_pairs(generated, args.out)
    _log(f"{len(generated)} pair(s) written to {args.out}")
    return 0


# Worker state for --jobs: each process loads the dataset once.
_WORKER_DS = None


def _score_init(dataset_dir: str | None, log_path: str | None, week_iso: str | None,
                locales: tuple[str, ...], bottom_cut: float, min_len: int,
                top_k: int, config_path: str | None, strict: bool) -> None:
    global _WORKER_DS
    ns = argparse.Namespace(
        dataset=dataset_dir, log=log_path, week=week_iso,
        locale=list(locales) or None, bottom_cut=bottom_cut, min_len=min_len,
        top_k=top_k, strict=strict,
    )
    cfg = load_config(config_path) if config_path else default_config()
    _WORKER_DS = _dataset_for(ns, cfg)


def _score_chunk(chunk: list[pairs_mod.QueryPair]) -> tuple[list[str], int]:
    results, skipped = pairs_mod.evaluate_pairs(chunk, _WORKER_DS)
    lines = []
    for pair, res in results:
        week = pair.week.isoformat() if pair.week else ""
        score = "" if pair.sim_score is None else f"{pair.sim_score:.12g}"
        lines.append(
            f"{pair.q1}\t{pair.q2}\t{pair.source}\t{score}\t{week}"
            f"\t{res.raw:.12g}\t{res.normalized:.12g}\t{res.similarity:.12g}\n"
        )
    return lines, skipped


def _cmd_score(args) -> int:
    if not (args.dataset or args.log):
        raise ValueError("need --dataset or --log")
    config_path = args.config or os.environ.get("RANKROBUST_CONFIG")
    all_pairs = sorted(pairs_mod.read_pairs(args.pairs), key=lambda p: (p.q1, p.q2))
    chunks = [all_pairs[i:i + _SCORE_CHUNK] for i in range(0, len(all_pairs), _SCORE_CHUNK)]
    init_args = (
        args.dataset, args.log, args.week,
        tuple(args.locale or ()), args.bottom_cut, args.min_len, args.top_k,
        config_path, args.strict,
    )
    skipped = 0
    with _open_out(args.out) as out:
        if args.jobs > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(
                max_workers=args.jobs, initializer=_score_init, initargs=init_args
            ) as pool:
                for lines, chunk_skipped in pool.map(_score_chunk, chunks):
                    out.writelines(lines)
                    skipped += chunk_skipped
        else:
            _score_init(*init_args)
            for chunk in chunks:
                lines, chunk_skipped = _score_chunk(chunk)
                out.writelines(lines)
                skipped += chunk_skipped
    if skipped:
        _log(f"skipped {skipped} pair(s) missing from the dataset")
    return 0


def _read_normalized_column(path) -> list[float]:
    return [row.normalized for row in pairs_mod.read_evaluations(path)]


def _cmd_histogram(args) -> int:
    rep = report_mod.histogram(_read_normalized_column(args.infile), args.bin)
    _emit(rep.to_json() if args.format == "json" else rep.to_csv(), args.out)
    return 0


def _cmd_trend(args) -> int:
    reports = [
        report_mod.histogram(_read_normalized_column(path), args.bin)
        for path in args.infiles
    ]
    rep = report_mod.trend(reports)
    _emit(rep.to_json() if args.format == "json" else rep.to_csv(), args.out)
    return 0


def _cmd_taxonomy(args) -> int:
    cfg = _resolve_config(args)
    loaded = pairs_mod.read_pairs(args.pairs)
    rep = taxonomy.classify_corpus(loaded, cfg)
    _emit(rep.to_csv(), args.out)
    if args.overflow:
        with open(args.overflow, "w", encoding="utf-8", newline="") as fh:
            for q1, q2 in rep.overflow:
                fh.write(f"{q1}\t{q2}\n")
    if rep.overflow:
        _log(f"{len(rep.overflow)} unclassified pair(s) for manual triage")
    return 0


def _cmd_ensemble(args) -> int:
    cfg = _resolve_config(args)
    parsed = ingest.parse_log(args.log, strict=args.strict)
    if parsed.malformed:
        _log(f"skipped {len(parsed.malformed)} malformed line(s)")
    byweek = ingest.split_weeks(parsed.records)
    datasets = [
        ingest.apply_filters(
            recs,
            locale_allow=frozenset(args.locale or ingest.DEFAULT_LOCALES),
            bottom_cut=args.bottom_cut,
            min_len=args.min_len,
            top_k_queries_per_tps=args.top_k,
            cfg=cfg,
        )
        for recs in byweek.values()
    ]
    single_week = (
        date.fromisoformat(args.single_week) if args.single_week else min(byweek)
    )
    single_ds = next((d for d in datasets if d.week == single_week), None)
    if single_ds is None:
        raise ValueError(f"no records for week {single_week.isoformat()}")
    loaded = (
        pairs_mod.read_pairs(args.pairs) if args.pairs
        else pairs_mod.tps_pairs(single_ds, cfg)
    )
    series = {}
    for query in single_ds.rankings:
        s = ensemble_mod.series_from_datasets(datasets, query)
        if s is not None:
            series[query] = s
    cmp = ensemble_mod.smoothed_vs_single(loaded, series, single_week)
    _emit(cmp.to_csv(), args.out)
    if cmp.skipped:
        _log(f"skipped {cmp.skipped} pair(s) without full coverage")
    return 0


def _cmd_correlate(args) -> int:
    rows = pairs_mod.read_evaluations(args.infile)
    data = [
        (row.pair.sim_score, row.normalized)
        for row in rows
        if row.pair.sim_score is not None
    ]
    rep = report_mod.correlate(data)
    _emit(rep.to_json() if args.format == "json" else rep.to_csv(), args.out)
    if not rep.defined:
        _log("correlation undefined (degenerate input)")
    return 0


def _cmd_synth(args) -> int:
    log_text, truth_text = synth.gen_log(
        args.queries, args.weeks, noise=args.noise, seed=args.seed,
        list_len=args.list_len,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "log.tsv").write_text(log_text, encoding="utf-8", newline="")
    (out / "truth.tsv").write_text(truth_text, encoding="utf-8", newline="")
    _log(f"wrote {out / 'log.tsv'} and {out / 'truth.tsv'}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="rankrobust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("normalize", help="emit query<TAB>key for a list of queries")
    p.add_argument("--in", dest="infile", required=True, help="query file, '-' for stdin")
    p.add_argument("--out", default="-")
    _add_config_flag(p)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("pairs", help="generate semantically identical query pairs")
    p.add_argument("--dataset", help="prepared dataset directory")
    p.add_argument("--log", help="raw log file (filters applied)")
    p.add_argument("--sim-table", help="similarity-score TSV (query_a, query_b, score)")
    p.add_argument("--week", help="ISO week start to select")
    p.add_argument("--topk", type=int, default=3, help="partners per query for --sim-table")
    p.add_argument("--min-score", type=float, default=0.0)
    p.add_argument("--strict", action="store_true", help="fail on malformed log lines")
    p.add_argument("--out", required=True)
    _add_filter_flags(p)
    _add_config_flag(p)
    p.set_defaults(func=_cmd_pairs)

    p = sub.add_parser("score", help="evaluate pair distances against a dataset")
    p.add_argument("--pairs", required=True)
    p.add_argument("--dataset")
    p.add_argument("--log")
    p.add_argument("--week")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", required=True)
    _add_filter_flags(p)
    _add_config_flag(p)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("histogram", help="bin normalized distances from a score file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--bin", type=float, default=report_mod.DEFAULT_BIN_WIDTH)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_histogram)

    p = sub.add_parser("trend", help="per-bin mean/STD across weekly score files")
    p.add_argument("--in", dest="infiles", nargs="+", required=True)
    p.add_argument("--bin", type=float, default=report_mod.DEFAULT_BIN_WIDTH)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_trend)

    p = sub.add_parser("taxonomy", help="classify pairs into the eight categories")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--overflow", help="file for unclassified pairs")
    _add_config_flag(p)
    p.set_defaults(func=_cmd_taxonomy)

    p = sub.add_parser("ensemble", help="compare smoothed vs single-week distances")
    p.add_argument("--log", required=True, help="multi-week raw log")
    p.add_argument("--pairs", help="pair TSV (default: key groups of the single week)")
    p.add_argument("--single-week", help="ISO week start (default: earliest)")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", default="-")
    _add_filter_flags(p)
    _add_config_flag(p)
    p.set_defaults(func=_cmd_ensemble)

    p = sub.add_parser("correlate", help="Pearson r between scores and distances")
    p.add_argument("--in", dest="infile", required=True, help="score file with SIM pairs")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("synth", help="generate a synthetic log plus ground truth")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--queries", type=int, required=True)
    p.add_argument("--weeks", type=int, required=True)
    p.add_argument("--noise", choices=synth.LOG_NOISE_KINDS, default="identity")
    p.add_argument("--list-len", type=int, default=20)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_synth)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return 1
    except Exception:
        traceback.print_exc()
        return 2


def main() -> None:
    sys.exit(run())
