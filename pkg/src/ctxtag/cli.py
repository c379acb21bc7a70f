"""Command line entry points: ctxtag index | recommend | eval.

Exit codes: 0 success, 1 partial (some videos skipped), 2 fatal input error.
Flags beat config file values, which beat defaults. Output files are byte
identical across reruns of the same inputs, including with --workers > 1
(results are written in input order regardless of completion order).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .corpus import (
    FormatError,
    Gazetteer,
    Lexicon,
    Video,
    load_documents,
    load_gazetteer,
    load_lexicon,
    load_videos,
)
from .evaluate import TAG_SOURCES, evaluate_source, split_videos
from .graph import build_context, build_graph, significance
from .query import QueryError, construct_query
from .recommend import Recommendation, load_recommendations, recommend, save_recommendations
from .retrieval import (
    OfflineIndex,
    RemoteBackend,
    SearchBackend,
    index_documents,
    same_context_filter,
    search,
)

log = logging.getLogger("ctxtag")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_FATAL = 2


@dataclass
class PipelineConfig:
    videos: str | None = None
    corpus: str | None = None
    lexicon: str | None = None
    gazetteer: str | None = None
    index: str | None = None
    recommendations: str | None = None
    output_dir: str = "."
    alpha: float = 0.85
    tol: float = 1e-10
    max_iter: int = 200
    k: int = 10
    min_entities: int = 3
    top_results: int = 10
    exclude_query_entities: bool = True
    backend: str = "offline"
    remote_url: str | None = None
    workers: int = 1
    train_epochs: int = 300
    learning_rate: float = 0.5

    def validate(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be strictly between 0 and 1")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.min_entities < 1:
            raise ValueError("min_entities must be at least 1")
        if self.top_results < 1:
            raise ValueError("top_results must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.backend not in ("offline", "remote"):
            raise ValueError(f"unknown backend '{self.backend}'")
        if self.train_epochs < 1:
            raise ValueError("train_epochs must be at least 1")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")


_CONFIG_FIELDS = {field.name for field in dataclasses.fields(PipelineConfig)}


def load_config_file(path: str | Path) -> dict:
    values = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(values, dict):
        raise ValueError("config file must hold a JSON object")
    for key in values:
        if key not in _CONFIG_FIELDS:
            raise ValueError(f"unknown config key '{key}'")
    return values


def build_config(args: argparse.Namespace) -> PipelineConfig:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for name in _CONFIG_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    config = PipelineConfig(**values)
    config.validate()
    return config


@dataclass(frozen=True)
class VideoRun:
    video_id: str
    status: str  # ok | no_query | failed
    query_forms: tuple[str, ...] = ()
    resources_kept: int = 0
    recommendation: Recommendation | None = None
    error: str = ""


def process_video(
    video: Video,
    related_lookup: Mapping[str, Video],
    backend: SearchBackend,
    gazetteer: Gazetteer,
    lexicon: Lexicon,
    config: PipelineConfig,
) -> VideoRun:
    """Run the per-video pipeline; failures come back as a status, not a raise."""
    try:
        related = [
            related_lookup[rid]
            for rid in video.related_ids
            if rid in related_lookup and rid != video.id
        ]
        query = construct_query(video, related, gazetteer, lexicon, config.min_entities)
        results = search(backend, query, config.top_results)
        resources = same_context_filter(results, query)
        context = build_context(resources, gazetteer, lexicon)
        graph = build_graph(context)
        scores = None
        if graph.n:
            scores = significance(graph, config.alpha, config.tol, config.max_iter)
        recommendation = recommend(
            scores,
            graph,
            video,
            config.k,
            gazetteer,
            lexicon,
            query,
            config.exclude_query_entities,
        )
    except QueryError:
        return VideoRun(video.id, "no_query")
    except Exception as exc:  # per-video isolation: one bad video never kills a run
        return VideoRun(video.id, "failed", error=str(exc))
    return VideoRun(
        video.id, "ok", query.folded_forms(), len(resources), recommendation
    )


def _build_backend(config: PipelineConfig) -> SearchBackend:
    if config.backend == "remote":
        if not config.remote_url:
            raise ValueError("remote backend requires remote_url")
        return RemoteBackend(config.remote_url)
    index_path = Path(config.index) if config.index else Path(config.output_dir) / "index.json"
    if index_path.exists():
        return OfflineIndex.load(index_path)
    if config.corpus:
        return index_documents(load_documents(config.corpus))
    raise ValueError(f"no index at {index_path} and no corpus to build one from")


def cmd_index(config: PipelineConfig) -> int:
    if not config.corpus:
        log.error("index requires --corpus")
        return EXIT_FATAL
    try:
        documents = load_documents(config.corpus)
        index = index_documents(documents)
    except (FormatError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    index_path = Path(config.index) if config.index else output_dir / "index.json"
    index.save(index_path)
    log.info("indexed %d documents into %s", len(index), index_path)
    return EXIT_OK


def cmd_recommend(config: PipelineConfig) -> int:
    if not config.videos or not config.lexicon or not config.gazetteer:
        log.error("recommend requires --videos, --lexicon and --gazetteer")
        return EXIT_FATAL
    try:
        videos = load_videos(config.videos)
        lexicon = load_lexicon(config.lexicon)
        gazetteer = load_gazetteer(config.gazetteer)
        backend = _build_backend(config)
    except (FormatError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    if not videos:
        log.error("no videos")
        return EXIT_FATAL
    lookup = {video.id: video for video in videos}

    def job(video: Video) -> VideoRun:
        return process_video(video, lookup, backend, gazetteer, lexicon, config)

    if config.workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.workers) as pool:
            runs = list(pool.map(job, videos))
    else:
        runs = [job(video) for video in videos]

    for run in runs:
        if run.status == "ok":
            log.info(
                "video=%s status=ok query=%s resources=%d recommended=%d",
                run.video_id,
                ",".join(run.query_forms),
                run.resources_kept,
                len(run.recommendation.items),
            )
        else:
            log.warning("video=%s status=%s %s", run.video_id, run.status, run.error)

    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    processed = [run for run in runs if run.status == "ok"]
    save_recommendations(
        [run.recommendation for run in processed], output_dir / "recommendations.jsonl"
    )
    mean_kept = (
        sum(run.resources_kept for run in processed) / len(processed) if processed else 0.0
    )
    summary = {
        "videos_total": len(runs),
        "videos_processed": len(processed),
        "videos_no_query": sum(1 for run in runs if run.status == "no_query"),
        "videos_failed": sum(1 for run in runs if run.status == "failed"),
        "mean_resources_kept": mean_kept,
    }
    (output_dir / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    log.info(
        "processed %d/%d videos, mean resources kept %.3f",
        len(processed),
        len(runs),
        mean_kept,
    )
    if not processed:
        return EXIT_FATAL
    return EXIT_OK if len(processed) == len(runs) else EXIT_PARTIAL


def _format_ap(value: float | None) -> str:
    return f"{value:.4f}" if value is not None else "-"


def cmd_eval(config: PipelineConfig) -> int:
    if not config.videos:
        log.error("eval requires --videos")
        return EXIT_FATAL
    try:
        videos = load_videos(config.videos)
        recommendations = {}
        if config.recommendations:
            recommendations = {
                rec.video_id: rec for rec in load_recommendations(config.recommendations)
            }
    except (FormatError, OSError, ValueError, KeyError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    unlabeled = sum(1 for video in videos if video.category is None)
    if unlabeled:
        log.error("missing labels on %d videos", unlabeled)
        return EXIT_FATAL
    categories = sorted({video.category for video in videos})
    if len(categories) < 2:
        log.error("need at least 2 categories, found %d", len(categories))
        return EXIT_FATAL
    train_split, test_split = split_videos(videos)
    if not train_split or not test_split:
        log.error("train/test split left one side empty")
        return EXIT_FATAL
    report = {}
    try:
        for source in TAG_SOURCES:
            report[source] = evaluate_source(
                train_split,
                test_split,
                source,
                recommendations,
                categories,
                config.train_epochs,
                config.learning_rate,
            )
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_FATAL

    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    (output_dir / "report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    width = max(len(category) for category in categories + ["category"])
    print(f"{'category':<{width}}  {'AP(raw)':>8}  {'AP(enriched)':>12}")
    for category in categories:
        raw_ap = report["raw"]["average_precision"].get(category)
        enriched_ap = report["enriched"]["average_precision"].get(category)
        print(
            f"{category:<{width}}  {_format_ap(raw_ap):>8}  {_format_ap(enriched_ap):>12}"
        )
    print(
        f"{'MAP':<{width}}  {report['raw']['map']:>8.4f}  {report['enriched']['map']:>12.4f}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; explicit flags win")
    common.add_argument("--output-dir", dest="output_dir", help="where outputs are written")
    common.add_argument("--alpha", type=float, help="damping factor (default 0.85)")
    common.add_argument("--tol", type=float, help="L1 convergence tolerance (default 1e-10)")
    common.add_argument("--max-iter", dest="max_iter", type=int, help="iteration cap (default 200)")
    common.add_argument("--k", type=int, help="recommendations per video (default 10)")
    common.add_argument(
        "--min-entities", dest="min_entities", type=int, help="minimum query entities (default 3)"
    )
    common.add_argument(
        "--top-results", dest="top_results", type=int, help="search results per query (default 10)"
    )
    common.add_argument("--backend", choices=("offline", "remote"), help="search backend")
    common.add_argument("--remote-url", dest="remote_url", help="remote backend endpoint")
    common.add_argument("--workers", type=int, help="parallel video workers (default 1)")
    common.add_argument(
        "--exclude-query-entities",
        dest="exclude_query_entities",
        action=argparse.BooleanOptionalAction,
        help="drop query entities from recommendations (default on)",
    )

    parser = argparse.ArgumentParser(prog="ctxtag", description=__doc__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_index = subparsers.add_parser("index", parents=[common], help="build the offline index")
    p_index.add_argument("--corpus", help="web document corpus (JSON lines)")
    p_index.add_argument("--index", help="index output path (default <output-dir>/index.json)")
    p_index.set_defaults(func=cmd_index)

    p_recommend = subparsers.add_parser(
        "recommend", parents=[common], help="recommend tags for videos"
    )
    p_recommend.add_argument("--videos", help="video records (JSON lines)")
    p_recommend.add_argument("--lexicon", help="word|pos|ne lexicon file")
    p_recommend.add_argument("--gazetteer", help="one surface form per line")
    p_recommend.add_argument("--index", help="offline index path")
    p_recommend.add_argument("--corpus", help="document corpus to index when no index exists")
    p_recommend.set_defaults(func=cmd_recommend)

    p_eval = subparsers.add_parser(
        "eval", parents=[common], help="compare raw vs enriched tag categorization"
    )
    p_eval.add_argument("--videos", help="labeled video records (JSON lines)")
    p_eval.add_argument("--recommendations", help="recommendations.jsonl from a recommend run")
    p_eval.add_argument("--train-epochs", dest="train_epochs", type=int)
    p_eval.add_argument("--learning-rate", dest="learning_rate", type=float)
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        config = build_config(args)
    except (ValueError, OSError, json.JSONDecodeError, TypeError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    return args.func(config)


if __name__ == "__main__":
    sys.exit(main())
