"""Command-line entry point exposing every pipeline stage.

Stage artifacts on disk are the inter-stage contract; re-running a stage on
unchanged inputs rewrites identical bytes. All randomness flows from the
single --seed flag, and timestamps embedded in artifacts derive from
SOURCE_DATE_EPOCH (default 0) so runs are reproducible.

Exit codes: 0 success, 1 validation/input error, 2 backend failure. Errors
are machine-readable JSON {"error", "detail"} on stderr.
"""

from __future__ import annotations

import json
import os
import shlex
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import click

from . import __version__, annotate, extract, ingest, relevance, sampling, stats, themes
from .errors import BackendUnavailable, MissingFrames, VidreqError
from .model import (
    CorpusManifest,
    TextBundle,
    VideoRecord,
    dump_bundle,
    load_bundle,
    load_manifest,
)
from .relevance import DatasetVariant, Label, PlatformScope, Variant

CLASSIFIER_URL_ENV = "VIDREQ_CLASSIFIER_URL"
EMBEDDER_URL_ENV = "VIDREQ_EMBEDDER_URL"

_VARIANTS = {
    "audio": Variant.AUDIO_ONLY,
    "visual": Variant.VISUAL_ONLY,
    "both": Variant.AUDIO_VISUAL,
}
_SCOPES = {
    "tiktok": PlatformScope.TIKTOK,
    "youtube": PlatformScope.YOUTUBE,
    "both": PlatformScope.BOTH,
}


def _run_timestamp() -> str:
    epoch = int(os.environ.get("SOURCE_DATE_EPOCH", "0"))
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _slug(text: str) -> str:
    out = "".join(c if c.isalnum() or c in "._-" else "-" for c in text)
    return out.strip("-") or "unnamed"


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


@dataclass
class Workspace:
    corpus_path: Path
    out: Path
    frames_dir: Path

    @property
    def candidates_dir(self) -> Path:
        return self.out / "candidates"

    @property
    def bundles_dir(self) -> Path:
        return self.out / "bundles"

    @property
    def models_dir(self) -> Path:
        return self.out / "models"

    @property
    def eval_dir(self) -> Path:
        return self.out / "eval"

    @property
    def themes_dir(self) -> Path:
        return self.out / "themes"

    @property
    def agreement_dir(self) -> Path:
        return self.out / "agreement"

    @property
    def labels_log(self) -> Path:
        return self.out / "labels.log.jsonl"

    @property
    def filter_report(self) -> Path:
        return self.out / "filter_report.json"

    @property
    def verdicts_path(self) -> Path:
        return self.out / "verdicts.jsonl"

    def manifest(self) -> CorpusManifest:
        if not self.corpus_path.is_file():
            raise VidreqError(f"corpus manifest not found: {self.corpus_path}")
        return load_manifest(self.corpus_path)

    def resolve_media(self, record: VideoRecord) -> VideoRecord:
        if record.media_path is None:
            return record
        path = Path(record.media_path)
        if not path.is_absolute():
            path = self.corpus_path.parent / path
        return VideoRecord(
            **{
                **{f: getattr(record, f) for f in (
                    "id", "platform", "product", "category", "title", "description",
                    "creator_handle", "is_official_account", "duration_s", "view_count",
                    "language", "extra",
                )},
                "media_path": str(path),
            }
        )

    def load_bundles(self) -> dict[str, TextBundle]:
        out: dict[str, TextBundle] = {}
        if self.bundles_dir.is_dir():
            for path in sorted(self.bundles_dir.glob("*.json")):
                bundle = load_bundle(path)
                out[bundle.record_id] = bundle
        return out

    def retained_records(self, manifest: CorpusManifest) -> list[VideoRecord]:
        """Records kept by the filter stage; all records if it has not run."""
        if self.filter_report.is_file():
            report = json.loads(self.filter_report.read_text())
            retained = set(report["retained"])
            return [r for r in manifest.records if r.id in retained]
        return list(manifest.records)


@dataclass
class SamplerSettings:
    """--platform-profile overrides for the sampler and OCR size gates."""

    config: sampling.SamplerConfig = field(default_factory=sampling.SamplerConfig)
    ocr_full_min_ratio: float = extract.FULL_FRAME_MIN_HEIGHT_RATIO
    ocr_supplement_min_ratio: float = extract.SUPPLEMENT_MIN_HEIGHT_RATIO

    @classmethod
    def from_profile(cls, profile_path: str | None) -> "SamplerSettings":
        settings = cls()
        if profile_path is None:
            return settings
        raw = json.loads(Path(profile_path).read_text())
        min_gap = dict(sampling.DEFAULT_MIN_GAP_S)
        for name, value in raw.get("min_gap_s", {}).items():
            min_gap[sampling.Platform(name)] = float(value)
        config = sampling.SamplerConfig(
            thresholds=tuple(raw.get("thresholds", sampling.DEFAULT_THRESHOLDS)),
            slice_length=int(raw.get("slice_length", sampling.DEFAULT_SLICE_LENGTH)),
            min_gap_s=min_gap,
            require_all_slices=bool(raw.get("require_all_slices", True)),
        )
        config.validate()
        settings.config = config
        settings.ocr_full_min_ratio = float(
            raw.get("ocr_full_min_ratio", extract.FULL_FRAME_MIN_HEIGHT_RATIO)
        )
        settings.ocr_supplement_min_ratio = float(
            raw.get("ocr_supplement_min_ratio", extract.SUPPLEMENT_MIN_HEIGHT_RATIO)
        )
        return settings


def _stub_command(module: str) -> list[str]:
    return [sys.executable, "-m", module]


# ---------------------------------------------------------------- stages


def _map_records(records, worker, jobs: int) -> list:
    """Apply `worker` per record, optionally in parallel; results keep
    record order so artifact bytes never depend on --jobs."""
    if jobs <= 1:
        return [worker(r) for r in records]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, records))


def stage_sample_frames(
    ws: Workspace, settings: SamplerSettings, jobs: int = 1
) -> dict[str, int]:
    manifest = ws.manifest()
    if not ws.frames_dir.is_dir():
        raise MissingFrames(f"frames directory not found: {ws.frames_dir}")
    ws.candidates_dir.mkdir(parents=True, exist_ok=True)

    def worker(record: VideoRecord) -> tuple[str, int] | None:
        record_frames = ws.frames_dir / record.id
        if not record_frames.is_dir():
            return None
        stream = sampling.load_frame_stream(record_frames, record.id)
        candidates = sampling.select_candidates(stream, settings.config)
        _write_text(
            ws.candidates_dir / f"{record.id}.json", sampling.candidates_to_json(candidates)
        )
        return record.id, len(candidates)

    results = _map_records(manifest.records, worker, jobs)
    return dict(r for r in results if r is not None)


def stage_extract_text(
    ws: Workspace,
    settings: SamplerSettings,
    asr_command: Sequence[str],
    ocr_command: Sequence[str],
    jobs: int = 1,
) -> int:
    manifest = ws.manifest()
    asr = extract.ExecutableAsr(asr_command)
    ocr = extract.ExecutableOcr(ocr_command)
    lexicon = _lexicon()
    assembled_at = _run_timestamp()
    ws.bundles_dir.mkdir(parents=True, exist_ok=True)

    def worker(record: VideoRecord) -> None:
        resolved = ws.resolve_media(record)
        transcript = None
        if resolved.media_path is not None:
            transcript = extract.transcribe(resolved, asr)
        candidates_path = ws.candidates_dir / f"{record.id}.json"
        candidates = (
            sampling.candidates_from_json(candidates_path.read_text())
            if candidates_path.is_file()
            else []
        )
        has_audio = transcript is not None and bool(transcript.text)
        visual = extract.extract_visual_text(
            record,
            candidates,
            ws.frames_dir / record.id,
            ocr,
            lexicon,
            has_audio_text=has_audio,
            full_ratio=settings.ocr_full_min_ratio,
            supplement_ratio=settings.ocr_supplement_min_ratio,
        )
        bundle = extract.assemble_bundle(record, transcript, visual, assembled_at)
        dump_bundle(bundle, ws.bundles_dir / f"{record.id}.json")

    _map_records(manifest.records, worker, jobs)
    return len(manifest.records)


_LEXICON = None


def _lexicon():
    global _LEXICON
    if _LEXICON is None:
        from .spelling import load_lexicon

        _LEXICON = load_lexicon()
    return _LEXICON


def stage_ingest(ws: Workspace, detector_command: Sequence[str] | None = None) -> ingest.FilterReport:
    manifest = ws.manifest()
    bundles = ws.load_bundles()
    detector = (
        ingest.external_detector(list(detector_command))
        if detector_command
        else ingest.detect_language
    )
    report = ingest.apply_filters(manifest, bundles, detector=detector)
    ws.out.mkdir(parents=True, exist_ok=True)
    ingest.dump_report(report, ws.filter_report)
    return report


def stage_kappa(ws: Workspace) -> dict[str, annotate.AgreementReport]:
    store = annotate.LabelStore(ws.labels_log)
    reports: dict[str, annotate.AgreementReport] = {}
    for session in store.sessions():
        if session.mode is not annotate.SessionMode.PAIR:
            continue
        try:
            report = store.agreement(session.session_id)
        except VidreqError:
            continue  # nothing labeled by both annotators yet
        reports[session.session_id] = report
        _write_json(
            ws.agreement_dir / f"{session.session_id}.json",
            {"session_id": session.session_id, **report.to_dict()},
        )
    if reports:
        # one kappa per session; the cross-session figure is their mean
        _write_json(
            ws.agreement_dir / "summary.json",
            {
                "sessions": {sid: r.kappa for sid, r in sorted(reports.items())},
                "mean_kappa": sum(r.kappa for r in reports.values()) / len(reports),
            },
        )
    return reports


def _ground_truth(ws: Workspace) -> list[relevance.LabeledExample]:
    if not ws.labels_log.is_file():
        raise VidreqError(f"labels log not found: {ws.labels_log}")
    store = annotate.LabelStore(ws.labels_log)
    return store.export_ground_truth()


def _model_path(ws: Workspace, dataset: DatasetVariant) -> Path:
    return ws.models_dir / f"{dataset.name}_ref.json"


def stage_train(ws: Workspace, dataset: DatasetVariant, seed: int) -> relevance.ReferenceModel:
    manifest = ws.manifest()
    labels = _ground_truth(ws)
    examples = relevance.build_dataset(labels, ws.load_bundles(), manifest.by_id(), dataset)
    train, _ = relevance.split_dataset(examples, seed)
    model = relevance.train_reference(train, seed)
    _write_text(_model_path(ws, dataset), model.to_json())
    return model


def _scorer(ws: Workspace, dataset: DatasetVariant) -> relevance.Scorer:
    url = os.environ.get(CLASSIFIER_URL_ENV)
    if url:
        client = relevance.HttpClassifier(url)
        client.check_health()
        return client
    path = _model_path(ws, dataset)
    if not path.is_file():
        raise VidreqError(
            f"no trained model at {path} and {CLASSIFIER_URL_ENV} is unset; run `train` first"
        )
    return relevance.ReferenceModel.from_json(path.read_text())


def stage_evaluate(ws: Workspace, dataset: DatasetVariant, seed: int) -> relevance.EvalReport:
    manifest = ws.manifest()
    labels = _ground_truth(ws)
    examples = relevance.build_dataset(labels, ws.load_bundles(), manifest.by_id(), dataset)
    _, test = relevance.split_dataset(examples, seed)
    scorer = _scorer(ws, dataset)
    report = relevance.evaluate_variant(scorer, test, dataset)
    _write_json(
        ws.eval_dir / f"{dataset.name}_{_slug(report.model_id)}.json", report.to_dict()
    )
    return report


def stage_classify(ws: Workspace, dataset: DatasetVariant) -> list[relevance.RelevanceVerdict]:
    manifest = ws.manifest()
    records = [r for r in ws.retained_records(manifest) if relevance.in_scope(r, dataset)]
    scorer = _scorer(ws, dataset)
    verdicts = relevance.classify_corpus(scorer, ws.load_bundles(), records, dataset)
    ws.out.mkdir(parents=True, exist_ok=True)
    relevance.write_verdicts(verdicts, ws.verdicts_path)
    return verdicts


def stage_cluster(
    ws: Workspace, dataset: DatasetVariant, seed: int, k_min: int, k_max: int
) -> dict:
    manifest = ws.manifest()
    if not ws.verdicts_path.is_file():
        raise VidreqError(f"no verdicts at {ws.verdicts_path}; run `classify` first")
    verdicts = relevance.read_verdicts(ws.verdicts_path)
    relevant_ids = {v.record_id for v in verdicts if v.label is Label.RELEVANT}
    bundles = ws.load_bundles()
    records = manifest.by_id()
    by_product: dict[str, list[str]] = {}
    for record_id in sorted(relevant_ids):
        record = records.get(record_id)
        if record is not None:
            by_product.setdefault(record.product, []).append(record_id)
    url = os.environ.get(EMBEDDER_URL_ENV)
    embedder = themes.HttpEmbedder(url) if url else None
    summary = {"products": [], "skipped": {}}
    ws.themes_dir.mkdir(parents=True, exist_ok=True)
    for product in sorted(by_product):
        ids = by_product[product]
        if len(ids) < 3:
            summary["skipped"][product] = f"only {len(ids)} relevant record(s)"
            continue
        texts = [
            relevance.assemble_text(
                bundles.get(rid) or relevance.empty_bundle(rid), records[rid], dataset
            )
            for rid in ids
        ]
        run, clusters = themes.cluster_product(
            product, ids, texts, seed, embedder=embedder, k_min=k_min, k_max=k_max
        )
        _write_json(
            ws.themes_dir / f"{_slug(product)}.json", themes.product_artifact(run, clusters)
        )
        summary["products"].append(product)
    _write_json(ws.themes_dir / "summary.json", summary)
    return summary


def stage_stats(ws: Workspace) -> list[stats.ContentStats]:
    manifest = ws.manifest()
    records = ws.retained_records(manifest)
    bundles = ws.load_bundles()
    bundles = {rid: b for rid, b in bundles.items() if rid in {r.id for r in records}}
    rows = stats.content_statistics(records, bundles)
    _write_json(ws.out / "stats.json", [r.to_dict() for r in rows])
    _write_text(ws.out / "stats.md", stats.render_stats_markdown(rows))
    return rows


def stage_report(ws: Workspace) -> dict:
    manifest = ws.manifest()
    records = manifest.by_id()
    runs, clusters = [], []
    if ws.themes_dir.is_dir():
        for path in sorted(ws.themes_dir.glob("*.json")):
            if path.name in {"summary.json", "rollup.json"}:
                continue
            run, product_clusters = themes.load_product_artifact(path)
            runs.append(run)
            clusters.extend(product_clusters)
    names = (
        annotate.LabelStore(ws.labels_log).theme_names() if ws.labels_log.is_file() else {}
    )
    theme_report = themes.build_theme_report(runs, clusters, names)
    _write_json(ws.themes_dir / "rollup.json", theme_report)

    labels = []
    if ws.labels_log.is_file():
        labels = annotate.LabelStore(ws.labels_log).export_ground_truth()
    verdicts = (
        relevance.read_verdicts(ws.verdicts_path) if ws.verdicts_path.is_file() else []
    )
    split = stats.relevance_split_report(verdicts, labels, records)
    _write_json(ws.out / "relevance_split.json", split)

    lines = ["# Pipeline report", ""]
    if ws.filter_report.is_file():
        report = json.loads(ws.filter_report.read_text())
        lines += [
            "## Filtration",
            "",
            f"- input records: {report['input_count']}",
            f"- dropped (official accounts): {len(report['dropped_official'])}",
            f"- dropped (language): {len(report['dropped_language'])}",
            f"- retained: {len(report['retained'])}",
            "",
        ]
    lines += ["## Relevant vs irrelevant", ""]
    for section in ("manual", "model"):
        table = split[section]
        lines.append(f"### {section.capitalize()}")
        lines.append("")
        lines.append("| Platform | Relevant | Irrelevant |")
        lines.append("|---|---|---|")
        for platform in sorted(table, key=lambda p: (p == stats.TOTAL_KEY, p)):
            row = table[platform]
            lines.append(f"| {platform} | {row['Relevant']} | {row['Irrelevant']} |")
        lines.append("")
    stats_md = ws.out / "stats.md"
    if stats_md.is_file():
        lines += ["## Content statistics", "", stats_md.read_text().rstrip(), ""]
    lines += ["## Themes", "", "| Theme | Products |", "|---|---|"]
    for row in theme_report["rollup"]:
        lines.append(f"| {row['display_name']} | {row['product_count']} |")
    lines.append("")
    _write_text(ws.out / "report.md", "\n".join(lines))
    return theme_report


# ---------------------------------------------------------------- CLI


def _workspace(corpus: str, out: str, frames: str | None) -> Workspace:
    corpus_path = Path(corpus)
    frames_dir = Path(frames) if frames else corpus_path.parent / "frames"
    return Workspace(corpus_path=corpus_path, out=Path(out), frames_dir=frames_dir)


def _common(func):
    func = click.option("--corpus", "-c", required=True, help="Path to corpus.json")(func)
    func = click.option("--out", "-o", required=True, help="Artifact output directory")(func)
    return func


def _dataset(variant: str, platform: str) -> DatasetVariant:
    return DatasetVariant(variant=_VARIANTS[variant], platform=_SCOPES[platform])


variant_option = click.option(
    "--variant", type=click.Choice(sorted(_VARIANTS)), default="both", show_default=True
)
platform_option = click.option(
    "--platform", type=click.Choice(sorted(_SCOPES)), default="both", show_default=True
)
seed_option = click.option("--seed", type=int, default=0, show_default=True)
frames_option = click.option(
    "--frames", default=None, help="Frames root (default: <corpus dir>/frames)"
)
jobs_option = click.option(
    "--jobs", type=int, default=1, show_default=True, help="Per-record parallelism"
)
profile_option = click.option(
    "--platform-profile", default=None, help="JSON file with sampler/OCR overrides"
)


@click.group()
@click.version_option(version=__version__)
def cli():
    """Requirements-relevant feedback mining from product videos."""


@cli.command("sample-frames")
@_common
@frames_option
@profile_option
@jobs_option
def cmd_sample_frames(corpus, out, frames, platform_profile, jobs):
    """Select candidate frames for every record with decoded frames."""
    ws = _workspace(corpus, out, frames)
    settings = SamplerSettings.from_profile(platform_profile)
    counts = stage_sample_frames(ws, settings, jobs=jobs)
    click.echo(f"sampled {sum(counts.values())} candidate frames over {len(counts)} records")


@cli.command("extract-text")
@_common
@frames_option
@profile_option
@click.option("--asr-cmd", default=None, help="ASR adapter command (default: bundled stub)")
@click.option("--ocr-cmd", default=None, help="OCR adapter command (default: bundled stub)")
@jobs_option
def cmd_extract_text(corpus, out, frames, platform_profile, asr_cmd, ocr_cmd, jobs):
    """Build text bundles: transcripts plus OCR of candidate frames."""
    ws = _workspace(corpus, out, frames)
    settings = SamplerSettings.from_profile(platform_profile)
    asr = shlex.split(asr_cmd) if asr_cmd else _stub_command("vidreq.adapters.stub_asr")
    ocr = shlex.split(ocr_cmd) if ocr_cmd else _stub_command("vidreq.adapters.stub_ocr")
    n = stage_extract_text(ws, settings, asr, ocr, jobs=jobs)
    click.echo(f"extracted text for {n} records")


@cli.command("ingest")
@_common
@click.option(
    "--detector-cmd",
    default=None,
    help="External language detector (reads text on stdin, prints a BCP-47 tag)",
)
def cmd_ingest(corpus, out, detector_cmd):
    """Apply official-account and language filters; write filter_report.json."""
    ws = _workspace(corpus, out, None)
    report = stage_ingest(ws, shlex.split(detector_cmd) if detector_cmd else None)
    click.echo(
        f"retained {len(report.retained)} of {report.input_count} records "
        f"({len(report.dropped_official)} official, {len(report.dropped_language)} non-English)"
    )


@cli.command("kappa")
@_common
@click.option("--session", default=None, help="Print one session's agreement report")
def cmd_kappa(corpus, out, session):
    """Compute Cohen's kappa for pair sessions."""
    ws = _workspace(corpus, out, None)
    if session:
        store = annotate.LabelStore(ws.labels_log)
        report = store.agreement(session)
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return
    reports = stage_kappa(ws)
    for session_id, report in sorted(reports.items()):
        click.echo(f"{session_id}: kappa={report.kappa:.4f}")


@cli.command("train")
@_common
@variant_option
@platform_option
@seed_option
def cmd_train(corpus, out, variant, platform, seed):
    """Train the in-repo reference classifier on exported ground truth."""
    ws = _workspace(corpus, out, None)
    model = stage_train(ws, _dataset(variant, platform), seed)
    click.echo(f"trained {model.model_id} ({len(model.vocab)} features)")


@cli.command("evaluate")
@_common
@variant_option
@platform_option
@seed_option
def cmd_evaluate(corpus, out, variant, platform, seed):
    """Evaluate the selected backend/model on the held-out balanced test set."""
    ws = _workspace(corpus, out, None)
    report = stage_evaluate(ws, _dataset(variant, platform), seed)
    click.echo(
        f"accuracy={report.accuracy:.4f} auc={report.auc:.4f} n={report.n_test} "
        f"model={report.model_id}"
    )


@cli.command("classify")
@_common
@variant_option
@platform_option
def cmd_classify(corpus, out, variant, platform):
    """Classify retained records; write verdicts.jsonl."""
    ws = _workspace(corpus, out, None)
    verdicts = stage_classify(ws, _dataset(variant, platform))
    relevant = sum(1 for v in verdicts if v.label is Label.RELEVANT)
    click.echo(f"classified {len(verdicts)} records: {relevant} relevant")


@cli.command("cluster")
@_common
@variant_option
@platform_option
@seed_option
@click.option("--k-range", default="2..6", show_default=True, help="k range, e.g. 2..6")
def cmd_cluster(corpus, out, variant, platform, seed, k_range):
    """Cluster relevant records per product into feedback themes."""
    ws = _workspace(corpus, out, None)
    k_min, k_max = _parse_k_range(k_range)
    summary = stage_cluster(ws, _dataset(variant, platform), seed, k_min, k_max)
    click.echo(
        f"clustered {len(summary['products'])} product(s), "
        f"skipped {len(summary['skipped'])}"
    )


def _parse_k_range(spec: str) -> tuple[int, int]:
    try:
        low, high = spec.split("..")
        k_min, k_max = int(low), int(high)
    except ValueError as exc:
        raise VidreqError(f"bad --k-range {spec!r}, expected like 2..6") from exc
    if not (2 <= k_min <= k_max <= 6):
        raise VidreqError(f"--k-range must lie within 2..6, got {spec!r}")
    return k_min, k_max


@cli.command("stats")
@_common
def cmd_stats(corpus, out):
    """Compute content statistics; write stats.json and stats.md."""
    ws = _workspace(corpus, out, None)
    rows = stage_stats(ws)
    click.echo(f"wrote statistics for {len(rows)} group(s)")


@cli.command("report")
@_common
def cmd_report(corpus, out):
    """Regenerate the theme rollup, relevance split, and report.md."""
    ws = _workspace(corpus, out, None)
    theme_report = stage_report(ws)
    click.echo(f"report written ({len(theme_report['rollup'])} named theme(s))")


@cli.group("annotate")
def cmd_annotate():
    """Annotation service commands."""


@cmd_annotate.command("serve")
@_common
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8340, show_default=True)
def cmd_annotate_serve(corpus, out, host, port):
    """Start the annotation HTTP API consumed by the browser UI."""
    import uvicorn

    from .server import create_app

    ws = _workspace(corpus, out, None)
    manifest = ws.manifest()
    app = create_app(
        store=annotate.LabelStore(ws.labels_log, known_records=[r.id for r in manifest.records]),
        manifest=manifest,
        bundles_dir=ws.bundles_dir,
        themes_dir=ws.themes_dir,
    )
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.command("pipeline")
@_common
@frames_option
@profile_option
@variant_option
@platform_option
@seed_option
@click.option("--asr-cmd", default=None)
@click.option("--ocr-cmd", default=None)
@click.option("--k-range", default="2..6", show_default=True)
@jobs_option
def cmd_pipeline(
    corpus, out, frames, platform_profile, variant, platform, seed, asr_cmd, ocr_cmd,
    k_range, jobs,
):
    """Run every batch stage in order over one corpus."""
    ws = _workspace(corpus, out, frames)
    settings = SamplerSettings.from_profile(platform_profile)
    dataset = _dataset(variant, platform)
    k_min, k_max = _parse_k_range(k_range)
    asr = shlex.split(asr_cmd) if asr_cmd else _stub_command("vidreq.adapters.stub_asr")
    ocr = shlex.split(ocr_cmd) if ocr_cmd else _stub_command("vidreq.adapters.stub_ocr")

    stage_sample_frames(ws, settings, jobs=jobs)
    stage_extract_text(ws, settings, asr, ocr, jobs=jobs)
    stage_ingest(ws)
    if ws.labels_log.is_file():
        stage_kappa(ws)
        if not os.environ.get(CLASSIFIER_URL_ENV):
            stage_train(ws, dataset, seed)
        stage_evaluate(ws, dataset, seed)
    elif not os.environ.get(CLASSIFIER_URL_ENV):
        raise VidreqError(
            f"pipeline needs a labels log at {ws.labels_log} or {CLASSIFIER_URL_ENV} set"
        )
    stage_classify(ws, dataset)
    stage_cluster(ws, dataset, seed, k_min, k_max)
    stage_stats(ws)
    stage_report(ws)
    click.echo(f"pipeline complete; artifacts under {ws.out}")


def _emit_error(error: str, detail: str) -> None:
    sys.stderr.write(json.dumps({"error": error, "detail": detail}) + "\n")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        _emit_error("Aborted", "interrupted")
        return 1
    except click.UsageError as exc:
        _emit_error("UsageError", exc.format_message())
        return 1
    except click.ClickException as exc:
        _emit_error("CliError", exc.format_message())
        return 1
    except BackendUnavailable as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 2
    except MissingFrames as exc:
        _emit_error("MissingFrames", str(exc))
        return 1
    except VidreqError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    except ValueError as exc:
        _emit_error("ValidationError", str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
