# src/vos_tracking/commands.py
"""
Command entry points used by ``scripts/``. Each returns a process exit status:

0 success, 1 malformed input, 2 invalid configuration / scenario / render limit.
Outputs are written atomically, so a failing command leaves no partial file.
"""
from __future__ import annotations

import io
import logging
import platform
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd
from PIL import Image

from vos_tracking import __version__
from vos_tracking.ingestion.flow_io import FlowDirectory, flow_filename
from vos_tracking.ingestion.proposal_file import load_proposals
from vos_tracking.pipeline import TrackingResult, run_tracking
from vos_tracking.segmentation.masks import decode
from vos_tracking.synthetic.scenario import ScenarioSpec, generate, write_scenario
from vos_tracking.tracking.tracklets import tracklets_to_json
from vos_tracking.utils.config_loader import TrackingConfig
from vos_tracking.utils.errors import ConfigError, InputFormatError, RenderLimitError
from vos_tracking.utils.io import atomic_write_bytes, atomic_write_text, sha256_file, write_json
from vos_tracking.utils.track_io import TrackOutput, load_tracks, write_tracks
from vos_tracking.validation.ablation import run_ablation, select_variants, summarize_ablation
from vos_tracking.validation.evaluation import mean_j

__all__ = ["cmd_track", "cmd_eval", "cmd_synth", "cmd_render", "cmd_ablation", "check_renderable", "render_frame", "EXIT_OK", "EXIT_INPUT", "EXIT_CONFIG"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONFIG = 2

CUT_LOG_COLUMNS = ["iteration", "leaf", "tracklets", "visual", "temporal", "score"]
MAX_RENDER_ID = 255


def _load_config(config_path: Optional[str | Path]) -> TrackingConfig:
    if config_path is None:
        return TrackingConfig()
    return TrackingConfig.from_file(str(config_path))


def _write_debug(
    debug_dir: Path,
    result: TrackingResult,
    config: TrackingConfig,
    proposals_path: Path,
    flow_dir: Path,
    config_path: Optional[Path],
) -> None:
    debug_dir.mkdir(parents=True, exist_ok=True)
    write_json(debug_dir / "tracklets.json", tracklets_to_json(result.tracklets))
    forest = result.association.forest
    write_json(debug_dir / "forest.json", forest.to_json() if forest is not None else {})

    cut_log = pd.DataFrame(result.association.cut_log_rows(), columns=CUT_LOG_COLUMNS)
    atomic_write_text(debug_dir / "cut_log.csv", cut_log.to_csv(index=False, float_format="%.10g"))

    flow_hashes = {
        flow_filename(t): sha256_file(flow_dir / flow_filename(t))
        for t in range(result.clipped.num_frames - 1)
        if (flow_dir / flow_filename(t)).exists()
    }
    meta: Dict[str, Any] = {
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "inputs": {
            "proposals": str(proposals_path),
            "proposals_sha256": sha256_file(proposals_path),
            "flow_dir": str(flow_dir),
            "flows_sha256": flow_hashes,
            "config": None if config_path is None else str(config_path),
            "config_sha256": None if config_path is None else sha256_file(config_path),
        },
        "config": config.to_dict(),
        "counts": result.counts,
    }
    write_json(debug_dir / "run_meta.json", meta)
    logging.info(f"Debug artifacts written to {debug_dir}")


def cmd_track(
    proposals_path: str | Path,
    flow_dir: str | Path,
    config_path: Optional[str | Path],
    out_path: str | Path,
    debug_dir: Optional[str | Path] = None,
) -> int:
    """Run the whole tracking pipeline and write the track JSON."""
    proposals_path, flow_dir, out_path = Path(proposals_path), Path(flow_dir), Path(out_path)
    try:
        config = _load_config(config_path)
    except (ConfigError, FileNotFoundError) as e:
        logging.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    try:
        sequence = load_proposals(proposals_path)
        flows = FlowDirectory(flow_dir, height=sequence.height, width=sequence.width)
        result = run_tracking(sequence, flows, config)
        result.output.validate()
        if debug_dir is not None:
            _write_debug(
                Path(debug_dir),
                result,
                config,
                proposals_path,
                flow_dir,
                None if config_path is None else Path(config_path),
            )
    except InputFormatError as e:
        logging.error(f"Tracking failed: {e}")
        return EXIT_INPUT

    write_tracks(out_path, result.output)
    logging.info(f"Wrote {len(result.output.tracks)} tracks to {out_path}")
    return EXIT_OK


def cmd_eval(pred_path: str | Path, gt_path: str | Path, report_path: Optional[str | Path] = None) -> int:
    """Score predictions against ground truth, print the J table and optionally save it as JSON."""
    try:
        predictions = load_tracks(pred_path)
        ground_truth = load_tracks(gt_path)
        report = mean_j(predictions, ground_truth)
    except InputFormatError as e:
        logging.error(f"Evaluation failed: {e}")
        return EXIT_INPUT

    print(report.to_table())
    if report_path is not None:
        write_json(report_path, report.to_json())
        logging.info(f"Evaluation report written to {report_path}")
    return EXIT_OK


def cmd_synth(spec_path: str | Path, out_dir: str | Path) -> int:
    """Generate a synthetic scenario (proposals, flows, ground truth) into ``out_dir``."""
    try:
        spec = ScenarioSpec.load(spec_path)
    except ConfigError as e:
        logging.error(f"Invalid scenario: {e}")
        return EXIT_CONFIG
    write_scenario(generate(spec), out_dir)
    return EXIT_OK


def cmd_ablation(
    spec_paths: Sequence[str | Path],
    out_path: str | Path,
    *,
    seeds: Optional[Sequence[int]] = None,
    variants: Optional[Sequence[str]] = None,
    config_path: Optional[str | Path] = None,
    per_run_path: Optional[str | Path] = None,
) -> int:
    """
    Sweep configuration variants over synthetic scenarios and write the
    per-variant summary CSV. With ``seeds`` every scenario is re-seeded once per seed.
    """
    try:
        base = _load_config(config_path)
        chosen = select_variants(variants)
        specs = [ScenarioSpec.load(p) for p in spec_paths]
        if seeds is not None:
            specs = [replace(spec, seed=int(s)) for spec in specs for s in seeds]
        per_run = run_ablation(specs, chosen, base)
    except (ConfigError, FileNotFoundError) as e:
        logging.error(f"Invalid ablation setup: {e}")
        return EXIT_CONFIG

    summary = summarize_ablation(per_run)
    print(summary.to_string(float_format=lambda v: f"{v:.4f}"))
    atomic_write_text(Path(out_path), summary.to_csv(float_format="%.10g"))
    if per_run_path is not None:
        atomic_write_text(Path(per_run_path), per_run.to_csv(index=False, float_format="%.10g"))
    logging.info(f"Ablation summary for {len(chosen)} variants written to {out_path}")
    return EXIT_OK


def check_renderable(output: TrackOutput) -> None:
    too_large = [t.track_id for t in output.tracks if t.track_id > MAX_RENDER_ID]
    if too_large:
        raise RenderLimitError(f"track ids {too_large} do not fit in 8-bit labels (max {MAX_RENDER_ID})")


def render_frame(output: TrackOutput, frame: int) -> np.ndarray:
    """uint8 label image of one frame: track id on its pixels, 0 elsewhere."""
    labels = np.zeros((output.height, output.width), dtype=np.uint8)
    for track_id, mask in output.masks_at(frame).items():
        labels[decode(mask)] = track_id
    return labels


def _pgm_bytes(labels: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(labels).save(buf, format="PPM")
    return buf.getvalue()


def cmd_render(tracks_path: str | Path, out_dir: str | Path) -> int:
    """Write one binary PGM per frame (``NNNNNN.pgm``) whose pixel value is the track id."""
    try:
        output = load_tracks(tracks_path)
    except InputFormatError as e:
        logging.error(f"Render failed: {e}")
        return EXIT_INPUT
    try:
        check_renderable(output)
    except RenderLimitError as e:
        logging.error(f"Render failed: {e}")
        return EXIT_CONFIG

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for t in range(output.num_frames):
        atomic_write_bytes(out_dir / f"{t:06d}.pgm", _pgm_bytes(render_frame(output, t)))
    logging.info(f"Rendered {output.num_frames} frames to {out_dir}")
    return EXIT_OK
