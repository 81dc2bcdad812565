# src/vos_tracking/validation/ablation.py
"""
Configuration sweeps over synthetic scenarios.

Each variant is a set of overrides on a base ``TrackingConfig``. Every variant
runs on every scenario; ``summarize_ablation`` averages mean J, purity, the
number of output tracks and the wall time per frame for each variant.
"""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Any, Dict, Mapping, Optional, Sequence

import pandas as pd

from vos_tracking.pipeline import run_tracking
from vos_tracking.synthetic.purity import purity
from vos_tracking.synthetic.scenario import ScenarioSpec, generate
from vos_tracking.utils.config_loader import TrackingConfig
from vos_tracking.utils.errors import ConfigError
from vos_tracking.validation.evaluation import mean_j

__all__ = ["ABLATION_VARIANTS", "ABLATION_COLUMNS", "select_variants", "run_ablation", "summarize_ablation"]

logger = logging.getLogger(__name__)

ABLATION_VARIANTS: Dict[str, Dict[str, Any]] = {
    "default": {},
    "greedy": {"matcher": "greedy"},
    "tracklets_only": {"association": "tracklets"},
    "equal_weights": {"w_visual": 0.5, "w_temporal": 0.5},
    "visual_only": {"w_visual": 1.0, "w_temporal": 0.0},
    "temporal_only": {"w_visual": 0.0, "w_temporal": 1.0},
    "raw_density": {"density_mode": "raw"},
    "edge_min_0.3": {"edge_min": 0.3},
    "nms_0.5": {"nms_iou": 0.5},
    "score_min_0.6": {"detection_score_min": 0.6},
    "keep_all": {"max_tracks": 0},
    "top_5": {"max_tracks": 5},
}

ABLATION_COLUMNS = ["variant", "scenario", "seed", "mean_j", "purity", "tracks", "seconds_per_frame"]


def select_variants(names: Optional[Sequence[str]] = None) -> Dict[str, Dict[str, Any]]:
    """Subset of ``ABLATION_VARIANTS`` in the requested order; ``None`` keeps all of them."""
    if names is None:
        return dict(ABLATION_VARIANTS)
    unknown = [n for n in names if n not in ABLATION_VARIANTS]
    if unknown:
        raise ConfigError(f"Unknown ablation variants {unknown}; choose from {list(ABLATION_VARIANTS)}")
    return {n: ABLATION_VARIANTS[n] for n in names}


def run_ablation(
    scenarios: Sequence[ScenarioSpec],
    variants: Optional[Mapping[str, Mapping[str, Any]]] = None,
    base: Optional[TrackingConfig] = None,
) -> pd.DataFrame:
    """
    Run every variant on every scenario.

    Parameters
    ----------
    scenarios : sequence of ScenarioSpec
        Generated once each and shared by all variants.
    variants : mapping, optional
        Variant name -> ``TrackingConfig`` overrides. Defaults to ``ABLATION_VARIANTS``.
    base : TrackingConfig, optional
        Configuration the overrides apply to.

    Returns
    -------
    pd.DataFrame
        One row per (variant, scenario) with the columns of ``ABLATION_COLUMNS``.
    """
    variants = ABLATION_VARIANTS if variants is None else variants
    base = base or TrackingConfig()
    configs = {name: replace(base, **overrides) for name, overrides in variants.items()}
    generated = [generate(spec) for spec in scenarios]

    rows = []
    for name, config in configs.items():
        for k, sc in enumerate(generated):
            result = run_tracking(sc.proposals, sc.flows, config)
            rows.append({
                "variant": name,
                "scenario": k,
                "seed": sc.spec.seed,
                "mean_j": mean_j(result.output, sc.ground_truth).mean_j,
                "purity": purity(result.output, sc.ground_truth).mean,
                "tracks": len(result.output.tracks),
                "seconds_per_frame": sum(result.counts["seconds_per_frame"].values()),
            })
        logger.info(f"Ablation variant '{name}' done on {len(generated)} scenarios")
    return pd.DataFrame(rows, columns=ABLATION_COLUMNS)


def summarize_ablation(per_run: pd.DataFrame) -> pd.DataFrame:
    """Mean of each metric per variant, in the order the variants were run."""
    metrics = ["mean_j", "purity", "tracks", "seconds_per_frame"]
    out = per_run.groupby("variant", sort=False)[metrics].mean()
    out["scenarios"] = per_run.groupby("variant", sort=False).size()
    return out
