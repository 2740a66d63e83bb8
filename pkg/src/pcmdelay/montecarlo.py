"""
Plain Monte Carlo oracle and the PCM-vs-MC comparison row.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .distributions import sample_srv_matrix
from .errors import BindingError, ExternalModelError
from .pce import DEFAULT_GRID, StatReport, pdf_grid, physical_points

DEFAULT_TRUNCATION = 3.0


@dataclass(frozen=True)
class McConfig:
    sample_count: int = 1_000_000
    seed: int = 0
    truncation: float | None = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.sample_count < 100:
            raise ValueError("sample_count must be >= 100")
        if self.truncation is not None and not self.truncation > 0:
            raise ValueError("truncation must be > 0")


def input_truncations(specs, default):
    """Per-input srv bound: the spec's own truncation wins over the default."""
    return [s.truncation if s.truncation is not None else default for s in specs]


def mc_run(model, specs, cfg, grid_size=DEFAULT_GRID):
    """Sample the inputs, push them through ``model`` and summarise the outputs."""
    specs = list(specs)
    names = {s.name for s in specs}
    for name in getattr(model, "input_names", ()):
        if name not in names:
            raise BindingError(f"model input {name!r} has no InputSpec")
    xi = sample_srv_matrix(cfg.sample_count, input_truncations(specs, cfg.truncation), cfg.seed)
    try:
        y = model(physical_points(specs, xi))
    except ExternalModelError as exc:
        if exc.sample_index is not None:
            exc.args = (f"sample {exc.sample_index}: {exc.args[0]}",)
        raise
    y = np.broadcast_to(np.asarray(y, dtype=float), (cfg.sample_count,))
    return StatReport.from_samples(y, grid_size)


@dataclass
class ComparisonRow:
    example: str
    mc_mean: float
    pcm_mean: float
    mean_err_pct: float
    mc_sd: float
    pcm_sd: float
    sd_err_pct: float
    pdf_max_gap: float
    pdf_peak: float
    # "pct" normally; "abs" when the MC reference is zero and the error is absolute
    mean_err_kind: str = "pct"
    sd_err_kind: str = "pct"

    def to_dict(self):
        return asdict(self)


def _signed_error(pcm, mc):
    if mc == 0:
        return pcm - mc, "abs"
    return 100.0 * (pcm - mc) / mc, "pct"


def pdf_gap(pcm_curve, mc_curve):
    """Max |density difference| on a common grid, and the larger peak."""
    if len(pcm_curve) == 1 or len(mc_curve) == 1:
        same = len(pcm_curve) == len(mc_curve) == 1 and pcm_curve[0, 0] == mc_curve[0, 0]
        return (0.0 if same else math.inf), math.inf
    lo = min(pcm_curve[0, 0], mc_curve[0, 0])
    hi = max(pcm_curve[-1, 0], mc_curve[-1, 0])
    grid = np.linspace(lo, hi, max(len(pcm_curve), len(mc_curve)))
    a = np.interp(grid, pcm_curve[:, 0], pcm_curve[:, 1], left=0.0, right=0.0)
    b = np.interp(grid, mc_curve[:, 0], mc_curve[:, 1], left=0.0, right=0.0)
    return float(np.max(np.abs(a - b))), float(max(a.max(), b.max()))


def compare(pcm_report, mc_report, example=""):
    mean_err, mean_kind = _signed_error(pcm_report.mean, mc_report.mean)
    sd_err, sd_kind = _signed_error(pcm_report.std_dev, mc_report.std_dev)
    gap, peak = pdf_gap(pcm_report.pdf_curve, mc_report.pdf_curve)
    return ComparisonRow(example, mc_report.mean, pcm_report.mean, mean_err,
                         mc_report.std_dev, pcm_report.std_dev, sd_err,
                         gap, peak, mean_kind, sd_kind)


def align_pdfs(pcm_report, mc_report, grid_size=DEFAULT_GRID):
    """Re-estimate both PDFs on one shared grid so the curves line up row by row."""
    if pcm_report.degenerate or mc_report.degenerate:
        return pcm_report, mc_report
    grid = pdf_grid([pcm_report.samples, mc_report.samples], grid_size)
    return pcm_report.with_pdf_grid(grid), mc_report.with_pdf_grid(grid)
