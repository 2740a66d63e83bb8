"""Probabilistic collocation with Hermite chaos for statistical gate delay."""

from .collocation import CollocationPlan, assemble_system, fit_coefficients, select_points
from .distributions import InputSpec, sample_srv, to_physical
from .gates import GateModel, eval_gate, external_eval
from .hermite import basis_eval, basis_norm_sq, basis_terms, hermite_eval, hermite_roots
from .montecarlo import ComparisonRow, McConfig, compare, mc_run
from .pce import PceModel, StatReport, fit_pce, fit_srv, pdf_estimate

__version__ = "0.1.0"

__all__ = [
    "CollocationPlan", "ComparisonRow", "GateModel", "InputSpec", "McConfig",
    "PceModel", "StatReport", "assemble_system", "basis_eval", "basis_norm_sq",
    "basis_terms", "compare", "eval_gate", "external_eval", "fit_coefficients",
    "fit_pce", "fit_srv", "hermite_eval", "hermite_roots", "mc_run",
    "pdf_estimate", "sample_srv", "select_points", "to_physical",
]
