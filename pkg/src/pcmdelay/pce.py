"""
Fitted Hermite chaos expansions and their output statistics.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import collocation
from .distributions import InputSpec, sample_srv_matrix, to_physical
from .errors import ShapeError
from .hermite import basis_matrix, basis_norm_sq, basis_terms

SCHEMA_VERSION = 1
DEFAULT_GRID = 512


class DegenerateSampleWarning(UserWarning):
    """Samples have zero spread; the PDF collapses to a spike."""


@dataclass(frozen=True)
class PceModel:
    input_specs: tuple
    degree: int
    terms: tuple
    coeffs: np.ndarray
    fit_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "input_specs", tuple(self.input_specs))
        object.__setattr__(self, "terms", tuple(tuple(int(k) for k in t) for t in self.terms))
        c = np.array(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if len(self.terms) != len(c):
            raise ShapeError(f"{len(self.terms)} terms but {len(c)} coefficients")
        if any(self.terms[0]):
            raise ShapeError("first term must be the constant")

    @property
    def n(self):
        return len(self.terms[0])

    @property
    def names(self):
        return [s.name for s in self.input_specs]

    def evaluate(self, xi):
        """Expansion value at one point (length n) or many points (N, n)."""
        x = np.asarray(xi, dtype=float)
        if x.shape[-1:] != (self.n,):
            raise ShapeError(f"expansion has {self.n} inputs, got shape {x.shape}")
        vals = basis_matrix(self.terms, x.reshape(-1, self.n)) @ self.coeffs
        return float(vals[0]) if x.ndim == 1 else vals

    @property
    def analytic_mean(self):
        return float(self.coeffs[0])

    @property
    def analytic_variance(self):
        return float(sum(c * c * basis_norm_sq(t)
                         for t, c in zip(self.terms[1:], self.coeffs[1:])))

    def sample_output(self, count, seed, truncation=None):
        """Expansion values at ``count`` iid normal points; no model runs.

        ``truncation`` is a scalar or per-input sequence of srv bounds.
        """
        if count < 2:
            raise ValueError("count must be >= 2")
        xi = sample_srv_matrix(count, _per_input(truncation, self.n), seed)
        return self.evaluate(xi)

    def stats(self, count, seed, truncation=None, grid_size=DEFAULT_GRID):
        samples = self.sample_output(count, seed, truncation)
        return StatReport.from_samples(
            samples, grid_size,
            analytic_mean=self.analytic_mean,
            analytic_variance=self.analytic_variance,
        )

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "input_specs": [s.to_dict() for s in self.input_specs],
            "degree": self.degree,
            "terms": [list(t) for t in self.terms],
            "coeffs": self.coeffs.tolist(),
            "fit_meta": self.fit_meta,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d):
        return cls(
            input_specs=[InputSpec.from_dict(s) for s in d["input_specs"]],
            degree=d["degree"],
            terms=d["terms"],
            coeffs=d["coeffs"],
            fit_meta=d.get("fit_meta", {}),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _per_input(truncation, n):
    if truncation is None or np.isscalar(truncation):
        return [truncation] * n
    truncation = list(truncation)
    if len(truncation) != n:
        raise ShapeError(f"{len(truncation)} truncations for {n} inputs")
    return truncation


def standard_inputs(n):
    return [InputSpec.normal(f"xi{i + 1}", 0.0, 1.0) for i in range(n)]


def fit_srv(response, n, degree, seed=0, input_specs=None):
    """Fit an expansion to ``response``, a function of srv points.

    ``response`` takes an (m, n) array of standard normal points and returns m
    outputs. Returns a ``PceModel`` whose ``fit_meta`` records the plan, solve
    path, condition estimate and the fit targets.
    """
    specs = list(input_specs) if input_specs is not None else standard_inputs(n)
    if len(specs) != n:
        raise ShapeError(f"{len(specs)} input specs for n={n}")
    terms = basis_terms(n, degree)
    plan = collocation.select_points(n, degree, seed)
    Z = collocation.assemble_system(plan, terms)
    y = np.asarray(response(plan.points), dtype=float).reshape(-1)

    def augment():
        extra = plan.augmentation_points(plan.m)
        return extra, basis_matrix(terms, extra).T, \
            np.asarray(response(extra), dtype=float).reshape(-1)

    fit = collocation.fit_coefficients(Z, y, augment=augment, label=f"plan(n={n}, d={degree}, seed={seed})")
    meta = {
        "solve_path": fit.path,
        "rcond": fit.rcond,
        "seed": seed,
        "plan": plan.to_dict(),
        "targets": y.tolist(),
    }
    if fit.path == "lstsq":
        meta["extra_points"] = fit.extra_points.tolist()
        meta["extra_targets"] = fit.extra_values.tolist()
    return PceModel(specs, degree, terms, fit.coeffs, meta)


def physical_points(specs, xi):
    """Map an (N, n) srv array to a dict of physical arrays keyed by input name."""
    xi = np.atleast_2d(xi)
    return {s.name: np.atleast_1d(to_physical(s, xi[:, i])) for i, s in enumerate(specs)}


def fit_pce(model, specs, degree, seed=0):
    """Fit a black-box model of physical inputs.

    ``model`` is a callable taking ``{name: array}`` and returning an array of
    outputs (a ``GateModel`` works directly).
    """
    specs = list(specs)
    return fit_srv(lambda pts: model(physical_points(specs, pts)),
                   len(specs), degree, seed, specs)


def skewness(samples):
    x = np.asarray(samples, dtype=float)
    c = x - x.mean()
    m2 = np.mean(c * c)
    if m2 == 0:
        return 0.0
    return float(np.mean(c ** 3) / m2 ** 1.5)


def silverman_bandwidth(samples):
    x = np.asarray(samples, dtype=float)
    sd = x.std(ddof=1)
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    return 0.9 * spread * len(x) ** -0.2


def pdf_grid(sample_sets, grid_size=DEFAULT_GRID):
    """Uniform grid covering [min - 3h, max + 3h] of every sample set."""
    lo, hi = math.inf, -math.inf
    for s in sample_sets:
        s = np.asarray(s, dtype=float)
        h = silverman_bandwidth(s)
        lo, hi = min(lo, s.min() - 3 * h), max(hi, s.max() + 3 * h)
    return np.linspace(lo, hi, grid_size)


def pdf_estimate(samples, grid_size=DEFAULT_GRID, grid=None):
    """Gaussian KDE with Silverman bandwidth, as a (G, 2) array of (x, density).

    Samples are linearly binned onto the grid and convolved with the sampled
    kernel, so the cost is independent of the sample count. Zero-spread
    samples give a single row ``[[value, inf]]`` and a
    ``DegenerateSampleWarning``.
    """
    x = np.asarray(samples, dtype=float).reshape(-1)
    if x.size < 100:
        raise ValueError("pdf_estimate needs at least 100 samples")
    if grid is None and grid_size < 16:
        raise ValueError("grid_size must be >= 16")
    if np.ptp(x) == 0:
        warnings.warn("zero-variance samples, returning a spike", DegenerateSampleWarning, stacklevel=2)
        return np.array([[x[0], math.inf]])
    h = silverman_bandwidth(x)
    if h == 0:
        # IQR and sd both vanish only when nearly all mass sits on one value
        h = np.ptp(x) / len(x) ** 0.2
    g = pdf_grid([x], grid_size) if grid is None else np.asarray(grid, dtype=float)
    dx = g[1] - g[0]
    pos = np.clip((x - g[0]) / dx, 0, len(g) - 1 - 1e-12)
    left = np.floor(pos).astype(int)
    frac = pos - left
    counts = np.bincount(left, weights=1 - frac, minlength=len(g))
    counts += np.bincount(left + 1, weights=frac, minlength=len(g) + 1)[:len(g)]
    half = min(len(g) - 1, int(math.ceil(6 * h / dx)))
    offs = np.arange(-half, half + 1) * dx
    kern = np.exp(-0.5 * (offs / h) ** 2) / (h * math.sqrt(2 * math.pi))
    dens = np.convolve(counts, kern, mode="same") / len(x)
    return np.column_stack([g, np.maximum(dens, 0.0)])


@dataclass
class StatReport:
    mean: float
    variance: float
    std_dev: float
    sample_count: int
    skewness: float
    pdf_curve: np.ndarray
    analytic_mean: float | None = None
    analytic_variance: float | None = None
    samples: np.ndarray | None = field(default=None, repr=False)

    @property
    def degenerate(self):
        return self.variance == 0 or len(self.pdf_curve) == 1

    @classmethod
    def from_samples(cls, samples, grid_size=DEFAULT_GRID, grid=None, **analytic):
        y = np.asarray(samples, dtype=float)
        n = len(y)
        mean = float(np.sum(y) / n)
        var = float(np.sum((y - mean) ** 2) / (n - 1))
        if np.ptp(y) == 0:
            var = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateSampleWarning)
            curve = pdf_estimate(y, grid_size, grid)
        return cls(mean, var, math.sqrt(var), n, skewness(y), curve, samples=y, **analytic)

    def with_pdf_grid(self, grid):
        """Same statistics with the PDF re-estimated on ``grid``."""
        if self.samples is None or self.degenerate:
            return self
        curve = pdf_estimate(self.samples, grid=grid)
        return StatReport(self.mean, self.variance, self.std_dev, self.sample_count,
                          self.skewness, curve, self.analytic_mean,
                          self.analytic_variance, self.samples)

    def to_dict(self):
        return {
            "mean": self.mean,
            "variance": self.variance,
            "std_dev": self.std_dev,
            "sample_count": self.sample_count,
            "skewness": self.skewness,
            "analytic_mean": self.analytic_mean,
            "analytic_variance": self.analytic_variance,
        }
