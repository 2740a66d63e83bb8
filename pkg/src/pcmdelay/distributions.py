"""
Uncertain inputs expressed as functions of standard normal variates.

Every physical parameter X_i is written as X_i = F_i(xi_i) with xi_i ~ N(0, 1)
independent. The transforms below cover the uniform, normal, lognormal, gamma
(Wilson-Hilferty) and Weibull families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import ParameterError

FAMILIES = ("uniform", "normal", "lognormal", "gamma", "weibull")

# canonical parameter names per family, in positional order
PARAM_NAMES = {
    "uniform": ("a", "b"),
    "normal": ("mean", "std"),
    "lognormal": ("mu", "sigma"),
    "gamma": ("shape", "scale"),
    "weibull": ("shape",),
}


def norm_cdf(xi):
    """Standard normal CDF."""
    return special.ndtr(xi)


@dataclass(frozen=True)
class InputSpec:
    """One uncertain physical parameter.

    ``params`` holds the family parameters by name (see ``PARAM_NAMES``).
    ``truncation`` is a symmetric bound on the underlying standard normal
    variate, in units of its standard deviation; it only affects sampling.
    """

    name: str
    family: str
    params: dict = field(default_factory=dict)
    truncation: float | None = None

    def __post_init__(self):
        fam = str(self.family).lower()
        if fam not in FAMILIES:
            raise ParameterError(f"{self.name}: unknown family {self.family!r}")
        object.__setattr__(self, "family", fam)
        expected = PARAM_NAMES[fam]
        if set(self.params) != set(expected):
            raise ParameterError(
                f"{self.name}: {fam} takes parameters {expected}, got {tuple(self.params)}"
            )
        p = {k: float(self.params[k]) for k in expected}
        if not all(math.isfinite(v) for v in p.values()):
            raise ParameterError(f"{self.name}: parameters must be finite")
        object.__setattr__(self, "params", p)

        if fam == "uniform" and not p["a"] < p["b"]:
            raise ParameterError(f"{self.name}: uniform needs a < b")
        positive = {"normal": ("std",), "lognormal": ("sigma",),
                    "gamma": ("shape", "scale"), "weibull": ("shape",)}.get(fam, ())
        for k in positive:
            if p[k] <= 0:
                raise ParameterError(f"{self.name}: {k} must be > 0")
        if self.truncation is not None:
            t = float(self.truncation)
            if not t > 0:
                raise ParameterError(f"{self.name}: truncation must be > 0")
            object.__setattr__(self, "truncation", t)

    @classmethod
    def normal(cls, name, mean, std, truncation=None):
        return cls(name, "normal", {"mean": mean, "std": std}, truncation)

    def to_physical(self, xi):
        return to_physical(self, xi)

    def moments(self):
        """Analytic (mean, variance) of the family the transform targets."""
        p = self.params
        if self.family == "normal":
            return p["mean"], p["std"] ** 2
        if self.family == "uniform":
            a, b = p["a"], p["b"]
            return 0.5 * (a + b), (b - a) ** 2 / 12.0
        if self.family == "lognormal":
            mu, s2 = p["mu"], p["sigma"] ** 2
            return math.exp(mu + s2 / 2), math.expm1(s2) * math.exp(2 * mu + s2)
        if self.family == "gamma":
            a, b = p["shape"], p["scale"]
            return a * b, a * b * b
        a = p["shape"]
        g1 = math.gamma(1 + 1 / a)
        return g1, math.gamma(1 + 2 / a) - g1 * g1

    def to_dict(self):
        d = {"name": self.name, "family": self.family, "params": dict(self.params)}
        if self.truncation is not None:
            d["truncation"] = self.truncation
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], d["family"], dict(d.get("params", {})), d.get("truncation"))


def to_physical(spec: InputSpec, xi):
    """Map standard normal variate(s) ``xi`` to the physical parameter value.

    Works elementwise on arrays; a scalar in gives a float out.
    """
    x = np.asarray(xi, dtype=float)
    p = spec.params
    fam = spec.family
    if fam == "normal":
        out = p["mean"] + p["std"] * x
    elif fam == "uniform":
        out = p["a"] + (p["b"] - p["a"]) * (0.5 + 0.5 * special.erf(x / math.sqrt(2.0)))
    elif fam == "lognormal":
        out = np.exp(p["mu"] + p["sigma"] * x)
    elif fam == "gamma":
        a, b = p["shape"], p["scale"]
        c = 1.0 / (9.0 * a)
        out = a * b * (1.0 - c + x * math.sqrt(c)) ** 3
    else:
        # -ln(1 - Phi(xi)) == -log_ndtr(-xi), stable in both tails
        out = (-special.log_ndtr(-x)) ** (1.0 / p["shape"])
    if np.ndim(out) == 0:
        return float(out)
    return out


def sample_srv(count, seed, truncation=None):
    """Draw ``count`` standard normal variates, reproducible from ``seed``.

    With ``truncation=k`` every value satisfies ``|v| <= k``; rejected draws
    are replaced from the same stream. ``seed`` may be an int or a
    ``numpy.random.SeedSequence``.
    """
    count = int(count)
    if count < 1:
        raise ParameterError("count must be >= 1")
    if truncation is not None and not truncation > 0:
        raise ParameterError("truncation must be > 0")
    rng = np.random.default_rng(seed)
    out = rng.standard_normal(count)
    if truncation is None:
        return out
    bad = np.flatnonzero(np.abs(out) > truncation)
    while bad.size:
        fresh = rng.standard_normal(bad.size)
        out[bad] = fresh
        bad = bad[np.abs(fresh) > truncation]
    return out


def sample_srv_matrix(count, truncations, seed):
    """(count, n) matrix of independent srv columns, one substream per column.

    ``truncations`` is a sequence of per-column bounds (``None`` for none).
    """
    children = np.random.SeedSequence(seed).spawn(len(truncations))
    cols = [sample_srv(count, child, t) for child, t in zip(children, truncations)]
    return np.column_stack(cols) if cols else np.empty((count, 0))


def truncated_normal_variance(k):
    """Variance of a standard normal conditioned on |xi| <= k."""
    phi = math.exp(-0.5 * k * k) / math.sqrt(2 * math.pi)
    mass = 2 * norm_cdf(k) - 1
    return 1.0 - 2 * k * phi / mass
