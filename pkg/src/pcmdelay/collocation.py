"""
Collocation point selection and the coefficient solve.

Per-axis values are {0} united with the roots of He_{d+1}. One point is picked
per basis term, in basis order: the constant term gets the origin, a term
supported on a variable set S gets a point that is zero off S and a nonzero
root on every axis in S. Ties are broken by (1) smaller norm, (2) sign
symmetry with what is already chosen, (3) a seeded random draw.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import PlanningError, ShapeError, SingularSystemError
from .hermite import basis_matrix, basis_terms, hermite_roots

RCOND_MIN = 1e-10
_NORM_DECIMALS = 9


def axis_values(d):
    """Sorted per-axis candidate values {0} U roots(He_{d+1})."""
    roots = hermite_roots(d + 1)
    if d % 2 == 0:
        return roots  # He_{d+1} has odd order, 0 is already a root
    return np.sort(np.append(roots, 0.0))


def candidate_counts(n, d):
    """(root-only count, origin-augmented count) of the candidate grid."""
    return (d + 1) ** n, len(axis_values(d)) ** n


def candidate_points(n, d):
    """Full origin-augmented candidate grid as an (|V|^n, n) array."""
    vals = axis_values(d)
    return np.array(list(product(vals, repeat=n)), dtype=float).reshape(-1, n)


@dataclass(frozen=True)
class CollocationPlan:
    n: int
    d: int
    seed: int
    points: np.ndarray
    provenance: tuple = ()
    root_only_count: int = 0
    augmented_count: int = 0

    @property
    def m(self):
        return len(self.points)

    def to_dict(self):
        return {
            "n": self.n,
            "d": self.d,
            "seed": self.seed,
            "root_only_candidates": self.root_only_count,
            "augmented_candidates": self.augmented_count,
            "points": self.points.tolist(),
            "provenance": [dict(p) for p in self.provenance],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            n=d["n"], d=d["d"], seed=d["seed"],
            points=np.asarray(d["points"], dtype=float).reshape(-1, d["n"]),
            provenance=tuple(d.get("provenance", ())),
            root_only_count=d.get("root_only_candidates", 0),
            augmented_count=d.get("augmented_candidates", 0),
        )

    def augmentation_points(self, limit):
        """Up to ``limit`` unused grid points, nearest to the origin first."""
        used = {tuple(p) for p in self.points}
        grid = candidate_points(self.n, self.d)
        norms = np.round(np.einsum("ij,ij->i", grid, grid), _NORM_DECIMALS)
        order = np.argsort(norms, kind="stable")
        extra = [grid[i] for i in order if tuple(grid[i]) not in used][:limit]
        return np.array(extra).reshape(-1, self.n)


def _admissible(support, n, nonzero):
    pts = []
    for combo in product(nonzero, repeat=len(support)):
        p = [0.0] * n
        for i, v in zip(support, combo):
            p[i] = float(v)
        pts.append(tuple(p))
    return pts


def _pick(free, chosen, rng):
    """Return (point, rule) for the tie-break chain."""
    if len(free) == 1:
        return free[0], "unique"
    norms = [round(sum(v * v for v in p), _NORM_DECIMALS) for p in free]
    best = min(norms)
    tied = [p for p, r in zip(free, norms) if r == best]
    if len(tied) == 1:
        return tied[0], "norm"
    free_set = set(free)

    def sym(p):
        neg = tuple(-v for v in p)
        if neg in chosen:
            return 2
        return 1 if neg in free_set and neg != p else 0

    scores = [sym(p) for p in tied]
    top = max(scores)
    tied = [p for p, s in zip(tied, scores) if s == top]
    if len(tied) == 1:
        return tied[0], "symmetry"
    return tied[int(rng.integers(len(tied)))], "random"


def select_points(n, d, seed=0):
    """Pick C(n+d, d) collocation points term by term. Deterministic in seed."""
    terms = basis_terms(n, d)
    nonzero = [v for v in hermite_roots(d + 1) if v != 0.0]
    rng = np.random.default_rng(seed)
    chosen = set()
    points, prov = [], []
    cache = {}
    for term in terms:
        support = tuple(i for i, k in enumerate(term) if k)
        if support not in cache:
            cache[support] = _admissible(support, n, nonzero)
        free = [p for p in cache[support] if p not in chosen]
        if not free:
            raise PlanningError(
                f"no admissible collocation point left for term {term} (n={n}, d={d})"
            )
        p, rule = _pick(free, chosen, rng)
        chosen.add(p)
        points.append(p)
        prov.append({"term": list(term), "rule": rule})
    root_only, augmented = candidate_counts(n, d)
    return CollocationPlan(
        n=n, d=d, seed=seed,
        points=np.array(points, dtype=float).reshape(-1, n),
        provenance=tuple(prov),
        root_only_count=root_only,
        augmented_count=augmented,
    )


def assemble_system(plan, basis):
    """Z[term, point] = Psi_term(point); Z.T @ a reproduces the outputs."""
    if len(basis) != plan.m:
        raise ShapeError(f"{len(basis)} basis terms but {plan.m} plan points")
    return basis_matrix(basis, plan.points).T


def rcond(mat):
    """Reciprocal 2-norm condition number (0 for singular matrices)."""
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0:
        return 0.0
    return float(s[-1] / s[0])


@dataclass
class FitResult:
    coeffs: np.ndarray
    rcond: float
    path: str  # "square" or "lstsq"
    extra_points: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    extra_values: np.ndarray = field(default_factory=lambda: np.empty(0))


def fit_coefficients(Z, y, augment=None, label="plan"):
    """Solve Z.T a = y.

    If the reciprocal condition number falls below ``RCOND_MIN`` and
    ``augment`` is given, it is called as ``augment()`` and must return
    ``(points, Z_extra, y_extra)`` with ``Z_extra`` shaped (m, k); the
    stacked system is then solved by least squares.
    """
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    m = Z.shape[0]
    if Z.shape != (m, m) or y.shape != (m,):
        raise ShapeError(f"need square Z and matching y, got {Z.shape} and {y.shape}")
    rc = rcond(Z)
    if rc >= RCOND_MIN:
        return FitResult(np.linalg.solve(Z.T, y), rc, "square")
    if augment is None:
        raise SingularSystemError(f"{label}: collocation matrix rcond {rc:.3g} < {RCOND_MIN}")
    pts, Zx, yx = augment()
    A = np.vstack([Z.T, np.asarray(Zx, dtype=float).T])
    b = np.concatenate([y, np.asarray(yx, dtype=float)])
    coeffs, _, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    if rank < m or sv[-1] / sv[0] < RCOND_MIN:
        raise SingularSystemError(
            f"{label}: rank {rank} < {m} even after adding {len(b) - m} candidate points"
        )
    return FitResult(coeffs, float(sv[-1] / sv[0]), "lstsq", np.asarray(pts), np.asarray(yx))


def residual_at(model_value, pce_value):
    return pce_value - model_value


def is_plan_value(v, d, tol=1e-12):
    return bool(np.min(np.abs(axis_values(d) - v)) <= tol)

