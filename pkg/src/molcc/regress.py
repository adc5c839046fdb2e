"""Lasso hyperplane fitting, R² and repeated k-fold cross-validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MODEL_FORMAT = "molcc-model/1"
DEFAULT_LAMBDA_GRID = tuple(float(x) for x in np.logspace(-4, 1, 13))


class RegressionError(ValueError):
    pass


@dataclass
class Hyperplane:
    weights: np.ndarray
    bias: float
    column_names: list
    shift: np.ndarray
    scale: np.ndarray  # 0 marks a constant column
    lam: float = 0.0
    converged: bool = True
    n_sweeps: int = 0
    meta: dict = field(default_factory=dict)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return X @ self.weights + self.bias

    def to_json(self) -> str:
        obj = {
            "format": MODEL_FORMAT,
            "bias": self.bias,
            "lambda": self.lam,
            "weights": {n: float(w) for n, w in zip(self.column_names, self.weights)},
            "standardized": True,
            "scaling": {
                n: [float(s), float(c)] for n, s, c in zip(self.column_names, self.shift, self.scale)
            },
            "converged": self.converged,
            "sweeps": self.n_sweeps,
        }
        obj.update(self.meta)
        return json.dumps(obj, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Hyperplane":
        obj = json.loads(text)
        if obj.get("format") != MODEL_FORMAT:
            raise RegressionError(f"unsupported model format {obj.get('format')!r}")
        names = list(obj["weights"])
        scaling = obj.get("scaling", {})
        shift = np.array([scaling.get(n, [0.0, 1.0])[0] for n in names], dtype=float)
        scale = np.array([scaling.get(n, [0.0, 1.0])[1] for n in names], dtype=float)
        meta = {k: v for k, v in obj.items() if k not in {"format", "bias", "lambda", "weights", "standardized", "scaling", "converged", "sweeps"}}
        return cls(
            np.array([obj["weights"][n] for n in names], dtype=float),
            float(obj["bias"]),
            names,
            shift,
            scale,
            float(obj.get("lambda", 0.0)),
            bool(obj.get("converged", True)),
            int(obj.get("sweeps", 0)),
            meta,
        )


def _soft(x: float, t: float) -> float:
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


def _objective(r: np.ndarray, w: np.ndarray, lam: float) -> float:
    n = r.shape[0]
    return float(r @ r) / (2 * n) + lam * float(np.abs(w).sum())


def standardize(X: np.ndarray):
    shift = X.mean(axis=0)
    scale = X.std(axis=0)
    span = np.abs(X).max(axis=0) if X.size else scale
    const = scale <= 1e-12 * np.maximum(span, 1.0)
    scale = np.where(const, 0.0, scale)
    Z = np.zeros_like(X)
    live = ~const
    Z[:, live] = (X[:, live] - shift[live]) / scale[live]
    return Z, shift, scale


def lasso_fit(
    X,
    y,
    lam: float,
    tol: float = 1e-10,
    max_iter: int = 100000,
    column_names: Sequence[str] | None = None,
    warm_start=None,
) -> Hyperplane:
    """Coordinate descent for (1/2n)||y - Xw - b||^2 + lam*||w||_1 on standardized columns.

    ``warm_start`` is a vector of standardized weights to start from.  Sweeps
    alternate between all live columns and the current nonzero ones; the fit
    has converged when a full sweep moves no weight by ``tol`` or more.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise RegressionError("X must be n-by-K and y of length n")
    n, k = X.shape
    if n < 2:
        raise RegressionError("need at least 2 samples")
    if lam < 0:
        raise RegressionError("lambda must be non-negative")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise RegressionError("non-finite values in training data")
    Z, shift, scale = standardize(X)
    live = np.flatnonzero(scale > 0)
    ybar = float(y.mean())
    yc = y - ybar
    G = Z.T @ Z / n
    w = np.zeros(k)
    if warm_start is not None:
        w[live] = np.asarray(warm_start, dtype=float)[live]
    q = Z.T @ yc / n - G @ w  # equals Z^T r / n
    obj = _objective(yc - Z @ w, w, lam)
    converged = False
    sweeps = 0
    full = True
    for sweeps in range(1, max_iter + 1):
        cols = live if full else live[w[live] != 0]
        max_step = 0.0
        for j in cols:
            old = w[j]
            new = _soft(q[j] + old * G[j, j], lam) / G[j, j]
            if new != old:
                q -= (new - old) * G[:, j]
                w[j] = new
                max_step = max(max_step, abs(new - old))
        new_obj = _objective(yc - Z @ w, w, lam)
        if new_obj > obj + 1e-12 * max(1.0, abs(obj)):
            raise RuntimeError(f"lasso objective increased in sweep {sweeps}: {obj!r} -> {new_obj!r}")
        obj = new_obj
        if max_step < tol:
            if full:
                converged = True
                break
            full = True
        else:
            full = not full if full else False
    raw = np.zeros(k)
    raw[live] = w[live] / scale[live]
    bias = ybar - float(raw[live] @ shift[live])
    names = list(column_names) if column_names is not None else [f"x{j}" for j in range(k)]
    h = Hyperplane(raw, bias, names, shift, scale, float(lam), converged, sweeps)
    h.meta["standardized_weights"] = [float(v) for v in w]
    return h


def kkt_residuals(h: Hyperplane, X, y) -> np.ndarray:
    """Per-column KKT violation of the standardized problem (0 when optimal)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    Z, _, scale = standardize(X)
    n = X.shape[0]
    w = np.where(scale > 0, h.weights * scale, 0.0)
    r = y - y.mean() - Z @ w
    grad = -(Z.T @ r) / n
    res = np.zeros_like(grad)
    for j in range(len(w)):
        if scale[j] == 0:
            continue
        if w[j] != 0:
            res[j] = abs(grad[j] + h.lam * np.sign(w[j]))
        else:
            res[j] = max(0.0, abs(grad[j]) - h.lam)
    return res


def r_squared_values(y, pred) -> float:
    y = np.asarray(y, dtype=float)
    pred = np.asarray(pred, dtype=float)
    if y.shape[0] < 2:
        raise RegressionError("R^2 needs at least 2 observations")
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0:
        raise RegressionError("R^2 is undefined for constant observed values")
    return 1.0 - float(((y - pred) ** 2).sum()) / ss_tot


def r_squared(h: Hyperplane, X, y) -> float:
    return r_squared_values(y, h.predict(X))


@dataclass
class CvReport:
    per_fold_r2: list
    median_r2: float
    seed: int
    lam: float
    repetitions: int = 10
    folds: int = 5

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "lambda": self.lam,
                "repetitions": self.repetitions,
                "folds": self.folds,
                "median_r2": self.median_r2,
                "per_fold_r2": self.per_fold_r2,
            },
            indent=1,
        ) + "\n"

    def to_csv(self) -> str:
        lines = ["repetition,fold,r2"]
        for i, v in enumerate(self.per_fold_r2):
            lines.append(f"{i // self.folds + 1},{i % self.folds + 1},{v!r}")
        lines.append(f"median,,{self.median_r2!r}")
        return "\n".join(lines) + "\n"


def fold_assignment(n: int, folds: int, rng: np.random.Generator) -> np.ndarray:
    perm = rng.permutation(n)
    out = np.empty(n, dtype=int)
    out[perm] = np.arange(n) % folds
    return out


def cross_validate(X, y, lam: float, seed: int = 0, repetitions: int = 10, folds: int = 5, tol: float = 1e-10) -> CvReport:
    return _cv_path(X, y, [lam], seed, repetitions, folds, tol)[0]


def _cv_path(X, y, lams, seed, repetitions, folds, tol) -> list:
    """CV reports for each lambda; folds are shared and fits are warm-started down the path."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    if n < 2 * folds:
        raise RegressionError(f"need at least {2 * folds} samples for {folds}-fold cross-validation, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    order = sorted(range(len(lams)), key=lambda i: -lams[i])
    scores = [[] for _ in lams]
    for _ in range(repetitions):
        fold = fold_assignment(n, folds, rng)
        for f in range(folds):
            test = fold == f
            warm = None
            for i in order:
                h = lasso_fit(X[~test], y[~test], lams[i], tol=tol, warm_start=warm)
                warm = h.meta["standardized_weights"]
                scores[i].append(r_squared(h, X[test], y[test]))
    return [CvReport(s, float(np.median(s)), seed, float(lam), repetitions, folds) for s, lam in zip(scores, lams)]


def select_lambda(X, y, grid: Sequence[float] = DEFAULT_LAMBDA_GRID, seed: int = 0, tol: float = 1e-8):
    """Pick the grid value with the best mean CV R²; ties go to the larger lambda."""
    grid = [float(g) for g in grid]
    if not grid:
        raise RegressionError("empty lambda grid")
    reports = _cv_path(X, y, grid, seed, 10, 5, tol)
    best = None
    for lam, rep in zip(grid, reports):
        score = float(np.mean(rep.per_fold_r2))
        if best is None or score > best[0] or (score == best[0] and lam > best[1]):
            best = (score, lam, rep)
    return best[1], best[2], reports
