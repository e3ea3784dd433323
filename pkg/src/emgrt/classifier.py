"""Gaussian radial-basis-function network with a ridge-trained linear readout.

The hidden layer holds M centers with per-node widths; node j responds
with exp(-||s - e_j||^2 / (2 sigma_j^2)), maximal at its center and
dropping rapidly to zero away from it. The output layer is a linear
combination of the node activations plus an optional bias, and the
decided class is the argmax of the output scores (lowest index on ties).
Training is center selection by seeded k-means, a nearest-neighbor width
rule, then a regularized least-squares solve for the readout.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist

from .errors import DataError, NumericError, ParameterError
from .projection import ScatterMatrix

DEFAULT_N_CENTERS = 14
DEFAULT_OUTPUT_RIDGE = 1e-6
WIDTH_FLOOR = 1e-6

_KMEANS_MAX_ITER = 200
_KMEANS_REL_TOL = 1e-6


@dataclass(frozen=True)
class RbfModel:
    """Immutable RBF network parameters."""

    centers: np.ndarray  # (M, p)
    widths: np.ndarray  # (M,)
    weights: np.ndarray  # (v, M)
    bias: np.ndarray  # (v,)
    class_names: tuple[str, ...] | None = None

    def __post_init__(self):
        e = np.asarray(self.centers, dtype=np.float64)
        s = np.asarray(self.widths, dtype=np.float64)
        W = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.bias, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] < 1:
            raise ParameterError("centers must be a non-empty (M, p) array")
        M = e.shape[0]
        if s.shape != (M,) or W.ndim != 2 or W.shape[1] != M or b.shape != (W.shape[0],):
            raise ParameterError("widths, weights, and bias shapes must agree with the centers")
        if not (s > 0).all():
            raise ParameterError("all widths must be positive")
        if not (np.isfinite(e).all() and np.isfinite(s).all() and np.isfinite(W).all() and np.isfinite(b).all()):
            raise DataError("RBF model contains non-finite parameters")
        if self.class_names is not None:
            names = tuple(self.class_names)
            if len(names) != W.shape[0]:
                raise ParameterError(f"{len(names)} class names for {W.shape[0]} output nodes")
            object.__setattr__(self, "class_names", names)
        object.__setattr__(self, "centers", e)
        object.__setattr__(self, "widths", s)
        object.__setattr__(self, "weights", W)
        object.__setattr__(self, "bias", b)

    @property
    def n_centers(self) -> int:
        return self.centers.shape[0]

    @property
    def n_dims(self) -> int:
        return self.centers.shape[1]

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class Prediction:
    """Output scores plus the argmax decision (lowest index on ties)."""

    scores: np.ndarray  # (v,)
    decided_class: int

    def __post_init__(self):
        y = np.asarray(self.scores, dtype=np.float64)
        if y.ndim != 1 or y.size < 1:
            raise ParameterError("scores must be a non-empty vector")
        if self.decided_class != int(np.argmax(y)):
            raise ParameterError("decided_class must be the lowest-index argmax of the scores")
        object.__setattr__(self, "scores", y)
        object.__setattr__(self, "decided_class", int(self.decided_class))


def activations(s, model: RbfModel) -> np.ndarray:
    """Hidden-layer responses exp(-||s - e_j||^2 / (2 sigma_j^2)), in (0, 1]."""
    x = np.asarray(s, dtype=np.float64)
    if x.shape != (model.n_dims,):
        raise ParameterError(f"expected a length-{model.n_dims} input, got shape {x.shape}")
    diff = model.centers - x
    d2 = (diff * diff).sum(axis=1)
    return np.exp(d2 / (-2.0 * model.widths * model.widths))


def predict(model: RbfModel, s) -> Prediction:
    """Evaluate weights @ activations + bias and take the argmax."""
    psi = activations(s, model)
    scores = model.weights @ psi + model.bias
    return Prediction(scores=scores, decided_class=int(np.argmax(scores)))


def _as_points(data) -> np.ndarray:
    X = data.projected if isinstance(data, ScatterMatrix) else np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise ParameterError("expected a 2-D array of points")
    return X


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[int(rng.integers(X.shape[0]))]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(X.shape[0]))
        else:
            idx = int(rng.choice(X.shape[0], p=d2 / total))
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    return centers


def fit_centers(data, n_centers: int, seed=0) -> np.ndarray:
    """Select M centers by k-means with k-means++ seeding.

    Lloyd iterations run until the relative inertia change drops below
    1e-6 or 200 iterations, whichever comes first; the result is
    deterministic for a given seed. Empty clusters are reseeded to the
    point currently farthest from its assigned center.
    """
    X = _as_points(data)
    if not 1 <= n_centers <= X.shape[0]:
        raise ParameterError(f"need 1 <= n_centers <= {X.shape[0]} points, got {n_centers}")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(X, n_centers, rng)
    prev_inertia = np.inf
    for _ in range(_KMEANS_MAX_ITER):
        d2 = cdist(X, centers, "sqeuclidean")
        assign = d2.argmin(axis=1)
        own = d2[np.arange(X.shape[0]), assign]
        inertia = own.sum()
        new_centers = centers.copy()
        for j in range(n_centers):
            mask = assign == j
            if mask.any():
                new_centers[j] = X[mask].mean(axis=0)
            else:
                far = int(own.argmax())
                new_centers[j] = X[far]
                own[far] = 0.0
        centers = new_centers
        if inertia == 0 or abs(prev_inertia - inertia) <= _KMEANS_REL_TOL * inertia:
            break
        prev_inertia = inertia
    return centers


def fit_widths(centers: np.ndarray, data=None) -> np.ndarray:
    """Per-node widths from neighboring centers.

    sigma_j is the mean distance from center j to its two nearest other
    centers (one when M == 2), floored at 1e-6. A single center takes
    the diameter of ``data`` instead, since it has no neighbors.
    """
    e = np.asarray(centers, dtype=np.float64)
    if e.ndim != 2 or e.shape[0] < 1:
        raise ParameterError("centers must be a non-empty (M, p) array")
    M = e.shape[0]
    if M == 1:
        diameter = 0.0
        if data is not None:
            X = _as_points(data)
            diameter = float(cdist(X, X).max()) if X.shape[0] > 1 else 0.0
        return np.array([max(diameter, WIDTH_FLOOR)])
    dist = cdist(e, e)
    np.fill_diagonal(dist, np.inf)
    k = min(2, M - 1)
    nearest = np.sort(dist, axis=1)[:, :k]
    return np.maximum(nearest.mean(axis=1), WIDTH_FLOOR)


def _activation_matrix(X: np.ndarray, centers: np.ndarray, widths: np.ndarray) -> np.ndarray:
    return np.exp(cdist(X, centers, "sqeuclidean") / (-2.0 * widths * widths))


def fit_output_weights(scatter: ScatterMatrix, centers: np.ndarray, widths: np.ndarray,
                       ridge: float = DEFAULT_OUTPUT_RIDGE, include_bias: bool = True):
    """Solve the regularized least-squares readout to one-hot targets.

    Stacks the J x (M+1) activation-plus-bias matrix Phi and solves the
    normal equations (Phi.T Phi + ridge * P) B = Phi.T T where P leaves
    the bias column unpenalized; returns (weights, bias). With
    include_bias=False the bias is fixed at zero.

    Raises NumericError when the system is singular (possible only
    without ridge) or the normal-equation residual exceeds 1e-8 relative.
    """
    if ridge < 0:
        raise ParameterError(f"ridge must be non-negative, got {ridge}")
    X, y, v = scatter.projected, scatter.labels, scatter.n_classes
    J = X.shape[0]
    Phi = _activation_matrix(X, centers, widths)
    if include_bias:
        Phi = np.hstack([Phi, np.ones((J, 1))])
    targets = np.zeros((J, v))
    targets[np.arange(J), y] = 1.0
    lhs = Phi.T @ Phi
    if ridge > 0:
        penalty = np.ones(Phi.shape[1])
        if include_bias:
            penalty[-1] = 0.0
        lhs = lhs + ridge * np.diag(penalty)
    rhs = Phi.T @ targets
    try:
        beta = scipy.linalg.solve(lhs, rhs, assume_a="pos")
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        cond = float(np.linalg.cond(lhs))
        raise NumericError(f"readout normal equations are singular (condition ~{cond:.3e}); add ridge") from exc
    residual = np.linalg.norm(lhs @ beta - rhs) / max(np.linalg.norm(rhs), 1e-300)
    if not np.isfinite(beta).all() or residual > 1e-8:
        raise NumericError(f"readout solve residual {residual:.3e} exceeds 1e-8; system ill-conditioned")
    if include_bias:
        return beta[:-1].T.copy(), beta[-1].copy()
    return beta.T.copy(), np.zeros(v)


def train(scatter: ScatterMatrix, n_centers: int = DEFAULT_N_CENTERS,
          ridge: float = DEFAULT_OUTPUT_RIDGE, seed=0,
          class_names: tuple[str, ...] | None = None,
          include_bias: bool = True) -> RbfModel:
    """fit_centers -> fit_widths -> fit_output_weights, bundled as a model."""
    centers = fit_centers(scatter, n_centers, seed=seed)
    widths = fit_widths(centers, scatter)
    weights, bias = fit_output_weights(scatter, centers, widths, ridge=ridge, include_bias=include_bias)
    return RbfModel(centers=centers, widths=widths, weights=weights, bias=bias, class_names=class_names)
