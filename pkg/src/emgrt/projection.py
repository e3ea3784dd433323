"""Fisher discriminant feature projection.

Maps H-dimensional feature vectors onto a p-dimensional subspace chosen
to maximise between-class over within-class scatter. Two routes are
provided: the linear path solves the generalized eigenproblem on the
scatter matrices directly and applies the affine map (f - mean) @ E.T in
evaluation; the kernelized path works in the dual of a Gaussian kernel
and recovers nonlinear class boundaries that the linear map cannot.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist, pdist

from .errors import DataError, NumericError, ParameterError
from .features import FeatureVector

# Ridge scale factors: the linear solver adds ridge * tr(S_w)/H to S_w's
# diagonal, the kernel solver adds ridge * tr(N)/J to N's.
DEFAULT_FISHER_RIDGE = 1e-3
DEFAULT_KERNEL_RIDGE = 1e-3


@dataclass(frozen=True)
class TrainingMatrix:
    """Feature matrix (one row per window) with integer class labels.

    Every class in [0, n_classes) must appear at least twice so the
    within-class scatter of each class is defined.
    """

    features: np.ndarray  # (J, H)
    labels: np.ndarray  # (J,) ints in [0, n_classes)
    n_classes: int

    def __post_init__(self):
        G = np.array(self.features, dtype=np.float64)
        y = np.asarray(self.labels)
        if G.ndim != 2:
            raise ParameterError(f"features must be 2-D (rows x dims), got {G.ndim}-D")
        if y.shape != (G.shape[0],):
            raise ParameterError(f"labels shape {y.shape} does not match {G.shape[0]} feature rows")
        if not np.isfinite(G).all():
            raise DataError("training features contain non-finite entries")
        if self.n_classes < 2:
            raise ParameterError(f"need at least 2 classes, got {self.n_classes}")
        y = y.astype(np.int64)
        if y.min() < 0 or y.max() >= self.n_classes:
            raise ParameterError(f"labels must lie in [0, {self.n_classes})")
        counts = np.bincount(y, minlength=self.n_classes)
        thin = np.flatnonzero(counts < 2)
        if thin.size:
            raise ParameterError(f"every class needs at least 2 samples; class {int(thin[0])} has {int(counts[thin[0]])}")
        G.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", G)
        object.__setattr__(self, "labels", y)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_dims(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class LinearProjectionModel:
    """Affine discriminant map: project(f) = (f - mean) @ components.T.

    ``components`` rows are unit-norm generalized eigenvectors ordered by
    descending eigenvalue, each sign-fixed so its largest-magnitude
    entry is positive.
    """

    mean: np.ndarray  # (H,)
    components: np.ndarray  # (p, H)
    eigenvalues: np.ndarray  # (p,)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        E = np.asarray(self.components, dtype=np.float64)
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        if mean.ndim != 1 or E.ndim != 2 or E.shape[1] != mean.size:
            raise ParameterError("components must be (p, H) with H matching the mean vector")
        if ev.shape != (E.shape[0],):
            raise ParameterError("eigenvalues must have one entry per component row")
        if not (np.isfinite(mean).all() and np.isfinite(E).all() and np.isfinite(ev).all()):
            raise DataError("projection model contains non-finite entries")
        if (np.abs(E).max(axis=1) == 0).any():
            raise DataError("projection model contains an all-zero component row")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "components", E)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def n_dims(self) -> int:
        return self.components.shape[1]


@dataclass(frozen=True)
class KernelProjectionModel:
    """Gaussian-kernel discriminant map in the dual representation.

    Projects via dual_coefs @ (k(f) - kernel_mean) where
    k(f)_i = exp(-||f - train_vectors[i]||^2 / (2 gamma^2)) and
    kernel_mean is the mean kernel column of the training set.
    """

    train_vectors: np.ndarray  # (J, H)
    gamma: float
    dual_coefs: np.ndarray  # (p, J)
    kernel_mean: np.ndarray  # (J,)
    eigenvalues: np.ndarray  # (p,)

    def __post_init__(self):
        X = np.asarray(self.train_vectors, dtype=np.float64)
        A = np.asarray(self.dual_coefs, dtype=np.float64)
        km = np.asarray(self.kernel_mean, dtype=np.float64)
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        if X.ndim != 2 or A.ndim != 2 or A.shape[1] != X.shape[0] or km.shape != (X.shape[0],):
            raise ParameterError("dual coefficients and kernel mean must match the retained training set")
        if ev.shape != (A.shape[0],):
            raise ParameterError("eigenvalues must have one entry per dual direction")
        if not self.gamma > 0:
            raise ParameterError(f"kernel bandwidth gamma must be positive, got {self.gamma}")
        if not (np.isfinite(X).all() and np.isfinite(A).all() and np.isfinite(km).all()):
            raise DataError("kernel projection model contains non-finite entries")
        object.__setattr__(self, "train_vectors", X)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "dual_coefs", A)
        object.__setattr__(self, "kernel_mean", km)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def n_components(self) -> int:
        return self.dual_coefs.shape[0]

    @property
    def n_dims(self) -> int:
        return self.train_vectors.shape[1]


@dataclass(frozen=True)
class ScatterMatrix:
    """Projected training vectors with their class labels."""

    projected: np.ndarray  # (J, p)
    labels: np.ndarray  # (J,)
    n_classes: int

    def __post_init__(self):
        D = np.asarray(self.projected, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.int64)
        if D.ndim != 2 or y.shape != (D.shape[0],):
            raise ParameterError("projected rows and labels must align")
        if not np.isfinite(D).all():
            raise DataError("scatter matrix contains non-finite entries")
        if self.n_classes < 1 or (y.size and (y.min() < 0 or y.max() >= self.n_classes)):
            raise ParameterError(f"labels must lie in [0, {self.n_classes})")
        object.__setattr__(self, "projected", D)
        object.__setattr__(self, "labels", y)

    @property
    def n_samples(self) -> int:
        return self.projected.shape[0]

    @property
    def n_components(self) -> int:
        return self.projected.shape[1]


def _as_vector(f, n_dims: int) -> np.ndarray:
    x = f.values if isinstance(f, FeatureVector) else np.asarray(f, dtype=np.float64)
    if x.shape != (n_dims,):
        raise ParameterError(f"expected a length-{n_dims} vector, got shape {x.shape}")
    return x


def _fix_signs(E: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each row made positive, so models are
    # comparable across runs and serializations.
    idx = np.abs(E).argmax(axis=1)
    signs = np.sign(E[np.arange(E.shape[0]), idx])
    signs[signs == 0] = 1.0
    return E * signs[:, None]


def _top_generalized_eigvecs(A: np.ndarray, B: np.ndarray, p: int, what: str):
    """Top-p solutions of A v = lambda B v for symmetric A and PD B."""
    try:
        w, V = scipy.linalg.eigh(A, B)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        cond = float(np.linalg.cond(B))
        raise NumericError(f"{what} eigenproblem failed (matrix condition ~{cond:.3e}): {exc}") from exc
    if not np.isfinite(w).all() or not np.isfinite(V).all():
        raise NumericError(f"{what} eigenproblem returned non-finite values")
    order = np.argsort(w)[::-1][:p]
    return w[order], V[:, order].T  # rows are eigenvectors


def _scatter_matrices(G: np.ndarray, y: np.ndarray, n_classes: int):
    H = G.shape[1]
    f_bar = G.mean(axis=0)
    Xc = G - f_bar
    S_w = np.zeros((H, H))
    S_b = np.zeros((H, H))
    for c in range(n_classes):
        Xi = Xc[y == c]
        mu = Xi.mean(axis=0)
        Z = Xi - mu
        S_w += Z.T @ Z
        S_b += Xi.shape[0] * np.outer(mu, mu)
    return f_bar, S_w, S_b


def train_linear_fisher(train: TrainingMatrix, p: int | None = None,
                        ridge: float = DEFAULT_FISHER_RIDGE) -> LinearProjectionModel:
    """Fit the linear Fisher discriminant projection.

    Solves S_b e = lambda (S_w + ridge * tr(S_w)/H * I) e and keeps the
    top-p eigenvectors, where S_w and S_b are the within- and
    between-class scatter matrices of the globally centered data.

    Parameters
    ----------
    train : TrainingMatrix
        Feature rows and class labels.
    p : int, optional
        Output dimension; defaults to min(n_classes - 1, H). Must not
        exceed n_classes - 1 (the rank of S_b).
    ridge : float
        Scale-aware regularization factor added to S_w's diagonal.

    Raises
    ------
    ParameterError
        If p is out of range or ridge is negative.
    NumericError
        If the regularized within-class scatter is singular.
    """
    G, y, v = train.features, train.labels, train.n_classes
    H = G.shape[1]
    if ridge < 0:
        raise ParameterError(f"ridge must be non-negative, got {ridge}")
    if p is None:
        p = min(v - 1, H)
    if not 1 <= p <= v - 1:
        raise ParameterError(f"p must lie in [1, {v - 1}] for {v} classes, got {p}")
    if p > H:
        raise ParameterError(f"p must not exceed the feature dimension {H}, got {p}")
    if ridge == 0 and train.n_samples <= H:
        raise ParameterError(
            f"J={train.n_samples} <= H={H} makes the within-class scatter singular; a positive ridge is required"
        )
    f_bar, S_w, S_b = _scatter_matrices(G, y, v)
    S_w_reg = S_w + (ridge * np.trace(S_w) / H) * np.eye(H)
    eigvals, E = _top_generalized_eigvecs(S_b, S_w_reg, p, "linear Fisher")
    E = E / np.linalg.norm(E, axis=1, keepdims=True)
    E = _fix_signs(E)
    return LinearProjectionModel(mean=f_bar, components=E, eigenvalues=eigvals)


def _gaussian_kernel(X: np.ndarray, Y: np.ndarray, gamma: float) -> np.ndarray:
    return np.exp(cdist(X, Y, "sqeuclidean") / (-2.0 * gamma * gamma))


def median_pairwise_distance(X: np.ndarray) -> float:
    """Median heuristic bandwidth: median Euclidean distance over all pairs."""
    d = pdist(np.asarray(X, dtype=np.float64))
    return float(np.median(d)) if d.size else 0.0


def train_kernel_fisher(train: TrainingMatrix, p: int | None = None,
                        gamma: float | None = None,
                        ridge: float = DEFAULT_KERNEL_RIDGE) -> KernelProjectionModel:
    """Fit the kernel Fisher discriminant projection in the dual.

    Builds the Gaussian kernel matrix K_ij = exp(-||f_i - f_j||^2 /
    (2 gamma^2)), forms the multi-class between-class matrix M from the
    per-class kernel-column means and the within-class matrix N from the
    class column blocks, then solves M a = lambda (N + ridge * tr(N)/J *
    I) a for the top-p dual directions. The whole training set is
    retained in the model; evaluation projects an unseen f as
    dual_coefs @ (k(f) - kernel_mean).

    Parameters
    ----------
    train : TrainingMatrix
    p : int, optional
        Output dimension, default min(n_classes - 1, J).
    gamma : float, optional
        Kernel bandwidth; None selects the median pairwise training
        distance (median heuristic).
    ridge : float
        Scale-aware regularization factor for the dual within matrix.
    """
    G, y, v = train.features, train.labels, train.n_classes
    J = G.shape[0]
    if gamma is None:
        gamma = median_pairwise_distance(G)
        if gamma <= 0:
            gamma = 1.0  # all training points coincide
    if not gamma > 0:
        raise ParameterError(f"kernel bandwidth gamma must be positive, got {gamma}")
    if not ridge > 0:
        raise ParameterError(f"kernel ridge must be positive, got {ridge}")
    if p is None:
        p = min(v - 1, J)
    if not 1 <= p <= v - 1:
        raise ParameterError(f"p must lie in [1, {v - 1}] for {v} classes, got {p}")
    K = _gaussian_kernel(G, G, gamma)
    k_mean = K.mean(axis=1)
    M = np.zeros((J, J))
    N = np.zeros((J, J))
    for c in range(v):
        idx = np.flatnonzero(y == c)
        Kc = K[:, idx]
        m_c = Kc.mean(axis=1)
        diff = m_c - k_mean
        M += idx.size * np.outer(diff, diff)
        N += Kc @ Kc.T - idx.size * np.outer(m_c, m_c)
    # Absolute jitter floor keeps N_reg positive definite even when the
    # kernel saturates (huge gamma) and tr(N) cancels to rounding noise.
    reg = max(ridge * np.trace(N) / J, 0.0) + 1e-12 * J
    N_reg = N + reg * np.eye(J)
    eigvals, A = _top_generalized_eigvecs(M, N_reg, p, "kernel Fisher")
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    A = _fix_signs(A)
    return KernelProjectionModel(
        train_vectors=G,
        gamma=float(gamma),
        dual_coefs=A,
        kernel_mean=k_mean,
        eigenvalues=eigvals,
    )


def project(model: LinearProjectionModel, f) -> np.ndarray:
    """Apply the linear map (f - mean) @ components.T."""
    x = _as_vector(f, model.n_dims)
    return (x - model.mean) @ model.components.T


def project_kernel(model: KernelProjectionModel, f) -> np.ndarray:
    """Evaluate the dual expansion dual_coefs @ (k(f) - kernel_mean)."""
    x = _as_vector(f, model.n_dims)
    diff = model.train_vectors - x
    k = np.exp((diff * diff).sum(axis=1) / (-2.0 * model.gamma * model.gamma))
    return model.dual_coefs @ (k - model.kernel_mean)


def project_rows(model, F: np.ndarray) -> np.ndarray:
    """Project each row of a (J, H) matrix; returns (J, p)."""
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2 or F.shape[1] != model.n_dims:
        raise ParameterError(f"expected rows of length {model.n_dims}, got shape {F.shape}")
    if isinstance(model, LinearProjectionModel):
        return (F - model.mean) @ model.components.T
    K = _gaussian_kernel(model.train_vectors, F, model.gamma)
    return (model.dual_coefs @ (K - model.kernel_mean[:, None])).T


def make_scatter(model, train: TrainingMatrix) -> ScatterMatrix:
    """Project every training row, carrying the labels through."""
    D = project_rows(model, train.features)
    return ScatterMatrix(projected=D, labels=train.labels, n_classes=train.n_classes)
