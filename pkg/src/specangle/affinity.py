"""Heat-kernel affinity graphs over sample sets.

The affinity between two spectra is exp(-||x_i - x_j||^2 / sigma). Weights are
computed densely over all pairs; an optional k-nearest-neighbor truncation is
available for large sample counts but is off by default.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import NonFiniteError, NonPositiveSigmaError, TooFewSamplesError

__all__ = [
    "AffinityMatrix",
    "heat_kernel_affinity",
    "degree_diagonal",
    "median_heuristic_sigma",
]


@dataclass(frozen=True)
class AffinityMatrix:
    """Dense pairwise heat-kernel weights.

    weights is symmetric with unit diagonal; sigma is the bandwidth used
    (squared-reflectance units). When built with k-nn truncation entries
    outside the kept neighborhoods are exactly zero.
    """

    weights: np.ndarray
    sigma: float

    def __post_init__(self):
        W = self.weights
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValueError(f"weights must be square, got shape {W.shape}")
        if not np.array_equal(W, W.T):
            raise ValueError("weights must be symmetric")
        if not np.all(np.diag(W) == 1.0):
            raise ValueError("diagonal entries must be exactly 1")
        if np.any(W < 0.0) or np.any(W > 1.0):
            raise ValueError("weights must lie in [0, 1]")


def _features_of(X):
    """Accept a SampleSet or a (d, n) array and return the feature matrix."""
    F = getattr(X, "features", X)
    F = np.asarray(F, dtype=float)
    if F.ndim != 2:
        raise ValueError(f"expected a (d, n) feature matrix, got shape {F.shape}")
    if not np.all(np.isfinite(F)):
        raise NonFiniteError("samples contain NaN or Inf")
    return F


def _pairwise_sq_dists(F):
    # pdist computes each unordered pair once, so the squareform is exactly
    # symmetric with an exactly zero diagonal.
    return squareform(pdist(F.T, metric="sqeuclidean"))


def heat_kernel_affinity(X, sigma, knn=None):
    """Dense heat-kernel affinity matrix over the samples of X.

    Parameters
    ----------
    X : SampleSet or (d, n) array_like
        Columns are samples.
    sigma : float
        Bandwidth, > 0. Distances are taken in raw spectral space.
    knn : int, optional
        If given, keep only the k largest weights per row (the unit diagonal
        always survives) and re-symmetrize by elementwise max. Off by default;
        the dense graph matches the all-pairs objective.

    Returns
    -------
    AffinityMatrix
    """
    if sigma <= 0:
        raise NonPositiveSigmaError(f"sigma must be > 0, got {sigma}")
    F = _features_of(X)
    if F.shape[1] < 1:
        raise TooFewSamplesError("need at least one sample")
    W = np.exp(-_pairwise_sq_dists(F) / sigma)
    np.fill_diagonal(W, 1.0)
    if knn is not None:
        n = W.shape[0]
        k = min(int(knn), n)
        keep = np.zeros_like(W, dtype=bool)
        # k largest per row; argpartition is enough, exact order irrelevant
        cols = np.argpartition(-W, kth=k - 1, axis=1)[:, :k]
        keep[np.arange(n)[:, None], cols] = True
        W = np.where(keep, W, 0.0)
        W = np.maximum(W, W.T)
        np.fill_diagonal(W, 1.0)
    return AffinityMatrix(weights=W, sigma=float(sigma))


def degree_diagonal(W):
    """Row sums of an affinity matrix, one entry per sample."""
    weights = W.weights if isinstance(W, AffinityMatrix) else np.asarray(W, dtype=float)
    return weights.sum(axis=1)


def median_heuristic_sigma(X):
    """Median of the pairwise squared distances, excluding zero-distance pairs.

    Falls back to 1.0 when every pair coincides. Raises TooFewSamplesError
    below two samples.
    """
    F = _features_of(X)
    if F.shape[1] < 2:
        raise TooFewSamplesError("median heuristic needs at least two samples")
    d2 = pdist(F.T, metric="sqeuclidean")
    d2 = d2[d2 > 0.0]
    if d2.size == 0:
        return 1.0
    return float(np.median(d2))
