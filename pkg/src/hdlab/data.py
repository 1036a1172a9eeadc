"""Data containers, synthetic generators, and basic sample statistics.

All indices in the public API are 0-based. CSV files use math-style column
headers x1..xd plus an optional response column named ``y``.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateColumnError,
    UndefinedCorrelationError,
    ValidationError,
)


def _as_matrix(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValidationError("X must be a 2-d array, got ndim=%d" % X.ndim)
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise ValidationError("X must have at least one row and one column")
    if not np.all(np.isfinite(X)):
        raise ValidationError("X contains non-finite entries")
    return X


@dataclass(frozen=True)
class Dataset:
    """Design matrix with an optional response vector.

    Arguments
    ---------
    X : (n, d) array of finite floats.
    y : optional (n,) response vector.
    column_names : optional tuple of d names; defaults to x1..xd on CSV output.
    """

    X: np.ndarray
    y: np.ndarray = None
    column_names: tuple = None

    def __post_init__(self):
        X = _as_matrix(self.X)
        X.setflags(write=False)
        object.__setattr__(self, "X", X)
        if self.y is not None:
            y = np.asarray(self.y, dtype=np.float64)
            if y.ndim != 1 or y.shape[0] != X.shape[0]:
                raise ValidationError(
                    "y must be 1-d with length %d, got shape %s" % (X.shape[0], y.shape)
                )
            if not np.all(np.isfinite(y)):
                raise ValidationError("y contains non-finite entries")
            y.setflags(write=False)
            object.__setattr__(self, "y", y)
        if self.column_names is not None:
            names = tuple(str(c) for c in self.column_names)
            if len(names) != X.shape[1]:
                raise ValidationError(
                    "column_names has %d entries for %d columns" % (len(names), X.shape[1])
                )
            object.__setattr__(self, "column_names", names)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    def name_of(self, j):
        if self.column_names is not None:
            return self.column_names[j]
        return "x%d" % (j + 1)

    def require_y(self):
        if self.y is None:
            raise ValidationError("this operation needs a response vector y")
        return self.y


@dataclass(frozen=True)
class LinearModelSpec:
    """Sparse linear model y = X beta + eps with optional endogenous columns.

    beta maps 0-based column index -> coefficient. endogenous_set maps column
    index -> coupling strength w. With endogenous_mode="direct" the noise gains
    w * X_j (so E[eps X_j] != 0); with "quadratic" it gains w * (X_j^2 - 1),
    which keeps E[eps X_j] = 0 while E[eps X_j^2] != 0.
    """

    n: int
    d: int
    beta: dict
    noise_sd: float = 1.0
    endogenous_set: dict = field(default_factory=dict)
    endogenous_mode: str = "direct"

    def __post_init__(self):
        if self.n < 2 or self.d < 1:
            raise ValidationError("need n >= 2 and d >= 1")
        for j in self.beta:
            if not 0 <= int(j) < self.d:
                raise ValidationError("beta index %r outside [0, %d)" % (j, self.d))
        for j, w in self.endogenous_set.items():
            if not 0 <= int(j) < self.d:
                raise ValidationError("endogenous index %r outside [0, %d)" % (j, self.d))
            if not np.isfinite(w):
                raise ValidationError("coupling strength must be finite")
        if not (np.isfinite(self.noise_sd) and self.noise_sd >= 0):
            raise ValidationError("noise_sd must be finite and >= 0")
        if self.endogenous_mode not in ("direct", "quadratic"):
            raise ValidationError(
                "endogenous_mode must be 'direct' or 'quadratic', got %r" % self.endogenous_mode
            )

    def beta_vector(self):
        b = np.zeros(self.d)
        for j, v in self.beta.items():
            b[int(j)] = v
        return b


@dataclass(frozen=True)
class TwoClassGaussianSpec:
    """Two Gaussian classes with identity covariance and given mean vectors."""

    n_per_class: int
    d: int
    mu1: np.ndarray
    mu2: np.ndarray

    def __post_init__(self):
        if self.n_per_class < 2:
            raise ValidationError("need n_per_class >= 2")
        for name in ("mu1", "mu2"):
            mu = np.asarray(getattr(self, name), dtype=np.float64)
            if mu.shape != (self.d,):
                raise ValidationError("%s must have shape (%d,)" % (name, self.d))
            if not np.all(np.isfinite(mu)):
                raise ValidationError("%s contains non-finite entries" % name)
            object.__setattr__(self, name, mu)


def gen_iid_gaussian(n, d, seed):
    """Pure-noise design: n x d independent standard normal entries."""
    rng = np.random.default_rng(seed)
    return Dataset(rng.standard_normal((n, d)))


def gen_two_class(spec, seed):
    """Two-class Gaussian sample; rows 0..n-1 are class 0, the rest class 1.

    Returns a Dataset whose y holds the class labels (0.0 or 1.0).
    """
    rng = np.random.default_rng(seed)
    n = spec.n_per_class
    X1 = spec.mu1 + rng.standard_normal((n, spec.d))
    X2 = spec.mu2 + rng.standard_normal((n, spec.d))
    X = np.vstack([X1, X2])
    labels = np.repeat([0.0, 1.0], n)
    return Dataset(X, labels)


def gen_linear(spec, seed):
    """Draw X ~ N(0, I), then y = X beta + eps per the model spec.

    The endogenous couplings are added to eps in increasing column order so
    the output depends only on (spec, seed).
    """
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((spec.n, spec.d))
    eps = spec.noise_sd * rng.standard_normal(spec.n)
    for j in sorted(int(k) for k in spec.endogenous_set):
        w = spec.endogenous_set[j]
        if spec.endogenous_mode == "direct":
            eps = eps + w * X[:, j]
        else:
            eps = eps + w * (X[:, j] ** 2 - 1.0)
    y = X @ spec.beta_vector() + eps
    return Dataset(X, y)


def gen_spiked(n, d, spike_count=10, spike_sd=5.0, seed=0):
    """Independent normal columns where the first spike_count have sd spike_sd.

    A cheap stand-in for data with a genuine low-dimensional signal on top of
    isotropic noise; useful for comparing projection methods.
    """
    if not 0 <= spike_count <= d:
        raise ConfigurationError("spike_count must lie in [0, d]")
    if not (np.isfinite(spike_sd) and spike_sd > 0):
        raise ConfigurationError("spike_sd must be positive")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    X[:, :spike_count] *= spike_sd
    return Dataset(X)


def standardize(data):
    """Center every column and scale to unit standard deviation (ddof=1).

    Raises DegenerateColumnError naming the first constant column. Requires
    n >= 2. The response is passed through untouched.
    """
    if data.n < 2:
        raise ValidationError("standardize needs at least 2 rows")
    X = data.X
    mu = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1)
    bad = np.flatnonzero(sd == 0.0)
    if bad.size:
        j = int(bad[0])
        raise DegenerateColumnError("column %s is constant" % data.name_of(j))
    return Dataset((X - mu) / sd, data.y, data.column_names)


def is_standardized(X, mean_tol=1e-8, sd_tol=1e-6):
    """True when every column has mean ~0 and sample sd ~1."""
    if X.shape[0] < 2:
        return False
    mu = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1)
    return bool(np.max(np.abs(mu)) <= mean_tol and np.max(np.abs(sd - 1.0)) <= sd_tol)


def sample_corr(x, y):
    """Pearson correlation of two vectors, clipped into [-1, 1].

    Raises UndefinedCorrelationError when either vector is constant.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise ValidationError("inputs must be 1-d vectors of equal length")
    if x.shape[0] < 2:
        raise ValidationError("correlation needs at least 2 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    nx = math.sqrt(float(xc @ xc))
    ny = math.sqrt(float(yc @ yc))
    if nx == 0.0 or ny == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant vector")
    r = float(xc @ yc) / (nx * ny)
    return float(min(1.0, max(-1.0, r)))


def write_csv(data, path):
    """Write the dataset as CSV: named feature columns, response last as 'y'.

    Floats are written with repr so a read-back reproduces the array exactly.
    """
    names = [data.name_of(j) for j in range(data.d)]
    if data.y is not None:
        names = names + ["y"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for i in range(data.n):
            row = [repr(float(v)) for v in data.X[i]]
            if data.y is not None:
                row.append(repr(float(data.y[i])))
            w.writerow(row)


def read_csv(path, y_col="y"):
    """Read a Dataset written by write_csv (or any numeric CSV with a header).

    The column named y_col (default 'y'), when present, becomes the response.
    Pass y_col=None to treat every column as a feature.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError("empty CSV file: %s" % path)
        rows = [r for r in reader if r]
    if not rows:
        raise ValidationError("CSV has a header but no data rows: %s" % path)
    try:
        M = np.array([[float(v) for v in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise ValidationError("non-numeric cell in %s (%s)" % (path, exc))
    if M.shape[1] != len(header):
        raise ValidationError("row width does not match header in %s" % path)
    if y_col is not None and y_col in header:
        yi = header.index(y_col)
        keep = [j for j in range(len(header)) if j != yi]
        return Dataset(M[:, keep], M[:, yi], tuple(header[j] for j in keep))
    return Dataset(M, None, tuple(header))
