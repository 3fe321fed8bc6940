"""Stochastic gradient training of the simplicial-map classifier.

Each training point touches only the weight columns of its embedding
support indices: with probabilities s and one-hot target y the gradient
of the cross-entropy w.r.t. weight column t is (s - y) * xi_t, so one
SGD step updates at most n+2 columns.  Embeddings are precomputed once
per space because they never change during training.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .embedding import fit_space, xi_batch
from .model import (
    LOSS_FLOOR,
    LabelEncoding,
    SmnnModel,
    init_weights,
    logits,
    softmax,
)

INIT_MODES = ("uniform01", "one_hot")


@dataclass
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 100
    seed: int = 0
    init_mode: str = "uniform01"
    shuffle: bool = True

    def __post_init__(self):
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive, got %g" % self.learning_rate)
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ValueError("epochs must be a positive integer, got %r" % (self.epochs,))
        self.epochs = int(self.epochs)
        if self.init_mode not in INIT_MODES:
            raise ValueError("init_mode must be one of %r" % (INIT_MODES,))


@dataclass
class TrainReport:
    """Per-epoch running mean loss and accuracy, plus wall time in seconds.

    Epoch metrics are accumulated sample by sample as the weights move,
    so they reflect the state of the model during that epoch.
    """

    history: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def final_loss(self):
        return self.history[-1][0]

    @property
    def final_accuracy(self):
        return self.history[-1][1]


@dataclass
class CachedEmbedding:
    """Embeddings and encoded labels of the training set, fixed for a space."""

    xis: list
    y: np.ndarray

    def __len__(self):
        return len(self.xis)


@dataclass
class SparseGradient:
    """Gradient block restricted to the touched weight columns."""

    indices: np.ndarray
    block: np.ndarray

    def to_dense(self, m):
        k = self.block.shape[0]
        dense = np.zeros((k, m))
        dense[:, self.indices] = self.block
        return dense


def precompute_embeddings(space, train_points, y_encoded):
    """Embed every training point once; y_encoded are label indices."""
    pts = np.asarray(
        train_points.points if hasattr(train_points, "points") else train_points,
        dtype=np.float64,
    )
    y = np.asarray(y_encoded, dtype=np.int64)
    if y.shape != (pts.shape[0],):
        raise ValueError("labels and points disagree: %d vs %d" % (y.size, pts.shape[0]))
    return CachedEmbedding(xis=xi_batch(space, pts), y=y)


def _sparse_probs(weights, cols, vals):
    z = weights[:, cols] @ vals
    shifted = z - z.max()
    e = np.exp(shifted)
    return e / e.sum()


def gradient(weights, xi, y_index):
    """Cross-entropy gradient for one sample, restricted to touched columns."""
    cols = np.asarray(xi.indices, dtype=np.int64)
    vals = np.asarray(xi.values, dtype=np.float64)
    g = _sparse_probs(weights, cols, vals).copy()
    if not 0 <= y_index < weights.shape[0]:
        raise ValueError("label index %d out of range" % y_index)
    g[y_index] -= 1.0
    return SparseGradient(indices=cols, block=np.outer(g, vals))


def _step(weights, cols, vals, y_index, eta):
    """One in-place SGD update; returns the pre-update loss and hit flag."""
    s = _sparse_probs(weights, cols, vals)
    step_loss = -np.log(max(s[y_index], LOSS_FLOOR))
    hit = int(np.argmax(s)) == y_index
    g = s.copy()
    g[y_index] -= 1.0
    weights[:, cols] -= eta * np.outer(g, vals)
    return float(step_loss), hit


def sgd_step(weights, xi, y_index, eta):
    """Apply one closed-form SGD update in place and return the weights."""
    if eta <= 0.0:
        raise ValueError("learning rate must be positive, got %g" % eta)
    cols = np.asarray(xi.indices, dtype=np.int64)
    vals = np.asarray(xi.values, dtype=np.float64)
    _step(weights, cols, vals, int(y_index), eta)
    return weights


def train(train_points, train_labels, support_indices, config, radius_margin=1.0):
    """Fit the space, precompute embeddings and run SGD.

    Returns the trained model and a report.  Two calls with identical
    inputs and config produce bit-identical weight matrices.
    """
    pts = np.asarray(
        train_points.points if hasattr(train_points, "points") else train_points,
        dtype=np.float64,
    )
    labels = [str(v) for v in train_labels]
    if len(labels) != pts.shape[0]:
        raise ValueError("labels and points disagree: %d vs %d" % (len(labels), pts.shape[0]))
    encoding = LabelEncoding.from_labels(labels)
    y = np.array([encoding.index(v) for v in labels], dtype=np.int64)

    space = fit_space(pts, support_indices, radius_margin=radius_margin)
    support_labels = y[np.asarray(support_indices, dtype=np.int64)]
    cached = precompute_embeddings(space, pts, y)
    return train_cached(space, cached, support_labels, encoding, config)


def train_cached(space, cached, support_labels, encoding, config):
    """SGD over precomputed embeddings; lets callers sweep hyperparameters."""
    k = encoding.k
    m = space.support.size
    rng = np.random.default_rng(config.seed)
    weights = init_weights(config.init_mode, rng, k, m, support_labels)

    cols_list = [np.asarray(x.indices, dtype=np.int64) for x in cached.xis]
    vals_list = [np.asarray(x.values, dtype=np.float64) for x in cached.xis]
    y = cached.y
    n_rows = len(cached)
    eta = config.learning_rate

    history = []
    started = time.perf_counter()
    for _ in range(config.epochs):
        order = rng.permutation(n_rows) if config.shuffle else np.arange(n_rows)
        total = 0.0
        hits = 0
        for i in order:
            step_loss, hit = _step(weights, cols_list[i], vals_list[i], y[i], eta)
            total += step_loss
            hits += hit
        history.append((total / n_rows, hits / n_rows))
    report = TrainReport(history=history, wall_time=time.perf_counter() - started)

    model = SmnnModel(
        space=space,
        encoding=encoding,
        weights=weights,
        support_labels=np.asarray(support_labels, dtype=np.int64),
    )
    return model, report


@dataclass
class EvalReport:
    accuracy: float
    mean_loss: float
    confusion: np.ndarray
    n_out_of_hull: int

    def to_dict(self, encoding=None):
        out = {
            "accuracy": self.accuracy,
            "mean_loss": self.mean_loss,
            "confusion": self.confusion.tolist(),
            "n_out_of_hull": self.n_out_of_hull,
        }
        if encoding is not None:
            out["labels"] = list(encoding.labels)
        return out


def evaluate(model, points, labels):
    """Accuracy, mean loss and confusion counts on a labelled set.

    Points whose translation leaves the bounding ball cannot be embedded;
    they are scored as misclassified with chance-level loss log(k) and
    counted in n_out_of_hull together with the sphere-route points.
    """
    pts = np.asarray(
        points.points if hasattr(points, "points") else points, dtype=np.float64
    )
    labels = [str(v) for v in labels]
    if pts.ndim != 2 or pts.shape[1] != model.space.dim:
        raise ValueError("expected points of dimension %d" % model.space.dim)
    if len(labels) != pts.shape[0]:
        raise ValueError("labels and points disagree")
    y = np.array([model.encoding.index(v) for v in labels], dtype=np.int64)
    k = model.encoding.k

    translated = pts - model.space.centroid
    norms = np.linalg.norm(translated, axis=1)
    in_ball = norms <= model.space.radius + 1e-9

    confusion = np.zeros((k, k), dtype=np.int64)
    total_loss = 0.0
    hits = 0
    n_out = int(np.count_nonzero(~in_ball))

    inside_idx = np.nonzero(in_ball)[0]
    xis = xi_batch(model.space, pts[inside_idx]) if inside_idx.size else []
    for row, x in zip(inside_idx, xis):
        probs = softmax(logits(model, x))
        pred = int(np.argmax(probs))
        confusion[y[row], pred] += 1
        hits += pred == y[row]
        total_loss += -np.log(max(probs[y[row]], LOSS_FLOOR))
        if x.facet_used is not None:
            n_out += 1
    for row in np.nonzero(~in_ball)[0]:
        pred = (y[row] + 1) % k
        confusion[y[row], pred] += 1
        total_loss += np.log(k)

    n_rows = pts.shape[0]
    return EvalReport(
        accuracy=hits / n_rows,
        mean_loss=float(total_loss / n_rows),
        confusion=confusion,
        n_out_of_hull=n_out,
    )
