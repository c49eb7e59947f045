"""Fully connected Q-network with hand-written backpropagation."""

import numpy as np

from ..errors import InvalidInputError, ShapeError


class QNetwork:
    """Affine layers with ReLU between them and a linear output layer.

    Weights are stored as ``(fan_in, fan_out)`` matrices so a batch of row
    vectors maps as ``x @ W + b``.
    """

    def __init__(self, sizes, weights=None, biases=None):
        self.sizes = tuple(int(s) for s in sizes)
        if len(self.sizes) < 2 or any(s < 1 for s in self.sizes):
            raise InvalidInputError(f"bad layer sizes {sizes}")
        if weights is None:
            weights = [np.zeros((i, o)) for i, o in zip(self.sizes[:-1], self.sizes[1:])]
        if biases is None:
            biases = [np.zeros(o) for o in self.sizes[1:]]
        self.weights = [np.array(w, dtype=float) for w in weights]
        self.biases = [np.array(b, dtype=float) for b in biases]
        for (i, o), w, b in zip(zip(self.sizes[:-1], self.sizes[1:]), self.weights, self.biases):
            if w.shape != (i, o) or b.shape != (o,):
                raise ShapeError("parameter shapes do not match layer sizes")

    @classmethod
    def initialized(cls, sizes, rng):
        """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases."""
        sizes = tuple(sizes)
        ws, bs = [], []
        for i, o in zip(sizes[:-1], sizes[1:]):
            lim = 1.0 / np.sqrt(i)
            ws.append(rng.uniform(-lim, lim, size=(i, o)))
            bs.append(rng.uniform(-lim, lim, size=o))
        return cls(sizes, ws, bs)

    @property
    def input_dim(self):
        return self.sizes[0]

    @property
    def output_dim(self):
        return self.sizes[-1]

    def params(self):
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def copy(self):
        return QNetwork(self.sizes, [w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.input_dim or x.ndim > 2:
            raise ShapeError(f"expected input width {self.input_dim}, got shape {x.shape}")
        return x

    def forward(self, x):
        x = self._check(x)
        h = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i < last:
                h = np.maximum(h, 0.0)
        return h

    __call__ = forward

    def forward_cache(self, x):
        """Forward pass keeping pre-activations (z) and layer inputs (h)."""
        x = self._check(x)
        hs, zs = [x], []
        h = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w + b
            zs.append(z)
            h = np.maximum(z, 0.0) if i < last else z
            if i < last:
                hs.append(h)
        return h, hs, zs

    def backward(self, hs, zs, grad_out):
        """Parameter gradients given dLoss/dOutput for a batch."""
        gw = [None] * len(self.weights)
        gb = [None] * len(self.weights)
        g = grad_out
        for i in range(len(self.weights) - 1, -1, -1):
            gw[i] = hs[i].T @ g
            gb[i] = g.sum(axis=0)
            if i > 0:
                g = (g @ self.weights[i].T) * (zs[i - 1] > 0.0)
        return gw, gb

    def to_dict(self):
        return {"sizes": list(self.sizes),
                "weights": [w.tolist() for w in self.weights],
                "biases": [b.tolist() for b in self.biases]}

    @classmethod
    def from_dict(cls, d):
        return cls(d["sizes"], d["weights"], d["biases"])

    def equals(self, other):
        return (self.sizes == other.sizes
                and all(np.array_equal(a, b) for a, b in zip(self.params(), other.params())))
