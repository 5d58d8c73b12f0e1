"""Small dense networks with hand-written reverse-mode gradients.

Parameters live in one flat float64 vector; per-layer weight matrices and
bias vectors are views into it, so the Adam update touches a single
contiguous buffer. The heavy lifting (layer sweeps, Adam) is delegated to the
selected kernel backend.
"""

from __future__ import annotations

import numpy as np

from . import backend

ACTIVATION_CODES = {"identity": 0, "tanh": 1, "relu": 2}


class Mlp:
    """Fully connected stack: widths [in, h1, ..., out], one activation per layer."""

    def __init__(self, widths, activations, rng: np.random.Generator | None = None):
        if len(activations) != len(widths) - 1:
            raise ValueError("need one activation per layer")
        self.widths = list(int(w) for w in widths)
        self.activations = list(activations)
        self.act_codes = [ACTIVATION_CODES[a] for a in activations]

        n = sum(widths[i] * widths[i + 1] + widths[i + 1] for i in range(len(widths) - 1))
        self.theta = np.zeros(n, dtype=np.float64)
        self._weights = []
        self._biases = []
        offset = 0
        for i in range(len(widths) - 1):
            fan_in, fan_out = widths[i], widths[i + 1]
            w = self.theta[offset:offset + fan_in * fan_out].reshape(fan_in, fan_out)
            offset += fan_in * fan_out
            b = self.theta[offset:offset + fan_out]
            offset += fan_out
            self._weights.append(w)
            self._biases.append(b)
        if rng is not None:
            self.init_params(rng)

    @property
    def n_params(self) -> int:
        return self.theta.shape[0]

    @property
    def in_dim(self) -> int:
        return self.widths[0]

    @property
    def out_dim(self) -> int:
        return self.widths[-1]

    def init_params(self, rng: np.random.Generator):
        """Xavier-style init: scale 1/sqrt(fan_in), zero biases."""
        for w, b in zip(self._weights, self._biases):
            w[...] = rng.normal(0.0, 1.0 / np.sqrt(w.shape[0]), size=w.shape)
            b[...] = 0.0

    def forward(self, x: np.ndarray, want_cache: bool = False):
        """Evaluate; with want_cache=True also return the layer activations."""
        x = np.asarray(x, dtype=np.float64)
        squeeze = x.ndim == 1
        if squeeze:
            x = x[None, :]
        if x.shape[1] != self.in_dim:
            raise ValueError(f"input width {x.shape[1]} != expected {self.in_dim}")
        layers = backend.mlp_forward(np.ascontiguousarray(x), self._weights,
                                     self._biases, self.act_codes)
        out = layers[-1][0] if squeeze else layers[-1]
        return (out, layers) if want_cache else out

    def backward(self, cache, grad_out: np.ndarray):
        """Gradients of sum(grad_out * output) w.r.t. theta and the input.

        cache is the layer list returned by forward(want_cache=True); calling
        backward without it is a usage error.
        """
        if cache is None:
            raise RuntimeError("backward requires the cache from forward(want_cache=True)")
        grad_out = np.asarray(grad_out, dtype=np.float64)
        if grad_out.ndim == 1:
            grad_out = grad_out[None, :]
        grad_ws, grad_bs, grad_x = backend.mlp_backward(cache, self._weights,
                                                        self.act_codes, grad_out)
        flat = np.empty_like(self.theta)
        offset = 0
        for gw, gb in zip(grad_ws, grad_bs):
            flat[offset:offset + gw.size] = gw.ravel()
            offset += gw.size
            flat[offset:offset + gb.size] = gb
            offset += gb.size
        return flat, grad_x

    def clone_structure(self) -> "Mlp":
        return Mlp(self.widths, self.activations)

    def get_theta(self) -> np.ndarray:
        return self.theta.copy()

    def set_theta(self, theta: np.ndarray):
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != self.theta.shape:
            raise ValueError("parameter vector has the wrong length")
        self.theta[...] = theta


class Adam:
    """First/second-moment adaptive step over a flat parameter vector."""

    def __init__(self, n_params: int, lr: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros(n_params, dtype=np.float64)
        self.v = np.zeros(n_params, dtype=np.float64)
        self.t = 0

    def step(self, theta: np.ndarray, grad: np.ndarray):
        self.t += 1
        backend.adam_step(theta, grad, self.m, self.v, self.t,
                          self.lr, self.beta1, self.beta2, self.eps)

    def state_arrays(self) -> dict:
        return {"m": self.m, "v": self.v, "t": np.array([self.t], dtype=np.int64)}

    def load_state(self, m: np.ndarray, v: np.ndarray, t: int):
        self.m[...] = m
        self.v[...] = v
        self.t = int(t)


def polyak_blend(target: Mlp, online: Mlp, blend: float):
    """target <- blend * online + (1 - blend) * target, in place."""
    target.theta *= 1.0 - blend
    target.theta += blend * online.theta
