"""Pure numpy implementation of the network hot kernels.

Same contract as the compiled extension: fused multi-layer forward, reverse
sweep, and an in-place Adam step. Activation codes: 0 identity, 1 tanh,
2 relu.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def mlp_forward(x, weights, biases, acts):
    """Run the stack, returning every layer activation (input first)."""
    layers = [x]
    h = x
    for w, b, a in zip(weights, biases, acts):
        z = h @ w
        z += b
        if a == 1:
            z = np.tanh(z)
        elif a == 2:
            z = np.maximum(z, 0.0)
        layers.append(z)
        h = z
    return layers


def mlp_backward(layers, weights, acts, grad_out):
    """Reverse sweep over activations recorded by mlp_forward.

    Returns per-layer weight/bias gradients and the gradient at the input.
    """
    grad_ws = [None] * len(weights)
    grad_bs = [None] * len(weights)
    delta = grad_out
    for i in range(len(weights) - 1, -1, -1):
        y = layers[i + 1]
        if acts[i] == 1:
            delta = delta * (1.0 - y * y)
        elif acts[i] == 2:
            delta = delta * (y > 0.0)
        grad_ws[i] = layers[i].T @ delta
        grad_bs[i] = delta.sum(axis=0)
        if i > 0:
            delta = delta @ weights[i].T
    grad_x = delta @ weights[0].T
    return grad_ws, grad_bs, grad_x


def adam_step(theta, grad, m, v, t, lr, beta1, beta2, eps):
    """One bias-corrected Adam update, in place on theta, m, v."""
    m *= beta1
    m += (1.0 - beta1) * grad
    v *= beta2
    v += (1.0 - beta2) * grad * grad
    correction1 = 1.0 - beta1 ** t
    correction2 = 1.0 - beta2 ** t
    theta -= lr / correction1 * m / (np.sqrt(v / correction2) + eps)
