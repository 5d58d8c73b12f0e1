"""Tanh-squashed Gaussian policy head with hand-derived gradients.

The actor network emits [mean, log_std] per action dimension. Sampling uses
the reparameterization pre = mean + std * eps, action = tanh(pre), and the
log-density includes the tanh change-of-variables term, computed with the
stable identity log(1 - tanh^2 x) = 2 (log 2 - x - softplus(-2x)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nn import Mlp

LOG_SQRT_2PI = 0.5 * float(np.log(2.0 * np.pi))
LOG2 = float(np.log(2.0))
ACTION_EDGE = 1.0 - 1e-9


def log1m_tanh2(x: np.ndarray) -> np.ndarray:
    return 2.0 * (LOG2 - x - np.logaddexp(0.0, -2.0 * x))


@dataclass
class SampleCache:
    """Intermediates needed to push gradients back through one sample."""

    net_cache: list
    tanh_pre: np.ndarray   # tanh(pre), (B, A)
    sigma: np.ndarray      # (B, A)
    eps: np.ndarray        # (B, A)
    clamp_open: np.ndarray # 1 where log_std was strictly inside the clamp


class SquashedGaussianPolicy:
    """Stochastic policy over [-1, 1]^action_dim."""

    def __init__(self, obs_dim: int, action_dim: int, hidden, activation: str,
                 rng: np.random.Generator, log_std_min: float = -20.0,
                 log_std_max: float = 2.0):
        widths = [obs_dim] + list(hidden) + [2 * action_dim]
        acts = [activation] * len(hidden) + ["identity"]
        self.net = Mlp(widths, acts, rng)
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.log_std_min = log_std_min
        self.log_std_max = log_std_max

    def _head(self, obs: np.ndarray, want_cache: bool):
        out = self.net.forward(obs, want_cache=want_cache)
        raw, cache = out if want_cache else (out, None)
        mu = raw[:, :self.action_dim]
        log_std = raw[:, self.action_dim:]
        clamp_open = (log_std > self.log_std_min) & (log_std < self.log_std_max)
        log_std = np.clip(log_std, self.log_std_min, self.log_std_max)
        return mu, log_std, clamp_open.astype(np.float64), cache

    def sample(self, obs: np.ndarray, rng: np.random.Generator,
               want_cache: bool = False):
        """Draw actions and log-probs; optionally keep the backward cache."""
        obs = np.atleast_2d(np.asarray(obs, dtype=np.float64))
        mu, log_std, clamp_open, cache = self._head(obs, want_cache)
        sigma = np.exp(log_std)
        eps = rng.standard_normal(mu.shape)
        pre = mu + sigma * eps
        t = np.tanh(pre)
        logp = np.sum(-log_std - 0.5 * eps * eps - LOG_SQRT_2PI - log1m_tanh2(pre), axis=1)
        action = np.clip(t, -ACTION_EDGE, ACTION_EDGE)
        if want_cache:
            return action, logp, SampleCache(cache, t, sigma, eps, clamp_open)
        return action, logp

    def mean_action(self, obs: np.ndarray) -> np.ndarray:
        """Deterministic action: squashed mean."""
        obs = np.asarray(obs, dtype=np.float64)
        squeeze = obs.ndim == 1
        mu, _, _, _ = self._head(np.atleast_2d(obs), want_cache=False)
        out = np.clip(np.tanh(mu), -ACTION_EDGE, ACTION_EDGE)
        return out[0] if squeeze else out

    def backward_sample(self, cache: SampleCache, grad_action: np.ndarray,
                        grad_logp: np.ndarray) -> np.ndarray:
        """Parameter gradient of sum(grad_action * a + grad_logp * logp).

        With eps held fixed (reparameterization):
          d a / d mu        = 1 - tanh^2(pre)
          d logp / d mu     = 2 tanh(pre)
          d a / d log_std   = (1 - tanh^2) * sigma * eps
          d logp / d log_std= -1 + 2 tanh(pre) * sigma * eps
        """
        t, sigma, eps = cache.tanh_pre, cache.sigma, cache.eps
        one_m_t2 = 1.0 - t * t
        gl = grad_logp[:, None]
        g_mu = grad_action * one_m_t2 + gl * (2.0 * t)
        g_log_std = (grad_action * one_m_t2 * sigma * eps
                     + gl * (-1.0 + 2.0 * t * sigma * eps)) * cache.clamp_open
        grad_head = np.concatenate([g_mu, g_log_std], axis=1)
        flat, _ = self.net.backward(cache.net_cache, grad_head)
        return flat

    def evaluate_logp(self, obs: np.ndarray, actions: np.ndarray,
                      want_cache: bool = False):
        """Log-density of given actions (used by the on-policy learner).

        Returns (logp, pre_entropy, cache_bundle). pre_entropy is the Gaussian
        entropy before squashing, a convenient exploration proxy.
        """
        obs = np.atleast_2d(np.asarray(obs, dtype=np.float64))
        actions = np.atleast_2d(np.asarray(actions, dtype=np.float64))
        a = np.clip(actions, -ACTION_EDGE, ACTION_EDGE)
        pre = np.arctanh(a)
        mu, log_std, clamp_open, cache = self._head(obs, want_cache)
        sigma = np.exp(log_std)
        z = (pre - mu) / sigma
        logp = np.sum(-log_std - 0.5 * z * z - LOG_SQRT_2PI - log1m_tanh2(pre), axis=1)
        pre_entropy = np.sum(log_std + 0.5 + LOG_SQRT_2PI, axis=1)
        if want_cache:
            return logp, pre_entropy, (cache, z, sigma, clamp_open)
        return logp, pre_entropy

    def backward_logp(self, bundle, grad_logp: np.ndarray,
                      grad_pre_entropy: np.ndarray | None = None) -> np.ndarray:
        """Parameter gradient for evaluate_logp with the action held fixed.

          d logp / d mu      = z / sigma
          d logp / d log_std = z^2 - 1
          d pre_entropy / d log_std = 1
        """
        cache, z, sigma, clamp_open = bundle
        gl = grad_logp[:, None]
        g_mu = gl * (z / sigma)
        g_log_std = gl * (z * z - 1.0)
        if grad_pre_entropy is not None:
            g_log_std = g_log_std + grad_pre_entropy[:, None]
        grad_head = np.concatenate([g_mu, g_log_std * clamp_open], axis=1)
        flat, _ = self.net.backward(cache, grad_head)
        return flat
