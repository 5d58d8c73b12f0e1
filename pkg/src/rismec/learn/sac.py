"""Soft actor-critic: twin critics, target networks, entropy temperature.

Critic targets bootstrap through the minimum of two target critics evaluated
at a fresh policy sample, minus the entropy term; the actor ascends the same
soft value. The temperature is either fixed or adapted toward a target
entropy. All gradients come from the hand-written network stack, so training
is deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nn import Adam, Mlp, polyak_blend
from .policy import SquashedGaussianPolicy
from .replay import ReplayBuffer


@dataclass
class SacConfig:
    gamma: float = 0.95
    temperature: float = 0.2
    auto_temperature: bool = True
    target_entropy: float | None = None   # None -> -action_dim
    polyak: float = 0.005
    lr_actor: float = 3e-4
    lr_critic: float = 3e-4
    lr_alpha: float = 3e-4
    batch_size: int = 256
    warmup_steps: int = 1000
    buffer_capacity: int = 100_000
    update_every: int = 1
    hidden: tuple = (128, 128)
    activation: str = "tanh"
    log_std_min: float = -20.0
    log_std_max: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")
        if not 0.0 < self.polyak < 1.0:
            raise ValueError("polyak must be in (0, 1)")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")


class SacAgent:
    def __init__(self, obs_dim: int, action_dim: int, config: SacConfig,
                 seed: int):
        self.cfg = config
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.rng = np.random.default_rng(seed)

        hid = list(config.hidden)
        act = config.activation
        self.actor = SquashedGaussianPolicy(obs_dim, action_dim, hid, act, self.rng,
                                            config.log_std_min, config.log_std_max)
        critic_widths = [obs_dim + action_dim] + hid + [1]
        critic_acts = [act] * len(hid) + ["identity"]
        self.critic1 = Mlp(critic_widths, critic_acts, self.rng)
        self.critic2 = Mlp(critic_widths, critic_acts, self.rng)
        self.target1 = self.critic1.clone_structure()
        self.target2 = self.critic2.clone_structure()
        self.target1.set_theta(self.critic1.theta)
        self.target2.set_theta(self.critic2.theta)

        self.adam_actor = Adam(self.actor.net.n_params, config.lr_actor)
        self.adam_critic1 = Adam(self.critic1.n_params, config.lr_critic)
        self.adam_critic2 = Adam(self.critic2.n_params, config.lr_critic)

        self.log_alpha = float(np.log(config.temperature))
        self.target_entropy = (config.target_entropy if config.target_entropy is not None
                               else -float(action_dim))
        self.buffer = ReplayBuffer(config.buffer_capacity, obs_dim, action_dim)
        self.updates_done = 0

    @property
    def alpha(self) -> float:
        return float(np.exp(self.log_alpha))

    def act(self, obs: np.ndarray, deterministic: bool = False) -> np.ndarray:
        if deterministic:
            return self.actor.mean_action(obs)
        action, _ = self.actor.sample(np.atleast_2d(obs), self.rng)
        return action[0]

    def random_action(self) -> np.ndarray:
        return self.rng.uniform(-1.0, 1.0, size=self.action_dim)

    def observe(self, obs, action, reward, next_obs, done: bool):
        self.buffer.add(obs, action, reward, next_obs, done)

    def ready(self) -> bool:
        return len(self.buffer) >= max(self.cfg.batch_size, 1)

    def update(self, batch: dict | None = None) -> dict:
        """One gradient step on both critics, the actor, and the temperature."""
        cfg = self.cfg
        if batch is None:
            batch = self.buffer.sample(cfg.batch_size, self.rng)
        s, a = batch["obs"], batch["actions"]
        r, s2, d = batch["rewards"], batch["next_obs"], batch["dones"]
        b = s.shape[0]
        alpha = self.alpha

        # Bootstrapped soft target.
        a2, logp2 = self.actor.sample(s2, self.rng)
        sa2 = np.concatenate([s2, a2], axis=1)
        q_next = np.minimum(self.target1.forward(sa2)[:, 0],
                            self.target2.forward(sa2)[:, 0])
        y = r + cfg.gamma * (1.0 - d) * (q_next - alpha * logp2)

        sa = np.concatenate([s, a], axis=1)
        critic_losses = []
        for critic, adam in ((self.critic1, self.adam_critic1),
                             (self.critic2, self.adam_critic2)):
            q, cache = critic.forward(sa, want_cache=True)
            err = q[:, 0] - y
            critic_losses.append(float(np.mean(err * err)))
            grad_q = (2.0 / b) * err[:, None]
            grad_theta, _ = critic.backward(cache, grad_q)
            adam.step(critic.theta, grad_theta)

        # Actor: ascend E[min Q - alpha log pi] at a fresh sample.
        a_pi, logp_pi, bundle = self.actor.sample(s, self.rng, want_cache=True)
        sa_pi = np.concatenate([s, a_pi], axis=1)
        q1, c1 = self.critic1.forward(sa_pi, want_cache=True)
        q2, c2 = self.critic2.forward(sa_pi, want_cache=True)
        q1, q2 = q1[:, 0], q2[:, 0]
        take1 = (q1 <= q2).astype(np.float64)
        actor_loss = float(np.mean(alpha * logp_pi - np.minimum(q1, q2)))

        up1 = (-take1 / b)[:, None]
        up2 = (-(1.0 - take1) / b)[:, None]
        _, gx1 = self.critic1.backward(c1, up1)
        _, gx2 = self.critic2.backward(c2, up2)
        grad_action = gx1[:, self.obs_dim:] + gx2[:, self.obs_dim:]
        grad_logp = np.full(b, alpha / b)
        grad_actor = self.actor.backward_sample(bundle, grad_action, grad_logp)
        self.adam_actor.step(self.actor.net.theta, grad_actor)

        alpha_loss = 0.0
        if cfg.auto_temperature:
            drift = float(np.mean(logp_pi) + self.target_entropy)
            alpha_loss = -self.log_alpha * drift
            self.log_alpha = float(np.clip(self.log_alpha + cfg.lr_alpha * drift,
                                           -20.0, 10.0))

        polyak_blend(self.target1, self.critic1, cfg.polyak)
        polyak_blend(self.target2, self.critic2, cfg.polyak)
        self.updates_done += 1
        return {
            "critic1_loss": critic_losses[0],
            "critic2_loss": critic_losses[1],
            "actor_loss": actor_loss,
            "alpha": self.alpha,
            "alpha_loss": alpha_loss,
            "entropy_estimate": float(-np.mean(logp_pi)),
        }

    # Checkpoint plumbing -------------------------------------------------

    def state_arrays(self) -> dict:
        out = {
            "actor_theta": self.actor.net.theta,
            "critic1_theta": self.critic1.theta,
            "critic2_theta": self.critic2.theta,
            "target1_theta": self.target1.theta,
            "target2_theta": self.target2.theta,
            "log_alpha": np.array([self.log_alpha]),
            "updates_done": np.array([self.updates_done], dtype=np.int64),
        }
        for name, adam in (("actor", self.adam_actor), ("critic1", self.adam_critic1),
                           ("critic2", self.adam_critic2)):
            state = adam.state_arrays()
            out[f"adam_{name}_m"] = state["m"]
            out[f"adam_{name}_v"] = state["v"]
            out[f"adam_{name}_t"] = state["t"]
        return out

    def load_state(self, arrays: dict):
        self.actor.net.set_theta(arrays["actor_theta"])
        self.critic1.set_theta(arrays["critic1_theta"])
        self.critic2.set_theta(arrays["critic2_theta"])
        self.target1.set_theta(arrays["target1_theta"])
        self.target2.set_theta(arrays["target2_theta"])
        self.log_alpha = float(arrays["log_alpha"][0])
        self.updates_done = int(arrays["updates_done"][0])
        for name, adam in (("actor", self.adam_actor), ("critic1", self.adam_critic1),
                           ("critic2", self.adam_critic2)):
            adam.load_state(arrays[f"adam_{name}_m"], arrays[f"adam_{name}_v"],
                            int(arrays[f"adam_{name}_t"][0]))
