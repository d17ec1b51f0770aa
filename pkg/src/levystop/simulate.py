"""Exact event-driven Monte Carlo for the jump-diffusion.

Paths are advanced from jump epoch to jump epoch. Between epochs the
process is a Brownian motion with drift, whose endpoint is Gaussian and
whose running maximum (minimum) given both endpoints is sampled exactly
from the Brownian-bridge law

    max = (d + sqrt(d^2 - 2 b^2 dt log U)) / 2,   d = endpoint increment.

No time grid is used anywhere, so the samples carry no discretization bias.
The per-segment maximum and minimum use independent uniforms: the pairs
(X, M) and (X, I) have the exact joint law, the triple (X, M, I) does not
when b > 0.

Random streams: samples are processed in fixed chunks of CHUNK paths and
chunk k always draws from child k of ``SeedSequence(seed)``, so results do
not depend on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from .model import LevyModel, require_power_problem_config

CHUNK = 1 << 16
DEPTH_DECAY_LENGTHS = 14.0


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    n: int
    seed: int
    bias_bound: float = 0.0

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "n": self.n,
            "seed": self.seed,
            "bias_bound": self.bias_bound,
        }


@dataclass(frozen=True)
class TripleSample:
    """X at an independent exp(r) time together with the running sup and inf before it."""

    x: np.ndarray
    sup: np.ndarray
    inf: np.ndarray
    seed: int


def _chunks(n: int, seed: int) -> list[tuple[int, np.random.SeedSequence]]:
    n_chunks = max(1, -(-n // CHUNK))
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [CHUNK] * (n_chunks - 1) + [n - CHUNK * (n_chunks - 1)]
    return list(zip(sizes, children))


def _run_chunks(fn, n: int, seed: int, workers: int):
    jobs = _chunks(n, seed)
    if workers <= 1:
        return [fn(size, np.random.default_rng(ss)) for size, ss in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(job[0], np.random.default_rng(job[1])), jobs))


def _triple_chunk(model: LevyModel, r: float, size: int, rng: np.random.Generator):
    a, b = model.a, model.b
    jump_rate = model.lam + model.mu
    p_up = model.lam / jump_rate if jump_rate > 0 else 0.0

    remaining = rng.standard_exponential(size) / r
    x = np.zeros(size)
    hi = np.zeros(size)
    lo = np.zeros(size)
    x_out = np.empty(size)
    hi_out = np.empty(size)
    lo_out = np.empty(size)
    idx = np.arange(size)

    while idx.size:
        m = idx.size
        wait = rng.standard_exponential(m) / jump_rate if jump_rate > 0 else np.full(m, np.inf)
        jumps = wait < remaining
        dt = np.where(jumps, wait, remaining)
        if b > 0:
            d = a * dt + b * np.sqrt(dt) * rng.standard_normal(m)
            spread = 2.0 * b * b * dt
            seg_hi = 0.5 * (d + np.sqrt(d * d - spread * np.log(rng.random(m))))
            seg_lo = 0.5 * (d - np.sqrt(d * d - spread * np.log(rng.random(m))))
        else:
            d = a * dt
            seg_hi = np.maximum(d, 0.0)
            seg_lo = np.minimum(d, 0.0)
        hi = np.maximum(hi, x + seg_hi)
        lo = np.minimum(lo, x + seg_lo)
        x = x + d

        done = ~jumps
        if done.any():
            x_out[idx[done]] = x[done]
            hi_out[idx[done]] = hi[done]
            lo_out[idx[done]] = lo[done]
        keep = jumps
        idx, x, hi, lo = idx[keep], x[keep], hi[keep], lo[keep]
        remaining = remaining[keep] - dt[keep]
        if not idx.size:
            break
        k = idx.size
        up = rng.random(k) < p_up
        size_draw = rng.standard_exponential(k)
        x = x + np.where(up, size_draw / model.alpha, -size_draw / model.beta)
        hi = np.maximum(hi, x)
        lo = np.minimum(lo, x)
    return x_out, hi_out, lo_out


def sample_triple(model: LevyModel, r: float, n: int, seed: int, workers: int = 1) -> TripleSample:
    """n independent draws of (X_tau, M_r, I_r) with tau ~ Exp(r) independent of X."""
    if r <= 0:
        raise ValueError("killing rate r must be positive")
    parts = _run_chunks(lambda size, rng: _triple_chunk(model, r, size, rng), n, seed, workers)
    x, hi, lo = (np.concatenate(p) for p in zip(*parts))
    return TripleSample(x, hi, lo, seed)


def _policy_chunk(model: LevyModel, gamma: float, threshold: float, x0: float, floor: float, size: int, rng):
    """Embedded jump chain of the negative-drift compound Poisson process.

    Between jumps the path falls by |a| * Exp(lam); only a jump can carry it
    to the threshold, so checking right after each jump is exact.
    """
    fall_scale = -model.a / model.lam
    up_scale = 1.0 / model.alpha
    x = np.full(size, x0)
    reward = np.zeros(size)
    idx = np.arange(size)
    while idx.size:
        m = idx.size
        x = x - fall_scale * rng.standard_exponential(m)
        alive = x >= floor
        idx, x = idx[alive], x[alive]
        x = x + up_scale * rng.standard_exponential(idx.size)
        hit = x >= threshold
        reward[idx[hit]] = np.maximum(x[hit], 0.0) ** gamma
        idx, x = idx[~hit], x[~hit]
    return reward


def truncation_depth(model: LevyModel) -> float:
    return DEPTH_DECAY_LENGTHS / model.rho


def estimate_policy_value(
    model: LevyModel,
    gamma: float,
    threshold: float,
    x0: float,
    n: int,
    seed: int,
    depth: float | None = None,
    workers: int = 1,
) -> MCEstimate:
    """E_{x0}[g(X_tau); tau < inf] for tau the first passage above ``threshold``, r = 0.

    Paths that sink more than ``depth`` below the threshold are counted as
    never stopping. From there the chance of still reaching the threshold is
    at most exp(-rho depth) and the overshoot is Exp(alpha), which gives the
    reported ``bias_bound``. A start below that floor gives the estimate 0.
    """
    require_power_problem_config(model)
    if x0 >= threshold:
        return MCEstimate(float(max(x0, 0.0) ** gamma), 0.0, n, seed, 0.0)
    if n < 2:
        raise ValueError("need at least two paths for a standard error")
    depth = truncation_depth(model) if depth is None else float(depth)
    floor = threshold - depth

    parts = _run_chunks(
        lambda size, rng: _policy_chunk(model, gamma, threshold, x0, floor, size, rng), n, seed, workers
    )
    rewards = np.concatenate(parts)
    mean = float(rewards.mean())
    stderr = float(rewards.std(ddof=1) / math.sqrt(n))

    overshoot_reward, _ = integrate.quad(
        lambda y: model.alpha * math.exp(-model.alpha * y) * max(threshold + y, 0.0) ** gamma, 0.0, math.inf
    )
    bias = math.exp(-model.rho * (threshold - floor)) * overshoot_reward
    return MCEstimate(mean, stderr, n, seed, bias)


def ks_critical_one_sample(n: int) -> float:
    """Asymptotic 1% critical value of the one-sample Kolmogorov-Smirnov statistic."""
    return 1.628 / math.sqrt(n)


def ks_critical_two_sample(n: int) -> float:
    """Asymptotic 1% critical value for two samples of equal size n."""
    return 1.628 * math.sqrt(2.0 / n)


def ks_against_cdf(samples: np.ndarray, cdf) -> float:
    return float(stats.kstest(samples, cdf).statistic)


def ks_two(a: np.ndarray, b: np.ndarray) -> float:
    return float(stats.ks_2samp(a, b).statistic)
