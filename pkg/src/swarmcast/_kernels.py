"""Hot loops of the broadcast simulator.

The functions below are written in the subset of Python that numba compiles.
With numba available they are jitted; setting ``SWARMCAST_DISABLE_NUMBA=1``
(or a missing numba install) runs the very same source as plain Python.

Random numbers come from a counter-based generator: the uniform for
``(run seed, directed edge, pass, draw)`` is a splitmix64 hash of those four
integers.  Every contact attempt therefore sees the same variates no matter
when it is executed, which gives exact common random numbers across
allocation plans, and the two backends agree bit for bit on the stream.
"""

from __future__ import annotations

import heapq
import math
import os

import numpy as np

_FLAG = os.environ.get("SWARMCAST_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
except ImportError:
    njit = None

BACKEND = "python" if njit is None else "numba"

SCENARIO_UNIFORM = 1
SCENARIO_GAUSSIAN = 2

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_EDGE_MUL = 0xD1B54A32D192ED03
_PASS_MUL = 0xAEF17502108EF2D9
_TWO_NEG_53 = 2.0 ** -53

# splitmix64 needs wrapping uint64 arithmetic, which Python ints and numba
# integers express differently; everything above the hash is shared.
if njit is None:

    def _jit(fn):
        return fn

    def _splitmix(z):
        z = (z + _GOLDEN) & _MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform01(seed, e, p, j):
        h = _splitmix((int(seed) + int(e) * _EDGE_MUL) & _MASK)
        h = _splitmix(h ^ ((int(p) * _PASS_MUL + int(j)) & _MASK))
        return ((h >> 11) + 0.5) * _TWO_NEG_53

else:

    def _jit(fn):
        return njit(cache=True)(fn)

    @njit(cache=True)
    def _splitmix(z):
        z = z + np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    @njit(cache=True)
    def uniform01(seed, e, p, j):
        h = _splitmix(np.uint64(seed) + np.uint64(e) * np.uint64(_EDGE_MUL))
        h = _splitmix(h ^ (np.uint64(p) * np.uint64(_PASS_MUL) + np.uint64(j)))
        return (float(h >> np.uint64(11)) + 0.5) * _TWO_NEG_53


@_jit
def trunc_normal_stream(mu, sigma, seed, e, p, j0):
    """Gaussian(mu, sigma) conditioned on (0, inf), drawn from the hash stream.

    Plain rejection from the normal when the cut sits left of ~0.45 sigma
    above the mean; otherwise Robert's exponential-proposal rejection, whose
    acceptance rate stays high in the far tail.
    """
    if sigma == 0.0:
        return mu
    a = -mu / sigma
    j = j0
    if a < 0.45:
        while True:
            u1 = uniform01(seed, e, p, j)
            u2 = uniform01(seed, e, p, j + 1)
            j += 2
            z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
            x = mu + sigma * z
            if x > 0.0:
                return x
    # optimal exponential rate, written so that a*a cannot overflow
    root = a * (1.0 + math.sqrt(1.0 + 4.0 / (a * a)))
    lam = 0.5 * root
    shift = -2.0 / root  # a - lam, free of cancellation
    while True:
        u1 = uniform01(seed, e, p, j)
        u2 = uniform01(seed, e, p, j + 1)
        j += 2
        w = -math.log(u1) / lam
        if u2 <= math.exp(-0.5 * (shift + w) * (shift + w)):
            # mu + sigma * (a + w) == sigma * w, which cannot cancel to a
            # non-positive value; only an underflow can zero it
            x = sigma * w
            return x if x > 0.0 else 5e-324


@_jit
def contact(e, p, seed, mu, sigma, alpha, scenario, ulo, uhi, p_on, d_lo, d_hi, speed):
    """One attempt on directed edge ``e`` during pass ``p``.

    Returns ``(available, delay_s)``; the delay is zero when unavailable.
    Draw 0 decides availability, draw 1 the distance, draws 2.. the MAC delay.
    """
    if uniform01(seed, e, p, 0) >= p_on:
        return False, 0.0
    dist = d_lo + (d_hi - d_lo) * uniform01(seed, e, p, 1)
    if scenario == SCENARIO_UNIFORM:
        mac = ulo + (uhi - ulo) * uniform01(seed, e, p, 2)
    else:
        mac = trunc_normal_stream(mu, sigma, seed, e, p, 2)
    return True, alpha * (mac + dist / speed)


@_jit
def run_once(
    indptr, indices, mu, sigma, alpha,
    scenario, ulo, uhi, p_on, d_lo, d_hi, speed, gap, max_passes, skip_sender,
    source, seed, first_rx, parent, log_t, log_from, log_to, log_ok, keep_log,
):
    """Event-driven gossip broadcast; returns the number of log entries.

    Events are deliveries ``(time, sender, receiver)`` popped in time order,
    ties to the lowest sender.  The first delivery informs the receiver,
    which then runs its contact passes: neighbors in ascending id order,
    skipping neighbors already served (and, with ``skip_sender``, the node
    it heard from).  An unavailable link costs no time; an available one
    keeps the transmitter busy for the whole delay.  Later deliveries to an
    informed node are dropped.
    """
    n = indptr.shape[0] - 1
    for v in range(n):
        first_rx[v] = np.inf
        parent[v] = -1
    served = np.zeros(indices.shape[0], dtype=np.bool_)
    nlog = 0
    heap = [(0.0, -1, source)]
    while len(heap) > 0:
        t, snd, v = heapq.heappop(heap)
        if first_rx[v] != np.inf:
            continue
        first_rx[v] = t
        parent[v] = snd
        excluded = snd if skip_sender else -2
        remaining = 0
        for e in range(indptr[v], indptr[v + 1]):
            if indices[e] != excluded:
                remaining += 1
        local = t
        for p in range(max_passes):
            if remaining == 0:
                break
            if p > 0:
                local += gap
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if w == excluded or served[e]:
                    continue
                ok, d = contact(e, p, seed, mu[e], sigma[e], alpha[e], scenario,
                                ulo, uhi, p_on, d_lo, d_hi, speed)
                if ok:
                    local += d
                    served[e] = True
                    remaining -= 1
                    heapq.heappush(heap, (local, v, w))
                if keep_log:
                    log_t[nlog] = local
                    log_from[nlog] = v
                    log_to[nlog] = w
                    log_ok[nlog] = ok
                    nlog += 1
    return nlog


@_jit
def run_many(
    indptr, indices, mu, sigma, alpha,
    scenario, ulo, uhi, p_on, d_lo, d_hi, speed, gap, max_passes, skip_sender,
    source, seeds, kh, informed,
):
    """Knowledge horizon and informed count for each seed in ``seeds``."""
    n = indptr.shape[0] - 1
    first_rx = np.empty(n)
    parent = np.empty(n, dtype=np.int64)
    dummy_f = np.empty(0)
    dummy_i = np.empty(0, dtype=np.int64)
    dummy_b = np.empty(0, dtype=np.bool_)
    for r in range(seeds.shape[0]):
        run_once(indptr, indices, mu, sigma, alpha, scenario, ulo, uhi, p_on,
                 d_lo, d_hi, speed, gap, max_passes, skip_sender, source, seeds[r],
                 first_rx, parent, dummy_f, dummy_i, dummy_i, dummy_b, False)
        count = 0
        horizon = 0.0
        for v in range(n):
            if first_rx[v] != np.inf:
                count += 1
                if first_rx[v] > horizon:
                    horizon = first_rx[v]
        kh[r] = horizon
        informed[r] = count


@_jit
def stream_trunc_normal_samples(mu, sigma, seed, count):
    out = np.empty(count)
    for i in range(count):
        out[i] = trunc_normal_stream(mu, sigma, seed, i, 0, 0)
    return out
