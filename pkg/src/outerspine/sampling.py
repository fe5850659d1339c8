"""Seeded samplers over the epsilon-spine.

Every "for all points" clause in the diagnostics quantifies over samples
drawn here.  All draws are driven by an explicit seed so reports can name
the exact configuration that reproduces them.

Spine repair blends a length vector toward the topology's systole-maximal
lengths: the systole is a minimum of linear functions of the lengths, hence
concave, so the spine condition cuts out a convex set of length vectors and
the blend crosses its boundary exactly once (bisection finds the crossing).
"""

from __future__ import annotations

import math
import random
from typing import Sequence

from .currents import RationalCurrent, pairing
from .graphs import (
    MarkedGraph,
    collapse_edge,
    expansions,
    in_spine,
    normalize_volume,
    rose,
    systole,
    transform,
    with_lengths,
)
from .lipschitz import d_sym
from .minima import balance_param, max_systole_lengths
from .words import Automorphism, NielsenMove


class SampleError(RuntimeError):
    """The sampler could not produce a point meeting its constraints."""


def repair(g: MarkedGraph, eps: float) -> MarkedGraph:
    """Pull a volume-one point back into the spine along a blend."""
    if in_spine(g, eps):
        return g
    best, target = max_systole_lengths(g)
    if best < eps:
        raise SampleError(
            f"topology cannot reach systole {eps} (best {best:.6g})"
        )
    base = {e.id: e.length for e in g.edges}

    def at(t: float) -> MarkedGraph:
        return with_lengths(
            g, {k: (1 - t) * base[k] + t * target[k] for k in base}
        )

    lo, hi = 0.0, 1.0
    for _ in range(50):
        mid = (lo + hi) / 2
        if in_spine(at(mid), eps):
            hi = mid
        else:
            lo = mid
    return at(hi)


def jitter(g: MarkedGraph, rng: random.Random, scale: float, eps: float) -> MarkedGraph:
    """Multiply lengths by independent lognormal factors, then repair."""
    lengths = {e.id: e.length * math.exp(scale * rng.gauss(0, 1)) for e in g.edges}
    total = sum(lengths.values())
    return repair(with_lengths(g, {k: v / total for k, v in lengths.items()}), eps)


def random_move(rng: random.Random, rank: int) -> NielsenMove:
    r = rng.random()
    if r < 0.7:
        t = rng.randrange(1, rank + 1)
        o = rng.choice([k for k in range(1, rank + 1) if k != t])
        return NielsenMove("right_multiply", t, o, rng.random() < 0.5)
    if r < 0.85:
        t = rng.randrange(1, rank + 1)
        o = rng.choice([k for k in range(1, rank + 1) if k != t])
        return NielsenMove("transpose", t, o)
    return NielsenMove("invert", rng.randrange(1, rank + 1))


def random_automorphism(rng: random.Random, rank: int, n_moves: int) -> Automorphism:
    return Automorphism.from_moves(
        rank, [random_move(rng, rank) for _ in range(n_moves)]
    )


def _random_expansion(g: MarkedGraph, rng: random.Random, eps: float, delta: float) -> MarkedGraph | None:
    verts = [v for v in g.vertices if g.valence(v) >= 4]
    if not verts:
        return None
    v = rng.choice(verts)
    options = expansions(g, v)
    h = rng.choice(options)
    old_ids = {e.id for e in g.edges}
    new_id = next(e.id for e in h.edges if e.id not in old_ids)
    lengths = {e.id: e.length * (1 - delta) for e in h.edges}
    lengths[new_id] = delta
    return repair(with_lengths(h, lengths), eps)


def _random_collapse(g: MarkedGraph, rng: random.Random, eps: float) -> MarkedGraph | None:
    nonloops = [e for e in g.edges if e.src != e.dst]
    if not nonloops:
        return None
    e = min(nonloops, key=lambda e: (e.length, e.id))
    return repair(normalize_volume(collapse_edge(g, e.id)), eps)


def spine_points(
    rank: int,
    eps: float,
    seed: int,
    n: int,
    twist_moves: int = 4,
    jitter_scale: float = 0.6,
) -> list[MarkedGraph]:
    """n independent seeded spine points at volume one.

    Each point is a freshly twisted rose (random Nielsen factorization of
    bounded length, so markings stay short), optionally pushed through one
    or two topology moves, with lognormal length jitter repaired back into
    the spine.
    """
    rng = random.Random(seed)
    base = rose([1.0 / rank] * rank)
    out: list[MarkedGraph] = []
    while len(out) < n:
        g = base
        k = rng.randrange(0, twist_moves + 1)
        if k:
            g = transform(g, random_automorphism(rng, rank, k))
        for _ in range(rng.randrange(0, 3)):
            r = rng.random()
            moved = None
            if r < 0.6:
                moved = _random_expansion(g, rng, eps, eps * (0.5 + rng.random()))
            elif len(g.edges) > rank:
                moved = _random_collapse(g, rng, eps)
            if moved is not None:
                g = moved
        out.append(jitter(g, rng, jitter_scale, eps))
    return out


def ball_points(
    center: MarkedGraph,
    radius: float,
    n: int,
    seed: int,
    eps: float,
    max_tries: int | None = None,
) -> list[MarkedGraph]:
    """Points reached from the center by short accepted steps within radius.

    A random walk proposes small length jitters (occasionally a topology
    move with a tiny fresh edge) and accepts a step only while the
    symmetrized distance to the center stays at most the radius, so the
    samples approximate the walk-connected part of the metric ball.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius == 0:
        return [center] * max(n, 1) if n else []
    rng = random.Random(seed)
    scale = min(0.12, radius / 4)
    out: list[MarkedGraph] = []
    cur = center
    tries = 0
    limit = max_tries if max_tries is not None else 40 * n + 200
    while len(out) < n and tries < limit:
        tries += 1
        if rng.random() < 0.2 and len(cur.edges) < 2 * center.rank:
            prop = _random_expansion(cur, rng, eps, eps * 0.5) or jitter(
                cur, rng, scale, eps
            )
        else:
            prop = jitter(cur, rng, scale, eps)
        if d_sym(center, prop) <= radius:
            cur = prop
            out.append(prop)
        elif rng.random() < 0.3:
            cur = center
    if len(out) < n:
        raise SampleError(
            f"only {len(out)}/{n} ball samples within radius {radius} "
            f"after {tries} proposals"
        )
    return out


def balanced_point(
    mu: RationalCurrent,
    nu: RationalCurrent,
    s_target: float,
    seed: int,
    eps: float,
    markings: Sequence[Automorphism] = (),
    probes_per_marking: int = 12,
    tol: float = 1e-9,
) -> MarkedGraph:
    """A spine point with balance parameter s_target for (mu, nu).

    Scans rose markings (the provided ones, then seeded random twists) for
    one whose length simplex straddles the target; bisects the straight
    blend between the two witnesses.  Both witnesses sit in the spine and
    the spine cut of a simplex is convex (concave systole), so the whole
    blend is admissible and balance varies continuously along it.
    """
    rng = random.Random(seed)
    rank = mu.rank
    pool = list(markings) + [
        random_automorphism(rng, rank, rng.randrange(1, 5)) for _ in range(24)
    ]
    pool.insert(0, Automorphism.identity(rank))
    base = rose([1.0 / rank] * rank)
    for phi in pool:
        g = transform(base, phi)
        lo = hi = None
        for _ in range(probes_per_marking):
            cand = jitter(g, rng, 1.0, eps)
            f = balance_param(cand, mu, nu) - s_target
            if f <= 0 and (lo is None or f > lo[0]):
                lo = (f, cand)
            if f >= 0 and (hi is None or f < hi[0]):
                hi = (f, cand)
        if lo is None or hi is None:
            continue
        a, b = lo[1], hi[1]
        la = {e.id: e.length for e in a.edges}
        lb = {e.id: e.length for e in b.edges}
        for _ in range(80):
            mid = with_lengths(
                a, {k: 0.5 * (la[k] + lb[k]) for k in la}
            )
            f = balance_param(mid, mu, nu) - s_target
            if abs(f) <= tol:
                return mid
            if f < 0:
                la = {e.id: e.length for e in mid.edges}
            else:
                lb = {e.id: e.length for e in mid.edges}
        return with_lengths(a, {k: 0.5 * (la[k] + lb[k]) for k in la})
    raise SampleError(
        f"no sampled marking straddles balance {s_target:+.3g}; "
        "pass shift markings that move the balance range"
    )
