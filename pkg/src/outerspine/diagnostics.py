"""Empirical certification of the contraction and axis inequalities.

Each checker samples the quantifiers of one statement and reports margins,
witnesses, and the exact sampling configuration (seed included) so a run
can be reproduced verbatim.  A failed clause carries the worst witness; it
is up to the caller to decide whether that demonstrates a genuine
non-contracting pair or an under-sampled one.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .currents import RationalCurrent, add, dual, exp_combination, normalize_at, pairing
from .graphs import MarkedGraph, candidates as graph_candidates, rescale, rose, transform
from .lipschitz import d_sym, sigma_scale
from .minima import AxisSample, axis, balance_param, minimize, project
from .sampling import (
    SampleError,
    balanced_point,
    jitter,
    random_automorphism,
    spine_points,
    ball_points,
)
from .words import Automorphism, NielsenMove, compose, power


class _DistCache:
    """Symmetrized distances memoized by graph key."""

    def __init__(self) -> None:
        self._cache: dict[tuple, float] = {}

    def d(self, a: MarkedGraph, b: MarkedGraph) -> float:
        ka, kb = a.key(), b.key()
        if ka == kb:
            return 0.0
        key = (ka, kb) if ka < kb else (kb, ka)
        if key not in self._cache:
            self._cache[key] = d_sym(a, b)
        return self._cache[key]


# ---------------------------------------------------------------------------
# coarse geodesics


@dataclass(frozen=True)
class GeodesicDefect:
    """Worst additive defect of a parametrized path against d_sym."""

    defect: float
    worst_pair: tuple[float, float]
    n_points: int


def coarse_defect(samples: Sequence[tuple[float, MarkedGraph]]) -> GeodesicDefect:
    """max |d_sym(p_s, p_t) - (t - s)| over sampled parameter pairs."""
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    cache = _DistCache()
    worst = 0.0
    pair = (samples[0][0], samples[0][0])
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            s, p = samples[i]
            t, q = samples[j]
            gap = abs(cache.d(p, q) - abs(t - s))
            if gap > worst:
                worst, pair = gap, (s, t)
    return GeodesicDefect(defect=worst, worst_pair=pair, n_points=len(samples))


# ---------------------------------------------------------------------------
# minisline bounds


@dataclass(frozen=True)
class MinislineRow:
    s: float
    distance: float
    lower: float
    upper: float

    @property
    def passed(self) -> bool:
        return self.lower - 1e-9 <= self.distance <= self.upper + 1e-9


@dataclass(frozen=True)
class MinislineReport:
    b: float
    rows: tuple[MinislineRow, ...]
    eps: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def worst_margin(self) -> float:
        return min(
            min(r.distance - r.lower, r.upper - r.distance) for r in self.rows
        )


def check_minisline(
    mu: RationalCurrent,
    nu: RationalCurrent,
    b: float,
    s_list: Sequence[float],
    eps: float,
    budget: int = 600,
    start: MarkedGraph | None = None,
) -> MinislineReport:
    """Two-sided bound 2s - 2 log b <= d_sym(x, y_s) <= 2s + 8 log b + 2 log 2.

    x minimizes mu + nu; y_s minimizes e^s mu + e^-s nu.  Parameters are
    taken at |s| since the pairing sum is symmetric under (s, mu, nu) ->
    (-s, nu, mu).
    """
    if b < 1:
        raise ValueError("b must be at least 1")
    start = start if start is not None else rose([1.0 / mu.rank] * mu.rank)
    x = minimize(add(mu, nu), eps, start, budget).point
    rows = []
    cur = x
    for s in s_list:
        y = minimize(exp_combination(mu, nu, s), eps, cur, budget).point
        cur = y
        rows.append(
            MinislineRow(
                s=s,
                distance=d_sym(x, y),
                lower=2 * abs(s) - 2 * math.log(b),
                upper=2 * abs(s) + 8 * math.log(b) + 2 * math.log(2),
            )
        )
    return MinislineReport(b=b, rows=tuple(rows), eps=eps)


# ---------------------------------------------------------------------------
# fitting the contraction constant


@dataclass(frozen=True)
class BFit:
    """Smallest representative-ratio bound seen along the sampled axis."""

    value: float
    s_at: float
    ratios: tuple[tuple[float, float], ...]
    eps: float


def fit_B(
    mu: RationalCurrent,
    nu: RationalCurrent,
    eps: float,
    s_range: tuple[float, float] = (-3.0, 3.0),
    step: float = 0.5,
    budget: int = 600,
    ax: AxisSample | None = None,
) -> BFit:
    """Fit the ratio clause: at each s the minimizer x_s of e^s mu + e^-s nu
    has representative ratio e^{2s} <x_s, mu> / <x_s, nu>; the fitted
    constant is the max of that ratio and its inverse over the grid.

    The fitted value is insensitive to shifting the grid because x_{s+h}
    minimizes the pair rescaled by e^{+-h}, which leaves the ratio map
    unchanged up to the same shift.
    """
    if ax is None:
        ax = axis(mu, nu, s_range[0], s_range[1], step, eps, budget)
    ratios = []
    value, s_at = 1.0, 0.0
    for s, pt, _ in ax.samples:
        r = math.exp(2 * s) * pairing(pt, mu) / pairing(pt, nu)
        ratios.append((s, r))
        m = max(r, 1.0 / r)
        if m > value:
            value, s_at = m, s
    return BFit(value=value, s_at=s_at, ratios=tuple(ratios), eps=eps)


# ---------------------------------------------------------------------------
# the five contraction clauses


@dataclass(frozen=True)
class ClauseResult:
    clause: int
    passed: bool
    margin: float
    n_samples: int
    witness: str = ""
    vacuous: bool = False


@dataclass(frozen=True)
class SamplerConfig:
    """Sampling plan for check_contracting; embedded in the report."""

    seed: int = 0
    s_max: float = 3.0
    step: float = 0.5
    near_step: float = 0.25
    n_far: int = 12
    far_depth: int = 24
    n_sigma: int = 10
    n_balanced: int = 3
    budget: int = 600
    shift: Automorphism | None = None
    beyond_offsets: tuple[float, ...] = (0.5, 1.5)


@dataclass(frozen=True)
class ContractionReport:
    b: float
    fitted: float
    clauses: tuple[ClauseResult, ...]
    eps: float
    config: SamplerConfig
    axis_points: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def clause(self, k: int) -> ClauseResult:
        for c in self.clauses:
            if c.clause == k:
                return c
        raise KeyError(k)


def _single_twists(rank: int) -> list[Automorphism]:
    out = []
    for t in range(1, rank + 1):
        for o in range(1, rank + 1):
            if o == t:
                continue
            for inv in (False, True):
                out.append(
                    Automorphism.from_moves(
                        rank, [NielsenMove("right_multiply", t, o, inv)]
                    )
                )
    return out


def _twist_pairs(rank: int) -> list[Automorphism]:
    # powers of single twists move points only logarithmically fast; a pair
    # of opposite twists grows exponentially, reaching large radii cheaply
    out = []
    for t in range(1, rank + 1):
        for o in range(1, rank + 1):
            if o == t:
                continue
            out.append(
                Automorphism.from_moves(
                    rank,
                    [
                        NielsenMove("right_multiply", t, o, False),
                        NielsenMove("right_multiply", o, t, False),
                    ],
                )
            )
    return out


def _marking_size(g: MarkedGraph) -> int:
    return sum(len(g.comarking_word(e.id)) for e in g.edges)


def _far_points(
    x: MarkedGraph,
    b: float,
    rng: random.Random,
    eps: float,
    cfg: SamplerConfig,
) -> list[MarkedGraph]:
    """Spine points beyond distance b from x: powered twists of x (the
    systole is twist-invariant, so these stay in the spine), jittered
    variants of those, and random-walk pushes of fresh seeds."""
    cache = _DistCache()
    found: list[MarkedGraph] = []
    for phi in _single_twists(x.rank) + _twist_pairs(x.rank):
        # doubling power schedule: distances past any reachable b show up
        # within ~12 squarings instead of thousands of unit steps, and an
        # unreachable b fails fast at the size guard, which must fire on
        # the automorphism itself (squaring once more would square the
        # letter count, not add to it)
        psi = phi
        for _ in range(cfg.far_depth):
            if sum(len(img) for img in psi.images) > 4000:
                break
            g = transform(x, psi)
            if cache.d(x, g) > b:
                found.append(g)
                found.append(jitter(g, rng, 0.3, eps))
                break
            psi = compose(psi, psi)
    for g in spine_points(x.rank, eps, rng.randrange(1 << 30), cfg.n_far):
        h = g
        for _ in range(cfg.far_depth):
            if _marking_size(h) > 20000:
                break
            if cache.d(x, h) > b:
                found.append(h)
                break
            h = transform(h, random_automorphism(rng, x.rank, 1))
    return found


def check_contracting(
    mu: RationalCurrent,
    nu: RationalCurrent,
    b: float,
    eps: float,
    config: SamplerConfig | None = None,
) -> ContractionReport:
    """Sample all five contraction clauses for the pair at constant b.

    1. Balanced-representative ratio along the axis stays within [1/b, b].
    2. Spine points beyond distance b from the central minimizer x pair at
       least twice as much with mu + nu as x does.
    3. Minimizers for |s| <= 1 stay within distance b of x.
    4. Every sampled tree, scaled to pair one with x's length current,
       pairs at least 1/b with the normalized mu + nu.
    5. Normalized candidate duals of sampled balanced spine trees pair at
       least 1/b with scaled trees balanced beyond |s| > b.

    Clause samples that cannot be realized leave the clause vacuously
    passed with vacuous=True and zero samples; failures carry witnesses.
    """
    if b < 1:
        raise ValueError("b must be at least 1")
    cfg = config if config is not None else SamplerConfig()
    rng = random.Random(cfg.seed)
    ax = axis(mu, nu, -cfg.s_max, cfg.s_max, cfg.step, eps, cfg.budget)
    fitted = fit_B(mu, nu, eps, ax=ax)
    x = ax.samples[ax.nearest_index(0.0)][1]
    clauses: list[ClauseResult] = []

    # clause 1: ratio bound, taken from the fit
    worst_s, worst_r = max(
        ((s, max(r, 1 / r)) for s, r in fitted.ratios), key=lambda t: t[1]
    )
    clauses.append(
        ClauseResult(
            clause=1,
            passed=fitted.value <= b + 1e-9,
            margin=b - fitted.value,
            n_samples=len(fitted.ratios),
            witness=f"ratio {worst_r:.6g} at s={worst_s:+.3g}",
        )
    )

    # clause 2: doubling beyond radius b
    both = add(mu, nu)
    px = pairing(x, both)
    far = _far_points(x, b, rng, eps, cfg)
    if far:
        ratios2 = [(pairing(y, both) / px, y) for y in far]
        worst, wy = min(ratios2, key=lambda t: t[0])
        clauses.append(
            ClauseResult(
                clause=2,
                passed=worst >= 2 - 1e-9,
                margin=worst - 2,
                n_samples=len(far),
                witness=f"pairing ratio {worst:.6g} at point with "
                f"{len(wy.edges)} edges, d_sym {d_sym(x, wy):.4g}",
            )
        )
    else:
        clauses.append(
            ClauseResult(2, True, math.inf, 0, "no point beyond radius reached", True)
        )

    # clause 3: central stability for |s| <= 1
    worst_d, worst_s3 = 0.0, 0.0
    n3 = 0
    cur = x
    s = -1.0
    while s <= 1.0 + 1e-9:
        y = minimize(exp_combination(mu, nu, s), eps, cur, cfg.budget).point
        cur = y
        dxy = d_sym(x, y)
        n3 += 1
        if dxy > worst_d:
            worst_d, worst_s3 = dxy, s
        s += cfg.near_step
    clauses.append(
        ClauseResult(
            clause=3,
            passed=worst_d <= b + 1e-9,
            margin=b - worst_d,
            n_samples=n3,
            witness=f"d_sym {worst_d:.6g} at s={worst_s3:+.3g}",
        )
    )

    # clause 4: normalized representatives pair >= 1/b on the section at x
    mu_t = normalize_at(x, mu)
    nu_t = normalize_at(x, nu)
    both_t = add(mu_t, nu_t)
    trees = [x] + spine_points(x.rank, eps, cfg.seed + 1, cfg.n_sigma)
    vals4 = [(pairing(rescale(t, sigma_scale(x, t)), both_t), t) for t in trees]
    worst4, wt4 = min(vals4, key=lambda t: t[0])
    clauses.append(
        ClauseResult(
            clause=4,
            passed=worst4 >= 1 / b - 1e-9,
            margin=worst4 - 1 / b,
            n_samples=len(trees),
            witness=f"pairing {worst4:.6g} on tree with {len(wt4.edges)} edges",
        )
    )

    # clause 5: candidate duals of balanced trees versus far-balanced trees
    shift_pool: list[Automorphism] = []
    if cfg.shift is not None:
        for k in range(1, 7):
            shift_pool.append(power(cfg.shift, k))
            shift_pool.append(power(cfg.shift, -k))
    xs: list[RationalCurrent] = []
    for j in range(cfg.n_balanced):
        try:
            z = balanced_point(
                mu, nu, 0.0, cfg.seed + 100 + j, eps, markings=shift_pool
            )
        except SampleError:
            continue
        seen: set = set()
        for _loop, w in graph_candidates(z):
            xi = normalize_at(x, dual(w))
            key = xi.atoms
            if key not in seen:
                seen.add(key)
                xs.append(xi)
    far_trees: list[MarkedGraph] = []
    for off in cfg.beyond_offsets:
        for sgn in (1, -1):
            try:
                far_trees.append(
                    balanced_point(
                        mu,
                        nu,
                        sgn * (b + off),
                        cfg.seed + 200 + round(10 * off) + sgn,
                        eps,
                        markings=shift_pool,
                    )
                )
            except SampleError:
                continue
    if xs and far_trees:
        worst5 = math.inf
        wit5 = ""
        for t in far_trees:
            tt = rescale(t, sigma_scale(x, t))
            sb = balance_param(t, mu, nu)
            for xi in xs:
                v = pairing(tt, xi)
                if v < worst5:
                    worst5 = v
                    wit5 = (
                        f"pairing {v:.6g} with dual of "
                        f"{xi.classes()[0]} at balance {sb:+.3g}"
                    )
        clauses.append(
            ClauseResult(
                clause=5,
                passed=worst5 >= 1 / b - 1e-9,
                margin=worst5 - 1 / b,
                n_samples=len(xs) * len(far_trees),
                witness=wit5,
            )
        )
    else:
        clauses.append(
            ClauseResult(
                5,
                True,
                math.inf,
                0,
                "no balanced samples reached the far range",
                True,
            )
        )

    return ContractionReport(
        b=b,
        fitted=fitted.value,
        clauses=tuple(clauses),
        eps=eps,
        config=cfg,
        axis_points=len(ax.samples),
    )


# ---------------------------------------------------------------------------
# projections of balls


@dataclass(frozen=True)
class BallProjection:
    diameter: float
    n_samples: int
    n_distinct: int
    center_distance_to_axis: float
    radius: float


def ball_projection_diameter(
    mu: RationalCurrent,
    nu: RationalCurrent,
    center: MarkedGraph,
    radius: float,
    n_samples: int,
    eps: float,
    seed: int = 0,
    budget: int = 600,
    ax: AxisSample | None = None,
) -> BallProjection:
    """Diameter of the projection to the minima line of a sampled ball.

    Requires the ball to be disjoint from the sampled axis; otherwise the
    projection diameter conflates travel along the line with contraction
    and the comparison is meaningless, so that is an error, not a result.
    """
    if ax is None:
        ax = axis(mu, nu, -3.0, 3.0, 0.5, eps, budget)
    gap = min(d_sym(center, p) for p in ax.points())
    if gap <= radius:
        raise ValueError(
            f"ball of radius {radius} meets the sampled axis "
            f"(center-to-axis distance {gap:.6g})"
        )
    pts = ball_points(center, radius, n_samples, seed, eps)
    projected: dict = {}
    for p in pts:
        q = project(p, mu, nu, eps, budget).point
        projected[q.key()] = q
    qs = list(projected.values())
    diam = 0.0
    cache = _DistCache()
    for i in range(len(qs)):
        for j in range(i + 1, len(qs)):
            diam = max(diam, cache.d(qs[i], qs[j]))
    return BallProjection(
        diameter=diam,
        n_samples=len(pts),
        n_distinct=len(qs),
        center_distance_to_axis=gap,
        radius=radius,
    )


@dataclass(frozen=True)
class ThinGeodesicReport:
    min_distance: float
    at_index: int
    n_points: int


def thin_geodesic_check(
    path: Sequence[MarkedGraph],
    mu: RationalCurrent,
    nu: RationalCurrent,
    eps: float,
    budget: int = 600,
) -> ThinGeodesicReport:
    """How close a path comes to the projection of its own starting point.

    A path between points on opposite sides of a contracting line must pass
    near the projection of its endpoints; the report carries the minimum
    distance achieved and where.
    """
    if not path:
        raise ValueError("empty path")
    foot = project(path[0], mu, nu, eps, budget).point
    best, at = math.inf, 0
    for i, p in enumerate(path):
        d = d_sym(p, foot)
        if d < best:
            best, at = d, i
    return ThinGeodesicReport(min_distance=best, at_index=at, n_points=len(path))


# ---------------------------------------------------------------------------
# truncated axes and the overlap length tau


def _hausdorff(
    ps: Sequence[MarkedGraph], qs: Sequence[MarkedGraph], cache: _DistCache
) -> float:
    """Sampled symmetric Hausdorff distance between two point lists."""
    h = 0.0
    for p in ps:
        h = max(h, min(cache.d(p, q) for q in qs))
    for q in qs:
        h = max(h, min(cache.d(q, p) for p in ps))
    return h


@dataclass(frozen=True)
class TruncatedAxis:
    """The sampled axis cut down to the part that fellow-travels two
    reference rays, one per end."""

    axis: AxisSample
    lo_index: int
    hi_index: int
    c: float
    degenerate_low: bool
    degenerate_high: bool

    @property
    def points(self) -> tuple[MarkedGraph, ...]:
        return tuple(
            p for _, p, _ in self.axis.samples[self.lo_index : self.hi_index + 1]
        )

    @property
    def s_values(self) -> tuple[float, ...]:
        return tuple(
            s for s, _, _ in self.axis.samples[self.lo_index : self.hi_index + 1]
        )


def truncated_axis(
    ax: AxisSample,
    ref_low: Sequence[MarkedGraph],
    ref_high: Sequence[MarkedGraph],
    c: float,
    cache: _DistCache | None = None,
) -> TruncatedAxis:
    """Truncate a sampled axis to the largest piece 2c-fellow-traveling
    reference rays at both ends.

    ref_high constrains the tail toward s -> +infinity, ref_low the head
    toward s -> -infinity: each side keeps the longest run whose sampled
    Hausdorff distance to the corresponding reference stays at most 2c.
    A side with no admissible run at all is flagged degenerate and the
    truncation keeps the single boundary sample there.
    """
    cache = cache if cache is not None else _DistCache()
    n = len(ax.samples)
    pts = [p for _, p, _ in ax.samples]
    hi_start = n - 1
    degenerate_high = True
    for i in range(n):
        if _hausdorff(pts[i:], list(ref_high), cache) <= 2 * c:
            hi_start = i
            degenerate_high = False
            break
    lo_end = 0
    degenerate_low = True
    for j in range(n - 1, -1, -1):
        if _hausdorff(pts[: j + 1], list(ref_low), cache) <= 2 * c:
            lo_end = j
            degenerate_low = False
            break
    lo_index = hi_start if not degenerate_high else n - 1
    hi_index = lo_end if not degenerate_low else 0
    if lo_index > hi_index:
        # the two runs do not meet; keep the middle sample as a degenerate cut
        mid = (lo_index + hi_index) // 2
        return TruncatedAxis(ax, mid, mid, c, True, True)
    return TruncatedAxis(ax, lo_index, hi_index, c, degenerate_low, degenerate_high)


def _ray(
    ax: AxisSample, origin: float, toward_high: bool
) -> list[MarkedGraph]:
    """Samples from the grid point nearest the origin out to one end."""
    ss = ax.s_values()
    k = min(range(len(ss)), key=lambda i: (abs(ss[i] - origin), i))
    pts = [p for _, p, _ in ax.samples]
    return pts[k:] if toward_high else pts[: k + 1][::-1]


def _max_run(
    ra: Sequence[MarkedGraph],
    rb: Sequence[MarkedGraph],
    step: float,
    c: float,
    cache: _DistCache,
) -> float:
    """Longest parameter interval [0, t] with the two ray prefixes within
    sampled Hausdorff 2c of each other."""
    m = min(len(ra), len(rb))
    best = -1
    for j in range(m):
        if _hausdorff(ra[: j + 1], rb[: j + 1], cache) <= 2 * c:
            best = j
        else:
            break
    return best * step if best >= 0 else 0.0


def overlap_tau(
    axis_a: AxisSample,
    axis_b: AxisSample,
    x: MarkedGraph,
    c: float,
    origin_a: float | None = None,
    origin_b: float | None = None,
) -> float:
    """Overlap length tau of two sampled axes as seen from x.

    Splits each axis at the parameter of x's balance foot (or at the given
    origins, e.g. truncation cuts) into two rays, pairs rays end-to-end
    (high with high, low with low), and returns the larger of the two
    maximal fellow-traveling interval lengths at tolerance 2c.  If an
    explicit origin puts x's foot strictly beyond it on some axis, that
    pairing contributes zero, matching the convention that a negative
    split parameter truncates the overlap to nothing.
    """
    if abs(axis_a.step - axis_b.step) > 1e-12:
        raise ValueError("axes must share the sampling step")
    cache = _DistCache()
    foot_a = balance_param(x, axis_a.mu, axis_a.nu)
    foot_b = balance_param(x, axis_b.mu, axis_b.nu)
    oa = origin_a if origin_a is not None else foot_a
    ob = origin_b if origin_b is not None else foot_b
    step = axis_a.step
    taus = []
    for toward_high in (True, False):
        sign = 1.0 if toward_high else -1.0
        s1 = sign * (foot_a - oa)
        s2 = sign * (foot_b - ob)
        if s1 < -step / 2 or s2 < -step / 2:
            taus.append(0.0)
            continue
        ra = _ray(axis_a, oa, toward_high)
        rb = _ray(axis_b, ob, toward_high)
        taus.append(_max_run(ra, rb, step, c, cache))
    return max(taus)
