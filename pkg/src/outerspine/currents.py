"""Rational geodesic currents and the length pairing.

A rational current is a finite positive combination of duals of conjugacy
classes; the pairing with a marked graph extends translation length
linearly.  Currents are the only boundary-flavored objects the artifact
materializes: limits (fixed laminations of exponentially growing
automorphisms) are touched exclusively through the explicit approximating
sequences produced by iwip_pair_approx.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import MarkedGraph, rose, translation_length, crossing_vector
from .words import (
    Automorphism,
    Word,
    apply,
    canonical_cyclic_key,
    canonical_representative,
    cyclic_reduce,
    invert,
    spelling_key,
)


@dataclass(frozen=True)
class RationalCurrent:
    """Finite weighted sum of conjugacy-class duals.

    Atoms are stored canonically: cyclically reduced, one spelling per class
    under rotation and inversion (preferring a over a' over b, so dual("a")
    prints as a), pairwise distinct, weights > 0 (zero weights are dropped,
    equal classes merge).
    """

    rank: int
    atoms: tuple[tuple[tuple[int, ...], float], ...] = ()

    def __init__(self, rank: int, atoms: Iterable[tuple[Word, float]] = ()):
        merged: dict[tuple[int, ...], float] = {}
        for w, weight in atoms:
            if w.rank != rank:
                raise ValueError("atom rank mismatch")
            if weight < 0:
                raise ValueError(f"negative weight {weight}")
            if weight == 0:
                continue
            key = canonical_representative(w).letters
            if not key:
                raise ValueError("trivial class cannot carry weight")
            merged[key] = merged.get(key, 0.0) + weight
        object.__setattr__(self, "rank", rank)
        object.__setattr__(
            self,
            "atoms",
            tuple(
                sorted(
                    merged.items(),
                    key=lambda kv: (len(kv[0]), spelling_key(Word(rank, kv[0]))),
                )
            ),
        )

    def __bool__(self) -> bool:
        return bool(self.atoms)

    def total_weight(self) -> float:
        return sum(w for _, w in self.atoms)

    def classes(self) -> tuple[Word, ...]:
        return tuple(Word(self.rank, letters) for letters, _ in self.atoms)

    def __str__(self) -> str:
        from .words import format_word

        return " + ".join(
            f"{w:g}*[{format_word(Word(self.rank, ls))}]" for ls, w in self.atoms
        )


def dual(w: Word, weight: float = 1.0) -> RationalCurrent:
    """The weighted dual current of the conjugacy class of ``w``."""
    return RationalCurrent(w.rank, [(w, weight)])


def add(mu: RationalCurrent, nu: RationalCurrent) -> RationalCurrent:
    if mu.rank != nu.rank:
        raise ValueError("rank mismatch")
    pairs = [(Word(mu.rank, ls), w) for ls, w in mu.atoms + nu.atoms]
    return RationalCurrent(mu.rank, pairs)


def scale(nu: RationalCurrent, t: float) -> RationalCurrent:
    if t <= 0:
        raise ValueError(f"scale must be positive, got {t}")
    return RationalCurrent(nu.rank, [(Word(nu.rank, ls), w * t) for ls, w in nu.atoms])


def exp_combination(mu: RationalCurrent, nu: RationalCurrent, s: float) -> RationalCurrent:
    """The current e^s mu + e^-s nu, materialized with rescaled weights."""
    import math

    return add(scale(mu, math.exp(s)), scale(nu, math.exp(-s)))


def pairing(tree: MarkedGraph, nu: RationalCurrent) -> float:
    """Length pairing: weighted sum of translation lengths of the atoms."""
    if tree.rank != nu.rank:
        raise ValueError("rank mismatch")
    out = 0.0
    for letters, weight in nu.atoms:
        out += weight * translation_length(tree, Word(nu.rank, letters))[0]
    return out


def normalize_at(x: MarkedGraph, nu: RationalCurrent) -> RationalCurrent:
    """Scale ``nu`` so the pairing with ``x`` is one."""
    p = pairing(x, nu)
    if p <= 0:
        raise ValueError("pairing is not positive; cannot normalize")
    return scale(nu, 1.0 / p)


def apply_to_current(phi: Automorphism, nu: RationalCurrent) -> RationalCurrent:
    """Push a current through an automorphism atom by atom."""
    if phi.rank != nu.rank:
        raise ValueError("rank mismatch")
    return RationalCurrent(
        nu.rank, [(apply(phi, Word(nu.rank, ls)), w) for ls, w in nu.atoms]
    )


@dataclass(frozen=True)
class IwipApproximation:
    """Power-iteration snapshot of the fixed current pair of an automorphism.

    ``forward``/``backward`` are the normalized duals of the k-th images of
    the seed under phi and its inverse; the lambda estimates are ratios of
    consecutive translation lengths on ``base``.  ``converged`` means the
    last two estimates agree within tol in both directions AND the growth is
    exponential; polynomially growing (reducible) automorphisms report
    exponential=False and estimates near 1.
    """

    phi: Automorphism
    seed: Word
    k: int
    forward: RationalCurrent
    backward: RationalCurrent
    lambda_forward: float
    lambda_backward: float
    lambda_history: tuple[tuple[float, float], ...]
    converged: bool
    exponential: bool


def iwip_pair_approx(
    phi: Automorphism,
    seed: Word,
    k: int,
    base: MarkedGraph | None = None,
    tol: float = 1e-6,
) -> IwipApproximation:
    """Approximate the attracting/repelling currents and expansion factors.

    Iterates seed -> phi(seed) (cyclically reduced each step, since only the
    conjugacy class matters) and the same for the inverse; lambda estimates
    are length ratios on ``base`` (default: unit rose of the right rank).
    """
    if not phi.invertible:
        raise ValueError("need an automorphism with a Nielsen factorization")
    if not seed:
        raise ValueError("seed must be nontrivial")
    if base is None:
        base = rose([1.0 / phi.rank] * phi.rank)
    inv = invert(phi)

    def iterate(f: Automorphism) -> tuple[list[float], Word]:
        w, _ = cyclic_reduce(seed)
        w_k = w
        lengths = [translation_length(base, w)[0]]
        for i in range(1, k + 2):
            w, _ = cyclic_reduce(apply(f, w))
            if not w:
                raise ValueError("seed died under iteration; map is not injective")
            lengths.append(translation_length(base, w)[0])
            if i == k:
                w_k = w
        return lengths, w_k

    fwd_lengths, w_fwd = iterate(phi)
    bwd_lengths, w_bwd = iterate(inv)

    history = tuple(
        (fwd_lengths[i + 1] / fwd_lengths[i], bwd_lengths[i + 1] / bwd_lengths[i])
        for i in range(k + 1)
    )
    lam_f, lam_b = history[k]
    exponential = lam_f > 1.001 and lam_b > 1.001
    converged = exponential and k >= 1 and (
        abs(history[k][0] - history[k - 1][0]) < tol
        and abs(history[k][1] - history[k - 1][1]) < tol
    )
    return IwipApproximation(
        phi=phi,
        seed=seed,
        k=k,
        forward=normalize_at(base, dual(w_fwd)),
        backward=normalize_at(base, dual(w_bwd)),
        lambda_forward=lam_f,
        lambda_backward=lam_b,
        lambda_history=history,
        converged=converged,
        exponential=exponential,
    )


@dataclass(frozen=True)
class PositivityReport:
    """Sampling evidence that pairing(T, mu+nu) stays positive.

    ``diagonal`` flags mu = nu projectively (excluded by definition);
    ``suspicious`` flags a sampled degenerate direction annihilating both:
    a direction is the rose point concentrating all length on the edges a
    sampled class crosses, and the pair must not vanish there.  A pass is
    evidence, never proof.
    """

    passed: bool
    diagonal: bool
    suspicious: bool
    min_value: float
    min_index: int
    vanishing_direction: str | None
    n_points: int
    n_words: int


def _projectively_equal(mu: RationalCurrent, nu: RationalCurrent) -> bool:
    if len(mu.atoms) != len(nu.atoms) or not mu.atoms:
        return False
    t = nu.total_weight() / mu.total_weight()
    for (ka, wa), (kb, wb) in zip(mu.atoms, nu.atoms):
        if ka != kb or abs(wa * t - wb) > 1e-12 * max(1.0, wb):
            return False
    return True


def positivity_check(
    mu: RationalCurrent,
    nu: RationalCurrent,
    sample_points: Sequence[MarkedGraph],
    sample_words: Sequence[Word] = (),
) -> PositivityReport:
    """Heuristic screen for positivity of the pair (mu, nu).

    Word schedule: the given sample words, all classes of length <= 2, and
    orbits psi^j(w) for every single right-multiply psi and j <= 6.  Each
    class yields the degenerate rose direction supported on its crossing
    set; the pair fails if its pairing vanishes there.
    """
    if mu.rank != nu.rank:
        raise ValueError("rank mismatch")
    rank = mu.rank
    both = add(mu, nu)
    diagonal = _projectively_equal(mu, nu)

    min_value, min_index = float("inf"), -1
    for i, pt in enumerate(sample_points):
        v = pairing(pt, both)
        if v < min_value:
            min_value, min_index = v, i

    words: dict[tuple[int, ...], Word] = {}

    def note(w: Word):
        core, _ = cyclic_reduce(w)
        if core:
            words.setdefault(canonical_cyclic_key(core), core)

    for w in sample_words:
        note(w)
    for a in range(1, rank + 1):
        note(Word(rank, (a,)))
        for b in range(-rank, rank + 1):
            if b != 0 and abs(b) != a:
                note(Word(rank, (a, b)))
    from .words import NielsenMove

    schedule = [
        Automorphism.from_moves(rank, [NielsenMove("right_multiply", t, o, inv_)])
        for t in range(1, rank + 1)
        for o in range(1, rank + 1)
        if o != t
        for inv_ in (False, True)
    ]
    base_words = list(words.values())
    for psi in schedule:
        for w in base_words:
            cur = w
            for _ in range(6):
                cur = apply(psi, cur)
                note(cur)

    probe = rose([1.0] * rank)
    atom_crossings = [
        (crossing_vector(probe, Word(rank, letters)), weight)
        for letters, weight in both.atoms
    ]
    suspicious = False
    vanishing = None
    for key, w in sorted(words.items(), key=lambda kv: (len(kv[0]), kv[0])):
        counts = crossing_vector(probe, w)
        total = sum(counts.values())
        direction = {eid: c / total for eid, c in counts.items()}
        val = 0.0
        for cv, weight in atom_crossings:
            val += weight * sum(cv[eid] * direction[eid] for eid in direction)
        if val <= 1e-9 * both.total_weight():
            suspicious = True
            from .words import format_word

            vanishing = format_word(w)
            break

    passed = (
        not diagonal
        and not suspicious
        and min_value > 0
        and min_index >= 0
    )
    return PositivityReport(
        passed=passed,
        diagonal=diagonal,
        suspicious=suspicious,
        min_value=min_value,
        min_index=min_index,
        vanishing_direction=vanishing,
        n_points=len(sample_points),
        n_words=len(words),
    )
