"""Constructive modifications of growth functions.

The transforms here take a growth function that fails one of the
regularity conditions and build an equivalent (or weakly equivalent) one
that satisfies it: raising small values to a power on a region, capping
at a threshold, repairing the tail of an asymptote, and rebuilding a
function around its asymptote so it grows almost monotonically at every
scale.  All constructions stay inside the piecewise power-law
representation, so the results pass the same structural invariants as
hand-built curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .phi_core import (
    ConstructionError,
    Domain,
    PhiCurve,
    PhiFunction,
    PowerTerm,
    Region,
    from_curve,
)
from .conditions import (
    SampleSpec,
    WeightFunction,
    default_x_samples,
    weight_from_dict,
)

INF = math.inf

#: Absolute bisection tolerance for threshold searches.
T1_TOL = 1e-8

#: Relative tolerance between successive shells before a tail asymptote is
#: declared convergent.
SHELL_TOL = 1e-3


@dataclass(frozen=True)
class AsymptotePair:
    """A spatial asymptote: curve phi_inf, perturbation weight h, and the
    constants (beta, s) with which the comparability condition holds."""

    phi_inf: PhiCurve
    h: WeightFunction
    beta: float
    s: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ConstructionError("beta must be in (0, 1]")
        if not self.s > 0:
            raise ConstructionError("s must be positive")
        for norm in (self.h.l1_norm, self.h.linf_norm):
            if norm is None or not math.isfinite(norm):
                raise ConstructionError("h must have finite L1 and Linf norms")

    def to_dict(self) -> dict:
        return {"phi_inf": self.phi_inf.to_dict(), "h": self.h.to_dict(),
                "beta": self.beta, "s": self.s}

    @staticmethod
    def from_dict(d: dict) -> "AsymptotePair":
        return AsymptotePair(PhiCurve.from_dict(d["phi_inf"]),
                             weight_from_dict(d["h"]),
                             d["beta"], d.get("s", 1.0))


# ---------------------------------------------------------------------------
# Raise small values to a power on a region


def _raise_below_one(curve: PhiCurve, p: float) -> PhiCurve:
    """Replace the curve by its p-th power on [0, 1]; requires each piece
    below 1 to be a single unshifted power so the result stays power-law."""
    bps, pieces = [], []
    for i, b in enumerate(curve.breakpoints):
        if b >= 1.0:
            break
        live = [t for t in curve.pieces[i] if t.coef > 0]
        if len(live) != 1 or live[0].shift != 0.0 or live[0].exponent == 0.0:
            raise ConstructionError(
                "small-value glueing needs single-power pieces below t = 1")
        tm = live[0]
        bps.append(b)
        pieces.append((PowerTerm(tm.coef ** p, tm.exponent * p),))
    j = np.searchsorted(curve.breakpoints, 1.0, side="right") - 1
    if curve.breakpoints[j] < 1.0:
        bps.append(1.0)
        pieces.append(curve.pieces[j])
    for k in range(j + 1, len(curve.breakpoints)):
        bps.append(curve.breakpoints[k])
        pieces.append(curve.pieces[k])
    return PhiCurve(tuple(bps), tuple(pieces), curve.infinite_tail)


def glue_small_values(psi1: PhiFunction, region: Region, p: float,
                      spec: SampleSpec | None = None) -> PhiFunction:
    """Return psi2 with psi2 = psi1**p on region x [0, 1] and psi2 = psi1
    elsewhere.

    Requires psi1(x, 1) = 1 at sampled region points (the normalization
    that makes the two branches agree at t = 1).
    """
    if p <= 1:
        raise ConstructionError("p must exceed 1")
    spec = spec or SampleSpec()
    X = default_x_samples(psi1.domain, spec)
    inside = region.contains_many(X)
    if np.any(inside):
        at_one = psi1.eval_grid(X[inside], np.array([1.0]))[:, 0]
        if np.any(np.abs(at_one - 1.0) > 1e-9):
            k = int(np.argmax(np.abs(at_one - 1.0)))
            raise ConstructionError(
                f"psi1(x, 1) = {at_one[k]} != 1 at a region sample; "
                "normalize before glueing")

    def factory(x):
        base = psi1.curve_at(x)
        return _raise_below_one(base, p) if region.contains(x) else base

    base_vec = psi1.eval_many

    def vec(X_, T_):
        X_ = np.asarray(X_, float)
        T_ = np.asarray(T_, float)
        out = base_vec(X_, T_)
        mask = region.contains_many(np.atleast_2d(X_)).reshape(out.shape) & (T_ < 1.0)
        out = np.where(mask, out ** p, out)
        return out

    return PhiFunction(
        "glued_small_values",
        {"base": psi1.to_dict(), "region": region.to_dict(), "p": p},
        psi1.domain, factory, vec_eval=vec)


# ---------------------------------------------------------------------------
# Threshold below which both the function and its asymptote stay <= 1


def _last_t_at_most(curve: PhiCurve, level: float, tol: float = T1_TOL) -> float:
    """sup{t : curve(t) <= level} by doubling plus bisection."""
    if curve.value(0.0) > level:
        return 0.0
    lo = 0.0
    hi = 1.0
    while curve.value(hi) <= level:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            return INF
    while curve.value(lo) > level and lo > 1e-300:
        hi = lo
        lo *= 0.5
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if curve.value(mid) <= level:
            lo = mid
        else:
            hi = mid
    return lo


def small_value_threshold(phi: PhiFunction, phi_inf: PhiCurve,
                          spec: SampleSpec | None = None,
                          x_samples: np.ndarray | None = None) -> float:
    """t1 = half the largest t with max(phi_inf(t), phi(x, t)) <= 1 at every
    sampled x.  The a.e.-sup is replaced by the min over sampled x, which
    errs in the conservative (smaller t1) direction."""
    spec = spec or SampleSpec()
    X = (np.atleast_2d(x_samples) if x_samples is not None
         else default_x_samples(phi.domain, spec))
    sup = _last_t_at_most(phi_inf, 1.0)
    for x in X:
        sup = min(sup, _last_t_at_most(phi.curve_at(tuple(x)), 1.0))
        if sup == 0.0:
            break
    if not sup > 0.0:
        raise ConstructionError("phi exceeds 1 at arbitrarily small t "
                                "at some sample; no positive threshold")
    return 0.5 * sup


# ---------------------------------------------------------------------------
# Cap at a threshold


def cap_curve(phi_inf: PhiCurve, beta0: float) -> PhiCurve:
    """Truncate: the curve is unchanged on [0, beta0] and +inf beyond."""
    if beta0 <= 0:
        raise ConstructionError("beta0 must be positive")
    keep = [i for i, b in enumerate(phi_inf.breakpoints) if b <= beta0]
    bps = tuple(phi_inf.breakpoints[i] for i in keep)
    pieces = tuple(phi_inf.pieces[i] for i in keep)
    tail = beta0
    if phi_inf.infinite_tail is not None:
        tail = min(tail, phi_inf.infinite_tail)
    return PhiCurve(bps, pieces, infinite_tail=tail)


# ---------------------------------------------------------------------------
# Repair the tail of an asymptote so it grows at least like a power


def repair_asymptote(phi_inf: PhiCurve, t1: float, p: float) -> PhiCurve:
    """Keep phi_inf on [0, t1] and continue with phi_inf(t1) + (t - t1)**p,
    which is continuous at the seam and p-power-growing beyond it."""
    if t1 <= 0:
        raise ConstructionError("t1 must be positive")
    if p <= 1:
        raise ConstructionError("p must exceed 1")
    v1 = phi_inf.value(t1)
    if not math.isfinite(v1):
        raise ConstructionError("phi_inf must be finite at t1")
    bps, pieces = [], []
    for i, b in enumerate(phi_inf.breakpoints):
        if b >= t1:
            break
        bps.append(b)
        pieces.append(phi_inf.pieces[i])
    bps.append(t1)
    pieces.append((PowerTerm(v1, 0.0, shift=t1), PowerTerm(1.0, p, shift=t1)))
    return PhiCurve(tuple(bps), tuple(pieces))


# ---------------------------------------------------------------------------
# Rebuild around the asymptote


def rebuild_with_ainc(phi: PhiFunction, pair: AsymptotePair,
                      t1: float) -> PhiFunction:
    """psi(x, t) = phi_inf(beta*t) on [0, t1) and
    max(phi_inf(beta*t1), phi(x, t)) beyond.

    Small values come from the x-independent asymptote (scaled by the
    comparability constant beta), large values from phi itself; the flat
    middle bridges the two levels.
    """
    if t1 <= 0:
        raise ConstructionError("t1 must be positive")
    beta = pair.beta
    phi_inf = pair.phi_inf
    c = phi_inf.value(beta * t1)
    if not (math.isfinite(c) and c > 0):
        raise ConstructionError("asymptote must be positive and finite at "
                                "beta * t1")

    def _scaled_terms(terms):
        return tuple(PowerTerm(tm.coef * beta ** tm.exponent, tm.exponent,
                               shift=tm.shift / beta) for tm in terms)

    def factory(x):
        bc = phi.curve_at(x)
        bps, pieces = [], []
        for i, b in enumerate(phi_inf.breakpoints):
            sb = b / beta
            if sb >= t1:
                break
            bps.append(sb)
            pieces.append(_scaled_terms(phi_inf.pieces[i]))
        t_star = max(t1, bc.inverse(c))
        tail = bc.infinite_tail
        if math.isinf(t_star):
            # phi never reaches level c: flat at c forever is not a growth
            # curve, so this input is rejected
            raise ConstructionError("phi does not reach the asymptote level")
        if t_star > t1 * (1.0 + 1e-12):
            bps.append(t1)
            pieces.append((PowerTerm(c, 0.0, shift=t1),))
            start = t_star
        else:
            start = t1
        if tail is not None and start >= tail:
            return PhiCurve(tuple(bps), tuple(pieces), infinite_tail=tail)
        j = int(np.searchsorted(bc.breakpoints, start, side="right") - 1)
        bps.append(start)
        pieces.append(bc.pieces[j])
        for k in range(j + 1, len(bc.breakpoints)):
            bps.append(bc.breakpoints[k])
            pieces.append(bc.pieces[k])
        return PhiCurve(tuple(bps), tuple(pieces), infinite_tail=tail)

    base_vec = phi.eval_many

    def vec(X_, T_):
        T_ = np.asarray(T_, float)
        out = np.maximum(c, base_vec(X_, T_))
        small = T_ < t1
        if np.any(small):
            out = np.where(small, phi_inf.value(np.minimum(T_, t1) * beta), out)
        return out

    return PhiFunction(
        "ainc_rebuild",
        {"base": phi.to_dict(), "pair": pair.to_dict(), "t1": t1},
        phi.domain, factory, vec_eval=vec)


# ---------------------------------------------------------------------------
# Tail asymptotes by shell sampling


@dataclass(frozen=True)
class AsymptoteEstimate:
    """Upper/lower tail envelopes of phi(x, t) as |x| grows, as witness
    curves from the outermost sampled shell."""

    upper: PhiCurve
    lower: PhiCurve
    converged: bool
    flags: tuple = ()
    shells: dict = field(default_factory=dict, compare=False)

    def __iter__(self):
        return iter((self.upper, self.lower))


def _shell_points(domain: Domain, radius: float, n: int) -> np.ndarray:
    if domain.dim == 1:
        pts = np.array([[-radius], [radius]])
    else:
        ang = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        pts = radius * np.column_stack([np.cos(ang), np.sin(ang)])
        axes = radius * np.array([[1.0, 0.0], [-1.0, 0.0],
                                  [0.0, 1.0], [0.0, -1.0]])
        pts = np.vstack([pts, axes])
    keep = np.array([domain.contains(tuple(p)) for p in pts])
    return pts[keep]


def tail_asymptotes(phi: PhiFunction, t_grid: np.ndarray | None = None,
                    radius_sequence=(1e2, 1e3, 1e4),
                    points_per_shell: int = 64,
                    rel_tol: float = SHELL_TOL) -> AsymptoteEstimate:
    """Estimate limsup/liminf of phi(x, t) over |x| -> inf.

    Evaluates phi on circles (or point pairs in 1D) of increasing radius,
    takes the per-t max/min envelope on the outermost shell, and flags the
    result inconclusive when the two outermost shells disagree by more
    than ``rel_tol`` relatively.
    """
    if t_grid is None:
        t_grid = SampleSpec().t_grid()
    t_grid = np.asarray(t_grid, float)
    radii = sorted(float(r) for r in radius_sequence)
    if len(radii) < 2:
        raise ValueError("need at least two radii to judge convergence")

    if phi.x_independent:
        lower, _ = phi.domain.sampling_box(1.0)
        curve = phi.curve_at(tuple(np.zeros(phi.domain.dim)))
        return AsymptoteEstimate(curve, curve, True)

    envelopes = {}
    shell_vals = {}
    for r in radii:
        pts = _shell_points(phi.domain, r, points_per_shell)
        if len(pts) == 0:
            raise ConstructionError(f"no shell points of radius {r} lie in "
                                    "the domain")
        vals = phi.eval_grid(pts, t_grid)
        envelopes[r] = (vals.max(axis=0), vals.min(axis=0))
        shell_vals[r] = (pts, vals)

    flags = []
    up2, lo2 = envelopes[radii[-2]]
    up1, lo1 = envelopes[radii[-1]]
    scale = np.maximum(np.abs(up1), 1e-300)
    converged = bool(np.all(np.abs(up1 - up2) <= rel_tol * scale)
                     and np.all(np.abs(lo1 - lo2)
                                <= rel_tol * np.maximum(np.abs(lo1), 1e-300)))
    if not converged:
        flags.append("inconclusive")

    pts, vals = shell_vals[radii[-1]]

    def witness(env, select):
        hits = np.isclose(vals, env[None, :], rtol=1e-9, atol=1e-300)
        k = int(np.argmax(hits.sum(axis=1)))
        curve = phi.curve_at(tuple(pts[k]))
        if not np.allclose(curve.value(t_grid), env, rtol=1e-6):
            flags.append(f"{select}_envelope_not_single_curve")
        return curve

    upper = witness(up1, "upper")
    lower = witness(lo1, "lower")
    return AsymptoteEstimate(upper, lower, converged, tuple(flags),
                             shells={r: envelopes[r] for r in radii})
