"""Piecewise power-law growth functions.

A growth function is represented pointwise in space by a :class:`PhiCurve`,
an ordered list of half-open pieces, each a sum of power terms
``coef * (t - shift)^exponent``.  A spatially varying family is a
:class:`PhiFunction`, mapping a point ``x`` to a curve.  The restriction to
power-term pieces keeps evaluation exact, gives closed-form inverses for
single-term pieces, and makes joint measurability automatic for every
family in the catalog.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

INF = math.inf

# Relative tolerances of the numerical kernels.  Closed forms are exact up
# to rounding; bisection and grid refinement target these.
EPS_INV = 1e-10
EPS_INV_BISECT = 1e-12
EPS_CONJ = 1e-8


class ConstructionError(ValueError):
    """Raised when requested parameters violate curve invariants."""


class DomainError(ValueError):
    """Raised when a spatial point lies outside the function's domain."""


# ---------------------------------------------------------------------------
# Curves


@dataclass(frozen=True)
class PowerTerm:
    """One term ``coef * max(t - shift, 0)**exponent``.

    ``coef >= 0`` and ``exponent >= 0`` keep every term non-decreasing on
    ``[0, inf)``.  ``shift`` supports pieces glued at a positive seam.
    """

    coef: float
    exponent: float
    shift: float = 0.0

    def __post_init__(self):
        if self.coef < 0:
            raise ConstructionError(f"negative coefficient {self.coef}")
        if self.exponent < 0:
            raise ConstructionError(f"negative exponent {self.exponent}")
        if self.shift < 0:
            raise ConstructionError(f"negative shift {self.shift}")

    def __call__(self, t):
        u = np.maximum(np.asarray(t, dtype=float) - self.shift, 0.0)
        if self.exponent == 0.0:
            out = np.where(np.asarray(t, dtype=float) >= self.shift, self.coef, 0.0)
        else:
            out = self.coef * u ** self.exponent
        if np.ndim(t) == 0:
            return float(out)
        return out


def _piece_value(terms: Sequence[PowerTerm], t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for term in terms:
        out = out + term(t)
    return out


@dataclass(frozen=True)
class PhiCurve:
    """A one-variable growth curve ``t -> value(t)``.

    ``pieces[i]`` applies on ``[breakpoints[i], breakpoints[i+1])`` with the
    final right endpoint ``inf``.  If ``infinite_tail`` is set, the value is
    ``+inf`` for ``t > infinite_tail``.
    """

    breakpoints: tuple
    pieces: tuple
    infinite_tail: float | None = None

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(
            self, "pieces", tuple(tuple(p) for p in self.pieces)
        )
        self._validate()

    def _validate(self):
        bps = self.breakpoints
        if len(bps) != len(self.pieces) or not bps or bps[0] != 0.0:
            raise ConstructionError("breakpoints must start at 0 and match pieces")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ConstructionError("breakpoints must be strictly increasing")
        if self.infinite_tail is not None and self.infinite_tail <= 0:
            raise ConstructionError("infinite_tail must be positive")
        # value(0) = 0 requires no constant contribution at the origin
        for term in self.pieces[0]:
            if term.coef > 0 and term.exponent == 0.0 and term.shift == 0.0:
                raise ConstructionError("first piece must vanish at t = 0")
        # no downward jumps at seams (weak growth functions are non-decreasing)
        for i in range(len(bps) - 1):
            left = float(_piece_value(self.pieces[i], bps[i + 1]))
            right = float(_piece_value(self.pieces[i + 1], bps[i + 1]))
            if right < left * (1 - 1e-12) - 1e-300:
                raise ConstructionError(
                    f"downward jump at breakpoint {bps[i + 1]}: {left} -> {right}"
                )
        # escape to infinity: a growing last piece or an infinite tail
        if self.infinite_tail is None:
            last = self.pieces[-1]
            if not any(t.coef > 0 and t.exponent > 0 for t in last):
                raise ConstructionError("curve does not tend to infinity")

    # -- evaluation

    def value(self, t):
        """Evaluate the curve; vectorized, returns +inf past the tail."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        if np.any(t < 0):
            raise ValueError("t must be nonnegative")
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        out = np.zeros_like(t)
        for i, terms in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = _piece_value(terms, t[mask])
        if self.infinite_tail is not None:
            out[t > self.infinite_tail] = INF
        return float(out[0]) if scalar else out

    def __call__(self, t):
        return self.value(t)

    def value_left(self, t: float) -> float:
        """Left limit at ``t`` (the containing piece evaluated from below)."""
        if t <= 0:
            return 0.0
        if self.infinite_tail is not None and t > self.infinite_tail:
            return INF
        i = np.searchsorted(self.breakpoints, t, side="left") - 1
        i = max(int(i), 0)
        return float(_piece_value(self.pieces[i], t))

    def _piece_bounds(self, i: int) -> tuple[float, float]:
        hi = self.breakpoints[i + 1] if i + 1 < len(self.breakpoints) else INF
        if self.infinite_tail is not None:
            hi = min(hi, self.infinite_tail)
        return self.breakpoints[i], hi

    # -- generalized inverse

    def inverse(self, tau: float) -> float:
        """Generalized inverse ``inf{s >= 0 : value(s) >= tau}``."""
        if tau < 0:
            raise ValueError("tau must be nonnegative")
        if tau == 0.0:
            return 0.0
        for i, terms in enumerate(self.pieces):
            lo, hi = self._piece_bounds(i)
            if lo >= hi:
                continue
            if float(_piece_value(terms, lo)) >= tau:
                return lo
            top = self._piece_sup(terms, hi)
            if top < tau:
                continue
            return self._invert_piece(terms, tau, lo, hi)
        if self.infinite_tail is not None:
            # finite values never reach tau; the jump to +inf does
            return self.infinite_tail
        return INF  # unreachable for valid curves

    @staticmethod
    def _piece_sup(terms, hi: float) -> float:
        if math.isinf(hi):
            return INF if any(t.coef > 0 and t.exponent > 0 for t in terms) else (
                float(_piece_value(terms, 1.0)) if terms else 0.0
            )
        return float(_piece_value(terms, hi))

    @staticmethod
    def _invert_piece(terms, tau: float, lo: float, hi: float) -> float:
        live = [t for t in terms if t.coef > 0]
        if len(live) == 1:
            term = live[0]
            if term.exponent == 0.0:
                return max(lo, term.shift)
            s = term.shift + (tau / term.coef) ** (1.0 / term.exponent)
            return min(max(s, lo), hi if not math.isinf(hi) else s)
        # monotone bisection on the piece
        a = lo
        if math.isinf(hi):
            b = max(lo, 1.0)
            while float(_piece_value(terms, b)) < tau:
                b *= 2.0
        else:
            b = hi
        for _ in range(200):
            mid = 0.5 * (a + b)
            if float(_piece_value(terms, mid)) >= tau:
                b = mid
            else:
                a = mid
            if b - a <= EPS_INV_BISECT * max(1.0, b):
                break
        return b

    # -- convex conjugate

    def conjugate(self, t: float) -> float:
        """``sup_{s>0} (s*t - value(s))`` with closed-form candidates plus a
        log-grid refinement pass."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        if t == 0.0:
            return 0.0
        if self.infinite_tail is None:
            verdict = self._tail_conjugate_finite(t)
            if verdict is False:
                return INF
        s_hi = self._conjugate_bracket(t)
        best = 0.0
        # breakpoints, two-sided
        for b in self.breakpoints[1:]:
            best = max(best, b * t - self.value_left(b), b * t - self.value(b))
        if self.infinite_tail is not None:
            b0 = self.infinite_tail
            best = max(best, b0 * t - self.value(b0))
        # closed-form stationary points of single-term pieces
        for i, terms in enumerate(self.pieces):
            lo, hi = self._piece_bounds(i)
            live = [tm for tm in terms if tm.coef > 0]
            if len(live) == 1 and live[0].exponent > 1.0:
                tm = live[0]
                c, e = tm.coef, tm.exponent
                s = tm.shift + (t / (c * e)) ** (1.0 / (e - 1.0))
                s = min(max(s, lo), hi if not math.isinf(hi) else s)
                best = max(best, s * t - float(_piece_value(terms, s)))
        # log-grid sweep with local refinement
        grid = np.geomspace(max(1e-12, 1e-6 * s_hi), s_hi, 256)
        vals = grid * t - self.value(grid)
        k = int(np.argmax(vals))
        best = max(best, float(vals[k]))
        a = grid[max(k - 1, 0)]
        b = grid[min(k + 1, len(grid) - 1)]
        for _ in range(6):
            local = np.linspace(a, b, 33)
            lv = local * t - self.value(local)
            j = int(np.argmax(lv))
            best = max(best, float(lv[j]))
            a, b = local[max(j - 1, 0)], local[min(j + 1, 32)]
        return max(best, 0.0)

    def _tail_conjugate_finite(self, t: float):
        """False if the supremum diverges along the unbounded last piece."""
        last = [tm for tm in self.pieces[-1] if tm.coef > 0]
        e_max = max(tm.exponent for tm in last)
        if e_max > 1.0:
            return True
        if e_max < 1.0:
            return False
        c_lin = sum(tm.coef for tm in last if tm.exponent == 1.0)
        return t <= c_lin

    def _conjugate_bracket(self, t: float) -> float:
        """An s beyond which ``s*t - value(s)`` is non-positive."""
        if self.infinite_tail is not None:
            return self.infinite_tail
        s = 1.0
        for _ in range(200):
            if self.value(s) >= 2.0 * t * s:
                return s
            s *= 2.0
        return s

    # -- serialization

    def to_dict(self) -> dict:
        return {
            "breakpoints": [b for b in self.breakpoints],
            "pieces": [
                [{"coef": tm.coef, "exponent": tm.exponent, "shift": tm.shift}
                 for tm in piece]
                for piece in self.pieces
            ],
            "infinite_tail": self.infinite_tail,
        }

    @staticmethod
    def from_dict(d: dict) -> "PhiCurve":
        tail = d.get("infinite_tail")
        if tail == "inf":
            tail = None
        return PhiCurve(
            breakpoints=tuple(d["breakpoints"]),
            pieces=tuple(
                tuple(PowerTerm(tm["coef"], tm["exponent"], tm.get("shift", 0.0))
                      for tm in piece)
                for piece in d["pieces"]
            ),
            infinite_tail=tail,
        )


def power_curve(p: float, coef: float = 1.0) -> PhiCurve:
    """The curve ``coef * t**p``."""
    return PhiCurve((0.0,), ((PowerTerm(coef, p),),))


# ---------------------------------------------------------------------------
# Spatial domains and regions


@dataclass(frozen=True)
class Domain:
    """A box in R^n, or all of R^n when lower/upper are None."""

    dim: int
    lower: tuple | None = None
    upper: tuple | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConstructionError("only dimensions 1 and 2 are supported")
        if (self.lower is None) != (self.upper is None):
            raise ConstructionError("lower and upper must be given together")
        if self.lower is not None:
            object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
            object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))

    @property
    def unbounded(self) -> bool:
        return self.lower is None

    def contains(self, x) -> bool:
        x = _as_point(x, self.dim)
        if self.unbounded:
            return True
        return all(lo <= xi <= hi for xi, lo, hi in zip(x, self.lower, self.upper))

    def sampling_box(self, radius: float = 16.0) -> tuple[tuple, tuple]:
        if self.unbounded:
            return tuple([-radius] * self.dim), tuple([radius] * self.dim)
        return self.lower, self.upper

    def to_dict(self) -> dict:
        if self.unbounded:
            return {"dim": self.dim, "all": True}
        return {"dim": self.dim, "lower": list(self.lower), "upper": list(self.upper)}

    @staticmethod
    def from_dict(d: dict) -> "Domain":
        if d.get("all"):
            return Domain(d["dim"])
        return Domain(d["dim"], tuple(d["lower"]), tuple(d["upper"]))


def _as_point(x, dim: int) -> tuple:
    if np.ndim(x) == 0:
        x = (float(x),)
    else:
        x = tuple(float(v) for v in x)
    if len(x) != dim:
        raise DomainError(f"point {x} has wrong dimension, expected {dim}")
    return x


@dataclass(frozen=True)
class Region:
    """A named semialgebraic subset of R^n with a membership test.

    ``measure`` is the Lebesgue measure when known in closed form.
    """

    name: str
    dim: int
    indicator: Callable = field(compare=False)
    measure: float | None = None
    params: dict = field(default_factory=dict)

    def contains(self, x) -> bool:
        return bool(self.indicator(np.asarray(_as_point(x, self.dim))))

    def contains_many(self, X: np.ndarray) -> np.ndarray:
        return self.indicator(np.asarray(X, dtype=float))

    def to_dict(self) -> dict:
        return {"region": self.name, **self.params}


def region_from_dict(d: dict) -> Region:
    name = d["region"]
    if name == "empty":
        dim = int(d.get("dim", 2))
        return Region("empty", dim, lambda X: np.zeros(X.shape[:-1] if X.ndim > 1 else (), bool),
                      measure=0.0, params={"dim": dim})
    if name == "inv_square_strip":
        # {(x, y) : x >= 1, |y| <= 1/x^2}; measure 2
        def ind(X):
            X = np.atleast_2d(X)
            inside = (X[..., 0] >= 1.0) & (np.abs(X[..., 1]) <= 1.0 / np.maximum(X[..., 0], 1.0) ** 2)
            return inside if inside.size > 1 else bool(inside.ravel()[0])
        return Region("inv_square_strip", 2, ind, measure=2.0)
    if name == "ball":
        center = np.asarray(d["center"], dtype=float)
        radius = float(d["radius"])
        dim = len(center)

        def ind(X):
            X = np.asarray(X, dtype=float)
            r = np.linalg.norm(np.atleast_2d(X) - center, axis=-1)
            inside = r <= radius
            return inside if inside.size > 1 else bool(inside.ravel()[0])
        meas = 2 * radius if dim == 1 else math.pi * radius ** 2
        return Region("ball", dim, ind, measure=meas,
                      params={"center": list(center), "radius": radius})
    if name == "halfplane":
        normal = np.asarray(d["normal"], dtype=float)
        offset = float(d.get("offset", 0.0))

        def ind(X):
            X = np.asarray(X, dtype=float)
            inside = np.atleast_2d(X) @ normal >= offset
            return inside if inside.size > 1 else bool(inside.ravel()[0])
        return Region("halfplane", len(normal), ind,
                      params={"normal": list(normal), "offset": offset})
    raise ConstructionError(f"unknown region {name!r}")


# ---------------------------------------------------------------------------
# Spatial parameter fields


def field_from_dict(d: dict) -> Callable:
    """Build a closed-form scalar field of ``|x|`` or a region indicator.

    The field evaluates on an array of points with shape (..., dim) or on a
    single point; it returns an array of the leading shape.
    """
    kind = d["field"]
    if kind == "const":
        v = float(d["value"])
        return lambda X: np.full(_lead_shape(X), v)
    if kind == "abs_power":
        c = float(d.get("coef", 1.0))
        k = float(d["power"])
        a = float(d.get("offset", 0.0))
        return lambda X: c * (_norms(X) + a) ** k
    if kind == "poly_abs":
        coeffs = [float(c) for c in d["coeffs"]]
        return lambda X: sum(c * _norms(X) ** i for i, c in enumerate(coeffs))
    if kind == "pw_linear":
        pts = sorted((float(u), float(v)) for u, v in d["points"])
        us = np.array([u for u, _ in pts])
        vs = np.array([v for _, v in pts])
        return lambda X: np.interp(_norms(X), us, vs)
    if kind == "indicator":
        region = region_from_dict(d["of"])
        return lambda X: np.asarray(region.contains_many(np.atleast_2d(np.asarray(X, float))),
                                    dtype=float).reshape(_lead_shape(X))
    raise ConstructionError(f"unknown field {kind!r}")


def _norms(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim <= 1:
        X = X.reshape(1, -1)
        return np.linalg.norm(X, axis=-1)
    return np.linalg.norm(X, axis=-1)


def _lead_shape(X):
    X = np.asarray(X, dtype=float)
    return X.shape[:-1] if X.ndim > 1 else (1,)


# ---------------------------------------------------------------------------
# Spatial families


class PhiFunction:
    """A family ``x -> PhiCurve`` over a spatial domain.

    Instances are immutable and safe to evaluate concurrently.  Catalog
    families additionally carry a vectorized evaluator used by the
    quadrature and maximal-operator code paths.
    """

    def __init__(self, kind: str, params: dict, domain: Domain,
                 curve_factory: Callable[[tuple], PhiCurve],
                 vec_eval: Callable | None = None,
                 x_independent: bool = False,
                 provenance: dict | None = None):
        self.kind = kind
        self.params = params
        self.domain = domain
        self._curve_factory = curve_factory
        self._vec_eval = vec_eval
        self.x_independent = x_independent
        self.provenance = provenance
        self._fixed_curve = curve_factory(tuple([0.0] * domain.dim)) if x_independent else None

    # -- evaluation

    def curve_at(self, x) -> PhiCurve:
        x = _as_point(x, self.domain.dim)
        if not self.domain.contains(x):
            raise DomainError(f"{x} outside domain")
        if self._fixed_curve is not None:
            return self._fixed_curve
        return self._curve_factory(x)

    def eval(self, x, t):
        """phi(x, t); exact piecewise power evaluation, +inf past a tail."""
        return self.curve_at(x).value(t)

    def eval_many(self, X: np.ndarray, T: np.ndarray) -> np.ndarray:
        """Vectorized phi(X[i], T[i]) for matching leading shapes."""
        X = np.asarray(X, dtype=float)
        T = np.asarray(T, dtype=float)
        if self._vec_eval is not None:
            return self._vec_eval(X, T)
        if self._fixed_curve is not None:
            return self._fixed_curve.value(T)
        pts = X.reshape(-1, self.domain.dim)
        ts = np.broadcast_to(T, (pts.shape[0],)).ravel() if T.ndim <= 1 else T.ravel()
        out = np.array([self.curve_at(tuple(p)).value(tv) for p, tv in zip(pts, ts)])
        return out.reshape(T.shape)

    def eval_grid(self, X: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """phi on the product of points X (N, dim) and levels ts (M,) -> (N, M)."""
        X = np.asarray(X, dtype=float).reshape(-1, self.domain.dim)
        ts = np.asarray(ts, dtype=float)
        if self._vec_eval is not None:
            XX = np.repeat(X, len(ts), axis=0)
            TT = np.tile(ts, len(X))
            return self._vec_eval(XX, TT).reshape(len(X), len(ts))
        return np.stack([self.curve_at(tuple(p)).value(ts) for p in X])

    def inverse(self, x, tau: float) -> float:
        return self.curve_at(x).inverse(tau)

    def conjugate_value(self, x, t: float) -> float:
        return self.curve_at(x).conjugate(t)

    # -- serialization

    def to_dict(self) -> dict:
        d = {"schema": "orliczkit-phi/1", "kind": self.kind,
             "params": self.params, "domain": self.domain.to_dict()}
        if self.provenance:
            d["provenance"] = self.provenance
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @staticmethod
    def from_dict(d: dict) -> "PhiFunction":
        from . import transforms  # deferred: transforms builds on this module
        kind = d["kind"]
        domain = Domain.from_dict(d["domain"]) if "domain" in d else None
        if kind in _FAMILIES:
            return make_family(kind, d.get("params", {}), domain=domain)
        if kind == "glued_small_values":
            base = PhiFunction.from_dict(d["params"]["base"])
            region = region_from_dict(d["params"]["region"])
            return transforms.glue_small_values(base, region, d["params"]["p"])
        if kind == "ainc_rebuild":
            base = PhiFunction.from_dict(d["params"]["base"])
            pair = transforms.AsymptotePair.from_dict(d["params"]["pair"])
            return transforms.rebuild_with_ainc(base, pair, d["params"]["t1"])
        raise ConstructionError(f"unknown kind {kind!r}")

    @staticmethod
    def from_json(s: str) -> "PhiFunction":
        return PhiFunction.from_dict(json.loads(s))


def from_curve(curve: PhiCurve, dim: int = 1, domain: Domain | None = None,
               kind: str = "curve", provenance: dict | None = None) -> PhiFunction:
    """Wrap a single curve as an x-independent family."""
    dom = domain or Domain(dim)
    return PhiFunction(kind, {"curve": curve.to_dict()}, dom,
                       lambda x: curve,
                       vec_eval=lambda X, T: curve.value(np.asarray(T, float)),
                       x_independent=True, provenance=provenance)


# ---------------------------------------------------------------------------
# Catalog families


def _make_orlicz(params, domain):
    if "curve" in params:
        curve = PhiCurve.from_dict(params["curve"])
    else:
        curve = power_curve(float(params["p"]), float(params.get("coef", 1.0)))
    dom = domain or Domain(int(params.get("dim", 1)))
    return PhiFunction("orlicz", params, dom, lambda x: curve,
                       vec_eval=lambda X, T: curve.value(np.asarray(T, float)),
                       x_independent=True)


def _make_variable_exponent(params, domain):
    pf = field_from_dict(params["p"])
    af = field_from_dict(params.get("a", {"field": "const", "value": 1.0}))
    dom = domain or Domain(int(params.get("dim", 1)))

    def factory(x):
        X = np.asarray(x, float)
        p = float(np.ravel(pf(X))[0])
        a = float(np.ravel(af(X))[0])
        if p < 1 or a < 0:
            raise ConstructionError("variable exponent needs p >= 1, a >= 0")
        return PhiCurve((0.0,), ((PowerTerm(a, p),),))

    def vec(X, T):
        X = np.asarray(X, float)
        T = np.asarray(T, float)
        return np.ravel(af(X)).reshape(T.shape) * T ** np.ravel(pf(X)).reshape(T.shape)

    return PhiFunction("variable_exponent", params, dom, factory, vec_eval=vec)


def _make_double_phase(params, domain):
    p = float(params["p"])
    q = float(params["q"])
    if p < 1 or q < p:
        raise ConstructionError("double phase needs 1 <= p <= q")
    af = field_from_dict(params.get("a", {"field": "const", "value": 0.0}))
    dom = domain or Domain(int(params.get("dim", 1)))

    def factory(x):
        a = float(np.ravel(af(np.asarray(x, float)))[0])
        if a < 0:
            raise ConstructionError("weight a must be nonnegative")
        terms = [PowerTerm(1.0, p)]
        if a > 0:
            terms.append(PowerTerm(a, q))
        return PhiCurve((0.0,), (tuple(terms),))

    def vec(X, T):
        T = np.asarray(T, float)
        a = np.ravel(af(np.asarray(X, float))).reshape(T.shape)
        return T ** p + a * T ** q

    return PhiFunction("double_phase", params, dom, factory, vec_eval=vec)


def _make_vdp(params, domain):
    pf = field_from_dict(params["p"])
    qf = field_from_dict(params["q"])
    af = field_from_dict(params.get("a", {"field": "const", "value": 0.0}))
    dom = domain or Domain(int(params.get("dim", 1)))

    def factory(x):
        X = np.asarray(x, float)
        p = float(np.ravel(pf(X))[0])
        q = float(np.ravel(qf(X))[0])
        a = float(np.ravel(af(X))[0])
        if p < 1 or q < p or a < 0:
            raise ConstructionError("needs 1 <= p(x) <= q(x), a >= 0")
        terms = [PowerTerm(1.0, p)]
        if a > 0:
            terms.append(PowerTerm(a, q))
        return PhiCurve((0.0,), (tuple(terms),))

    def vec(X, T):
        X = np.asarray(X, float)
        T = np.asarray(T, float)
        p = np.ravel(pf(X)).reshape(T.shape)
        q = np.ravel(qf(X)).reshape(T.shape)
        a = np.ravel(af(X)).reshape(T.shape)
        return T ** p + a * T ** q

    return PhiFunction("vdp", params, dom, factory, vec_eval=vec)


# Built-in gallery instances used by the example bundles and the test suite.


def _make_example_3_2(params, domain):
    region = region_from_dict({"region": "inv_square_strip"})
    dom = domain or Domain(2)
    on_g = PhiCurve((0.0, 1.0), ((PowerTerm(1.0, 1.0),), (PowerTerm(1.0, 2.0),)))
    off_g = power_curve(2.0)

    def factory(x):
        return on_g if region.contains(x) else off_g

    def vec(X, T):
        X = np.atleast_2d(np.asarray(X, float))
        T = np.asarray(T, float)
        ing = np.asarray(region.contains_many(X), bool).reshape(T.shape)
        return np.where(ing & (T < 1.0), T, T ** 2)

    return PhiFunction("example_3_2", params, dom, factory, vec_eval=vec)


def _make_example_3_4(params, domain):
    dim = int(params.get("dim", 2))
    dom = domain or Domain(dim)

    def factory(x):
        b = 1.0 / (float(np.linalg.norm(np.asarray(x, float))) + 2.0)
        return PhiCurve((0.0, b),
                        ((PowerTerm(1.0, 1.0),),
                         (PowerTerm(1.0, 2.0), PowerTerm(1.0, 1.0))))

    def vec(X, T):
        T = np.asarray(T, float)
        b = 1.0 / (_norms(X).reshape(T.shape) + 2.0)
        return np.where(T <= b, T, T ** 2 + T)

    return PhiFunction("example_3_4", params, dom, factory, vec_eval=vec)


def _make_example_3_5(params, domain):
    dim = int(params.get("dim", 2))
    dom = domain or Domain(dim)

    def factory(x):
        w = (float(np.linalg.norm(np.asarray(x, float))) + 1.0) ** dim
        b = 1.0 / w
        return PhiCurve((0.0, b),
                        ((PowerTerm(1.0 / w, 1.0),), (PowerTerm(1.0, 2.0),)))

    def vec(X, T):
        T = np.asarray(T, float)
        w = (_norms(X).reshape(T.shape) + 1.0) ** dim
        return np.where(T <= 1.0 / w, T / w, T ** 2)

    return PhiFunction("example_3_5", params, dom, factory, vec_eval=vec)


def _make_example_4_6(params, domain):
    # t^{p(x)} on (-2, 2) with p piecewise linear: 2 on [-1, 1], 1 at the ends
    dom = domain or Domain(1, (-2.0,), (2.0,))

    def pexp(X):
        r = _norms(X)
        return np.minimum(2.0, 3.0 - r)

    def factory(x):
        p = float(pexp(np.asarray(x, float))[0])
        return PhiCurve((0.0,), ((PowerTerm(1.0, max(p, 1.0)),),))

    def vec(X, T):
        T = np.asarray(T, float)
        p = np.maximum(pexp(np.asarray(X, float)).reshape(T.shape), 1.0)
        return T ** p

    return PhiFunction("example_4_6", params, dom, factory, vec_eval=vec)


_FAMILIES = {
    "orlicz": _make_orlicz,
    "curve": lambda params, domain: from_curve(
        PhiCurve.from_dict(params["curve"]),
        domain=domain, dim=(domain.dim if domain else int(params.get("dim", 1)))),
    "variable_exponent": _make_variable_exponent,
    "double_phase": _make_double_phase,
    "vdp": _make_vdp,
    "example_3_2": _make_example_3_2,
    "example_3_4": _make_example_3_4,
    "example_3_5": _make_example_3_5,
    "example_4_6": _make_example_4_6,
}


def make_family(kind: str, params: dict | None = None, domain: Domain | None = None) -> PhiFunction:
    """Construct a catalog family; raises ConstructionError for bad input."""
    if kind not in _FAMILIES:
        raise ConstructionError(f"unknown family kind {kind!r}")
    return _FAMILIES[kind](params or {}, domain)
