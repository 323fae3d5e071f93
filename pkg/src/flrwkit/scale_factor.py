"""Scale factors a(t) with interval metadata, and the limit/integral
diagnostics that the inextendibility criteria consume.

All classifiers commit to finite sampling rules and return a third verdict
("inconclusive") instead of guessing.  Sampling schedules are geometric:
t_k -> t_inf^+ with ratio q (default 1/2, at most 60 steps) for finite
lower endpoints, t_k = -2^k for past-eternal intervals, and doubling upper
cutoffs X_k = 2^k * anchor for integrals to +infinity.

Classification rules (committed, see the per-function docstrings):

* finite limit  -- the last samples are a relative Cauchy tail at 1e-4
  (fast-converged tails stop the schedule early at 1e-9);
* zero          -- |samples| decrease monotonically and either fall below
  1e-12 or shrink by >= 1/3 over the last eight steps while already small;
* +infinity     -- samples increase monotonically and either exceed 1e12 or
  grow by >= 50% over the last eight steps while already large;
* convergent    -- quadrature increments decay geometrically (tail ratio
  <= 0.95); the reported value includes a geometric tail estimate;
* divergent     -- increments fail to decay (tail ratio >= 0.98).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _quadrature
from .errors import (
    AnchorOutsideInterval,
    DomainError,
    FiniteLowerEndpoint,
    FiniteUpperEndpoint,
    InfiniteLowerEndpoint,
    NonFinite,
)
from .expr import Expr, eval_many, parse

__all__ = [
    "SublinearMeta", "ScaleFactorMeta", "ScaleFactor",
    "LimitDiag", "IntegralDiag", "HorizonResult",
    "limit_at_lower", "has_particle_horizon", "future_integral",
    "sbierski_hyperbolic_limit", "ling_limit",
    "classify_limit_samples", "lower_schedule", "default_anchor",
]

MAX_STEPS = 60
Q_DEFAULT = 0.5


@dataclass(frozen=True)
class SublinearMeta:
    """Asserted bound a(t) <= m*t + b with m > 0, b >= 0."""
    m: float
    b: float


@dataclass(frozen=True)
class ScaleFactorMeta:
    monotone_increasing: bool = False
    sublinear: SublinearMeta | None = None
    positivity_asserted: bool = False


@dataclass(frozen=True)
class ScaleFactor:
    """a(t) on the open interval (t_inf, t_sup); evaluation is only allowed
    strictly inside the interval."""

    func: Expr
    t_inf: float = 0.0
    t_sup: float = math.inf
    meta: ScaleFactorMeta = field(default_factory=ScaleFactorMeta)
    text: str | None = None

    def __post_init__(self):
        if not self.t_inf < self.t_sup:
            raise ValueError("require t_inf < t_sup")

    @classmethod
    def from_text(cls, text: str, t_inf: float = 0.0, t_sup: float = math.inf,
                  meta: ScaleFactorMeta | None = None) -> "ScaleFactor":
        return cls(parse(text), t_inf, t_sup, meta or ScaleFactorMeta(), text)

    def contains(self, t: float) -> bool:
        return self.t_inf < t < self.t_sup

    def values(self, ts) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized (a, a'); rejects samples outside the open interval and
        negative scale-factor values."""
        t = np.asarray(ts, dtype=float)
        if np.any(t <= self.t_inf) or np.any(t >= self.t_sup):
            raise DomainError(
                f"t outside the open interval ({self.t_inf}, {self.t_sup})")
        a, ap = eval_many(self.func, t)
        if np.any(a < 0.0):
            raise DomainError("scale factor must stay positive")
        return a, ap

    def pair(self, t: float) -> tuple[float, float]:
        a, ap = self.values([t])
        return float(a[0]), float(ap[0])

    def value(self, t: float) -> float:
        return self.pair(t)[0]

    def deriv(self, t: float) -> float:
        return self.pair(t)[1]


@dataclass(frozen=True)
class LimitDiag:
    kind: str          # 'finite' | 'zero' | 'plus_infinity' | 'inconclusive'
    value: float | None
    samples: tuple[tuple[float, float], ...]
    note: str = ""

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


@dataclass(frozen=True)
class IntegralDiag:
    kind: str          # 'convergent' | 'divergent' | 'inconclusive'
    value: float | None
    err: float | None
    partials: tuple[tuple[float, float], ...]
    note: str = ""


@dataclass(frozen=True)
class HorizonResult:
    kind: str          # 'has_horizon' | 'no_horizon' | 'inconclusive'
    diag: IntegralDiag


# --- schedules and anchors -----------------------------------------------------


def default_anchor(sf: ScaleFactor) -> tuple[float, str]:
    """Upper anchor for integrals from t_inf.  1 when the interval contains
    it; otherwise shifted (and the shift is recorded in diagnostics)."""
    if sf.t_inf < 1.0 < sf.t_sup:
        return 1.0, ""
    if math.isfinite(sf.t_inf) and math.isfinite(sf.t_sup):
        anchor = 0.5 * (sf.t_inf + sf.t_sup)
    elif math.isfinite(sf.t_inf):
        anchor = sf.t_inf + 1.0
    else:
        anchor = sf.t_sup - 1.0
    return anchor, f"anchor shifted to {anchor!r} (interval does not contain 1)"


def _resolve_anchor(sf: ScaleFactor, anchor: float | None) -> tuple[float, str]:
    if anchor is None:
        return default_anchor(sf)
    if not sf.contains(anchor):
        raise AnchorOutsideInterval(
            f"anchor {anchor} outside ({sf.t_inf}, {sf.t_sup})")
    return float(anchor), ""


def lower_schedule(sf: ScaleFactor, t_start: float | None = None,
                   q: float = Q_DEFAULT, k_max: int = MAX_STEPS):
    """Yield sample points t_k -> t_inf^+ (finite t_inf) or t_k -> -inf."""
    if math.isfinite(sf.t_inf):
        if t_start is None:
            t_start = _resolve_anchor(sf, None)[0]
        span = t_start - sf.t_inf
        if span <= 0:
            raise AnchorOutsideInterval("schedule start at or below t_inf")
        for k in range(k_max + 1):
            yield sf.t_inf + span * q ** k
    else:
        base = 0.0 if sf.t_sup > 0.0 else sf.t_sup - 2.0
        for k in range(k_max + 1):
            yield base - 2.0 ** k


# --- limit classifier -----------------------------------------------------------

FINITE_RELTOL = 1e-4
ZERO_FAST = 1e-12
ZERO_SLOW_LEVEL = 0.02
ZERO_SLOW_RATIO = 0.7
INF_FAST = 1e12
INF_SLOW_LEVEL = 50.0
INF_SLOW_RATIO = 1.4
_TAIL_DIFFS = 5


def classify_limit_samples(samples, note: str = "",
                           overflowed: bool = False) -> LimitDiag:
    """Classify a monotone-schedule sample sequence into a LimitDiag.

    Monotonicity and decay/growth ratios are judged over the last six
    samples, so an initial transient cannot mask an established trend.
    """
    pts = tuple((float(t), float(v)) for t, v in samples)
    vals = np.array([v for _, v in pts], dtype=float)
    n = len(vals)
    if n < 6:
        return LimitDiag("inconclusive", None, pts,
                         (note + " too few samples").strip())
    v = vals[-1]
    # finite: relative Cauchy tail
    scale = max(abs(v), 1e-12)
    if not overflowed and np.all(np.abs(vals[-4:] - v) <= FINITE_RELTOL * scale):
        return LimitDiag("finite", float(v), pts, note.strip())
    tail = vals[-min(_TAIL_DIFFS + 1, n):]
    atail = np.abs(tail)
    decreasing = bool(np.all(np.diff(atail) <= 0.0))
    increasing = bool(np.all(np.diff(tail) >= 0.0))
    if decreasing and abs(v) <= ZERO_FAST:
        return LimitDiag("zero", None, pts, note.strip())
    if (decreasing and abs(v) <= ZERO_SLOW_LEVEL
            and atail[0] > 0.0
            and atail[-1] <= ZERO_SLOW_RATIO * atail[0]):
        return LimitDiag("zero", None, pts,
                         (note + " slow-decay rule").strip())
    if increasing and (v >= INF_FAST or overflowed):
        return LimitDiag("plus_infinity", None, pts, note.strip())
    if (increasing and v >= INF_SLOW_LEVEL
            and tail[0] > 0.0 and tail[-1] >= INF_SLOW_RATIO * tail[0]):
        return LimitDiag("plus_infinity", None, pts,
                         (note + " slow-growth rule").strip())
    return LimitDiag("inconclusive", None, pts, note.strip())


def _sample_limit(schedule, fn, propagate_domain: bool = True,
                  note: str = "") -> LimitDiag:
    samples = []
    overflowed = False
    for t in schedule:
        try:
            v = float(fn(t))
        except (NonFinite, OverflowError, _quadrature.QuadratureError):
            overflowed = True
            note += " schedule truncated on overflow"
            break
        except DomainError:
            if propagate_domain:
                raise
            note += " schedule truncated on domain error"
            break
        if not math.isfinite(v):
            overflowed = True
            note += " schedule truncated on non-finite value"
            break
        samples.append((t, v))
        if len(samples) < 8:
            continue
        vals = [s[1] for s in samples[-4:]]
        sc = max(abs(vals[-1]), 1e-12)
        if all(abs(x - vals[-1]) <= 1e-9 * sc for x in vals):
            note += " early stop: converged"
            break
        if abs(vals[-1]) <= 1e-15 and abs(vals[-1]) <= abs(vals[-2]) <= abs(vals[-3]):
            note += " early stop: vanishing"
            break
        if vals[-1] >= 1e15 and vals[-1] >= vals[-2] >= vals[-3]:
            note += " early stop: exploding"
            break
    return classify_limit_samples(samples, note=note, overflowed=overflowed)


def limit_at_lower(sf: ScaleFactor, what="a", t_start: float | None = None,
                   q: float = Q_DEFAULT, k_max: int = MAX_STEPS) -> LimitDiag:
    """One-sided limit of a, a', or an arbitrary functional as t -> t_inf^+
    (or t -> -inf for past-eternal intervals).

    DomainErrors from evaluation propagate to the caller.
    """
    if what == "a":
        fn = sf.value
    elif what == "a_prime":
        fn = sf.deriv
    elif callable(what):
        fn = what
    else:
        raise ValueError("what must be 'a', 'a_prime' or a callable")
    sched = lower_schedule(sf, t_start=t_start, q=q, k_max=k_max)
    return _sample_limit(sched, fn, propagate_domain=True)


# --- integral classifier ---------------------------------------------------------

CONV_RATIO = 0.95
DIV_RATIO = 0.98
_RATIO_WINDOW = 6


def _classify_increments(partials, increments, note: str = "",
                         truncated: bool = False) -> IntegralDiag:
    pts = tuple((float(c), float(p)) for c, p in partials)
    if not pts:
        return IntegralDiag("inconclusive", None, None, pts,
                            (note + " no partials").strip())
    p_last = pts[-1][1]
    inc = np.array(increments, dtype=float)
    pos = inc[inc > 0.0]
    if len(inc) >= 2 and abs(inc[-1]) <= 1e-13 * max(1.0, abs(p_last)):
        return IntegralDiag("convergent", p_last, float(abs(inc[-1])), pts,
                            (note + " increments negligible").strip())
    if len(pos) < _RATIO_WINDOW + 1:
        return IntegralDiag("inconclusive", None, None, pts,
                            (note + " too few increments").strip())
    ratios = pos[-_RATIO_WINDOW:] / pos[-_RATIO_WINDOW - 1:-1]
    if np.all(ratios <= CONV_RATIO):
        rho = float(ratios[-1])
        tail = pos[-1] * rho / (1.0 - rho)
        return IntegralDiag("convergent", p_last + tail,
                            float(abs(tail)) + 1e-12, pts,
                            (note + f" geometric tail (rho={rho:.6g})").strip())
    if np.all(ratios >= DIV_RATIO) or (truncated and np.all(np.diff(pos) >= 0)):
        return IntegralDiag("divergent", None, None, pts, note.strip())
    if p_last >= 1e12 and np.all(inc >= 0.0):
        return IntegralDiag("divergent", None, None, pts,
                            (note + " huge partials").strip())
    return IntegralDiag("inconclusive", None, None, pts, note.strip())


def _partials_from_panels(panel_bounds, integrand, note: str = "",
                          quad_tol: float = 1e-12) -> IntegralDiag:
    """Accumulate partial integrals over a sequence of adjacent panels and
    classify.  Truncates on overflow (evidence so far is kept)."""
    partials = []
    increments = []
    total = 0.0
    truncated = False
    for lo, hi, cut in panel_bounds:
        try:
            inc = _quadrature.integrate(integrand, lo, hi, abs_tol=quad_tol)
        except (_quadrature.QuadratureError, NonFinite, OverflowError):
            truncated = True
            note += " schedule truncated on overflow"
            break
        except DomainError:
            truncated = True
            note += " schedule truncated on domain error"
            break
        total += inc
        increments.append(inc)
        partials.append((cut, total))
        # early exits once the behaviour is established
        if (len(increments) >= 3
                and abs(increments[-1]) <= 1e-13 * max(1.0, abs(total))
                and abs(increments[-2]) <= 1e-12 * max(1.0, abs(total))):
            break
        if len(increments) >= _RATIO_WINDOW + 4:
            pos = np.array([x for x in increments if x > 0.0])
            if len(pos) > _RATIO_WINDOW:
                r = pos[-_RATIO_WINDOW:] / pos[-_RATIO_WINDOW - 1:-1]
                if np.all(r >= DIV_RATIO) and total > 1e6:
                    break
    return _classify_increments(partials, increments, note, truncated)


def has_particle_horizon(sf: ScaleFactor, anchor: float | None = None,
                         q: float = Q_DEFAULT,
                         k_max: int = MAX_STEPS) -> HorizonResult:
    """Classify the integral of 1/a from t_inf up to the anchor.

    Convergent -> has_horizon, divergent -> no_horizon.
    """
    anchor, note = _resolve_anchor(sf, anchor)

    def integrand(ts):
        a, _ = sf.values(ts)
        return 1.0 / a

    cutoffs = [anchor] + [s for s in
                          lower_schedule(sf, t_start=anchor, q=q, k_max=k_max)
                          if s < anchor]

    def panels():
        for k in range(1, len(cutoffs)):
            yield cutoffs[k], cutoffs[k - 1], cutoffs[k]

    diag = _partials_from_panels(panels(), integrand, note=note)
    kind = {"convergent": "has_horizon", "divergent": "no_horizon",
            "inconclusive": "inconclusive"}[diag.kind]
    return HorizonResult(kind, diag)


def future_integral(sf: ScaleFactor, anchor: float | None = None,
                    k_max: int = 54) -> IntegralDiag:
    """Classify the integral of a/sqrt(a^2+1) from the anchor to +infinity
    by doubling cutoffs X_k."""
    if math.isfinite(sf.t_sup):
        raise FiniteUpperEndpoint("future integral requires t_sup = +inf")
    anchor, note = _resolve_anchor(sf, anchor)

    def integrand(ts):
        a, _ = sf.values(ts)
        # stable for huge a: a/sqrt(a^2+1) == 1/sqrt(1+a^-2)
        big = a > 1.0
        out = np.empty_like(a)
        out[big] = 1.0 / np.sqrt(1.0 + a[big] ** -2)
        out[~big] = a[~big] / np.sqrt(a[~big] ** 2 + 1.0)
        return out

    base = max(abs(anchor), 1.0)

    def panels():
        prev = anchor
        for k in range(1, k_max + 1):
            cut = anchor + base * (2.0 ** k - 1.0)
            yield prev, cut, cut
            prev = cut

    return _partials_from_panels(panels(), integrand, note=note)


def _inner_one_over_a(sf: ScaleFactor, anchor: float, q: float, k_max: int):
    """Generator of (t_k, integral of 1/a over [t_k, anchor]) built
    incrementally panel by panel."""
    def integrand(ts):
        a, _ = sf.values(ts)
        return 1.0 / a

    prev = anchor
    acc = 0.0
    for t in lower_schedule(sf, t_start=anchor, q=q, k_max=k_max):
        if t != prev:
            acc += _quadrature.integrate(integrand, t, prev, abs_tol=1e-12)
            prev = t
        yield t, acc


def sbierski_hyperbolic_limit(sf: ScaleFactor, anchor: float | None = None,
                              q: float = Q_DEFAULT,
                              k_max: int = MAX_STEPS) -> LimitDiag:
    """Limit of a(t) * exp(integral of 1/a over [t, anchor]) as t -> t_inf^+.

    Computed in log space so that near-cancelling products (e.g. a(t)=t,
    where the value is exactly 1) stay stable.
    """
    if not math.isfinite(sf.t_inf):
        raise InfiniteLowerEndpoint(
            "hyperbolic boundary limit requires a finite t_inf")
    anchor, note = _resolve_anchor(sf, anchor)

    samples = []
    overflowed = False
    try:
        for t, inner in _inner_one_over_a(sf, anchor, q, k_max):
            a = sf.value(t)
            if a == 0.0:
                overflowed = True
                note += " truncated: a underflowed"
                break
            x = math.log(a) + inner
            if x > 700.0:
                overflowed = True
                note += " truncated: value overflow"
                break
            samples.append((t, math.exp(x)))
            if len(samples) >= 8:
                vals = [s[1] for s in samples[-4:]]
                sc = max(abs(vals[-1]), 1e-12)
                if all(abs(u - vals[-1]) <= 1e-9 * sc for u in vals):
                    break
                if vals[-1] >= 1e15 and vals[-1] >= vals[-2] >= vals[-3]:
                    break
                if abs(vals[-1]) <= 1e-15 and abs(vals[-1]) <= abs(vals[-2]):
                    break
    except (_quadrature.QuadratureError, NonFinite, OverflowError):
        overflowed = True
        note += " schedule truncated on overflow"
    return classify_limit_samples(samples, note=note, overflowed=overflowed)


def ling_limit(sf: ScaleFactor, anchor: float | None = None,
               k_max: int = MAX_STEPS) -> LimitDiag:
    """Limit of a(t) * integral of 1/a over [t, anchor] as t -> -infinity."""
    if math.isfinite(sf.t_inf):
        raise FiniteLowerEndpoint("past-eternal limit requires t_inf = -inf")
    anchor, note = _resolve_anchor(sf, anchor)

    samples = []
    overflowed = False
    try:
        for t, inner in _inner_one_over_a(sf, anchor, Q_DEFAULT, k_max):
            a = sf.value(t)
            v = a * inner
            if not math.isfinite(v):
                overflowed = True
                note += " truncated: non-finite value"
                break
            samples.append((t, v))
            if len(samples) >= 8:
                vals = [s[1] for s in samples[-4:]]
                sc = max(abs(vals[-1]), 1e-12)
                if all(abs(u - vals[-1]) <= 1e-9 * sc for u in vals):
                    break
                if vals[-1] >= 1e15 and vals[-1] >= vals[-2] >= vals[-3]:
                    break
    except (_quadrature.QuadratureError, NonFinite, OverflowError):
        overflowed = True
        note += " schedule truncated on overflow"
    return classify_limit_samples(samples, note=note, overflowed=overflowed)
