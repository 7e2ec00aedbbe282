"""Capacity from the singularities of a counting quotient.

Two analytic routes, both with certified enclosures:

  characteristic-root   when the denominator has star form d0 - E with E
                        having nonnegative coefficients and positive
                        weights, E is strictly increasing on y > 0, so the
                        equation E(y) = d0 has one positive root: the
                        radius of convergence. Bracketed by doubling, then
                        bisection.
  smallest-pole         sign-change scan of the denominator on a grid over
                        (0, y_max], bisection on each bracket, skipping
                        candidates where the numerator also vanishes
                        (removable singularities). The first surviving root
                        is the smallest positive pole.

Capacity in nats per unit weight is -ln of the located singularity. The
reported error bound is the log-width of the final bracket.

`check_density` is the guard for channels whose weights are so dense that
capacity is not well defined: it compares polynomial against exponential
fits of the count of distinct weights below n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EvalOverflowError, InsufficientDataError, SolverError
from .genpoly import GeneralizedPolynomial, RationalGF, WeightVector

DEFAULT_TOL = 1e-12
DEFAULT_GRID_STEP = 1e-3
REMOVABLE_RTOL = 1e-9


@dataclass(frozen=True)
class RootResult:
    """A located root with its certified enclosure [low, high]."""

    root: float
    low: float
    high: float
    iterations: int

    @property
    def error_bound(self) -> float:
        return self.high - self.low


@dataclass(frozen=True)
class CapacityReport:
    method: str
    radius_or_pole: float
    capacity_nats: float
    error_bound: float
    iterations: int
    note: str | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "radius_or_pole": self.radius_or_pole,
            "capacity_nats": self.capacity_nats,
            "error_bound": self.error_bound,
            "iterations": self.iterations,
            "note": self.note,
        }


@dataclass(frozen=True)
class DensityReport:
    cutoff: float
    counts_below_n: tuple[tuple[int, int], ...]
    fitted_exponent: float
    exponential_flag: bool
    poly_residual: float
    exp_residual: float

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "counts_below_n": [list(pair) for pair in self.counts_below_n],
            "fitted_exponent": self.fitted_exponent,
            "exponential_flag": self.exponential_flag,
            "poly_residual": self.poly_residual,
            "exp_residual": self.exp_residual,
        }


def _evaluate_or_inf(p: GeneralizedPolynomial, y: float) -> float:
    try:
        return p.evaluate(y)
    except EvalOverflowError:
        return math.inf


def smallest_positive_root(
    p: GeneralizedPolynomial,
    target: float = 1.0,
    *,
    tol: float = DEFAULT_TOL,
    max_doublings: int = 200,
) -> RootResult:
    """Unique y > 0 with p(y) = target, for p with nonnegative coefficients.

    p must be strictly increasing where it matters: all coefficients
    nonnegative, at least one term of positive weight, and p(0) < target.
    The returned enclosure satisfies p(low) <= target <= p(high) with
    high - low <= tol.
    """
    for wv, c in p.terms():
        if c < 0:
            raise SolverError("polynomial has a negative coefficient; not monotone")
    p0 = p.evaluate(0.0)
    if not p0 < target:
        raise SolverError(
            f"no positive root: value at 0 is {p0:.6g}, already at or above {target:.6g}"
        )
    if all(wv.is_zero() for wv, _ in p.terms()):
        raise SolverError("polynomial is constant; it never reaches the target")

    iterations = 0
    lo, hi = 0.0, 1.0
    while _evaluate_or_inf(p, hi) < target:
        lo, hi = hi, hi * 2.0
        iterations += 1
        if iterations > max_doublings:
            raise SolverError(f"no root found below {hi:.3g}")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if mid == lo or mid == hi:
            break
        iterations += 1
        if _evaluate_or_inf(p, mid) < target:
            lo = mid
        else:
            hi = mid
    return RootResult((lo + hi) / 2.0, lo, hi, iterations)


def _log_enclosure_width(low: float, high: float) -> float:
    if low <= 0.0:
        return math.inf
    return math.log(high / low)


def characteristic_part(den: GeneralizedPolynomial) -> GeneralizedPolynomial | None:
    """E with den = d0 - E and E nonnegative, or None if den lacks star form."""
    terms = {}
    for wv, c in den.terms():
        if wv.is_zero():
            continue
        if c > 0:
            return None
        terms[wv] = -c
    return GeneralizedPolynomial(den.basis, terms)


def capacity_from_characteristic(
    gf: RationalGF, *, tol: float = DEFAULT_TOL
) -> CapacityReport:
    """Radius of convergence via the characteristic equation E(y) = d0.

    Requires the denominator in star form d0 - E (constant term positive,
    every other coefficient nonpositive); E is then a sum of positive
    multiples of y**w with w > 0, strictly increasing, and the unique
    solution of E(y) = d0 is the radius.
    """
    den = gf.denominator
    growth = characteristic_part(den)
    if growth is None:
        raise SolverError(
            "denominator is not in star form (positive constant minus "
            "nonnegative growth terms); use the pole method"
        )
    d0 = den.constant_coefficient
    if not growth:
        return CapacityReport(
            method="characteristic-root",
            radius_or_pole=math.inf,
            capacity_nats=0.0,
            error_bound=0.0,
            iterations=0,
            note="denominator has no growth terms; finitely many strings, capacity 0",
        )
    result = smallest_positive_root(growth, float(d0), tol=tol)
    if _is_removable(gf, result.root):
        raise SolverError(
            f"numerator vanishes at the characteristic root y = {result.root:.12g}; "
            "the singularity is removable there, use the pole scan instead"
        )
    return CapacityReport(
        method="characteristic-root",
        radius_or_pole=result.root,
        capacity_nats=-math.log(result.root),
        error_bound=_log_enclosure_width(result.low, result.high),
        iterations=result.iterations,
    )


def _is_removable(gf: RationalGF, y0: float, *, rtol: float = REMOVABLE_RTOL) -> bool:
    """Does the numerator vanish at y0, relative to its term magnitudes?"""
    num = gf.numerator
    scale = sum(abs(c) * y0 ** wv.value(num.basis) for wv, c in num.terms())
    return abs(num.evaluate(y0)) <= rtol * scale


def bracket_denominator_roots(
    gf: RationalGF,
    *,
    y_max: float = 1.0,
    grid_step: float = DEFAULT_GRID_STEP,
    tol: float = DEFAULT_TOL,
) -> tuple[list[RootResult], int]:
    """All denominator roots in (0, y_max] visible at the grid resolution.

    Returns (roots in increasing order, number of evaluations). Each result
    is a certified enclosure: the denominator takes opposite signs (or an
    exact zero) at its endpoints. Roots closer together than the grid step
    may be missed; that is the documented resolution limit.
    """
    if not 0 < grid_step <= y_max:
        raise ValueError("need 0 < grid_step <= y_max")
    den = gf.denominator
    n_grid = int(math.ceil(y_max / grid_step))
    if n_grid > 10_000_000:
        raise ValueError("grid too fine; raise grid_step or lower y_max")
    evaluations = 0

    def f(y: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return den.evaluate(y)

    found: list[RootResult] = []
    prev_y, prev_v = 0.0, f(0.0)
    # Denominator normalization makes the value at 0 positive.
    for j in range(1, n_grid + 1):
        y = min(j * grid_step, y_max)
        v = f(y)
        if v == 0.0:
            found.append(RootResult(y, y, y, 0))
            probe = y + 0.5 * grid_step
            if probe >= y_max:
                prev_v = None
                continue
            prev_y, prev_v = probe, f(probe)
            continue
        if prev_v is not None and (v < 0.0) != (prev_v < 0.0):
            lo, hi = prev_y, y
            flo = prev_v
            iterations = 0
            while hi - lo > tol:
                mid = (lo + hi) / 2.0
                if mid == lo or mid == hi:
                    break
                iterations += 1
                fmid = f(mid)
                if fmid == 0.0:
                    lo = hi = mid
                    break
                if (fmid < 0.0) == (flo < 0.0):
                    lo, flo = mid, fmid
                else:
                    hi = mid
            found.append(RootResult((lo + hi) / 2.0, lo, hi, iterations))
        prev_y, prev_v = y, v
    return found, evaluations


def smallest_positive_pole(
    gf: RationalGF,
    *,
    y_max: float = 1.0,
    grid_step: float = DEFAULT_GRID_STEP,
    tol: float = DEFAULT_TOL,
) -> CapacityReport:
    """Capacity from the smallest positive pole of the quotient.

    Scans the denominator for sign changes, refines each by bisection, and
    discards candidates where the numerator vanishes too (removable
    singularities of the quotient). For counting quotients the positive
    real axis carries a singularity of minimal modulus, so the first
    surviving root is the radius of convergence.
    """
    candidates, evaluations = bracket_denominator_roots(
        gf, y_max=y_max, grid_step=grid_step, tol=tol
    )
    skipped = 0
    for cand in candidates:
        if _is_removable(gf, cand.root):
            skipped += 1
            continue
        note = None
        if skipped:
            note = f"skipped {skipped} removable denominator root(s) below the pole"
        return CapacityReport(
            method="smallest-pole",
            radius_or_pole=cand.root,
            capacity_nats=-math.log(cand.root),
            error_bound=_log_enclosure_width(cand.low, cand.high)
            if cand.low < cand.high
            else 0.0,
            iterations=evaluations + cand.iterations,
            note=note,
        )
    bound = max(0.0, -math.log(y_max))
    detail = f"skipped {skipped} removable candidate(s); " if skipped else ""
    return CapacityReport(
        method="smallest-pole",
        radius_or_pole=y_max,
        capacity_nats=bound,
        error_bound=0.0,
        iterations=evaluations,
        note=(
            f"{detail}no pole in (0, {y_max:g}]; capacity is at most "
            f"{bound:.6g} and is reported as that bound"
        ),
    )


def complex_roots_integer_exponents(p: GeneralizedPolynomial) -> np.ndarray:
    """All complex roots of p when every exponent is a (near-)integer."""
    coeffs: dict[int, int] = {}
    for wv, c in p.terms():
        v = wv.value(p.basis)
        k = round(v)
        if abs(v - k) > 1e-9:
            raise SolverError(
                f"exponent {v!r} is not an integer; complex root finding "
                "applies to integer-exponent denominators only"
            )
        coeffs[k] = coeffs.get(k, 0) + c
    if not coeffs:
        raise SolverError("zero polynomial has no meaningful roots")
    degree = max(coeffs)
    highest_first = [coeffs.get(k, 0) for k in range(degree, -1, -1)]
    return np.roots(highest_first)


def check_density(
    weights,
    *,
    cutoff: float | None = None,
    margin: float = 1.0,
) -> DensityReport:
    """Fit the growth of the count of distinct weights below n.

    counts_below_n[n] is the number of distinct weights w < n for integer
    n up to the cutoff. A least-squares fit of ln count against ln n
    (polynomial growth) is compared with a fit against n (exponential
    growth) over the upper half of the usable range; if the exponential
    model fits better by the margin factor, capacity is not well defined
    for the weight set and the report flags it.
    """
    distinct = sorted(set(float(w) for w in weights))
    if cutoff is None:
        if not distinct:
            raise InsufficientDataError("no weights to analyze")
        cutoff = distinct[-1]
    cutoff = float(cutoff)
    top = int(math.floor(cutoff))
    if top < 1:
        raise InsufficientDataError("cutoff below 1; no integer thresholds to count")
    counts = []
    for n in range(1, top + 1):
        counts.append((n, sum(1 for w in distinct if w < n)))
    usable = [(n, c) for n, c in counts if c >= 1]
    if len(usable) < 4:
        raise InsufficientDataError(
            f"only {len(usable)} thresholds have a nonzero weight count; "
            "need at least 4 for a meaningful fit (raise the cutoff)"
        )
    upper = usable[len(usable) // 2 :]
    ns = np.array([n for n, _ in upper], dtype=float)
    cs = np.array([c for _, c in upper], dtype=float)
    log_c = np.log(cs)

    def fit(xs: np.ndarray) -> tuple[float, float]:
        design = np.column_stack([np.ones_like(xs), xs])
        coef, *_ = np.linalg.lstsq(design, log_c, rcond=None)
        resid = log_c - design @ coef
        return float(coef[1]), float(resid @ resid)

    slope_poly, sse_poly = fit(np.log(ns))
    _, sse_exp = fit(ns)
    return DensityReport(
        cutoff=cutoff,
        counts_below_n=tuple(counts),
        fitted_exponent=slope_poly,
        exponential_flag=bool(sse_exp < margin * sse_poly),
        poly_residual=sse_poly,
        exp_residual=sse_exp,
    )
