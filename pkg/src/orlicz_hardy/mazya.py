"""Maz'ya characterization constant for weighted Hardy transforms on (a, oo).

For measures mu, nu with nu* the absolutely continuous part of nu, the
transform inequality

    ( int_a^oo |int_a^x f|^q dmu )^(1/q) <= C ( int_a^oo |f|^p dnu )^(1/p)

holds for all Borel f iff

    B = sup_{r>a} mu([r, oo))^(1/q) *
        ( int_a^r (dnu*/dx)^(-1/(p-1)) dx )^((p-1)/p)  < oo.

The Gaussian application takes dmu = r^p dmu_n and dnu = dmu_n; there the
inner integral converges at 0 iff p > n, so the transform inequality can
hold only for p > n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import PreconditionError
from .hardy import CheckReport, _report
from .quadrature import (
    QuadratureSpec,
    gaussian_tail,
    integrate_interval,
    truncation_radius,
)

__all__ = [
    "MeasurePair",
    "MazyaResult",
    "mazya_B",
    "gaussian_hardy_pq",
    "check_hardy_transform",
    "classical_pair",
    "gaussian_pair",
    "table_pair",
    "TransformInput",
]

INNER_CAP = 1e12
OBJECTIVE_CAP = 1e12


@dataclass(frozen=True)
class MeasurePair:
    """(mu, nu) with exponents 1 < p <= q < oo on (a, oo).

    mu_tail(r) = mu([r, oo)); nu_density is dnu*/dx.  mu_density is optional
    and only needed by the transform check.
    """

    a: float
    mu_tail: Callable
    nu_density: Callable
    p: float
    q: float
    mu_density: Optional[Callable] = None
    label: str = ""
    grid_hi: float = 100.0

    def __post_init__(self):
        if self.p <= 1.0:
            raise PreconditionError(
                "p = 1 degenerates the (p-1)-root of the inner integral; "
                f"requires p > 1, got p={self.p}")
        if not self.p <= self.q:
            raise PreconditionError(f"requires p <= q, got p={self.p}, q={self.q}")
        if not math.isfinite(self.q):
            raise PreconditionError("q = oo is out of scope")


@dataclass(frozen=True)
class MazyaResult:
    B: float
    argmax_r: float
    divergent: bool
    reason: str = ""


def _nu_integrand(pair: MeasurePair):
    expo = -1.0 / (pair.p - 1.0)

    def integrand(x):
        dens = np.asarray(pair.nu_density(x), dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.power(dens, expo)
        return np.where(dens <= 0.0, np.inf, out)

    return integrand


def _endpoint_probe(pair: MeasurePair, width: float = 1e-3,
                    rungs: int = 10) -> tuple[float, bool]:
    """int over (a, a+width] of nu_density^(-1/(p-1)), probed on its own scale.

    The endpoint is approached through a decade ladder.  For an integrand
    ~ x^(-e) near a, successive ladder pieces form a geometric sequence with
    ratio 10^(e-1): ratios below 1 mean an integrable endpoint (the remaining
    tail is recovered by geometric extrapolation, exact for pure powers),
    ratios at or above ~1 mean logarithmic or power blow-up.
    """
    integrand = _nu_integrand(pair)
    pieces = []
    hi = pair.a + width
    total = 0.0
    for k in range(1, rungs + 1):
        lo = pair.a + width * 10.0 ** (-k)
        try:
            piece = integrate_interval(integrand, lo, hi, rel_tol=1e-10,
                                       abs_tol=1e-300)
        except Exception:
            return math.inf, False
        pieces.append(piece.value)
        total += piece.value
        if not math.isfinite(total) or total > INNER_CAP:
            return math.inf, False
        hi = lo
    floor = 1e-13 * max(abs(total), 1e-30)
    if abs(pieces[-1]) <= floor:
        return total, True
    ratios = [pieces[j + 1] / pieces[j] for j in range(len(pieces) - 3, len(pieces) - 1)
              if pieces[j] > 0.0]
    if not ratios or max(ratios) >= 0.9:
        return math.inf, False
    rho = max(ratios)
    return total + pieces[-1] * rho / (1.0 - rho), True


def _objective(pair: MeasurePair, r: float, probe: float,
               probe_width: float = 1e-3) -> tuple[float, bool]:
    tail = float(pair.mu_tail(r))
    if tail <= 0.0:
        return 0.0, True
    inner = probe
    if r > pair.a + probe_width:
        try:
            bulk = integrate_interval(_nu_integrand(pair), pair.a + probe_width,
                                      r, rel_tol=1e-9, abs_tol=1e-16)
        except Exception:
            return math.inf, False
        inner = probe + bulk.value
    if not math.isfinite(inner):
        return math.inf, False
    return tail ** (1.0 / pair.q) * inner ** ((pair.p - 1.0) / pair.p), True


def mazya_B(pair: MeasurePair, spec: QuadratureSpec | None = None,
            grid_points: int = 240) -> MazyaResult:
    """Supremum of the Maz'ya objective over a log grid with local refinement.

    Divergence is flagged when the inner integral blows up at the left
    endpoint, when the objective exceeds its cap, or when it keeps growing
    across the last decade of the grid.
    """
    spec = spec or QuadratureSpec()
    offsets = np.logspace(-3.0, math.log10(pair.grid_hi), grid_points)
    rs = pair.a + offsets

    # left-endpoint convergence is shared by every grid point; probe it once
    probe, ok0 = _endpoint_probe(pair)
    if not ok0:
        return MazyaResult(math.inf, float(rs[0]), True,
                           "inner integral diverges at the left endpoint")

    vals = np.empty(rs.size)
    for i, r in enumerate(rs):
        v, ok = _objective(pair, float(r), probe)
        if not ok or v > OBJECTIVE_CAP:
            return MazyaResult(math.inf, float(r), True,
                               f"objective exceeds cap at r={r:.6g}")
        vals[i] = v

    i = int(np.argmax(vals))
    # growth across the last decade of the grid
    if i == rs.size - 1:
        decade = offsets >= offsets[-1] / 10.0
        first = vals[decade][0]
        if first > 0 and vals[-1] > first * 1.01:
            return MazyaResult(float(vals[-1]), float(rs[-1]), True,
                               "objective still growing at the grid boundary")

    lo = float(rs[max(i - 1, 0)])
    hi = float(rs[min(i + 1, rs.size - 1)])
    best_r, best_v = float(rs[i]), float(vals[i])
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a_, b_ = lo, hi
    c_ = b_ - phi * (b_ - a_)
    d_ = a_ + phi * (b_ - a_)
    fc, _ = _objective(pair, c_, probe)
    fd, _ = _objective(pair, d_, probe)
    for _ in range(80):
        if b_ - a_ < 1e-10 * max(1.0, b_):
            break
        if fc >= fd:
            b_, d_, fd = d_, c_, fc
            c_ = b_ - phi * (b_ - a_)
            fc, _ = _objective(pair, c_, probe)
        else:
            a_, c_, fc = c_, d_, fd
            d_ = a_ + phi * (b_ - a_)
            fd, _ = _objective(pair, d_, probe)
    for r, v in ((c_, fc), (d_, fd)):
        if v > best_v:
            best_r, best_v = r, v
    return MazyaResult(best_v, best_r, False)


# ---------------------------------------------------------------------------
# Concrete pairs
# ---------------------------------------------------------------------------

def classical_pair() -> MeasurePair:
    """dmu = x^(-2) dx (tail 1/r), dnu = dx, p = q = 2 on (0, oo)."""
    return MeasurePair(
        a=0.0,
        mu_tail=lambda r: 1.0 / r,
        nu_density=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        mu_density=lambda x: np.asarray(x, dtype=float) ** (-2.0),
        p=2.0, q=2.0, label="classical", grid_hi=1e3)


def gaussian_pair(p: float, n: int) -> MeasurePair:
    """dmu = r^p dmu_n, dnu = dmu_n, a = 0, exponents p = q."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    m = p + n - 1.0  # power of r in the mu-density

    def tail(r):
        return gaussian_tail(m, 1.0, float(r))

    def nu_density(x):
        x = np.asarray(x, dtype=float)
        return np.power(x, n - 1.0) * np.exp(-0.5 * x * x)

    def mu_density(x):
        x = np.asarray(x, dtype=float)
        return np.power(x, m) * np.exp(-0.5 * x * x)

    # keep exp(r^2 / (2(p-1))) inside float range along the whole grid
    hi = min(truncation_radius(m, 1.0, 1e-16) + 10.0,
             math.sqrt(900.0 * (p - 1.0)))
    return MeasurePair(a=0.0, mu_tail=tail, nu_density=nu_density,
                       mu_density=mu_density, p=float(p), q=float(p),
                       label=f"gaussian[p={p:g},n={n}]", grid_hi=hi)


def table_pair(xs, mu_density_vals, nu_density_vals, p: float, q: float,
               label: str = "table") -> MeasurePair:
    """Pair from tabulated densities on [xs[0], xs[-1]] (linear interpolation)."""
    xs = np.asarray(xs, dtype=float)
    mu_v = np.asarray(mu_density_vals, dtype=float)
    nu_v = np.asarray(nu_density_vals, dtype=float)
    if xs.ndim != 1 or xs.shape != mu_v.shape or xs.shape != nu_v.shape:
        raise PreconditionError("table arrays must share one shape")
    if np.any(np.diff(xs) <= 0):
        raise PreconditionError("table abscissae must increase")

    def mu_density(x):
        return np.interp(x, xs, mu_v, left=0.0, right=0.0)

    # right-continuous tail by cumulative trapezoid from the right
    cum = np.concatenate([[0.0], np.cumsum(np.diff(xs) * 0.5 * (mu_v[1:] + mu_v[:-1]))])
    total = cum[-1]

    def mu_tail(r):
        return total - np.interp(r, xs, cum, left=0.0, right=total)

    def nu_density(x):
        return np.interp(x, xs, nu_v, left=0.0, right=0.0)

    return MeasurePair(a=float(xs[0]), mu_tail=mu_tail, nu_density=nu_density,
                       mu_density=mu_density, p=float(p), q=float(q),
                       label=label, grid_hi=float(xs[-1] - xs[0]))


def objective_series(pair: MeasurePair, grid_points: int = 60):
    """(r, objective) samples of the Maz'ya objective for plotting."""
    offsets = np.logspace(-3.0, math.log10(pair.grid_hi), grid_points)
    rs = pair.a + offsets
    probe, ok = _endpoint_probe(pair)
    rows = []
    for r in rs:
        if not ok:
            rows.append((float(r), math.inf))
            continue
        v, ok_r = _objective(pair, float(r), probe)
        rows.append((float(r), v if ok_r else math.inf))
    return rows


def gaussian_hardy_pq(p: float, n: int,
                      spec: QuadratureSpec | None = None) -> tuple[str, MazyaResult]:
    """Finiteness verdict for the Gaussian Hardy transform pair.

    Returns ("finite" | "divergent", MazyaResult).  Analytically the inner
    integrand behaves like x^(-(n-1)/(p-1)) near 0, so B is finite iff p > n.
    The verdict here is produced by the numeric detector, not the criterion.
    """
    if p <= 1.0:
        raise PreconditionError(f"requires p > 1, got p={p}")
    res = mazya_B(gaussian_pair(p, n), spec)
    return ("divergent" if res.divergent else "finite"), res


# ---------------------------------------------------------------------------
# Transform check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformInput:
    """A concrete f for the transform check, supported on [lo, hi]."""

    fn: Callable
    lo: float
    hi: float
    label: str = ""


def check_hardy_transform(f: TransformInput, pair: MeasurePair, C: float,
                          spec: QuadratureSpec | None = None,
                          **meta) -> CheckReport:
    """Evaluate both sides of the transform inequality for a concrete f.

    lhs = ( int_a^oo |F|^q dmu )^(1/q) with F(x) = int_a^x f,
    rhs = C ( int |f|^p dnu )^(1/p); the report's details carry the ratio
    lhs / rhs_base for comparison against B-derived constants.
    """
    spec = spec or QuadratureSpec()
    if pair.mu_density is None:
        raise PreconditionError(f"pair '{pair.label}' has no mu density")
    lo = max(pair.a, f.lo)

    def primitive(x: float) -> float:
        if x <= lo:
            return 0.0
        top = min(x, f.hi)
        if top <= lo:
            return 0.0
        return integrate_interval(f.fn, lo, top, rel_tol=1e-10).value

    def lhs_integrand(xs):
        xs = np.asarray(xs, dtype=float)
        vals = np.array([abs(primitive(float(x))) ** pair.q for x in xs])
        return vals * np.asarray(pair.mu_density(xs), dtype=float)

    # F is constant beyond supp f, so the outer tail is |F(hi)|^q mu([hi,oo));
    # push hi out until that bound is negligible
    hi = max(f.hi * 4.0, pair.a + 1.0)
    f_mass_q = abs(primitive(f.hi * 2.0)) ** pair.q
    for _ in range(60):
        tail_bound = f_mass_q * float(pair.mu_tail(hi))
        if tail_bound <= 1e-12 * max(f_mass_q, 1e-30) or hi > 1e15:
            break
        hi *= 2.0
    outer = integrate_interval(lhs_integrand, pair.a + 1e-12, hi,
                               rel_tol=1e-9, breakpoints=(f.lo, f.hi))
    tail_bound = abs(primitive(hi)) ** pair.q * float(pair.mu_tail(hi))
    lhs = (outer.value + 0.0) ** (1.0 / pair.q)

    def rhs_integrand(xs):
        xs = np.asarray(xs, dtype=float)
        return (np.abs(np.asarray(f.fn(xs), dtype=float)) ** pair.p
                * np.asarray(pair.nu_density(xs), dtype=float))

    base = integrate_interval(rhs_integrand, f.lo, f.hi, rel_tol=1e-10)
    rhs_base = base.value ** (1.0 / pair.p)
    rhs = C * rhs_base
    if rhs_base == 0.0 and lhs == 0.0:
        rep = _report("mazhar", 0.0, 0.0, {"C": C}, 0.0, **meta)
        rep.verdict = "holds"
        return rep
    if not math.isfinite(rhs):
        rep = _report("mazhar", lhs, rhs, {"C": C}, math.inf, **meta)
        rep.verdict = "indeterminate"
        return rep
    err = (outer.err_est + tail_bound) / max(pair.q * max(lhs, 1e-300) ** (pair.q - 1.0), 1e-300)
    rep = _report("mazhar", lhs, rhs, {"C": C, "rhs_base": rhs_base}, err, **meta)
    rep.details["ratio"] = lhs / rhs_base if rhs_base > 0 else math.inf
    return rep
