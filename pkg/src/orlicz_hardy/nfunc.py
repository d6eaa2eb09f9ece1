"""Young-type N-functions with numerically certified growth exponents.

An N-function M is convex, vanishes at 0, and grows superlinearly.  The
toolkit works with the two-sided power bounds

    M(a r) <= a^D_exp * M(r)   for a >= 1,
    M(a r) <= a^d_exp * M(r)   for a in (0, 1),

and the doubling constant M(2r) <= delta2_const * M(r).  Since these are
assumptions rather than computable properties, `certify_growth` and
`certify_delta2` test them on a declared grid and record estimates; exact
exponents for analytic families (powers, power-log) are pinned by their
constructors.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import CertificationError, DivergenceError, PreconditionError

__all__ = [
    "NFunction",
    "GridSpec",
    "certify_growth",
    "certify_delta2",
    "check_lemma_split",
    "check_lemma_young",
    "derivative",
    "power_nfunction",
    "power_log_nfunction",
    "table_nfunction",
]

DEFAULT_GRID_BOUNDS = (1e-6, 1e6)
DEFAULT_GRID_POINTS = 400


def comparison_tol(rhs: float, scale: float = 1e-12) -> float:
    """Additive tolerance for inequality comparisons: scale * max(1, |rhs|)."""
    return scale * max(1.0, abs(rhs))


@dataclass
class NFunction:
    """An evaluable N-function with optional certified metadata.

    eval must accept scalars and numpy arrays of r >= 0.  d_exp / D_exp /
    delta2_const stay None until pinned by a constructor or a certification
    run; grid_fingerprint records the grid the estimates came from.
    """

    eval: Callable
    deriv: Optional[Callable] = None
    d_exp: Optional[float] = None
    D_exp: Optional[float] = None
    delta2_const: Optional[float] = None
    label: str = ""
    differentiable: bool = False
    convex: bool = True
    grid_fingerprint: Optional[str] = None

    def __call__(self, r):
        return self.eval(r)

    def require_exponents(self) -> tuple[float, float]:
        if self.d_exp is None or self.D_exp is None:
            raise PreconditionError(
                f"N-function '{self.label}' has no certified growth exponents")
        return self.d_exp, self.D_exp


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid for certification: [r_min, r_max], log or linear."""

    r_min: float = DEFAULT_GRID_BOUNDS[0]
    r_max: float = DEFAULT_GRID_BOUNDS[1]
    points: int = DEFAULT_GRID_POINTS
    scale: str = "log"

    def __post_init__(self):
        if self.points < 2:
            raise PreconditionError("grid needs at least 2 points")
        if not (0.0 < self.r_min < self.r_max):
            raise PreconditionError("grid requires 0 < r_min < r_max")
        if self.scale not in ("log", "linear"):
            raise PreconditionError(f"unknown grid scale {self.scale!r}")

    def nodes(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.r_min), math.log10(self.r_max),
                               self.points)
        return np.linspace(self.r_min, self.r_max, self.points)

    def fingerprint(self) -> str:
        key = f"{self.r_min!r}|{self.r_max!r}|{self.points}|{self.scale}"
        return hashlib.sha256(key.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

def _grid_values(nf: NFunction, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    r = grid.nodes()
    m = np.asarray(nf.eval(r), dtype=float)
    if not np.all(np.isfinite(m)):
        bad = r[~np.isfinite(m)][0]
        raise CertificationError(f"'{nf.label}': non-finite value at r={bad:.6g}")
    if np.any(m < 0):
        bad = r[m < 0][0]
        raise CertificationError(f"'{nf.label}': negative value at r={bad:.6g}")
    if np.any(np.diff(m) < -1e-12 * np.maximum(m[:-1], 1.0)):
        i = int(np.argmax(np.diff(m) < -1e-12 * np.maximum(m[:-1], 1.0)))
        raise CertificationError(
            f"'{nf.label}': not non-decreasing between r={r[i]:.6g} and r={r[i+1]:.6g}")
    return r, m


def certify_growth(nf: NFunction, grid: GridSpec | None = None,
                   tol: float = 1e-9):
    """Estimate growth exponents from log-log chord slopes over all grid pairs.

    Returns (d_est, D_est, violations): d_est is the infimum and D_est the
    supremum of log(M(r2)/M(r1)) / log(r2/r1) over grid pairs r1 < r2.  When
    declared exponents are present, every pair is tested against them and the
    offending pairs are reported in `violations`.
    """
    grid = grid or GridSpec()
    r, m = _grid_values(nf, grid)
    if m[-1] <= m[0] * (1.0 + 1e-12):
        raise CertificationError(f"'{nf.label}': nonconstant growth required")
    pos = m > 0
    r, m = r[pos], m[pos]
    if r.size < 2:
        raise CertificationError(f"'{nf.label}': no positive values on grid interior")
    logr = np.log(r)
    logm = np.log(m)
    dr = np.subtract.outer(logr, logr)
    dm = np.subtract.outer(logm, logm)
    upper = dr > 0
    slopes = dm[upper] / dr[upper]
    d_est = float(slopes.min())
    D_est = float(slopes.max())

    violations: list[str] = []
    idx = np.argwhere(upper)
    if nf.d_exp is not None:
        bad = slopes < nf.d_exp - tol
        for j, k in idx[bad][:5]:
            violations.append(
                f"d_exp={nf.d_exp}: slope {slopes[bad][0]:.12g} < d_exp at "
                f"pair (r1={r[k]:.6g}, r2={r[j]:.6g})")
            break
        if np.any(bad) and not violations:
            violations.append(f"d_exp={nf.d_exp} violated")
    if nf.D_exp is not None:
        bad = slopes > nf.D_exp + tol
        if np.any(bad):
            j, k = idx[bad][0]
            violations.append(
                f"D_exp={nf.D_exp}: slope {float(slopes[bad].max()):.12g} > D_exp at "
                f"pair (r1={r[k]:.6g}, r2={r[j]:.6g})")
    return d_est, D_est, violations


def certify_delta2(nf: NFunction, grid: GridSpec | None = None,
                   cap: float = 1e12) -> float:
    """Supremum of M(2r)/M(r) over the grid; raises DivergenceError past `cap`."""
    grid = grid or GridSpec()
    r, m = _grid_values(nf, grid)
    pos = m > 0
    r, m = r[pos], m[pos]
    if r.size == 0:
        raise CertificationError(f"'{nf.label}': no positive values on grid interior")
    with np.errstate(over="ignore"):
        m2 = np.asarray(nf.eval(2.0 * r), dtype=float)
    ratio = m2 / m
    c_est = float(np.max(ratio))
    if not math.isfinite(c_est) or c_est > cap:
        raise DivergenceError(
            f"'{nf.label}': doubling ratio {c_est:.3g} exceeds cap {cap:.3g} "
            f"at grid max r={r[-1]:.6g}")
    return c_est


def certify(nf: NFunction, grid: GridSpec | None = None,
            delta2_cap: float = 1e12) -> NFunction:
    """Return a copy with certified metadata filled in.

    Declared exponents are validated (violations raise); missing ones are set
    to the grid estimates.
    """
    grid = grid or GridSpec()
    d_est, D_est, violations = certify_growth(nf, grid)
    if violations:
        raise CertificationError(f"'{nf.label}': " + "; ".join(violations))
    c_est = certify_delta2(nf, grid, cap=delta2_cap)
    return replace(
        nf,
        d_exp=nf.d_exp if nf.d_exp is not None else d_est,
        D_exp=nf.D_exp if nf.D_exp is not None else D_est,
        delta2_const=nf.delta2_const if nf.delta2_const is not None else c_est,
        grid_fingerprint=grid.fingerprint(),
    )


def derivative(nf: NFunction, r: float) -> float:
    """M'(r), analytic when available, else central differences."""
    if nf.deriv is not None:
        return float(nf.deriv(r))
    h = max(1e-6, 1e-6 * abs(r))
    lo = max(r - h, 0.0)
    return float((nf.eval(r + h) - nf.eval(lo)) / (r + h - lo))


# ---------------------------------------------------------------------------
# Pointwise inequality checks
# ---------------------------------------------------------------------------

def _ratio_power(nf: NFunction, r, alpha: int):
    """M(r)/r^alpha with the continuous extension at r=0.

    alpha=1 extends by 0; alpha=2 extends by the small-r limit, which exists
    when d_exp >= 2 (evaluated at r=1e-8)."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    zero = r == 0.0
    if np.any(zero):
        out[zero] = 0.0 if alpha == 1 else float(nf.eval(1e-8)) / 1e-16
    nz = ~zero
    out[nz] = np.asarray(nf.eval(r[nz]), dtype=float) / r[nz] ** alpha
    return out if out.ndim else float(out)


def check_lemma_split(nf: NFunction, r: float, s: float, lam: float,
                      alpha: int, tol_scale: float = 1e-12):
    """Check the split bound r^(-alpha) M(r) s^alpha <= c(alpha) M(r) + alpha*lam*M(s).

    c(1) = (1 - 1/D)(lam D)^(-1/(D-1)) and c(2) = (1 - 2/D)(lam D)^(-2/(D-2)).
    Requires lam >= 1/d_exp and alpha in {1, 2}.  Returns (lhs, rhs, holds).
    """
    d, D = nf.require_exponents()
    if alpha not in (1, 2):
        raise PreconditionError(f"alpha must be 1 or 2, got {alpha}")
    if d < 2.0 - 1e-12:
        raise PreconditionError(f"'{nf.label}': requires d_exp >= 2, got {d}")
    if alpha == 2 and D <= 2.0:
        raise PreconditionError(f"'{nf.label}': alpha=2 requires D_exp > 2, got {D}")
    if alpha == 1 and D <= 1.0:
        raise PreconditionError(f"'{nf.label}': alpha=1 requires D_exp > 1, got {D}")
    if lam < 1.0 / d - 1e-15:
        raise PreconditionError(f"lambda={lam} below 1/d_exp={1.0 / d}")
    lhs = float(_ratio_power(nf, r, alpha)) * s ** alpha
    coef = (1.0 - alpha / D) * (lam * D) ** (-alpha / (D - alpha))
    rhs = coef * float(nf.eval(r)) + alpha * lam * float(nf.eval(s))
    return lhs, rhs, lhs <= rhs + comparison_tol(rhs, tol_scale)


def check_lemma_young(nf: NFunction, a: float, b: float, eps: float,
                      tol_scale: float = 1e-12):
    """Check M(a) b <= eps M(a) + eps^(-D_exp) M(a b) for eps in (0, 1]."""
    _, D = nf.require_exponents()
    if not nf.convex:
        raise PreconditionError(f"'{nf.label}': convexity required")
    if not (0.0 < eps <= 1.0):
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")
    ma = float(nf.eval(a))
    lhs = ma * b
    rhs = eps * ma + eps ** (-D) * float(nf.eval(a * b))
    return lhs, rhs, lhs <= rhs + comparison_tol(rhs)


# ---------------------------------------------------------------------------
# Standard families
# ---------------------------------------------------------------------------

def power_nfunction(p: float) -> NFunction:
    """M(r) = r^p with exact exponents d = D = p and doubling constant 2^p."""
    if p <= 1.0:
        raise PreconditionError(f"power N-function needs p > 1, got {p}")

    def m(r):
        return np.power(r, p)

    def dm(r):
        return p * np.power(r, p - 1.0)

    return NFunction(eval=m, deriv=dm, d_exp=p, D_exp=p, delta2_const=2.0 ** p,
                     label=f"r^{p:g}", differentiable=True, convex=True)


def power_log_nfunction(p: float = 2.0) -> NFunction:
    """M(r) = r^p log(1+r); d = p and D = p+1 (log(1+ar) <= a log(1+r), a >= 1)."""
    if p < 2.0:
        raise PreconditionError(f"power-log N-function needs p >= 2, got {p}")

    def m(r):
        return np.power(r, p) * np.log1p(r)

    def dm(r):
        r = np.asarray(r, dtype=float)
        return p * np.power(r, p - 1.0) * np.log1p(r) + np.power(r, p) / (1.0 + r)

    return NFunction(eval=m, deriv=dm, d_exp=p, D_exp=p + 1.0,
                     delta2_const=2.0 ** (p + 1.0),
                     label=f"r^{p:g}*log(1+r)", differentiable=True, convex=True)


def table_nfunction(rs, ms, label: str = "table") -> NFunction:
    """Piecewise-linear N-function through monotone (r, M(r)) samples."""
    rs = np.asarray(rs, dtype=float)
    ms = np.asarray(ms, dtype=float)
    if rs.ndim != 1 or rs.shape != ms.shape or rs.size < 2:
        raise PreconditionError("table needs matching 1-d arrays with >= 2 rows")
    if np.any(np.diff(rs) <= 0):
        raise PreconditionError("table radii must be strictly increasing")
    if np.any(np.diff(ms) < 0):
        raise CertificationError(f"'{label}': table values must be non-decreasing")

    def m(r):
        return np.interp(r, rs, ms)

    return NFunction(eval=m, label=label, differentiable=False, convex=True)
