"""Modular functionals, Luxemburg norms, and the taper truncation operator.

For a radial profile u and an N-function M the three modulars are

    K = int M(r |u(r)|) dmu_n,   L = int M(|u(r)|) dmu_n,
    G = int M(|u'(r)|) dmu_n,

with the n-dimensional counterparts integrating M(|x| |u|), M(|u|) and
M(|grad u|) against exp(-|x|^2/2) dx.  Truncation envelopes for the outer
composition are derived from the test function's decay hint and the
N-function's certified exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DivergenceError, PreconditionError
from .nfunc import NFunction
from .quadrature import (
    GaussianMeasure,
    QuadratureSpec,
    RadialMeasure,
    SupportHint,
    integrate_gaussian_nd,
    integrate_radial,
    surface_area,
)

__all__ = [
    "SupportHint",
    "RadialTestFunction",
    "FieldFunction",
    "ModularTriple",
    "ScalarProfile",
    "modular_triple_radial",
    "modular_triple_nd",
    "modular_value",
    "luxemburg_norm",
    "truncate",
    "validate_radial",
    "validate_field",
    "hessian_hs_norm",
]


@dataclass
class RadialTestFunction:
    """Continuous, piecewise-C1 profile on [0, oo) with analytic derivative.

    `du` is the a.e. derivative; radii where C1 fails are listed in
    breakpoints and become mandatory panel boundaries in quadrature.
    """

    u: Callable
    du: Callable
    breakpoints: tuple = ()
    hint: SupportHint = field(default_factory=lambda: SupportHint.decaying(0.0, 1.0))
    label: str = ""

    @property
    def smoothness(self) -> str:
        return "piecewise_C1" if self.breakpoints else "C1"

    def du_hint(self) -> SupportHint:
        if self.hint.kind == "compact":
            return self.hint
        return SupportHint.decaying(self.hint.degree + 1.0, self.hint.rate)


@dataclass
class FieldFunction:
    """C1 (optionally C2) scalar field on R^n with analytic gradient/Hessian.

    Callables are vectorised over leading axes: u maps (..., n) -> (...),
    grad maps (..., n) -> (..., n), hess maps (..., n) -> (..., n, n).
    radial_profile, when set, certifies that u(x) = profile(|x|).
    """

    u: Callable
    grad: Callable
    n: int
    hess: Optional[Callable] = None
    hint: SupportHint = field(default_factory=lambda: SupportHint.decaying(0.0, 1.0))
    label: str = ""
    radial_profile: Optional[RadialTestFunction] = None

    @property
    def smoothness(self) -> str:
        return "C2" if self.hess is not None else "C1"

    def grad_hint(self) -> SupportHint:
        if self.hint.kind == "compact":
            return self.hint
        return SupportHint.decaying(self.hint.degree + 1.0, self.hint.rate)

    def hess_hint(self) -> SupportHint:
        if self.hint.kind == "compact":
            return self.hint
        return SupportHint.decaying(self.hint.degree + 2.0, self.hint.rate)


@dataclass(frozen=True)
class ModularTriple:
    """The three modular integrals with error estimates and divergence flags."""

    K: float
    L: float
    G: float
    errs: tuple = (0.0, 0.0, 0.0)
    divergent: tuple = (False, False, False)

    @property
    def valid(self) -> bool:
        return (not any(self.divergent)
                and all(math.isfinite(v) and v >= 0.0 for v in (self.K, self.L, self.G)))


@dataclass(frozen=True)
class ScalarProfile:
    """A scalar-valued integrand with its decay hint (radial or on R^n)."""

    fn: Callable
    hint: SupportHint
    breakpoints: tuple = ()


def _compose_hint(arg_hint: SupportHint, weight_degree: float,
                  nf: NFunction) -> SupportHint:
    """Envelope of M(weight * |f|) given the envelope of f.

    Decaying arguments are eventually < 1 where M(x) <= M(1) x^d governs the
    tail; growing arguments use the upper exponent D.
    """
    d, D = nf.require_exponents()
    if arg_hint.kind == "compact":
        return arg_hint
    rate = arg_hint.rate
    e = d if rate > 0.0 else D
    return SupportHint.decaying(D * (arg_hint.degree + weight_degree), e * rate)


def _modular_component(fn, hint, nf, n, spec, breakpoints) -> tuple[float, float, bool]:
    """One modular integral; returns (value, err, divergent)."""
    env = _compose_hint(hint, 0.0, nf)
    if env.kind == "decaying" and 1.0 + env.rate <= 0.0:
        return math.inf, math.inf, True
    res = integrate_radial(fn, n, spec, envelope=env, breakpoints=breakpoints)
    return res.value, res.err_est, False


def modular_triple_radial(u: RadialTestFunction, nf: NFunction, n: int,
                          spec: QuadratureSpec | None = None) -> ModularTriple:
    """K, L, G of a radial profile against dmu_n."""
    spec = spec or QuadratureSpec()
    d, D = nf.require_exponents()

    def k_fn(r):
        return nf.eval(r * np.abs(u.u(r)))

    def l_fn(r):
        return nf.eval(np.abs(u.u(r)))

    def g_fn(r):
        return nf.eval(np.abs(u.du(r)))

    parts = []
    hints = [
        replace(u.hint, degree=u.hint.degree + 1.0) if u.hint.kind == "decaying" else u.hint,
        u.hint,
        u.du_hint(),
    ]
    for fn, hint in zip((k_fn, l_fn, g_fn), hints):
        env = _compose_hint(hint, 0.0, nf)
        if env.kind == "decaying" and 1.0 + env.rate <= 0.0:
            parts.append((math.inf, math.inf, True))
            continue
        res = integrate_radial(fn, n, spec, envelope=env, breakpoints=u.breakpoints)
        parts.append((res.value, res.err_est, False))
    return ModularTriple(
        K=parts[0][0], L=parts[1][0], G=parts[2][0],
        errs=(parts[0][1], parts[1][1], parts[2][1]),
        divergent=(parts[0][2], parts[1][2], parts[2][2]))


def hessian_hs_norm(u: FieldFunction, pts: np.ndarray) -> np.ndarray:
    """Hilbert-Schmidt magnitude of the Hessian, sqrt(sum_ij H_ij^2)."""
    if u.hess is None:
        raise PreconditionError(f"field '{u.label}' has no Hessian")
    h = np.asarray(u.hess(pts), dtype=float)
    return np.sqrt((h * h).sum(axis=(-2, -1)))


def modular_triple_nd(u: FieldFunction, nf: NFunction,
                      spec: QuadratureSpec | None = None,
                      normalized: bool = False,
                      use_radial_reduction: bool = False) -> ModularTriple:
    """K, L, G of a field against the Gaussian measure on R^n.

    With use_radial_reduction and a declared radial profile, the exact
    spherical reduction (surface area times the radial modular) is used
    instead of angular sampling.
    """
    spec = spec or QuadratureSpec()
    n = u.n
    if use_radial_reduction and u.radial_profile is not None:
        tri = modular_triple_radial(u.radial_profile, nf, n, spec)
        factor = surface_area(n) * (GaussianMeasure(n, normalized).mass_factor)
        return ModularTriple(
            K=tri.K * factor, L=tri.L * factor, G=tri.G * factor,
            errs=tuple(e * factor for e in tri.errs), divergent=tri.divergent)

    if u.grad is None:
        raise PreconditionError(f"field '{u.label}' has no gradient")

    def k_fn(pts):
        rr = np.linalg.norm(pts, axis=-1)
        return nf.eval(rr * np.abs(u.u(pts)))

    def l_fn(pts):
        return nf.eval(np.abs(u.u(pts)))

    def g_fn(pts):
        gr = np.asarray(u.grad(pts), dtype=float)
        return nf.eval(np.linalg.norm(gr, axis=-1))

    hints = [
        replace(u.hint, degree=u.hint.degree + 1.0) if u.hint.kind == "decaying" else u.hint,
        u.hint,
        u.grad_hint(),
    ]
    parts = []
    for fn, hint in zip((k_fn, l_fn, g_fn), hints):
        env = _compose_hint(hint, 0.0, nf)
        if env.kind == "decaying" and 1.0 + env.rate <= 0.0:
            parts.append((math.inf, math.inf, True))
            continue
        res = integrate_gaussian_nd(fn, n, spec, envelope=env, normalized=normalized)
        parts.append((res.value, res.err_est, False))
    return ModularTriple(
        K=parts[0][0], L=parts[1][0], G=parts[2][0],
        errs=(parts[0][1], parts[1][1], parts[2][1]),
        divergent=(parts[0][2], parts[1][2], parts[2][2]))


# ---------------------------------------------------------------------------
# Luxemburg norm
# ---------------------------------------------------------------------------

def _as_profile(f, measure) -> ScalarProfile:
    if isinstance(f, ScalarProfile):
        return f
    if isinstance(measure, RadialMeasure) and isinstance(f, RadialTestFunction):
        return ScalarProfile(f.u, f.hint, f.breakpoints)
    if isinstance(measure, GaussianMeasure) and isinstance(f, FieldFunction):
        return ScalarProfile(f.u, f.hint)
    raise PreconditionError(
        "luxemburg_norm needs a ScalarProfile or a test function matching the measure")


def _modular_of_scaled(profile: ScalarProfile, nf: NFunction, measure, spec,
                       scale: float) -> float:
    env = _compose_hint(profile.hint, 0.0, nf)
    if env.kind == "decaying" and 1.0 + env.rate <= 0.0:
        raise DivergenceError("modular diverges under the truncation policy")
    if isinstance(measure, RadialMeasure):
        res = integrate_radial(lambda r: nf.eval(np.abs(profile.fn(r)) / scale),
                               measure.n, spec, envelope=env,
                               breakpoints=profile.breakpoints)
        return res.value
    res = integrate_gaussian_nd(lambda pts: nf.eval(np.abs(profile.fn(pts)) / scale),
                                measure.n, spec, envelope=env,
                                normalized=measure.normalized)
    return res.value


def modular_value(f, nf: NFunction, measure, spec: QuadratureSpec | None = None,
                  scale: float = 1.0) -> float:
    """int M(|f| / scale) dmu for a test function or ScalarProfile."""
    spec = spec or QuadratureSpec()
    return _modular_of_scaled(_as_profile(f, measure), nf, measure, spec, scale)


def luxemburg_norm(f, nf: NFunction, measure, spec: QuadratureSpec | None = None,
                   norm_tol: float = 1e-9) -> float:
    """The Luxemburg norm inf{K > 0 : int M(|f|/K) dmu <= 1}.

    Under the doubling condition the modular is exactly 1 at the norm, so the
    value is found as the root of modular(K) = 1: a doubling/halving search
    brackets it from K=1, then log-secant steps with a bisection safeguard
    run until the modular lies within [1 - norm_tol, 1 + norm_tol].
    """
    spec = spec or QuadratureSpec()
    if nf.delta2_const is None:
        raise PreconditionError(
            f"N-function '{nf.label}' is not doubling-certified")
    profile = _as_profile(f, measure)

    def modular(k: float) -> float:
        return _modular_of_scaled(profile, nf, measure, spec, k)

    m1 = modular(1.0)
    if m1 <= 0.0:
        return 0.0
    lo = hi = 1.0
    m_lo = m_hi = m1
    if m1 > 1.0:
        for _ in range(64):
            lo, m_lo = hi, m_hi
            hi *= 2.0
            m_hi = modular(hi)
            if m_hi <= 1.0:
                break
        else:
            raise DivergenceError("no Luxemburg bracket within 2^64 upscaling")
    else:
        for _ in range(64):
            hi, m_hi = lo, m_lo
            lo /= 2.0
            m_lo = modular(lo)
            if m_lo >= 1.0:
                break
        else:
            return 0.0  # modular stays below 1 for arbitrarily small K: f ~ 0

    for _ in range(200):
        if abs(m_hi - 1.0) <= norm_tol:
            return hi
        if abs(m_lo - 1.0) <= norm_tol:
            return lo
        # secant in log-log coordinates, clipped into the bracket
        llo, lhi = math.log(lo), math.log(hi)
        glo, ghi = math.log(m_lo), math.log(m_hi)
        if glo > 0.0 > ghi and ghi < glo:
            t = glo / (glo - ghi)
            lk = llo + t * (lhi - llo)
            lk = min(max(lk, llo + 0.05 * (lhi - llo)), lhi - 0.05 * (lhi - llo))
            k = math.exp(lk)
        else:
            k = math.sqrt(lo * hi)
        mk = modular(k)
        if abs(mk - 1.0) <= norm_tol:
            return k
        if mk > 1.0:
            lo, m_lo = k, mk
        else:
            hi, m_hi = k, mk
    raise DivergenceError("Luxemburg iteration failed to converge")


# ---------------------------------------------------------------------------
# Truncation operator
# ---------------------------------------------------------------------------

def truncate(u: RadialTestFunction, cutoff: float) -> RadialTestFunction:
    """Taper u to compact support: u on [0, N], ((2N-r)/N) u on [N, 2N], 0 beyond.

    The derivative on (N, 2N) follows the product rule:
    u_N'(r) = ((2N-r)/N) u'(r) - u(r)/N.
    """
    if cutoff < 1.0:
        raise PreconditionError(f"truncation cutoff must be >= 1, got {cutoff}")
    big_n = float(cutoff)

    def u_fn(r):
        r = np.asarray(r, dtype=float)
        base = np.asarray(u.u(r), dtype=float)
        taper = (2.0 * big_n - r) / big_n
        return np.where(r <= big_n, base,
                        np.where(r < 2.0 * big_n, taper * base, 0.0))

    def du_fn(r):
        r = np.asarray(r, dtype=float)
        base = np.asarray(u.u(r), dtype=float)
        dbase = np.asarray(u.du(r), dtype=float)
        taper = (2.0 * big_n - r) / big_n
        return np.where(r <= big_n, dbase,
                        np.where(r < 2.0 * big_n, taper * dbase - base / big_n, 0.0))

    bps = sorted({float(b) for b in u.breakpoints if b < 2.0 * big_n}
                 | {big_n, 2.0 * big_n})
    return RadialTestFunction(
        u=u_fn, du=du_fn, breakpoints=tuple(bps),
        hint=SupportHint.compact(2.0 * big_n),
        label=f"{u.label}|trunc{big_n:g}")


# ---------------------------------------------------------------------------
# Validators (used at corpus load)
# ---------------------------------------------------------------------------

def _sample_radii(u: RadialTestFunction) -> np.ndarray:
    if u.hint.kind == "compact":
        hi = u.hint.radius * 0.995
    else:
        hi = 6.0
    r = np.linspace(0.02, hi, 160)
    if u.breakpoints:
        bps = np.asarray(u.breakpoints)
        dist = np.abs(r[:, None] - bps[None, :]).min(axis=1)
        r = r[dist > 1e-3]
    return r


def validate_radial(u: RadialTestFunction, deriv_rtol: float = 1e-6) -> list[str]:
    """Continuity at breakpoints and derivative-vs-central-difference checks."""
    problems: list[str] = []
    for b in u.breakpoints:
        if b <= 0:
            continue
        left = float(u.u(max(b - 1e-8, 0.0)))
        right = float(u.u(b + 1e-8))
        # a continuous kink still moves by ~ slope * probe width across b
        slope = abs(float(u.du(max(b - 1e-8, 0.0)))) + abs(float(u.du(b + 1e-8)))
        allowed = 1e-7 * (slope + 1.0) + 1e-9 * max(1.0, abs(left), abs(right))
        if abs(left - right) > allowed:
            problems.append(
                f"'{u.label}': discontinuous at breakpoint r={b:.6g} "
                f"(jump {abs(left - right):.3g})")
    r = _sample_radii(u)
    if r.size == 0:
        return problems
    h = 1e-6 * np.maximum(1.0, r)
    fd = (np.asarray(u.u(r + h), dtype=float)
          - np.asarray(u.u(r - h), dtype=float)) / (2.0 * h)
    du = np.asarray(u.du(r), dtype=float)
    scale = np.abs(du) + 1e-6 * np.max(np.abs(np.asarray(u.u(r), dtype=float)) + 1.0)
    dev = np.abs(fd - du) / scale
    worst = int(np.argmax(dev))
    if dev[worst] > deriv_rtol * 100:  # central differences carry O(h^2) + cancellation noise
        problems.append(
            f"'{u.label}': derivative mismatch at r={r[worst]:.6g}: "
            f"max relative deviation {dev[worst]:.3g}")
    return problems


def validate_field(u: FieldFunction, seed: int = 7,
                   grad_step: float = 1e-5, grad_rtol: float = 1e-4) -> list[str]:
    """Finite-difference gradient check and exact Hessian symmetry."""
    problems: list[str] = []
    rng = np.random.default_rng(seed)
    radius = u.hint.radius * 0.9 if u.hint.kind == "compact" else 3.0
    pts = rng.standard_normal((24, u.n))
    pts *= (radius * rng.uniform(0.05, 1.0, size=(24, 1))
            / np.linalg.norm(pts, axis=1, keepdims=True))
    g = np.asarray(u.grad(pts), dtype=float)
    fd = np.empty_like(g)
    for i in range(u.n):
        e = np.zeros(u.n)
        e[i] = grad_step
        fd[:, i] = (np.asarray(u.u(pts + e), dtype=float)
                    - np.asarray(u.u(pts - e), dtype=float)) / (2.0 * grad_step)
    scale = np.abs(g) + 1e-3 * (np.abs(np.asarray(u.u(pts), dtype=float))[:, None] + 1.0)
    dev = np.abs(fd - g) / scale
    if dev.max() > grad_rtol * 10:
        j = np.unravel_index(int(np.argmax(dev)), dev.shape)
        problems.append(
            f"'{u.label}': gradient mismatch (max rel dev {dev.max():.3g} "
            f"at point #{j[0]}, axis {j[1]})")
    if u.hess is not None:
        h = np.asarray(u.hess(pts), dtype=float)
        asym = np.abs(h - np.swapaxes(h, -2, -1)).max()
        if asym > 1e-12 * (1.0 + np.abs(h).max()):
            problems.append(f"'{u.label}': Hessian not symmetric (max dev {asym:.3g})")
    return problems
