"""Hardy-type inequality checks for the radial Gaussian measure.

Every check compares a left-hand modular against an explicit right-hand
combination of modulars and reports the outcome with its slack, the
constants used, and a verdict that is tolerance- and quadrature-error-aware:
`indeterminate` is reported whenever the numeric error band straddles the
decision boundary, never coerced to a pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .functionals import (
    FieldFunction,
    ModularTriple,
    RadialTestFunction,
    ScalarProfile,
    modular_triple_nd,
    luxemburg_norm,
)
from .nfunc import NFunction, comparison_tol
from .quadrature import (
    GaussianMeasure,
    QuadratureSpec,
    RadialMeasure,
    SupportHint,
)

__all__ = [
    "CheckReport",
    "check_alternative",
    "linear_constants",
    "check_linear",
    "check_p2_exact",
    "beta_gamma",
    "tradeoff_check",
    "convex_constants",
    "check_convex_case",
    "check_norm_form_radial",
    "check_nd",
]

INEQUALITY_IDS = ("term1", "term2", "liniowe", "ww", "www",
                  "hn1", "hn11", "wwww", "p2_exact")

_TINY = 1e-300


@dataclass
class CheckReport:
    """Outcome of a single inequality check."""

    inequality_id: str
    lhs: float
    rhs: float
    slack: float
    constants_used: dict
    tolerance: float
    err_est: float
    verdict: str
    nfunc_label: str = ""
    subject_label: str = ""
    n: int | None = None
    normalization: str = "unnormalized"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict in ("holds", "trivial", "indeterminate")


def _verdict(lhs: float, rhs: float, err_est: float, tol: float) -> str:
    slack = rhs - lhs
    if abs(lhs) <= _TINY and abs(rhs) <= _TINY:
        return "holds"
    if err_est > 0.0 and abs(slack) <= err_est:
        return "indeterminate"
    return "holds" if slack >= -tol else "fails"


def _report(inequality_id: str, lhs: float, rhs: float, constants: dict,
            err_est: float, tol_scale: float = 1e-12, **meta) -> CheckReport:
    tol = comparison_tol(rhs, tol_scale)
    return CheckReport(
        inequality_id=inequality_id, lhs=lhs, rhs=rhs, slack=rhs - lhs,
        constants_used=constants, tolerance=tol, err_est=err_est,
        verdict=_verdict(lhs, rhs, err_est, tol), **meta)


def _require_valid(triple: ModularTriple):
    if not triple.valid:
        raise PreconditionError("modular triple is divergent or non-finite")


# ---------------------------------------------------------------------------
# The alternative bound and its linear weakenings
# ---------------------------------------------------------------------------

def _term2_rhs(L: float, G: float, D: float, n: int) -> float:
    root = math.sqrt(0.25 * D * D * G ** (2.0 / D) + (D + n - 2.0) * L ** (2.0 / D))
    return (0.5 * D * G ** (1.0 / D) + root) ** D


def check_alternative(triple: ModularTriple, d: float, D: float, n: int,
                      **meta) -> CheckReport:
    """Check the two-branch bound K <= (D/d)^(D/(D-2)) L  or  K <= term2(L, G).

    term2(L, G) = ((D/2) G^(1/D) + sqrt(D^2/4 G^(2/D) + (D+n-2) L^(2/D)))^D.
    When D + n >= e + 2 the term2 branch alone is asserted (it dominates the
    first branch in that regime); the report records which branch held.
    """
    _require_valid(triple)
    if d < 2.0 - 1e-12 or D <= 2.0:
        raise PreconditionError(f"requires d >= 2 and D > 2, got d={d}, D={D}")
    K, L, G = triple.K, triple.L, triple.G
    eK, eL, eG = triple.errs
    t1 = (D / d) ** (D / (D - 2.0)) * L
    t2 = _term2_rhs(L, G, D, n)
    # error propagation by one-sided perturbation of the inputs
    e_t1 = (D / d) ** (D / (D - 2.0)) * eL
    e_t2 = abs(_term2_rhs(L + eL, G + eG, D, n) - t2)
    unconditional = (D + n) >= math.e + 2.0

    v1 = _verdict(K, t1, eK + e_t1, comparison_tol(t1))
    v2 = _verdict(K, t2, eK + e_t2, comparison_tol(t2))
    # the report carries the branch being asserted: term2 when it held or is
    # unconditional in this regime, otherwise the disjunction's other branch
    if unconditional or v2 in ("holds", "indeterminate"):
        rhs, err, branch, verdict = t2, eK + e_t2, "term2", v2
    else:
        rhs, err, branch, verdict = t1, eK + e_t1, "term1", v1
    constants = {"d": d, "D": D, "term1_rhs": t1, "term2_rhs": t2,
                 "term1_coef": (D / d) ** (D / (D - 2.0))}
    rep = _report(branch, K, rhs, constants, err, n=n, **meta)
    rep.verdict = verdict
    rep.details = {"branch_held": branch if verdict != "fails" else "none",
                   "term1_verdict": v1, "term2_verdict": v2,
                   "term2_unconditional": unconditional}
    return rep


def linear_constants(D: float, d: float, n: int) -> tuple[float, float]:
    """Explicit linear constants C1 = 2^(D-1) (D+n-2)^(D/2), C2 = 2^(D-1) D^D.

    Valid in the regime D + n >= e + 2; outside it the beta/gamma trade-off
    must be used instead.
    """
    if D <= 2.0 or d < 2.0 - 1e-12:
        raise PreconditionError(f"requires D > 2 and d >= 2, got D={D}, d={d}")
    if D + n < math.e + 2.0:
        raise PreconditionError(
            f"explicit constants need D + n >= e + 2 ({D + n:.3f} < {math.e + 2.0:.3f}); "
            "use the beta/gamma trade-off instead")
    c1 = 2.0 ** (D - 1.0) * (D + n - 2.0) ** (D / 2.0)
    c2 = 2.0 ** (D - 1.0) * D ** D
    return c1, c2


def check_linear(triple: ModularTriple, c1: float, c2: float,
                 inequality_id: str = "liniowe", **meta) -> CheckReport:
    """Check K <= C1 L + C2 G with combined quadrature tolerance."""
    _require_valid(triple)
    K, L, G = triple.K, triple.L, triple.G
    eK, eL, eG = triple.errs
    rhs = c1 * L + c2 * G
    err = eK + c1 * eL + c2 * eG
    return _report(inequality_id, K, rhs, {"C1": c1, "C2": c2}, err, **meta)


def check_p2_exact(triple: ModularTriple, n: int, **meta) -> CheckReport:
    """The quadratic-case bound with its exact constants: K <= 2n L + 4 G."""
    rep = check_linear(triple, 2.0 * n, 4.0, inequality_id="p2_exact", n=n, **meta)
    return rep


# ---------------------------------------------------------------------------
# beta/gamma trade-off
# ---------------------------------------------------------------------------

def _golden_max(fn, lo: float, hi: float, iters: int = 200) -> float:
    """Golden-section maximum of a unimodal-enough fn on [lo, hi] (log scale)."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fn(math.exp(c)), fn(math.exp(d))
    for _ in range(iters):
        if b - a < 1e-13:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fn(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fn(math.exp(d))
    xs = [math.exp(0.5 * (a + b)), math.exp(a), math.exp(b)]
    return max(fn(x) for x in xs)


def beta_gamma(rho: float, D: float) -> tuple[float, float]:
    """Suprema over w > 0 of the two trade-off profiles

        beta:  (w/2 + sqrt(w^2/4 + 1))^D - rho w^D
        gamma: (1/2 + sqrt(1/4 + w^2))^D - rho w^D

    Both tend to 1 as w -> 0 and to -oo as w -> oo (rho > 1), so the supremum
    is located by a coarse log-grid scan refined by golden-section ascent.
    """
    if rho <= 1.0:
        raise PreconditionError(
            f"rho must exceed 1 (suprema blow up as rho -> 1+), got {rho}")
    if D <= 2.0:
        raise PreconditionError(f"requires D > 2, got {D}")

    def f_beta(w):
        return (0.5 * w + math.sqrt(0.25 * w * w + 1.0)) ** D - rho * w ** D

    def f_gamma(w):
        return (0.5 + math.sqrt(0.25 + w * w)) ** D - rho * w ** D

    out = []
    ws = np.logspace(-8.0, 4.0, 600)
    for fn in (f_beta, f_gamma):
        vals = np.array([fn(w) for w in ws])
        i = int(np.argmax(vals))
        lo = ws[max(i - 2, 0)]
        hi = ws[min(i + 2, ws.size - 1)]
        out.append(max(_golden_max(fn, lo, hi), 1.0))
    return out[0], out[1]


def tradeoff_check(triple: ModularTriple, rho: float, D: float, n: int,
                   **meta) -> tuple[CheckReport, CheckReport]:
    """Both linear trade-off forms derived from the term2 bound:

        K <= beta(rho) (D+n-2)^(D/2) L + rho D^D G
        K <= rho (D+n-2)^(D/2) L + gamma(rho) D^D G
    """
    b, g = beta_gamma(rho, D)
    base_l = (D + n - 2.0) ** (D / 2.0)
    base_g = D ** D
    rep_b = check_linear(triple, b * base_l, rho * base_g, n=n, **meta)
    rep_b.constants_used.update({"rho": rho, "beta": b, "form": "beta"})
    rep_g = check_linear(triple, rho * base_l, g * base_g, n=n, **meta)
    rep_g.constants_used.update({"rho": rho, "gamma": g, "form": "gamma"})
    return rep_b, rep_g


# ---------------------------------------------------------------------------
# Convex (doubling-only) case
# ---------------------------------------------------------------------------

def convex_constants(D: float, n: int) -> tuple[float, float, dict]:
    """Materialised constants for the doubling-only linear bound.

    Instantiating the split radius kappa = 2 sqrt(D+n) and the Young weight
    eps = 1/(4D) turns the integration-by-parts estimate into

        K <= kappa^D L + 2^D e^(2 kappa^2) kappa^(D+n-2) (L+G) + K/4 + K/4
             + D (4D)^D G,

    so after absorbing K/2:

        C1 = 2 (kappa^D + 2^D e^(2 kappa^2) kappa^(D+n-2))
        C2 = 2 (2^D e^(2 kappa^2) kappa^(D+n-2) + D (4D)^D).

    The constants are astronomically generous; their point is existence with
    doubling alone (no lower growth exponent required).
    """
    if D < 1.0:
        raise PreconditionError(f"doubling exponent must be >= 1, got {D}")
    eps = 1.0 / (4.0 * D)
    kappa = 2.0 * math.sqrt(D + n)
    bulk = 2.0 ** D * math.exp(2.0 * kappa * kappa) * kappa ** (D + n - 2.0)
    c1 = 2.0 * (kappa ** D + bulk)
    c2 = 2.0 * (bulk + D * (4.0 * D) ** D)
    return c1, c2, {"eps": eps, "kappa": kappa}


def check_convex_case(triple: ModularTriple, D: float, n: int,
                      convex_certified: bool = True, **meta) -> CheckReport:
    """Doubling-only linear bound with the materialised constants."""
    if not convex_certified:
        raise PreconditionError("convexity certification required")
    c1, c2, proof = convex_constants(D, n)
    rep = check_linear(triple, c1, c2, inequality_id="ww", n=n, **meta)
    rep.constants_used.update(proof)
    rep.constants_used["D"] = D
    return rep


def check_norm_form_radial(u: RadialTestFunction, nf: NFunction, n: int,
                           spec: QuadratureSpec | None = None,
                           **meta) -> CheckReport:
    """Norm form ||r u|| <= C (||u|| + ||u'||) with C = C1 + C2 + 1.

    C1, C2 are the doubling-case constants; the norm argument applies the
    modular bound to u scaled by ||u|| + ||u'|| and uses that the modular
    equals 1 at the Luxemburg norm under doubling.
    """
    spec = spec or QuadratureSpec()
    if nf.delta2_const is None:
        raise PreconditionError(f"'{nf.label}' must be doubling-certified")
    _, D = nf.require_exponents()
    c1, c2, proof = convex_constants(D, n)
    c = c1 + c2 + 1.0
    meas = RadialMeasure(n)
    norm_u = luxemburg_norm(u, nf, meas, spec)
    norm_du = luxemburg_norm(
        ScalarProfile(u.du, u.du_hint(), u.breakpoints), nf, meas, spec)
    denom = norm_u + norm_du
    constants = {"C": c, "C1": c1, "C2": c2, **proof,
                 "norm_u": norm_u, "norm_du": norm_du}
    if denom == 0.0:
        rep = _report("www", 0.0, 0.0, constants, 0.0, n=n, **meta)
        rep.verdict = "trivial"
        return rep
    weighted = ScalarProfile(
        lambda r: np.asarray(r, dtype=float) * np.abs(u.u(r)),
        (u.hint if u.hint.kind == "compact"
         else SupportHint.decaying(u.hint.degree + 1.0, u.hint.rate)),
        u.breakpoints)
    norm_ru = luxemburg_norm(weighted, nf, meas, spec)
    constants["norm_ru"] = norm_ru
    ratio = norm_ru / denom
    rep = _report("www", ratio, c, constants, err_est=3e-9 * max(1.0, ratio),
                  n=n, **meta)
    rep.details["ratio"] = ratio
    return rep


# ---------------------------------------------------------------------------
# n-dimensional forms
# ---------------------------------------------------------------------------

def check_nd(u: FieldFunction, nf: NFunction, n: int, form: str,
             spec: QuadratureSpec | None = None, normalized: bool = False,
             use_radial_reduction: bool = False, **meta) -> CheckReport:
    """Gaussian-measure inequality on R^n.

    form="wwww": the term2-type bound, requires d >= 2 and D > max(2, e+2-n).
    form="hn1":  linear bound with the doubling-case constants.
    form="hn11": norm form ||.|x| u|| <= C (||u|| + ||grad u||), C = C1+C2+1.

    The constants transfer unchanged from the radial case: the spherical
    slicing applies the radial bound direction by direction.
    """
    spec = spec or QuadratureSpec()
    if n != u.n:
        raise PreconditionError(f"field '{u.label}' has dimension {u.n}, not {n}")
    d, D = nf.require_exponents()
    norm_tag = "normalized" if normalized else "unnormalized"
    meta = {**meta, "n": n, "normalization": norm_tag}

    if form == "wwww":
        if d < 2.0 - 1e-12:
            raise PreconditionError(
                f"form wwww needs lower exponent >= 2, got d={d} for '{nf.label}'")
        if D <= max(2.0, math.e + 2.0 - n):
            raise PreconditionError(
                f"form wwww needs D > max(2, e+2-n) = {max(2.0, math.e + 2.0 - n):.3f}, "
                f"got D={D} for '{nf.label}'")
        triple = modular_triple_nd(u, nf, spec, normalized=normalized,
                                   use_radial_reduction=use_radial_reduction)
        _require_valid(triple)
        rhs = _term2_rhs(triple.L, triple.G, D, n)
        e_rhs = abs(_term2_rhs(triple.L + triple.errs[1],
                               triple.G + triple.errs[2], D, n) - rhs)
        rep = _report("wwww", triple.K, rhs, {"d": d, "D": D},
                      triple.errs[0] + e_rhs, **meta)
        return rep

    if form == "hn1":
        if nf.delta2_const is None or not nf.convex:
            raise PreconditionError(
                f"form hn1 needs a convex doubling N-function, got '{nf.label}'")
        triple = modular_triple_nd(u, nf, spec, normalized=normalized,
                                   use_radial_reduction=use_radial_reduction)
        _require_valid(triple)
        c1, c2, proof = convex_constants(D, n)
        rep = check_linear(triple, c1, c2, inequality_id="hn1", **meta)
        rep.constants_used.update(proof)
        return rep

    if form == "hn11":
        if nf.delta2_const is None or not nf.convex:
            raise PreconditionError(
                f"form hn11 needs a convex doubling N-function, got '{nf.label}'")
        c1, c2, proof = convex_constants(D, n)
        c = c1 + c2 + 1.0
        meas = GaussianMeasure(n, normalized)
        norm_u = luxemburg_norm(u, nf, meas, spec)
        norm_grad = luxemburg_norm(
            ScalarProfile(lambda pts: np.linalg.norm(np.asarray(u.grad(pts), float),
                                                     axis=-1),
                          u.grad_hint()), nf, meas, spec)
        denom = norm_u + norm_grad
        constants = {"C": c, "C1": c1, "C2": c2, **proof}
        if denom == 0.0:
            rep = _report("hn11", 0.0, 0.0, constants, 0.0, **meta)
            rep.verdict = "trivial"
            return rep
        weighted = ScalarProfile(
            lambda pts: np.linalg.norm(pts, axis=-1) * np.abs(u.u(pts)),
            (u.hint if u.hint.kind == "compact"
             else SupportHint.decaying(u.hint.degree + 1.0, u.hint.rate)))
        norm_xu = luxemburg_norm(weighted, nf, meas, spec)
        ratio = norm_xu / denom
        rep = _report("hn11", ratio, c, constants,
                      err_est=3e-9 * max(1.0, ratio), **meta)
        rep.details["ratio"] = ratio
        return rep

    raise PreconditionError(f"unknown n-dimensional form {form!r}")
