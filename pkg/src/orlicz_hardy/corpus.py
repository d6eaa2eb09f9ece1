"""Declarative corpus of N-functions and test functions.

Manifests are JSON with a required schema version.  Every member is built
from a (kind, params) declaration, re-validated at load (growth and doubling
certification for N-functions, derivative and continuity checks for test
functions), and addressed by label plus a content fingerprint.  Field
functions are dimension-generic factories instantiated per n.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ManifestError, PreconditionError
from .functionals import (
    FieldFunction,
    RadialTestFunction,
    truncate,
    validate_field,
    validate_radial,
)
from .nfunc import (
    GridSpec,
    NFunction,
    certify,
    power_log_nfunction,
    power_nfunction,
    table_nfunction,
)
from .quadrature import SupportHint
from .sharpness import ExtremalParams, extremal_function

__all__ = [
    "CorpusManifest",
    "FieldFactory",
    "load_manifest",
    "default_manifest_path",
    "build_nfunction",
    "build_radial_function",
    "build_field_function",
    "fingerprint",
]

SCHEMA_VERSION = 1

# certification results keyed by (member fingerprint, grid fingerprint)
_CERT_CACHE: dict[tuple[str, str], NFunction] = {}


def fingerprint(obj) -> str:
    """Content hash of a JSON-serialisable object (canonical key order)."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def build_nfunction(entry: dict) -> NFunction:
    kind = entry.get("kind")
    params = entry.get("params", {})
    label = entry.get("label", kind)
    if kind == "power":
        nf = power_nfunction(float(params["p"]))
    elif kind == "power_log":
        nf = power_log_nfunction(float(params.get("p", 2.0)))
    elif kind == "table":
        nf = table_nfunction(params["r"], params["m"], label=label)
    else:
        raise ManifestError(f"unknown N-function kind {kind!r} for '{label}'")
    nf.label = label
    return nf


def _bump_function(center: float, width: float, degree: int,
                   label: str) -> RadialTestFunction:
    """u(r) = (1 - ((r-c)/w)^2)_+^degree, compactly supported on [c-w, c+w]."""
    if degree < 2:
        raise ManifestError(f"bump '{label}' needs degree >= 2 for C1")
    if center < width:
        raise ManifestError(f"bump '{label}' must satisfy center >= width")
    c, w, k = float(center), float(width), int(degree)

    def u(r):
        r = np.asarray(r, dtype=float)
        t = (r - c) / w
        core = np.clip(1.0 - t * t, 0.0, None)
        return core ** k

    def du(r):
        r = np.asarray(r, dtype=float)
        t = (r - c) / w
        core = np.clip(1.0 - t * t, 0.0, None)
        return -2.0 * k * t / w * core ** (k - 1)

    return RadialTestFunction(
        u=u, du=du, breakpoints=(c - w, c + w),
        hint=SupportHint.compact(c + w), label=label)


def _poly_gauss_function(coefficients, rate: float,
                         label: str) -> RadialTestFunction:
    """u(r) = P(r) exp(-rate r^2 / 2) with P given by ascending coefficients."""
    coefs = np.asarray(coefficients, dtype=float)
    a = float(rate)
    dcoefs = coefs[1:] * np.arange(1, coefs.size)

    def u(r):
        r = np.asarray(r, dtype=float)
        return np.polynomial.polynomial.polyval(r, coefs) * np.exp(-0.5 * a * r * r)

    def du(r):
        r = np.asarray(r, dtype=float)
        p = np.polynomial.polynomial.polyval(r, coefs)
        dp = np.polynomial.polynomial.polyval(r, dcoefs) if dcoefs.size else 0.0
        return (dp - a * r * p) * np.exp(-0.5 * a * r * r)

    return RadialTestFunction(
        u=u, du=du, breakpoints=(),
        hint=SupportHint.decaying(float(coefs.size - 1), a), label=label)


def build_radial_function(entry: dict) -> RadialTestFunction:
    kind = entry.get("kind")
    params = entry.get("params", {})
    label = entry.get("label", kind)
    if kind == "gaussian_power":
        fn = extremal_function(
            ExtremalParams(float(params["alpha"]), float(params["p"]),
                           int(params.get("n", 1))))
        fn.label = label
        return fn
    if kind == "bump":
        return _bump_function(params["center"], params["width"],
                              params.get("degree", 2), label)
    if kind == "poly_gauss":
        return _poly_gauss_function(params["coefficients"], params["rate"], label)
    if kind == "truncated":
        inner = build_radial_function({**params["inner"],
                                       "label": label + "|inner"})
        out = truncate(inner, float(params["N"]))
        out.label = label
        return out
    raise ManifestError(f"unknown radial kind {kind!r} for '{label}'")


# -- field kinds -------------------------------------------------------------

def _monomial(X: np.ndarray, exps: np.ndarray) -> np.ndarray:
    out = np.ones(X.shape[:-1])
    for i, e in enumerate(exps):
        if e:
            out = out * X[..., i] ** e
    return out


def _monomial_partial(X: np.ndarray, exps: np.ndarray, i: int) -> np.ndarray:
    if exps[i] == 0:
        return np.zeros(X.shape[:-1])
    lowered = exps.copy()
    lowered[i] -= 1
    return exps[i] * _monomial(X, lowered)


def _monomial_gauss_field(exponents, rate: float, n: int,
                          label: str) -> FieldFunction:
    exps = np.zeros(n, dtype=int)
    given = np.asarray(exponents, dtype=int)
    if given.size > n:
        raise ManifestError(
            f"field '{label}' needs dimension >= {given.size}, got n={n}")
    exps[:given.size] = given
    a = float(rate)
    deg = int(exps.sum())

    def u(X):
        X = np.asarray(X, dtype=float)
        s = (X * X).sum(axis=-1)
        return _monomial(X, exps) * np.exp(-0.5 * a * s)

    def grad(X):
        X = np.asarray(X, dtype=float)
        s = (X * X).sum(axis=-1)
        env = np.exp(-0.5 * a * s)
        m = _monomial(X, exps)
        out = np.empty(X.shape)
        for i in range(n):
            out[..., i] = (_monomial_partial(X, exps, i) - a * m * X[..., i]) * env
        return out

    def hess(X):
        X = np.asarray(X, dtype=float)
        s = (X * X).sum(axis=-1)
        env = np.exp(-0.5 * a * s)
        m = _monomial(X, exps)
        out = np.empty(X.shape + (n,))
        for i in range(n):
            di = _monomial_partial(X, exps, i)
            for j in range(i, n):
                dj = _monomial_partial(X, exps, j)
                if exps[j] == 0 or (i == j and exps[i] <= 1):
                    dij = np.zeros(X.shape[:-1])
                else:
                    lowered = exps.copy()
                    lowered[j] -= 1
                    dij = exps[j] * _monomial_partial(X, lowered, i)
                val = (dij - a * (X[..., i] * dj + X[..., j] * di)
                       - a * m * (1.0 if i == j else 0.0)
                       + a * a * m * X[..., i] * X[..., j]) * env
                out[..., i, j] = val
                out[..., j, i] = val
        return out

    hint = (SupportHint.decaying(float(deg), a) if a > 0.0
            else SupportHint.decaying(float(deg), 0.0))
    return FieldFunction(u=u, grad=grad, hess=hess, n=n, hint=hint, label=label)


def _gauss_poly_radial_field(even_coefficients, rate: float, n: int,
                             label: str) -> FieldFunction:
    """Radial field u(x) = P(|x|^2) exp(-rate |x|^2 / 2), P by ascending coefs."""
    coefs = np.asarray(even_coefficients, dtype=float)
    a = float(rate)
    dcoefs = coefs[1:] * np.arange(1, coefs.size)
    polyval = np.polynomial.polynomial.polyval

    def parts(X):
        X = np.asarray(X, dtype=float)
        s = (X * X).sum(axis=-1)
        env = np.exp(-0.5 * a * s)
        p = polyval(s, coefs)
        dp = polyval(s, dcoefs) if dcoefs.size else np.zeros_like(s)
        return s, env, p, dp

    def u(X):
        _, env, p, _ = parts(X)
        return p * env

    def grad(X):
        X = np.asarray(X, dtype=float)
        _, env, p, dp = parts(X)
        q = 2.0 * dp - a * p
        return (q * env)[..., None] * X

    def hess(X):
        X = np.asarray(X, dtype=float)
        s, env, p, dp = parts(X)
        ddp = (polyval(s, dcoefs[1:] * np.arange(1, dcoefs.size))
               if dcoefs.size > 1 else np.zeros_like(s))
        q = 2.0 * dp - a * p
        dq = 2.0 * ddp - a * dp
        r_term = 2.0 * dq - a * q
        eye = np.eye(n)
        return env[..., None, None] * (
            r_term[..., None, None] * X[..., :, None] * X[..., None, :]
            + q[..., None, None] * eye)

    def profile_u(r):
        r = np.asarray(r, dtype=float)
        s = r * r
        return polyval(s, coefs) * np.exp(-0.5 * a * s)

    def profile_du(r):
        r = np.asarray(r, dtype=float)
        s = r * r
        p = polyval(s, coefs)
        dp = polyval(s, dcoefs) if dcoefs.size else np.zeros_like(s)
        return (2.0 * dp - a * p) * r * np.exp(-0.5 * a * s)

    profile = RadialTestFunction(
        u=profile_u, du=profile_du, breakpoints=(),
        hint=SupportHint.decaying(2.0 * (coefs.size - 1.0), a),
        label=label + "|profile")
    return FieldFunction(
        u=u, grad=grad, hess=hess, n=n,
        hint=SupportHint.decaying(2.0 * (coefs.size - 1.0), a),
        label=label, radial_profile=profile)


def _cutoff_field(inner: FieldFunction, r1: float, r2: float,
                  label: str) -> FieldFunction:
    """Multiply a field by a C2 radial cutoff: 1 on [0, r1], 0 beyond r2."""
    if not (0.0 < r1 < r2):
        raise ManifestError(f"cutoff '{label}' needs 0 < r1 < r2")
    width = r2 - r1

    def window(r):
        t = np.clip((r - r1) / width, 0.0, 1.0)
        chi = 1.0 - (10.0 * t ** 3 - 15.0 * t ** 4 + 6.0 * t ** 5)
        dchi = -30.0 * t * t * (1.0 - t) ** 2 / width
        ddchi = -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / width ** 2
        return chi, dchi, ddchi

    def u(X):
        X = np.asarray(X, dtype=float)
        r = np.linalg.norm(X, axis=-1)
        chi, _, _ = window(r)
        return inner.u(X) * chi

    def grad(X):
        X = np.asarray(X, dtype=float)
        r = np.linalg.norm(X, axis=-1)
        chi, dchi, _ = window(r)
        gv = np.asarray(inner.grad(X), dtype=float)
        safe_r = np.where(r > 0.0, r, 1.0)
        xhat = X / safe_r[..., None]
        return chi[..., None] * gv + (inner.u(X) * dchi)[..., None] * xhat

    def hess(X):
        X = np.asarray(X, dtype=float)
        r = np.linalg.norm(X, axis=-1)
        chi, dchi, ddchi = window(r)
        v = np.asarray(inner.u(X), dtype=float)
        gv = np.asarray(inner.grad(X), dtype=float)
        hv = np.asarray(inner.hess(X), dtype=float)
        safe_r = np.where(r > 0.0, r, 1.0)
        xhat = X / safe_r[..., None]
        outer = xhat[..., :, None] * xhat[..., None, :]
        eye = np.eye(inner.n)
        sym = xhat[..., :, None] * gv[..., None, :] + gv[..., :, None] * xhat[..., None, :]
        out = (chi[..., None, None] * hv
               + dchi[..., None, None] * sym
               + (v * ddchi)[..., None, None] * outer
               + (v * dchi / safe_r)[..., None, None] * (eye - outer))
        return out

    return FieldFunction(u=u, grad=grad, hess=hess, n=inner.n,
                         hint=SupportHint.compact(r2), label=label)


def build_field_function(entry: dict, n: int) -> FieldFunction:
    kind = entry.get("kind")
    params = entry.get("params", {})
    label = entry.get("label", kind)
    if kind == "monomial_gauss":
        return _monomial_gauss_field(params["exponents"], params["rate"], n, label)
    if kind == "gauss_poly_radial":
        return _gauss_poly_radial_field(params["even_coefficients"],
                                        params["rate"], n, label)
    if kind == "cutoff":
        inner = build_field_function({**params["inner"],
                                      "label": label + "|inner"}, n)
        return _cutoff_field(inner, float(params["r1"]), float(params["r2"]), label)
    raise ManifestError(f"unknown field kind {kind!r} for '{label}'")


@dataclass
class FieldFactory:
    """Dimension-generic field declaration, instantiated and cached per n."""

    entry: dict
    label: str
    member_fingerprint: str
    min_n: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    def compatible(self, n: int) -> bool:
        return n >= self.min_n

    def instantiate(self, n: int) -> FieldFunction:
        if not self.compatible(n):
            raise PreconditionError(
                f"field '{self.label}' needs dimension >= {self.min_n}, got {n}")
        if n not in self._cache:
            self._cache[n] = build_field_function(self.entry, n)
        return self._cache[n]


def _field_min_n(entry: dict) -> int:
    kind = entry.get("kind")
    params = entry.get("params", {})
    if kind == "monomial_gauss":
        return max(1, len(params.get("exponents", [])))
    if kind == "cutoff":
        return _field_min_n(params["inner"])
    return 1


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------

@dataclass
class CorpusManifest:
    nfunctions: dict
    radial_functions: dict
    field_functions: dict
    fingerprint: str
    member_fingerprints: dict
    grid: GridSpec

    def nfunc(self, label: str) -> NFunction:
        try:
            return self.nfunctions[label]
        except KeyError:
            raise KeyError(f"no N-function '{label}' in manifest "
                           f"(have {sorted(self.nfunctions)})") from None


def default_manifest_path() -> Path:
    return Path(str(resources.files("orlicz_hardy").joinpath(
        "data/default_manifest.json")))


def load_manifest(path=None, grid: GridSpec | None = None) -> CorpusManifest:
    """Load, build, and validate a corpus manifest.

    Declared exponents are re-certified on the grid; test functions pass
    derivative and continuity validation.  Any violation rejects the member
    with a named reason.
    """
    path = Path(path) if path is not None else default_manifest_path()
    grid = grid or GridSpec()
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: parse error at line {exc.lineno}: {exc.msg}")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ManifestError(
            f"{path}: manifest schema must be {SCHEMA_VERSION}, got {raw.get('schema')!r}")

    member_fps = {}
    problems = []

    nfunctions = {}
    for entry in raw.get("nfunctions", []):
        label = entry.get("label", "?")
        fp = fingerprint(entry)
        member_fps[label] = fp
        try:
            nf = build_nfunction(entry)
            cache_key = (fp, grid.fingerprint())
            if cache_key in _CERT_CACHE:
                nf = _CERT_CACHE[cache_key]
            else:
                local_grid = grid
                if entry.get("kind") == "table":
                    rs = entry["params"]["r"]
                    local_grid = GridSpec(max(min(rs), grid.r_min),
                                          min(max(rs), grid.r_max),
                                          grid.points, grid.scale)
                nf = certify(nf, local_grid)
                _check_nfunction_shape(nf, problems)
                _CERT_CACHE[cache_key] = nf
            nfunctions[label] = nf
        except Exception as exc:
            problems.append(f"nfunction '{label}': {exc}")

    radial = {}
    for entry in raw.get("radial_functions", []):
        label = entry.get("label", "?")
        member_fps[label] = fingerprint(entry)
        try:
            fn = build_radial_function(entry)
            radial_problems = validate_radial(fn)
            if radial_problems:
                problems.extend(radial_problems)
            else:
                radial[label] = fn
        except Exception as exc:
            problems.append(f"radial '{label}': {exc}")

    fields = {}
    for entry in raw.get("field_functions", []):
        label = entry.get("label", "?")
        fp = fingerprint(entry)
        member_fps[label] = fp
        try:
            factory = FieldFactory(entry=entry, label=label,
                                   member_fingerprint=fp,
                                   min_n=_field_min_n(entry))
            probe_n = max(2, factory.min_n)
            field_problems = validate_field(factory.instantiate(probe_n))
            if field_problems:
                problems.extend(field_problems)
            else:
                fields[label] = factory
        except Exception as exc:
            problems.append(f"field '{label}': {exc}")

    if problems:
        raise ManifestError(f"{path}: " + "; ".join(problems))
    return CorpusManifest(
        nfunctions=nfunctions, radial_functions=radial, field_functions=fields,
        fingerprint=fingerprint(raw), member_fingerprints=member_fps, grid=grid)


def _check_nfunction_shape(nf: NFunction, problems: list):
    """N-function shape checks: M(0) = 0, M(r)/r -> 0 at 0, midpoint convexity."""
    if abs(float(nf.eval(0.0))) > 1e-12:
        problems.append(f"'{nf.label}': M(0) = {float(nf.eval(0.0)):.3g} != 0")
    small = float(nf.eval(1e-8)) / 1e-8
    if small > 1e-3:
        problems.append(f"'{nf.label}': M(r)/r does not vanish at 0 ({small:.3g})")
    r = np.logspace(-3, 2, 120)
    x, y = r[:-1], r[1:]
    mid = np.asarray(nf.eval(0.5 * (x + y)), dtype=float)
    avg = 0.5 * (np.asarray(nf.eval(x), dtype=float)
                 + np.asarray(nf.eval(y), dtype=float))
    bad = mid > avg + 1e-9 * np.maximum(avg, 1.0)
    if np.any(bad):
        problems.append(f"'{nf.label}': midpoint convexity fails near "
                        f"r={x[bad][0]:.4g}")
