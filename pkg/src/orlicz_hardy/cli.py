"""Command-line entry point.

Subcommands: certify, hardy, sharpness, mazya, lk, all.  Every run writes a
JSON report whose body is canonical (byte-identical across repeated runs
with the same flags, manifest, and seed; the ORLICZ_SEED environment
variable overrides the angular-sampling seed).  Exit status is nonzero iff
any non-trivial check fails.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import hardy as hardy_mod
from . import landau_kolmogorov as lk_mod
from . import mazya as mazya_mod
from . import sharpness as sharp_mod
from .errors import ManifestError, OrliczHardyError, PreconditionError
from .functionals import modular_triple_radial
from .quadrature import QuadratureSpec
from .reporting import (
    TOOL_VERSION,
    report_to_dict,
    summarize_verdicts,
    write_report,
)

DEFAULT_ALPHAS = (0.0, 0.5, 0.9, 0.99, 0.999)
DEFAULT_THETAS = (0.25, 0.5, 1.0)


def _parse_dims(text: str) -> list[int]:
    """'2' | '1,2,3' | '1..3' -> list of dimensions."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t]


def _spec_from_args(args) -> QuadratureSpec:
    seed = int(os.environ.get("ORLICZ_SEED", args.seed))
    return QuadratureSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                          sphere_nodes=args.sphere_nodes, seed=seed)


def _check_id(form: str, nf_label: str, subject: str, n) -> str:
    return f"{form}:{nf_label}:{subject}:n={n}"


def _collect(checks: list, rep, form: str, nf_label: str, subject: str, n):
    d = report_to_dict(rep)
    d["check_id"] = _check_id(form, nf_label, subject, n)
    checks.append(d)


# ---------------------------------------------------------------------------
# Batteries
# ---------------------------------------------------------------------------

def run_certify(manifest, spec, checks: list):
    for label, nf in manifest.nfunctions.items():
        d = {
            "check_id": f"certify:{label}",
            "id": "certify",
            "verdict": "holds",
            "nfunc_label": label,
            "constants_used": {
                "d_exp": nf.d_exp, "D_exp": nf.D_exp,
                "delta2_const": nf.delta2_const,
            },
            "details": {"grid_fingerprint": nf.grid_fingerprint},
        }
        checks.append(d)


def _radial_triples(manifest, nf, n, spec):
    for label, u in sorted(manifest.radial_functions.items()):
        yield label, u, modular_triple_radial(u, nf, n, spec)


def run_hardy(manifest, spec, dims, checks: list, nfunc_label=None, form=None,
              normalized=False,
              norm_form_subset=("ga_mild", "bump_mid", "pg_decay")):
    """Radial and n-dimensional Hardy batteries over the corpus."""
    nfuncs = ({nfunc_label: manifest.nfunc(nfunc_label)} if nfunc_label
              else manifest.nfunctions)
    for nf_label, nf in sorted(nfuncs.items()):
        d, D = nf.require_exponents()
        for n in dims:
            # admissible corpus: members whose modulars are finite for this M
            triples = dict()
            for u_label, u, triple in _radial_triples(manifest, nf, n, spec):
                if triple.valid:
                    triples[u_label] = (u, triple)

            if form in (None, "term1", "term2") and d >= 2.0 and D > 2.0:
                for u_label, (u, triple) in triples.items():
                    rep = hardy_mod.check_alternative(
                        triple, d, D, n, nfunc_label=nf_label, subject_label=u_label)
                    _collect(checks, rep, "alternative", nf_label, u_label, n)

            if form in (None, "liniowe") and d >= 2.0 and D > 2.0 \
                    and D + n >= math.e + 2.0:
                c1, c2 = hardy_mod.linear_constants(D, d, n)
                for u_label, (u, triple) in triples.items():
                    rep = hardy_mod.check_linear(
                        triple, c1, c2, n=n, nfunc_label=nf_label,
                        subject_label=u_label)
                    _collect(checks, rep, "liniowe", nf_label, u_label, n)

            if form in (None, "ww"):
                for u_label, (u, triple) in triples.items():
                    rep = hardy_mod.check_convex_case(
                        triple, D, n, convex_certified=nf.convex,
                        nfunc_label=nf_label, subject_label=u_label)
                    _collect(checks, rep, "ww", nf_label, u_label, n)

            if form in (None, "p2_exact") and abs(D - 2.0) < 1e-12 \
                    and abs(d - 2.0) < 1e-12:
                for u_label, (u, triple) in triples.items():
                    rep = hardy_mod.check_p2_exact(
                        triple, n, nfunc_label=nf_label, subject_label=u_label)
                    _collect(checks, rep, "p2_exact", nf_label, u_label, n)

            if form in (None, "www"):
                subset = (triples.keys() if form == "www" else
                          [s for s in norm_form_subset if s in triples])
                for u_label in subset:
                    u, _ = triples[u_label]
                    rep = hardy_mod.check_norm_form_radial(
                        u, nf, n, spec, nfunc_label=nf_label, subject_label=u_label)
                    _collect(checks, rep, "www", nf_label, u_label, n)

            # n-dimensional forms over the field corpus
            nd_forms = []
            if form in (None, "hn1"):
                nd_forms.append("hn1")
            if form in (None, "wwww") and d >= 2.0 \
                    and D > max(2.0, math.e + 2.0 - n):
                nd_forms.append("wwww")
            if form == "hn11":
                nd_forms.append("hn11")
            for nd_form in nd_forms:
                for f_label, factory in sorted(manifest.field_functions.items()):
                    if not factory.compatible(n):
                        continue
                    field = factory.instantiate(n)
                    rep = hardy_mod.check_nd(
                        field, nf, n, nd_form, spec, normalized=normalized,
                        nfunc_label=nf_label, subject_label=f_label)
                    _collect(checks, rep, nd_form, nf_label, f_label, n)


def run_sharpness(p: float, n: int, alphas, spec, checks: list, series: dict):
    rows = []
    for alpha in alphas:
        params = sharp_mod.ExtremalParams(alpha, p, n)
        cf = sharp_mod.extremal_moments(params)
        c1_req = float(sharp_mod.c2_infeasibility_scan(p, n, [alpha])[0]) \
            if p > 2.0 else float("nan")
        rows.append({"alpha": alpha, "K": cf.K, "L": cf.L, "G": cf.G,
                     "C1_req": c1_req})
        if alpha <= 0.9:
            u = sharp_mod.extremal_function(params)
            nf = corpus_mod.build_nfunction(
                {"label": f"r^{p:g}", "kind": "power", "params": {"p": p}})
            tri = modular_triple_radial(u, nf, n, spec)
            worst = max(
                abs(tri.K - cf.K) / cf.K,
                abs(tri.L - cf.L) / cf.L,
                (abs(tri.G - cf.G) / cf.G) if cf.G > 0 else abs(tri.G))
            checks.append({
                "check_id": _check_id("alfa_closed_form", f"r^{p:g}",
                                      f"alpha={alpha:g}", n),
                "id": "alfa_closed_form",
                "verdict": "holds" if worst <= 1e-7 else "fails",
                "lhs": worst, "rhs": 1e-7,
                "constants_used": {"K": cf.K, "L": cf.L, "G": cf.G},
                "nfunc_label": f"r^{p:g}", "subject_label": f"alpha={alpha:g}",
                "n": n,
            })
    series[f"sharpness_p{p:g}_n{n}"] = rows
    scan_alphas = [a for a in alphas if a > 0.0]
    if p > 2.0 and len(scan_alphas) >= 2:
        req = sharp_mod.c2_infeasibility_scan(p, n, scan_alphas)
        increasing = bool(np.all(np.diff(req) > 0.0))
        checks.append({
            "check_id": _check_id("c1_required_divergence", f"r^{p:g}", "scan", n),
            "id": "c1_required_divergence",
            "verdict": "holds" if increasing else "fails",
            "constants_used": {"alphas": list(scan_alphas),
                               "C1_required": [float(v) for v in req],
                               "c1_lower_bound": sharp_mod.c1_lower_bound(p, n)},
            "n": n,
        })


def load_pair_config(path) -> "mazya_mod.MeasurePair":
    import json

    cfg = json.loads(Path(path).read_text())
    kind = cfg.get("kind")
    params = cfg.get("params", {})
    if kind == "classical":
        return mazya_mod.classical_pair()
    if kind == "gaussian":
        return mazya_mod.gaussian_pair(float(params["p"]), int(params["n"]))
    if kind == "table":
        return mazya_mod.table_pair(
            params["x"], params["mu_density"], params["nu_density"],
            float(params["p"]), float(params["q"]),
            label=cfg.get("label", "table"))
    raise PreconditionError(f"unknown measure-pair kind {kind!r}")


def run_mazya(spec, checks: list, series: dict, gaussian=None, classical=False,
              pair=None):
    if pair is not None:
        res = mazya_mod.mazya_B(pair, spec)
        checks.append({
            "check_id": f"mazya:pair:{pair.label}",
            "id": "mazjacond",
            "verdict": "holds" if not res.divergent else "indeterminate",
            "constants_used": {"B": res.B, "argmax_r": res.argmax_r,
                               "divergent": res.divergent, "reason": res.reason},
            "subject_label": pair.label,
        })
        series[f"mazya_{pair.label}"] = [
            {"r": r, "objective": v}
            for r, v in mazya_mod.objective_series(pair)]
    if classical:
        pair = mazya_mod.classical_pair()
        res = mazya_mod.mazya_B(pair, spec)
        ok = (not res.divergent) and abs(res.B - 1.0) <= 1e-6
        checks.append({
            "check_id": "mazya:classical",
            "id": "mazjacond", "verdict": "holds" if ok else "fails",
            "lhs": res.B, "rhs": 1.0,
            "constants_used": {"B": res.B, "argmax_r": res.argmax_r},
            "subject_label": "classical",
        })
        series["mazya_classical"] = [
            {"r": r, "objective": v} for r, v in mazya_mod.objective_series(pair)]
    for p, n in (gaussian or []):
        verdict, res = mazya_mod.gaussian_hardy_pq(p, n, spec)
        expected = "finite" if p > n else "divergent"
        checks.append({
            "check_id": f"mazya:gaussian:p={p:g}:n={n}",
            "id": "mazjacond",
            "verdict": "holds" if verdict == expected else "fails",
            "constants_used": {
                "p": p, "n": n, "B": res.B, "argmax_r": res.argmax_r,
                "verdict_numeric": verdict, "verdict_expected": expected,
                "reason": res.reason,
            },
            "subject_label": f"gaussian[p={p:g},n={n}]",
        })


def run_lk(manifest, spec, dims, checks: list, series: dict, fits: dict,
           nfunc_labels=("p2", "p3"), theta_grid=DEFAULT_THETAS,
           fit_grid=lk_mod.DEFAULT_FIT_GRID):
    for nf_label in nfunc_labels:
        nf = manifest.nfunc(nf_label)
        for n in dims:
            fields = [factory.instantiate(n)
                      for label, factory in sorted(manifest.field_functions.items())
                      if factory.compatible(n)]
            fit_norm, rows = lk_mod.fit_lk_norm_envelope(fields, nf, spec, fit_grid)
            fits[f"statB2gauss:{nf_label}:n={n}"] = {
                "C1": fit_norm.c1, "C2": fit_norm.c2,
                "binding": fit_norm.binding_label,
                "corpus": list(fit_norm.corpus_labels),
                "grid": list(fit_norm.grid), "feasible": fit_norm.feasible,
            }
            checks.append({
                "check_id": _check_id("statB2gauss_envelope", nf_label, "corpus", n),
                "id": "statB2gauss",
                "verdict": "holds" if fit_norm.feasible else "fails",
                "constants_used": {"C1": fit_norm.c1, "C2": fit_norm.c2,
                                   "binding": fit_norm.binding_label},
                "nfunc_label": nf_label, "n": n,
            })
            for u in fields:
                rep = lk_mod.check_lk_norm(u, nf, fit_norm.c1, fit_norm.c2, spec)
                _collect(checks, rep, "statB2gauss", nf_label, u.label, n)

            fit_mod, term_rows = lk_mod.fit_lk_modular_envelope(
                fields, nf, spec, fit_grid, theta_grid)
            fits[f"statB1gauss:{nf_label}:n={n}"] = {
                "C1": fit_mod.c1, "C2": fit_mod.c2,
                "binding": fit_mod.binding_label,
                "corpus": list(fit_mod.corpus_labels),
                "grid": list(fit_mod.grid), "feasible": fit_mod.feasible,
                "theta_grid": list(theta_grid),
            }
            series[f"lk_theta_sweep:{nf_label}:n={n}"] = [
                {"subject": label, "theta": th, "lhs": lhs,
                 "hess_modular": a, "func_modular": b}
                for label, th, lhs, a, b in term_rows]
            for u in fields:
                for theta in theta_grid:
                    rep = lk_mod.check_lk_modular(
                        u, nf, fit_mod.c1, fit_mod.c2, theta, spec)
                    _collect(checks, rep, f"statB1:theta={theta:g}",
                             nf_label, u.label, n)
                rep = lk_mod.additive_lk_from_hardy(
                    u, nf, n, fit_mod.c1, fit_mod.c2, spec)
                _collect(checks, rep, "statB1gauss_from_hardy",
                         nf_label, u.label, n)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def _write_series_csv(out_dir: Path, series: dict):
    for name, rows in series.items():
        if not rows:
            continue
        path = out_dir / (name.replace(":", "_") + ".csv")
        keys = list(rows[0].keys())
        with path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=keys)
            writer.writeheader()
            for row in rows:
                writer.writerow(row)


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orlicz-hardy",
        description="Numerical verification of Gaussian-measure Orlicz "
                    "Hardy and Landau-Kolmogorov inequalities.")
    parser.add_argument("--corpus", default=None, help="manifest JSON path")
    parser.add_argument("--out", default="reports", help="output directory")
    parser.add_argument("--report", default=None, help="report JSON path")
    parser.add_argument("--seed", type=int, default=QuadratureSpec().seed)
    parser.add_argument("--rel-tol", type=float, default=1e-10)
    parser.add_argument("--abs-tol", type=float, default=1e-14)
    parser.add_argument("--sphere-nodes", type=int, default=32)
    parser.add_argument("--normalized", action="store_true",
                        help="use the (2 pi)^(-n/2)-normalized Gaussian measure")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("certify", help="certify corpus N-functions")

    hp = sub.add_parser("hardy", help="Hardy inequality battery")
    hp.add_argument("--nfunc", default=None)
    hp.add_argument("--dim", default="1..2")
    hp.add_argument("--form", default=None,
                    choices=["term1", "term2", "liniowe", "ww", "www",
                             "hn1", "hn11", "wwww", "p2_exact"])

    sp = sub.add_parser("sharpness", help="extremal-family sharpness scan")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alphas", default=",".join(str(a) for a in DEFAULT_ALPHAS))

    mp = sub.add_parser("mazya", help="Maz'ya criterion")
    mp.add_argument("--gaussian", action="store_true")
    mp.add_argument("--classical", action="store_true")
    mp.add_argument("--p", type=float, default=None)
    mp.add_argument("--n", type=int, default=None)
    mp.add_argument("--pair", default=None,
                    help="measure-pair config JSON (kind: classical | "
                         "gaussian {p, n} | table {x, mu_density, nu_density, p, q})")

    lp = sub.add_parser("lk", help="Landau-Kolmogorov envelope fits")
    lp.add_argument("--nfunc", default="p2,p3")
    lp.add_argument("--dim", default="1..2")
    lp.add_argument("--theta-grid", default=",".join(str(t) for t in DEFAULT_THETAS))
    lp.add_argument("--fit-grid", default=None,
                    help="comma-separated constant grid (default powers of 2)")

    ap = sub.add_parser("all", help="full verification battery")
    ap.add_argument("--dim", default="1..2")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = _spec_from_args(args)
    out_dir = Path(args.out)
    report_path = Path(args.report) if args.report else \
        out_dir / f"{args.subcommand}.json"

    checks: list = []
    series: dict = {}
    fits: dict = {}
    manifest = None
    try:
        if args.subcommand in ("certify", "hardy", "lk", "all"):
            manifest = corpus_mod.load_manifest(args.corpus)

        if args.subcommand == "certify":
            run_certify(manifest, spec, checks)
        elif args.subcommand == "hardy":
            run_hardy(manifest, spec, _parse_dims(args.dim), checks,
                      nfunc_label=args.nfunc, form=args.form,
                      normalized=args.normalized)
        elif args.subcommand == "sharpness":
            alphas = [float(a) for a in args.alphas.split(",") if a]
            run_sharpness(args.p, args.n, alphas, spec, checks, series)
        elif args.subcommand == "mazya":
            gaussian = []
            classical = args.classical
            pair = load_pair_config(args.pair) if args.pair else None
            if args.gaussian:
                if args.p is None or args.n is None:
                    raise PreconditionError("--gaussian requires --p and --n")
                gaussian = [(args.p, args.n)]
            if not gaussian and not classical and pair is None:
                classical = True
                gaussian = [(p, n) for p in (1.5, 2.0, 2.5, 3.0, 3.5, 4.0)
                            for n in (1, 2, 3)]
            run_mazya(spec, checks, series, gaussian=gaussian,
                      classical=classical, pair=pair)
        elif args.subcommand == "lk":
            grid = (tuple(float(c) for c in args.fit_grid.split(","))
                    if args.fit_grid else lk_mod.DEFAULT_FIT_GRID)
            thetas = tuple(float(t) for t in args.theta_grid.split(","))
            run_lk(manifest, spec, _parse_dims(args.dim), checks, series, fits,
                   nfunc_labels=[s for s in args.nfunc.split(",") if s],
                   theta_grid=thetas, fit_grid=grid)
        elif args.subcommand == "all":
            dims = _parse_dims(args.dim)
            run_certify(manifest, spec, checks)
            run_hardy(manifest, spec, dims, checks, normalized=args.normalized)
            for p in (3.0, 4.0):
                for n in dims[:2]:
                    run_sharpness(p, n, DEFAULT_ALPHAS, spec, checks, series)
            run_mazya(spec, checks, series, classical=True,
                      gaussian=[(p, n) for p in (1.5, 2.0, 3.0, 4.0)
                                for n in (1, 2, 3)])
            run_lk(manifest, spec, [n for n in dims if n <= 2], checks, series,
                   fits, nfunc_labels=("p2", "p3"))
    except (ManifestError, OrliczHardyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    checks.sort(key=lambda c: c["check_id"])
    summary = summarize_verdicts(checks)
    body = {
        "tool_version": TOOL_VERSION,
        "subcommand": args.subcommand,
        "manifest_fingerprint": manifest.fingerprint if manifest else None,
        "corpus": manifest.member_fingerprints if manifest else {},
        "quadrature_spec": {
            "rel_tol": spec.rel_tol, "abs_tol": spec.abs_tol,
            "sphere_nodes": spec.sphere_nodes, "seed": spec.seed,
        },
        "normalization": "normalized" if args.normalized else "unnormalized",
        "checks": checks,
        "fits": fits,
        "series": series,
        "summary": summary,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    write_report(report_path, body)
    _write_series_csv(out_dir, series)
    print(f"{args.subcommand}: {summary['holds']} holds, {summary['fails']} fails, "
          f"{summary['indeterminate']} indeterminate, {summary['trivial']} trivial "
          f"-> {report_path}")
    return 0 if summary["fails"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
