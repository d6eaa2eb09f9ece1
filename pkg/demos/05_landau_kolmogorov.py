"""Gaussian Landau-Kolmogorov inequalities, certified as fitted envelopes.

The gradient modular is bounded by Hessian and function modulars,

    int M(|grad u|) dgamma <= C1 int M(theta |hess u|) dgamma
                              + C2 int M(|u|/theta) dgamma,

and in norm form ||grad u|| <= C1~ sqrt(||hess u|| ||u||) + C2~ ||u||.
No closed-form constants exist at this generality, so the toolkit fits the
smallest grid pair covering a declared corpus, reports the binding member,
and sweeps theta with the theta = 1 constants.  The derivation assumes the
Gaussian Hardy inequality; the provenance chain records that check.
"""

from orlicz_hardy import (
    additive_lk_from_hardy,
    check_lk_modular,
    fit_lk_modular_envelope,
    fit_lk_norm_envelope,
    load_manifest,
)

manifest = load_manifest()
nf = manifest.nfunc("p2")
n = 2
fields = [f.instantiate(n) for f in manifest.field_functions.values()
          if f.compatible(n)]
print(f"corpus at n = {n}: {[f.label for f in fields]}")

fit, rows = fit_lk_norm_envelope(fields, nf, None)
print(f"\nnorm-form envelope for M = r^2: C1~ = {fit.c1:g}, C2~ = {fit.c2:g} "
      f"(binding member: {fit.binding_label})")
for label, r, s, t in rows:
    print(f"  {label:10s} ||grad u|| = {r:8.4f}   sqrt(||hess|| ||u||) = {s:8.4f}"
          f"   ||u|| = {t:8.4f}")

fit_mod, _ = fit_lk_modular_envelope(fields, nf, None,
                                     theta_grid=(0.25, 0.5, 1.0))
print(f"\nmodular envelope: C1 = {fit_mod.c1:g}, C2 = {fit_mod.c2:g}; "
      f"theta sweep with the theta = 1 constants:")
for theta in (0.25, 0.5, 1.0):
    verdicts = [check_lk_modular(u, nf, fit_mod.c1, fit_mod.c2, theta).verdict
                for u in fields]
    print(f"  theta = {theta:4.2f}: {verdicts}")

rep = additive_lk_from_hardy(fields[0], nf, n, fit_mod.c1, fit_mod.c2)
print(f"\nprovenance chain for '{fields[0].label}': Hardy form "
      f"{rep.provenance['hardy_form']} verdict {rep.provenance['hardy_verdict']}"
      f" -> LK verdict {rep.verdict}")
