import math

import numpy as np
import pytest

from orlicz_hardy.errors import PreconditionError
from orlicz_hardy.functionals import FieldFunction, SupportHint, hessian_hs_norm
from orlicz_hardy.landau_kolmogorov import (
    additive_lk_from_hardy,
    check_lk_modular,
    check_lk_norm,
    fit_envelope,
    fit_lk_modular_envelope,
    fit_lk_norm_envelope,
    lk_norm_triple,
)
from orlicz_hardy.nfunc import power_nfunction


def zero_field(n=2):
    return FieldFunction(
        u=lambda X: np.zeros(X.shape[:-1]),
        grad=lambda X: np.zeros(X.shape),
        hess=lambda X: np.zeros(X.shape + (n,)),
        n=n, hint=SupportHint.decaying(0.0, 0.0), label="zero")


class TestHypotheses:
    def test_missing_hessian_rejected(self, manifest):
        f = FieldFunction(u=lambda X: np.zeros(X.shape[:-1]),
                          grad=lambda X: np.zeros(X.shape),
                          n=2, hint=SupportHint.decaying(0.0, 0.0))
        with pytest.raises(PreconditionError, match="Hessian"):
            check_lk_modular(f, manifest.nfunc("p2"), 1.0, 1.0)

    def test_slow_growth_rejected(self, manifest, spec):
        # lower exponent 1.5 < 2: M(r)/r^2 is decreasing
        field = manifest.field_functions["fx_lin"].instantiate(2)
        with pytest.raises(PreconditionError, match="non-decreasing"):
            additive_lk_from_hardy(field, power_nfunction(1.5), 2, 1.0, 1.0, spec)

    def test_theta_out_of_range(self, manifest):
        field = manifest.field_functions["fx_lin"].instantiate(2)
        with pytest.raises(PreconditionError, match="theta"):
            check_lk_modular(field, manifest.nfunc("p2"), 1.0, 1.0, theta=1.5)


class TestHessianNorm:
    def test_symmetry_exact(self, manifest):
        field = manifest.field_functions["fx_cross"].instantiate(3)
        pts = np.random.default_rng(3).standard_normal((12, 3))
        h = np.asarray(field.hess(pts))
        assert np.array_equal(
            np.sqrt((h ** 2).sum(axis=(-2, -1))),
            np.sqrt((np.swapaxes(h, -1, -2) ** 2).sum(axis=(-2, -1))))
        assert hessian_hs_norm(field, pts).shape == (12,)


class TestModularCheck:
    def test_zero_field_holds(self, manifest, spec):
        rep = check_lk_modular(zero_field(), manifest.nfunc("p2"), 2.0, 2.0,
                               spec=spec)
        assert rep.verdict == "holds" and rep.lhs == 0.0

    def test_truncated_linear_function_dominated_by_function_term(
            self, manifest, spec):
        # u = x1 inside radius 8: the Hessian vanishes there, so the bound
        # must come from the function term
        field = manifest.field_functions["fx_cut"].instantiate(1)
        lhs_rep = check_lk_modular(field, manifest.nfunc("p2"), 1.0, 1.0, 1.0,
                                   spec)
        assert lhs_rep.rhs_terms["hessian"] < 1e-6 * lhs_rep.rhs_terms["function"]
        assert lhs_rep.verdict in ("holds", "indeterminate")


class TestNormTriple:
    def test_zero_norms(self, manifest, spec):
        r, s, t = lk_norm_triple(zero_field(), manifest.nfunc("p2"), spec)
        assert (r, s, t) == (0.0, 0.0, 0.0)

    def test_scaling(self, manifest, spec):
        import dataclasses
        field = manifest.field_functions["fx_lin"].instantiate(2)
        c = 7.0
        scaled = dataclasses.replace(
            field,
            u=lambda X: c * np.asarray(field.u(X), float),
            grad=lambda X: c * np.asarray(field.grad(X), float),
            hess=lambda X: c * np.asarray(field.hess(X), float),
            label="7x")
        nf = manifest.nfunc("p3")
        r1, s1, t1 = lk_norm_triple(field, nf, spec)
        r2, s2, t2 = lk_norm_triple(scaled, nf, spec)
        assert r2 == pytest.approx(c * r1, rel=1e-8)
        assert s2 == pytest.approx(c * s1, rel=1e-8)
        assert t2 == pytest.approx(c * t1, rel=1e-8)


class TestEnvelopeFit:
    def test_fit_minimises_sum(self):
        items = [("a", 1.0, 1.0, 0.0, 1e-12), ("b", 2.0, 0.0, 1.0, 1e-12)]
        c1, c2, binding, ok = fit_envelope(items, grid=(0.5, 1.0, 2.0, 4.0))
        assert ok
        assert (c1, c2) == (1.0, 2.0)
        assert binding in ("a", "b")

    def test_infeasible_grid(self):
        items = [("a", 100.0, 1e-9, 1e-9, 0.0)]
        c1, c2, _, ok = fit_envelope(items, grid=(0.5, 1.0))
        assert not ok and math.isinf(c1)

    @pytest.mark.parametrize("nf_label", ["p2", "p3"])
    @pytest.mark.parametrize("n", [1, 2])
    def test_norm_envelope_exists(self, manifest, spec, nf_label, n):
        nf = manifest.nfunc(nf_label)
        fields = [f.instantiate(n) for f in manifest.field_functions.values()
                  if f.compatible(n)]
        fit, rows = fit_lk_norm_envelope(fields, nf, spec)
        assert fit.feasible
        assert math.isfinite(fit.c1) and math.isfinite(fit.c2)
        assert fit.binding_label in {f.label for f in fields}
        for u in fields:
            rep = check_lk_norm(u, nf, fit.c1, fit.c2, spec)
            assert rep.verdict in ("holds", "indeterminate", "trivial"), \
                (u.label, rep.slack)

    def test_envelope_monotone_under_corpus_union(self, manifest, spec):
        nf = manifest.nfunc("p2")
        all_fields = [f.instantiate(2) for f in manifest.field_functions.values()
                      if f.compatible(2)]
        small = all_fields[:2]
        fit_small, _ = fit_lk_norm_envelope(small, nf, spec)
        fit_all, _ = fit_lk_norm_envelope(all_fields, nf, spec)
        assert fit_all.c1 + fit_all.c2 >= fit_small.c1 + fit_small.c2 - 1e-12

    def test_modular_envelope_and_theta_sweep(self, manifest, spec):
        nf = manifest.nfunc("p2")
        fields = [f.instantiate(2) for f in manifest.field_functions.values()
                  if f.compatible(2)]
        fit, rows = fit_lk_modular_envelope(fields, nf, spec,
                                            theta_grid=(0.25, 0.5, 1.0))
        assert fit.feasible
        for u in fields:
            for theta in (0.25, 0.5, 1.0):
                rep = check_lk_modular(u, nf, fit.c1, fit.c2, theta, spec)
                assert rep.verdict in ("holds", "indeterminate"), \
                    (u.label, theta, rep.slack)


class TestProvenanceChain:
    def test_hardy_gate_recorded(self, manifest, spec):
        field = manifest.field_functions["fr_wide"].instantiate(2)
        nf = manifest.nfunc("p2")
        rep = additive_lk_from_hardy(field, nf, 2, 64.0, 64.0, spec)
        assert rep.provenance["hardy_form"] == "hn1"
        assert rep.provenance["hardy_verdict"] == "holds"
        assert rep.theta == 1.0

    def test_boundary_growth_quadratic_runs(self, manifest, spec):
        # M = r^2 sits exactly at the d = 2 boundary and must be accepted
        field = manifest.field_functions["fx_quad"].instantiate(2)
        rep = additive_lk_from_hardy(field, manifest.nfunc("p2"), 2,
                                     64.0, 64.0, spec)
        assert rep.verdict in ("holds", "indeterminate")

    def test_finiteness_propagation(self, manifest, spec):
        # finite right-hand modulars force a finite left-hand side
        nf = manifest.nfunc("p3")
        for factory in manifest.field_functions.values():
            if not factory.compatible(2):
                continue
            u = factory.instantiate(2)
            lhs, a, b, errs = __import__(
                "orlicz_hardy.landau_kolmogorov", fromlist=["lk_modular_terms"]
            ).lk_modular_terms(u, nf, 1.0, spec)
            if math.isfinite(a) and math.isfinite(b):
                assert math.isfinite(lhs)
