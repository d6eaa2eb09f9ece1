"""Hardy inequalities for the radial Gaussian weight r^(n-1) exp(-r^2/2).

For a profile u, three modular integrals are compared:

    K = int M(r|u|) dmu_n,  L = int M(|u|) dmu_n,  G = int M(|u'|) dmu_n.

The sharp two-branch bound gives K <= max-of-two right-hand sides; its
linear weakening K <= C1 L + C2 G comes with the explicit constants
C1 = 2^(D-1) (D+n-2)^(D/2), C2 = 2^(D-1) D^D when D + n >= e + 2, and a
beta/gamma trade-off curve lets either constant be pushed toward its
frontier at the other's expense.
"""

from orlicz_hardy import (
    ExtremalParams,
    beta_gamma,
    check_alternative,
    check_convex_case,
    check_linear,
    extremal_function,
    linear_constants,
    modular_triple_radial,
    power_nfunction,
)

nf = power_nfunction(3)
n = 2
u = extremal_function(ExtremalParams(0.5, 3, n))
tri = modular_triple_radial(u, nf, n)
print(f"modulars for u = exp(r^2/12), M = r^3, n = {n}:")
print(f"  K = {tri.K:.6f}, L = {tri.L:.6f}, G = {tri.G:.6f}")

rep = check_alternative(tri, 3.0, 3.0, n)
print(f"two-branch bound: verdict={rep.verdict}, branch={rep.details['branch_held']}, "
      f"slack={rep.slack:.4f}")

c1, c2 = linear_constants(3.0, 3.0, n)
rep = check_linear(tri, c1, c2)
print(f"linear bound with C1={c1:.3f}, C2={c2:.0f}: verdict={rep.verdict}, "
      f"slack={rep.slack:.4f}")

print()
print("beta/gamma trade-off: pushing C2 toward its frontier D^D inflates C1")
for rho in (2.0, 1.2, 1.02):
    beta, gamma = beta_gamma(rho, 3.0)
    print(f"  rho={rho:5.2f}: C1 = {beta * (3.0 + n - 2.0) ** 1.5:10.2f}, "
          f"C2 = {rho * 27.0:7.2f}   (C2 frontier: 27)")

print()
print("doubling-only route (no lower growth exponent): constants exist but are")
print("astronomically generous, the point is existence")
rep = check_convex_case(tri, 3.0, n)
print(f"  C1 = {rep.constants_used['C1']:.3e}, C2 = {rep.constants_used['C2']:.3e}, "
      f"verdict = {rep.verdict}")
print(f"  proof parameters: eps = {rep.constants_used['eps']}, "
      f"kappa = {rep.constants_used['kappa']:.4f}")
