# %% [markdown]
# CM functions built from the Gamma function
#
# Three families with explicit representing densities.  Their densities
# cancel catastrophically near t = 0, so small t uses Maclaurin series.

# %%
import numpy as np

from cmkit import cmtest, gammaex as ge

for x in (0.5, 1.0, 2.0, 5.0):
    print(f"x={x}  W={ge.w_value(x):.12f}  by quadrature={ge.w_by_quadrature(x):.12f}")

# %% [markdown]
# G_a is CM exactly when a >= 1/2.  Bisection on the sign of its density
# finds the threshold.

# %%
scan = ge.scan_exa_a()
print(scan.status, scan.bracket, "contains 1/2:", scan.contains_claim)
for a in (0.4, 0.5, 1.0):
    print(a, cmtest.cm_grid_check(ge.g_a_expr(a), K=6).verdict)
print("-G_0:", cmtest.cm_grid_check(-ge.g_a_expr(0.0), K=6).verdict)

# %% [markdown]
# The threshold comes from u(t), which falls from 1/2 at 0 to 0 at infinity.

# %%
ts = np.array([1e-3, 0.1, 1.0, 10.0, 100.0, 1e3])
print(np.c_[ts, ge.u(ts)])

# %% [markdown]
# phi_{b, b-1/2} is CM exactly when b >= 1/2 + 1/sqrt(12).  Near t = 0 its
# density behaves like (b^2/2 - b/2 + 1/12) t^2, which explains the value.

# %%
scan = ge.scan_exa_b()
print(scan.status, scan.bracket, ge.B_THRESHOLD)
for b in (0.75, 0.79, 1.0):
    print(b, ge.small_t_coefficient(b), cmtest.cm_grid_check(ge.phi_bc_expr(b, b - 0.5), K=6).verdict)

# %% [markdown]
# phi tends to log(2 pi)/2 at infinity rather than 0, so the measure has an
# atom of that mass at the origin in addition to the density h_b(t)/t^2.

# %%
for x in (0.5, 2.0, 5.0):
    print(x, ge.phi_bc_value(x, 1.0, 0.5), ge.phi_by_quadrature(x, 1.0))
print(ge.phi_bc_value(1e6, 1.0, 0.5), ge.HALF_LOG_2PI)
