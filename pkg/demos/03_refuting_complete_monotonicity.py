# %% [markdown]
# Refuting complete monotonicity
#
# No finite computation proves that a function is CM.  What we can do is
# look for a violation: a derivative with the wrong sign, or a failed
# necessary condition.  A clean run is reported as "consistent".

# %%
from cmkit import cmtest

for f in ["exp(-1.7*x)", "log(1 + 1/x)", "exp(-x^2)", "exp(lgamma(x))", "x*exp(-x)"]:
    r = cmtest.cm_grid_check(f)
    line = f"{f:16s} {r.verdict}"
    if r.witnesses:
        w = r.witnesses[0]
        line += f"   first witness: k={w.label} x={w.point:.4g} value={w.lhs:.3e}"
    print(line)

# %% [markdown]
# Witnesses are reproducible: re-evaluating one from scratch gives the same
# violated inequality.

# %%
report = cmtest.cm_grid_check("exp(-x^2)")
print(cmtest.recheck_witness("exp(-x^2)", report.witnesses[0]))

# %% [markdown]
# The Gamma function is log-convex but not CM.  Log-convexity is necessary,
# not sufficient.

# %%
print(cmtest.log_convexity_check("exp(lgamma(x))").status)

# %% [markdown]
# Majorization drives two more necessary conditions.  (1,1,1) is majorized
# by (2,1,0), so for CM f the product of derivative magnitudes must grow.

# %%
print(cmtest.majorization_leq((1, 1, 1), (2, 1, 0)))
r = cmtest.fink_schur_check("1/(1 + x)", 1.0, (1, 1, 1), (2, 1, 0))
print(r.status)

# %% [markdown]
# The full suite runs every necessary condition with seeded random samples.

# %%
suite = cmtest.run_suite("log(1 + x)/x", seed=1)
for name, status in suite.condition_results.items():
    print(f"{name:14s} {status}")

# %% [markdown]
# Bernstein functions and infinite divisibility: exp(-x^0.5) is the Laplace
# transform of an infinitely divisible law because x^0.5 is Bernstein.

# %%
print(cmtest.bernstein_check("x^0.5").status, cmtest.id_laplace_check("exp(-x^0.5)").status)
print(cmtest.compose_cm_check("1/(1 + x)", "x^0.5").detail)
