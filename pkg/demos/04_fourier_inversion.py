# %% [markdown]
# Recovering the measure by Fourier inversion
#
# If f is the transform of a finite measure then f(-ix) is its
# characteristic function, and the distribution function follows from an
# oscillatory integral.  The integral is summed lobe by lobe and the
# partial sums are accelerated.

# %%
import numpy as np

from cmkit import inversion, laplace, measure

est = inversion.invert_cm("exp(-x)", [0.5, 1.0, 1.5])
for t, F, err in est.points:
    print(f"t={t:4}  F={F:.9f}  error estimate={err:.1e}")

# %% [markdown]
# At a jump the formula returns the midpoint.  exp(-x) is the unit mass at
# 1, so F(1) = 1/2.  The same lobe summation evaluates the sign integral.

# %%
for a in (-2.0, 0.5):
    print(a, inversion.sign_integral(a), np.sign(a) * np.pi / 2)

# %% [markdown]
# Round trip through a catalog pair: (x + 1)^-2 is the transform of the
# density t exp(-t).

# %%
pair = laplace.catalog("milsam2", a=1.0, b=1.0, c=2.0)
ts = [0.5, 1.0, 2.0, 4.0]
est = inversion.invert_cm(pair.function, ts)
for t, F in zip(ts, est.values()):
    print(f"t={t}  inverted={F:.9f}  exact={measure.cumulative(pair.measure, t):.9f}")

# %% [markdown]
# Finite mass is required.  1/x corresponds to Lebesgue measure, so the
# inversion refuses it.

# %%
try:
    inversion.invert_cm("1/x", [1.0])
except inversion.ConstraintError as exc:
    print(exc)
