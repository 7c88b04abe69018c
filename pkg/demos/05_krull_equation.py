# %% [markdown]
# The functional equation g(x + 1) - g(x) = f(x)
#
# For f = log the convex solution is log Gamma.  Its derivatives come from
# slowly converging series over f', f'', ...; an Euler-Maclaurin tail makes
# them converge after a handful of terms.

# %%
import math

from cmkit import gammaex, krull, specials

print("g'(1)  =", krull.krull_gprime("log(x)", 1.0), " psi(1) =", specials.digamma(1.0))
print("g''(1) =", krull.krull_gderiv("log(x)", 2, 1.0), " pi^2/6 =", math.pi**2 / 6)
print("g'''(1)=", krull.krull_gderiv("log(x)", 3, 1.0), " psi''(1) =", specials.polygamma(2, 1.0))

# %% [markdown]
# The residual of the equation itself, differentiated twice.

# %%
print(krull.krull_residual("log(x)", [0.5, 1.0, 2.0, 5.0]))

# %% [markdown]
# f(x) = x log(x/(x+1)) is solved by log Gamma(x) - (x - 1) log x, whose
# second derivative is -W(x) with W the CM function of the next demo.

# %%
for x in (0.5, 1.0, 3.0):
    print(x, krull.krull_gderiv("x*log(x/(x + 1))", 2, x), -gammaex.w_value(x))

# %% [markdown]
# If the derivatives of f do not decay there is no such solution, and the
# solver says so rather than returning a regularized number.

# %%
try:
    krull.krull_gderiv("x^3", 2, 1.0)
except krull.DivergenceError as exc:
    print(exc)
