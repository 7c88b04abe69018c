# %% [markdown]
# Measures and Laplace transforms
#
# A CM function is the Laplace transform of a positive measure on [0, inf).
# Measures here are point masses plus an optional density.

# %%
import math

from cmkit import expr as ex
from cmkit import laplace, measure
from cmkit.measure import Measure

mu = Measure(atoms=((0.0, 1.0), (2.0, 0.5)), density="t*exp(-t)")
for x in (0.5, 1.0, 2.0):
    print(x, laplace.transform(mu, x), 1 + 0.5 * math.exp(-2 * x) + 1 / (1 + x) ** 2)

# %% [markdown]
# The catalog holds explicit pairs.  `check` compares the closed form with
# the transform of the measure computed by quadrature.

# %%
for name, params in [("milsam2", dict(a=1.0, b=1.0, c=2.0)), ("milsam3", dict(a=2.0, b=1.0)),
                     ("milsam4", {}), ("milsam5", dict(a=1.0)), ("psin", dict(n=1))]:
    pair = laplace.catalog(name, **params)
    dens = pair.measure.density.text() if pair.measure.density else None
    print(f"{name:8s} f = {ex.to_text(pair.function):22s} atoms={pair.measure.atoms} density={dens}")
    for x, fx, lx in pair.check([0.3, 3.0]):
        print(f"    x={x:4}  f={fx:.12g}  L={lx:.12g}")

# %% [markdown]
# Convolution of measures multiplies transforms.  Two densities are
# convolved numerically, so both need a support hint.

# %%
a = Measure(density=ex.exp(-ex.X), support_hint=60.0)
b = Measure(density=ex.X * ex.exp(-2.0 * ex.X), support_hint=60.0)
ab = measure.convolve(a, b)
for x in (0.5, 1.0, 2.0):
    print(x, laplace.transform(ab, x), laplace.transform(a, x) * laplace.transform(b, x))

# %% [markdown]
# Stieltjes transforms are Laplace transforms too: uniform mu on [0, 1]
# gives log(1 + 1/x).

# %%
nu = measure.stieltjes_to_laplace(measure.lebesgue(1.0))
print(laplace.transform(nu, 2.0), math.log1p(0.5))

# %% [markdown]
# Mixtures of exponential densities are exactly the CM probability densities.

# %%
mix = laplace.mean_parametrized_mixture([(0.5, 0.3), (2.0, 0.7)])
print("f(1) =", mix(1.0), " integral =", mix.normalization())

# %% [markdown]
# Measures with expression densities serialize to JSON, which is the file
# format read by `cm transform --measure`.

# %%
print(measure.to_json(mu))
