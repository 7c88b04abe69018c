# %% [markdown]
# Expressions and derivative jets
#
# Functions enter the toolkit as small expression trees.  A jet is the
# vector of derivatives f, f', ..., f^(K) at one point; it is propagated
# through every node with truncated power series, so there is no finite
# differencing anywhere.

# %%
import numpy as np

from cmkit import expr as ex

f = ex.parse("log(1 + 1/x)")
print("parsed :", f)
print("printed:", ex.to_text(f))

# %% [markdown]
# The sign pattern (-1)^k f^(k)(x) >= 0 is what complete monotonicity asks
# for.  Here it holds for every order we compute.

# %%
jet = ex.jet_eval(f, 0.7, 10)
for k, d in enumerate(jet.coeffs):
    print(f"k={k:2d}  f^(k)={d: .6e}  (-1)^k f^(k)={(-1) ** k * d: .6e}")

# %% [markdown]
# Jets agree with closed forms.  For 1/x at 2 the k-th derivative is
# (-1)^k k! / 2^(k+1).

# %%
print(ex.jet_eval(ex.parse("1/x"), 2.0, 3).coeffs)

# %% [markdown]
# lgamma and polygamma nodes are seeded by polygamma values, so derivatives
# of log Gamma are available to any order.

# %%
print("psi(1) =", ex.jet_eval(ex.parse("lgamma(x)"), 1.0, 1).coeffs[1])

# %% [markdown]
# Evaluation is vectorized, and the complex evaluator covers the nodes that
# have a principal branch.  It is what the Fourier inversion uses.

# %%
xs = np.array([0.5, 1.0, 2.0])
print(ex.evaluate(f, xs))
print(ex.eval_complex(ex.parse("exp(-x)"), -1j))

# %% [markdown]
# Parse errors report the character offset.

# %%
try:
    ex.parse("exp(-x")
except ex.ParseError as exc:
    print(type(exc).__name__, exc.offset, exc)
