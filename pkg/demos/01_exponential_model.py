"""
The exponential expenditure model
=================================

Travel spending is modelled as exponential: the chance of spending one
more dollar does not depend on what has already been spent.
"""

# %%
import numpy as np

from travelwtp import ExponentialDemand, cdf, discrete_exceedance, mean_expenditure, survival

model = ExponentialDemand(prefactor_a=0.0211457277071, rate_per_dollar=0.0271286)
print("mean expenditure per visitor:", mean_expenditure(model))
print("P(spend <= mean):", cdf(model, mean_expenditure(model)))

# %%
# Memorylessness: having paid t already, the chance of paying a further z
# is the same as paying z from scratch.
t, z = 20.0, 5.0
print(survival(model, t + z) / survival(model, t), survival(model, z))

# %%
# Spending in tiny portions, each continued with probability exp(-rate * m),
# approaches the continuous survival curve.
for portion in (1.0, 0.1, 0.01):
    k = int(round(30 / portion))
    print(portion, discrete_exceedance(0.0271286, portion, k), survival(model, 30.0))

# %%
grid = np.linspace(0, 150, 7)
print(np.column_stack([grid, survival(model, grid)]))
