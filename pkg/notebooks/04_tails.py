# %% [markdown]
# Stable tail coefficients
#
# For A-adequate knots the trailing coefficients of J(m) stabilize as m
# grows; for reduced non-adequate diagrams the first ones vanish.

# %%
from joneslab.ingest import load_fixtures
from joneslab.jones import coefficients_above_h, tail

fix = load_fixtures()

# %%
for name in ("trefoil", "trefoil_left", "figure8", "search_c3_1", "clasp_fold"):
    D = fix.get(name).pd
    rep = tail(D, 2, 4)
    rows = {m: coefficients_above_h(D, m, m - 1, signed=True) for m in (2, 3, 4)}
    print(f"{name:12s} betas={rep.betas} adequate={rep.adequate} per color={rows}")
