# %% [markdown]
# Colored Jones polynomials and their extreme degrees
#
# The minimum q-degree d(m) is compared with the diagrammatic bound h_m(D).
# For A-adequate diagrams they agree; otherwise the bound is not attained.

# %%
from joneslab.ingest import load_fixtures
from joneslab.jones import colored_jones, h_n
from joneslab.poly import render_q
from joneslab.states import is_A_adequate

fix = load_fixtures()

# %%
for name in ("trefoil", "figure8", "search_c3_1", "search_c4_5", "clasp_fold"):
    D = fix.get(name).pd
    print(name, "A-adequate" if is_A_adequate(D)[0] else "not A-adequate")
    for m in (2, 3):
        J = colored_jones(D, m)
        print(f"  J({m}) d={J.min_deg()} h={h_n(D, m)}  {render_q(J)}")

# %% [markdown]
# 12n706 is not A-adequate, yet its Jones polynomial reaches h_2 with a
# trailing coefficient of absolute value 2.

# %%
D = fix.get("12n706").pd
J = colored_jones(D, 2)
print(render_q(J))
print("min degree", J.min_deg(), "h_2", h_n(D, 2), "coefficient", J.coeff(J.min_deg()))
