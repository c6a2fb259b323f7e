# %% [markdown]
# Kauffman brackets three ways
#
# Parse a few diagrams, compute the bracket with each engine and look at
# the degree bound M(D) = c(D) + 2|s_A(D)| - 2.

# %%
from joneslab.bracket import fast_bracket, peak_width, skein_bracket
from joneslab.diagram import cable, parse_pd, writhe
from joneslab.ingest import load_fixtures
from joneslab.jones import M_of
from joneslab.poly import render
from joneslab.ribbon import subgraph_bracket
from joneslab.states import is_A_adequate, sA

fix = load_fixtures()

# %%
for name in ("trefoil", "figure8", "clasp_fold", "fig7"):
    D = fix.get(name).pd
    p = fast_bracket(D)
    assert p == skein_bracket(D) == subgraph_bracket(D)
    print(f"{name:10s} c={D.c} w={writhe(D):+d} |s_A|={sA(D)} M={M_of(D):3d} "
          f"top={p.max_deg():3d} adequate={is_A_adequate(D)[0]}")
    print("   ", render(p))

# %% [markdown]
# Adequate diagrams reach the bound; the others fall short of it.
# Cables grow fast, so only the frontier engine is practical there.

# %%
T = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]")
for n in (1, 2, 3):
    Dn = cable(T, n)
    print(f"trefoil^{n}: c={Dn.c} peak width={peak_width(Dn)} top degree={fast_bracket(Dn).max_deg()} M={M_of(Dn)}")
