# %% [markdown]
# Cancellation classes on a 3-cable
#
# fig7 is a trefoil with a kink; its all-A state has a loop edge.  In the
# 3-cable the rank <= 1 spanning subgraphs are grouped into classes whose
# contributions cancel in the top degrees.

# %%
from collections import Counter

from joneslab.cancellation import label_cable, partition_classes, table_rows, verify_degree_drop
from joneslab.ingest import load_fixtures

D = load_fixtures().get("fig7").pd
L = label_cable(D, 3)
print("loops", [L.name(x) for x in L.loops])
print("cable edges", sorted(L.name(x) for x in L.e_n))

# %%
classes = partition_classes(D, 3, L)
sizes = Counter(cd.size for cd in classes)
print(len(classes), "classes; sizes", dict(sorted(sizes.items())))

# %%
rep = verify_degree_drop(D, 3, L=L, triples=False)
print(f"M(D^3) = {rep.M}, d* = {rep.dA_star}, bound = {rep.bound}, max class degree = {rep.max_class_deg}")

# %% [markdown]
# The realized table rows (a, rest, b/t sequences, G, v-k, g):

# %%
for row in table_rows(D, 3, L):
    print(" | ".join(str(c) for c in row))
