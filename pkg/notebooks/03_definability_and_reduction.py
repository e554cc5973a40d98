# %% [markdown]
# # Frame definability and the polynomial reduction
#
# We enumerate every frame with at most three worlds, compare the class a
# formula defines over `L3` with the class its classical counterpart
# `phi_star` defines over 2, and then grow the definitional reduction to
# see how its size scales.

# %%
import numpy as np

from mvmodal import enumerate_frames, lukasiewicz_chain, parse
from mvmodal.framelab import closure_check, compare_definability
from mvmodal.generators import formula_suite
from mvmodal.polytrans import reduce_validity
from mvmodal.syntax import modal_rank, size

L3 = lukasiewicz_chain(3)
universe = enumerate_frames(3)
print(len(universe), "frames")

# %%
f = parse("box p -> box box p", L3.signature)
report = compare_definability(L3, f, universe)
print(len(report.left), "frames defined;", "agree" if report.agree else report.mismatches)

# %% [markdown]
# Definable classes are closed under generated subframes and bounded
# morphic images. Disjoint unions are only checked while the union still
# fits in the universe.

# %%
for op in ("generated_subframe", "bounded_morphic_image", "disjoint_union"):
    r = closure_check(report.left, universe, op)
    print(op, "closed" if r.closed else r.violations[:1], r.tested, "tested", r.not_tested, "not tested")

# %%
rows = []
for g in formula_suite(5, 80, L3.signature, 2, 2, 7):
    rows.append((size(g), modal_rank(g), size(reduce_validity(L3, g))))
data = np.array(rows)
ratio = data[:, 2] / (data[:, 0] * (data[:, 1] + 1))
print("size ratio: min %.1f  mean %.1f  max %.1f" % (ratio.min(), ratio.mean(), ratio.max()))
