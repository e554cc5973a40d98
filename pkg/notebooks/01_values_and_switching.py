# %% [markdown]
# # Lattice-valued models and their two-valued shadow
#
# A model takes values in a finite lattice algebra. Diamond is a supremum
# over successors and box an infimum. Here we evaluate one formula on a
# small chain frame over the three-element Lukasiewicz chain, then check
# that the classical translation `T^a` picks out exactly the worlds
# where the formula has value `a`.

# %%
import random

import numpy as np

from mvmodal import Frame, Model, evaluate_all, lukasiewicz_chain, parse, to_text
from mvmodal.translation import star_model, switch_check, translate_value
from mvmodal.semantics import evaluate

L3 = lukasiewicz_chain(3)
frame = Frame(3, [(0, 1), (1, 2), (2, 2)])
model = Model(frame, L3, {"p": (0, 1, 2)})
f = parse("box dia p -> p", L3.signature)
print(to_text(f), [L3.labels[v] for v in evaluate_all(model, f)])

# %% [markdown]
# The star model has one classical letter `p@a` per element; `p@a` is true
# where `p` has value `a`.

# %%
star = star_model(model)
table = np.array([star.valuation[v] for v in sorted(star.valuation, key=lambda v: v.tag)])
print(table)  # rows: p@0, p@1, p@2; columns: worlds

# %%
for a in L3.elements:
    t = translate_value(L3, f, a)
    truth = [evaluate(star, t, w) for w in range(frame.worlds)]
    print(L3.labels[a], truth)

# %% [markdown]
# Switching holds on random models too; `switch_check` compares every
# world and every tag at once.

# %%
from mvmodal.generators import default_vars, formula_suite, random_frame, random_model

rng = random.Random(1)
checked = 0
for g in formula_suite(1, 100, L3.signature, 2, 2, 4):
    m = random_model(rng, random_frame(rng, 3), L3, default_vars(2))
    assert switch_check(m, g)
    checked += 1
print("switch lemma held on", checked, "random cases")
