# %% [markdown]
# # Boolean interpretation terms
#
# A unary term `t` interprets a Boolean algebra in `A` when `t(1) = 1`,
# its kernel is a congruence of the `and, or, 0, 1, ~` reduct, and the
# quotient is Boolean. The search enumerates terms by size.

# %%
from mvmodal import UnaryTerm, find_boolean_interpretation, godel_chain, lukasiewicz_chain
from mvmodal.algebra import eq_kernel, is_boolean_interpretation, is_congruence, quotient

for alg in (godel_chain(3), godel_chain(4), lukasiewicz_chain(3)):
    print(alg.name, find_boolean_interpretation(alg, max_size=9))

# %% [markdown]
# On the Lukasiewicz chains the default negation `x -> 0` breaks the
# obvious candidate. The term `3x` collapses all nonzero elements, yet
# `~(1/2) = 1/2` lands in the nonzero block while `~1 = 0` does not.

# %%
L3 = lukasiewicz_chain(3)
three_x = UnaryTerm.parse("(x -> 0) -> ((x -> 0) -> x)", L3.signature)
kernel = eq_kernel(L3, three_x)
print("blocks", kernel.blocks, "congruence:", is_congruence(L3, kernel))

# %% [markdown]
# Reading classical negation as `((x -> 0) -> x) -> 0` instead repairs it.

# %%
u = UnaryTerm.parse("((x -> 0) -> x) -> 0", L3.signature)
t = find_boolean_interpretation(L3, u, max_size=9)
print("term", t, "certified:", is_boolean_interpretation(L3, t, u))
q = quotient(L3, eq_kernel(L3, t), u)
print("quotient size", q.size, "negation table", q.table("not").tolist())
