"""
Checking flock operations against explicit epistemic states
===========================================================

Every flock generates a finite epistemic state: its subsets ordered by
inclusion. The functions in ``flocks.estate`` work on those states directly.
"""

from flocks import estate, flock
from flocks.flock import make_flock
from flocks.harness import TrialConfig, run_check

F = make_flock([["A"], ["B"]])
G = make_flock([["C"]])

E = estate.generate(F)
print(estate.dump(E))
print("persistent:", estate.is_persistent(E), " determinate:", estate.is_determinate(E))

# Pure merge of the generated states (with their bottom states) matches
# the pairwise union of bases.
product = estate.pure_merge(estate.generate(F, True), estate.generate(G, True))
print("merge isomorphic:",
      estate.isomorphic(product, estate.generate(flock.merge(F, G), True)))

# Contracting the state removes exactly what flock contraction removes.
lhs = estate.contract_estate(estate.generate(F), "A")
rhs = estate.generate(flock.contract(F, "A"))
print("contraction agrees:", lhs == rhs)

# A bounded behavioural test: do any two contractions tell these apart?
E1 = estate.generate(make_flock([["~~B", "A"], ["~~B", "B"]]))
E2 = estate.generate(make_flock([["~~B", "A"], ["B"]]))
print("indistinguishable up to 2 contractions:", estate.behaviorally_equivalent(E1, E2, 2))

# The harness runs these comparisons on random instances.
print(run_check("theorem-merge", TrialConfig(trials=50, atoms=4)).render())
