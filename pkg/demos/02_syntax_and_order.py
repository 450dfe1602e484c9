"""
Syntax sensitivity, and why minimal bases make deletion order matter
====================================================================
"""

from flocks import believed, contract, fukv_delete, identical, make_flock, normalize
from flocks.flock import render_flock

# ~~A and A are equivalent but distinct formulas, and flocks see the difference.
primed = make_flock([["~~A"], ["A", "B"]])
plain = make_flock([["A"], ["A", "B"]])
print("primed believes A & B:", believed(primed, "A & B"))
print("plain normalizes to", render_flock(normalize(plain)).strip())
print("plain believes A & B:", believed(plain, "A & B"))

# Contraction is order independent ...
start = make_flock([["A", "B"]])
one = contract(contract(start, "A & B"), "A")
two = contract(contract(start, "A"), "A & B")
print("contraction orders identical:", identical(one, two))

# ... deletion with inclusion-minimal reduction is not.
one = fukv_delete(fukv_delete(start, "A & B"), "A")
two = fukv_delete(fukv_delete(start, "A"), "A & B")
print("minimal-base deletion:", render_flock(one).strip(), "vs", render_flock(two).strip())
