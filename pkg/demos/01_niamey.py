"""
Contracting and re-expanding the Niamey beliefs
===============================================

A: Niamey is a town in Nigeria.  B: there is a university in Niamey.
Two friends told us A and B; we then have to give up "A and B".
"""

from flocks import belief_formula, believed, contract, expand, make_flock, render_flock

start = make_flock([["A", "B"]])

# Giving up A & B keeps both alternatives instead of their (empty) intersection.
after_ab = contract(start, "A & B")
print(render_flock(after_ab))
print("beliefs:", belief_formula(after_ab))

# Ruling out A afterwards leaves B.
print("then contract A:", belief_formula(contract(after_ab, "A")))

# New support for B. B already occurs, so an equivalent ~~B is added instead.
expanded, used = expand(after_ab, "B", auto_freshen=True)
print("added", used)
print(render_flock(expanded))
print("A & B believed?", believed(expanded, "A & B"))

# Dropping B again brings A back.
print("then contract B:", render_flock(contract(expanded, "B")))
