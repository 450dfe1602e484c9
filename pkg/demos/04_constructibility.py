"""
Which flocks can contraction and expansion build?
=================================================

Starting from single-formula flocks over p and q, search breadth-first
through contractions and expansions. {{p}, {q}} shows up after two steps;
{{p}, {p & q}} never does within four.
"""

from flocks.flock import make_flock
from flocks.harness import explore_constructibility

print(explore_constructibility(make_flock([["p"], ["q"]]), depth=2).render())
print(explore_constructibility(make_flock([["p"], ["p & q"]]), depth=4).render())
