"""Iterated non-prioritized belief change with flocks of bases.

Flocks (sets of bases) are the constructive side; explicit epistemic
states in :mod:`flocks.estate` are the semantic side used to check them.
"""
from .errors import (EmptyFlock, FlocksError, FlockSyntaxError, FormulaSyntaxError,
                     NotDisjoint, OccursInFlock, SignatureTooLarge, TautologyContraction,
                     TooLarge)
from .flock import (belief_formula, believed, contract, expand, fukv_delete,
                    fukv_normalize, identical, make_flock, merge, normalize, parse_flock,
                    remainders, render_flock, revise)
from .logic import (entails, equivalent, freshen, is_tautology, parse_formula,
                    render_formula, signature)

__version__ = "0.1.0"
