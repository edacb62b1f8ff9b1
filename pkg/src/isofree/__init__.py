"""isofree: free-group isomorphism and embedding decisions with certificates.

The package decides, for a finitely presented group, whether it is
isomorphic to a free group of a given rank, or embeds in one, by racing
certificate-producing semi-decision procedures under explicit budgets.
Definitive answers replay through `isofree.verify` without re-running any
search; budget exhaustion is reported as an explicit inconclusive outcome.
"""

from .kernels import BACKEND
from .words import Word, EPSILON
from .presentation import Presentation, AbelianInvariants, abelian_invariants
from .stallings import FoldedGraph, build_graph
from .word_problem import (
    Budget,
    DEFAULT_BUDGET,
    RewritingSystem,
    WordOracle,
    knuth_bendix,
    prove_trivial,
)
from .hom_search import GroupHom, find_epimorphism, restrict_to_rank
from .decision import Outcome, EmbedOutcome, decide_free, embeds_in_free

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Word", "EPSILON", "Presentation", "AbelianInvariants",
    "abelian_invariants", "FoldedGraph", "build_graph", "Budget",
    "DEFAULT_BUDGET", "RewritingSystem", "WordOracle", "knuth_bendix",
    "prove_trivial", "GroupHom", "find_epimorphism", "restrict_to_rank",
    "Outcome", "EmbedOutcome", "decide_free", "embeds_in_free", "__version__",
]
