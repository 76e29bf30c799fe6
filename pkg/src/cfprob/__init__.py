"""Exact counterfactual probabilities for discrete causal models.

Four readings of a counterfactual query are implemented side by side:
bounds over every canonical SCM, the potential-outcome SCM (N), the
product-form canonical SCM (GH, equal to the independent canonical SCM IC)
and the actualized-refinement semantics (B).
"""

from .errors import (CausalError, ConstraintViolationError, InvalidModelError, ModelFileError,
                     ModelTooLargeError, QuerySyntaxError, UndefinedConditionalError,
                     UnsupportedQueryError)
from .events import Atom, CounterfactualQuery
from .model import (CausalModel, Dag, Distribution, MarkovReport, Signature, check_markov, condition,
                    intervene, joint, marginal)
from .scm import Scm, World, basic_cf, complex_cf, induced_model, solve, solve_under
from .canonical import (bound_query, canonical_frame, canonical_scm, independent_canonical,
                        polytope_vertices)
from .potential import build_gh_scm, build_po_scm, n_basic, n_complex, n_conditional
from .refinement import actualize, b_basic, b_basic_closed, b_basic_def, b_complex, b_conditional
from .abstraction import Coarsening, InducedStructure, coarsen
from .query import Semantics, compare_semantics, evaluate, format_query, parse_query, prob_of_causation
from .catalog import examples_catalog

__version__ = "0.1.0"
