"""Relative entropy of coherent excitations of quasifree states, at single-particle level.

Typical use::

    from modent import SymplecticHilbertSpace, purify, decompose, modular_data, entropy_form
    pure = purify(SymplecticHilbertSpace(tau, sigma))
    dec = decompose(pure, generators)
    form = entropy_form(modular_data(dec))
    form.value(f)            # S_L(f), or math.inf
"""

from .errors import *  # noqa: F401,F403
from .families import (DerivativeReport, DmpReport, MatrixFamily, ModelFamily, PropertyReport,
                       TfTable, build_family, derivative_report, detect_jump, dmp_check,
                       property_suite, t_table)
from .modular import (EntropyForm, ModularData, abelian_entropy_part, c_function, entropy_form,
                      factorial_entropy, modular_data, modular_flow, pf_via_modular,
                      relative_entropy)
from .purification import PureSpace, complex_scalar, embed, purify
from .spaces import (SymplecticHilbertSpace, ValidationReport, direct_sum, eval_forms,
                     join_vector, split_vector, validate_space)
from .subspaces import (Decomposition, Subspace, add, complement, decompose, intersect,
                        project_components, span, symplectic_complement)

__version__ = "0.1.0"
