"""Closed-form models and model builders."""

from .abelian import abelian_entropy, abelian_space, complex_vector, subset_generators
from .galerkin import GalerkinU1, convergence_study, discretize_u1, vacuum_interval_entropy
from .oscillator import (arcoth, mode_generators, oscillator_entropy, oscillator_space,
                         oscillator_tf, skew_pair_data, skew_pair_family, spectral_family,
                         to_complex, to_real)
from .probes import SmoothProbe, standard_bump
from .u1 import (QuadratureParams, Reparametrization, abelian_line_family, abelian_line_tf,
                 reparametrized_tf, u1_family, u1_first_derivative, u1_kms_entropy,
                 u1_second_derivative_terms, u1_tf, u1_vacuum_entropy)
