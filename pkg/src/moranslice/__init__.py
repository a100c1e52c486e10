"""Slices of Moran-type Sierpinski carpets by rational-slope lines.

Exact cell counts for y = (M/N) x + a through a transfer-matrix product,
checked against direct geometric counting, plus finite-depth pressure and
level-set dimension bounds.
"""
from .carpet import MoranSequence, carpet_dimension, cell_rect, digit_set, sigma_counts
from .dimension import box_dim_sequence, tail_bounds, verify_matrix_counts
from .matrices import build_matrix_closed_form, build_matrix_semantic, matrix_count, product_norm
from .multifractal import (cylinder_measure, lyapunov_estimate, pressure_estimate, spectrum_upper_bound,
                           concavity_witness)
from .slicing import Slope, count_oracle, expansion_value, gamma_lattice, greedy_expand, parse_rational

__version__ = "0.1.0"
