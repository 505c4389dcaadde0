"""Computations for S-graph shifts: shift spaces given by a directed graph
whose vertices carry sets of allowed run lengths."""

from .construct import (
    BetaExpansion,
    family_member,
    greedy_beta_expansion,
    realize_entropy,
    spiced_expansion,
)
from .dynamics import has_spec, has_weak_spec, is_mixing, is_sft, is_sofic, properties, spec_constants
from .entropy import EntropyReport, entropy, gen_matrix_eval, s_gap_lambda, sft_truncation, spectral_radius
from .errors import InvariantError, SGSError
from .graph import (
    SGraph,
    build_ordered_limited,
    build_s_gap,
    build_ss_gap,
    build_unordered_limited,
    essentialize,
    load_sgraph,
    parse_sgraph,
    serialize_sgraph,
)
from .nset import NSet, parse_literal
from .transforms import edge_extend, in_split, lift, out_split, vertex_clone
from .zeta import fingerprint, least_period_counts, periodic_counts, s_gap_zeta, zeta_coeffs

__version__ = "0.1.0"
