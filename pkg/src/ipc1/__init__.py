"""Decide, normalize and model-check one-variable intuitionistic logic."""

from .formula import (And, Bot, Formula, FormulaDag, Impl, Or, Var, length, parse, parse_dag,
                      random_formula, render, rn_formula, rn_formula_dag, to_dag)
from .kripke import (KripkeModel, canonical, check_brute, check_fast, is_directed, model_index,
                     model_indices, saturate, validate)
from .lattice import is_valid, join, leq, meet, rn_index, rn_index_dag, rpc
from .reduction import SliceGraph, apath, gen_slice_graph, mc_instance, reduce_to_model, verify_reduction
from .rnindex import BOT, TOP, RNIndex, parse_index, phi, psi
from .superint import IPC, KC, Logic, admissible, allowed_indices, check_in, classes, is_valid_in

__version__ = "0.1.0"
