"""Propositional Sudoku logic: grids, formulas, entailment, transformations and proofs."""

from .board import B2, B3, BoardParams, Cell, Contradiction, Grid, Prop, propagate
from .formula import And, Atom, Formula, Iff, Implies, Not, Or, BOTTOM, TOP
from .parser import ParseError, parse_formula, parse_prop_set, print_formula
from .semantics import Entailment, Validity, entails, models, valid_in_all_full
from .solver import Uniqueness, enumerate_solutions, unique_solution
from .transform import NormalForm, Transform, apply, normal_form, parse_transform
from .proof import Proof, is_axiom, verify

__version__ = "0.1.0"
