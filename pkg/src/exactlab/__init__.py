"""Exact structures, ideals and Auslander-Reiten theory for Dynkin quivers and the Kronecker quiver."""

from .repcore import Conflation, MorphismRep, Quiver, Rep
from .arknit import ARData, dynkin_quiver, knit
from .exstruct import ExactStructure, e_bot, e_top, enumerate_all, generate
from .idealcalc import Ideal, OrdinalExpr, ideal_from_add, ideal_generate, radical_ideal

__version__ = "0.1.0"

__all__ = [
    "ARData",
    "Conflation",
    "ExactStructure",
    "Ideal",
    "MorphismRep",
    "OrdinalExpr",
    "Quiver",
    "Rep",
    "dynkin_quiver",
    "e_bot",
    "e_top",
    "enumerate_all",
    "generate",
    "ideal_from_add",
    "ideal_generate",
    "knit",
    "radical_ideal",
]
