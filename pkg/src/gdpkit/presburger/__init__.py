"""Presburger arithmetic with symbolic ord(p) constants."""
from .cells import PresCell, pres_cells
from .cooper import eliminate_exists, pres_qe
from .enumerate import box_mask, enumerate_box, eval_assignment, ord_table
from .linear import LinForm, simplify
from .recti import RectiPiece, rectilinearize

__all__ = [
    "LinForm",
    "PresCell",
    "RectiPiece",
    "box_mask",
    "eliminate_exists",
    "enumerate_box",
    "eval_assignment",
    "ord_table",
    "pres_cells",
    "pres_qe",
    "rectilinearize",
    "simplify",
]
