"""Quantum channels in the Bloch-affine picture and diagnostics of their time evolution.

The four measures are BLP non-Markovianity (:func:`blp_measure`), the RHP
divisibility integral (:func:`rhp_measure`), non-unitality
(:func:`nonunitality_measure`) and non-unital non-Markovianity
(:func:`nonunital_nm_measure`).
"""
__version__ = "0.1.0"

from .channels import (AffineMap, ChoiMatrix, KrausSet, TransferMatrix, affine_from_transfer,
                       apply_channel, choi_from_transfer, compose, is_cp, is_unital,
                       transfer_from_affine, transfer_from_kraus)
from .distances import bures_distance, fidelity, trace_distance
from .gadc import GadcParams, GadcProcessParams, gadc_kraus, gadc_process
from .measures import (OptimizerConfig, blp_measure, nonunital_nm_measure,
                       nonunitality_measure)
from .operator_basis import build_basis
from .processes import (QuantumProcess, TimeGrid, intermediate_map, rhp_g, rhp_measure,
                        tabulated_process)
from .report import MeasureReport
from .states import BlochState

__all__ = [
    "AffineMap", "BlochState", "ChoiMatrix", "GadcParams", "GadcProcessParams", "KrausSet",
    "MeasureReport", "OptimizerConfig", "QuantumProcess", "TimeGrid", "TransferMatrix",
    "affine_from_transfer", "apply_channel", "blp_measure", "build_basis", "bures_distance",
    "choi_from_transfer", "compose", "fidelity", "gadc_kraus", "gadc_process",
    "intermediate_map", "is_cp", "is_unital", "nonunital_nm_measure", "nonunitality_measure",
    "rhp_g", "rhp_measure", "tabulated_process", "trace_distance", "transfer_from_affine",
    "transfer_from_kraus",
]
