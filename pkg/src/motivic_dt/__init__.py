"""Exact motivic Donaldson-Thomas invariants of quivers with potential."""

from .motive import (
    L,
    ONE,
    V,
    ZERO,
    Motive,
    MotiveError,
    PoleError,
    adams,
    class_affine,
    class_gl,
    class_grassmannian,
    class_proj,
    euler_specialize,
    parse_motive,
    sigma,
)
from .quiver import Potential, Quiver, a2_quiver, cyclic_derivative, loop_quiver
from .stability import CentralCharge, SlopeKey, is_generic
from .qtorus import GradedSeries, factorize_by_slope, mul_quantum, pleth_exp, pleth_log
from .dtpipe import CHECKS, DtTable, dt_invariants, loop_dt, make_provider, reineke_closed_form, stacky_series
from .fqoracle import CountRequest, count_gl, count_representations

__version__ = "0.1.0"
