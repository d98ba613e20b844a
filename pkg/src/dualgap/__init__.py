"""Exact convex duality toolkit: polyhedral and cataloged convex functions,
their conjugates and eps-subdifferentials, and zero-duality-gap checks for
separable programs over subspaces and cones."""
from .calculus import (
    InfConv,
    biconjugate_check,
    conjugate,
    epi_conj_sum,
    evaluate,
    fenchel_young_gap,
    fn_sum,
    inf_conv_value,
    near_minimizer,
)
from .catalog import ParabolaConjugate, ParabolaIndicator, from_tag, halfplane_conjugate, halfplane_indicator
from .duality import (
    GapReport,
    MonotropicInstance,
    PolyCone,
    Subspace,
    bertsekas_cq_check,
    build_dual,
    closed_epigraph_check,
    duality_gap,
    gap_report,
    interiority_check,
    solve_dual,
    solve_primal,
    transversality_check,
)
from .exact import INF, NEG_INF, LpProblem, MalformedInput, lp_solve, rational
from .functions import ConvexFn, ImproperFunction, PolyhedralFn
from .gallery import run_gallery
from .instance import InstanceError, load as load_instance, loads as loads_instance
from .polyhedra import Polyhedron
from .regions import UnsupportedCombination
from .report import Report
from .subdiff import (
    Verdict,
    condition_i_check,
    condition_ii_check,
    condition_iv_check,
    decompose_subgradient,
    eps_subdiff,
    hup_sandwich_check,
    least_sufficient_K,
    subdiff,
    sum_eps_subdiffs,
    sum_rule_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
