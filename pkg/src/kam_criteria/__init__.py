"""
kam-criteria: Numerical Invariant-Circle Criteria for Twist Maps

Desk-scale machinery for exact area-preserving twist maps generated by
G_n(x, x') = (x - x')^2 / 2 + q_n^-(4+eps) V(q_n x') with a constant-type
rotation number alpha. Solves Birkhoff periodic minimizers that stand in for
the Aubry-Mather set, samples the dyadic chord families, tabulates the K0 / K1
/ K2 distortion hierarchy and evaluates Criteria 1-3 together with the
conditions R_kappa, S_kappa and T_kappa.

Key Features:
    - Extended-precision continued fractions and the kappa indexing machinery
    - Sparse bordered-Newton Birkhoff solver with a brute-force oracle
    - Seeded, prefix-nested chord / pair / quadruple sampling
    - Deterministic, resumable experiment sweeps with JSON / CSV reports
"""

__version__ = "0.3.0"
__author__ = "Justin Arndt"
__email__ = "justin@example.com"

from .conditions import CriterionReport, evaluate_conditions
from .config import ExperimentConfig, load_config, preset_config
from .distortion import DistortionTable, tabulate_kappa
from .number_theory import (
    ConstantTypeIrrational,
    circle_norm,
    from_partial_quotients,
    kappa_of_n,
    kappa_windows,
    preset,
    qalpha_norm,
)
from .pipeline import run_criteria, run_sweep
from .report import emit_report
from .store import RecordStore, RunRecord
from .twist_map import Potential, TwistMap, default_potential
from .variational import Configuration, birkhoff_minimize, minimal_window

__all__ = [
    "ConstantTypeIrrational",
    "from_partial_quotients",
    "preset",
    "circle_norm",
    "qalpha_norm",
    "kappa_of_n",
    "kappa_windows",
    "Potential",
    "TwistMap",
    "default_potential",
    "Configuration",
    "birkhoff_minimize",
    "minimal_window",
    "DistortionTable",
    "tabulate_kappa",
    "CriterionReport",
    "evaluate_conditions",
    "ExperimentConfig",
    "load_config",
    "preset_config",
    "RunRecord",
    "RecordStore",
    "run_criteria",
    "run_sweep",
    "emit_report",
    "__version__",
]
