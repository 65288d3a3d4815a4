"""Exact-arithmetic Nash equilibrium solvers for bimatrix games."""
from .game import BimatrixGame, StrategyProfile, epsilon, metrics, verify_ne
from .generators import GenSpec, generate
from .lemke import RRLConfig, lemke_solve, rr_l
from .lh import RestartConfig, enumerate_paths, lh_solve, rr_lh
from .lsv import LSVConfig, eval_f, ls_v
from .oracle import enumerate_equilibria
from .perturb import PerturbSpec, ip_lh, perturb

__all__ = [
    "BimatrixGame", "StrategyProfile", "epsilon", "metrics", "verify_ne",
    "GenSpec", "generate", "RRLConfig", "lemke_solve", "rr_l",
    "RestartConfig", "enumerate_paths", "lh_solve", "rr_lh",
    "LSVConfig", "eval_f", "ls_v", "enumerate_equilibria",
    "PerturbSpec", "ip_lh", "perturb",
]
