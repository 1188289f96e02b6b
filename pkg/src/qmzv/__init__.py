"""Exact quasi-shuffle algebra on words and balanced multiple q-zeta values."""

from .analysis import (
    find_relations, formal_limit, numeric_limit_check, run_suite, verify_derivation,
    verify_product, verify_tau,
)
from .bimould import (
    TruncBimould, TruncPoly, check_b_symmetril, check_swap_inv, check_symmetril, check_tau_inv,
)
from .eisenstein import BalancedZetaQ, BetaTable, balanced_zeta_q, default_beta
from .qseries import QSeries, format_qseries, generic_qzeta, parse_qseries
from .quasishuffle import qshuffle, qshuffle_py
from .regmaps import phi_sharp, phi_sharp_inv, reg, swap_Ybi, tau_B, tau_PY
from .words import LinComb, Word, format_lincomb, parse_lincomb, parse_word, z

__all__ = [
    "BalancedZetaQ", "BetaTable", "LinComb", "QSeries", "TruncBimould", "TruncPoly", "Word",
    "balanced_zeta_q", "check_b_symmetril", "check_swap_inv", "check_symmetril", "check_tau_inv",
    "default_beta", "find_relations", "format_lincomb", "format_qseries", "formal_limit",
    "generic_qzeta", "numeric_limit_check", "parse_lincomb", "parse_qseries", "parse_word",
    "phi_sharp", "phi_sharp_inv", "qshuffle", "qshuffle_py", "reg", "run_suite", "swap_Ybi",
    "tau_B", "tau_PY", "verify_derivation", "verify_product", "verify_tau", "z",
]
