"""CLI invocations whose output is frozen under tests/golden/."""

from pathlib import Path

GOLDEN_DIR = Path(__file__).parent / "golden"

CASES = {
    "fg_qk_p3_k1": ["fg", "qk", "--p", "3", "--k", "1"],
    "fg_qk_p2_k2": ["fg", "qk", "--p", "2", "--k", "2"],
    "fg_mulby_p2_a3": ["fg", "mul-by", "--p", "2", "--a", "3", "--deg", "6", "--prec", "10"],
    "fg_log_p2": ["fg", "log", "--p", "2", "--deg", "8", "--prec", "12"],
    "fg_exp_p3": ["fg", "exp", "--p", "3", "--deg", "6", "--prec", "10"],
    "fg_add_p2": ["fg", "add", "--p", "2", "--deg", "3", "--prec", "8"],
    "fg_log_eis": ["fg", "log", "--p", "3", "--eis=-3,0,1", "--deg", "6", "--prec", "10"],
    "fg_torsion_p3_k1": ["fg", "eval-torsion", "--p", "3", "--k", "1", "--coeffs", "0,1", "--prec", "10"],
    "ring_val_u": ["ring", "val", "--p", "3", "--r", "2", "--coeffs", "0,1"],
    "ring_phi_p3": ["ring", "phi", "--p", "3", "--coeffs", "1,2,0,1"],
    "ring_psi_p3": ["ring", "psi", "--p", "3", "--coeffs", "1,2,0,1,0,0,5"],
    "ring_gamma_p3": ["ring", "gamma", "--p", "3", "--c", "2", "--coeffs", "0,1", "--deg", "6", "--prec", "8"],
    "ring_mahler_q2": ["ring", "mahler", "--q", "2", "--n", "13", "--level", "1"],
    "ring_deep_norm": ["ring", "deep-norm", "--p", "3", "--n", "5", "--level", "2"],
    "ring_orbit_u": ["ring", "orbit", "--p", "3", "--coeffs", "0,1", "--order", "3", "--deg", "6", "--prec", "8"],
    "mono_solve_trivial": ["mono", "solve", "--p", "3", "--d", "2", "--deg", "3"],
    "mono_demo_d2": ["mono", "demo", "--p", "3", "--h", "2", "--d", "2", "--deg", "4", "--prec", "12", "--seed", "1"],
}


def golden_path(name: str) -> Path:
    return GOLDEN_DIR / f"{name}.out"
