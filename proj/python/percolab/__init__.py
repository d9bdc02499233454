"""Invasion and critical bond percolation laboratory on Z^2.

Thin wrapper over the C++ core: exact sigma-arm detection, certified
invasion sampling, correlation lengths, and the invasion-versus-critical
comparison experiments.
"""

try:
    from percolab._core import (  # noqa: F401
        arm_probability,
        brute_force_arms,
        correlation_length,
        detect_arms,
        edge_weight,
        invasion_arm_probability,
        p_hat,
        reduce_sequence,
        theorem1_comparison,
        theorem2_comparison,
        verify_duality,
        verify_oracle_agreement,
    )
except ImportError:  # in-tree builds keep the extension next to the build dir
    from _core import (  # noqa: F401
        arm_probability,
        brute_force_arms,
        correlation_length,
        detect_arms,
        edge_weight,
        invasion_arm_probability,
        p_hat,
        reduce_sequence,
        theorem1_comparison,
        theorem2_comparison,
        verify_duality,
        verify_oracle_agreement,
    )

__all__ = [
    "arm_probability",
    "brute_force_arms",
    "correlation_length",
    "detect_arms",
    "edge_weight",
    "invasion_arm_probability",
    "p_hat",
    "reduce_sequence",
    "theorem1_comparison",
    "theorem2_comparison",
    "verify_duality",
    "verify_oracle_agreement",
]
