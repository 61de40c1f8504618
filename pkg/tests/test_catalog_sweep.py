"""Every desk-scale catalog entry (rank <= 4) through the full pipeline.

For each system and every m <= 5 the basis matrix must come out polynomial
with the right determinant, per-hyperplane membership and column degrees.
A4 dominates the runtime (dense numerators, no parity sparsity).
"""

import pytest

from multider.coxeter import get_system
from multider.derivations import p_matrix
from multider.verify import verify_degrees, verify_membership, verify_ziegler

SWEEP = [
    "A1", "A2", "A3", "A4",
    "B2", "B3", "B4",
    "D3", "D4",
    "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)",
]


@pytest.mark.parametrize("key", SWEEP)
def test_full_pipeline_m_up_to_5(key):
    system = get_system(key)
    for m in range(6):
        basis = p_matrix(system, m)
        assert verify_ziegler(system, basis).status == "pass", (key, m)
        assert verify_membership(system, basis).status == "pass", (key, m)
        assert verify_degrees(system, basis).status == "pass", (key, m)
