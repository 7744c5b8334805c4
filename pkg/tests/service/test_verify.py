import math

import numpy as np
import pytest

from app.models.circuit import Gate, QubitMapping
from app.models.gf2 import BitVec, random_invertible
from app.models.phasepoly import Basis, MixedPhasePolynomial, PhaseGadget, push_cnot, relabel, reverse_polynomial
from app.service.verify_service import DenseUnitary, VerifyService
from app.utils.errors import DimensionMismatchError, OracleSizeError


def _random_poly(rng, n, m):
    gadgets = []
    for _ in range(m):
        legs = rng.integers(0, 2, size=n)
        legs[rng.integers(n)] = 1
        basis = Basis.X if rng.integers(2) else Basis.Z
        gadgets.append(PhaseGadget(basis, BitVec.from_bits(legs), float(rng.uniform(0, 2 * math.pi))))
    return MixedPhasePolynomial(n, tuple(gadgets), random_invertible(n, rng))


class TestUnitaryOfGates:
    def test_empty(self):
        u = VerifyService.unitary_of_gates([], 3)
        assert np.allclose(u.matrix, np.eye(8))

    def test_cnot_is_permutation(self):
        u = VerifyService.unitary_of_gates([Gate.cnot(0, 1)], 2)
        expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        assert np.allclose(u.matrix, expected)

    def test_reversed_cnot(self):
        u = VerifyService.unitary_of_gates([Gate.cnot(1, 0)], 2)
        expected = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
        assert np.allclose(u.matrix, expected)

    def test_inverse_rotations(self):
        u = VerifyService.unitary_of_gates([Gate.rz(1, 0.7), Gate.rz(1, -0.7), Gate.rx(0, 1.1), Gate.rx(0, -1.1)], 2)
        assert np.allclose(u.matrix, np.eye(4), atol=1e-12)

    def test_unitary(self):
        gates = [Gate.rx(0, 0.3), Gate.cnot(0, 2), Gate.rz(2, 1.2), Gate.cnot(2, 1)]
        assert VerifyService.unitary_of_gates(gates, 3).is_unitary()

    def test_size_limit(self):
        with pytest.raises(OracleSizeError):
            VerifyService.unitary_of_gates([], 13)

    def test_out_of_range_gate(self):
        with pytest.raises(DimensionMismatchError):
            VerifyService.unitary_of_gates([Gate.cnot(0, 3)], 2)


class TestUnitaryOfPolynomial:
    def test_empty(self):
        u = VerifyService.unitary_of_polynomial(MixedPhasePolynomial.empty(2))
        assert np.allclose(u.matrix, np.eye(4))

    def test_weight_one_gadgets_are_rotations(self):
        p = MixedPhasePolynomial(2, (PhaseGadget.z("01", 0.4), PhaseGadget.x("10", 0.9)))
        produced = VerifyService.unitary_of_gates([Gate.rz(1, 0.4), Gate.rx(0, 0.9)], 2)
        assert VerifyService.equivalent(VerifyService.unitary_of_polynomial(p), produced)

    def test_fig1_matches_ladder_circuit(self, fig1):
        gates = [
            Gate.cnot(0, 1), Gate.cnot(1, 2), Gate.rz(2, math.pi / 4), Gate.cnot(1, 2), Gate.cnot(0, 1),
            Gate.cnot(2, 1), Gate.rx(2, math.pi / 2), Gate.cnot(2, 1),
        ]
        assert VerifyService.equivalent(
            VerifyService.unitary_of_polynomial(fig1), VerifyService.unitary_of_gates(gates, 3)
        )

    def test_push_then_prepend_is_equal(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 5))
            p = _random_poly(rng, n, 4)
            c, t = (int(q) for q in rng.choice(n, size=2, replace=False))
            pushed = VerifyService.unitary_of_polynomial(push_cnot(p, c, t)).matrix
            cnot = VerifyService.unitary_of_gates([Gate.cnot(c, t)], n).matrix
            combined = DenseUnitary(n, pushed @ cnot)
            assert VerifyService.equivalent(VerifyService.unitary_of_polynomial(p), combined)

    def test_reverse_is_inverse(self, rng):
        for _ in range(10):
            p = _random_poly(rng, 4, 5)
            forward = VerifyService.unitary_of_polynomial(p).matrix
            backward = VerifyService.unitary_of_polynomial(reverse_polynomial(p)).matrix
            assert VerifyService.equivalent(DenseUnitary(4, backward @ forward), DenseUnitary(4, np.eye(16)))
            twice = VerifyService.unitary_of_polynomial(reverse_polynomial(reverse_polynomial(p)))
            assert VerifyService.equivalent(VerifyService.unitary_of_polynomial(p), twice)

    def test_relabel_matches_mappings(self, rng):
        p = _random_poly(rng, 4, 5)
        mapping = QubitMapping((2, 0, 3, 1))
        assert VerifyService.equivalent(
            VerifyService.unitary_of_polynomial(p),
            VerifyService.unitary_of_polynomial(relabel(p, mapping)),
            mapping,
            mapping,
        )


class TestEquivalent:
    def test_same(self, fig1):
        u = VerifyService.unitary_of_polynomial(fig1)
        assert VerifyService.equivalent(u, u)

    def test_global_phase(self, fig1):
        u = VerifyService.unitary_of_polynomial(fig1)
        assert VerifyService.equivalent(u, DenseUnitary(3, np.exp(0.83j) * u.matrix))

    def test_phase_with_equal_magnitude_entries(self):
        p = MixedPhasePolynomial(2, (PhaseGadget.x("11", math.pi / 2), PhaseGadget.z("01", math.pi / 2)))
        u = VerifyService.unitary_of_polynomial(p)
        assert VerifyService.equivalent(u, DenseUnitary(2, np.exp(-2.4j) * u.matrix))

        flipped = u.matrix.copy()
        flipped[:, 3] *= -1
        assert not VerifyService.equivalent(u, DenseUnitary(2, flipped))

    def test_phase_and_mappings_together(self, rng):
        p = _random_poly(rng, 4, 6)
        mapping = QubitMapping((3, 0, 1, 2))
        moved = VerifyService.unitary_of_polynomial(relabel(p, mapping)).matrix
        assert VerifyService.equivalent(
            VerifyService.unitary_of_polynomial(p), DenseUnitary(4, np.exp(1.9j) * moved), mapping, mapping
        )

    def test_different(self, fig1):
        u = VerifyService.unitary_of_polynomial(fig1)
        other = VerifyService.unitary_of_gates([Gate.cnot(0, 1)], 3)
        assert not VerifyService.equivalent(u, other)

    def test_wrong_mapping_detected(self, rng):
        p = _random_poly(rng, 3, 4)
        u = VerifyService.unitary_of_polynomial(p)
        assert not VerifyService.equivalent(u, u, QubitMapping((1, 0, 2)), QubitMapping.identity(3))

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            VerifyService.equivalent(
                VerifyService.unitary_of_gates([], 2), VerifyService.unitary_of_gates([], 3)
            )


def test_is_compliant(line3):
    assert VerifyService.is_compliant([Gate.cnot(1, 0), Gate.rz(2, 1.0)], line3)
    assert not VerifyService.is_compliant([Gate.cnot(0, 2)], line3)
