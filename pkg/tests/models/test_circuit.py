import pytest

from app.models.circuit import Gate, GateKind, QubitMapping, SynthResult, cnot_count
from app.utils.errors import DimensionMismatchError, InvalidQubitError


class TestGate:
    def test_cnot(self):
        g = Gate.cnot(0, 2)
        assert g.kind == GateKind.CNOT
        assert (g.control, g.target) == (0, 2)
        assert g.is_cnot

    def test_cnot_same_qubit(self):
        with pytest.raises(InvalidQubitError):
            Gate.cnot(1, 1)

    def test_relabel(self):
        assert Gate.rz(0, 0.5).relabel([2, 0, 1]) == Gate.rz(2, 0.5)
        assert Gate.cnot(0, 1).relabel([2, 0, 1]) == Gate.cnot(2, 0)

    def test_cnot_count(self):
        assert cnot_count([Gate.cnot(0, 1), Gate.rx(0, 1.0), Gate.cnot(1, 0)]) == 2


class TestQubitMapping:
    def test_rejects_non_bijection(self):
        with pytest.raises(InvalidQubitError):
            QubitMapping((0, 0, 1))

    def test_then_composes_left_to_right(self):
        first = QubitMapping((1, 2, 0))
        second = QubitMapping((2, 0, 1))
        assert first.then(second).perm == (0, 1, 2)

    def test_inverse(self):
        m = QubitMapping((2, 0, 3, 1))
        assert m.then(m.inverse()).is_identity()

    def test_text(self):
        assert QubitMapping.from_text("2,0,1").to_text() == "2,0,1"
        with pytest.raises(InvalidQubitError):
            QubitMapping.from_text("0,a")

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            QubitMapping.identity(2).then(QubitMapping.identity(3))


def test_synth_result_counts_cnots():
    result = SynthResult(
        [Gate.cnot(0, 1), Gate.rz(1, 0.2), Gate.cnot(0, 1)],
        QubitMapping.identity(2),
        QubitMapping.identity(2),
    )
    assert result.cnot_count == 2
    assert result.cnots() == ((0, 1), (0, 1))
    assert result.n == 2
