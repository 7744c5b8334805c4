import math

import pytest

from app.models.gf2 import ParityMatrix, random_invertible
from app.models.phasepoly import MixedPhasePolynomial, PhaseGadget
from app.utils.circuit_io import dump_circuit, parse_circuit, read_circuit, write_circuit
from app.utils.errors import CircuitFormatError
from tests.conftest import FIG1_TEXT


def test_parse_fig1(fig1):
    assert parse_circuit(FIG1_TEXT) == fig1


def test_dump_is_exact(fig1):
    assert dump_circuit(fig1) == FIG1_TEXT


def test_comments_and_blank_lines():
    text = "# 예시\n\nqubits 2  # 두 큐비트\nX 01 3.0\n"
    p = parse_circuit(text)
    assert p.gadgets == (PhaseGadget.x("01", 3.0),)


def test_tail_lines(rng):
    p = parse_circuit("qubits 3\nZ 110 1.0\nCX 0 1\nCX 2 0\n")
    assert p.tail == ParityMatrix.identity(3).apply_cnot(0, 1).apply_cnot(2, 0)

    q = MixedPhasePolynomial(4, (PhaseGadget.z("1011", math.pi / 4),), random_invertible(4, rng))
    assert parse_circuit(dump_circuit(q)) == q


def test_file_roundtrip(tmp_path, fig1):
    path = tmp_path / "fig1.txt"
    write_circuit(fig1, path)
    assert read_circuit(path) == fig1


@pytest.mark.parametrize("text,line_no", [
    ("Z 11 1.0\n", 1),
    ("qubits 2\nZ 1 0.5\n", 2),
    ("qubits 2\nY 11 0.5\n", 2),
    ("qubits 2\nZ 11 abc\n", 2),
    ("qubits 2\n\nCX 0 0\n", 3),
    ("qubits 2\nCX 0 5\n", 2),
])
def test_format_errors_carry_line(text, line_no):
    with pytest.raises(CircuitFormatError) as exc:
        parse_circuit(text)
    assert exc.value.line_no == line_no


def test_missing_header():
    with pytest.raises(CircuitFormatError):
        parse_circuit("# 비어 있음\n")


def test_singular_tail_is_impossible_from_cnots():
    p = parse_circuit("qubits 2\nCX 0 1\nCX 1 0\nCX 0 1\n")
    assert p.tail.is_invertible()


def test_missing_file(tmp_path):
    with pytest.raises(CircuitFormatError):
        read_circuit(tmp_path / "nope.txt")


def test_global_phase_roundtrip(rng):
    p = MixedPhasePolynomial(3, (PhaseGadget.x("101", 0.9),), random_invertible(3, rng), global_phase=-1.25)
    text = dump_circuit(p)
    assert "phase -1.25\n" in text
    restored = parse_circuit(text)
    assert restored == p
    assert restored.global_phase == p.global_phase


def test_zero_phase_is_omitted(fig1):
    assert "phase" not in dump_circuit(fig1)


def test_malformed_phase_line():
    with pytest.raises(CircuitFormatError) as exc:
        parse_circuit("qubits 2\nphase\n")
    assert exc.value.line_no == 2
