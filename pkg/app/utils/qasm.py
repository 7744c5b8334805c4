"""
OpenQASM 2.0 입출력 (qreg, cx, rz, rx 만 사용)

입출력 매핑은 주석 줄(// input_mapping: 0,1,2)로 함께 기록할 수 있습니다.
"""
import re
from typing import List, Optional, Sequence, Tuple

from app.models.circuit import Gate, QubitMapping
from app.utils.errors import CircuitFormatError

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

_QREG = re.compile(r"^qreg\s+(\w+)\[(\d+)\];$")
_CX = re.compile(r"^cx\s+(\w+)\[(\d+)\]\s*,\s*(\w+)\[(\d+)\];$")
_ROT = re.compile(r"^(rz|rx)\(([^)]+)\)\s+(\w+)\[(\d+)\];$")
_MAPPING = re.compile(r"^//\s*(input|output)_mapping:\s*([\d,\s]+)$")


def export_qasm(
    gates: Sequence[Gate],
    n: int,
    input_mapping: Optional[QubitMapping] = None,
    output_mapping: Optional[QubitMapping] = None,
) -> str:
    """게이트 목록을 QASM 텍스트로 (각도는 repr로 정확히 기록)"""
    lines = [HEADER.rstrip("\n")]
    if input_mapping is not None:
        lines.append(f"// input_mapping: {input_mapping.to_text()}")
    if output_mapping is not None:
        lines.append(f"// output_mapping: {output_mapping.to_text()}")
    lines.append(f"qreg q[{n}];")
    for g in gates:
        if g.is_cnot:
            lines.append(f"cx q[{g.control}],q[{g.target}];")
        else:
            lines.append(f"{g.kind.value.lower()}({g.angle!r}) q[{g.qubits[0]}];")
    return "\n".join(lines) + "\n"


def read_mappings(text: str) -> Tuple[Optional[QubitMapping], Optional[QubitMapping]]:
    """export_qasm이 남긴 매핑 주석 읽기 (없으면 None)"""
    found = {}
    for raw in text.splitlines():
        if match := _MAPPING.match(raw.strip()):
            found[match.group(1)] = QubitMapping.from_text(match.group(2))
    return found.get("input"), found.get("output")


def import_qasm(text: str) -> Tuple[List[Gate], int]:
    """
    export_qasm이 만드는 QASM 부분집합 파싱

    Returns:
        (게이트 목록, 큐비트 수)

    Raises:
        CircuitFormatError: 지원하지 않는 구문
    """
    n = None
    register = None
    gates: List[Gate] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if match := _QREG.match(line):
            if n is not None:
                raise CircuitFormatError("qreg는 하나만 지원합니다", line_no)
            register, n = match.group(1), int(match.group(2))
            continue
        if n is None:
            raise CircuitFormatError("게이트보다 qreg 선언이 먼저 와야 합니다", line_no)

        if match := _CX.match(line):
            names = {match.group(1), match.group(3)}
            qubits = (int(match.group(2)), int(match.group(4)))
            if names != {register}:
                raise CircuitFormatError(f"알 수 없는 레지스터: {names}", line_no)
            if max(qubits) >= n:
                raise CircuitFormatError(f"큐비트 인덱스가 범위를 벗어났습니다: {qubits}", line_no)
            try:
                gates.append(Gate.cnot(*qubits))
            except ValueError as e:
                raise CircuitFormatError(str(e), line_no)
        elif match := _ROT.match(line):
            kind, angle_text, name, qubit = match.groups()
            if name != register or int(qubit) >= n:
                raise CircuitFormatError(f"잘못된 큐비트: {name}[{qubit}]", line_no)
            try:
                angle = float(angle_text)
            except ValueError:
                raise CircuitFormatError(f"각도는 숫자여야 합니다: {angle_text}", line_no)
            gates.append(Gate.rz(int(qubit), angle) if kind == "rz" else Gate.rx(int(qubit), angle))
        else:
            raise CircuitFormatError(f"지원하지 않는 구문: {line}", line_no)

    if n is None:
        raise CircuitFormatError("qreg 선언이 없습니다")
    return gates, n
