"""
회로 텍스트 포맷 입출력

    # 주석
    qubits 3
    phase 0.25
    Z 111 0.7853981633974483
    X 011 1.5707963267948966
    CX 0 1

가젯 줄: <Z|X> <레그 비트열, 인덱스 0이 왼쪽> <각도(라디안)>
꼬리 줄: CX <control> <target> (항등행렬에 순서대로 적용)
위상 줄: phase <전역 위상(라디안)> (선택, 0이면 생략)
"""
from pathlib import Path
from typing import List, Union

from app.models.gf2 import BitVec, ParityMatrix, gauss_cnots
from app.models.phasepoly import Basis, MixedPhasePolynomial, PhaseGadget
from app.utils.errors import CircuitFormatError


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_circuit(text: str) -> MixedPhasePolynomial:
    """
    회로 텍스트를 다항식으로 파싱

    Raises:
        CircuitFormatError: 형식이 잘못된 경우 (줄 번호 포함)
    """
    n = None
    gadgets: List[PhaseGadget] = []
    tail = None
    phase = 0.0
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]

        if n is None:
            if head != "qubits" or len(tokens) != 2:
                raise CircuitFormatError("첫 구문은 'qubits <n>' 이어야 합니다", line_no)
            try:
                n = int(tokens[1])
            except ValueError:
                raise CircuitFormatError(f"큐비트 수가 정수가 아닙니다: {tokens[1]}", line_no)
            if n < 1:
                raise CircuitFormatError("큐비트 수는 1 이상이어야 합니다", line_no)
            tail = ParityMatrix.identity(n)
            continue

        try:
            if head in (Basis.Z.value, Basis.X.value):
                if len(tokens) != 3:
                    raise CircuitFormatError("가젯 줄은 '<Z|X> <legs> <angle>' 형식입니다", line_no)
                if len(tokens[1]) != n:
                    raise CircuitFormatError(f"레그 길이 {len(tokens[1])} != {n}", line_no)
                gadgets.append(PhaseGadget(Basis(head), BitVec.from_string(tokens[1]), float(tokens[2])))
            elif head == "phase":
                if len(tokens) != 2:
                    raise CircuitFormatError("위상 줄은 'phase <angle>' 형식입니다", line_no)
                phase += float(tokens[1])
            elif head == "CX":
                if len(tokens) != 3:
                    raise CircuitFormatError("꼬리 줄은 'CX <control> <target>' 형식입니다", line_no)
                tail = tail.apply_cnot(int(tokens[1]), int(tokens[2]))
            else:
                raise CircuitFormatError(f"알 수 없는 구문: {head}", line_no)
        except CircuitFormatError:
            raise
        except ValueError as e:
            raise CircuitFormatError(str(e), line_no)

    if n is None:
        raise CircuitFormatError("'qubits <n>' 선언이 없습니다")
    return MixedPhasePolynomial(n, tuple(gadgets), tail, phase)


def dump_circuit(p: MixedPhasePolynomial) -> str:
    """다항식을 회로 텍스트로 직렬화 (parse_circuit으로 전역 위상까지 같은 값이 복원됨)"""
    lines = [f"qubits {p.n}"]
    if p.global_phase != 0.0:
        lines.append(f"phase {p.global_phase!r}")
    for g in p.gadgets:
        lines.append(f"{g.basis.value} {g.legs.to_string()} {g.angle!r}")
    if p.tail != ParityMatrix.identity(p.n):
        for control, target in gauss_cnots(p.tail):
            lines.append(f"CX {control} {target}")
    return "\n".join(lines) + "\n"


def read_circuit(path: Union[str, Path]) -> MixedPhasePolynomial:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CircuitFormatError(f"회로 파일을 읽을 수 없습니다: {path} ({e})")
    return parse_circuit(text)


def write_circuit(p: MixedPhasePolynomial, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_circuit(p), encoding="utf-8")
