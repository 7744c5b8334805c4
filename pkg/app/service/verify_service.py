"""
밀집 유니타리 오라클 (소규모 검증용)

기저 인덱스는 빅엔디안: 큐비트 0이 가장 높은 비트입니다.
같은 유니타리인지는 전역 위상과 입출력 매핑을 무시하고 비교합니다.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from app.config.settings import get_settings
from app.models.circuit import Gate, GateKind, QubitMapping, SynthResult
from app.models.phasepoly import Basis, MixedPhasePolynomial, PhaseGadget
from app.models.topology import Topology
from app.utils.errors import DimensionMismatchError, OracleSizeError

logger = logging.getLogger(__name__)

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class DenseUnitary:
    """2^n × 2^n 복소 행렬"""

    n: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 1 << self.n

    def is_unitary(self, tol: float = 1e-9) -> bool:
        eye = np.eye(self.dim)
        return float(np.linalg.norm(self.matrix @ self.matrix.conj().T - eye)) <= tol


def _check_size(n: int) -> None:
    limit = get_settings().oracle_max_qubits
    if n > limit:
        raise OracleSizeError(f"오라클은 최대 {limit}큐비트까지 지원합니다 (요청: {n})")


def _basis_bits(n: int) -> np.ndarray:
    """(2^n, n) 배열: 인덱스 x의 큐비트 q 비트"""
    idx = np.arange(1 << n)
    return ((idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1).astype(np.int64)


def _bits_to_index(bits: np.ndarray) -> np.ndarray:
    n = bits.shape[1]
    weights = 1 << (n - 1 - np.arange(n))
    return bits @ weights


def _apply_single(state: np.ndarray, n: int, qubit: int, gate: np.ndarray) -> np.ndarray:
    """(2,)*n + (D,) 텐서의 qubit 축에 2×2 행렬 적용"""
    out = np.tensordot(gate, state, axes=([1], [qubit]))
    return np.moveaxis(out, 0, qubit)


def _apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    state = state.copy()
    index = [slice(None)] * state.ndim
    index[control] = 1
    sub = state[tuple(index)]
    axis = target if target < control else target - 1
    state[tuple(index)] = np.flip(sub, axis=axis).copy()
    return state


def _rz(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def _rx(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _apply_gadget(flat: np.ndarray, n: int, bits: np.ndarray, g: PhaseGadget) -> np.ndarray:
    legs = list(g.support())
    if g.basis == Basis.X:
        flat = _apply_layer(flat, n, legs, _HADAMARD)
    parity = bits[:, legs].sum(axis=1) & 1
    phases = np.exp(-0.5j * g.angle * (1 - 2 * parity))
    flat = phases[:, None] * flat
    if g.basis == Basis.X:
        flat = _apply_layer(flat, n, legs, _HADAMARD)
    return flat


def _apply_layer(flat: np.ndarray, n: int, qubits: Iterable[int], gate: np.ndarray) -> np.ndarray:
    dim = flat.shape[1]
    state = flat.reshape((2,) * n + (dim,))
    for q in qubits:
        state = _apply_single(state, n, q, gate)
    return state.reshape(1 << n, dim)


def _permutation_index(n: int, perm) -> np.ndarray:
    """|x⟩ → |y⟩, y[perm[q]] = x[q] 의 인덱스 사상 f(x)"""
    bits = _basis_bits(n)
    moved = np.zeros_like(bits)
    moved[:, list(perm)] = bits
    return _bits_to_index(moved)


class VerifyService:
    """밀집 유니타리 오라클"""

    @staticmethod
    def unitary_of_gates(gates: Iterable[Gate], n: int) -> DenseUnitary:
        """
        게이트 목록(시간 순)의 유니타리

        Raises:
            OracleSizeError: n이 상한을 넘는 경우
        """
        _check_size(n)
        dim = 1 << n
        state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
        for g in gates:
            if any(q >= n for q in g.qubits):
                raise DimensionMismatchError(f"게이트 {g}가 {n}큐비트 범위를 벗어났습니다")
            if g.kind == GateKind.CNOT:
                state = _apply_cnot(state, g.control, g.target)
            elif g.kind == GateKind.RZ:
                state = _apply_single(state, n, g.qubits[0], _rz(g.angle))
            else:
                state = _apply_single(state, n, g.qubits[0], _rx(g.angle))
        return DenseUnitary(n, state.reshape(dim, dim))

    @staticmethod
    def unitary_of_polynomial(p: MixedPhasePolynomial) -> DenseUnitary:
        """가젯들(리스트 순서) 다음 꼬리 네트워크의 유니타리 (전역 위상 포함)"""
        _check_size(p.n)
        n = p.n
        dim = 1 << n
        bits = _basis_bits(n)
        flat = np.eye(dim, dtype=complex)
        for g in p.gadgets:
            flat = _apply_gadget(flat, n, bits, g)
        tail = p.tail.to_bits().astype(np.int64)
        image = _bits_to_index((bits @ tail.T) & 1)
        out = np.empty_like(flat)
        out[image] = flat
        return DenseUnitary(n, np.exp(1j * p.global_phase) * out)

    @staticmethod
    def equivalent(
        a: DenseUnitary,
        b: DenseUnitary,
        in_map: Optional[QubitMapping] = None,
        out_map: Optional[QubitMapping] = None,
        tol: Optional[float] = None,
    ) -> bool:
        """
        a == Π_outᵀ · b · Π_in (전역 위상 무시) 인지 판정

        a는 논리 큐비트 기준(원래 다항식), b는 물리 레지스터 기준(합성 회로)입니다.
        Π_m은 논리 큐비트 q를 레지스터 m[q]로 옮기는 치환입니다.

        Raises:
            DimensionMismatchError: 차원이 다른 경우
        """
        if a.n != b.n:
            raise DimensionMismatchError(f"큐비트 수 불일치: {a.n} != {b.n}")
        tol = get_settings().oracle_tolerance if tol is None else tol
        n = a.n
        candidate = b.matrix
        if (in_map and not in_map.is_identity()) or (out_map and not out_map.is_identity()):
            f_in = _permutation_index(n, (in_map or QubitMapping.identity(n)).perm)
            f_out = _permutation_index(n, (out_map or QubitMapping.identity(n)).perm)
            candidate = candidate[np.ix_(f_out, f_in)]

        # a†·b의 대각 성분 중 크기가 가장 큰 것으로 위상 정렬 (등가이면 a†·b = e^{iθ}·I)
        overlap = np.einsum("ij,ij->j", a.matrix.conj(), candidate)
        phase = overlap[int(np.argmax(np.abs(overlap)))]
        if abs(phase) < 1e-12:
            return False
        phase /= abs(phase)
        return float(np.linalg.norm(candidate / phase - a.matrix)) <= tol

    @staticmethod
    def check_result(p: MixedPhasePolynomial, result: SynthResult, tol: Optional[float] = None) -> bool:
        """합성 결과가 다항식과 같은 유니타리인지 확인"""
        reference = VerifyService.unitary_of_polynomial(p)
        produced = VerifyService.unitary_of_gates(result.gates, p.n)
        return VerifyService.equivalent(reference, produced, result.input_mapping, result.output_mapping, tol)

    @staticmethod
    def is_compliant(gates: Iterable[Gate], t: Topology) -> bool:
        """모든 CNOT이 토폴로지 엣지 위에 있는지"""
        return all(t.has_edge(g.control, g.target) for g in gates if g.is_cnot)
