"""
GF(2) 비트 벡터 / 패리티 행렬

패리티, 가젯 레그, CNOT 네트워크가 모두 이 모듈 위에서 돌아갑니다.
행은 64비트 워드(little-endian)로 패킹되어 있고, 행 연산은 워드 단위 XOR입니다.
값 객체는 생성 후 변경되지 않으므로 스레드 간에 그대로 넘겨도 됩니다.
"""
from typing import Iterable, Sequence, Tuple

import numpy as np

from app.utils.errors import DimensionMismatchError, InvalidQubitError, SingularMatrixError

WORD_BITS = 64
_WORD_DTYPE = np.dtype("<u8")


def _word_count(n: int) -> int:
    return max(1, (n + WORD_BITS - 1) // WORD_BITS)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """
    0/1 배열(마지막 축 = 비트)을 uint64 워드 배열로 패킹

    Args:
        bits: shape (..., n) 의 0/1 배열

    Returns:
        shape (..., ceil(n/64)) 의 uint64 배열
    """
    arr = np.asarray(bits, dtype=np.uint8) & 1
    n = arr.shape[-1]
    padded = np.zeros(arr.shape[:-1] + (_word_count(n) * WORD_BITS,), dtype=np.uint8)
    padded[..., :n] = arr
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(_WORD_DTYPE)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """pack_bits의 역변환"""
    raw = np.ascontiguousarray(words, dtype=_WORD_DTYPE).view(np.uint8)
    return np.unpackbits(raw, axis=-1, bitorder="little")[..., :n]


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise InvalidQubitError(f"큐비트 인덱스 {i}가 범위 [0, {n})를 벗어났습니다")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class BitVec:
    """길이 n의 GF(2) 벡터 (인덱스 = 큐비트)"""

    __slots__ = ("n", "_words")

    def __init__(self, n: int, words: np.ndarray):
        if n < 1:
            raise DimensionMismatchError("BitVec 길이는 1 이상이어야 합니다")
        self.n = n
        self._words = _freeze(np.array(words, dtype=_WORD_DTYPE, copy=True))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        return cls(arr.shape[-1], pack_bits(arr))

    @classmethod
    def from_string(cls, text: str) -> "BitVec":
        """'0110' 형태 (인덱스 0이 가장 왼쪽)"""
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"비트 문자열이 아닙니다: {text!r}")
        return cls.from_bits(int(ch) for ch in text)

    @classmethod
    def zeros(cls, n: int) -> "BitVec":
        return cls(n, np.zeros(_word_count(n), dtype=_WORD_DTYPE))

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVec":
        _check_index(i, n)
        bits = np.zeros(n, dtype=np.uint8)
        bits[i] = 1
        return cls.from_bits(bits)

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "BitVec":
        bits = np.zeros(n, dtype=np.uint8)
        for i in support:
            _check_index(i, n)
            bits[i] = 1
        return cls.from_bits(bits)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __getitem__(self, i: int) -> int:
        _check_index(i, self.n)
        return int((self._words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & np.uint64(1))

    def __len__(self) -> int:
        return self.n

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._words, self.n)

    def to_string(self) -> str:
        return "".join(str(b) for b in self.to_bits())

    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.to_bits()))

    @property
    def weight(self) -> int:
        return int(self.to_bits().sum())

    def is_zero(self) -> bool:
        return not self._words.any()

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise DimensionMismatchError(f"길이 불일치: {self.n} != {other.n}")
        return BitVec(self.n, self._words ^ other._words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self.n, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitVec('{self.to_string()}')"


class ParityMatrix:
    """
    n×n GF(2) 행렬. 행 i = 레지스터 i가 들고 있는 패리티

    CNOT 네트워크를 표현할 때는 항상 가역이어야 합니다 (is_invertible 로 확인).
    """

    __slots__ = ("n", "_rows")

    def __init__(self, n: int, rows: np.ndarray):
        rows = np.array(rows, dtype=_WORD_DTYPE, copy=True)
        if n < 1 or rows.shape != (n, _word_count(n)):
            raise DimensionMismatchError(f"행렬 모양이 맞지 않습니다: n={n}, rows={rows.shape}")
        self.n = n
        self._rows = _freeze(rows)

    @classmethod
    def identity(cls, n: int) -> "ParityMatrix":
        if n < 1:
            raise DimensionMismatchError("n은 1 이상이어야 합니다")
        return cls(n, pack_bits(np.eye(n, dtype=np.uint8)))

    @classmethod
    def zeros(cls, n: int) -> "ParityMatrix":
        return cls(n, np.zeros((n, _word_count(n)), dtype=_WORD_DTYPE))

    @classmethod
    def from_bits(cls, bits: Sequence[Sequence[int]]) -> "ParityMatrix":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatchError(f"정사각 행렬이 아닙니다: {arr.shape}")
        return cls(arr.shape[0], pack_bits(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec]) -> "ParityMatrix":
        n = len(rows)
        if any(r.n != n for r in rows):
            raise DimensionMismatchError("모든 행의 길이가 n이어야 합니다")
        return cls(n, np.stack([r.words for r in rows]))

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._rows, self.n)

    def row(self, i: int) -> BitVec:
        _check_index(i, self.n)
        return BitVec(self.n, self._rows[i])

    def rows(self) -> Tuple[BitVec, ...]:
        return tuple(self.row(i) for i in range(self.n))

    def _check_pair(self, control: int, target: int) -> None:
        _check_index(control, self.n)
        _check_index(target, self.n)
        if control == target:
            raise InvalidQubitError(f"control과 target이 같습니다: {control}")

    def apply_cnot(self, control: int, target: int) -> "ParityMatrix":
        """CNOT을 네트워크 뒤에 붙임: row[target] ^= row[control]"""
        self._check_pair(control, target)
        rows = self._rows.copy()
        rows[target] ^= rows[control]
        return ParityMatrix(self.n, rows)

    def prepend_cnot(self, control: int, target: int) -> "ParityMatrix":
        """CNOT을 네트워크 앞에 붙임: col[control] ^= col[target]"""
        self._check_pair(control, target)
        bits = self.to_bits()
        bits[:, control] ^= bits[:, target]
        return ParityMatrix.from_bits(bits)

    def transpose(self) -> "ParityMatrix":
        return ParityMatrix.from_bits(self.to_bits().T)

    def rank(self) -> int:
        return _eliminate(self._rows.copy(), self.n)[0]

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def invert(self) -> "ParityMatrix":
        """
        가우스-조던 소거로 역행렬 계산

        Raises:
            SingularMatrixError: 역행렬이 없는 경우
        """
        rank, _, inverse = _eliminate(self._rows.copy(), self.n, track=True)
        if rank != self.n:
            raise SingularMatrixError(f"rank {rank} < {self.n}: 가역 행렬이 아닙니다")
        return ParityMatrix(self.n, inverse)

    def __matmul__(self, other: "ParityMatrix") -> "ParityMatrix":
        if self.n != other.n:
            raise DimensionMismatchError(f"차원 불일치: {self.n} != {other.n}")
        product = (self.to_bits().astype(np.int64) @ other.to_bits().astype(np.int64)) & 1
        return ParityMatrix.from_bits(product)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParityMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._rows, other._rows)

    def __hash__(self) -> int:
        return hash((self.n, self._rows.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join("".join(map(str, r)) for r in self.to_bits())
        return f"ParityMatrix([{body}])"


def _eliminate(rows: np.ndarray, n: int, track: bool = False):
    """
    패킹된 행에 대한 가우스-조던 소거 (첫 번째 set bit 피벗, 무작위 없음)

    Returns:
        (rank, 소거된 행, track=True면 같은 행 연산을 항등행렬에 적용한 결과)
    """
    aux = pack_bits(np.eye(n, dtype=np.uint8)) if track else None
    rank = 0
    for col in range(n):
        if rank == n:
            break
        word, shift = divmod(col, WORD_BITS)
        column = ((rows[:, word] >> np.uint64(shift)) & np.uint64(1)).astype(bool)
        candidates = np.flatnonzero(column[rank:])
        if candidates.size == 0:
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            rows[[rank, pivot]] = rows[[pivot, rank]]
            column[[rank, pivot]] = column[[pivot, rank]]
            if track:
                aux[[rank, pivot]] = aux[[pivot, rank]]
        column[rank] = False
        rows[column] ^= rows[rank]
        if track:
            aux[column] ^= aux[rank]
        rank += 1
    return rank, rows, aux


def identity(n: int) -> ParityMatrix:
    return ParityMatrix.identity(n)


def apply_cnot(m: ParityMatrix, control: int, target: int) -> ParityMatrix:
    return m.apply_cnot(control, target)


def prepend_cnot(m: ParityMatrix, control: int, target: int) -> ParityMatrix:
    return m.prepend_cnot(control, target)


def invert(m: ParityMatrix) -> ParityMatrix:
    return m.invert()


def rank(m: ParityMatrix) -> int:
    return m.rank()


def replay(cnots: Iterable[Tuple[int, int]], n: int) -> ParityMatrix:
    """CNOT 목록을 항등행렬에 순서대로 apply_cnot"""
    m = ParityMatrix.identity(n)
    for control, target in cnots:
        m = m.apply_cnot(control, target)
    return m


def gauss_cnots(m: ParityMatrix) -> list:
    """
    연결 제약 없는 가우스 소거로 m을 정확히 구현하는 CNOT 목록

    m을 행 연산으로 항등행렬까지 줄인 뒤 그 연산들을 역순으로 돌려줍니다.
    replay(gauss_cnots(m), n) == m

    Raises:
        SingularMatrixError: m이 특이 행렬인 경우
    """
    bits = m.to_bits()
    n = m.n
    ops = []
    for col in range(n):
        candidates = np.flatnonzero(bits[col:, col])
        if candidates.size == 0:
            raise SingularMatrixError("특이 행렬은 CNOT 네트워크로 구현할 수 없습니다")
        pivot = col + int(candidates[0])
        if pivot != col:
            bits[col] ^= bits[pivot]
            ops.append((pivot, col))
        for row in np.flatnonzero(bits[:, col]):
            if row != col:
                bits[row] ^= bits[col]
                ops.append((col, int(row)))
    return list(reversed(ops))


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    밀집 0/1 행렬에 대해 a·x = b (mod 2) 풀이

    Args:
        a: shape (k, k) 가역 행렬
        b: shape (k,) 벡터

    Returns:
        x: shape (k,) 0/1 벡터

    Raises:
        SingularMatrixError: a가 특이 행렬인 경우
    """
    a = np.asarray(a, dtype=np.uint8) & 1
    b = np.asarray(b, dtype=np.uint8) & 1
    k = a.shape[0]
    if a.shape != (k, k) or b.shape != (k,):
        raise DimensionMismatchError(f"모양 불일치: a={a.shape}, b={b.shape}")
    if k == 0:
        return np.zeros(0, dtype=np.uint8)
    aug = np.concatenate([a, b[:, None]], axis=1)
    for col in range(k):
        candidates = np.flatnonzero(aug[col:, col])
        if candidates.size == 0:
            raise SingularMatrixError("특이 행렬: 해가 유일하지 않습니다")
        pivot = col + int(candidates[0])
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        mask = aug[:, col].astype(bool)
        mask[col] = False
        aug[mask] ^= aug[col]
    return aug[:, k].copy()


def random_invertible(n: int, rng: np.random.Generator, depth: int | None = None) -> ParityMatrix:
    """무작위 CNOT 열을 항등행렬에 적용해 가역 행렬 생성"""
    bits = np.eye(n, dtype=np.uint8)
    if n < 2:
        return ParityMatrix.from_bits(bits)
    for _ in range(depth if depth is not None else 4 * n * n):
        control, target = rng.choice(n, size=2, replace=False)
        bits[target] ^= bits[control]
    return ParityMatrix.from_bits(bits)
