"""Exact linear algebra over GF(2) and signed permutation matrices over Z.

Vectors of Z_2^g are bit-packed into Python ints: basis class ``x_i``
(1-based) lives at bit ``i - 1``.  A :class:`BitMat` stores the image of
each basis vector as one packed int, so ``M @ v`` is an XOR over the set
bits of ``v`` and products never materialise a dense array.

Matrices act on column vectors and compose functionally: ``(A @ B) @ v``
applies ``B`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class SingularMatrixError(ValueError):
    pass


class OneSidedClassError(ValueError):
    """An odd-weight class was used where a two-sided curve is required."""


def parity(x: int) -> int:
    return x.bit_count() & 1


def popcount(x: int) -> int:
    return x.bit_count()


def apply_cols(cols: Sequence[int], v: int) -> int:
    """Image of the packed vector ``v`` under the matrix with columns ``cols``."""
    out = 0
    while v:
        low = v & -v
        out ^= cols[low.bit_length() - 1]
        v ^= low
    return out


def mul_cols(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(apply_cols(a, c) for c in b)


def transvect(a: int, v: int) -> int:
    """``v + <v, a> a`` with the diagonal form."""
    return v ^ a if parity(v & a) else v


@dataclass(frozen=True, slots=True)
class BitVec:
    dim: int
    bits: int

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValueError("dimension must be positive")
        if self.bits >> self.dim:
            raise ValueError(f"bits {self.bits:#x} exceed dimension {self.dim}")

    @classmethod
    def from_indices(cls, dim: int, indices: Iterable[int]) -> BitVec:
        """Sum of the basis classes ``x_i`` for the given 1-based indices (mod 2)."""
        bits = 0
        for i in indices:
            if not 1 <= i <= dim:
                raise ValueError(f"index {i} outside 1..{dim}")
            bits ^= 1 << (i - 1)
        return cls(dim, bits)

    @classmethod
    def zero(cls, dim: int) -> BitVec:
        return cls(dim, 0)

    @property
    def indices(self) -> list[int]:
        return [i + 1 for i in range(self.dim) if self.bits >> i & 1]

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    @property
    def two_sided(self) -> bool:
        return self.weight % 2 == 0

    def __add__(self, other: BitVec) -> BitVec:
        _check_dims(self.dim, other.dim)
        return BitVec(self.dim, self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        return "+".join(f"x{i}" for i in self.indices)


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} != {b}")


def dot_form(u: BitVec, v: BitVec) -> int:
    """The mod-2 intersection pairing, ``<x_i, x_j> = delta_ij``."""
    _check_dims(u.dim, v.dim)
    return parity(u.bits & v.bits)


@dataclass(frozen=True, slots=True)
class BitMat:
    """Square GF(2) matrix; ``cols[i]`` is the packed image of ``x_{i+1}``."""

    dim: int
    cols: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.cols) != self.dim:
            raise DimensionError(f"{len(self.cols)} columns for dimension {self.dim}")
        limit = 1 << self.dim
        for c in self.cols:
            if not 0 <= c < limit:
                raise ValueError(f"column {c:#x} exceeds dimension {self.dim}")

    @classmethod
    def identity(cls, dim: int) -> BitMat:
        return cls(dim, tuple(1 << i for i in range(dim)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> BitMat:
        """Build from a dense 0/1 array indexed ``[row][col]``."""
        dim = len(rows)
        cols = []
        for j in range(dim):
            c = 0
            for i in range(dim):
                if rows[i][j] & 1:
                    c |= 1 << i
            cols.append(c)
        return cls(dim, tuple(cols))

    def to_rows(self) -> list[list[int]]:
        return [[self.cols[j] >> i & 1 for j in range(self.dim)] for i in range(self.dim)]

    def __matmul__(self, other):
        if isinstance(other, BitMat):
            return mat_mul(self, other)
        if isinstance(other, BitVec):
            _check_dims(self.dim, other.dim)
            return BitVec(self.dim, apply_cols(self.cols, other.bits))
        return NotImplemented

    def __pow__(self, n: int) -> BitMat:
        return mat_pow(self, n)

    @property
    def is_identity(self) -> bool:
        return all(c == 1 << i for i, c in enumerate(self.cols))

    def hex_rows(self) -> list[str]:
        """Row ``i`` packed as an integer (bit ``j`` = entry ``(i, j)``), in hex."""
        width = (self.dim + 3) // 4
        rows = [sum((c >> i & 1) << j for j, c in enumerate(self.cols)) for i in range(self.dim)]
        return [f"{r:0{width}x}" for r in rows]

    @property
    def is_permutation(self) -> bool:
        return sorted(self.cols) == [1 << i for i in range(self.dim)]

    def digest(self) -> str:
        import hashlib

        h = hashlib.sha256(f"{self.dim}:".encode())
        h.update(",".join(map(str, self.cols)).encode())
        return h.hexdigest()[:16]


def mat_mul(a: BitMat, b: BitMat) -> BitMat:
    _check_dims(a.dim, b.dim)
    return BitMat(a.dim, mul_cols(a.cols, b.cols))


def inverse_cols(cols: Sequence[int], dim: int) -> tuple[int, ...]:
    """Gauss-Jordan over GF(2) on packed columns.

    Works on the transpose: row ``i`` of ``work`` is column ``i`` of the
    input, augmented with the unit row ``e_i`` in the high half.
    """
    work = [c | (1 << (dim + i)) for i, c in enumerate(cols)]
    for bit in range(dim):
        pivot = next((r for r in range(bit, dim) if work[r] >> bit & 1), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        work[bit], work[pivot] = work[pivot], work[bit]
        p = work[bit]
        for r in range(dim):
            if r != bit and work[r] >> bit & 1:
                work[r] ^= p
    # Row i of (A^T)^-1 = (A^-1)^T is column i of A^-1.
    return tuple(w >> dim for w in work)


def mat_inv(a: BitMat) -> BitMat:
    return BitMat(a.dim, inverse_cols(a.cols, a.dim))


def mat_pow(a: BitMat, n: int) -> BitMat:
    base = a if n >= 0 else mat_inv(a)
    n = abs(n)
    result = BitMat.identity(a.dim)
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def rank(a: BitMat) -> int:
    rows = list(a.cols)
    r = 0
    for bit in range(a.dim):
        pivot = next((i for i in range(r, len(rows)) if rows[i] >> bit & 1), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] >> bit & 1:
                rows[i] ^= rows[r]
        r += 1
    return r


def transvection_matrix(a: BitVec) -> BitMat:
    """Mod-2 Dehn twist action ``x -> x + <x, a> a``."""
    if a.weight % 2:
        raise OneSidedClassError(f"one-sided class has no Dehn twist: {a}")
    return BitMat(a.dim, tuple(transvect(a.bits, 1 << i) for i in range(a.dim)))


def preserves_form(m: BitMat) -> bool:
    cols = m.cols
    for i in range(m.dim):
        for j in range(i, m.dim):
            if parity(cols[i] & cols[j]) != (i == j):
                return False
    return True


@dataclass(frozen=True, slots=True)
class SignedPermMat:
    """Integer matrix with entry ``(perm[i], i) = signs[i]`` and zeros elsewhere.

    ``perm`` is 0-based internally; ``P e_i = signs[i] e_{perm[i]}``.
    """

    dim: int
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.perm) != self.dim or len(self.signs) != self.dim:
            raise DimensionError("perm/signs length must equal dim")
        if sorted(self.perm) != list(range(self.dim)):
            raise ValueError(f"not a permutation: {self.perm}")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls, dim: int) -> SignedPermMat:
        return cls(dim, tuple(range(dim)), (1,) * dim)

    @classmethod
    def from_images(cls, dim: int, images: dict[int, int], signs=None) -> SignedPermMat:
        """From a 1-based map ``i -> sigma(i)``; unlisted indices are fixed."""
        perm = list(range(dim))
        for i, j in images.items():
            perm[i - 1] = j - 1
        s = tuple(signs) if signs is not None else (1,) * dim
        return cls(dim, tuple(perm), s)

    def __matmul__(self, other: SignedPermMat) -> SignedPermMat:
        _check_dims(self.dim, other.dim)
        perm = tuple(self.perm[other.perm[i]] for i in range(self.dim))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.dim))
        return SignedPermMat(self.dim, perm, signs)

    def __pow__(self, n: int) -> SignedPermMat:
        base = self if n >= 0 else self.inverse()
        result = SignedPermMat.identity(self.dim)
        for _ in range(abs(n)):
            result = result @ base
        return result

    def inverse(self) -> SignedPermMat:
        perm = [0] * self.dim
        signs = [1] * self.dim
        for i, j in enumerate(self.perm):
            perm[j] = i
            signs[j] = self.signs[i]
        return SignedPermMat(self.dim, tuple(perm), tuple(signs))

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.dim)) and all(s == 1 for s in self.signs)

    def to_dense(self) -> list[list[int]]:
        rows = [[0] * self.dim for _ in range(self.dim)]
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            rows[j][i] = s
        return rows

    def mod2(self) -> BitMat:
        return BitMat(self.dim, tuple(1 << j for j in self.perm))


def perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def int_det(p: SignedPermMat) -> int:
    sign = perm_sign(p.perm)
    for s in p.signs:
        sign *= s
    return sign


class DescentError(ValueError):
    """The map does not preserve span(w), so it has no quotient action."""


def w_eigenvalue(p: SignedPermMat) -> int:
    """``lam`` with ``P w = lam w`` for ``w = x_1 + ... + x_g``."""
    # The coefficient of P w at perm[i] is signs[i], so all signs must agree.
    lam = p.signs[0]
    if any(s != lam for s in p.signs):
        raise DescentError("does not descend to H_1(N;R): w is not an eigenvector")
    return lam


def quotient_det(p: SignedPermMat) -> int:
    """Determinant of the induced map on ``R^g / span(w)``."""
    return int_det(p) * w_eigenvalue(p)
