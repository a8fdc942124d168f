"""Structural maps used to assemble codes from algebra elements.

* `left_regular_rep`  -- matrix of left multiplication in a cyclic algebra,
  written over its maximal subfield.
* `iterate_alpha`     -- size-doubling map (X, Y) -> [[X, theta*tau(Y)], [Y, tau(X)]].
* `distribute`        -- block-diagonal stacking X -> diag(eta^i(X)).
* `reshape_to_naf_frames` -- slice a block-diagonal codeword into the
  per-cooperation-frame transmit matrices.

Exact matrices (`FieldMatrix`, and `ScaledFieldMatrix` for entries carrying
powers of a real algebraic scale) keep construction and determinants in
exact rational arithmetic; `embed()` is the single bridge to complex
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .exactfield import FieldElement, FieldError, NumberFieldSpec


class FieldMatrix:
    """A rectangular matrix of `FieldElement` entries sharing one field."""

    def __init__(self, entries):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("FieldMatrix cannot be empty")
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0])
        f = rows[0][0].field
        for row in rows:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
            for e in row:
                if e.field is not f:
                    raise FieldError("matrix entries must share one field")
        self.field: NumberFieldSpec = f

    @classmethod
    def zero(cls, field: NumberFieldSpec, rows: int, cols: int | None = None) -> FieldMatrix:
        cols = rows if cols is None else cols
        z = field.zero()
        return cls([[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: NumberFieldSpec, n: int) -> FieldMatrix:
        one, z = field.one(), field.zero()
        return cls([[one if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_shape(other)
        return FieldMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_shape(other)
        return FieldMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> FieldMatrix:
        return FieldMatrix([[-a for a in row] for row in self.entries])

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.field.zero()
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return FieldMatrix(out)

    def scale(self, c: FieldElement | int | Fraction) -> FieldMatrix:
        return FieldMatrix([[e * c for e in row] for row in self.entries])

    def apply(self, aut: str) -> FieldMatrix:
        """Entrywise automorphism."""
        return FieldMatrix([[e.apply(aut) for e in row] for row in self.entries])

    def embed(self) -> np.ndarray:
        return np.array([[e.embed() for e in row] for row in self.entries], dtype=complex)

    def det(self) -> FieldElement:
        """Exact determinant by cofactor expansion (square matrices)."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _det_cofactor(self.entries, self.field)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def _same_shape(self, other: FieldMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self) -> str:
        body = "; ".join(", ".join(repr(e) for e in row) for row in self.entries)
        return f"FieldMatrix[{body}]"


def _det_cofactor(entries, field) -> FieldElement:
    n = len(entries)
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    acc = field.zero()
    for j in range(n):
        if entries[0][j].is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = entries[0][j] * _det_cofactor(minor, field)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


@dataclass(frozen=True)
class ScaleBase:
    """A real algebraic scale s > 0 with a known rational power: s**order = ratio."""

    label: str
    order: int
    ratio: Fraction

    @property
    def value(self) -> float:
        return float(self.ratio) ** (1.0 / self.order)


class ScaledFieldMatrix:
    """A `FieldMatrix` whose entry (i, j) is multiplied by scale**powers[i][j].

    The per-entry power pattern is part of the code structure; matrices can
    be added only when their patterns agree, which holds for all codewords
    of one code.  The exact determinant reduces total scale powers through
    ``scale**order = ratio`` and therefore stays in the base field.
    """

    def __init__(self, matrix: FieldMatrix, powers, base: ScaleBase):
        self.matrix = matrix
        self.powers = tuple(tuple(int(p) for p in row) for row in powers)
        self.base = base
        if len(self.powers) != matrix.rows or any(len(r) != matrix.cols for r in self.powers):
            raise ValueError("powers shape must match matrix shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def field(self) -> NumberFieldSpec:
        return self.matrix.field

    def _compatible(self, other: ScaledFieldMatrix) -> None:
        if self.base != other.base or self.powers != other.powers:
            raise ValueError("scaled matrices with different power patterns cannot be combined")

    def __add__(self, other: ScaledFieldMatrix) -> ScaledFieldMatrix:
        self._compatible(other)
        return ScaledFieldMatrix(self.matrix + other.matrix, self.powers, self.base)

    def __sub__(self, other: ScaledFieldMatrix) -> ScaledFieldMatrix:
        self._compatible(other)
        return ScaledFieldMatrix(self.matrix - other.matrix, self.powers, self.base)

    def scale_by(self, c) -> ScaledFieldMatrix:
        return ScaledFieldMatrix(self.matrix.scale(c), self.powers, self.base)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ScaledFieldMatrix)
            and self.base == other.base
            and self.powers == other.powers
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.matrix, self.powers, self.base))

    def embed(self) -> np.ndarray:
        v = self.base.value
        p = np.array(self.powers, dtype=float)
        return self.matrix.embed() * v ** p

    def det(self) -> FieldElement:
        """Exact determinant; every permutation's total scale power must reduce."""
        n = self.matrix.rows
        if n != self.matrix.cols:
            raise ValueError("determinant of a non-square matrix")
        f = self.field
        acc = f.zero()
        for perm in permutations(range(n)):
            term = f.one()
            skip = False
            total = 0
            for i in range(n):
                e = self.matrix.entries[i][perm[i]]
                if e.is_zero:
                    skip = True
                    break
                term = term * e
                total += self.powers[i][perm[i]]
            if skip:
                continue
            if total % self.base.order != 0:
                raise ValueError(
                    f"scale power {total} does not reduce (order {self.base.order})"
                )
            term = term * self.base.ratio ** (total // self.base.order)
            acc = acc + term if _perm_sign(perm) > 0 else acc - term
        return acc


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- algebra descriptions ------------------------------------------------------


@dataclass(frozen=True)
class CyclicAlgebraSpec:
    """Cyclic algebra (K/F, sigma, gamma) of degree n over its center."""

    field: NumberFieldSpec
    sigma: str
    gamma: FieldElement
    degree: int

    def __post_init__(self):
        if self.gamma.field is not self.field:
            raise FieldError("gamma must live in the algebra's field")
        if self.gamma.is_zero:
            raise ValueError("gamma must be nonzero")
        if self.degree % self.field.aut_order(self.sigma) != 0:
            raise ValueError("sigma**degree != id")
        if self.gamma.apply(self.sigma) != self.gamma:
            raise ValueError("gamma must be fixed by sigma")


@dataclass(frozen=True)
class IterationSpec:
    """Parameters (tau, theta) of the size-doubling iteration."""

    tau: str
    theta: FieldElement

    def validate(self, alg: CyclicAlgebraSpec) -> None:
        f = alg.field
        if self.theta.field is not f:
            raise FieldError("theta must live in the algebra's field")
        t = f.automorphism_matrix(self.tau)
        if f.aut_order(self.tau) not in (1, 2):
            raise ValueError("tau**2 != id")
        s = f.automorphism_matrix(alg.sigma)
        if _matmul_frac(t, s) != _matmul_frac(s, t):
            raise ValueError("tau does not commute with sigma")
        c = f.automorphism_matrix("conj")
        if _matmul_frac(t, c) != _matmul_frac(c, t):
            raise ValueError("tau does not commute with complex conjugation")
        if alg.gamma.apply(self.tau) != alg.gamma:
            raise ValueError("tau(gamma) != gamma")
        if self.theta.apply(self.tau) != self.theta:
            raise ValueError("tau(theta) != theta")


def _matmul_frac(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


# -- the three maps ------------------------------------------------------------


def left_regular_rep(alg: CyclicAlgebraSpec, coeffs) -> FieldMatrix:
    """Matrix of left multiplication by sum_i e^i c_i over the maximal subfield.

    Column j applies sigma^j to the cyclically shifted coefficient vector,
    with gamma multiplying the above-diagonal (wrapped) entries.
    """
    coeffs = list(coeffs)
    n = alg.degree
    if len(coeffs) != n:
        raise ValueError(f"expected {n} coefficients, got {len(coeffs)}")
    for c in coeffs:
        if c.field is not alg.field:
            raise FieldError("coefficient field does not match the algebra")
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            c = coeffs[(i - j) % n]
            for _ in range(j):
                c = c.apply(alg.sigma)
            if i < j:
                c = c * alg.gamma
            row.append(c)
        out.append(row)
    return FieldMatrix(out)


def iterate_alpha(X: FieldMatrix, Y: FieldMatrix, it: IterationSpec) -> FieldMatrix:
    """[[X, theta*tau(Y)], [Y, tau(X)]] with tau applied entrywise."""
    if X.shape != Y.shape or X.field is not Y.field:
        raise ValueError("X and Y must have equal shape over the same field")
    tX = X.apply(it.tau)
    tY = Y.apply(it.tau).scale(it.theta)
    n = X.rows
    out = []
    for i in range(n):
        out.append(list(X.entries[i]) + list(tY.entries[i]))
    for i in range(n):
        out.append(list(Y.entries[i]) + list(tX.entries[i]))
    return FieldMatrix(out)


def distribute(X, N: int, eta: str = "id"):
    """Block-diagonal stacking diag(eta^i(X)), i = 0..N-1.

    ``X`` may be a `FieldMatrix`, a `ScaledFieldMatrix`, or a complex
    ndarray (the latter only with ``eta='id'``).
    """
    if N < 1:
        raise ValueError("N must be positive")
    if isinstance(X, np.ndarray):
        if eta != "id":
            raise ValueError("automorphism twists need an exact-mode matrix")
        n = X.shape[0]
        out = np.zeros((n * N, n * N), dtype=X.dtype)
        for i in range(N):
            out[i * n:(i + 1) * n, i * n:(i + 1) * n] = X
        return out
    if isinstance(X, ScaledFieldMatrix):
        if eta != "id":
            raise ValueError("automorphism twists are not defined for scaled matrices")
        blocks = [X.matrix] * N
        powers = _blockdiag_powers(X.powers, N)
        return ScaledFieldMatrix(_blockdiag(blocks), powers, X.base)
    if eta != "id" and _aut_power_not_identity(X.field, eta, N):
        raise ValueError(f"eta**{N} != id")
    blocks = []
    cur = X
    for i in range(N):
        blocks.append(cur)
        if eta != "id" and i + 1 < N:
            cur = cur.apply(eta)
    return _blockdiag(blocks)


def _aut_power_not_identity(field: NumberFieldSpec, eta: str, N: int) -> bool:
    return N % field.aut_order(eta) != 0


def _blockdiag(blocks: list[FieldMatrix]) -> FieldMatrix:
    f = blocks[0].field
    total_r = sum(b.rows for b in blocks)
    total_c = sum(b.cols for b in blocks)
    z = f.zero()
    out = [[z] * total_c for _ in range(total_r)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b.entries[i][j]
        r0 += b.rows
        c0 += b.cols
    return FieldMatrix(out)


def _blockdiag_powers(powers, N: int):
    n = len(powers)
    out = [[0] * (n * N) for _ in range(n * N)]
    for b in range(N):
        for i in range(n):
            for j in range(n):
                out[b * n + i][b * n + j] = powers[i][j]
    return out


def reshape_to_naf_frames(X, n_s: int) -> list[np.ndarray]:
    """Slice a block-diagonal codeword into cooperation-frame matrices.

    Each diagonal block (size 2*n_s) is split into its top and bottom
    row-halves, concatenated horizontally: C_i is n_s x 4*n_s.  The input
    must be block-diagonal with square blocks of size 2*n_s.
    """
    M = X.embed() if hasattr(X, "embed") else np.asarray(X, dtype=complex)
    n = M.shape[0]
    b = 2 * n_s
    if M.shape[0] != M.shape[1] or n % b != 0:
        raise ValueError(f"matrix of size {M.shape} is not N blocks of size {b}")
    N = n // b
    mask = np.ones((n, n), dtype=bool)
    for i in range(N):
        mask[i * b:(i + 1) * b, i * b:(i + 1) * b] = False
    if np.any(np.abs(M[mask]) > 0):
        raise ValueError("matrix is not block-diagonal with the declared structure")
    frames = []
    for i in range(N):
        blk = M[i * b:(i + 1) * b, i * b:(i + 1) * b]
        frames.append(np.hstack([blk[:n_s, :], blk[n_s:, :]]))
    return frames
