"""Exact dense linear algebra over a prime field GF(p).

Matrices are immutable, value-semantic wrappers around integer arrays.
Every entry is kept as a canonical residue in ``[0, p)`` and every
operation reduces mod p, so results are exact for any supported modulus.
Instances never mutate after construction and may be shared freely
across threads.

Besides plain arithmetic the module provides the structured matrices
this package is built on:

* ``shift_matrix(field, q, strength)`` -- the q x q down-shift that
  drops a vector by ``q - strength`` levels (strength q is the
  identity, strength 0 annihilates),
* ``flip_matrix(field, q)`` -- the anti-diagonal permutation that
  reverses vector coordinates,
* ``block_embed(gain, q, horizon)`` -- the enlarged gain used when a
  network is unfolded over time, with the original gain placed in the
  bottom-left q x q block of a ``q*(horizon+2)`` square matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ModulusMismatchError, ShapeMismatchError

_MAX_MODULUS = 2**31 - 1
_INT64_MAX = 2**63 - 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldModulus:
    """A prime modulus p with scalar arithmetic helpers.

    Primality is checked by trial division at construction; p is capped
    at 2**31 - 1 so that single products always fit in 64-bit integers.
    """

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int):
            raise TypeError(f"modulus must be an int, got {type(self.p).__name__}")
        if not 2 <= self.p <= _MAX_MODULUS:
            raise ValueError(f"modulus must be in [2, 2**31 - 1], got {self.p}")
        if not _is_prime(self.p):
            raise ValueError(f"modulus must be prime, got {self.p}")

    def normalize(self, x: int) -> int:
        return x % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        """Multiplicative inverse via the extended Euclidean algorithm."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        r0, r1 = a, self.p
        s0, s1 = 1, 0
        while r1:
            quot = r0 // r1
            r0, r1 = r1, r0 - quot * r1
            s0, s1 = s1, s0 - quot * s1
        return s0 % self.p

    def elements(self) -> range:
        return range(self.p)

    def __str__(self) -> str:
        return f"GF({self.p})"


class GfMatrix:
    """A dense rows x cols matrix over GF(p).

    Construct through :meth:`from_rows` or the module-level factories;
    the raw constructor expects an already-reduced numpy array and is
    meant for internal use.
    """

    __slots__ = ("field", "_a")

    def __init__(self, field: FieldModulus, array: np.ndarray):
        self.field = field
        array.setflags(write=False)
        self._a = array

    # -- construction ---------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldModulus, rows: Sequence[Sequence[int]]) -> "GfMatrix":
        """Build a matrix from a row-major grid; entries are reduced mod p."""
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"expected a rectangular grid of rows, got ndim={arr.ndim}")
        return cls(field, np.mod(arr, field.p))

    # -- basic queries ---------------------------------------------------

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape  # type: ignore[return-value]

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return int(self._a[i, j])

    def to_rows(self) -> list[list[int]]:
        return self._a.tolist()

    def to_array(self) -> np.ndarray:
        """Read-only view of the underlying residue array."""
        return self._a

    def is_zero(self) -> bool:
        return not self._a.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(
            (self._a == np.eye(self.rows, dtype=np.int64)).all()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GfMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool((self._a == other._a).all())
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"GfMatrix(p={self.field.p}, {self.to_rows()})"

    # -- arithmetic --------------------------------------------------------

    def _require_same_field(self, other: "GfMatrix") -> None:
        if self.field != other.field:
            raise ModulusMismatchError(
                f"mixed moduli: GF({self.field.p}) vs GF({other.field.p})"
            )

    def __add__(self, other: "GfMatrix") -> "GfMatrix":
        if not isinstance(other, GfMatrix):
            return NotImplemented
        self._require_same_field(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"cannot add {self.shape} and {other.shape}")
        return GfMatrix(self.field, (self._a + other._a) % self.field.p)

    def __matmul__(self, other: "GfMatrix") -> "GfMatrix":
        if not isinstance(other, GfMatrix):
            return NotImplemented
        self._require_same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        # Inner products accumulate cols * (p-1)^2 before reduction; fall
        # back to arbitrary-precision integers when that cannot fit in int64.
        if self.cols and self.cols * (p - 1) * (p - 1) > _INT64_MAX:
            prod = (self._a.astype(object) @ other._a.astype(object)) % p
            return GfMatrix(self.field, prod.astype(np.int64))
        return GfMatrix(self.field, (self._a @ other._a) % p)

    def transpose(self) -> "GfMatrix":
        return GfMatrix(self.field, np.ascontiguousarray(self._a.T))

    @property
    def T(self) -> "GfMatrix":
        return self.transpose()


# -- factories -------------------------------------------------------------


def zeros(field: FieldModulus, rows: int, cols: int) -> GfMatrix:
    return GfMatrix(field, np.zeros((rows, cols), dtype=np.int64))


def identity(field: FieldModulus, n: int) -> GfMatrix:
    return GfMatrix(field, np.eye(n, dtype=np.int64))


def shift_matrix(field: FieldModulus, q: int, strength: int) -> GfMatrix:
    """Down-shift gain for a channel of the given strength.

    Returns the q x q matrix with ones on the ``q - strength`` sub-diagonal:
    the full-strength channel (strength == q) is the identity and the dead
    channel (strength == 0) is the zero matrix.
    """
    if q < 1:
        raise ValueError(f"vector length must be >= 1, got {q}")
    if not 0 <= strength <= q:
        raise ValueError(f"channel strength must be in [0, {q}], got {strength}")
    arr = np.zeros((q, q), dtype=np.int64)
    drop = q - strength
    for col in range(q - drop):
        arr[col + drop, col] = 1
    return GfMatrix(field, arr)


def flip_matrix(field: FieldModulus, q: int) -> GfMatrix:
    """The q x q anti-diagonal permutation reversing vector coordinates."""
    if q < 1:
        raise ValueError(f"vector length must be >= 1, got {q}")
    arr = np.zeros((q, q), dtype=np.int64)
    for i in range(q):
        arr[i, q - 1 - i] = 1
    return GfMatrix(field, arr)


def block_embed(gain: GfMatrix, q: int, horizon: int) -> GfMatrix:
    """Embed a q x q gain into the enlarged space used by time unfolding.

    The result is square of size ``q * (horizon + 2)``, zero except for the
    original gain in the bottom-left q x q corner.  The block sizes are
    (q, q*horizon, q): a transmitted vector carries its fresh top part, a
    state band of up to ``horizon`` stacked q-vectors, and a reserved
    bottom band that the embedded gains deliver into.
    """
    if gain.shape != (q, q):
        raise ShapeMismatchError(f"gain must be {q}x{q}, got {gain.shape}")
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    size = q * (horizon + 2)
    arr = np.zeros((size, size), dtype=np.int64)
    arr[size - q:, :q] = gain.to_array()
    return GfMatrix(gain.field, arr)


def random_matrix(field: FieldModulus, rows: int, cols: int, rng: random.Random) -> GfMatrix:
    """Uniformly random matrix; deterministic given the supplied rng."""
    arr = np.array(
        [[rng.randrange(field.p) for _ in range(cols)] for _ in range(rows)],
        dtype=np.int64,
    ).reshape(rows, cols)
    return GfMatrix(field, arr)


# -- structured queries ------------------------------------------------------


def as_shift_strength(m: GfMatrix) -> int | None:
    """Return the channel strength if ``m`` is a shift gain, else None."""
    if m.rows != m.cols:
        return None
    q = m.rows
    for strength in range(q + 1):
        if m == shift_matrix(m.field, q, strength):
            return strength
    return None


def mat_rank(m: GfMatrix) -> int:
    """Rank over GF(p) by Gaussian elimination (diagnostic helper)."""
    a = m.to_array().copy()
    p = m.field.p
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if a[r, col] % p:
                pivot = r
                break
        if pivot is None:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        inv = m.field.inv(int(a[rank, col]))
        a[rank] = (a[rank] * inv) % p
        for r in range(nrows):
            if r != rank and a[r, col] % p:
                a[r] = (a[r] - a[r, col] * a[rank]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def is_kronecker_delta_identity(grid: Sequence[Sequence[GfMatrix]]) -> bool:
    """True iff every diagonal entry of the grid is an identity matrix and
    every off-diagonal entry is all-zero.

    Diagonal entries must be square; a scaled identity does not count.
    """
    n = len(grid)
    for row in grid:
        if len(row) != n:
            raise ShapeMismatchError("grid must be square")
    for l in range(n):
        for k in range(n):
            entry = grid[l][k]
            if l == k:
                if entry.rows != entry.cols:
                    raise ShapeMismatchError(
                        f"diagonal entry ({l},{k}) must be square, got {entry.shape}"
                    )
                if not entry.is_identity():
                    return False
            elif not entry.is_zero():
                return False
    return True
