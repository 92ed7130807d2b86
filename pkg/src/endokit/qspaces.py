"""Rational vector spaces carrying a positive definite form.

These model the split-center spaces attached to Levi subgroups and the
volume-ratio coefficient of a transverse pair of subspaces.  Everything is
exact: the coefficient is stored squared so it stays rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _intlinalg as la
from .errors import AmbientMismatch, NotNested

Vec = tuple[Fraction, ...]


def _vec(v: Sequence) -> Vec:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class QSubspace:
    """Subspace of Q^n, canonicalized to reduced row echelon form."""

    ambient_dim: int
    basis: tuple[Vec, ...] = ()

    def __post_init__(self) -> None:
        for b in self.basis:
            if len(b) != self.ambient_dim:
                raise AmbientMismatch("basis vector of wrong length")
        canon = la.rref([_vec(b) for b in self.basis], self.ambient_dim)
        object.__setattr__(self, "basis", canon)

    @staticmethod
    def span(ambient_dim: int, vectors: Iterable[Sequence]) -> "QSubspace":
        return QSubspace(ambient_dim, tuple(_vec(v) for v in vectors))

    @staticmethod
    def zero(ambient_dim: int) -> "QSubspace":
        return QSubspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "QSubspace":
        return QSubspace.span(ambient_dim, [[int(i == j) for j in range(ambient_dim)] for i in range(ambient_dim)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_vector(self, v: Sequence) -> bool:
        return la.rat_solve(self.basis, _vec(v)) is not None

    def contains(self, other: "QSubspace") -> bool:
        self._check(other)
        return all(self.contains_vector(b) for b in other.basis)

    def sum(self, other: "QSubspace") -> "QSubspace":
        self._check(other)
        return QSubspace(self.ambient_dim, self.basis + other.basis)

    def _check(self, other: "QSubspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch("subspaces of different ambients")


@dataclass(frozen=True)
class QForm:
    """Symmetric positive definite rational form on Q^n."""

    gram: tuple[Vec, ...]

    def __post_init__(self) -> None:
        n = len(self.gram)
        g = tuple(_vec(r) for r in self.gram)
        object.__setattr__(self, "gram", g)
        for r in g:
            if len(r) != n:
                raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        for k in range(1, n + 1):
            if _det([row[:k] for row in g[:k]]) <= 0:
                raise ValueError("gram matrix must be positive definite")

    @staticmethod
    def standard(n: int) -> "QForm":
        return QForm(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def inner(self, v: Sequence, w: Sequence) -> Fraction:
        vv, ww = _vec(v), _vec(w)
        n = self.dim
        if len(vv) != n or len(ww) != n:
            raise AmbientMismatch("vector length does not match the form")
        total = Fraction(0)
        for i in range(n):
            if vv[i] == 0:
                continue
            row = self.gram[i]
            total += vv[i] * sum((row[j] * ww[j] for j in range(n) if ww[j] != 0), Fraction(0))
        return total


def _det(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


@dataclass(frozen=True)
class DSquared:
    """Square of a volume-ratio coefficient; zero encodes a degenerate pair."""

    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise ValueError("a squared volume ratio cannot be negative")

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __mul__(self, other: "DSquared") -> "DSquared":
        return DSquared(self.value * other.value)


def relative_space(a_big: QSubspace, a_small: QSubspace, form: QForm) -> QSubspace:
    """Form-orthogonal complement of a_small inside a_big."""
    a_big._check(a_small)
    if form.dim != a_big.ambient_dim:
        raise AmbientMismatch("form dimension does not match the ambient")
    if not a_big.contains(a_small):
        raise NotNested("small space is not contained in the big one")
    if a_small.dim == 0:
        return a_big
    # v = c . basis(a_big) with <v, s> = 0 for all s in basis(a_small)
    rows = []
    for b in a_big.basis:
        rows.append(tuple(form.inner(b, s) for s in a_small.basis))
    ker = la.rat_kernel(rows, a_small.dim)
    vecs = []
    for k in ker:
        v = [Fraction(0)] * a_big.ambient_dim
        for coef, b in zip(k, a_big.basis):
            if coef:
                v = [x + coef * y for x, y in zip(v, b)]
        vecs.append(v)
    return QSubspace.span(a_big.ambient_dim, vecs)


def d_coefficient(am_rel: QSubspace, al_rel: QSubspace, ar_rel: QSubspace, form: QForm) -> DSquared:
    """Squared volume distortion of the transverse-sum map.

    The inputs are the spaces of am, al, ar relative to the common ambient
    group; the coefficient is nonzero iff am_rel (+) al_rel = ar_rel, in
    which case it is the squared volume ratio of summing the complements of
    am_rel and al_rel inside ar_rel.
    """
    for sub in (am_rel, al_rel):
        if not ar_rel.contains(sub):
            raise NotNested("relative spaces must sit inside the third argument")
    if am_rel.dim + al_rel.dim != ar_rel.dim:
        return DSquared(Fraction(0))
    if am_rel.sum(al_rel).dim != ar_rel.dim:
        return DSquared(Fraction(0))
    u = relative_space(ar_rel, am_rel, form).basis
    v = relative_space(ar_rel, al_rel, form).basis
    both = u + v
    num = _det([[form.inner(a, b) for b in both] for a in both])
    den_u = _det([[form.inner(a, b) for b in u] for a in u])
    den_v = _det([[form.inner(a, b) for b in v] for a in v])
    return DSquared(num / (den_u * den_v))
