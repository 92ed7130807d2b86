"""Endoscopic data and class correspondences for the groups in the catalog.

The metaplectic-type side works with a Levi datum (GL block sizes plus a
symplectic remainder); an elliptic datum is a splitting of the remainder,
and the data lying over it are sign vectors on the blocks.  Semisimple
classes are handled purely through eigenvalue multisets.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .catalog import (
    FactorType,
    GroupType,
    LeviDatum,
    a_dimension,
    assemble_diag,
    center_rows,
    gl,
    so_even,
    so_odd,
    sp,
    u,
)
from .errors import InvalidSemisimpleProfile, InvariantViolation, UnsupportedFactor
from .lattices import DiagSubgroup, diag_index
from .rootsofunity import Scalar, as_scalar, sc_inv, sc_is_minus_one, sc_is_one, sc_key, sc_neg


# ---------------------------------------------------------------------------
# eigenvalue multisets


@dataclass(frozen=True)
class EigenMultiset:
    """Multiset of exact nonzero scalars, canonically sorted."""

    entries: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        ent = tuple(sorted((as_scalar(x) for x in self.entries), key=sc_key))
        object.__setattr__(self, "entries", ent)

    @staticmethod
    def of(entries: Iterable) -> "EigenMultiset":
        ms = EigenMultiset(tuple(entries))
        for x in ms.entries:
            if isinstance(x, Fraction) and x == 0:
                raise InvariantViolation("multiplicative eigenvalues must be nonzero")
        return ms

    @staticmethod
    def additive(entries: Iterable) -> "EigenMultiset":
        """Additive multiset (Lie-algebra side): rational, negation closed."""
        ms = EigenMultiset(tuple(entries))
        c = ms.counter()
        for x, k in c.items():
            if not isinstance(x, Fraction):
                raise InvariantViolation("additive multisets must be rational")
            if c[-x] != k:
                raise InvariantViolation("additive multisets must be closed under negation")
        return ms

    @staticmethod
    def symplectic(entries: Iterable) -> "EigenMultiset":
        ms = EigenMultiset.of(entries)
        c = ms.counter()
        for x, k in c.items():
            if c[sc_inv(x)] != k:
                raise InvariantViolation("symplectic multiset must be inversion closed")
            if (sc_is_one(x) or sc_is_minus_one(x)) and k % 2:
                raise InvariantViolation("symplectic multiset needs even multiplicity at +-1")
        if len(ms.entries) % 2:
            raise InvariantViolation("symplectic multiset must have even cardinality")
        return ms

    @staticmethod
    def odd_orthogonal(entries: Iterable) -> "EigenMultiset":
        ms = EigenMultiset.of(entries)
        c = ms.counter()
        for x, k in c.items():
            if c[sc_inv(x)] != k:
                raise InvariantViolation("orthogonal multiset must be inversion closed")
            if sc_is_minus_one(x) and k % 2:
                raise InvariantViolation("orthogonal multiset needs even multiplicity at -1")
        ones = sum(k for x, k in c.items() if sc_is_one(x))
        if ones % 2 != 1:
            raise InvariantViolation("odd orthogonal multiset must contain +1 with odd multiplicity")
        if len(ms.entries) % 2 != 1:
            raise InvariantViolation("odd orthogonal multiset must have odd cardinality")
        return ms

    def counter(self) -> Counter:
        return Counter(self.entries)

    def size(self) -> int:
        return len(self.entries)

    def remove_one(self, value: Scalar) -> "EigenMultiset":
        c = self.counter()
        if c[value] == 0:
            raise InvariantViolation("cannot remove an absent eigenvalue")
        c[value] -= 1
        return EigenMultiset(tuple(c.elements()))

    def negate(self) -> "EigenMultiset":
        return EigenMultiset(tuple(sc_neg(x) for x in self.entries))

    def union(self, other: "EigenMultiset") -> "EigenMultiset":
        return EigenMultiset(self.entries + other.entries)

    def with_inverses(self) -> "EigenMultiset":
        """The multiset together with all inverses (GL block seen in Sp/SO)."""
        return EigenMultiset(self.entries + tuple(sc_inv(x) for x in self.entries))


# ---------------------------------------------------------------------------
# elliptic data of metaplectic type


@dataclass(frozen=True)
class EllipticDatumMeta:
    """Splitting (m', m'') of the symplectic remainder."""

    m_prime: int
    m_dblprime: int

    def __post_init__(self) -> None:
        if self.m_prime < 0 or self.m_dblprime < 0:
            raise ValueError("datum parts must be nonnegative")

    @property
    def total(self) -> int:
        return self.m_prime + self.m_dblprime


def elliptic_data_meta(m: int) -> tuple[EllipticDatumMeta, ...]:
    """All elliptic data over a rank-m metaplectic factor: m+1 splittings."""
    if m < 0:
        raise ValueError("rank must be >= 0")
    return tuple(EllipticDatumMeta(k, m - k) for k in range(m + 1))


def endoscopic_group_meta(levi: LeviDatum, datum: EllipticDatumMeta) -> GroupType:
    if datum.total != levi.remainder:
        raise InvariantViolation("datum does not split the symplectic remainder")
    factors = [gl(s) for s in levi.sizes]
    factors += [so_odd(datum.m_prime), so_odd(datum.m_dblprime)]
    return GroupType(tuple(factors))


@dataclass(frozen=True)
class SElement:
    """Datum over a fixed elliptic base: a sign vector on the GL blocks."""

    levi: LeviDatum
    base: EllipticDatumMeta
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.base.total != self.levi.remainder:
            raise InvariantViolation("base datum does not match the Levi remainder")
        if len(self.signs) != self.levi.block_count:
            raise InvariantViolation("one sign per GL block is required")
        if any(s not in (1, -1) for s in self.signs):
            raise InvariantViolation("signs must be +-1")

    @property
    def i_prime(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signs) if s == 1)

    @property
    def i_dblprime(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signs) if s == -1)

    @property
    def n_prime(self) -> int:
        return self.base.m_prime + sum(self.levi.sizes[i] for i in self.i_prime)

    @property
    def n_dblprime(self) -> int:
        return self.base.m_dblprime + sum(self.levi.sizes[i] for i in self.i_dblprime)


def e_set(levi: LeviDatum, s0: EllipticDatumMeta) -> tuple[SElement, ...]:
    """All data over s0: one sign vector per subset of the blocks."""
    out = []
    for signs in itertools.product((1, -1), repeat=levi.block_count):
        out.append(SElement(levi, s0, signs))
    return tuple(out)


@dataclass(frozen=True)
class GOfS:
    """Endoscopic group attached to a sign vector, with its Levi placement."""

    group: GroupType
    n_prime: int
    n_dblprime: int
    i_prime: tuple[int, ...]
    i_dblprime: tuple[int, ...]


def g_of_s(s: SElement) -> GOfS:
    return GOfS(
        GroupType.of(so_odd(s.n_prime), so_odd(s.n_dblprime)),
        s.n_prime,
        s.n_dblprime,
        s.i_prime,
        s.i_dblprime,
    )


@dataclass(frozen=True)
class ZTorsion:
    """Central order-two element: a sign per GL block, +1 on the remainder."""

    signs: tuple[int, ...]

    def apply(self, gl_blocks: Sequence[EigenMultiset]) -> tuple[EigenMultiset, ...]:
        if len(gl_blocks) != len(self.signs):
            raise InvariantViolation("one multiset per GL block is required")
        return tuple(
            ms.negate() if z == -1 else ms for ms, z in zip(gl_blocks, self.signs)
        )

    @property
    def is_identity(self) -> bool:
        return all(z == 1 for z in self.signs)


def z_torsion(s: SElement) -> ZTorsion:
    return ZTorsion(s.signs)


# ---------------------------------------------------------------------------
# class correspondences


def correspond_mu(
    gamma_prime: EigenMultiset, gamma_dblprime: EigenMultiset, datum: EllipticDatumMeta
) -> EigenMultiset:
    """Image multiset of a pair of odd orthogonal classes in the symplectic side.

    Drop one eigenvalue 1 from each side, keep the first side, negate the
    second side.
    """
    if gamma_prime.size() != 2 * datum.m_prime + 1:
        raise InvariantViolation("first multiset does not match the datum")
    if gamma_dblprime.size() != 2 * datum.m_dblprime + 1:
        raise InvariantViolation("second multiset does not match the datum")
    EigenMultiset.odd_orthogonal(gamma_prime.entries)
    EigenMultiset.odd_orthogonal(gamma_dblprime.entries)
    one_p = next(x for x in gamma_prime.entries if sc_is_one(x))
    one_d = next(x for x in gamma_dblprime.entries if sc_is_one(x))
    part1 = gamma_prime.remove_one(one_p)
    part2 = gamma_dblprime.remove_one(one_d).negate()
    return EigenMultiset.symplectic(part1.entries + part2.entries)


def correspond_mu1_check(
    gl_blocks: Sequence[EigenMultiset],
    gamma_prime: EigenMultiset,
    gamma_dblprime: EigenMultiset,
    s: SElement,
) -> bool:
    """Two routes to the big symplectic class agree after the central twist.

    Route one embeds the class into the endoscopic group of the big datum
    and applies its correspondence; route two twists by the torsion element,
    applies the Levi-level correspondence, then induces up.
    """
    if len(gl_blocks) != s.levi.block_count:
        raise InvariantViolation("one multiset per GL block is required")
    for ms, size in zip(gl_blocks, s.levi.sizes):
        if ms.size() != size:
            raise InvariantViolation("GL block multiset of wrong size")
    # route 1: include into the two odd orthogonal factors, then correspond
    prime_side = list(gamma_prime.entries)
    dbl_side = list(gamma_dblprime.entries)
    for i in s.i_prime:
        prime_side.extend(gl_blocks[i].with_inverses().entries)
    for i in s.i_dblprime:
        dbl_side.extend(gl_blocks[i].with_inverses().entries)
    big = correspond_mu(
        EigenMultiset.odd_orthogonal(prime_side),
        EigenMultiset.odd_orthogonal(dbl_side),
        EllipticDatumMeta(s.n_prime, s.n_dblprime),
    )
    # route 2: twist the GL blocks, correspond at the Levi level, induce up
    twisted = z_torsion(s).apply(gl_blocks)
    sp_part = correspond_mu(gamma_prime, gamma_dblprime, s.base)
    small = list(sp_part.entries)
    for ms in twisted:
        small.extend(ms.with_inverses().entries)
    return big == EigenMultiset.symplectic(small)


def correspond_lie(y_prime: EigenMultiset, y_dblprime: EigenMultiset) -> EigenMultiset:
    """Additive variant: drop one zero from each side and take the union."""
    out = []
    for ms in (y_prime, y_dblprime):
        EigenMultiset.additive(ms.entries)
        c = Counter(ms.entries)
        if len(ms.entries) % 2 != 1 or c[Fraction(0)] % 2 != 1:
            raise InvariantViolation("each side must contain zero with odd multiplicity")
        c[Fraction(0)] -= 1
        out.extend(c.elements())
    return EigenMultiset.additive(out)


# ---------------------------------------------------------------------------
# index coefficients


def _meta_layout(levi: LeviDatum, datum: EllipticDatumMeta) -> tuple[int, list, list, list]:
    """Shared coordinates for the Levi's endoscopic group.

    Returns (ambient, gl_coords per block, prime side coords, dbl side coords).
    """
    pos = 0
    gl_coords = []
    for size in levi.sizes:
        gl_coords.append(tuple(range(pos, pos + size)))
        pos += size
    prime = tuple(range(pos, pos + datum.m_prime))
    pos += datum.m_prime
    dbl = tuple(range(pos, pos + datum.m_dblprime))
    pos += datum.m_dblprime
    return pos, gl_coords, list(prime), list(dbl)


def i_meta(levi: LeviDatum, s0: EllipticDatumMeta, s: SElement) -> Fraction:
    """Index ratio attached to a datum over s0.

    Numerator: the fixed dual center of the Levi's endoscopic group over the
    designated center of the metaplectic-type Levi.  Denominator: the same
    for the big group and the datum's endoscopic group.
    """
    if s.levi != levi or s.base != s0:
        raise InvariantViolation("the datum does not lie over the given base")
    ambient, gl_coords, prime, dbl = _meta_layout(levi, s0)
    rows_m = []
    rows_meta = []
    for coords in gl_coords:
        rows_m.extend(center_rows("torus", coords))
        rows_meta.extend(center_rows("torus", coords))
    rows_m.extend(center_rows("mu2", tuple(prime)))
    rows_m.extend(center_rows("mu2", tuple(dbl)))
    rows_meta.extend(center_rows("none", tuple(prime + dbl)))
    z_m = assemble_diag(ambient, rows_m)
    z_meta = assemble_diag(ambient, rows_meta)
    num = diag_index(z_m, z_meta)

    prime_all = sorted(prime + [c for i in s.i_prime for c in gl_coords[i]])
    dbl_all = sorted(dbl + [c for i in s.i_dblprime for c in gl_coords[i]])
    rows_g = center_rows("mu2", tuple(prime_all)) + center_rows("mu2", tuple(dbl_all))
    z_g = assemble_diag(ambient, rows_g)
    den = diag_index(z_g, DiagSubgroup.trivial(ambient))
    return num / den


# ---------------------------------------------------------------------------
# elliptic data of the classical factors


@dataclass(frozen=True)
class SpEllipticDatum:
    """Elliptic datum of a symplectic factor: Sp part plus an even form."""

    m_prime: int
    even_rank: int
    even_class: str = "split"

    def __post_init__(self) -> None:
        if self.m_prime < 0 or self.even_rank < 0:
            raise ValueError("datum parts must be nonnegative")
        if self.even_rank == 0 and self.even_class != "split":
            object.__setattr__(self, "even_class", "split")
        if self.even_rank == 1 and self.even_class == "split":
            raise InvariantViolation("the split rank-one even part is not elliptic")

    @property
    def total(self) -> int:
        return self.m_prime + self.even_rank


def sp_elliptic_data(m: int) -> tuple[SpEllipticDatum, ...]:
    out = []
    for mp in range(m, -1, -1):
        me = m - mp
        if me == 0:
            out.append(SpEllipticDatum(mp, 0))
        elif me == 1:
            out.append(SpEllipticDatum(mp, 1, "unram_nonsplit"))
            out.append(SpEllipticDatum(mp, 1, "ramified"))
        else:
            out.append(SpEllipticDatum(mp, me, "split"))
            out.append(SpEllipticDatum(mp, me, "unram_nonsplit"))
            out.append(SpEllipticDatum(mp, me, "ramified"))
    return tuple(out)


@dataclass(frozen=True)
class UEllipticDatum:
    """Elliptic datum of a unitary factor: an unordered splitting of the rank."""

    m_prime: int
    m_dblprime: int

    def __post_init__(self) -> None:
        if self.m_prime < 0 or self.m_dblprime < 0:
            raise ValueError("datum parts must be nonnegative")
        a, b = self.m_prime, self.m_dblprime
        if a < b:
            object.__setattr__(self, "m_prime", b)
            object.__setattr__(self, "m_dblprime", a)

    @property
    def total(self) -> int:
        return self.m_prime + self.m_dblprime


def u_elliptic_data(m: int) -> tuple[UEllipticDatum, ...]:
    return tuple(UEllipticDatum(m - k, k) for k in range(m // 2 + 1))


# ---------------------------------------------------------------------------
# normal form of a general datum


@dataclass(frozen=True)
class SemisimpleProfile:
    """Eigenvalue profile of a dual element: labels plus +-1 multiplicities.

    Each label stands for one inverse-pair of eigenvalues distinct from +-1;
    distinct labels are assumed pairwise distinct and non-inverse.
    """

    label_mults: tuple[int, ...]
    plus_pairs: int
    minus_pairs: int

    def __post_init__(self) -> None:
        if any(k < 1 for k in self.label_mults):
            raise InvalidSemisimpleProfile("label multiplicities must be >= 1")
        if self.plus_pairs < 0 or self.minus_pairs < 0:
            raise InvalidSemisimpleProfile("pair counts must be nonnegative")

    @property
    def rank(self) -> int:
        return sum(self.label_mults) + self.plus_pairs + self.minus_pairs


def datum_to_levi(profile: SemisimpleProfile) -> tuple[LeviDatum, EllipticDatumMeta]:
    """Unique Levi class and elliptic datum inducing the given profile."""
    m = profile.plus_pairs + profile.minus_pairs
    return (
        LeviDatum(profile.label_mults, m),
        EllipticDatumMeta(profile.plus_pairs, profile.minus_pairs),
    )


# ---------------------------------------------------------------------------
# the Levi-ascent construction for classical ambients


@dataclass(frozen=True)
class ArthurConfig:
    """A Levi of a single classical ambient factor plus a core datum.

    ``ambient`` is a symplectic or unitary factor; the Levi is the product
    of GL blocks of the given sizes with the core the datum splits.
    """

    ambient: FactorType
    block_sizes: tuple[int, ...]
    sp_datum: SpEllipticDatum | None = None
    u_datum: UEllipticDatum | None = None

    def __post_init__(self) -> None:
        if self.ambient.kind == "sp":
            if self.sp_datum is None or self.u_datum is not None:
                raise UnsupportedFactor("a symplectic ambient needs a symplectic datum")
            core = self.ambient.rank - sum(self.block_sizes)
            if core < 0 or self.sp_datum.total != core:
                raise InvariantViolation("datum does not split the core")
        elif self.ambient.kind == "u":
            if self.u_datum is None or self.sp_datum is not None:
                raise UnsupportedFactor("a unitary ambient needs a unitary datum")
            core = self.ambient.rank - 2 * sum(self.block_sizes)
            if core < 0 or self.u_datum.total != core:
                raise InvariantViolation("datum does not split the core")
        else:
            raise UnsupportedFactor("only symplectic and unitary ambients are supported")

    @property
    def levi(self) -> GroupType:
        fs = []
        if self.ambient.kind == "sp":
            fs = [gl(s) for s in self.block_sizes]
            fs.append(sp(self.sp_datum.total))
        else:
            d = self.ambient.degree
            fs = [gl(s, 2 * d, self.ambient.ramified) for s in self.block_sizes]
            fs.append(u(self.u_datum.total, d, self.ambient.ramified))
        return GroupType(tuple(fs))

    @property
    def endoscopic_levi(self) -> GroupType:
        fs: list[FactorType] = []
        if self.ambient.kind == "sp":
            fs = [gl(s) for s in self.block_sizes]
            fs += [sp(self.sp_datum.m_prime), so_even(self.sp_datum.even_rank, self.sp_datum.even_class)]
        else:
            d = self.ambient.degree
            fs = [gl(s, 2 * d, self.ambient.ramified) for s in self.block_sizes]
            fs += [u(self.u_datum.m_prime, d, self.ambient.ramified)]
            fs += [u(self.u_datum.m_dblprime, d, self.ambient.ramified)]
        return GroupType(tuple(fs))


def arthur_L_of_s(config: ArthurConfig, dbl_side: frozenset[int]) -> GroupType:
    """Endoscopic group of the full ambient attached to a side choice.

    ``dbl_side`` lists the blocks joining the second part of the datum.
    Symplectic ambient: the even part keeps the datum's form class (same
    anisotropic kernel).  Unitary ambient: a block of rank s adds 2s to its
    side's rank.
    """
    sizes = config.block_sizes
    if any(i not in range(len(sizes)) for i in dbl_side):
        raise InvariantViolation("side choice mentions a nonexistent block")
    s_p = sum(sizes[i] for i in range(len(sizes)) if i not in dbl_side)
    s_d = sum(sizes[i] for i in dbl_side)
    if config.ambient.kind == "sp":
        d = config.sp_datum
        n_p = d.m_prime + s_p
        n_d = d.even_rank + s_d
        klass = d.even_class if d.even_rank else "split"
        return GroupType.of(sp(n_p), so_even(n_d, klass))
    d = config.u_datum
    n_p = d.m_prime + 2 * s_p
    n_d = d.m_dblprime + 2 * s_d
    deg, ram = config.ambient.degree, config.ambient.ramified
    return GroupType.of(*(u(x, deg, ram) for x in (n_p, n_d) if x))


def e_set_arthur(config: ArthurConfig) -> tuple[frozenset[int], ...]:
    """Side choices whose attached datum for the ambient stays elliptic."""
    ambient_a = a_dimension(GroupType.of(config.ambient))
    out = []
    for r in range(len(config.block_sizes) + 1):
        for combo in itertools.combinations(range(len(config.block_sizes)), r):
            cand = frozenset(combo)
            if a_dimension(arthur_L_of_s(config, cand)) == ambient_a:
                out.append(cand)
    return tuple(out)


def _arthur_layout(config: ArthurConfig) -> tuple[int, list[tuple[int, ...]], tuple[int, ...], tuple[int, ...]]:
    """(ambient rank, block coords, prime core coords, second core coords)."""
    pos = 0
    blocks = []
    if config.ambient.kind == "sp":
        widths = list(config.block_sizes)
        w_p, w_d = config.sp_datum.m_prime, config.sp_datum.even_rank
    else:
        d = config.ambient.degree
        widths = [2 * d * s for s in config.block_sizes]
        w_p, w_d = 2 * d * config.u_datum.m_prime, 2 * d * config.u_datum.m_dblprime
    for w in widths:
        blocks.append(tuple(range(pos, pos + w)))
        pos += w
    prime = tuple(range(pos, pos + w_p))
    pos += w_p
    dbl = tuple(range(pos, pos + w_d))
    pos += w_d
    return pos, blocks, prime, dbl


def i_standard(config: ArthurConfig, dbl_side: frozenset[int]) -> Fraction:
    """Index ratio of the Levi-ascent construction for one side choice."""
    ambient, blocks, prime, dbl = _arthur_layout(config)
    rows_rexc: list = []
    rows_r: list = []
    for c in blocks:
        rows_rexc.extend(center_rows("torus", c))
        rows_r.extend(center_rows("torus", c))
    if config.ambient.kind == "sp":
        rows_rexc.extend(center_rows("none", prime))        # Sp part: trivial center
        rows_rexc.extend(center_rows("mu2", dbl))
        rows_r.extend(center_rows("none", prime + dbl))
    else:
        rows_rexc.extend(center_rows("mu2", prime))
        rows_rexc.extend(center_rows("mu2", dbl))
        rows_r.extend(center_rows("mu2", prime + dbl))
    z_rexc = assemble_diag(ambient, rows_rexc)
    z_r = assemble_diag(ambient, rows_r)
    num = diag_index(z_rexc, z_r)

    p_all = tuple(sorted(prime + tuple(c for i, blk in enumerate(blocks) if i not in dbl_side for c in blk)))
    d_all = tuple(sorted(dbl + tuple(c for i, blk in enumerate(blocks) if i in dbl_side for c in blk)))
    rows_ls: list = []
    rows_l: list = []
    if config.ambient.kind == "sp":
        rows_ls.extend(center_rows("none", p_all))
        rows_ls.extend(center_rows("mu2", d_all))
        rows_l.extend(center_rows("none", p_all + d_all))
    else:
        rows_ls.extend(center_rows("mu2", p_all))
        rows_ls.extend(center_rows("mu2", d_all))
        rows_l.extend(center_rows("mu2", p_all + d_all))
    z_ls = assemble_diag(ambient, rows_ls)
    z_l = assemble_diag(ambient, rows_l)
    den = diag_index(z_ls, z_l)
    return num / den
