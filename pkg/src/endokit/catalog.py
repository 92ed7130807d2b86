"""Descriptors for the classical groups in play and their dual-center pictures.

A group type is an unordered product of factor descriptors.  Each factor
owns a contiguous block of coordinates in a fixed ambient torus; the fixed
and connected-fixed centers of the dual group are cut out blockwise as
diagonal subgroups.  Field extensions are abstracted to a degree plus a
ramification flag, quadratic spaces to a form-class tag.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EmbeddingInvalid, LayoutMismatch, UnsupportedFactor
from .lattices import DiagSubgroup, IntLattice
from .qspaces import QSubspace

FORM_CLASSES = ("split", "unram_nonsplit", "ramified")
_KIND_ORDER = {"gl": 0, "u": 1, "sp": 2, "so_odd": 3, "so_even": 4}


@dataclass(frozen=True)
class FactorType:
    """One classical factor: GL over an extension, unitary, Sp, or SO."""

    kind: str
    rank: int
    degree: int = 1
    ramified: bool = False
    form_class: str = "split"

    def __post_init__(self) -> None:
        if self.kind not in _KIND_ORDER:
            raise UnsupportedFactor(f"unknown factor kind {self.kind!r}")
        if self.kind in ("gl", "u"):
            if self.rank < 1:
                raise ValueError(f"{self.kind} factor needs rank >= 1")
            if self.degree < 1:
                raise ValueError("extension degree must be >= 1")
        else:
            if self.rank < 0:
                raise ValueError("rank must be >= 0")
            if self.degree != 1 or self.ramified:
                raise ValueError("sp/so factors carry no extension data")
        if self.kind == "so_even":
            if self.form_class not in FORM_CLASSES:
                raise ValueError(f"unknown form class {self.form_class!r}")
            if self.rank == 0 and self.form_class != "split":
                object.__setattr__(self, "form_class", "split")
        elif self.form_class != "split":
            raise ValueError("form_class is reserved for even orthogonal factors")

    # -- geometry -----------------------------------------------------------

    @property
    def width(self) -> int:
        """Coordinate-block width in the ambient torus."""
        if self.kind == "gl":
            return self.degree * self.rank
        if self.kind == "u":
            return 2 * self.degree * self.rank
        return self.rank

    @property
    def is_trivial(self) -> bool:
        return self.kind in ("sp", "so_odd", "so_even") and self.rank == 0

    @property
    def a_rank(self) -> int:
        """Rank of the maximal split central torus.

        GL factors contribute 1 (restriction of scalars included); the even
        orthogonal group of rank one with split form is itself a split torus
        and also contributes 1.  Everything else contributes 0.
        """
        if self.kind == "gl":
            return 1
        if self.kind == "so_even" and self.rank == 1 and self.form_class == "split":
            return 1
        return 0

    @property
    def center_tags(self) -> tuple[str, str]:
        """(fixed, connected-fixed) center shape on this factor's block."""
        if self.kind == "gl":
            return ("torus", "torus")
        if self.kind == "sp":
            return ("none", "none")
        if self.is_trivial or self.rank == 0:
            return ("none", "none")
        return ("mu2", "none")

    def sort_key(self) -> tuple:
        return (
            _KIND_ORDER[self.kind],
            self.degree,
            self.rank,
            self.ramified,
            FORM_CLASSES.index(self.form_class),
        )

    def display(self) -> str:
        if self.kind == "gl":
            base = f"GL({self.rank})"
        elif self.kind == "u":
            base = f"U({self.rank})"
        elif self.kind == "sp":
            return f"Sp({2 * self.rank})"
        elif self.kind == "so_odd":
            return f"SO({2 * self.rank + 1})"
        else:
            tag = {"split": "", "unram_nonsplit": ",nonsplit", "ramified": ",ram"}[self.form_class]
            return f"SO({2 * self.rank}{tag})"
        if self.degree > 1 or self.ramified:
            base = base[:-1] + f";deg{self.degree}{'r' if self.ramified else ''})"
        return base


def gl(rank: int, degree: int = 1, ramified: bool = False) -> FactorType:
    return FactorType("gl", rank, degree, ramified)


def u(rank: int, degree: int = 1, ramified: bool = False) -> FactorType:
    return FactorType("u", rank, degree, ramified)


def sp(rank: int) -> FactorType:
    """Symplectic group Sp(2*rank)."""
    return FactorType("sp", rank)


def so_odd(rank: int) -> FactorType:
    """Split odd orthogonal group SO(2*rank + 1)."""
    return FactorType("so_odd", rank)


def so_even(rank: int, form_class: str = "split") -> FactorType:
    """Even orthogonal group SO(2*rank) with a form-class tag."""
    return FactorType("so_even", rank, form_class=form_class)


@dataclass(frozen=True)
class GroupType:
    """Canonically sorted product of nontrivial factors."""

    factors: tuple[FactorType, ...] = ()

    def __post_init__(self) -> None:
        kept = tuple(sorted((f for f in self.factors if not f.is_trivial), key=FactorType.sort_key))
        object.__setattr__(self, "factors", kept)

    @staticmethod
    def of(*factors: FactorType) -> "GroupType":
        return GroupType(tuple(factors))

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def total_width(self) -> int:
        return sum(f.width for f in self.factors)

    def display(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f.display() for f in self.factors)


@dataclass(frozen=True)
class CoordinateLayout:
    """Contiguous per-factor coordinate blocks inside a fixed ambient torus."""

    ambient_rank: int
    blocks: tuple[tuple[int, int], ...]  # (start, width) per factor

    def __post_init__(self) -> None:
        pos = 0
        for start, width in self.blocks:
            if start < pos or width < 0:
                raise LayoutMismatch("blocks must be disjoint and in order")
            pos = start + width
        if pos > self.ambient_rank:
            raise LayoutMismatch("blocks exceed the ambient rank")

    def coords(self, idx: int) -> tuple[int, ...]:
        start, width = self.blocks[idx]
        return tuple(range(start, start + width))


def layout_for(g: GroupType) -> CoordinateLayout:
    """Canonical layout: factor blocks in canonical order, tight ambient."""
    blocks = []
    pos = 0
    for f in g.factors:
        blocks.append((pos, f.width))
        pos += f.width
    return CoordinateLayout(pos, tuple(blocks))


# ---------------------------------------------------------------------------
# blockwise center construction


def center_rows(tag: str, coords: Sequence[int]) -> list[tuple[int, ...] | list[int]]:
    """Vanishing-character rows for one diagonal piece supported on ``coords``.

    ``tag``: "torus" = diagonal C^*, "mu2" = diagonal mu_2, "none" = trivial
    subgroup (all characters vanish), "free" = full torus (no condition).
    Rows are returned as dense vectors over the caller's ambient via a
    closure-free convention: the caller must embed them (see _embed).
    """
    w = len(coords)
    rows: list[list[int]] = []
    if tag == "free" or w == 0:
        return rows
    if tag == "torus":
        for a, b in zip(coords, coords[1:]):
            rows.append([(a, 1), (b, -1)])  # type: ignore[list-item]
        return rows  # sparse (coord, value) pairs
    if tag == "mu2":
        for a, b in zip(coords, coords[1:]):
            rows.append([(a, 1), (b, -1)])  # type: ignore[list-item]
        rows.append([(coords[-1], 2)])  # type: ignore[list-item]
        return rows
    if tag == "none":
        for c in coords:
            rows.append([(c, 1)])  # type: ignore[list-item]
        return rows
    raise ValueError(f"unknown center tag {tag!r}")


def signed_torus_rows(blocks: Sequence[tuple[Sequence[int], int]]) -> list[list[tuple[int, int]]]:
    """Vanishing rows of the subgroup {t acting as t^{e_b} on block b}.

    ``blocks`` is a sequence of (coords, exponent) with exponent +-1.
    """
    rows: list[list[tuple[int, int]]] = []
    anchors = []
    for coords, e in blocks:
        if not coords:
            continue
        for a, b in zip(coords, coords[1:]):
            rows.append([(a, 1), (b, -1)])
        anchors.append((coords[0], e))
    for (c1, e1), (c2, e2) in zip(anchors, anchors[1:]):
        rows.append([(c1, 1), (c2, -e1 * e2)])
    return rows


def assemble_diag(ambient: int, sparse_rows: Iterable[Sequence[tuple[int, int]]]) -> DiagSubgroup:
    dense = []
    for row in sparse_rows:
        v = [0] * ambient
        for c, val in row:
            v[c] += val
        dense.append(tuple(v))
    return DiagSubgroup(ambient, IntLattice(ambient, tuple(dense)))


def dual_center(g: GroupType, layout: CoordinateLayout) -> tuple[DiagSubgroup, DiagSubgroup]:
    """Fixed and connected-fixed center of the dual group, blockwise.

    Coordinates outside the group's blocks (if the ambient is larger) carry
    no condition for either subgroup.
    """
    if len(layout.blocks) != len(g.factors):
        raise LayoutMismatch("layout must have one block per factor")
    fixed_rows: list[Sequence[tuple[int, int]]] = []
    fixed0_rows: list[Sequence[tuple[int, int]]] = []
    for idx, f in enumerate(g.factors):
        coords = layout.coords(idx)
        if len(coords) != f.width:
            raise LayoutMismatch(f"block {idx} has width {len(coords)}, factor needs {f.width}")
        t_fixed, t_fixed0 = f.center_tags
        fixed_rows.extend(center_rows(t_fixed, coords))
        fixed0_rows.extend(center_rows(t_fixed0, coords))
    return (
        assemble_diag(layout.ambient_rank, fixed_rows),
        assemble_diag(layout.ambient_rank, fixed0_rows),
    )


def dual_center_grouped(
    ambient: int, parts: Sequence[tuple[str, Sequence[int]]]
) -> tuple[DiagSubgroup, DiagSubgroup]:
    """Centers of a group given as labeled coordinate parts.

    Each part is (kind, coords) with kind a factor kind; the part's block
    list may be scattered (a parent factor spanning several sub-blocks).
    """
    fixed_rows: list[Sequence[tuple[int, int]]] = []
    fixed0_rows: list[Sequence[tuple[int, int]]] = []
    for kind, coords in parts:
        if kind == "gl":
            tags = ("torus", "torus") if coords else ("none", "none")
        elif kind == "sp":
            tags = ("none", "none")
        else:
            tags = ("mu2", "none") if coords else ("none", "none")
        fixed_rows.extend(center_rows(tags[0], tuple(coords)))
        fixed0_rows.extend(center_rows(tags[1], tuple(coords)))
    return assemble_diag(ambient, fixed_rows), assemble_diag(ambient, fixed0_rows)


# ---------------------------------------------------------------------------
# split-center spaces


def a_dimension(g: GroupType) -> int:
    """Dimension of the split-central-character space of the group."""
    return sum(f.a_rank for f in g.factors)


def a_space(g: GroupType, layout: CoordinateLayout) -> QSubspace:
    """Split-center space realized inside the ambient, one block-sum per GL."""
    if len(layout.blocks) != len(g.factors):
        raise LayoutMismatch("layout must have one block per factor")
    vecs = []
    for idx, f in enumerate(g.factors):
        if f.a_rank:
            v = [0] * layout.ambient_rank
            for c in layout.coords(idx):
                v[c] = 1
            vecs.append(v)
    return QSubspace.span(layout.ambient_rank, vecs)


def bar(g: GroupType) -> GroupType:
    """Swap every split odd orthogonal factor for its symplectic partner."""
    return GroupType(tuple(sp(f.rank) if f.kind == "so_odd" else f for f in g.factors))


def unbar(g: GroupType) -> GroupType:
    """Inverse of :func:`bar`: symplectic factors become odd orthogonal."""
    return GroupType(tuple(so_odd(f.rank) if f.kind == "sp" else f for f in g.factors))


# ---------------------------------------------------------------------------
# Levi combinatorics


@dataclass(frozen=True)
class LeviDatum:
    """A Levi class of a rank-n classical group: block sizes plus remainder."""

    sizes: tuple[int, ...]
    remainder: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "sizes", tuple(sorted(self.sizes, reverse=True)))
        if any(s < 1 for s in self.sizes):
            raise ValueError("block sizes must be >= 1")
        if self.remainder < 0:
            raise ValueError("remainder must be >= 0")

    @property
    def rank(self) -> int:
        return sum(self.sizes) + self.remainder

    @property
    def block_count(self) -> int:
        return len(self.sizes)


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n into positive parts, decreasing, lexicographic."""
    if n == 0:
        yield ()
        return

    def rec(rest: int, maxpart: int, acc: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield acc
            return
        for p in range(min(rest, maxpart), 0, -1):
            yield from rec(rest - p, p, acc + (p,))

    yield from rec(n, n, ())


def levi_data(n: int) -> tuple[LeviDatum, ...]:
    """All Levi classes of a rank-n group: multisets of sizes with sum <= n."""
    if n < 0:
        raise ValueError("rank must be >= 0")
    out = []
    for total in range(0, n + 1):
        for part in _partitions(total):
            out.append(LeviDatum(part, n - total))
    return tuple(out)


@dataclass(frozen=True)
class EmbeddedLevi:
    """A Levi class of a group together with explicit coordinates per piece."""

    parent: GroupType
    levi: GroupType
    parts: tuple[tuple[FactorType, tuple[int, ...]], ...]

    def center(self, ambient: int) -> tuple[DiagSubgroup, DiagSubgroup]:
        return dual_center_grouped(ambient, [(f.kind, coords) for f, coords in self.parts])


def _factor_levis(f: FactorType, coords: tuple[int, ...]) -> list[list[tuple[FactorType, tuple[int, ...]]]]:
    """Levi decompositions of a single factor, with coordinate assignment."""
    out: list[list[tuple[FactorType, tuple[int, ...]]]] = []
    if f.kind == "gl":
        for part in _partitions(f.rank):
            pieces = []
            pos = 0
            for s in part:
                w = f.degree * s
                pieces.append((gl(s, f.degree, f.ramified), coords[pos : pos + w]))
                pos += w
            out.append(pieces)
        return out
    if f.kind == "u":
        # a GL piece of rank s uses 2s of the unitary rank
        for total in range(0, f.rank // 2 + 1):
            for part in _partitions(total):
                core_rank = f.rank - 2 * total
                pieces = []
                pos = 0
                for s in part:
                    w = 4 * f.degree * s  # piece plus its paired shadow
                    pieces.append((gl(s, 2 * f.degree, f.ramified), coords[pos : pos + w]))
                    pos += w
                if core_rank:
                    pieces.append((u(core_rank, f.degree, f.ramified), coords[pos:]))
                out.append(pieces)
        return out
    # sp / so_odd / so_even
    for datum in levi_data(f.rank):
        m = datum.remainder
        if f.kind == "so_even":
            if f.form_class != "split" and m < 1:
                continue
            if f.form_class == "split" and m == 1:
                continue
        pieces = []
        pos = 0
        for s in datum.sizes:
            pieces.append((gl(s), coords[pos : pos + s]))
            pos += s
        if m:
            if f.kind == "sp":
                core: FactorType = sp(m)
            elif f.kind == "so_odd":
                core = so_odd(m)
            else:
                core = so_even(m, f.form_class)
            pieces.append((core, coords[pos:]))
        out.append(pieces)
    return out


def levi_enumerate(g: GroupType, layout: CoordinateLayout | None = None) -> tuple[EmbeddedLevi, ...]:
    """All Levi classes of a product group, one embedded representative each."""
    if layout is None:
        layout = layout_for(g)
    per_factor = [
        _factor_levis(f, layout.coords(i)) for i, f in enumerate(g.factors)
    ]
    out = []
    for combo in itertools.product(*per_factor) if per_factor else [()]:
        parts: list[tuple[FactorType, tuple[int, ...]]] = []
        for pieces in combo:
            parts.extend(pieces)
        levi = GroupType(tuple(f for f, _ in parts))
        out.append(EmbeddedLevi(g, levi, tuple(parts)))
    return tuple(out)


def levis_containing(g: GroupType, r: EmbeddedLevi) -> tuple[EmbeddedLevi, ...]:
    """Levi classes of ``g`` that contain the class of ``r`` blockwise."""
    if r.parent != g:
        raise EmbeddingInvalid("the embedded Levi does not live in this group")
    out = []
    r_sizes_per_factor = _pieces_by_parent(g, r)
    for cand in levi_enumerate(g):
        c_per_factor = _pieces_by_parent(g, cand)
        ok = True
        for (r_sizes, r_core), (c_sizes, c_core) in zip(r_sizes_per_factor, c_per_factor):
            if not _refines(r_sizes, r_core, c_sizes, c_core):
                ok = False
                break
        if ok:
            out.append(cand)
    return tuple(out)


def _pieces_by_parent(g: GroupType, e: EmbeddedLevi) -> list[tuple[tuple[int, ...], int]]:
    """Per parent factor: (GL piece sizes, core rank)."""
    layout = layout_for(g)
    spans = [set(layout.coords(i)) for i in range(len(g.factors))]
    acc: list[tuple[list[int], list[int]]] = [([], []) for _ in g.factors]
    for f, coords in e.parts:
        if not coords:
            continue
        owner = next(i for i, s in enumerate(spans) if coords[0] in s)
        if f.kind == "gl":
            acc[owner][0].append(f.rank)
        else:
            acc[owner][1].append(f.rank)
    result = []
    for sizes, cores in acc:
        result.append((tuple(sorted(sizes, reverse=True)), cores[0] if cores else 0))
    return result


def _refines(r_sizes: tuple[int, ...], r_core: int, c_sizes: tuple[int, ...], c_core: int) -> bool:
    """Whether blocks (r_sizes, core r_core) can group into (c_sizes, c_core)."""
    if r_core > c_core:
        return False

    def rec(pool: tuple[int, ...], targets: tuple[int, ...]) -> bool:
        if not targets:
            return sum(pool) == c_core - r_core
        t = targets[0]
        tried = set()

        def choose(start: int, total: int, used: tuple[int, ...]) -> bool:
            if total == t:
                rest = list(pool)
                for k in sorted(used, reverse=True):
                    rest.pop(k)
                key = tuple(rest)
                if key in tried:
                    return False
                tried.add(key)
                return rec(tuple(rest), targets[1:])
            if total > t:
                return False
            for k in range(start, len(pool)):
                if total + pool[k] <= t and choose(k + 1, total + pool[k], used + (k,)):
                    return True
            return False

        return choose(0, 0, ())

    return rec(r_sizes, c_sizes)


# ---------------------------------------------------------------------------
# relative Weyl orders and ramification


def weyl_relative_order(g: GroupType, levi: LeviDatum) -> int:
    """Order of the relative Weyl group of a Levi class in Sp or odd SO.

    Sign flips act on every GL block; permutations only move blocks of equal
    size (the normalizer preserves block sizes).
    """
    if g.is_trivial:
        if levi.rank != 0:
            raise EmbeddingInvalid("Levi datum rank does not match the group")
        return 1
    if len(g.factors) != 1 or g.factors[0].kind not in ("sp", "so_odd"):
        raise UnsupportedFactor("relative Weyl orders are defined for Sp and odd SO ambients")
    if levi.rank != g.factors[0].rank:
        raise EmbeddingInvalid("Levi datum rank does not match the group")
    order = 2 ** len(levi.sizes)
    for size in set(levi.sizes):
        c = levi.sizes.count(size)
        f = 1
        for k in range(2, c + 1):
            f *= k
        order *= f
    return order


def is_unramified(g: GroupType) -> bool:
    """No factor touches a ramified extension or a ramified quadratic form."""
    for f in g.factors:
        if f.kind in ("gl", "u") and f.ramified:
            return False
        if f.kind == "so_even" and f.form_class == "ramified":
            return False
    return True


# ---------------------------------------------------------------------------
# signed grouping engine (shared with the descent layer)


def grouping_patterns(
    n_blocks: int, *, signed: bool, with_core: bool
) -> Iterator[tuple[tuple[tuple[tuple[int, int], ...], ...], tuple[int, ...]]]:
    """All Levi-style groupings of ``n_blocks`` labeled blocks.

    Yields (groups, absorbed): each group is a tuple of (block index, sign)
    with the first sign normalized to +1; ``absorbed`` lists blocks folded
    into the core.  Without a core every block must be grouped; without
    signs every sign is +1.  Deterministic order.
    """
    indices = list(range(n_blocks))

    def partitions_of(elts: list[int]) -> Iterator[list[list[int]]]:
        if not elts:
            yield []
            return
        first, rest = elts[0], elts[1:]
        for part in partitions_of(rest):
            # first joins an existing class or starts its own
            for k in range(len(part)):
                yield part[:k] + [[first] + part[k]] + part[k + 1 :]
            yield [[first]] + part

    subsets = [()]
    if with_core:
        subsets = []
        for r in range(n_blocks + 1):
            subsets.extend(itertools.combinations(indices, r))
    for absorbed in subsets:
        grouped = [i for i in indices if i not in absorbed]
        for part in partitions_of(grouped):
            part_sorted = tuple(sorted(tuple(sorted(p)) for p in part))
            sign_choices = []
            for p in part_sorted:
                if signed and len(p) > 1:
                    sign_choices.append(list(itertools.product((1, -1), repeat=len(p) - 1)))
                else:
                    sign_choices.append([(1,) * (len(p) - 1)])
            for signs in itertools.product(*sign_choices):
                groups = []
                for p, tail in zip(part_sorted, signs):
                    groups.append(tuple(zip(p, (1,) + tuple(tail))))
                yield tuple(groups), tuple(absorbed)
