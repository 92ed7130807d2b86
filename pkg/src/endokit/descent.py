"""Type-level descent at a finite-order semisimple pair.

A scenario fixes a Levi of a rank-n symplectic group, an elliptic datum
splitting the symplectic remainder, a Frobenius surrogate q, and exact
eigenvalue multisets (roots of unity) for the element on each factor.  The
machinery derives the centralizer types on both sides, carves the matched
GL blocks out of them, assigns the base-point signs, and exposes the exact
placement data every later identity consumes.

Galois theory is replaced throughout by orbit combinatorics: q acts on
root-of-unity exponents by multiplication, orbits play the role of field
extensions, and self-inverse orbits are the unitary ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .catalog import FactorType, GroupType, gl, so_even, so_odd, sp, u
from .endoscopy import EigenMultiset, EllipticDatumMeta, correspond_mu
from .errors import InvariantViolation, MatchingFailure, ScenarioValidationError
from .rootsofunity import RootOfUnity

HALF = Fraction(1, 2)
ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# orbit combinatorics


_orbit_cache: dict[tuple[int, int, int], frozenset[Fraction]] = {}


def orbit_of(exp: Fraction, q: int) -> frozenset[Fraction]:
    # keyed on the reduced pair: hashing a Fraction runs a modular inverse
    key = (exp.numerator % exp.denominator, exp.denominator, q)
    got = _orbit_cache.get(key)
    if got is None:
        out = set()
        e = exp % 1
        while e not in out:
            out.add(e)
            e = (e * q) % 1
        got = frozenset(out)
        _orbit_cache[key] = got
    return got


def orbit_rep(orbit: Iterable[Fraction]) -> Fraction:
    return min(orbit)


def orbit_inverse(orbit: Iterable[Fraction]) -> frozenset[Fraction]:
    return frozenset((-e) % 1 for e in orbit)


def orbit_negate(orbit: Iterable[Fraction]) -> frozenset[Fraction]:
    return frozenset((e + HALF) % 1 for e in orbit)


def is_self_inverse(orbit: frozenset[Fraction]) -> bool:
    return orbit == orbit_inverse(orbit)


def pair_class_key(orbit: frozenset[Fraction]) -> Fraction:
    """Canonical key of the unordered pair {orbit, inverse orbit}."""
    return min(orbit_rep(orbit), orbit_rep(orbit_inverse(orbit)))


_exp_cache: dict[tuple[str, int, int, int], object] = {}


def _exp_cached(tag: str, exp: Fraction, q: int, compute):
    key = (tag, exp.numerator % exp.denominator, exp.denominator, q)
    got = _exp_cache.get(key)
    if got is None:
        got = compute()
        _exp_cache[key] = got
    return got


def _pair_key_exp(exp: Fraction, q: int) -> Fraction:
    return _exp_cached("pair", exp, q, lambda: pair_class_key(orbit_of(exp, q)))


def _neg_rep_exp(exp: Fraction, q: int) -> Fraction:
    return _exp_cached("neg", exp, q, lambda: orbit_rep(orbit_negate(orbit_of(exp, q))))


def _self_inverse_exp(exp: Fraction, q: int) -> bool:
    return _exp_cached("selfinv", exp, q, lambda: is_self_inverse(orbit_of(exp, q)))


def _exponent_counts(ms: EigenMultiset) -> dict[Fraction, int]:
    counts: dict[Fraction, int] = {}
    for x in ms.entries:
        if not isinstance(x, RootOfUnity):
            raise InvariantViolation("descent multisets must consist of roots of unity")
        counts[x.exponent] = counts.get(x.exponent, 0) + 1
    return counts


def _orbit_decomposition_counts(counts: dict[Fraction, int], q: int) -> dict[Fraction, int]:
    out: dict[Fraction, int] = {}
    seen: set[Fraction] = set()
    for e in sorted(counts):
        if e in seen:
            continue
        orb = orbit_of(e, q)
        mult = counts.get(e, 0)
        for f in orb:
            if counts.get(f, 0) != mult:
                raise InvariantViolation(
                    f"multiset is not Frobenius stable at exponent {e} (q={q})"
                )
            seen.add(f)
        out[orbit_rep(orb)] = mult
    return out


@lru_cache(maxsize=None)
def _orbit_dec_cached(ms: EigenMultiset, q: int) -> tuple[tuple[Fraction, int], ...]:
    return tuple(sorted(_orbit_decomposition_counts(_exponent_counts(ms), q).items()))


def orbit_decomposition(ms: EigenMultiset, q: int) -> dict[Fraction, int]:
    """Map orbit representative -> multiplicity; requires q-stability."""
    return dict(_orbit_dec_cached(ms, q))


# ---------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class DescentScenario:
    """Fixed data of one descent: Levi, datum, Frobenius surrogate, eigenvalues."""

    n: int
    sizes: tuple[int, ...]
    s0: EllipticDatumMeta
    q: int
    eps_gl: tuple[EigenMultiset, ...]
    eps_prime: EigenMultiset
    eps_dblprime: EigenMultiset
    form_class_prime: str = "split"
    form_class_dblprime: str = "split"

    @property
    def m(self) -> int:
        return self.n - sum(self.sizes)

    def digest(self) -> str:
        parts = [
            f"n{self.n}",
            "b" + ",".join(str(s) for s in self.sizes),
            f"s{self.s0.m_prime}.{self.s0.m_dblprime}",
            f"q{self.q}",
            "g" + "|".join(",".join(str(x) for x in ms.entries) for ms in self.eps_gl),
            "p" + ",".join(str(x) for x in self.eps_prime.entries),
            "d" + ",".join(str(x) for x in self.eps_dblprime.entries),
            self.form_class_prime[:3],
            self.form_class_dblprime[:3],
        ]
        return ";".join(parts)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sizes": list(self.sizes),
            "m_prime": self.s0.m_prime,
            "m_dblprime": self.s0.m_dblprime,
            "q": self.q,
            "eps_gl": [[str(x) for x in ms.entries] for ms in self.eps_gl],
            "eps_prime": [str(x) for x in self.eps_prime.entries],
            "eps_dblprime": [str(x) for x in self.eps_dblprime.entries],
            "form_class_prime": self.form_class_prime,
            "form_class_dblprime": self.form_class_dblprime,
        }

    @staticmethod
    def from_dict(data: dict) -> "DescentScenario":
        def ms(entries: Sequence[str]) -> EigenMultiset:
            return EigenMultiset.of(RootOfUnity(Fraction(s)) for s in entries)

        return DescentScenario(
            n=int(data["n"]),
            sizes=tuple(int(x) for x in data["sizes"]),
            s0=EllipticDatumMeta(int(data["m_prime"]), int(data["m_dblprime"])),
            q=int(data["q"]),
            eps_gl=tuple(ms(block) for block in data["eps_gl"]),
            eps_prime=ms(data["eps_prime"]),
            eps_dblprime=ms(data["eps_dblprime"]),
            form_class_prime=data.get("form_class_prime", "split"),
            form_class_dblprime=data.get("form_class_dblprime", "split"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "DescentScenario":
        return DescentScenario.from_dict(json.loads(text))


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = None
    x = q
    for cand in range(2, q + 1):
        if cand * cand > x and p is None:
            p = x
            break
        if x % cand == 0:
            p = cand
            break
    while x % p == 0:
        x //= p
    return x == 1


@lru_cache(maxsize=None)
class _MultisetProfile:
    """Cached per-multiset analysis shared by validation and descent."""

    def __init__(self, ms: EigenMultiset, q: int):
        from math import gcd

        self.size = len(ms.entries)
        self.rational_entries = any(not isinstance(x, RootOfUnity) for x in ms.entries)
        if self.rational_entries:
            return
        self.coprime = all(gcd(q, x.order) == 1 for x in ms.entries)
        counts = _exponent_counts(ms)
        self.mult_one = counts.get(ZERO, 0)
        self.mult_minus = counts.get(HALF, 0)
        self.inversion_closed = all(
            counts.get((-e) % 1, 0) == k for e, k in counts.items()
        )
        self.stable_error: str | None = None
        self.dec: dict[Fraction, int] = {}
        try:
            self.dec = _orbit_decomposition_counts(counts, q)
        except InvariantViolation as exc:
            self.stable_error = str(exc)


def validate_scenario(sc: DescentScenario) -> DescentScenario:
    """Check every structural invariant; raises with the full violation list."""
    bad: list[str] = []
    if sc.n < 0:
        bad.append("rank n must be nonnegative")
    if any(s < 1 for s in sc.sizes):
        bad.append("GL block sizes must be >= 1")
    if sc.m < 0:
        bad.append("block sizes exceed the rank")
    if sc.s0.total != max(sc.m, 0):
        bad.append("the datum does not split the symplectic remainder")
    if not _is_prime_power(sc.q):
        bad.append(f"q={sc.q} is not a prime power")
    elif sc.q % 2 == 0:
        bad.append("q must be odd: the class correspondence negates eigenvalues")
    if len(sc.eps_gl) != len(sc.sizes):
        bad.append("one eigenvalue multiset per GL block is required")
    profiles = [
        ("prime", _MultisetProfile(sc.eps_prime, sc.q)),
        ("dblprime", _MultisetProfile(sc.eps_dblprime, sc.q)),
    ] + [(f"block {i}", _MultisetProfile(ms, sc.q)) for i, ms in enumerate(sc.eps_gl)]
    for name, prof in profiles:
        if prof.rational_entries:
            bad.append(f"{name}: all eigenvalues must be roots of unity")
            continue
        if not prof.coprime:
            bad.append(f"{name}: q must be coprime to every eigenvalue order")
        if prof.stable_error:
            bad.append(f"{name}: {prof.stable_error}")
    if bad:
        raise ScenarioValidationError(bad)
    for i, (ms, size) in enumerate(zip(sc.eps_gl, sc.sizes)):
        if ms.size() != size:
            bad.append(f"GL block {i} multiset has size {ms.size()}, expected {size}")
    for name, prof, mp in (
        ("prime", profiles[0][1], sc.s0.m_prime),
        ("dblprime", profiles[1][1], sc.s0.m_dblprime),
    ):
        if prof.size != 2 * mp + 1:
            bad.append(f"{name} orthogonal multiset has the wrong size")
        if not prof.inversion_closed:
            bad.append(f"{name} multiset must be inversion closed")
        if prof.mult_one % 2 != 1:
            bad.append(f"{name} multiset must contain +1 with odd multiplicity")
        if prof.mult_minus % 2:
            bad.append(f"{name} multiset needs even multiplicity at -1")
    for name, tag in (
        ("prime", sc.form_class_prime),
        ("dblprime", sc.form_class_dblprime),
    ):
        if tag not in ("split", "unram_nonsplit", "ramified"):
            bad.append(f"unknown form class {tag!r}")
    if not bad:
        if profiles[0][1].mult_minus == 0 and sc.form_class_prime != "split":
            bad.append("prime side has no -1 eigenvalues; its form class must be split")
        if profiles[1][1].mult_minus == 0 and sc.form_class_dblprime != "split":
            bad.append("dblprime side has no -1 eigenvalues; its form class must be split")
    if bad:
        raise ScenarioValidationError(bad)
    return sc


def hypothesis_flags(sc: DescentScenario) -> tuple[bool, bool]:
    """(quasi-split flag, unramified flag) for the centralizer pair."""
    ramified = "ramified" in (sc.form_class_prime, sc.form_class_dblprime)
    return True, not ramified


# ---------------------------------------------------------------------------
# centralizer types


def _orbit_factors(
    rep: Fraction, mult: int, q: int, seen_pairs: set[Fraction]
) -> list[tuple[FactorType, Fraction]]:
    orb = orbit_of(rep, q)
    if is_self_inverse(orb):
        return [(u(mult, len(orb) // 2), rep)]
    key = pair_class_key(orb)
    if key in seen_pairs:
        return []
    seen_pairs.add(key)
    return [(gl(mult, len(orb)), key)]


def centralizer_factors(
    ms: EigenMultiset, q: int, kind: str, form_tag_minus: str = "split"
) -> list[tuple[FactorType, Fraction | None]]:
    """Centralizer factor list of an element with the given eigenvalues.

    ``kind`` is "symplectic", "odd_orthogonal" or "gl"; the second member of
    each pair is the orbit key (None for the +-1 factors).
    """
    return _centralizer_factors_counts(_exponent_counts(ms), q, kind, form_tag_minus)


def _centralizer_factors_counts(
    counts: dict[Fraction, int], q: int, kind: str, form_tag_minus: str = "split"
) -> list[tuple[FactorType, Fraction | None]]:
    dec = _orbit_decomposition_counts(counts, q)
    out: list[tuple[FactorType, Fraction | None]] = []
    seen_pairs: set[Fraction] = set()
    for rep in sorted(dec):
        mult = dec[rep]
        if rep == ZERO:
            if kind == "symplectic":
                if mult % 2:
                    raise InvariantViolation("odd +1 multiplicity in a symplectic class")
                out.append((sp(mult // 2), None))
            elif kind == "odd_orthogonal":
                if mult % 2 == 0:
                    raise InvariantViolation("even +1 multiplicity in an odd orthogonal class")
                out.append((so_odd((mult - 1) // 2), None))
            else:
                out.append((gl(mult), ZERO))
        elif rep == HALF:
            if kind == "symplectic":
                if mult % 2:
                    raise InvariantViolation("odd -1 multiplicity in a symplectic class")
                out.append((sp(mult // 2), None))
            elif kind == "odd_orthogonal":
                if mult % 2:
                    raise InvariantViolation("odd -1 multiplicity in an odd orthogonal class")
                out.append((so_even(mult // 2, form_tag_minus if mult else "split"), None))
            else:
                out.append((gl(mult), HALF))
        else:
            if kind == "gl":
                orb = orbit_of(rep, q)
                out.append((gl(mult, len(orb)), rep))
            else:
                out.extend(_orbit_factors(rep, mult, q, seen_pairs))
    return out


def centralizer_type(
    ms: EigenMultiset, q: int, kind: str, form_tag_minus: str = "split"
) -> GroupType:
    """Centralizer type of an element with the given eigenvalue multiset."""
    return GroupType(tuple(f for f, _ in centralizer_factors(ms, q, kind, form_tag_minus)))


def eta_from_epsilon(sc: DescentScenario) -> tuple[tuple[EigenMultiset, ...], EigenMultiset]:
    """Eigenvalue data of the matched element: GL blocks copied, symplectic
    part obtained from the class correspondence."""
    sp_part = correspond_mu(sc.eps_prime, sc.eps_dblprime, sc.s0)
    return sc.eps_gl, sp_part


# ---------------------------------------------------------------------------
# the outcome: blocks, slots, homes


@dataclass(frozen=True)
class Block:
    """One matched GL block shared by the two centralizers."""

    bid: int
    size: int
    ext: int
    origin: str  # "levi" | "pair_prime" | "pair_dbl" | "so2_prime" | "so2_dbl"
    owner: int | None
    tag: str  # "+" | "-" | "U"
    home: tuple
    sbar0: int
    eta_exp: Fraction
    eps_exp: Fraction

    @property
    def width(self) -> int:
        return self.size * self.ext


@dataclass(frozen=True)
class USlot:
    """Core slot of one self-inverse orbit: unitary on both sides."""

    eta_rep: Fraction
    d: int
    k_prime: int
    k_dbl: int

    @property
    def k_bar(self) -> int:
        return self.k_prime + self.k_dbl


@dataclass(frozen=True)
class DescentOutcome:
    scenario: DescentScenario
    blocks: tuple[Block, ...]
    u_slots: tuple[USlot, ...]
    x_prime: int  # rank of the split odd part on the prime side
    y_prime: int  # rank of the surviving even part on the prime side
    x_dbl: int
    y_dbl: int
    class_prime: str  # form class of the surviving prime even part
    class_dbl: str
    pulled_prime: bool  # split rank-one even part converted to a GL block
    pulled_dbl: bool

    # -- coordinates --------------------------------------------------------

    @property
    def ambient(self) -> int:
        n = sum(b.width for b in self.blocks)
        n += sum(2 * s.d * s.k_bar for s in self.u_slots)
        return n + self.x_prime + self.y_prime + self.x_dbl + self.y_dbl

    def block_coords(self, bid: int) -> tuple[int, ...]:
        pos = 0
        for b in self.blocks:
            if b.bid == bid:
                return tuple(range(pos, pos + b.width))
            pos += b.width
        raise KeyError(bid)

    def _slot_base(self) -> int:
        return sum(b.width for b in self.blocks)

    def u_slot_coords(self, idx: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        pos = self._slot_base()
        for k, s in enumerate(self.u_slots):
            wp, wd = 2 * s.d * s.k_prime, 2 * s.d * s.k_dbl
            if k == idx:
                return (
                    tuple(range(pos, pos + wp)),
                    tuple(range(pos + wp, pos + wp + wd)),
                )
            pos += wp + wd
        raise KeyError(idx)

    def pm_slot_coords(self) -> dict[str, tuple[int, ...]]:
        pos = self._slot_base() + sum(2 * s.d * s.k_bar for s in self.u_slots)
        out = {}
        for name, w in (
            ("xp", self.x_prime),
            ("yp", self.y_prime),
            ("xd", self.x_dbl),
            ("yd", self.y_dbl),
        ):
            out[name] = tuple(range(pos, pos + w))
            pos += w
        return out

    # -- homes ---------------------------------------------------------------

    def home_blocks(self, home: tuple) -> tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.home == home)

    def homes(self) -> tuple[tuple, ...]:
        keys = []
        for key in (("sp", 1), ("sp", -1)):
            if self.home_blocks(key) or self._sp_core_rank(key):
                keys.append(key)
        for s in self.u_slots:
            keys.append(("u", s.eta_rep))
        for b in self.blocks:
            if b.home[0] == "gl" and b.home not in keys:
                keys.append(b.home)
        return tuple(sorted(keys, key=lambda k: (k[0], k[1])))

    def _sp_core_rank(self, key: tuple) -> int:
        if key == ("sp", 1):
            return self.x_prime + self.y_dbl
        return self.x_dbl + self.y_prime

    def u_slot_at(self, rep: Fraction) -> USlot | None:
        for s in self.u_slots:
            if s.eta_rep == rep:
                return s
        return None

    # -- groups of the diagram ------------------------------------------------

    @property
    def i_count(self) -> int:
        return len(self.scenario.sizes)

    def r_group(self) -> GroupType:
        fs = [gl(b.size, b.ext) for b in self.blocks]
        fs += [u(s.k_bar, s.d) for s in self.u_slots if s.k_bar]
        fs += [sp(self.x_prime + self.y_dbl), sp(self.x_dbl + self.y_prime)]
        return GroupType(tuple(fs))

    def m_eta(self) -> GroupType:
        fs = [gl(b.size, b.ext) for b in self.blocks if b.origin == "levi"]
        fs += [u(s.k_bar, s.d) for s in self.u_slots if s.k_bar]
        pair_ranks: dict[tuple, int] = {}
        for b in self.blocks:
            if b.origin in ("pair_prime", "pair_dbl"):
                pair_ranks[b.home] = pair_ranks.get(b.home, 0) + b.size
        ext_of = {b.home: b.ext for b in self.blocks if b.origin in ("pair_prime", "pair_dbl")}
        fs += [gl(k, ext_of[h]) for h, k in sorted(pair_ranks.items(), key=lambda kv: kv[0][1])]
        w_plus = self.x_prime + self.y_dbl + (1 if self.pulled_dbl else 0)
        w_minus = self.x_dbl + self.y_prime + (1 if self.pulled_prime else 0)
        fs += [sp(w_plus), sp(w_minus)]
        return GroupType(tuple(fs))

    def mexc(self) -> GroupType:
        """The matched centralizer on the endoscopic side, before any pull."""
        fs = [gl(b.size, b.ext) for b in self.blocks if b.origin in ("levi", "pair_prime", "pair_dbl")]
        fs += [u(s.k_prime, s.d) for s in self.u_slots if s.k_prime]
        fs += [u(s.k_dbl, s.d) for s in self.u_slots if s.k_dbl]
        fs += [so_odd(self.x_prime), so_odd(self.x_dbl)]
        yp = self.y_prime + (1 if self.pulled_prime else 0)
        yd = self.y_dbl + (1 if self.pulled_dbl else 0)
        if yp:
            fs.append(so_even(yp, self.scenario.form_class_prime))
        if yd:
            fs.append(so_even(yd, self.scenario.form_class_dblprime))
        return GroupType(tuple(fs))

    def mexc_reduced(self) -> GroupType:
        """The endoscopic-side centralizer with split rank-one parts pulled."""
        fs = [gl(b.size, b.ext) for b in self.blocks]
        fs += [u(s.k_prime, s.d) for s in self.u_slots if s.k_prime]
        fs += [u(s.k_dbl, s.d) for s in self.u_slots if s.k_dbl]
        fs += [so_odd(self.x_prime), so_odd(self.x_dbl)]
        if self.y_prime:
            fs.append(so_even(self.y_prime, self.class_prime))
        if self.y_dbl:
            fs.append(so_even(self.y_dbl, self.class_dbl))
        return GroupType(tuple(fs))

    def g_eta(self) -> GroupType:
        fs = []
        for key in (("sp", 1), ("sp", -1)):
            rank = self._sp_core_rank(key) + sum(b.size for b in self.home_blocks(key))
            fs.append(sp(rank))
        for s in self.u_slots:
            rank = s.k_bar + 2 * sum(b.size for b in self.home_blocks(("u", s.eta_rep)))
            fs.append(u(rank, s.d))
        gl_homes: dict[tuple, tuple[int, int]] = {}
        for b in self.blocks:
            if b.home[0] == "gl":
                r, e = gl_homes.get(b.home, (0, b.ext))
                gl_homes[b.home] = (r + b.size, e)
        fs += [gl(r, e) for _, (r, e) in sorted(gl_homes.items(), key=lambda kv: kv[0][1])]
        return GroupType(tuple(fs))


def descend(sc: DescentScenario) -> DescentOutcome:
    """Build the matched block/slot structure of a validated scenario."""
    validate_scenario(sc)
    q = sc.q
    dec_p = _MultisetProfile(sc.eps_prime, q).dec
    dec_d = _MultisetProfile(sc.eps_dblprime, q).dec

    mult_p_one = dec_p.get(ZERO, 0)
    mult_p_minus = dec_p.get(HALF, 0)
    mult_d_one = dec_d.get(ZERO, 0)
    mult_d_minus = dec_d.get(HALF, 0)
    x_prime = (mult_p_one - 1) // 2
    x_dbl = (mult_d_one - 1) // 2
    y_prime_raw = mult_p_minus // 2
    y_dbl_raw = mult_d_minus // 2
    pulled_prime = sc.form_class_prime == "split" and y_prime_raw == 1
    pulled_dbl = sc.form_class_dblprime == "split" and y_dbl_raw == 1
    y_prime = 0 if pulled_prime else y_prime_raw
    y_dbl = 0 if pulled_dbl else y_dbl_raw
    class_prime = sc.form_class_prime if y_prime else "split"
    class_dbl = sc.form_class_dblprime if y_dbl else "split"

    def sided_u(dec: dict[Fraction, int]) -> dict[Fraction, int]:
        return {
            r: k
            for r, k in dec.items()
            if r not in (ZERO, HALF) and is_self_inverse(orbit_of(r, q))
        }

    def sided_pairs(dec: dict[Fraction, int]) -> dict[Fraction, int]:
        out = {}
        for r, k in dec.items():
            if r in (ZERO, HALF):
                continue
            orb = orbit_of(r, q)
            if is_self_inverse(orb):
                continue
            key = pair_class_key(orb)
            if key not in out:
                out[key] = k
            elif out[key] != k:
                raise InvariantViolation("inverse orbits with unequal multiplicity")
        return out

    u_p = sided_u(dec_p)
    u_d = sided_u(dec_d)
    pairs_p = sided_pairs(dec_p)
    pairs_d = sided_pairs(dec_d)

    blocks: list[Block] = []

    def add_block(**kw) -> None:
        blocks.append(Block(bid=len(blocks), **kw))

    # Levi blocks, one per Frobenius orbit of each GL multiset
    for i, ms in enumerate(sc.eps_gl):
        dec = orbit_decomposition(ms, q)
        for rep in sorted(dec):
            mult = dec[rep]
            orb = orbit_of(rep, q)
            if rep == ZERO:
                tag, home, sb = "+", ("sp", 1), 1
            elif rep == HALF:
                tag, home, sb = "-", ("sp", -1), -1
            elif is_self_inverse(orb):
                tag, home, sb = "U", ("u", rep), 1
            else:
                tag, home, sb = "U", ("gl", pair_class_key(orb)), 1
            add_block(
                size=mult, ext=len(orb), origin="levi", owner=i, tag=tag,
                home=home, sbar0=sb, eta_exp=rep, eps_exp=rep,
            )

    # GL pulls from the endoscopic side: inverse-pair orbits
    for rep in sorted(pairs_p):
        orb = orbit_of(rep, q)
        add_block(
            size=pairs_p[rep], ext=len(orb), origin="pair_prime", owner=None, tag="U",
            home=("gl", rep), sbar0=1, eta_exp=rep, eps_exp=rep,
        )
    for rep in sorted(pairs_d):
        orb = orbit_of(rep, q)
        eta_orb = orbit_negate(orb)
        add_block(
            size=pairs_d[rep], ext=len(orb), origin="pair_dbl", owner=None, tag="U",
            home=("gl", pair_class_key(eta_orb)), sbar0=-1,
            eta_exp=orbit_rep(eta_orb), eps_exp=rep,
        )

    # GL pulls from split rank-one even parts
    if pulled_prime:
        add_block(
            size=1, ext=1, origin="so2_prime", owner=None, tag="-",
            home=("sp", -1), sbar0=-1, eta_exp=HALF, eps_exp=HALF,
        )
    if pulled_dbl:
        add_block(
            size=1, ext=1, origin="so2_dbl", owner=None, tag="+",
            home=("sp", 1), sbar0=-1, eta_exp=ZERO, eps_exp=HALF,
        )

    # unitary core slots, keyed by the self-inverse orbit on the big side
    slot_reps: set[Fraction] = set(u_p)
    for rep in u_d:
        slot_reps.add(orbit_rep(orbit_negate(orbit_of(rep, q))))
    for b in blocks:
        if b.home[0] == "u":
            slot_reps.add(b.home[1])
    u_slots = []
    for rep in sorted(slot_reps):
        orb = orbit_of(rep, q)
        neg_rep = orbit_rep(orbit_negate(orb))
        u_slots.append(
            USlot(
                eta_rep=rep,
                d=len(orb) // 2,
                k_prime=u_p.get(rep, 0),
                k_dbl=u_d.get(neg_rep, 0),
            )
        )

    outcome = DescentOutcome(
        scenario=sc,
        blocks=tuple(blocks),
        u_slots=tuple(u_slots),
        x_prime=x_prime,
        y_prime=y_prime,
        x_dbl=x_dbl,
        y_dbl=y_dbl,
        class_prime=class_prime,
        class_dbl=class_dbl,
        pulled_prime=pulled_prime,
        pulled_dbl=pulled_dbl,
    )
    _sanity(outcome)
    return outcome


def _sanity(outcome: DescentOutcome) -> None:
    """Dimension bookkeeping that must hold by construction."""
    sc = outcome.scenario
    # the matched element's +-1 eigenspaces, by multiplicity arithmetic:
    # +1 picks up the first side's ones (less the anchor) and the negated
    # minus-ones of the second side, and symmetrically
    prof_p = _MultisetProfile(sc.eps_prime, sc.q)
    prof_d = _MultisetProfile(sc.eps_dblprime, sc.q)
    mult_plus = prof_p.mult_one - 1 + prof_d.mult_minus
    mult_minus = prof_p.mult_minus + prof_d.mult_one - 1
    w_plus = outcome.x_prime + outcome.y_dbl + (1 if outcome.pulled_dbl else 0)
    w_minus = outcome.x_dbl + outcome.y_prime + (1 if outcome.pulled_prime else 0)
    if mult_plus != 2 * w_plus or mult_minus != 2 * w_minus:
        raise MatchingFailure("eigenspace dimensions do not match the slot widths")
    # each GL factor of the endoscopic centralizer must own exactly one block
    n_pairs = 0
    for prof in (prof_p, prof_d):
        seen: set[Fraction] = set()
        for r in prof.dec:
            if r in (ZERO, HALF) or _self_inverse_exp(r, sc.q):
                continue
            key = _pair_key_exp(r, sc.q)
            if key not in seen:
                seen.add(key)
                n_pairs += 1
    pulled = (1 if outcome.pulled_prime else 0) + (1 if outcome.pulled_dbl else 0)
    if sum(1 for b in outcome.blocks if b.origin != "levi") != n_pairs + pulled:
        raise MatchingFailure("pulled GL blocks do not exhaust the extra factors")


# ---------------------------------------------------------------------------
# base-point signs and placement


def sbar0_assign(outcome: DescentOutcome) -> dict[int, int]:
    """Base-point sign on every block: +1 on the plus and unitary Levi blocks,
    -1 on the minus ones; pulled blocks follow their factor pairing."""
    return {b.bid: b.sbar0 for b in outcome.blocks}


def sigma(outcome: DescentOutcome, block: Block, t: Sequence[int]) -> int:
    """Final sign of a block for the datum twisted by t."""
    mult = t[block.owner] if block.origin == "levi" else 1
    return block.sbar0 * mult


def placement(outcome: DescentOutcome, block: Block, t: Sequence[int]) -> tuple:
    """Destination of a block in the descended endoscopic group, by the
    base-point-times-twist rule."""
    s = sigma(outcome, block, t)
    kind = block.home[0]
    q = outcome.scenario.q
    if kind == "sp":
        if block.home[1] == 1:
            return ("p", "odd") if s == 1 else ("d", "even")
        return ("d", "odd") if s == 1 else ("p", "even")
    if kind == "u":
        rep = block.home[1]
        if s == 1:
            return ("p", "u", rep)
        return ("d", "u", _neg_rep_exp(rep, q))
    # gl home
    key = block.home[1]
    if s == 1:
        return ("p", "gl", key)
    return ("d", "gl", _pair_key_exp((key + HALF) % 1, q))


def placement_independent(outcome: DescentOutcome, block: Block, t: Sequence[int]) -> tuple:
    """Destination recomputed from scratch: twist the element, embed it by
    the side decomposition, and classify its eigenvalue orbit."""
    q = outcome.scenario.q
    if block.origin == "levi":
        side = "p" if t[block.owner] == 1 else "d"
        exp = block.eps_exp if side == "p" else (block.eps_exp + HALF) % 1
    elif block.origin == "pair_prime":
        side, exp = "p", block.eps_exp
    elif block.origin == "pair_dbl":
        side, exp = "d", block.eps_exp
    elif block.origin == "so2_prime":
        side, exp = "p", HALF
    else:
        side, exp = "d", HALF
    if exp == ZERO:
        return (side, "odd")
    if exp == HALF:
        return (side, "even")
    if _self_inverse_exp(exp, q):
        return (side, "u", orbit_rep(orbit_of(exp, q)))
    return (side, "gl", _pair_key_exp(exp, q))


def compatibility_check(outcome: DescentOutcome, t: Sequence[int]) -> bool:
    """The sign rule and the recomputed descent place every block alike."""
    if len(t) != outcome.i_count:
        raise InvariantViolation("one sign per GL block of the Levi is required")
    for b in outcome.blocks:
        if placement(outcome, b, t) != placement_independent(outcome, b, t):
            return False
    return True


# ---------------------------------------------------------------------------
# the two independent group computations for the pushed datum


def _merge_factor_list(parts: Iterable[tuple[FactorType, object]]) -> GroupType:
    return GroupType(tuple(f for f, _ in parts))


def gs_descended_types(
    outcome: DescentOutcome, t: Sequence[int]
) -> tuple[GroupType, GroupType]:
    """Centralizer of the twisted element in its endoscopic group, computed
    from raw eigenvalue multisets, and the same with the bar swap applied."""
    from .catalog import bar as bar_op

    sc = outcome.scenario
    prime = _exponent_counts(sc.eps_prime)
    dbl = _exponent_counts(sc.eps_dblprime)
    for i, ms in enumerate(sc.eps_gl):
        for x in ms.entries:
            e, f = x.exponent, (-x.exponent) % 1
            if t[i] == 1:
                prime[e] = prime.get(e, 0) + 1
                prime[f] = prime.get(f, 0) + 1
            else:
                en, fn = (e + HALF) % 1, (f + HALF) % 1
                dbl[en] = dbl.get(en, 0) + 1
                dbl[fn] = dbl.get(fn, 0) + 1
    gp = _centralizer_factors_counts(prime, sc.q, "odd_orthogonal", sc.form_class_prime)
    gd = _centralizer_factors_counts(dbl, sc.q, "odd_orthogonal", sc.form_class_dblprime)
    full = GroupType(tuple(f for f, _ in gp) + tuple(f for f, _ in gd))
    return full, bar_op(full)
