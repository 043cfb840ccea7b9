"""Strong exceptional collections and two-term resolutions with exact exponents.

A sheaf admitting a resolution

    0 -> (+) A_i^{a_i}  (i <= j)  ->  (+) A_i^{a_i}  (j < i <= m)  -> E -> 0

by the first m members of a strong exceptional collection (A_1..A_m, O) has
no cohomology, and the exponents are pinned down by Euler pairings against
the collection.  The closed forms below specialize this to the built-in
collections on Hirzebruch surfaces, blowups of the plane and blowups of
Hirzebruch surfaces; `solve_exponents` recomputes the same integers from the
pairing recurrences, giving an independent derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chern import (
    CharacterError,
    ChernCharacter,
    chi_integer,
    euler_pairing,
    line_bundle_character,
    twisted_chi,
)
from .cohomology import (
    Vanishing,
    h2_is_zero,
    hirzebruch_cohomology,
    vanishing_by_rules,
    _obviously_effective,
)
from .lattice import (
    DivisorClass,
    SurfaceModel,
    basis_divisor,
    canonical,
    chi_line_bundle,
    divisor_expr,
    zero_divisor,
)


class ResolutionError(ValueError):
    """Raised when resolution hypotheses fail; the message names the culprit."""


class InfeasibleResolutionError(ResolutionError):
    """A required exponent came out negative, so no such resolution exists."""


@dataclass(frozen=True)
class ExceptionalCollection:
    """An ordered list of line bundles ending in O, with a left/right split.

    ``bundles[:split_index]`` sit in the kernel of a two-term resolution and
    the rest of ``bundles[:-1]`` in the middle; the trailing structure sheaf
    never appears in resolutions.
    """

    surface: SurfaceModel
    bundles: tuple[DivisorClass, ...]
    split_index: int = 1

    def __post_init__(self):
        if not self.bundles or not self.bundles[-1].is_zero:
            raise ResolutionError("collections must end with the structure sheaf O")
        if not 0 <= self.split_index <= len(self.bundles) - 1:
            raise ResolutionError("split index out of range")

    @property
    def resolving(self) -> tuple[DivisorClass, ...]:
        return self.bundles[:-1]

    def with_split(self, j: int) -> "ExceptionalCollection":
        return ExceptionalCollection(self.surface, self.bundles, j)


def builtin_collection(surface: SurfaceModel) -> ExceptionalCollection:
    """The stock strong exceptional collection of the surface family.

    F_e:      O(-E-(e+1)F), O(-E-eF), O(-F), O
    Bl_k P2:  O(-2L), O(-L), O(-E_1), ..., O(-E_k), O
    Bl_k F_e: O(-E-(e+1)F), O(-E-eF), O(-F), O(-E_1), ..., O(-E_k), O
    """
    if surface.is_hirzebruch:
        E, F = basis_divisor(surface, "E"), basis_divisor(surface, "F")
        bundles = (-E - (surface.e + 1) * F, -E - surface.e * F, -F, zero_divisor(surface))
        return ExceptionalCollection(surface, bundles, 1)
    if surface.is_blowup_p2_like:
        L = basis_divisor(surface, "L")
        exc = tuple(-basis_divisor(surface, f"E{i}") for i in range(1, surface.k + 1))
        return ExceptionalCollection(surface, (-2 * L, -L) + exc + (zero_divisor(surface),), 1)
    if surface.is_blowup_hirzebruch:
        E, F = basis_divisor(surface, "E"), basis_divisor(surface, "F")
        exc = tuple(-basis_divisor(surface, f"E{i}") for i in range(1, surface.k + 1))
        bundles = (-E - (surface.e + 1) * F, -E - surface.e * F, -F) + exc
        return ExceptionalCollection(surface, bundles + (zero_divisor(surface),), 1)
    raise ResolutionError(f"no built-in collection on {surface}")


# ---------------------------------------------------------------------------
# Cohomology queries used by the verification and the exponent solver
# ---------------------------------------------------------------------------


def _all_cohomology_zero(D: DivisorClass) -> tuple[bool, str]:
    """Definitive 'every h^i vanishes' check for collection differences."""
    s = D.surface
    if s.is_hirzebruch:
        vec = hirzebruch_cohomology(D)
        return vec.as_tuple() == (0, 0, 0), f"exact {vec}"
    verdict = vanishing_by_rules(D)
    if verdict.all_cohomology is Vanishing.ZERO:
        return True, "stock class"
    if _obviously_effective(D):
        return False, "effective class has sections"
    if chi_line_bundle(D) != 0:
        return False, "nonzero Euler characteristic"
    if _obviously_effective(canonical(s) - D):
        return False, "Serre-dual sections"
    return False, "vanishing not certified"


def _higher_cohomology_zero(D: DivisorClass) -> tuple[bool, str]:
    s = D.surface
    if s.is_hirzebruch:
        vec = hirzebruch_cohomology(D)
        return vec.higher_vanishes, f"exact {vec}"
    verdict = vanishing_by_rules(D)
    if verdict.higher_cohomology is Vanishing.ZERO:
        return True, "derived"
    return False, "vanishing not certified"


def verify_strong_exceptional(coll: ExceptionalCollection):
    """Check Ext^*(A_t, A_s) = 0 for s < t and Ext^{>0}(A_s, A_t) = 0.

    Returns (True, None) or (False, (s, t, reason)) for the first failing
    ordered pair, with 0-based indices into the collection.
    """
    bundles = coll.bundles
    for s in range(len(bundles)):
        for t in range(s + 1, len(bundles)):
            back = bundles[s] - bundles[t]
            ok, why = _all_cohomology_zero(back)
            if not ok:
                return False, (s, t, f"Ext^*({divisor_expr(bundles[t])}, {divisor_expr(bundles[s])}) != 0: {why}")
            fwd = bundles[t] - bundles[s]
            ok, why = _higher_cohomology_zero(fwd)
            if not ok:
                return False, (s, t, f"Ext^{{>0}}({divisor_expr(bundles[s])}, {divisor_expr(bundles[t])}) != 0: {why}")
    return True, None


@lru_cache(maxsize=None)
def hom_dimension(A: DivisorClass, B: DivisorClass) -> int:
    """dim Hom(O(A), O(B)) = h0(B - A), computed exactly.

    On blowups this routes through the vanishing rules plus Riemann-Roch
    (h0 = chi once higher cohomology vanishes); differences between members
    of the built-in collections are always rule-decidable, and anything else
    raises rather than consulting the probabilistic oracle.
    """
    D = B - A
    if D.surface.is_hirzebruch:
        return hirzebruch_cohomology(D).h0
    verdict = vanishing_by_rules(D)
    if verdict.all_cohomology is Vanishing.ZERO:
        return 0
    if verdict.higher_cohomology is Vanishing.ZERO:
        chi = chi_line_bundle(D)
        assert chi >= 0, f"derived vanishing with negative chi for {D}"
        return chi
    raise ResolutionError(f"hom dimension of {D} is not rule-decidable")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolutionReport:
    """Exponents of a two-term resolution, or a direct-sum degenerate case.

    ``exponents[i]`` counts ``collection.resolving[i]``; entries left of the
    split sit in the kernel.  ``direct_sum`` replaces the resolution by
    O(D)^r when set (the sheaf itself splits).  ``feasible`` is False when
    some exponent is negative, meaning no such resolution exists.
    """

    collection: ExceptionalCollection
    exponents: tuple[int, ...]
    target: ChernCharacter
    form: str = "generic"
    direct_sum: tuple[DivisorClass, int] | None = None

    @property
    def feasible(self) -> bool:
        return all(a >= 0 for a in self.exponents)

    def left(self) -> tuple[tuple[DivisorClass, int], ...]:
        j = self.collection.split_index
        return tuple(zip(self.collection.resolving[:j], self.exponents[:j]))

    def right(self) -> tuple[tuple[DivisorClass, int], ...]:
        j = self.collection.split_index
        return tuple(zip(self.collection.resolving[j:], self.exponents[j:]))

    def cokernel_character(self) -> ChernCharacter:
        """Alternating sum of the exponent-weighted bundle characters."""
        if self.direct_sum is not None:
            D, mult = self.direct_sum
            ch = line_bundle_character(D)
            return ChernCharacter(mult * ch.r, mult * ch.c1, mult * ch.ch2)
        r = 0
        c1 = zero_divisor(self.collection.surface)
        ch2 = Fraction(0)
        for bundle, count in self.right():
            ch = line_bundle_character(bundle)
            r += count
            c1 = c1 + count * ch.c1
            ch2 += count * ch.ch2
        for bundle, count in self.left():
            ch = line_bundle_character(bundle)
            r -= count
            c1 = c1 - count * ch.c1
            ch2 -= count * ch.ch2
        return ChernCharacter(r, c1, ch2)

    def bookkeeping_ok(self) -> bool:
        v = self.cokernel_character()
        return (v.r, v.c1, v.ch2) == (self.target.r, self.target.c1, self.target.ch2)

    def to_json_dict(self) -> dict:
        out: dict = {"collection": [divisor_expr(b) for b in self.collection.bundles]}
        if self.direct_sum is not None:
            D, mult = self.direct_sum
            out["direct_sum"] = {divisor_expr(D): mult}
        else:
            out["left"] = {divisor_expr(b): a for b, a in self.left() if a}
            out["right"] = {divisor_expr(b): a for b, a in self.right() if a}
        out["form"] = self.form
        v = self.target
        out["cokernel"] = {"r": v.r, "c1": divisor_expr(v.c1), "chi": chi_integer(v)}
        return out


# ---------------------------------------------------------------------------
# The exponent solver and the closed forms
# ---------------------------------------------------------------------------


def _as_int(x: Fraction, what: str) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise CharacterError(f"{what} is not integral: {x}")
    return int(x)


def solve_exponents(v: ChernCharacter, coll: ExceptionalCollection) -> ResolutionReport:
    """Exponents from the pairing recurrences of a split collection.

    Left factors satisfy a_s = -chi(v, A_s) - sum_{i<s} a_i hom(A_i, A_s),
    right factors a_t = chi(A_t, v) - sum_{i>t} a_i hom(A_t, A_i), computed
    top-down.  Negative values are reported as infeasible, never clamped.
    """
    if chi_integer(v) != 0:
        raise CharacterError("resolutions are computed for characters with chi = 0")
    bundles = coll.resolving
    j = coll.split_index
    m = len(bundles)
    exps: list[int | None] = [None] * m
    for s in range(j):
        val = -euler_pairing(v, line_bundle_character(bundles[s]))
        for i in range(s):
            val -= exps[i] * hom_dimension(bundles[i], bundles[s])
        exps[s] = _as_int(val, f"exponent of {divisor_expr(bundles[s])}")
    for t in range(m - 1, j - 1, -1):
        val = euler_pairing(line_bundle_character(bundles[t]), v)
        for i in range(t + 1, m):
            val -= exps[i] * hom_dimension(bundles[t], bundles[i])
        exps[t] = _as_int(val, f"exponent of {divisor_expr(bundles[t])}")
    return ResolutionReport(coll, tuple(exps), v)


def hirzebruch_resolution(v: ChernCharacter) -> ResolutionReport:
    """Closed-form resolution on F_e for a normalized character with chi = 0.

    Exponents: a = l - ke + k + r on O(-E-(e+1)F), b = -chi(E(-E)) on
    O(-E-eF), c = k + r on O(-F).  The rank-r twist of O(-1,-1) on F_0
    (k = l = -r) is returned as a direct sum instead.  Negative b means the
    section-obstruction regime; negative a only happens for e <= 1 pockets
    where no semistable sheaf exists, and both raise.
    """
    s = v.surface
    if not s.is_hirzebruch:
        raise ResolutionError("hirzebruch_resolution expects a Hirzebruch model")
    if v.r < 2:
        raise ResolutionError("rank must be at least 2")
    if chi_integer(v) != 0:
        raise ResolutionError("resolutions are computed for characters with chi = 0")
    from .chern import hirzebruch_normalize

    if hirzebruch_normalize(v)[1]:
        raise ResolutionError("character must be normalized (k/r >= -1) first")
    e, r = s.e, v.r
    k, ell = v.c1.coords
    coll = builtin_collection(s)
    if e == 0 and k == -r and ell == -r:
        E, F = basis_divisor(s, "E"), basis_divisor(s, "F")
        report = ResolutionReport(coll, (0, 0, 0), v, form="direct-sum", direct_sum=(-E - F, r))
        assert report.bookkeeping_ok()
        return report
    b = -twisted_chi(v, -basis_divisor(s, "E"))
    if b < 0:
        raise ResolutionError(f"chi(E(-E)) = {-b} > 0: sections obstruct the resolution")
    a = ell - k * e + k + r
    c = k + r
    if a < 0 or c < 0:
        raise InfeasibleResolutionError(
            f"exponents (a, b, c) = ({a}, {b}, {c}) include a negative entry; "
            "no semistable sheaf has this character"
        )
    report = ResolutionReport(coll, (a, b, c), v)
    assert report.bookkeeping_ok(), f"exponent bookkeeping failed for {v}"
    return report


def _slope_data(v: ChernCharacter) -> tuple[Fraction, list[Fraction]]:
    nu = v.nu().coords
    return nu[0], [-c for c in nu[1:]]


def blowup_resolution(v: ChernCharacter) -> ResolutionReport:
    """Closed-form resolution on a blowup of the plane.

    Requires chi = 0, rank >= 2, slope delta L - sum alpha_i E_i with
    delta >= 0, alpha_i >= 0 and delta - sum alpha_i >= -1.  Exponents are
    a = r (delta - sum alpha_i + 1), c_i = r alpha_i and
    b = | r + a - sum c_i |; O(-L) moves to the kernel side exactly when
    delta - 2 sum alpha_i + 2 is negative.
    """
    s = v.surface
    if not s.is_blowup_p2_like:
        raise ResolutionError("blowup_resolution expects a blowup of the plane")
    if v.r < 2:
        raise ResolutionError("rank must be at least 2")
    if chi_integer(v) != 0:
        raise ResolutionError("resolutions are computed for characters with chi = 0")
    delta, alphas = _slope_data(v)
    if delta < 0:
        raise ResolutionError(f"hypothesis delta >= 0 fails: delta = {delta}")
    for i, alpha in enumerate(alphas, start=1):
        if alpha < 0:
            raise ResolutionError(f"hypothesis alpha_{i} >= 0 fails: alpha_{i} = {alpha}")
    if delta - sum(alphas) < -1:
        raise ResolutionError(
            f"hypothesis delta - sum alpha_i >= -1 fails: {delta - sum(alphas)}"
        )
    r = v.r
    a = _as_int(r * (delta - sum(alphas) + 1), "exponent a")
    cs = [_as_int(r * alpha, f"exponent c_{i}") for i, alpha in enumerate(alphas, start=1)]
    b_signed = r + a - sum(cs)  # equals r (delta - 2 sum alpha_i + 2)
    form = "eqfirst" if b_signed >= 0 else "eqsecond"
    coll = builtin_collection(s).with_split(1 if b_signed >= 0 else 2)
    report = ResolutionReport(coll, (a, abs(b_signed), *cs), v, form=form)
    assert report.feasible and report.bookkeeping_ok(), f"bookkeeping failed for {v}"
    return report


def blowup_hirzebruch_resolution(v: ChernCharacter) -> ResolutionReport:
    """Closed-form resolution on a blowup of a Hirzebruch surface.

    For slope alpha E + beta F - sum alpha_i E_i the hypotheses are
    alpha_i >= 0, alpha - sum alpha_i >= -1 and
    beta - sum alpha_i + 1 >= max((e-1) alpha, e alpha); the exponents are
    a = r (beta - (e-1) alpha - sum alpha_i + 1) on O(-E-(e+1)F),
    b = r (beta - e alpha - sum alpha_i + 1) on O(-E-eF),
    c = r (alpha - sum alpha_i + 1) on O(-F) and d_i = r alpha_i on O(-E_i).
    """
    s = v.surface
    if not s.is_blowup_hirzebruch:
        raise ResolutionError("blowup_hirzebruch_resolution expects a blowup of a Hirzebruch surface")
    if v.r < 2:
        raise ResolutionError("rank must be at least 2")
    if chi_integer(v) != 0:
        raise ResolutionError("resolutions are computed for characters with chi = 0")
    e, r = s.e, v.r
    nu = v.nu().coords
    alpha, beta = nu[0], nu[1]
    alphas = [-c for c in nu[2:]]
    for i, ai in enumerate(alphas, start=1):
        if ai < 0:
            raise ResolutionError(f"hypothesis alpha_{i} >= 0 fails: alpha_{i} = {ai}")
    if alpha - sum(alphas) < -1:
        raise ResolutionError(
            f"hypothesis alpha - sum alpha_i >= -1 fails: {alpha - sum(alphas)}"
        )
    bound = max((e - 1) * alpha, e * alpha)
    if beta - sum(alphas) + 1 < bound:
        raise ResolutionError(
            f"hypothesis beta - sum alpha_i + 1 >= max((e-1)alpha, e alpha) fails: "
            f"{beta - sum(alphas) + 1} < {bound}"
        )
    a = _as_int(r * (beta - (e - 1) * alpha - sum(alphas) + 1), "exponent a")
    b = _as_int(r * (beta - e * alpha - sum(alphas) + 1), "exponent b")
    c = _as_int(r * (alpha - sum(alphas) + 1), "exponent c")
    ds = [_as_int(r * ai, f"exponent d_{i}") for i, ai in enumerate(alphas, start=1)]
    report = ResolutionReport(builtin_collection(s), (a, b, c, *ds), v)
    assert report.feasible and report.bookkeeping_ok(), f"bookkeeping failed for {v}"
    return report


def prioritary_hypotheses_check(coll: ExceptionalCollection, F: DivisorClass) -> bool:
    """Cohomological criterion for cokernels of the split collection to be
    F-prioritary: Ext^1(A_i, A_s(-F)) = 0 for i left and s right, and
    Ext^2(A_i, A_s(-F)) = 0 for i, s right (the structure sheaf counts as a
    right member)."""
    j = coll.split_index
    left = coll.bundles[:j]
    right = coll.bundles[j:]

    def ext1_vanishes(D: DivisorClass) -> bool:
        if D.surface.is_hirzebruch:
            return hirzebruch_cohomology(D).h1 == 0
        return vanishing_by_rules(D).higher_cohomology is Vanishing.ZERO

    for A in left:
        for B in right:
            if not ext1_vanishes(B - A - F):
                return False
    for A in right:
        for B in right:
            if not h2_is_zero(B - A - F):
                return False
    return True
