"""Picard lattices of rational surfaces: divisor arithmetic and cone/Weyl tools.

Supported surfaces and their fixed ordered bases:

* Hirzebruch surface ``F_e`` (``e >= 0``): basis ``(E, F)`` with
  ``E^2 = -e``, ``E.F = 1``, ``F^2 = 0``.
* Blowup of the plane at ``k`` distinct points: basis ``(L, E1, ..., Ek)``
  with ``L^2 = 1``, ``L.Ei = 0``, ``Ei.Ej = -delta_ij``.
* Blowup of ``F_e`` (``e >= 2``) at ``k`` points off the negative section:
  basis ``(E, F, E1, ..., Ek)``.
* Del Pezzo surface of degree ``4 <= d <= 7``: the blowup of the plane at
  ``9 - d`` general points, with the (-1)-curve and nef-cone machinery
  enabled.

All arithmetic is exact (Python integers and fractions); no floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class LatticeError(ValueError):
    """Raised for unsupported surfaces or malformed lattice data."""


class ParseError(ValueError):
    """Raised when a divisor expression or surface spec does not parse."""

    def __init__(self, message: str, fragment: str = ""):
        self.fragment = fragment
        super().__init__(message if not fragment else f"{message} (at {fragment!r})")


@dataclass(frozen=True)
class PointConfig:
    """Position data for the blown-up points.

    ``general`` points are sampled uniformly at random, ``collinear`` forces
    the listed (1-based) indices onto a common line, ``explicit`` uses the
    given affine coordinates over the oracle's finite field.
    """

    kind: str = "general"
    collinear: tuple[int, ...] = ()
    points: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.kind not in ("general", "collinear", "explicit"):
            raise LatticeError(f"unknown point configuration kind {self.kind!r}")


GENERAL = PointConfig()


def collinear_config(indices) -> PointConfig:
    idx = tuple(sorted(int(i) for i in indices))
    if len(idx) < 2 or len(set(idx)) != len(idx):
        raise LatticeError("collinear configuration needs at least two distinct indices")
    return PointConfig("collinear", collinear=idx)


def explicit_config(points) -> PointConfig:
    pts = tuple((int(x), int(y)) for x, y in points)
    if len(set(pts)) != len(pts):
        raise LatticeError("explicit points must be pairwise distinct")
    return PointConfig("explicit", points=pts)


@dataclass(frozen=True)
class SurfaceModel:
    """A rational surface together with its fixed Picard basis."""

    kind: str  # "hirzebruch" | "blowup_p2" | "blowup_hirzebruch" | "del_pezzo"
    e: int = 0
    k: int = 0
    config: PointConfig = GENERAL

    def __post_init__(self):
        if self.kind == "hirzebruch":
            if self.e < 0:
                raise LatticeError("Hirzebruch parameter e must be nonnegative")
        elif self.kind == "blowup_p2":
            if self.k < 1:
                raise LatticeError("blowup of the plane needs at least one point")
            if self.config.kind == "collinear" and (
                not self.config.collinear or max(self.config.collinear) > self.k
            ):
                raise LatticeError("collinear indices out of range")
            if self.config.kind == "explicit" and len(self.config.points) != self.k:
                raise LatticeError("explicit configuration must list one point per blowup")
        elif self.kind == "blowup_hirzebruch":
            if self.e < 2:
                raise LatticeError("blowup of a Hirzebruch surface assumes e >= 2")
            if self.k < 1:
                raise LatticeError("blowup of a Hirzebruch surface needs at least one point")
        elif self.kind == "del_pezzo":
            if not 4 <= 9 - self.k <= 7:
                raise LatticeError("del Pezzo surfaces are supported in degrees 4..7")
        else:
            raise LatticeError(f"unknown surface kind {self.kind!r}")

    # -- classification helpers -------------------------------------------------

    @property
    def is_hirzebruch(self) -> bool:
        return self.kind == "hirzebruch"

    @property
    def is_del_pezzo(self) -> bool:
        return self.kind == "del_pezzo"

    @property
    def is_blowup_p2_like(self) -> bool:
        """True for blowups of the plane, including del Pezzo models."""
        return self.kind in ("blowup_p2", "del_pezzo")

    @property
    def is_blowup_hirzebruch(self) -> bool:
        return self.kind == "blowup_hirzebruch"

    @property
    def degree(self) -> int:
        if not self.is_del_pezzo:
            raise LatticeError("degree is defined for del Pezzo models only")
        return 9 - self.k

    @property
    def rank(self) -> int:
        if self.is_hirzebruch:
            return 2
        if self.is_blowup_p2_like:
            return self.k + 1
        return self.k + 2

    @property
    def basis(self) -> tuple[str, ...]:
        if self.is_hirzebruch:
            return ("E", "F")
        if self.is_blowup_p2_like:
            return ("L",) + tuple(f"E{i}" for i in range(1, self.k + 1))
        return ("E", "F") + tuple(f"E{i}" for i in range(1, self.k + 1))

    def basis_index(self, symbol: str) -> int:
        try:
            return self.basis.index(symbol)
        except ValueError:
            raise ParseError(
                f"symbol {symbol!r} is not in the basis {'/'.join(self.basis)} of {self.spec()}",
                symbol,
            ) from None

    @property
    def exceptional_indices(self) -> range:
        """Coordinate positions of the exceptional classes E1..Ek."""
        if self.is_blowup_p2_like:
            return range(1, self.k + 1)
        if self.is_blowup_hirzebruch:
            return range(2, self.k + 2)
        return range(0, 0)

    def spec(self) -> str:
        """The surface in the CLI spec-string format."""
        if self.is_hirzebruch:
            return f"F{self.e}"
        if self.is_del_pezzo:
            return f"dp{self.degree}"
        if self.kind == "blowup_p2":
            base = f"blp2:k={self.k}"
            if self.config.kind == "collinear":
                base += ":collinear=" + ",".join(str(i) for i in self.config.collinear)
            return base
        return f"blF{self.e}:k={self.k}"

    def __str__(self) -> str:
        return self.spec()


def hirzebruch(e: int) -> SurfaceModel:
    return SurfaceModel("hirzebruch", e=e)


def blowup_p2(k: int, config: PointConfig = GENERAL) -> SurfaceModel:
    return SurfaceModel("blowup_p2", k=k, config=config)


def blowup_hirzebruch(e: int, k: int) -> SurfaceModel:
    return SurfaceModel("blowup_hirzebruch", e=e, k=k)


def del_pezzo(degree: int) -> SurfaceModel:
    if not 4 <= degree <= 7:
        raise LatticeError("del Pezzo surfaces are supported in degrees 4..7")
    return SurfaceModel("del_pezzo", k=9 - degree)


# ---------------------------------------------------------------------------
# Divisor classes
# ---------------------------------------------------------------------------


class _DivisorBase:
    __slots__ = ()

    def _like(self, coords):
        return type(self)(self.surface, tuple(coords))

    def __add__(self, other):
        _require_same_surface(self, other)
        return self._like(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        _require_same_surface(self, other)
        return self._like(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return self._like(-a for a in self.coords)

    def __mul__(self, scalar):
        return self._like(scalar * a for a in self.coords)

    __rmul__ = __mul__

    def dot(self, other):
        return intersect(self, other)

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __str__(self) -> str:
        return divisor_expr(self)


@dataclass(frozen=True)
class DivisorClass(_DivisorBase):
    """An integral divisor class, as a coordinate vector in the fixed basis."""

    surface: SurfaceModel
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.surface.rank:
            raise LatticeError(
                f"expected {self.surface.rank} coordinates on {self.surface}, got {len(self.coords)}"
            )
        if not all(isinstance(c, int) for c in self.coords):
            raise LatticeError("divisor coordinates must be integers")

    def as_q(self) -> "QDivisor":
        return QDivisor(self.surface, tuple(Fraction(c) for c in self.coords))


@dataclass(frozen=True)
class QDivisor(_DivisorBase):
    """A divisor class with rational coordinates (total slopes live here)."""

    surface: SurfaceModel
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.surface.rank:
            raise LatticeError(
                f"expected {self.surface.rank} coordinates on {self.surface}, got {len(self.coords)}"
            )
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def clear_denominators(self) -> tuple[DivisorClass, int]:
        """Smallest positive m with m*self integral, and that integral class."""
        m = 1
        for c in self.coords:
            m = m * c.denominator // _gcd(m, c.denominator)
        integral = DivisorClass(self.surface, tuple(int(c * m) for c in self.coords))
        return integral, m


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _require_same_surface(d1, d2):
    if d1.surface != d2.surface:
        raise LatticeError(f"divisors live on different surfaces: {d1.surface} vs {d2.surface}")


def divisor(surface: SurfaceModel, *coords) -> DivisorClass:
    return DivisorClass(surface, tuple(int(c) for c in coords))


def basis_divisor(surface: SurfaceModel, symbol: str) -> DivisorClass:
    coords = [0] * surface.rank
    coords[surface.basis_index(symbol)] = 1
    return DivisorClass(surface, tuple(coords))


def zero_divisor(surface: SurfaceModel) -> DivisorClass:
    return DivisorClass(surface, (0,) * surface.rank)


# ---------------------------------------------------------------------------
# Intersection theory
# ---------------------------------------------------------------------------


def intersect(d1, d2):
    """Value of the intersection form; exact integer or Fraction."""
    _require_same_surface(d1, d2)
    s = d1.surface
    u, v = d1.coords, d2.coords
    if s.is_blowup_p2_like:
        val = u[0] * v[0]
        for i in range(1, len(u)):
            val -= u[i] * v[i]
        return val
    # Hirzebruch block (E, F), possibly followed by exceptional classes.
    val = -s.e * u[0] * v[0] + u[0] * v[1] + u[1] * v[0]
    for i in range(2, len(u)):
        val -= u[i] * v[i]
    return val


@lru_cache(maxsize=None)
def canonical(surface: SurfaceModel) -> DivisorClass:
    """The canonical class in the fixed basis."""
    if surface.is_hirzebruch:
        return DivisorClass(surface, (-2, -(surface.e + 2)))
    if surface.is_blowup_p2_like:
        return DivisorClass(surface, (-3,) + (1,) * surface.k)
    return DivisorClass(surface, (-2, -(surface.e + 2)) + (1,) * surface.k)


def chi_line_bundle(D: DivisorClass) -> int:
    """Euler characteristic of O(D) by Riemann-Roch: 1 + (D^2 - D.K)/2."""
    K = canonical(D.surface)
    val = Fraction(2 + intersect(D, D) - intersect(D, K), 2)
    if val.denominator != 1:
        raise LatticeError(f"non-integral Euler characteristic for {D}")
    return int(val)


@lru_cache(maxsize=None)
def neg_one_curves(surface: SurfaceModel) -> tuple[DivisorClass, ...]:
    """All classes of (-1)-curves on a del Pezzo model, in a fixed order.

    Exceptional curves first, then lines through two of the points, then the
    conic through five points when it exists.  Each class C satisfies
    C^2 = -1 and -K.C = 1; in degrees 7/6/5/4 there are 3/6/10/16 of them.
    """
    if not surface.is_del_pezzo:
        raise LatticeError("(-1)-curve enumeration is implemented for del Pezzo models")
    k = surface.k
    curves = [basis_divisor(surface, f"E{i}") for i in range(1, k + 1)]
    L = basis_divisor(surface, "L")
    for i, j in itertools.combinations(range(1, k + 1), 2):
        curves.append(L - basis_divisor(surface, f"E{i}") - basis_divisor(surface, f"E{j}"))
    if k >= 5:
        for combo in itertools.combinations(range(1, k + 1), 5):
            conic = 2 * L
            for i in combo:
                conic = conic - basis_divisor(surface, f"E{i}")
            curves.append(conic)
    return tuple(curves)


@lru_cache(maxsize=None)
def is_nef(D: DivisorClass) -> bool:
    """Nef test against the named dual-cone generators.

    On F_e the nef cone is spanned by F and E+eF; on a del Pezzo surface a
    class is nef iff it meets every (-1)-curve nonnegatively.  Other models
    are refused rather than guessed at.
    """
    s = D.surface
    if s.is_hirzebruch:
        # the effective cone is spanned by E and F, so nef means D.E, D.F >= 0
        # (equivalently, D lies in the cone spanned by F and E + eF)
        return intersect(D, basis_divisor(s, "E")) >= 0 and intersect(D, basis_divisor(s, "F")) >= 0
    if s.is_del_pezzo:
        return all(intersect(D, C) >= 0 for C in neg_one_curves(s))
    raise LatticeError(f"nef testing is not supported on {s}")


def is_effective_hirzebruch(D: DivisorClass) -> bool:
    """Effectivity on F_e: aE + bF is effective iff a >= 0 and b >= 0."""
    if not D.surface.is_hirzebruch:
        raise LatticeError("effectivity test is for Hirzebruch surfaces")
    return D.coords[0] >= 0 and D.coords[1] >= 0


# ---------------------------------------------------------------------------
# Weyl group action on blowups of the plane
# ---------------------------------------------------------------------------


def _check_root(root: DivisorClass) -> None:
    if not root.surface.is_blowup_p2_like:
        raise LatticeError("Weyl reflections act on blowups of the plane")
    K = canonical(root.surface)
    if intersect(root, root) != -2 or intersect(root, K) != 0:
        raise LatticeError(
            f"{root} is not a reflection root (expected Ei-Ej or L-Ei-Ej-Em, with square -2)"
        )


def weyl_reflect(D: DivisorClass, root: DivisorClass) -> DivisorClass:
    """Reflection s(D) = D + (D.root) root in a (-2)-root orthogonal to K."""
    _require_same_surface(D, root)
    _check_root(root)
    return D + intersect(D, root) * root


def transposition_root(surface: SurfaceModel, i: int, j: int) -> DivisorClass:
    return basis_divisor(surface, f"E{i}") - basis_divisor(surface, f"E{j}")


def cremona_root(surface: SurfaceModel, i: int, j: int, m: int) -> DivisorClass:
    L = basis_divisor(surface, "L")
    return (
        L
        - basis_divisor(surface, f"E{i}")
        - basis_divisor(surface, f"E{j}")
        - basis_divisor(surface, f"E{m}")
    )


def apply_word(D: DivisorClass, word) -> DivisorClass:
    """Apply a sequence of reflections, first root first."""
    for root in word:
        D = weyl_reflect(D, root)
    return D


def inverse_word(word):
    """Each reflection is an involution, so the inverse word is the reverse."""
    return tuple(reversed(tuple(word)))


def weyl_move_curve_to_last(C: DivisorClass) -> tuple[DivisorClass, ...]:
    """A reflection word w with w(C) = E_k, for a (-1)-class C on a del Pezzo.

    Greedy Cremona reduction on the curve's degree: a conic class drops to a
    line class, a line class to an exceptional one, and a transposition
    finishes.  Needs at least three exceptional classes.
    """
    s = C.surface
    if not s.is_del_pezzo or s.k < 3:
        raise LatticeError("curve normalization needs a del Pezzo model with k >= 3")
    if C not in neg_one_curves(s):
        raise LatticeError(f"{C} is not a (-1)-curve class on {s}")
    k = s.k
    word: list[DivisorClass] = []
    cur = C
    while True:
        deg = intersect(cur, basis_divisor(s, "L"))
        hit = [i for i in range(1, k + 1) if cur.coords[i] < 0]
        if deg == 0:
            # cur = E_i for some i
            i = next(i for i in range(1, k + 1) if cur.coords[i] == 1)
            if i != k:
                word.append(transposition_root(s, i, k))
                cur = weyl_reflect(cur, word[-1])
            break
        if deg == 1:
            # L - E_i - E_j reflects to E_m in the root L - E_i - E_j - E_m
            i, j = hit
            m = k if k not in hit else min(x for x in range(1, k + 1) if x not in hit)
            root = cremona_root(s, i, j, m)
        else:
            # the conic hits five points; a root on three of them (keeping
            # E_k inside so the leftover line misses it) drops the degree
            triple = ([k] if k in hit else [])[:1] + [i for i in hit if i != k]
            root = cremona_root(s, *sorted(triple[:3]))
        word.append(root)
        cur = weyl_reflect(cur, root)
    assert cur == basis_divisor(s, f"E{k}"), f"normalization of {C} failed"
    return tuple(word)


@lru_cache(maxsize=None)
def _weyl_generators(surface: SurfaceModel) -> tuple[DivisorClass, ...]:
    gens = [transposition_root(surface, i, i + 1) for i in range(1, surface.k)]
    if surface.k >= 3:
        gens.append(cremona_root(surface, 1, 2, 3))
    return tuple(gens)


@lru_cache(maxsize=None)
def weyl_orbit(D: DivisorClass) -> frozenset[DivisorClass]:
    """The full orbit of D under the Weyl group (finite for k <= 8)."""
    if not D.surface.is_blowup_p2_like:
        raise LatticeError("Weyl orbits are computed on blowups of the plane")
    gens = _weyl_generators(D.surface)
    seen = {D}
    frontier = [D]
    while frontier:
        nxt = []
        for cur in frontier:
            for g in gens:
                img = weyl_reflect(cur, g)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Expression grammar
# ---------------------------------------------------------------------------


def parse_divisor(text: str, surface: SurfaceModel) -> DivisorClass:
    """Parse an expression like ``3L-2E1-E2`` or ``2E+3F`` in the surface basis.

    Terms are joined by +/-, each an optional positive coefficient followed
    by a basis symbol; a bare ``0`` term is allowed; whitespace is ignored.
    """
    s = "".join(text.split())
    if not s:
        raise ParseError("empty divisor expression")
    coords = [0] * surface.rank
    pos = 0
    while pos < len(s):
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        digits = s[start:pos]
        if pos < len(s) and s[pos] in "LEF":
            symbol = s[pos]
            pos += 1
            if symbol == "E":
                sub = pos
                while pos < len(s) and s[pos].isdigit():
                    pos += 1
                symbol += s[sub:pos]
        elif digits == "0":
            continue  # bare zero term
        else:
            raise ParseError(
                "expected <coefficient?><symbol> with symbol one of "
                + "/".join(surface.basis),
                s[start : start + 8] or s[max(0, start - 1) :][:8],
            )
        coeff = int(digits) if digits else 1
        coords[surface.basis_index(symbol)] += sign * coeff
    return DivisorClass(surface, tuple(coords))


def divisor_expr(D) -> str:
    """Render a divisor class back into the expression grammar."""
    parts = []
    for coeff, sym in zip(D.coords, D.surface.basis):
        if coeff == 0:
            continue
        mag = abs(coeff)
        mag_str = "" if mag == 1 else str(mag)
        parts.append(("-" if coeff < 0 else "+", f"{mag_str}{sym}"))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, term in parts[1:]:
        out += sign + term
    return out


def parse_surface(text: str) -> SurfaceModel:
    """Parse a surface spec: ``F<e>``, ``blp2:k=<k>[:collinear=i,j,...]``,
    ``blF<e>:k=<k>`` or ``dp<degree>``."""
    try:
        return _parse_surface(text)
    except LatticeError as exc:
        raise ParseError(str(exc), text.strip()) from None


def _parse_surface(text: str) -> SurfaceModel:
    s = text.strip()
    if s.startswith("dp"):
        tail = s[2:]
        if not tail.isdigit():
            raise ParseError("expected dp<degree> with degree 4..7", s)
        return del_pezzo(int(tail))
    if s.startswith("blF"):
        head, sep, tail = s.partition(":")
        e_part = head[3:]
        if not e_part.isdigit() or not sep or not tail.startswith("k="):
            raise ParseError("expected blF<e>:k=<k>", s)
        if not tail[2:].isdigit():
            raise ParseError("expected blF<e>:k=<k>", tail)
        return blowup_hirzebruch(int(e_part), int(tail[2:]))
    if s.startswith("blp2"):
        fields = s.split(":")
        if len(fields) < 2 or not fields[1].startswith("k=") or not fields[1][2:].isdigit():
            raise ParseError("expected blp2:k=<k>[:collinear=i,j,...]", s)
        k = int(fields[1][2:])
        config = GENERAL
        for field in fields[2:]:
            if field.startswith("collinear="):
                try:
                    config = collinear_config(int(i) for i in field[10:].split(","))
                except (ValueError, LatticeError) as exc:
                    raise ParseError(f"bad collinear index list: {exc}", field) from None
            else:
                raise ParseError("unknown surface option", field)
        return blowup_p2(k, config)
    if s.startswith("F"):
        tail = s[1:]
        if not tail.isdigit():
            raise ParseError("expected F<e> with e >= 0", s)
        return hirzebruch(int(tail))
    raise ParseError("expected F<e>, blp2:k=<k>[:collinear=...], blF<e>:k=<k> or dp<degree>", s)
