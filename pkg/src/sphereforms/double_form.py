"""The graded algebra of double forms with polynomial coefficients.

A double form is stored as a finite sum of terms ``poly * w1 (x) w2`` where
``w1`` and ``w2`` are strictly increasing words of wedge generators in the
first and second tensor slot.  Ordinary differential forms are exactly the
double forms whose second-slot words are all empty.

The wedge product carries no cross-slot sign: the words of each slot are
concatenated and sorted independently, and the two signs multiply.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

from .kernel import GR_ONE, GR_ZERO, GaussianRational, MultiPolynomial, Space

SLOT1, SLOT2 = 0, 1
KIND_DZ, KIND_DZETA = 0, 1


class FormError(ValueError):
    pass


class DegreeMismatchError(FormError):
    pass


def generator(space: Space, slot: int, kind: int, pos: int) -> int:
    """Generator id; the total order is (slot, kind, index order)."""
    return slot * 2 * space.n + kind * space.n + pos


def gen_slot(space: Space, gid: int) -> int:
    return gid // (2 * space.n)


def gen_kind(space: Space, gid: int) -> int:
    return (gid % (2 * space.n)) // space.n


def gen_pos(space: Space, gid: int) -> int:
    return gid % space.n


def gen_label(space: Space, gid: int) -> str:
    slot = gen_slot(space, gid)
    kind = "dz" if gen_kind(space, gid) == KIND_DZ else "dzeta"
    lbl = space.label(gen_pos(space, gid))
    return ("~" if slot == SLOT2 else "") + kind + lbl


def merge_words(a: tuple, b: tuple):
    """Merge two strictly increasing words; returns (word, sign) or None."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    out = []
    i = j = 0
    swaps = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            swaps += la - i
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), (-1 if swaps & 1 else 1)


def sort_word(word: Iterable[int]):
    """Sort an arbitrary generator sequence; returns (word, sign) or None."""
    seq = list(word)
    sign = 1
    # insertion sort with swap counting; words are short
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(seq)):
        if seq[i - 1] == seq[i]:
            return None
    return tuple(seq), sign


class DoubleForm:
    """Graded sum of double-form terms over a fixed :class:`Space`."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms: Mapping[tuple, MultiPolynomial] | None = None):
        self.space = space
        self.terms = {}
        if terms:
            for key, poly in terms.items():
                if poly:
                    self.terms[key] = poly

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zero(space: Space) -> "DoubleForm":
        return DoubleForm(space)

    @staticmethod
    def unit(space: Space) -> "DoubleForm":
        return DoubleForm(space, {((), ()): space.const(1)})

    @staticmethod
    def from_poly(poly: MultiPolynomial) -> "DoubleForm":
        return DoubleForm(poly.space, {((), ()): poly})

    @staticmethod
    def term(space: Space, poly: MultiPolynomial, w1: Iterable[int] = (), w2: Iterable[int] = ()) -> "DoubleForm":
        s1 = sort_word(w1)
        s2 = sort_word(w2)
        if s1 is None or s2 is None:
            return DoubleForm(space)
        sign = s1[1] * s2[1]
        return DoubleForm(space, {(s1[0], s2[0]): poly * sign})

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_form(self) -> bool:
        """True iff the second slot is trivial (an ordinary differential form)."""
        return all(not w2 for (_, w2) in self.terms)

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(len(w1), len(w2)) for (w1, w2) in self.terms}

    def slot1_degrees(self) -> set[int]:
        return {len(w1) for (w1, _) in self.terms}

    def base_fiber_degrees(self) -> set[tuple[int, int]]:
        """(dz-degree, dzeta-degree) pairs of the first slot."""
        out = set()
        n = self.space.n
        for (w1, _) in self.terms:
            dz = sum(1 for g in w1 if gen_kind(self.space, g) == KIND_DZ)
            out.add((dz, len(w1) - dz))
        return out

    def bidegree_component(self, j: int, k: int) -> "DoubleForm":
        return DoubleForm(
            self.space,
            {key: p for key, p in self.terms.items() if len(key[0]) == j and len(key[1]) == k},
        )

    def _assert_degree_caps(self):
        n = self.space.n
        for (w1, w2) in self.terms:
            for word in (w1, w2):
                dz = sum(1 for g in word if gen_kind(self.space, g) == KIND_DZ)
                if dz > n or len(word) - dz > n:
                    raise FormError("degree cap exceeded in a slot block")

    # -- linear structure ---------------------------------------------------
    def _check(self, other: "DoubleForm"):
        if self.space != other.space:
            raise FormError("forms over different spaces")

    def __add__(self, other: "DoubleForm") -> "DoubleForm":
        self._check(other)
        out = dict(self.terms)
        for key, poly in other.terms.items():
            s = out.get(key)
            s = poly if s is None else s + poly
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return DoubleForm(self.space, out)

    def __neg__(self) -> "DoubleForm":
        return DoubleForm(self.space, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other: "DoubleForm") -> "DoubleForm":
        return self + (-other)

    def scale(self, c) -> "DoubleForm":
        if isinstance(c, MultiPolynomial):
            return DoubleForm(self.space, {k: p * c for k, p in self.terms.items()})
        c = GaussianRational.of(c)
        if c.is_zero():
            return DoubleForm(self.space)
        return DoubleForm(self.space, {k: p * c for k, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, DoubleForm):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, DoubleForm):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space.n, frozenset((k, hash(p)) for k, p in self.terms.items())))

    # -- the graded product --------------------------------------------------
    def wedge(self, other: "DoubleForm") -> "DoubleForm":
        self._check(other)
        out: dict = {}
        for (a1, a2), p in self.terms.items():
            for (b1, b2), q in other.terms.items():
                m1 = merge_words(a1, b1)
                if m1 is None:
                    continue
                m2 = merge_words(a2, b2)
                if m2 is None:
                    continue
                sign = m1[1] * m2[1]
                key = (m1[0], m2[0])
                contrib = p * q if sign == 1 else p * q * GaussianRational(-1)
                s = out.get(key)
                s = contrib if s is None else s + contrib
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        form = DoubleForm(self.space, out)
        form._assert_degree_caps()
        return form

    def divided_power(self, k: int) -> "DoubleForm":
        """k-fold wedge power divided by k!; negative k gives the zero form."""
        if k < 0:
            return DoubleForm(self.space)
        out = DoubleForm.unit(self.space)
        for _ in range(k):
            out = out.wedge(self)
        return out.scale(Fraction(1, factorial(k)))

    # -- involutions and differential -----------------------------------------
    def conjugate_form(self) -> "DoubleForm":
        """Conjugate coefficients and first-slot generators; second slot fixed."""
        sp = self.space
        out: dict = {}
        for (w1, w2), p in self.terms.items():
            mapped = [
                generator(sp, SLOT1, gen_kind(sp, g), sp.bar(gen_pos(sp, g))) for g in w1
            ]
            sw = sort_word(mapped)
            if sw is None:  # conjugation permutes generators, cannot collide
                raise FormError("conjugation produced a repeated generator")
            word, sign = sw
            poly = p.conjugate() * sign
            key = (word, w2)
            s = out.get(key)
            s = poly if s is None else s + poly
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return DoubleForm(sp, out)

    def exterior_d(self) -> "DoubleForm":
        """First-slot exterior differential; coefficients are differentiated."""
        sp = self.space
        acc = DoubleForm(sp)
        for (w1, w2), p in self.terms.items():
            for var in range(sp.nvars):
                dp = p.partial(var)
                if not dp:
                    continue
                kind = KIND_DZETA if sp.var_is_zeta(var) else KIND_DZ
                g = generator(sp, SLOT1, kind, sp.var_pos(var))
                merged = merge_words((g,), w1)
                if merged is None:
                    continue
                word, sign = merged
                acc = acc + DoubleForm(sp, {(word, w2): dp * sign})
        return acc

    # -- restriction to the sphere bundle ---------------------------------------
    def fiber_saturated_part(self) -> "DoubleForm":
        """Terms whose first slot already contains all n fiber generators."""
        n = self.space.n
        out = {}
        for key, p in self.terms.items():
            w1 = key[0]
            if sum(1 for g in w1 if gen_kind(self.space, g) == KIND_DZETA) == n:
                out[key] = p
        return DoubleForm(self.space, out)

    def vanishes_on_sphere(self, saturated: str = "restrict") -> bool:
        """Whether the form restricts to zero on R^n x S^{n-1}.

        A form vanishes on the sphere bundle iff its wedge with the radial
        1-form gamma has all coefficients in the ideal of the sphere.  Terms
        of full fiber degree wedge to zero with gamma; under the default
        ``saturated="restrict"`` they restrict to zero and are dropped, while
        ``saturated="compare"`` instead requires their coefficients to reduce
        to zero (coefficient equality on the sphere, used for top-degree
        bookkeeping identities).
        """
        if saturated not in ("restrict", "compare"):
            raise FormError(f"unknown saturated mode {saturated!r}")
        sat = self.fiber_saturated_part()
        if saturated == "compare":
            for p in sat.terms.values():
                if not p.vanishes_on_sphere():
                    return False
        rest = self - sat
        if rest.is_zero():
            return True
        g = radial_gamma(self.space)
        wedge = rest.wedge(g)
        return all(p.vanishes_on_sphere() for p in wedge.terms.values())


def equal_on_sphere(a: DoubleForm, b: DoubleForm, saturated: str = "restrict") -> bool:
    """Whether two double forms agree on the sphere bundle.

    Requires matching total first-slot degrees when both are nonzero and
    homogeneous; equality is tested through the gamma-multiplication
    criterion plus coefficient reduction, see
    :meth:`DoubleForm.vanishes_on_sphere`.
    """
    if a.space != b.space:
        raise FormError("forms over different spaces")
    if a and b:
        da, db = a.slot1_degrees(), b.slot1_degrees()
        if len(da) == 1 and len(db) == 1 and da != db:
            raise DegreeMismatchError(f"total degrees differ: {da} vs {db}")
    return (a - b).vanishes_on_sphere(saturated=saturated)


def radial_gamma(space: Space) -> DoubleForm:
    """The fiber 1-form pairing the radial direction: sum zeta_ib dzeta_i."""
    acc = DoubleForm(space)
    for pos in space.all_positions():
        g = generator(space, SLOT1, KIND_DZETA, pos)
        acc = acc + DoubleForm(space, {((g,), ()): space.zeta(space.bar(pos))})
    return acc


def full_word(space: Space, slot: int, kind: int) -> tuple:
    return tuple(generator(space, slot, kind, pos) for pos in space.all_positions())


def canonical_text(form: DoubleForm) -> str:
    """Deterministic text rendering with sorted terms and explicit signs."""
    if form.is_zero():
        return "0"
    sp = form.space
    chunks = []
    for (w1, w2) in sorted(form.terms, key=lambda k: (len(k[0]), len(k[1]), k)):
        poly = form.terms[(w1, w2)]
        gens1 = "^".join(gen_label(sp, g) for g in w1) or "1"
        text = f"({poly.canonical_text()}) {gens1}"
        if w2:
            gens2 = "^".join(gen_label(sp, g) for g in w2)
            text += f" (x) {gens2}"
        chunks.append(text)
    return "  +  ".join(chunks)
