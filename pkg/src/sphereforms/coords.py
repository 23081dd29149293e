"""Exact conversion between real coordinates and the complex chart.

The complex coordinates pair the real ones two by two with a factor
``1/sqrt(2)``.  Individual conversions are therefore irrational, but every
quantity the engine needs (linear velocity fields, quadratic forms, pullback
substitutions) combines an even number of such factors.  The helpers below
track powers of ``sqrt(2)`` explicitly and insist that they cancel, keeping
all results inside the Gaussian rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .kernel import GR_I, GR_ONE, GaussianRational, KernelError, MultiPolynomial, Space

Matrix = tuple  # tuple of tuples of GaussianRational


class IrrationalResult(KernelError):
    """A combination of coordinate changes left a stray sqrt(2)."""


def matrix(space_n: int, entries) -> Matrix:
    rows = []
    for row in entries:
        rows.append(tuple(GaussianRational.of(e) for e in row))
    if len(rows) != space_n or any(len(r) != space_n for r in rows):
        raise KernelError("matrix shape mismatch")
    return tuple(rows)


def _xi_as_poly(space: Space, a: int, fiber: bool) -> tuple[MultiPolynomial, int]:
    """Real coordinate ``xi_a``/(``x_a``) as ``poly * (1/sqrt2)**r``."""
    var = space.zeta if fiber else space.z
    if space.odd and a == space.n - 1:
        return var(space.n - 1), 0
    j = a // 2
    u, b = var(2 * j), var(2 * j + 1)
    if a % 2 == 0:
        return u + b, 1
    return (u - b) * GaussianRational(0, -1), 1


def _cfun_row(space: Space, p: int) -> list[tuple[int, GaussianRational, int]]:
    """The complex functional of slot ``p`` as ``sum coeff*(1/sqrt2)**r xi_a``."""
    if space.odd and p == space.n - 1:
        return [(space.n - 1, GR_ONE, 0)]
    j = p // 2
    sign = GR_I if p % 2 == 0 else -GR_I
    return [(2 * j, GR_ONE, 1), (2 * j + 1, sign, 1)]


class _Root2Accumulator:
    """Accumulates ``poly * (sqrt2)**s`` contributions, folding even powers."""

    def __init__(self, space: Space):
        self.space = space
        self.rational = space.zero_poly()
        self.irrational = space.zero_poly()

    def add(self, poly: MultiPolynomial, s: int):
        if s % 2 == 0:
            factor = Fraction(2) ** (s // 2)
            self.rational = self.rational + poly * factor
        else:
            factor = Fraction(2) ** ((s - 1) // 2)
            self.irrational = self.irrational + poly * factor

    def result(self) -> MultiPolynomial:
        if self.irrational:
            raise IrrationalResult("sqrt(2) factors did not cancel")
        return self.rational


def linear_images(space: Space, mat: Matrix, fiber: bool, sqrt2_scale: int = 0) -> list[MultiPolynomial]:
    """Complex-coordinate expressions of ``c_p(M xi)`` for every slot ``p``.

    ``sqrt2_scale`` multiplies the matrix by ``sqrt(2)**scale`` (used for
    generators supported on mixed paired/unpaired coordinate blocks, which
    are only exactly representable after such a rescaling).
    """
    out = []
    for p in space.all_positions():
        acc = _Root2Accumulator(space)
        for a, ca, ra in _cfun_row(space, p):
            row = mat[a]
            for b in range(space.n):
                m = row[b]
                if m.is_zero():
                    continue
                poly_b, rb = _xi_as_poly(space, b, fiber)
                acc.add(poly_b * (ca * m), sqrt2_scale - ra - rb)
        out.append(acc.result())
    return out


def quadratic_form(space: Space, mat: Matrix, sqrt2_scale: int = 0) -> MultiPolynomial:
    """``<v, M v>`` as an exact polynomial in the fiber variables."""
    acc = _Root2Accumulator(space)
    for b in range(space.n):
        row = mat[b]
        poly_b, rb = _xi_as_poly(space, b, fiber=True)
        for c in range(space.n):
            m = row[c]
            if m.is_zero():
                continue
            poly_c, rc = _xi_as_poly(space, c, fiber=True)
            acc.add(poly_b * poly_c * m, sqrt2_scale - rb - rc)
    return acc.result()


def real_form_to_fiber(space: Space, real_terms) -> "object":
    """Convert a fiber form given in real coordinates into the complex chart.

    ``real_terms`` is an iterable of ``(poly_exponents, coords)`` pairs with
    ``poly_exponents`` a map real-coordinate -> power for the coefficient
    monomial and ``coords`` the tuple of real differentials ``dxi_a``.  Used
    only by tests and the orientation calibration; raises if the result is
    not Gaussian rational.
    """
    from .double_form import KIND_DZETA, SLOT1, DoubleForm, generator

    acc = DoubleForm(space)
    for coeff, exps, coords in real_terms:
        polys = [(space.const(coeff), 0, (), 1)]
        for a, e in exps.items():
            base, r = _xi_as_poly(space, a, fiber=True)
            for _ in range(e):
                polys = [(p * base, rr + r, w, sg) for (p, rr, w, sg) in polys]
        # expand each real differential into the two complex generators
        for a in coords:
            expanded = []
            if space.odd and a == space.n - 1:
                choices = [(GR_ONE, space.n - 1, 0)]
            else:
                j = a // 2
                if a % 2 == 0:
                    choices = [(GR_ONE, 2 * j, 1), (GR_ONE, 2 * j + 1, 1)]
                else:
                    choices = [(-GR_I, 2 * j, 1), (GR_I, 2 * j + 1, 1)]
            for (p, rr, w, sg) in polys:
                for cf, pos, r in choices:
                    g = generator(space, SLOT1, KIND_DZETA, pos)
                    if g in w:
                        continue
                    swaps = sum(1 for x in w if x > g)
                    expanded.append(
                        (p * cf, rr + r, tuple(sorted(w + (g,))), sg * (-1 if swaps % 2 else 1))
                    )
            polys = expanded
        for (p, rr, w, sg) in polys:
            if rr % 2:
                # odd sqrt2 powers must cancel pairwise across terms; collect
                # them with an explicit marker polynomial and fail loudly if
                # anything survives at the end
                raise IrrationalResult("odd sqrt2 power in real form conversion")
            factor = Fraction(1, 2 ** (rr // 2))
            acc = acc + DoubleForm(space, {(w, ()): p * (factor if sg > 0 else -factor)})
    return acc


def euler_contraction_of_volume(space: Space) -> "object":
    """The fiber (n-1)-form ``i_E(dxi_1 ... dxi_n)`` in the complex chart.

    Restricted to the unit sphere this is the standard positively oriented
    volume form; it anchors the engine's orientation convention.
    """
    n = space.n
    terms = []
    for a in range(n):
        coords = tuple(b for b in range(n) if b != a)
        coeff = 1 if a % 2 == 0 else -1
        terms.append((coeff, {a: 1}, coords))
    return real_form_to_fiber(space, terms)
