"""Exact spherical integration.

Monomial moments over the unit sphere evaluate to rationals times an
integer power of pi through half-integer Gamma values.  Fiber polynomials
in the complex chart are expanded into real moments with exact powers of
two; fiber (n-1)-forms are integrated by pairing with the radial 1-form,
and full-degree forms by first contracting the base volume.
"""

from __future__ import annotations

from fractions import Fraction

from .coords import euler_contraction_of_volume
from .double_form import (
    KIND_DZ,
    KIND_DZETA,
    SLOT1,
    DoubleForm,
    FormError,
    full_word,
    gen_kind,
    radial_gamma,
)
from .kernel import (
    GR_I,
    GR_ONE,
    GaussianRational,
    KernelError,
    MultiPolynomial,
    PiScaledScalar,
    Space,
    gamma_half,
    sphere_volume,
)


class MomentError(ValueError):
    pass


MomentKey = tuple  # one nonnegative exponent per real fiber coordinate


_MOMENT_CACHE: dict[tuple[int, MomentKey], PiScaledScalar] = {}


def sphere_moment(n: int, key: MomentKey) -> PiScaledScalar:
    """Exact integral of a real coordinate monomial over the unit sphere.

    Vanishes when any exponent is odd; otherwise equals
    ``2 * prod Gamma(b_i + 1/2) / Gamma(n/2 + sum b_i)`` for half exponents
    ``b_i``, always a rational times an integer power of pi.
    """
    if len(key) != n:
        raise MomentError(f"moment key must have length {n}")
    if any(e < 0 for e in key):
        raise MomentError("moment exponents must be nonnegative")
    cached = _MOMENT_CACHE.get((n, key))
    if cached is not None:
        return cached
    if any(e % 2 for e in key):
        value = PiScaledScalar.zero()
    else:
        num = Fraction(2)
        half_powers = 0
        for e in key:
            g, half = gamma_half(e + 1)  # Gamma(b + 1/2) with b = e/2
            num *= g
            half_powers += half
        den, den_half = gamma_half(n + sum(key))
        e2 = half_powers - den_half
        if e2 % 2:
            raise MomentError("moment with non-integer pi power")
        value = PiScaledScalar(num / den, e2 // 2)
    _MOMENT_CACHE[(n, key)] = value
    return value


def sphere_moment_oracle(n: int, key: MomentKey) -> PiScaledScalar:
    """Independent evaluation by iterated splitting of the last coordinate.

    Uses only the Beta-type reduction of the sphere integral to a product of
    a lower-dimensional moment and a ratio of sphere volumes.
    """
    if len(key) != n:
        raise MomentError(f"moment key must have length {n}")
    if n == 1:
        return PiScaledScalar(2 if key[0] % 2 == 0 else 0, 0)
    a_last = key[-1]
    if a_last % 2:
        return PiScaledScalar.zero()
    rest = key[:-1]
    inner = sphere_moment_oracle(n - 1, rest)
    if inner.is_zero():
        return PiScaledScalar.zero()
    a = (n - 2) + sum(rest)
    b = a_last
    ratio = sphere_volume(a + b + 1) / (sphere_volume(a) * sphere_volume(b))
    # factor 2 from the zero-sphere of the split direction
    return inner * ratio * 2


def integrate_fiber_polynomial(space: Space, poly: MultiPolynomial) -> PiScaledScalar:
    """Integral over the unit sphere of a polynomial in the fiber variables.

    The complex monomials are expanded into real ones with exact powers of
    two; odd pairing degrees integrate to zero and are skipped outright.
    """
    n = space.n
    total = PiScaledScalar.zero()
    for mono, coeff in poly.items():
        if any(mono[space.n:]):
            raise MomentError("integrand depends on base variables")
        paired_degree = sum(mono[p] for p in range(2 * space.l))
        if paired_degree % 2:
            continue
        scale = Fraction(1, 2 ** (paired_degree // 2))
        # expand each paired slot pair (zeta_j, zeta_jb) jointly
        expansions = [({}, GR_ONE)]  # (real exponent map, coefficient)
        for j in range(space.l):
            a = mono[2 * j]
            b = mono[2 * j + 1]
            if a == 0 and b == 0:
                continue
            new = []
            # (x + i y)^a (x - i y)^b summed over choices
            from math import comb

            for s in range(a + 1):
                for t in range(b + 1):
                    c = GaussianRational(comb(a, s)) * GaussianRational(comb(b, t))
                    c = c * (GR_I ** (a - s)) * ((-GR_I) ** (b - t))
                    xs = s + t
                    ys = (a - s) + (b - t)
                    for exps, cf in expansions:
                        e2 = dict(exps)
                        e2[2 * j] = e2.get(2 * j, 0) + xs
                        e2[2 * j + 1] = e2.get(2 * j + 1, 0) + ys
                        new.append((e2, cf * c))
            expansions = new
        if space.odd and mono[space.n - 1]:
            expansions = [
                ({**exps, n - 1: exps.get(n - 1, 0) + mono[space.n - 1]}, cf)
                for exps, cf in expansions
            ]
        for exps, cf in expansions:
            key = tuple(exps.get(i, 0) for i in range(n))
            m = sphere_moment(n, key)
            if m.is_zero():
                continue
            total = total + m * (cf * coeff * scale)
    return total


def base_volume_factor(space: Space) -> GaussianRational:
    """Value of the full base word against the real volume form.

    Each paired block contributes ``-i``; the odd trailing coordinate is
    already real.
    """
    return (-GR_I) ** space.l


def vol_contract(a: DoubleForm) -> DoubleForm:
    """Contract the full base part against the volume form.

    Terms whose base word is not full map to zero; for the rest the base
    word is replaced by the exact conversion constant and the fiber part
    remains.
    """
    space = a.space
    if not a.is_form():
        raise MomentError("volume contraction expects an ordinary form")
    base_full = tuple(g for g in full_word(space, SLOT1, KIND_DZ))
    factor = base_volume_factor(space)
    out = DoubleForm(space)
    for (w1, w2), poly in a.terms.items():
        base = tuple(g for g in w1 if gen_kind(space, g) == KIND_DZ)
        if base != base_full:
            continue
        fiber = tuple(g for g in w1 if gen_kind(space, g) != KIND_DZ)
        # canonical order puts the base block first, so no extra sign
        out = out + DoubleForm(space, {(fiber, ()): poly * factor})
    return out


def sphere_integrate(beta: DoubleForm) -> PiScaledScalar:
    """Integral over the unit sphere of a fiber (n-1)-form.

    The wedge with the radial 1-form exposes the density against the real
    fiber volume; the density is reduced modulo the sphere relation and
    expanded into real moments.  The positive orientation is the one of the
    outward-contracted coordinate volume.
    """
    space = beta.space
    n = space.n
    if not beta.is_form():
        raise MomentError("sphere integration expects an ordinary form")
    for (w1, _w2) in beta.terms:
        if len(w1) != n - 1 or any(gen_kind(space, g) != KIND_DZETA for g in w1):
            raise FormError("integrand must be a fiber form of degree n-1")
    wedge = radial_gamma(space).wedge(beta)
    fiber_full = full_word(space, SLOT1, KIND_DZETA)
    density = space.zero_poly()
    for (w1, _w2), poly in wedge.terms.items():
        if w1 != fiber_full:
            raise MomentError("unexpected word in radial pairing")
        density = density + poly
    density = density * base_volume_factor(space)
    reduced, _ = density.reduce_mod_sphere()
    return integrate_fiber_polynomial(space, reduced)


def integrate_full_degree(a: DoubleForm) -> PiScaledScalar:
    """Integral over the fiber sphere of a translation-invariant form of
    full base degree and fiber degree n-1."""
    return sphere_integrate(vol_contract(a))


def standard_fiber_volume_form(space: Space) -> DoubleForm:
    """The outward contraction of the coordinate fiber volume.

    Restricts to the positively oriented volume form of the unit sphere;
    integrates to the sphere surface area.
    """
    return euler_contraction_of_volume(space)


def integrate_zero_homogeneous(a: DoubleForm) -> PiScaledScalar:
    """Integral over {x} x S^{n-1} of the purely fiber part of a form.

    Only the bidegree (0, n-1) component contributes; used for the kernel
    criterion of the normal-cycle representation.
    """
    space = a.space
    comp = DoubleForm(
        space,
        {
            key: p
            for key, p in a.terms.items()
            if len(key[0]) == space.n - 1
            and all(gen_kind(space, g) == KIND_DZETA for g in key[0])
        },
    )
    if comp.is_zero():
        return PiScaledScalar.zero()
    return sphere_integrate(comp)
