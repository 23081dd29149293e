"""Constructors for the named translation-invariant forms.

All families are defined through products of a handful of building blocks
in the double-form calculus, carried in the second tensor slot; the honest
differential forms are obtained by stripping the full second-slot word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .double_form import (
    KIND_DZ,
    KIND_DZETA,
    SLOT1,
    SLOT2,
    DoubleForm,
    FormError,
    generator,
)
from .kernel import Space


class FamilyError(ValueError):
    pass


class MalformedPresentation(FamilyError):
    pass


BLOCK_NAMES = (
    "z_I",
    "zeta_I",
    "w_I",
    "eta_I",
    "alpha_I",
    "gamma_I",
    "nu_I",
    "theta1_I",
    "theta2_I",
)


def build_block(space: Space, name: str, I) -> DoubleForm:
    """One of the named building blocks over the index subset ``I``.

    ``I`` is an iterable of slots of the ordered index set.  Function-valued
    blocks are returned as (0,0) double forms.
    """
    positions = sorted(set(I))
    for pos in positions:
        if not 0 <= pos < space.n:
            raise FamilyError(f"index slot {pos} out of range")
    acc = DoubleForm(space)
    if name == "z_I":
        for pos in positions:
            g = generator(space, SLOT2, KIND_DZ, pos)
            acc = acc + DoubleForm(space, {((), (g,)): space.z(pos)})
    elif name == "zeta_I":
        for pos in positions:
            g = generator(space, SLOT2, KIND_DZ, pos)
            acc = acc + DoubleForm(space, {((), (g,)): space.zeta(pos)})
    elif name == "w_I":
        for pos in positions:
            g = generator(space, SLOT2, KIND_DZETA, pos)
            acc = acc + DoubleForm(space, {((), (g,)): space.z(pos)})
    elif name == "eta_I":
        for pos in positions:
            g = generator(space, SLOT2, KIND_DZETA, pos)
            acc = acc + DoubleForm(space, {((), (g,)): space.zeta(pos)})
    elif name == "alpha_I":
        for pos in positions:
            g = generator(space, SLOT1, KIND_DZ, pos)
            acc = acc + DoubleForm(space, {((g,), ()): space.zeta(space.bar(pos))})
    elif name == "gamma_I":
        for pos in positions:
            g = generator(space, SLOT1, KIND_DZETA, pos)
            acc = acc + DoubleForm(space, {((g,), ()): space.zeta(space.bar(pos))})
    elif name == "nu_I":
        acc = DoubleForm.from_poly(space.nu_of(positions))
    elif name == "theta1_I":
        word = tuple(generator(space, SLOT2, KIND_DZ, pos) for pos in positions)
        acc = DoubleForm(space, {((), word): space.const(1)})
    elif name == "theta2_I":
        word = tuple(generator(space, SLOT2, KIND_DZETA, pos) for pos in positions)
        acc = DoubleForm(space, {((), word): space.const(1)})
    else:
        raise FamilyError(f"unknown block {name!r}")
    return acc


def _d(form: DoubleForm) -> DoubleForm:
    return form.exterior_d()


def _conj(form: DoubleForm) -> DoubleForm:
    return form.conjugate_form()


def full_set(space: Space) -> list[int]:
    return list(space.all_positions())


def k_set(space: Space, k: int) -> list[int]:
    """The first k unbarred slots."""
    return [space.unbarred(j) for j in range(1, k + 1)]


def bar_set(space: Space, I) -> list[int]:
    return sorted(space.bar(p) for p in I)


def j_set(space: Space, k: int) -> list[int]:
    return sorted(set(space.all_positions()) - set(k_set(space, k)))


def l_set(space: Space, k: int) -> list[int]:
    return sorted(set(j_set(space, k)) - set(bar_set(space, k_set(space, k))))


def minus_family_index_set(space: Space) -> list[int]:
    """Indices {1, ..., l-1, lb} used by the even-dimensional extra family."""
    l = space.l
    out = [space.unbarred(j) for j in range(1, l)]
    out.append(space.barred(l))
    return sorted(out)


@dataclass(frozen=True)
class FamilySpec:
    """Parameters of a named family constructor."""

    name: str
    n: int
    r: int = 0
    k: int = 0
    m: int = 0

    def validate(self) -> None:
        n, r, k, m = self.n, self.r, self.k, self.m
        if self.name in ("omega_rk", "omega_rkm", "sigma", "tau", "delta", "theta"):
            if not 1 <= r <= n - 1:
                raise FamilyError(f"{self.name}: r={r} out of range for n={n}")
            if not 1 <= k <= min(r, n - r):
                raise FamilyError(f"{self.name}: k={k} out of range for r={r}, n={n}")
            if self.name == "omega_rkm" and m < 2:
                raise FamilyError("omega_rkm requires m >= 2")
        elif self.name in ("omega_minus_l", "omega_minus_lm"):
            if n % 2:
                raise FamilyError("the minus family needs even dimension")
            if r not in (0, n // 2):
                raise FamilyError("the minus family lives at r = l")
            if self.name == "omega_minus_lm" and m < 2:
                raise FamilyError("omega_minus_lm requires m >= 2")
        elif self.name in ("omega_r0", "omega_r0m", "delta_r0"):
            if not 1 <= r <= n - 1:
                raise FamilyError(f"{self.name}: r={r} out of range for n={n}")
            if self.name == "omega_r0m" and m < 0:
                raise FamilyError("omega_r0m requires m >= 0")
        else:
            raise FamilyError(f"unknown family {self.name!r}")


def theta1_full(space: Space) -> DoubleForm:
    return build_block(space, "theta1_I", full_set(space))


def strip_theta1(phi: DoubleForm) -> DoubleForm:
    """Remove a full second-slot base word from every term.

    Inverse of tensoring with the full second-slot word; raises
    :class:`MalformedPresentation` when any term carries a different word.
    """
    space = phi.space
    full = tuple(generator(space, SLOT2, KIND_DZ, pos) for pos in space.all_positions())
    out = {}
    for (w1, w2), poly in phi.terms.items():
        if w2 != full:
            raise MalformedPresentation(
                "second slot is not the full base word in every term"
            )
        out[(w1, ())] = poly
    return DoubleForm(space, out)


def strip_theta2(phi: DoubleForm) -> DoubleForm:
    space = phi.space
    full = tuple(generator(space, SLOT2, KIND_DZETA, pos) for pos in space.all_positions())
    out = {}
    for (w1, w2), poly in phi.terms.items():
        if w2 != full:
            raise MalformedPresentation(
                "second slot is not the full fiber word in every term"
            )
        out[(w1, ())] = poly
    return DoubleForm(space, out)


def _family_tensor_theta1(space: Space, spec: FamilySpec) -> DoubleForm:
    """The defining product, still carrying the full second-slot word."""
    n, r, k = spec.n, spec.r, spec.k
    if spec.name in ("omega_rk", "omega_rkm"):
        J = j_set(space, k)
        zJ = build_block(space, "zeta_I", J)
        dzJ = _d(build_block(space, "z_I", J))
        dzetaJ = _d(zJ)
        dzK_bar = _conj(_d(build_block(space, "z_I", k_set(space, k))))
        return (
            zJ.wedge(dzetaJ.divided_power(n - r - 1))
            .wedge(dzJ.divided_power(r - k))
            .wedge(dzK_bar.divided_power(k))
        )
    if spec.name in ("omega_minus_l", "omega_minus_lm"):
        M = minus_family_index_set(space)
        Mbar = bar_set(space, M)
        zMbar = build_block(space, "zeta_I", Mbar)
        dzetaMbar = _d(zMbar)
        dzM_bar = _conj(_d(build_block(space, "z_I", M)))
        l = space.l
        return zMbar.wedge(dzetaMbar.divided_power(l - 1)).wedge(dzM_bar.divided_power(l))
    if spec.name == "sigma":
        K, J = k_set(space, k), j_set(space, k)
        dzetaK_bar = _conj(_d(build_block(space, "zeta_I", K)))
        zJ = build_block(space, "zeta_I", J)
        return (
            dzetaK_bar.divided_power(k)
            .wedge(zJ)
            .wedge(_d(zJ).divided_power(n - r - k))
            .wedge(_d(build_block(space, "z_I", J)).divided_power(r - 1))
        )
    if spec.name == "tau":
        K, J = k_set(space, k), j_set(space, k)
        zK_bar = _conj(build_block(space, "zeta_I", K))
        dzetaK_bar = _conj(_d(build_block(space, "zeta_I", K)))
        return (
            zK_bar.wedge(dzetaK_bar.divided_power(k - 1))
            .wedge(_d(build_block(space, "zeta_I", J)).divided_power(n - r - k + 1))
            .wedge(_d(build_block(space, "z_I", J)).divided_power(r - 1))
        )
    if spec.name == "delta":
        K, J = k_set(space, k), j_set(space, k)
        return (
            _d(build_block(space, "zeta_I", J)).divided_power(n - r)
            .wedge(_d(build_block(space, "z_I", J)).divided_power(r - k))
            .wedge(_conj(_d(build_block(space, "z_I", K))).divided_power(k))
        )
    if spec.name == "theta":
        K, J = k_set(space, k), j_set(space, k)
        zK_bar = _conj(build_block(space, "zeta_I", K))
        dzetaK_bar = _conj(_d(build_block(space, "zeta_I", K)))
        zJ = build_block(space, "zeta_I", J)
        return (
            zK_bar.wedge(dzetaK_bar.divided_power(k - 1))
            .wedge(zJ)
            .wedge(_d(zJ).divided_power(n - r - k))
            .wedge(_d(build_block(space, "z_I", J)).divided_power(r - 1))
        )
    if spec.name in ("omega_r0", "omega_r0m"):
        full = full_set(space)
        zI = build_block(space, "zeta_I", full)
        return (
            zI.wedge(_d(zI).divided_power(n - r - 1))
            .wedge(_d(build_block(space, "z_I", full)).divided_power(r))
        )
    if spec.name == "delta_r0":
        full = full_set(space)
        return (
            _d(build_block(space, "zeta_I", full)).divided_power(n - r)
            .wedge(_d(build_block(space, "z_I", full)).divided_power(r))
        )
    raise FamilyError(f"unknown family {spec.name!r}")


def build_family(space: Space, spec: FamilySpec) -> DoubleForm:
    """The named form as an honest differential form (empty second slot)."""
    if space.n != spec.n:
        raise FamilyError("family spec dimension does not match the space")
    spec.validate()
    raw = _family_tensor_theta1(space, spec)
    if raw.is_zero():
        return raw
    form = strip_theta1(raw)
    if spec.name in ("omega_rkm", "omega_minus_lm"):
        form = form.scale(space.zeta(space.barred(1)) ** (spec.m - 2))
    elif spec.name == "omega_r0m":
        form = form.scale(space.zeta(space.barred(1)) ** spec.m)
    return form


def sigma_tau_theta2(space: Space, name: str, r: int, k: int) -> DoubleForm:
    """The sigma/tau families in the dual fiber-slot presentation.

    Built from the two-part split of the defining products with the second
    slot carried by fiber-type generators; used as a cross-check against the
    base-slot route.
    """
    n = space.n
    K, L = k_set(space, k), l_set(space, k)
    Kbar = bar_set(space, K)
    etaK_bar_conj = _conj(_d(build_block(space, "eta_I", K)))
    etaKbar = build_block(space, "eta_I", Kbar)
    etaL = build_block(space, "eta_I", L)
    detaL = _d(etaL)
    dwL = _d(build_block(space, "w_I", L))
    dwKbar = _d(build_block(space, "w_I", Kbar))
    if name == "sigma":
        part1 = (
            etaK_bar_conj.divided_power(k)
            .wedge(etaKbar)
            .wedge(detaL.divided_power(n - r - k))
            .wedge(dwL.divided_power(r - k))
            .wedge(dwKbar.divided_power(k - 1))
        )
        part2 = (
            etaK_bar_conj.divided_power(k)
            .wedge(etaL)
            .wedge(detaL.divided_power(n - r - k))
            .wedge(dwL.divided_power(r - k - 1))
            .wedge(dwKbar.divided_power(k))
        )
        return part1 + part2
    if name == "tau":
        part1 = (
            etaK_bar_conj.divided_power(k)
            .wedge(etaKbar)
            .wedge(detaL.divided_power(n - r - k))
            .wedge(dwL.divided_power(r - k))
            .wedge(dwKbar.divided_power(k - 1))
        ).scale((-1) ** (k - 1))
        part2 = (
            _conj(build_block(space, "eta_I", K))
            .wedge(etaK_bar_conj.divided_power(k - 1))
            .wedge(detaL.divided_power(n - r - k + 1))
            .wedge(dwL.divided_power(r - k - 1))
            .wedge(dwKbar.divided_power(k))
        )
        return part1 + part2
    raise FamilyError(f"no dual presentation for {name!r}")
