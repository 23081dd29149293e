"""Contact data of the sphere bundle and pullbacks by orthogonal maps."""

from __future__ import annotations

from dataclasses import dataclass

from . import coords
from .double_form import (
    KIND_DZ,
    KIND_DZETA,
    SLOT1,
    SLOT2,
    DoubleForm,
    FormError,
    gen_kind,
    gen_pos,
    gen_slot,
    generator,
    radial_gamma,
)
from .kernel import GR_ONE, GaussianRational, KernelError, MultiPolynomial, Space


class ContactError(ValueError):
    pass


@dataclass(frozen=True)
class ContactData:
    alpha: DoubleForm
    gamma: DoubleForm
    nu: MultiPolynomial


def contact_forms(space_or_n) -> ContactData:
    """The canonical contact 1-form, its fiber companion and the norm function.

    Dimensions below 3 are rejected: the verified results require n >= 3 and
    are known to fail for n = 2.
    """
    space = Space(space_or_n) if isinstance(space_or_n, int) else space_or_n
    if space.n < 3:
        raise ContactError("contact data requires dimension n >= 3")
    alpha = DoubleForm(space)
    for pos in space.all_positions():
        g = generator(space, SLOT1, KIND_DZ, pos)
        alpha = alpha + DoubleForm(space, {((g,), ()): space.zeta(space.bar(pos))})
    return ContactData(alpha=alpha, gamma=radial_gamma(space), nu=space.nu)


class OrthogonalElement:
    """An exact orthogonal matrix acting on the sphere bundle by pullback.

    Entries must be real Gaussian rationals with ``g^T g = id``; in addition
    the induced substitution on the complex chart must itself be Gaussian
    rational (block-respecting signed permutations, the coordinate
    reflection and -id all qualify).
    """

    def __init__(self, space: Space, entries):
        self.space = space
        self.matrix = coords.matrix(space.n, entries)
        for row in self.matrix:
            for e in row:
                if not e.is_real():
                    raise ContactError("orthogonal matrix entries must be real")
        n = space.n
        for i in range(n):
            for j in range(n):
                s = GaussianRational(0)
                for k in range(n):
                    s = s + self.matrix[k][i] * self.matrix[k][j]
                if s != (1 if i == j else 0):
                    raise ContactError("matrix is not orthogonal")
        # substitution data on the complex chart (raises if irrational)
        self._zeta_images = coords.linear_images(space, self.matrix, fiber=True)
        self._z_images = coords.linear_images(space, self.matrix, fiber=False)

    def compose(self, other: "OrthogonalElement") -> "OrthogonalElement":
        n = self.space.n
        prod = [
            [sum((self.matrix[i][k] * other.matrix[k][j] for k in range(n)), GaussianRational(0)) for j in range(n)]
            for i in range(n)
        ]
        return OrthogonalElement(self.space, prod)

    def det_sign(self) -> int:
        # expansion by permutations is fine for the small n in scope
        from itertools import permutations

        n = self.space.n
        det = GaussianRational(0)
        for perm in permutations(range(n)):
            sign = 1
            seen = list(perm)
            for i in range(n):
                for j in range(i + 1, n):
                    if seen[i] > seen[j]:
                        sign = -sign
            term = GaussianRational(1 if sign > 0 else -1)
            for i in range(n):
                term = term * self.matrix[i][perm[i]]
            det = det + term
        if det == 1:
            return 1
        if det == -1:
            return -1
        raise ContactError("orthogonal determinant must be +-1")


def identity_element(space: Space) -> OrthogonalElement:
    return OrthogonalElement(
        space, [[1 if i == j else 0 for j in range(space.n)] for i in range(space.n)]
    )


def minus_identity(space: Space) -> OrthogonalElement:
    return OrthogonalElement(
        space, [[-1 if i == j else 0 for j in range(space.n)] for i in range(space.n)]
    )


def last_coordinate_reflection(space: Space) -> OrthogonalElement:
    """Reflection negating the last coordinate."""
    n = space.n
    return OrthogonalElement(
        space,
        [[(1 if i == j else 0) if not (i == j == n - 1) else -1 for j in range(n)] for i in range(n)],
    )


def signed_permutation(space: Space, perm, signs) -> OrthogonalElement:
    """Orthogonal element sending ``e_j -> signs[j] * e_perm[j]``."""
    n = space.n
    mat = [[0] * n for _ in range(n)]
    for j in range(n):
        mat[perm[j]][j] = signs[j]
    return OrthogonalElement(space, mat)


def pullback_orthogonal(g: OrthogonalElement, a: DoubleForm) -> DoubleForm:
    """Pullback of a double form along the joint linear action of ``g``.

    Coefficients are composed with the linear map, generators of both slots
    transform by the corresponding differentials; the result is an algebra
    homomorphism commuting with the exterior differential.
    """
    space = a.space
    if g.space != space:
        raise ContactError("pullback with mismatched space")
    n = space.n
    var_images = {}
    for pos in space.all_positions():
        var_images[space.zeta_var(pos)] = g._zeta_images[pos]
        var_images[space.z_var(pos)] = g._z_images[pos]

    # generator -> list of (coefficient, generator) in the same slot/kind
    gen_images: dict[int, list[tuple[GaussianRational, int]]] = {}
    for slot in (SLOT1, SLOT2):
        for kind in (KIND_DZ, KIND_DZETA):
            images = g._zeta_images if kind == KIND_DZETA else g._z_images
            var_of = space.zeta_var if kind == KIND_DZETA else space.z_var
            for pos in space.all_positions():
                combos = []
                img = images[pos]
                for q in space.all_positions():
                    c = img.partial(var_of(q)).constant_part()
                    if not c.is_zero():
                        combos.append((c, generator(space, slot, kind, q)))
                gen_images[generator(space, slot, kind, pos)] = combos

    acc = DoubleForm(space)
    for (w1, w2), poly in a.terms.items():
        base = DoubleForm.from_poly(poly.substitute(var_images))
        for gid in list(w1) + list(w2):
            slot = gen_slot(space, gid)
            lin = DoubleForm(space)
            for c, img_gid in gen_images[gid]:
                key = ((img_gid,), ()) if slot == SLOT1 else ((), (img_gid,))
                lin = lin + DoubleForm(space, {key: space.const(c)})
            base = base.wedge(lin)
        acc = acc + base
    return acc
