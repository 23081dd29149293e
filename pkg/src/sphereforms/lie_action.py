"""Lie algebra action on double forms through fundamental vector fields.

An element ``W`` of the complexified matrix algebra acts on the sphere
bundle through the flow ``t -> (exp(-tW) x, normalized fiber image)``; its
fundamental vector field has base part ``-W x`` and fiber part
``W^T v - v <v, W^T v>``.  Forms are differentiated by the Lie derivative
along that field, computed exactly in the complex chart.

Distinguished generators: the torus basis, one generator per root space of
the orthogonal algebra, and the symmetric raising elements used to move
between families.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import coords
from .double_form import (
    KIND_DZ,
    KIND_DZETA,
    SLOT1,
    SLOT2,
    DoubleForm,
    FormError,
    equal_on_sphere,
    gen_kind,
    gen_pos,
    gen_slot,
    generator,
)
from .kernel import GR_I, GR_ONE, GR_ZERO, GaussianRational, KernelError, MultiPolynomial, Space
from .linalg import nullspace_dense


class LieActionError(ValueError):
    pass


class GlMatrix:
    """Element of the complexified matrix algebra in the real basis.

    ``entries`` are Gaussian rationals; when ``root2`` is set the element is
    ``sqrt(2)`` times the stored matrix (needed for generators mixing a
    paired coordinate block with the unpaired last coordinate, whose exact
    action is only Gaussian rational after this rescaling).
    """

    __slots__ = ("n", "entries", "root2", "_velocities")

    def __init__(self, n: int, entries, root2: bool = False):
        self.n = n
        self.entries = coords.matrix(n, entries)
        self.root2 = root2
        self._velocities = {}

    # -- algebra -----------------------------------------------------------
    def _require_same_scale(self, other: "GlMatrix"):
        if self.n != other.n:
            raise LieActionError("matrix dimension mismatch")
        if self.root2 != other.root2:
            raise LieActionError("cannot add matrices of different sqrt(2) scale")

    def __add__(self, other: "GlMatrix") -> "GlMatrix":
        self._require_same_scale(other)
        return GlMatrix(
            self.n,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.root2,
        )

    def __sub__(self, other: "GlMatrix") -> "GlMatrix":
        self._require_same_scale(other)
        return GlMatrix(
            self.n,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.root2,
        )

    def __neg__(self) -> "GlMatrix":
        return self.scale(-1)

    def scale(self, c) -> "GlMatrix":
        c = GaussianRational.of(c)
        return GlMatrix(self.n, [[e * c for e in row] for row in self.entries], self.root2)

    def matmul(self, other: "GlMatrix") -> "GlMatrix":
        if self.n != other.n:
            raise LieActionError("matrix dimension mismatch")
        n = self.n
        prod = [
            [
                sum((self.entries[i][k] * other.entries[k][j] for k in range(n)), GR_ZERO)
                for j in range(n)
            ]
            for i in range(n)
        ]
        out = GlMatrix(n, prod, False)
        if self.root2 and other.root2:
            out = out.scale(2)
        elif self.root2 or other.root2:
            out = GlMatrix(n, out.entries, True)
        return out

    def bracket(self, other: "GlMatrix") -> "GlMatrix":
        return self.matmul(other) - other.matmul(self)

    def transpose(self) -> "GlMatrix":
        n = self.n
        return GlMatrix(n, [[self.entries[j][i] for j in range(n)] for i in range(n)], self.root2)

    def conjugate(self) -> "GlMatrix":
        return GlMatrix(self.n, [[e.conjugate() for e in row] for row in self.entries], self.root2)

    def trace(self) -> GaussianRational:
        return sum((self.entries[i][i] for i in range(self.n)), GR_ZERO)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, GlMatrix):
            return NotImplemented
        return self.n == other.n and self.root2 == other.root2 and self.entries == other.entries

    def __hash__(self):
        return hash((self.n, self.root2, self.entries))

    def __repr__(self):
        tag = " *sqrt2" if self.root2 else ""
        return f"GlMatrix(n={self.n}{tag})"


@dataclass(frozen=True)
class Weight:
    """Integer weight tuple of length floor(n/2)."""

    components: tuple

    def __iter__(self):
        return iter(self.components)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)

    def is_dominant(self, n: int) -> bool:
        lam = self.components
        l = n // 2
        if len(lam) != l:
            return False
        for i in range(l - 2):
            if lam[i] < lam[i + 1]:
                return False
        if n % 2 == 0:
            return l < 2 or lam[l - 2] >= abs(lam[l - 1])
        return (l < 2 or lam[l - 2] >= lam[l - 1]) and lam[l - 1] >= 0

    def canonical_text(self) -> str:
        return "(" + ",".join(str(c) for c in self.components) + ")"


def weight_lambda(l: int, k: int, m: int) -> Weight:
    """The highest weight labelled by (k, m), with k = -l for the mirror one."""
    if k == 0 and m == 0:
        return Weight((0,) * l)
    if k > 0:
        comp = [m] + [2] * (k - 1) + [0] * (l - k)
        return Weight(tuple(comp))
    if k == -l:
        comp = [m] + [2] * (l - 2) + [-2]
        return Weight(tuple(comp))
    raise LieActionError(f"no weight labelled k={k}")


class NotAWeightVector:
    """Sentinel outcome of :func:`weight_of`."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotAWeightVector"


NOT_A_WEIGHT_VECTOR = NotAWeightVector()


# ---------------------------------------------------------------------------
# distinguished generators
# ---------------------------------------------------------------------------

def _zero_entries(n: int):
    return [[GaussianRational(0) for _ in range(n)] for _ in range(n)]


def cartan_generator(n: int, i: int) -> GlMatrix:
    """Torus basis element ``H_i`` (1-based ``i <= floor(n/2)``)."""
    if not 1 <= i <= n // 2:
        raise LieActionError(f"cartan index {i} out of range")
    ent = _zero_entries(n)
    ent[2 * i - 2][2 * i - 1] = GR_I
    ent[2 * i - 1][2 * i - 2] = -GR_I
    return GlMatrix(n, ent)


_X_PLUS = ((GaussianRational(1), GaussianRational(0, -1)), (GaussianRational(0, -1), GaussianRational(-1)))


def y_generator(n: int, a: int, b: int) -> GlMatrix:
    """The symmetric raising element supported on paired blocks (a, b)."""
    l = n // 2
    if not (1 <= a <= l and 1 <= b <= l):
        raise LieActionError(f"y indices ({a},{b}) out of range")
    ent = _zero_entries(n)
    if a == b:
        for p in range(2):
            for q in range(2):
                ent[2 * a - 2 + p][2 * a - 2 + q] = _X_PLUS[p][q] * Fraction(-1, 2)
    else:
        for p in range(2):
            for q in range(2):
                ent[2 * a - 2 + p][2 * b - 2 + q] = _X_PLUS[p][q] * Fraction(-1, 4)
                ent[2 * b - 2 + p][2 * a - 2 + q] = _X_PLUS[q][p] * Fraction(-1, 4)
    return GlMatrix(n, ent)


def _ad_matrix_on_span(H: GlMatrix, basis: list[GlMatrix], read_slots: list[tuple[int, int]]):
    """Matrix of ad_H on the span of ``basis``, read off fixed entry slots."""
    cols = []
    for B in basis:
        m = H.matmul(B) - B.matmul(H)
        cols.append([m.entries[p][q] for (p, q) in read_slots])
    # columns -> matrix rows
    dim = len(basis)
    return [[cols[j][i] for j in range(dim)] for i in range(dim)]


def root_generator(n: int, i: int, j: int, sign: int) -> GlMatrix:
    """Generator of the root space ``eps_i + sign*eps_j`` (1-based, i < j)."""
    l = n // 2
    if not (1 <= i < j <= l) or sign not in (1, -1):
        raise LieActionError(f"root indices ({i},{j},{sign}) invalid")
    rows_i = (2 * i - 2, 2 * i - 1)
    rows_j = (2 * j - 2, 2 * j - 1)
    basis = []
    slots = []
    for p in rows_i:
        for q in rows_j:
            ent = _zero_entries(n)
            ent[p][q] = GaussianRational(1)
            ent[q][p] = GaussianRational(-1)
            basis.append(GlMatrix(n, ent))
            slots.append((p, q))
    return _solve_root_vector(n, basis, slots, [(cartan_generator(n, i), 1), (cartan_generator(n, j), sign)])


def short_root_generator(n: int, i: int, sign: int = 1) -> GlMatrix:
    """Generator of the short root space ``sign*eps_i`` (odd dimension only)."""
    if n % 2 == 0:
        raise LieActionError("short roots exist only in odd dimension")
    l = n // 2
    if not 1 <= i <= l or sign not in (1, -1):
        raise LieActionError(f"short root index ({i},{sign}) invalid")
    last = n - 1
    basis = []
    slots = []
    for p in (2 * i - 2, 2 * i - 1):
        ent = _zero_entries(n)
        ent[p][last] = GaussianRational(1)
        ent[last][p] = GaussianRational(-1)
        basis.append(GlMatrix(n, ent))
        slots.append((p, last))
    return _solve_root_vector(
        n, basis, slots, [(cartan_generator(n, i), sign)], root2=True
    )


def _solve_root_vector(n, basis, slots, eigen_pairs, root2: bool = False) -> GlMatrix:
    dim = len(basis)
    rows = []
    for H, mu in eigen_pairs:
        ad = _ad_matrix_on_span(H, basis, slots)
        for r in range(dim):
            row = [ad[r][c] - (GaussianRational(mu) if r == c else GR_ZERO) for c in range(dim)]
            rows.append(row)
    null = nullspace_dense(rows)
    if len(null) != 1:
        raise LieActionError("root space construction did not yield a line")
    vec = null[0]
    lead = next(c for c in vec if not c.is_zero())
    vec = [c / lead for c in vec]
    acc = _zero_entries(n)
    for c, B in zip(vec, basis):
        for p in range(n):
            for q in range(n):
                acc[p][q] = acc[p][q] + B.entries[p][q] * c
    return GlMatrix(n, acc, root2=root2)


def standard_generator(kind, n: int) -> GlMatrix:
    """Dispatch for the distinguished generators.

    ``kind`` is a tuple: ``("cartan", i)``, ``("root_plus", i, j, sign)``,
    ``("root_short", i)`` (odd n), or ``("y", a, b)``.
    """
    tag = kind[0]
    if tag == "cartan":
        return cartan_generator(n, kind[1])
    if tag == "root_plus":
        return root_generator(n, kind[1], kind[2], kind[3])
    if tag == "root_short":
        return short_root_generator(n, kind[1])
    if tag == "y":
        return y_generator(n, kind[1], kind[2])
    raise LieActionError(f"unknown generator kind {kind!r}")


# ---------------------------------------------------------------------------
# the Lie derivative
# ---------------------------------------------------------------------------

class _Velocities:
    """Velocity polynomials of the fundamental vector field of one element."""

    def __init__(self, space: Space, W: GlMatrix):
        scale = 1 if W.root2 else 0
        neg = [[-e for e in row] for row in W.entries]
        self.z_vel = coords.linear_images(space, coords.matrix(space.n, neg), fiber=False, sqrt2_scale=scale)
        wt = W.transpose()
        lin = coords.linear_images(space, wt.entries, fiber=True, sqrt2_scale=scale)
        q = coords.quadratic_form(space, wt.entries, sqrt2_scale=scale)
        self.zeta_vel = [lin[p] - space.zeta(p) * q for p in space.all_positions()]
        # generator images (the differential of the matching velocity):
        # gen -> list[(poly, gen)] within the same slot and kind
        self.gen_images: dict[int, list[tuple[MultiPolynomial, int]]] = {}
        for slot in (SLOT1, SLOT2):
            for kind, vels, var_of in (
                (KIND_DZ, self.z_vel, space.z_var),
                (KIND_DZETA, self.zeta_vel, space.zeta_var),
            ):
                for pos in space.all_positions():
                    imgs = []
                    vel = vels[pos]
                    for qpos in space.all_positions():
                        dcoef = vel.partial(var_of(qpos))
                        if dcoef:
                            imgs.append((dcoef, generator(space, slot, kind, qpos)))
                    self.gen_images[generator(space, slot, kind, pos)] = imgs

    def derive_poly(self, space: Space, f: MultiPolynomial) -> MultiPolynomial:
        acc = space.zero_poly()
        for pos in space.all_positions():
            dz = f.partial(space.z_var(pos))
            if dz:
                acc = acc + dz * self.z_vel[pos]
            dzeta = f.partial(space.zeta_var(pos))
            if dzeta:
                acc = acc + dzeta * self.zeta_vel[pos]
        return acc


def _velocities_for(space: Space, W: GlMatrix) -> _Velocities:
    v = W._velocities.get(space.n)
    if v is None:
        v = _Velocities(space, W)
        W._velocities[space.n] = v
    return v


def _lie_derive(space: Space, W: GlMatrix, form: DoubleForm, include_second_slot: bool) -> DoubleForm:
    vel = _velocities_for(space, W)
    acc = DoubleForm(space)
    for (w1, w2), f in form.terms.items():
        df = vel.derive_poly(space, f)
        if df:
            acc = acc + DoubleForm(space, {(w1, w2): df})
        gens = list(w1) + (list(w2) if include_second_slot else [])
        for gid in gens:
            slot = gen_slot(space, gid)
            imgs = vel.gen_images[gid]
            if not imgs:
                continue
            # replace the generator in place by its image 1-form
            if slot == SLOT1:
                idx = w1.index(gid)
                pre, post = (w1[:idx], ()), ((w1[idx + 1:]), w2)
            else:
                idx = w2.index(gid)
                pre, post = ((), w2[:idx]), (w1, w2[idx + 1:])
            left = DoubleForm(space, {pre: f})
            mid = DoubleForm(space)
            for poly, img in imgs:
                key = ((img,), ()) if slot == SLOT1 else ((), (img,))
                mid = mid + DoubleForm(space, {key: poly})
            right = DoubleForm(space, {post: space.const(1)})
            acc = acc + left.wedge(mid).wedge(right)
    return acc


def fundamental_lie_derivative(W: GlMatrix, form: DoubleForm) -> DoubleForm:
    """Lie derivative along the fundamental vector field of ``W``.

    Acts on coefficients and first-slot generators; the second slot is
    treated as constant.  On ordinary forms this is the full action.
    """
    space = form.space
    if W.n != space.n:
        raise LieActionError("matrix dimension does not match the space")
    return _lie_derive(space, W, form, include_second_slot=False)


def lie_derive_two_slot(W: GlMatrix, form: DoubleForm) -> DoubleForm:
    """Derivation extended to second-slot generators.

    Second-slot base generators transform by the constant-coefficient
    differential of the base velocity; fiber ones by the differential of the
    fiber velocity.  Restricted to trace-free ``W`` and fully second-slot
    saturated products this agrees with the first-slot action.
    """
    space = form.space
    if W.n != space.n:
        raise LieActionError("matrix dimension does not match the space")
    return _lie_derive(space, W, form, include_second_slot=True)


# ---------------------------------------------------------------------------
# calibration, weights, highest-weight certification
# ---------------------------------------------------------------------------

class Calibration:
    """Engine-wide sign conventions, measured once per dimension.

    ``weight_sign`` makes the reference fiber coordinate a weight-(1,0,...)
    vector; ``bracket_sign`` relates commutators of Lie derivatives to the
    derivative of the matrix commutator.  Positive-root generators are
    selected against the calibrated weight functional.
    """

    def __init__(self, space: Space):
        self.space = space
        l = space.l
        h1 = cartan_generator(space.n, 1)
        ref = DoubleForm.from_poly(space.zeta(space.barred(1)))
        val = _eigen_scalar(ref, fundamental_lie_derivative(h1, ref))
        if val is None or val not in (GaussianRational(1), GaussianRational(-1)):
            raise LieActionError("weight calibration failed")
        self.weight_sign = 1 if val == GaussianRational(1) else -1

        y11 = y_generator(space.n, 1, 1)
        bracket = h1.bracket(y11)
        probe = DoubleForm.from_poly(space.zeta(space.unbarred(1)) + space.z(space.unbarred(1)))
        comm = fundamental_lie_derivative(h1, fundamental_lie_derivative(y11, probe)) - fundamental_lie_derivative(
            y11, fundamental_lie_derivative(h1, probe)
        )
        target = fundamental_lie_derivative(bracket, probe)
        if equal_on_sphere(comm, target):
            self.bracket_sign = 1
        elif equal_on_sphere(comm, -target):
            self.bracket_sign = -1
        else:
            raise LieActionError("bracket calibration failed")

        self.cartans = [cartan_generator(space.n, i) for i in range(1, l + 1)]
        # a generator raises the calibrated weight by weight_sign * bracket_sign
        # times its raw root, so for flip == -1 the positive spaces are the
        # negatives of the raw positive ones
        flip = self.weight_sign * self.bracket_sign
        pairs = [(i, j) for i in range(1, l + 1) for j in range(i + 1, l + 1)]
        if flip == 1:
            gens = [root_generator(space.n, i, j, s) for (i, j) in pairs for s in (1, -1)]
            shorts = [short_root_generator(space.n, i, 1) for i in range(1, l + 1)] if space.odd else []
        else:
            gens = [_negated_root(space.n, i, j, s) for (i, j) in pairs for s in (1, -1)]
            shorts = [short_root_generator(space.n, i, -1) for i in range(1, l + 1)] if space.odd else []
        self.positive_generators = gens + shorts


def _negated_root(n, i, j, s) -> GlMatrix:
    # root space of -(eps_i + s*eps_j)
    basis, slots = _root_block_basis(n, i, j)
    return _solve_root_vector(
        n, basis, slots, [(cartan_generator(n, i), -1), (cartan_generator(n, j), -s)]
    )


def _root_block_basis(n, i, j):
    rows_i = (2 * i - 2, 2 * i - 1)
    rows_j = (2 * j - 2, 2 * j - 1)
    basis = []
    slots = []
    for p in rows_i:
        for q in rows_j:
            ent = _zero_entries(n)
            ent[p][q] = GaussianRational(1)
            ent[q][p] = GaussianRational(-1)
            basis.append(GlMatrix(n, ent))
            slots.append((p, q))
    return basis, slots


_CALIBRATIONS: dict[int, Calibration] = {}


def calibration(space: Space) -> Calibration:
    cal = _CALIBRATIONS.get(space.n)
    if cal is None:
        cal = Calibration(space)
        _CALIBRATIONS[space.n] = cal
    return cal


def _eigen_scalar(a: DoubleForm, la: DoubleForm):
    """Scalar c with ``la = c a`` on the sphere, or None."""
    space = a.space
    for key in sorted(a.terms, key=lambda k: (len(k[0]), len(k[1]), k)):
        ra, _ = a.terms[key].reduce_mod_sphere()
        if ra.is_zero():
            continue
        lb = la.terms.get(key)
        if lb is None:
            cand = GaussianRational(0)
        else:
            rb, _ = lb.reduce_mod_sphere()
            mono = max(ra.terms)
            cand = rb.coefficient(mono) / ra.coefficient(mono)
        try:
            if equal_on_sphere(la, a.scale(cand)):
                return cand
        except FormError:
            return None
        return None
    return None


def weight_of(a: DoubleForm):
    """Calibrated weight of a nonzero form, or the sentinel when not a
    simultaneous eigenvector of the torus action on the sphere."""
    if a.is_zero():
        raise LieActionError("the zero form has no weight")
    space = a.space
    cal = calibration(space)
    comps = []
    for h in cal.cartans:
        c = _eigen_scalar(a, fundamental_lie_derivative(h, a))
        if c is None or not c.is_real() or c.re.denominator != 1:
            return NOT_A_WEIGHT_VECTOR
        comps.append(cal.weight_sign * int(c.re))
    return Weight(tuple(comps))


def is_highest_weight(a: DoubleForm) -> bool:
    """Weight vector annihilated on the sphere by all positive root spaces."""
    if a.is_zero():
        raise LieActionError("the zero form is not a weight vector")
    w = weight_of(a)
    if w is NOT_A_WEIGHT_VECTOR:
        return False
    for x in calibration(a.space).positive_generators:
        im = fundamental_lie_derivative(x, a)
        if not im.vanishes_on_sphere():
            return False
    return True
