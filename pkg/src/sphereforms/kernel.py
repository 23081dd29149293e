"""Exact scalar and polynomial arithmetic.

Everything downstream (forms, Lie derivatives, spherical integrals) is built
on three exact types:

* :class:`GaussianRational` -- complex numbers with rational real/imaginary
  part, the coefficient field of the engine.
* :class:`MultiPolynomial` -- sparse polynomials in the complex coordinates
  ``z_1, z_1b, ..., zeta_1, zeta_1b, ...`` of the fiber bundle, with
  Gaussian-rational coefficients.
* :class:`PiScaledScalar` -- exact values of spherical integrals, of the
  shape ``rational * pi**e`` with an integer exponent.

No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping


class KernelError(ValueError):
    pass


_FR0 = Fraction(0)
_FR1 = Fraction(1)


class GaussianRational:
    """Element of Q(i): ``re + im*sqrt(-1)`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- constructors -------------------------------------------------
    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value, 0)
        raise KernelError(f"cannot coerce {value!r} to a Gaussian rational")

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        other = GaussianRational.of(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.of(other)
        n = other.re * other.re + other.im * other.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b, c, d = self.re, self.im, other.re, -other.im
        return GaussianRational((a * c - b * d) / n, (a * d + b * c) / n)

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


class Space:
    """Coordinate bookkeeping for a fixed ambient dimension ``n``.

    The ordered index set has ``n`` slots ``1 < 1b < 2 < 2b < ... < l < lb``
    (plus a final self-conjugate slot for odd ``n``).  Variables come in two
    kinds, ``zeta`` (fiber) and ``z`` (base), one per slot; their order for
    the monomial division below is all ``zeta`` slots first, then all ``z``
    slots, each block in index order.
    """

    def __init__(self, n: int):
        if n < 2:
            raise KernelError("dimension must be at least 2")
        self.n = n
        self.l = n // 2
        self.odd = bool(n % 2)
        self.nvars = 2 * n
        self._labels = []
        for j in range(1, self.l + 1):
            self._labels.append(f"{j}")
            self._labels.append(f"b{j}")
        if self.odd:
            self._labels.append(f"{self.l + 1}")
        self._nu = self._build_nu()

    # -- index-set helpers ------------------------------------------------
    def bar(self, pos: int) -> int:
        """Conjugate slot; the odd trailing slot is its own conjugate."""
        if pos < 2 * self.l:
            return pos ^ 1
        return pos

    def all_positions(self) -> range:
        return range(self.n)

    def unbarred(self, j: int) -> int:
        """Slot of the unbarred index ``j`` (1-based, ``j <= l+1``)."""
        if j <= self.l:
            return 2 * (j - 1)
        if self.odd and j == self.l + 1:
            return self.n - 1
        raise KernelError(f"index {j} out of range for n={self.n}")

    def barred(self, j: int) -> int:
        """Slot of the barred index ``jb`` (1-based, ``j <= l``)."""
        if j <= self.l:
            return 2 * j - 1
        raise KernelError(f"barred index {j} out of range for n={self.n}")

    def label(self, pos: int) -> str:
        return self._labels[pos]

    # -- variable ids -------------------------------------------------------
    # zeta at slot p -> p ; z at slot p -> n + p.  The division order below is
    # plain lex with variable 0 largest, so zeta_1 > zeta_1b > ... > z_1 > ...
    def zeta_var(self, pos: int) -> int:
        return pos

    def z_var(self, pos: int) -> int:
        return self.n + pos

    def var_is_zeta(self, var: int) -> bool:
        return var < self.n

    def var_pos(self, var: int) -> int:
        return var if var < self.n else var - self.n

    def var_label(self, var: int) -> str:
        pos = self.var_pos(var)
        kind = "zeta" if self.var_is_zeta(var) else "z"
        return f"{kind}{self._labels[pos]}"

    # -- polynomial constructors ---------------------------------------------
    def zero_mono(self) -> tuple:
        return (0,) * self.nvars

    def poly(self, terms: Mapping[tuple, GaussianRational] | None = None) -> "MultiPolynomial":
        return MultiPolynomial(self, terms or {})

    def zero_poly(self) -> "MultiPolynomial":
        return MultiPolynomial(self, {})

    def const(self, c) -> "MultiPolynomial":
        c = GaussianRational.of(c)
        if c.is_zero():
            return self.zero_poly()
        return MultiPolynomial(self, {self.zero_mono(): c})

    def monomial(self, var_powers: Mapping[int, int], coeff=GR_ONE) -> "MultiPolynomial":
        exps = [0] * self.nvars
        for var, p in var_powers.items():
            exps[var] += p
        coeff = GaussianRational.of(coeff)
        if coeff.is_zero():
            return self.zero_poly()
        return MultiPolynomial(self, {tuple(exps): coeff})

    def var_poly(self, var: int, coeff=GR_ONE) -> "MultiPolynomial":
        return self.monomial({var: 1}, coeff)

    def zeta(self, pos: int) -> "MultiPolynomial":
        return self.var_poly(self.zeta_var(pos))

    def z(self, pos: int) -> "MultiPolynomial":
        return self.var_poly(self.z_var(pos))

    # -- the sphere ideal ------------------------------------------------------
    def _build_nu(self) -> "MultiPolynomial":
        acc = {}
        for pos in range(self.n):
            key = [0] * self.nvars
            key[self.zeta_var(pos)] += 1
            key[self.zeta_var(self.bar(pos))] += 1
            key = tuple(key)
            acc[key] = acc.get(key, GR_ZERO) + GR_ONE
        return MultiPolynomial(self, acc)

    @property
    def nu(self) -> "MultiPolynomial":
        """The squared fiber norm; restricts to 1 on the unit sphere."""
        return self._nu

    def nu_of(self, positions: Iterable[int]) -> "MultiPolynomial":
        acc = self.zero_poly()
        for pos in positions:
            acc = acc + self.zeta(self.bar(pos)) * self.zeta(pos)
        return acc

    def __eq__(self, other):
        return isinstance(other, Space) and other.n == self.n

    def __hash__(self):
        return hash(("Space", self.n))

    def __repr__(self):
        return f"Space(n={self.n})"


class MultiPolynomial:
    """Sparse multivariate polynomial over the Gaussian rationals.

    Terms map exponent tuples (one slot per variable of the owning
    :class:`Space`) to nonzero coefficients.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms: Mapping[tuple, GaussianRational]):
        self.space = space
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    # -- basics ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> Iterator[tuple]:
        return iter(self.terms.items())

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(m) for m in self.terms)

    def coefficient(self, mono: tuple) -> GaussianRational:
        return self.terms.get(mono, GR_ZERO)

    def constant_part(self) -> GaussianRational:
        return self.terms.get(self.space.zero_mono(), GR_ZERO)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.space.zero_mono() in self.terms)

    def depends_only_on_zeta(self) -> bool:
        n = self.space.n
        return all(not any(m[n:]) for m in self.terms)

    # -- ring operations ---------------------------------------------------
    def _check(self, other: "MultiPolynomial"):
        if self.space != other.space:
            raise KernelError("polynomials over different spaces")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self.space.const(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, GR_ZERO) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return MultiPolynomial(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPolynomial(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self.space.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.of(other)
            if c.is_zero():
                return self.space.zero_poly()
            return MultiPolynomial(self.space, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, GR_ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return MultiPolynomial(self.space, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise KernelError("negative polynomial power")
        out = self.space.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self.space.const(other)
        if not isinstance(other, MultiPolynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space.n, frozenset(self.terms.items())))

    # -- calculus and symmetry ---------------------------------------------
    def partial(self, var: int) -> "MultiPolynomial":
        out = {}
        for m, c in self.terms.items():
            e = m[var]
            if not e:
                continue
            key = m[:var] + (e - 1,) + m[var + 1:]
            s = out.get(key, GR_ZERO) + c * e
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return MultiPolynomial(self.space, out)

    def conjugate(self) -> "MultiPolynomial":
        """Complex conjugation: conjugate coefficients, swap barred slots."""
        sp = self.space
        n = sp.n
        out = {}
        for m, c in self.terms.items():
            key = [0] * sp.nvars
            for var, e in enumerate(m):
                if e:
                    pos = sp.var_pos(var)
                    bpos = sp.bar(pos)
                    key[bpos if var < n else n + bpos] = e
            out[tuple(key)] = c.conjugate()
        return MultiPolynomial(sp, out)

    def substitute(self, images: Mapping[int, "MultiPolynomial"]) -> "MultiPolynomial":
        """Substitute every variable by its image polynomial."""
        sp = self.space
        cache: dict = {}

        def img_pow(var, e):
            key = (var, e)
            if key not in cache:
                cache[key] = images[var] ** e
            return cache[key]

        acc = sp.zero_poly()
        for m, c in self.terms.items():
            term = sp.const(c)
            for var, e in enumerate(m):
                if e:
                    term = term * img_pow(var, e)
            acc = acc + term
        return acc

    # -- division by the sphere relation ------------------------------------
    def reduce_mod_sphere(self) -> tuple["MultiPolynomial", bool]:
        """Remainder of division by (nu - 1) under the fixed lex order.

        Returns ``(remainder, divisible)``; the remainder contains no
        monomial divisible by the leading monomial ``zeta_1 * zeta_1b``.
        """
        sp = self.space
        divisor = sp.nu - 1
        lead = max(divisor.terms)  # lex-leading: the zeta_1*zeta_1b slot pair
        lc = divisor.terms[lead]
        tail = MultiPolynomial(sp, {m: c for m, c in divisor.terms.items() if m != lead})
        la, lb = 0, 1  # variable ids in the leading monomial
        work = dict(self.terms)
        while True:
            cand = [m for m in work if m[la] >= 1 and m[lb] >= 1]
            if not cand:
                break
            m = max(cand)
            c = work.pop(m)
            q = list(m)
            q[la] -= 1
            q[lb] -= 1
            q = tuple(q)
            factor = c / lc
            for tm, tc in tail.terms.items():
                key = tuple(a + b for a, b in zip(q, tm))
                s = work.get(key, GR_ZERO) - factor * tc
                if s.is_zero():
                    work.pop(key, None)
                else:
                    work[key] = s
        rem = MultiPolynomial(sp, work)
        return rem, rem.is_zero()

    def vanishes_on_sphere(self) -> bool:
        return self.reduce_mod_sphere()[1]

    # -- rendering ----------------------------------------------------------
    def canonical_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            factors = [str(c)]
            for var, e in enumerate(m):
                if e:
                    lbl = self.space.var_label(var)
                    factors.append(lbl if e == 1 else f"{lbl}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"<poly {self.canonical_text()}>"


class PiScaledScalar:
    """Exact value ``coefficient * pi**pi_exponent`` of a spherical integral."""

    __slots__ = ("coefficient", "pi_exponent")

    def __init__(self, coefficient, pi_exponent: int = 0):
        c = GaussianRational.of(coefficient)
        if c.is_zero():
            pi_exponent = 0
        self.coefficient = c
        self.pi_exponent = pi_exponent

    @staticmethod
    def zero() -> "PiScaledScalar":
        return PiScaledScalar(0, 0)

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return PiScaledScalar(self.coefficient * other, self.pi_exponent)
        return PiScaledScalar(
            self.coefficient * other.coefficient, self.pi_exponent + other.pi_exponent
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return PiScaledScalar(self.coefficient / other, self.pi_exponent)
        if other.is_zero():
            raise ZeroDivisionError("division by zero pi-scaled scalar")
        return PiScaledScalar(
            self.coefficient / other.coefficient, self.pi_exponent - other.pi_exponent
        )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = PiScaledScalar(other, 0)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.pi_exponent != other.pi_exponent:
            raise KernelError("cannot add pi-scaled scalars of different pi exponents")
        return PiScaledScalar(self.coefficient + other.coefficient, self.pi_exponent)

    __radd__ = __add__

    def __neg__(self):
        return PiScaledScalar(-self.coefficient, self.pi_exponent)

    def __sub__(self, other):
        return self + (-other)

    def conjugate(self) -> "PiScaledScalar":
        return PiScaledScalar(self.coefficient.conjugate(), self.pi_exponent)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = PiScaledScalar(other, 0)
        if not isinstance(other, PiScaledScalar):
            return NotImplemented
        return self.coefficient == other.coefficient and self.pi_exponent == other.pi_exponent

    def __hash__(self):
        return hash((self.coefficient, self.pi_exponent))

    def sign(self) -> int:
        """Sign of a real value (raises if not real)."""
        if not self.coefficient.is_real():
            raise KernelError("sign of a non-real scalar")
        v = self.coefficient.re
        return (v > 0) - (v < 0)

    def canonical_text(self) -> str:
        if self.is_zero():
            return "0"
        if self.pi_exponent == 0:
            return str(self.coefficient)
        return f"{self.coefficient} * pi^{self.pi_exponent}"

    def __repr__(self):
        return f"<scalar {self.canonical_text()}>"


def gamma_half(twice_arg: int) -> tuple[Fraction, int]:
    """Gamma(twice_arg / 2) as ``rational * pi**(e/2)`` with ``e`` in {0, 1}."""
    if twice_arg <= 0:
        raise KernelError("gamma argument must be positive")
    if twice_arg % 2 == 0:
        return Fraction(factorial(twice_arg // 2 - 1)), 0
    j = (twice_arg - 1) // 2
    return Fraction(factorial(2 * j), 4**j * factorial(j)), 1


def sphere_volume(k: int) -> PiScaledScalar:
    """Exact surface volume of the k-dimensional unit sphere.

    Resolves ``2 pi^((k+1)/2) / Gamma((k+1)/2)`` to a rational times an
    integer power of pi: the half powers of pi cancel against the
    half-integer Gamma values for even ``k``.
    """
    if k < 0:
        raise KernelError("sphere dimension must be nonnegative")
    g, half = gamma_half(k + 1)
    # 2 * pi^((k+1)/2) / (g * pi^(half/2))
    e2 = (k + 1) - half  # twice the resulting exponent
    if e2 % 2:
        raise KernelError("sphere volume with non-integer pi power")
    return PiScaledScalar(Fraction(2) / g, e2 // 2)


def sphere_volume_gamma_oracle(k: int) -> PiScaledScalar:
    """Independent evaluation of the same quantity via the Gamma recursion
    ``Gamma(x+1) = x Gamma(x)`` started from ``Gamma(1)`` and ``Gamma(1/2)``."""
    num = Fraction(1)
    half = (k + 1) % 2  # Gamma((k+1)/2) carries sqrt(pi) iff k+1 odd
    x2 = 1 if half else 2  # twice the starting argument
    while x2 < k + 1:
        num *= Fraction(x2, 2)
        x2 += 2
    e2 = (k + 1) - half
    return PiScaledScalar(Fraction(2) / num, e2 // 2)
