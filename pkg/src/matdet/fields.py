"""Exact coefficient arithmetic over Q, prime fields F_p, and small
extension fields F_{p^e}.

Rationals are `fractions.Fraction` (arbitrary precision, canonical form).
Elements of F_{p^e} are canonical integers in [0, p^e): the base-p digits of
the integer are the coordinates in the polynomial basis 1, t, ..., t^{e-1}
of F_p[t] modulo a fixed irreducible polynomial.  The modulus is chosen
deterministically as the lexicographically least coefficient vector
(c_0, ..., c_{e-1}) making t^e + c_{e-1} t^{e-1} + ... + c_0 irreducible,
so identical parameters always yield identical fields.

All values are immutable and all operations pure.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import InputError

MAX_EXTENSION_DEGREE = 8


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- dense polynomial helpers over F_p (coefficient lists, low degree first) --

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    """Remainder of a modulo monic b over F_p."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        if a[-1] != 0:
            c = a[-1]
            shift = len(a) - 1 - db
            for i in range(db + 1):
                a[shift + i] = (a[shift + i] - c * b[i]) % p
        _poly_trim(a)
        if not a:
            break
    return a


def _irreducible(candidate, p, e):
    """Trial-division irreducibility test for a monic degree-e polynomial."""
    if candidate[0] == 0:
        return False
    # enumerate monic divisors of degree 1 .. e // 2
    for d in range(1, e // 2 + 1):
        for code in range(p ** d):
            div = []
            c = code
            for _ in range(d):
                div.append(c % p)
                c //= p
            div.append(1)
            if not _poly_mod(candidate, div, p):
                return False
    return True


def _find_modulus(p: int, e: int):
    for code in range(p ** e):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        candidate = coeffs + [1]
        if _irreducible(candidate, p, e):
            return tuple(candidate)
    raise InputError(f"no irreducible polynomial of degree {e} over F_{p}")


class FieldSpec:
    """A coefficient field: Q (char=0) or F_{p^e}.

    Provides raw-value arithmetic (used by the hot loops) plus a wrapped
    `FieldElement` interface.  Raw values are Fraction for char 0 and int
    in [0, p^e) otherwise.
    """

    __slots__ = ("char", "ext_degree", "modulus", "order", "_red")

    def __init__(self, characteristic: int, extension_degree: int = 1, _modulus=None):
        if characteristic == 0:
            if extension_degree != 1:
                raise InputError("extension fields require positive characteristic")
            self.char = 0
            self.ext_degree = 1
            self.modulus = None
            self.order = 0
            self._red = None
            return
        if not _is_prime(characteristic):
            raise InputError("characteristic must be 0 or prime")
        if extension_degree < 1:
            raise InputError("extension degree must be at least 1")
        if extension_degree > MAX_EXTENSION_DEGREE:
            raise InputError(f"extension degree limited to {MAX_EXTENSION_DEGREE}")
        p, e = characteristic, extension_degree
        self.char = p
        self.ext_degree = e
        self.order = p ** e
        if e == 1:
            self.modulus = None
            self._red = None
        else:
            self.modulus = _modulus if _modulus is not None else _find_modulus(p, e)
            if len(self.modulus) != e + 1 or self.modulus[-1] != 1:
                raise InputError("modulus must be monic of the stated degree")
            if not _irreducible(list(self.modulus), p, e):
                raise InputError("modulus is reducible")
            # reduction table: t^j for j in [e, 2e-2] as digit lists
            red = []
            cur = [(-c) % p for c in self.modulus[:e]]  # t^e
            red.append(list(cur))
            for _ in range(e - 2):
                cur = [0] + cur
                if len(cur) > e:
                    top = cur.pop()
                    for i in range(e):
                        cur[i] = (cur[i] + top * red[0][i]) % p
                red.append(list(cur))
            self._red = red

    # -- identity / conversion ------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.char == other.char
                and self.ext_degree == other.ext_degree and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.char, self.ext_degree, self.modulus))

    def __repr__(self):
        if self.char == 0:
            return "QQ"
        if self.ext_degree == 1:
            return f"GF({self.char})"
        return f"GF({self.char}^{self.ext_degree})"

    @property
    def is_finite(self) -> bool:
        return self.char != 0

    def raw_from_int(self, n: int):
        if self.char == 0:
            return Fraction(n)
        return n % self.char  # integers land in the prime subfield

    def _digits(self, n: int):
        p, e = self.char, self.ext_degree
        out = []
        for _ in range(e):
            out.append(n % p)
            n //= p
        return out

    def _undigits(self, ds):
        p = self.char
        n = 0
        for d in reversed(ds):
            n = n * p + d
        return n

    # -- raw arithmetic -------------------------------------------------------

    def raw_add(self, a, b):
        if self.char == 0:
            return a + b
        if self.ext_degree == 1:
            return (a + b) % self.char
        da, db = self._digits(a), self._digits(b)
        p = self.char
        return self._undigits([(x + y) % p for x, y in zip(da, db)])

    def raw_sub(self, a, b):
        return self.raw_add(a, self.raw_neg(b))

    def raw_neg(self, a):
        if self.char == 0:
            return -a
        if self.ext_degree == 1:
            return (-a) % self.char
        p = self.char
        return self._undigits([(-x) % p for x in self._digits(a)])

    def raw_mul(self, a, b):
        if self.char == 0:
            return a * b
        if self.ext_degree == 1:
            return (a * b) % self.char
        p, e = self.char, self.ext_degree
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # fold t^j for j >= e using the reduction table
        for j in range(2 * e - 2, e - 1, -1):
            c = prod[j]
            if c:
                row = self._red[j - e]
                for i in range(e):
                    prod[i] = (prod[i] + c * row[i]) % p
        return self._undigits(prod[:e])

    def raw_inv(self, a):
        if self.char == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / a
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.ext_degree == 1:
            return pow(a, self.char - 2, self.char)
        return self.raw_pow(a, self.order - 2)

    def raw_div(self, a, b):
        return self.raw_mul(a, self.raw_inv(b))

    def raw_pow(self, a, n: int):
        if n < 0:
            return self.raw_pow(self.raw_inv(a), -n)
        result = self.raw_from_int(1)
        base = a
        while n:
            if n & 1:
                result = self.raw_mul(result, base)
            base = self.raw_mul(base, base)
            n >>= 1
        return result

    # -- element interface ----------------------------------------------------

    def el(self, value) -> "FieldElement":
        """Wrap an integer (or Fraction in char 0) as a field element."""
        if self.char == 0:
            return FieldElement(self, Fraction(value))
        if isinstance(value, Fraction):
            if value.denominator % self.char == 0:
                raise ZeroDivisionError("denominator vanishes in this characteristic")
            num = self.raw_from_int(value.numerator)
            return FieldElement(self, self.raw_div(num, self.raw_from_int(value.denominator)))
        return FieldElement(self, value % self.order)

    def zero(self) -> "FieldElement":
        return self.el(0)

    def one(self) -> "FieldElement":
        return self.el(1)

    def elements(self):
        """All field elements (finite fields only)."""
        if self.char == 0:
            raise InputError("cannot enumerate an infinite field")
        return [FieldElement(self, v) for v in range(self.order)]

    def additive_basis_raw(self):
        """Raw values 1, t, ..., t^{e-1}: an F_p-basis of the additive group."""
        if self.char == 0:
            raise InputError("finite fields only")
        return [self.char ** i for i in range(self.ext_degree)]

    def primitive_raw(self):
        """A generator of the multiplicative group (raw value)."""
        if self.char == 0:
            raise InputError("finite fields only")
        n = self.order - 1
        primes = []
        m = n
        d = 2
        while d * d <= m:
            if m % d == 0:
                primes.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            primes.append(m)
        for cand in range(1, self.order):
            if all(self.raw_pow(cand, n // r) != 1 for r in primes):
                return cand
        raise RuntimeError("no primitive element found")

    def random(self, rng) -> "FieldElement":
        if self.char == 0:
            num = rng.randint(-9, 9)
            den = rng.randint(1, 9)
            return self.el(Fraction(num, den))
        return FieldElement(self, rng.randrange(self.order))

    def random_nonzero(self, rng) -> "FieldElement":
        while True:
            x = self.random(rng)
            if x:
                return x


class FieldElement:
    """Immutable element of a FieldSpec, in canonical form."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.el(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_add(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_sub(self.value, other.value))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_mul(self.value, other.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_div(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.raw_neg(self.value))

    def __pow__(self, n):
        return FieldElement(self.field, self.field.raw_pow(self.value, n))

    def inverse(self):
        return FieldElement(self.field, self.field.raw_inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.raw_from_int(other) if isinstance(other, int) \
                else self.value == self.field.el(other).value
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"{self.value!r}"


def field_make(characteristic: int, extension_degree: int = 1) -> FieldSpec:
    """Construct Q, F_p or F_{p^e} with the deterministic modulus choice."""
    return FieldSpec(characteristic, extension_degree)


def binomial_in_field(alpha: int, gamma: int, field: FieldSpec) -> FieldElement:
    """The binomial coefficient C(alpha, gamma) as an element of the field.

    In characteristic p the value is computed by Lucas' decomposition:
    C(alpha, gamma) mod p is the product of the digitwise binomials of the
    base-p expansions, so multiples of p vanish without big-integer work.
    """
    if gamma > alpha or gamma < 0 or alpha < 0:
        raise InputError("binomial requires 0 <= gamma <= alpha")
    if field.char == 0:
        return field.el(comb(alpha, gamma))
    p = field.char
    result = 1
    a, g = alpha, gamma
    while a or g:
        da, dg = a % p, g % p
        if dg > da:
            return field.el(0)
        result = (result * comb(da, dg)) % p
        a //= p
        g //= p
    return field.el(result)
