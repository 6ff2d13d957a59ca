"""Sparse multivariate polynomials viewed as (possibly truncated) power
series over a FieldSpec.

Terms are stored as a dict mapping exponent tuples to nonzero field
elements.  `truncation` is either None (the polynomial is exact) or an
integer T meaning that only terms of total degree < T are known; no term of
degree >= T is ever stored.  Arithmetic propagates truncations
conservatively, so every stored coefficient of every result is exact.

Orderings: `negdegrevlex` and `negdeglex` are the two supported local
monomial orderings (1 is larger than every variable, so leading terms have
minimal total degree).
"""

from __future__ import annotations

from fractions import Fraction
from math import inf

from .errors import InputError, ProblemParseError
from .fields import FieldElement, FieldSpec, binomial_in_field

ORDERING_KINDS = ("negdegrevlex", "negdeglex")


class LocalOrdering:
    """A local monomial ordering on a fixed number of variables.

    `key(exps)` returns a sort key: larger key means larger monomial.
    """

    __slots__ = ("kind", "variable_count")

    def __init__(self, kind: str, variable_count: int):
        if kind not in ORDERING_KINDS:
            raise InputError(f"unknown ordering {kind!r}")
        self.kind = kind
        self.variable_count = variable_count

    def key(self, exps):
        deg = sum(exps)
        if self.kind == "negdegrevlex":
            return (-deg, tuple(-e for e in reversed(exps)))
        return (-deg, exps)

    def __eq__(self, other):
        return (isinstance(other, LocalOrdering) and self.kind == other.kind
                and self.variable_count == other.variable_count)

    def __hash__(self):
        return hash((self.kind, self.variable_count))

    def __repr__(self):
        return f"LocalOrdering({self.kind!r}, {self.variable_count})"


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Series:
    """A sparse polynomial in `nvars` variables over `field`."""

    __slots__ = ("field", "nvars", "terms", "truncation")

    def __init__(self, field: FieldSpec, nvars: int, terms=None, truncation=None):
        self.field = field
        self.nvars = nvars
        self.truncation = truncation
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise InputError("exponent vector of wrong length")
                if truncation is not None and sum(exps) >= truncation:
                    continue
                if coeff:
                    clean[exps] = coeff
        self.terms = clean

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field, nvars, truncation=None):
        return cls(field, nvars, {}, truncation)

    @classmethod
    def constant(cls, field, nvars, value, truncation=None):
        c = value if isinstance(value, FieldElement) else field.el(value)
        return cls(field, nvars, {(0,) * nvars: c}, truncation)

    @classmethod
    def variable(cls, field, nvars, index, truncation=None):
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(field, nvars, {exps: field.one()}, truncation)

    @classmethod
    def monomial(cls, field, nvars, exps, coeff=1, truncation=None):
        c = coeff if isinstance(coeff, FieldElement) else field.el(coeff)
        return cls(field, nvars, {tuple(exps): c}, truncation)

    # -- basic queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self):
        """Least total degree of a nonzero term; infinity for the zero series."""
        if not self.terms:
            return inf
        return min(sum(e) for e in self.terms)

    def degree(self):
        """Largest total degree of a stored term; -infinity if zero."""
        if not self.terms:
            return -inf
        return max(sum(e) for e in self.terms)

    def coefficient(self, exps) -> FieldElement:
        return self.terms.get(tuple(exps), self.field.zero())

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self.truncation == other.truncation and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.nvars, self.truncation,
                     frozenset((e, c.value) for e, c in self.terms.items())))

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Series({format_series(self, names)})"

    def _check(self, other):
        if self.field != other.field or self.nvars != other.nvars:
            raise InputError("series over different rings")

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        trunc = _min_trunc(self.truncation, other.truncation)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                t = s + c
                if t:
                    terms[e] = t
                else:
                    del terms[e]
        return Series(self.field, self.nvars, terms, trunc)

    def __neg__(self):
        return Series(self.field, self.nvars,
                      {e: -c for e, c in self.terms.items()}, self.truncation)

    def __sub__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        # effective orders account for possibly unknown tails past a truncation
        of = self.order()
        og = other.order()
        of_eff = of if self.truncation is None else min(of, self.truncation)
        og_eff = og if other.truncation is None else min(og, other.truncation)
        trunc = None
        if self.truncation is not None and og_eff is not inf:
            trunc = _min_trunc(trunc, self.truncation + og_eff)
        if other.truncation is not None and of_eff is not inf:
            trunc = _min_trunc(trunc, other.truncation + of_eff)
        terms = {}
        raw_mul = self.field.raw_mul
        raw_add = self.field.raw_add
        for e1, c1 in self.terms.items():
            v1 = c1.value
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if trunc is not None and d1 + sum(e2) >= trunc:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = raw_mul(v1, c2.value)
                prev = terms.get(e)
                terms[e] = v if prev is None else raw_add(prev, v)
        out = {e: FieldElement(self.field, v) for e, v in terms.items() if v != 0}
        return Series(self.field, self.nvars, out, trunc)

    __rmul__ = __mul__

    def scale(self, coeff):
        c = coeff if isinstance(coeff, FieldElement) else self.field.el(coeff)
        if not c:
            return Series.zero(self.field, self.nvars, self.truncation)
        return Series(self.field, self.nvars,
                      {e: v * c for e, v in self.terms.items()}, self.truncation)

    def shift(self, exps):
        """Multiply by the monomial x^exps."""
        d = sum(exps)
        trunc = None if self.truncation is None else self.truncation + d
        return Series(self.field, self.nvars,
                      {tuple(a + b for a, b in zip(e, exps)): c
                       for e, c in self.terms.items()}, trunc)

    def __pow__(self, n: int):
        if n < 0:
            raise InputError("negative series powers are not supported")
        result = Series.constant(self.field, self.nvars, 1)
        for _ in range(n):
            result = result * self
        return result

    # -- jets, derivatives, substitution -------------------------------------------

    def jet(self, k: int) -> "Series":
        """All terms of total degree <= k; the result is truncated at k+1."""
        if self.truncation is not None and k >= self.truncation:
            raise InputError(
                f"jet of degree {k} requested beyond known truncation {self.truncation}")
        return Series(self.field, self.nvars,
                      {e: c for e, c in self.terms.items() if sum(e) <= k}, k + 1)

    def partial(self, nu: int) -> "Series":
        """Formal partial derivative with respect to variable index nu (0-based).

        Exponents are reduced into the field, so in characteristic p the
        terms whose exponent is divisible by p vanish.
        """
        if not 0 <= nu < self.nvars:
            raise InputError("variable index out of range")
        trunc = None if self.truncation is None else self.truncation - 1
        terms = {}
        for e, c in self.terms.items():
            if e[nu] == 0:
                continue
            coeff = c * self.field.el(e[nu])
            if coeff:
                e2 = tuple(v - 1 if i == nu else v for i, v in enumerate(e))
                terms[e2] = coeff
        return Series(self.field, self.nvars, terms, trunc)

    def substitute(self, phis, degree_bound=None) -> "Series":
        """Simultaneous substitution x_i -> phis[i].

        Every phis[i] must have order >= 1.  Terms of total degree above
        `degree_bound` are discarded; the result is exact below the bound.
        """
        phis = list(phis)
        if len(phis) != self.nvars:
            raise InputError("substitution needs one series per variable")
        for phi in phis:
            self._check(phi)
            if phi.order() < 1:
                raise InputError("substitution images must have positive order")
        trunc = degree_bound + 1 if degree_bound is not None else None
        for phi in phis:
            trunc = _min_trunc(trunc, phi.truncation)
        if self.truncation is not None:
            trunc = _min_trunc(trunc, self.truncation)
        return _subst(self, phis, self.nvars, trunc)

    def shift_expand(self, zs, degree_bound=None) -> "Series":
        """Expansion of f(x + z) by the three-part formula: f(x), plus the
        first-order part via formal partials, plus the binomial tail with
        coefficients reduced into the field.  Agrees with
        substitute(f, (x_0 + z_0, ...)).
        """
        zs = list(zs)
        if len(zs) != self.nvars:
            raise InputError("one shift series per variable required")
        for z in zs:
            self._check(z)
            if z and z.order() < 1:
                raise InputError("shift series must have positive order")
        trunc = degree_bound + 1 if degree_bound is not None else None
        for z in zs:
            trunc = _min_trunc(trunc, z.truncation)
        if self.truncation is not None:
            trunc = _min_trunc(trunc, self.truncation)

        out = Series(self.field, self.nvars, self.terms, trunc)
        for nu in range(self.nvars):
            if zs[nu]:
                out = out + _truncated(self.partial(nu) * zs[nu], trunc)

        # binomial tail over gamma <= alpha, |gamma| >= 2
        zpow = [{0: Series.constant(self.field, self.nvars, 1, trunc)} for _ in zs]

        def zpower(i, n):
            cache = zpow[i]
            if n not in cache:
                cache[n] = _truncated(zpower(i, n - 1) * zs[i], trunc)
            return cache[n]

        for alpha, c in self.terms.items():
            for gamma in _sub_exponents(alpha):
                if sum(gamma) < 2:
                    continue
                b = self.field.one()
                for a_i, g_i in zip(alpha, gamma):
                    b = b * binomial_in_field(a_i, g_i, self.field)
                    if not b:
                        break
                if not b:
                    continue
                zg = zpower(0, gamma[0])
                for i in range(1, self.nvars):
                    if gamma[i]:
                        zg = _truncated(zg * zpower(i, gamma[i]), trunc)
                rest = tuple(a - g for a, g in zip(alpha, gamma))
                out = out + zg.shift(rest).scale(c)
        return _truncated(out, trunc)


def _truncated(f: Series, trunc):
    if trunc is None:
        return f
    return Series(f.field, f.nvars, f.terms, _min_trunc(f.truncation, trunc))


def _sub_exponents(alpha):
    """All gamma with 0 <= gamma <= alpha componentwise."""
    if not alpha:
        yield ()
        return
    for g0 in range(alpha[0] + 1):
        for rest in _sub_exponents(alpha[1:]):
            yield (g0,) + rest


def _subst(f: Series, phis, active: int, trunc):
    """Substitute phis into f, where f only involves x_0 .. x_{active-1}."""
    if not f.terms:
        return Series.zero(f.field, f.nvars, trunc)
    if active == 0:
        return Series(f.field, f.nvars, dict(f.terms), trunc)
    v = active - 1
    slices = {}
    for e, c in f.terms.items():
        d = e[v]
        reduced = tuple(0 if i == v else x for i, x in enumerate(e))
        slices.setdefault(d, {})[reduced] = c
    degrees = sorted(slices, reverse=True)
    result = _subst(Series(f.field, f.nvars, slices[degrees[0]]), phis, v, trunc)
    prev = degrees[0]
    for d in degrees[1:]:
        for _ in range(prev - d - 1):
            result = _truncated(result * phis[v], trunc)
        result = _truncated(result * phis[v], trunc)
        result = result + _subst(Series(f.field, f.nvars, slices[d]), phis, v, trunc)
        prev = d
    for _ in range(prev):
        result = _truncated(result * phis[v], trunc)
    return _truncated(result, trunc)


def series_agree(f: Series, g: Series) -> bool:
    """Coefficientwise agreement up to the smaller truncation."""
    if f.field != g.field or f.nvars != g.nvars:
        return False
    bound = _min_trunc(f.truncation, g.truncation)
    if bound is None:
        return f.terms == g.terms
    for e, c in f.terms.items():
        if sum(e) < bound and g.terms.get(e) != c:
            return False
    for e, c in g.terms.items():
        if sum(e) < bound and f.terms.get(e) != c:
            return False
    return True


# -- polynomial expression grammar -----------------------------------------------
#
#   poly   := ['-'|'+'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := INT | VAR ['^' INT]
#
# Whitespace is insignificant; juxtaposition is not multiplication.

_TOKEN_INT = "int"
_TOKEN_NAME = "name"
_TOKEN_OP = "op"
_TOKEN_END = "end"


def _tokenize(text, line, col0):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        col = col0 + i
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append((_TOKEN_INT, int(text[i:j]), line, col))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((_TOKEN_NAME, text[i:j], line, col))
            i = j
        elif ch in "+-*^":
            tokens.append((_TOKEN_OP, ch, line, col))
            i += 1
        else:
            raise ProblemParseError(f"unexpected character {ch!r}", line, col)
    tokens.append((_TOKEN_END, None, line, col0 + n))
    return tokens


class _ExprParser:
    def __init__(self, tokens, varnames, field):
        self.tokens = tokens
        self.pos = 0
        self.varnames = list(varnames)
        self.field = field
        self.nvars = len(self.varnames)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message):
        kind, _, line, col = self.peek()
        raise ProblemParseError(message, line, col)

    def parse(self) -> Series:
        result = Series.zero(self.field, self.nvars)
        sign = 1
        kind, val, _, _ = self.peek()
        if kind == _TOKEN_OP and val in "+-":
            self.advance()
            sign = -1 if val == "-" else 1
        if self.peek()[0] == _TOKEN_END:
            self.fail("expected a term")
        result = result + self.term(sign)
        while True:
            kind, val, _, _ = self.peek()
            if kind == _TOKEN_END:
                return result
            if kind == _TOKEN_OP and val in "+-":
                self.advance()
                result = result + self.term(-1 if val == "-" else 1)
            else:
                self.fail("expected '+' or '-'")

    def term(self, sign) -> Series:
        coeff = self.field.el(sign)
        exps = [0] * self.nvars
        while True:
            kind, val, line, col = self.peek()
            if kind == _TOKEN_INT:
                self.advance()
                coeff = coeff * self.field.el(val)
            elif kind == _TOKEN_NAME:
                self.advance()
                if val not in self.varnames:
                    raise ProblemParseError(f"unknown variable {val!r}", line, col)
                idx = self.varnames.index(val)
                power = 1
                kind2, val2, _, _ = self.peek()
                if kind2 == _TOKEN_OP and val2 == "^":
                    self.advance()
                    kind3, val3, line3, col3 = self.peek()
                    if kind3 != _TOKEN_INT:
                        raise ProblemParseError("malformed exponent", line3, col3)
                    self.advance()
                    power = val3
                exps[idx] += power
            else:
                self.fail("expected an integer or a variable")
            kind, val, _, _ = self.peek()
            if kind == _TOKEN_OP and val == "*":
                self.advance()
                continue
            return Series.monomial(self.field, self.nvars, tuple(exps), coeff)


def parse_polynomial(text: str, varnames, field: FieldSpec,
                     line: int = 1, col0: int = 1) -> Series:
    """Parse a polynomial expression over the named variables."""
    tokens = _tokenize(text, line, col0)
    return _ExprParser(tokens, varnames, field).parse()


def format_series(f: Series, varnames, ordering: LocalOrdering | None = None) -> str:
    """Render a series in the expression grammar, leading term first."""
    if not f.terms:
        return "0"
    if ordering is None:
        ordering = LocalOrdering("negdegrevlex", f.nvars)
    parts = []
    for exps in sorted(f.terms, key=ordering.key, reverse=True):
        coeff = f.terms[exps]
        factors = []
        for name, e in zip(varnames, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        val = coeff.value
        negative = isinstance(val, Fraction) and val < 0
        mag = -val if negative else val
        if not factors or mag != 1:
            factors.insert(0, str(mag))
        text = "*".join(factors)
        if not parts:
            parts.append(f"-{text}" if negative else text)
        else:
            parts.append(f"- {text}" if negative else f"+ {text}")
    return " ".join(parts)
