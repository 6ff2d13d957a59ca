"""Matrices of series, the acting groups and their action, and the
flattening of matrices into free-module vectors.

Group labels: "R" (coordinate changes only), "Gl" (left units), "Gr"
(right units), "Glr" (both).  A group element carries an optional left
unit U, an optional right unit V, and a coordinate change phi; it acts by
A |-> U * A(phi) * V.  Flattening of an m x n matrix is row-major: entry
(i, j) lands in component i*n + j.
"""

from __future__ import annotations

from math import inf

from .errors import InputError, ProblemParseError
from .fields import FieldSpec
from .series import Series, format_series, parse_polynomial

GROUPS = ("R", "Gl", "Gr", "Glr")


class SeriesMatrix:
    """An m x n matrix of Series over a common field and variable count."""

    __slots__ = ("rows", "cols", "entries", "field", "nvars")

    def __init__(self, entries):
        if not entries or not entries[0]:
            raise InputError("matrix must have at least one entry")
        self.rows = len(entries)
        self.cols = len(entries[0])
        first = entries[0][0]
        self.field = first.field
        self.nvars = first.nvars
        trunc = None
        truncated = False
        for row in entries:
            if len(row) != self.cols:
                raise InputError("ragged matrix")
            for e in row:
                if e.field != self.field or e.nvars != self.nvars:
                    raise InputError("matrix entries over different rings")
                if e.truncation is not None:
                    truncated = True
                    trunc = e.truncation if trunc is None else min(trunc, e.truncation)
        if truncated:
            # entries share the least truncation present
            self.entries = [[Series(e.field, e.nvars, e.terms, trunc) for e in row]
                            for row in entries]
        else:
            self.entries = [list(row) for row in entries]

    @property
    def truncation(self):
        return self.entries[0][0].truncation

    @classmethod
    def zero(cls, field, nvars, rows, cols, truncation=None):
        z = Series.zero(field, nvars, truncation)
        return cls([[z for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def identity(cls, field, nvars, size, truncation=None):
        one = Series.constant(field, nvars, 1, truncation)
        zero = Series.zero(field, nvars, truncation)
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)])

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"SeriesMatrix({format_matrix(self, names)})"

    def __add__(self, other):
        self._check_shape(other)
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check_shape(other)
        return SeriesMatrix([[a - b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return SeriesMatrix([[-a for a in row] for row in self.entries])

    def _check_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise InputError("matrix shape mismatch")

    def matmul(self, other: "SeriesMatrix", degree_bound=None) -> "SeriesMatrix":
        if self.cols != other.rows:
            raise InputError("matrix shape mismatch in product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Series.zero(self.field, self.nvars)
                for t in range(self.cols):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc.jet(degree_bound) if degree_bound is not None else acc)
            out.append(row)
        return SeriesMatrix(out)

    def map_entries(self, fn) -> "SeriesMatrix":
        return SeriesMatrix([[fn(e) for e in row] for row in self.entries])

    def jet(self, k: int) -> "SeriesMatrix":
        return self.map_entries(lambda e: e.jet(k))

    def substitute(self, phis, degree_bound=None) -> "SeriesMatrix":
        return self.map_entries(lambda e: e.substitute(phis, degree_bound))

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def constant_part(self):
        """The matrix of constant coefficients, as raw field values."""
        zero_exps = (0,) * self.nvars
        return [[e.coefficient(zero_exps).value for e in row] for row in self.entries]


def matrix_order(A: SeriesMatrix):
    """Minimum of the entry orders; infinity for the zero matrix."""
    return min((e.order() for row in A.entries for e in row), default=inf)


def flatten(A: SeriesMatrix):
    """Row-major flattening into a module vector (a list of Series)."""
    return [A.entries[i][j] for i in range(A.rows) for j in range(A.cols)]


def unflatten(components, rows: int, cols: int) -> SeriesMatrix:
    if len(components) != rows * cols:
        raise InputError("component count does not match the requested shape")
    return SeriesMatrix([[components[i * cols + j] for j in range(cols)]
                         for i in range(rows)])


def _const_det(mat, field: FieldSpec):
    """Determinant of a square matrix of raw field values."""
    n = len(mat)
    m = [row[:] for row in mat]
    det = field.raw_from_int(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return field.raw_from_int(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = field.raw_neg(det)
        det = field.raw_mul(det, m[col][col])
        inv = field.raw_inv(m[col][col])
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = field.raw_mul(m[r][col], inv)
                for c in range(col, n):
                    m[r][c] = field.raw_sub(m[r][c], field.raw_mul(factor, m[col][c]))
    return det


class GroupElement:
    """An element of one of the acting groups.

    phi is a tuple of Series with positive order and invertible linear
    part; U and V are square unit matrices (constant part invertible),
    present only for the groups that carry them.
    """

    __slots__ = ("group", "U", "V", "phi")

    def __init__(self, group: str, phi, U: SeriesMatrix | None = None,
                 V: SeriesMatrix | None = None):
        if group not in GROUPS:
            raise InputError(f"unknown group {group!r}")
        self.group = group
        self.phi = tuple(phi)
        self.U = U
        self.V = V
        self.validate()

    def validate(self):
        field = self.phi[0].field
        nvars = self.phi[0].nvars
        if len(self.phi) != nvars:
            raise InputError("phi must provide one series per variable")
        for comp in self.phi:
            if comp.field != field or comp.nvars != nvars:
                raise InputError("phi components over different rings")
            if comp.order() < 1:
                raise InputError("phi components must have positive order")
        linear = [[comp.coefficient(tuple(1 if i == j else 0 for j in range(nvars))).value
                   for i in range(nvars)] for comp in self.phi]
        # linear[row = variable index i][col = component nu]: d phi_nu / d x_i at 0
        if _const_det(linear, field) == 0:
            raise InputError("phi has singular linear part")
        wants_left = self.group in ("Gl", "Glr")
        wants_right = self.group in ("Gr", "Glr")
        if wants_left != (self.U is not None):
            raise InputError(f"group {self.group} {'requires' if wants_left else 'forbids'} a left unit")
        if wants_right != (self.V is not None):
            raise InputError(f"group {self.group} {'requires' if wants_right else 'forbids'} a right unit")
        for name, mat in (("U", self.U), ("V", self.V)):
            if mat is None:
                continue
            if mat.rows != mat.cols:
                raise InputError(f"{name} must be square")
            if mat.field != field or mat.nvars != nvars:
                raise InputError(f"{name} over a different ring")
            if _const_det(mat.constant_part(), field) == 0:
                raise InputError(f"{name} is not a unit")

    @classmethod
    def identity(cls, group: str, field: FieldSpec, nvars: int,
                 m: int | None = None, n: int | None = None) -> "GroupElement":
        phi = tuple(Series.variable(field, nvars, i) for i in range(nvars))
        U = SeriesMatrix.identity(field, nvars, m) if group in ("Gl", "Glr") else None
        V = SeriesMatrix.identity(field, nvars, n) if group in ("Gr", "Glr") else None
        return cls(group, phi, U, V)

    def compose(self, other: "GroupElement", degree_bound=None) -> "GroupElement":
        """The element g*h with act(g*h, A) = act(g, act(h, A))."""
        if self.group != other.group:
            raise InputError("cannot compose elements of different groups")
        phi = tuple(comp.substitute(self.phi, degree_bound) for comp in other.phi)
        U = V = None
        if self.U is not None:
            U = self.U.matmul(other.U.substitute(self.phi, degree_bound), degree_bound)
        if self.V is not None:
            V = other.V.substitute(self.phi, degree_bound).matmul(self.V, degree_bound)
        return GroupElement(self.group, phi, U, V)

    def inverse(self, degree_bound: int) -> "GroupElement":
        """Degreewise inverse, correct through the requested degree."""
        phi_inv = _compositional_inverse(self.phi, degree_bound)
        U = V = None
        if self.U is not None:
            U = _unit_inverse(self.U, degree_bound).substitute(phi_inv, degree_bound)
        if self.V is not None:
            V = _unit_inverse(self.V, degree_bound).substitute(phi_inv, degree_bound)
        return GroupElement(self.group, phi_inv, U, V)


def _unit_inverse(U: SeriesMatrix, degree_bound: int) -> SeriesMatrix:
    """Inverse of a unit matrix of series, truncated at the bound."""
    field, nvars, size = U.field, U.nvars, U.rows
    const = U.constant_part()
    cinv_raw = _const_matrix_inverse(const, field)
    cinv = SeriesMatrix([[Series.constant(field, nvars, field.el(v) if field.char else v)
                          for v in row] for row in cinv_raw])
    N = cinv.matmul(U, degree_bound) - SeriesMatrix.identity(field, nvars, size,
                                                             truncation=degree_bound + 1)
    acc = SeriesMatrix.identity(field, nvars, size)
    power = SeriesMatrix.identity(field, nvars, size)
    for _ in range(degree_bound):
        power = power.matmul(N, degree_bound)
        if power.is_zero():
            break
        acc = acc - power if _ % 2 == 0 else acc + power
    return acc.matmul(cinv, degree_bound)


def _const_matrix_inverse(mat, field: FieldSpec):
    n = len(mat)
    aug = [row[:] + [field.raw_from_int(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise InputError("constant part is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = field.raw_inv(aug[col][col])
        aug[col] = [field.raw_mul(v, inv) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [field.raw_sub(a, field.raw_mul(f, b))
                          for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _compositional_inverse(phi, degree_bound: int):
    """psi with phi_nu(psi(x)) = x_nu through the given degree."""
    field = phi[0].field
    nvars = phi[0].nvars
    linear = [[phi[nu].coefficient(tuple(1 if i == j else 0 for j in range(nvars))).value
               for nu in range(nvars)] for i in range(nvars)]
    # linear[i][nu] = coefficient of x_i in phi_nu; invert the transpose action
    linv = _const_matrix_inverse(linear, field)
    xs = [Series.variable(field, nvars, i) for i in range(nvars)]

    def apply_linv(vec):
        out = []
        for nu in range(nvars):
            acc = Series.zero(field, nvars)
            for i in range(nvars):
                acc = acc + vec[i].scale(field.el(linv[i][nu]) if field.char else linv[i][nu])
            out.append(acc)
        return out

    psi = apply_linv(xs)
    for _ in range(degree_bound):
        err = [phi[nu].substitute(psi, degree_bound) - xs[nu] for nu in range(nvars)]
        if all(not e for e in err):
            break
        corr = apply_linv(err)
        psi = [p - c for p, c in zip(psi, corr)]
    return tuple(psi)


def act(g: GroupElement, A: SeriesMatrix, degree_bound=None) -> SeriesMatrix:
    """The group action U * A(phi) * V, truncated at degree_bound."""
    if len(g.phi) != A.nvars:
        raise InputError("group element and matrix live over different rings")
    B = A.substitute(g.phi, degree_bound)
    if g.U is not None:
        if g.U.rows != A.rows:
            raise InputError("left unit has the wrong size")
        B = g.U.matmul(B, degree_bound)
    if g.V is not None:
        if g.V.rows != A.cols:
            raise InputError("right unit has the wrong size")
        B = B.matmul(g.V, degree_bound)
    return B


# -- matrix text format -------------------------------------------------------
#
#   rows separated by ';', entries by ','  e.g.  [x, y; y^3, x^2]

def parse_matrix(text: str, varnames, field: FieldSpec, line: int = 1,
                 col0: int = 1) -> SeriesMatrix:
    stripped = text.strip()
    pad = len(text) - len(text.lstrip())
    if not stripped.startswith("[") or not stripped.endswith("]"):
        raise ProblemParseError("matrix must be enclosed in [ ... ]", line, col0 + pad)
    inner = stripped[1:-1]
    inner_off = col0 + pad + 1
    rows = []
    width = None
    pos = 0
    for row_text in inner.split(";"):
        entries = []
        epos = pos
        for entry_text in row_text.split(","):
            if not entry_text.strip():
                raise ProblemParseError("empty matrix entry", line, inner_off + epos)
            entries.append(parse_polynomial(entry_text, varnames, field,
                                            line, inner_off + epos))
            epos += len(entry_text) + 1
        if width is None:
            width = len(entries)
        elif len(entries) != width:
            raise ProblemParseError("rows of unequal length", line, inner_off + pos)
        rows.append(entries)
        pos += len(row_text) + 1
    return SeriesMatrix(rows)


def format_matrix(A: SeriesMatrix, varnames) -> str:
    return "[" + "; ".join(", ".join(format_series(e, varnames) for e in row)
                           for row in A.entries) + "]"
