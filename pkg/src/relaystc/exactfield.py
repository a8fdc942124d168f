"""Exact arithmetic in the number fields underlying the code constructions.

A field is described by structure constants over a fixed Q-basis: the
product of two basis elements is a rational coordinate vector.  Elements
carry exact `Fraction` coordinates, so products and automorphisms never
touch floating point; the only lossy operation is `FieldElement.embed`,
which maps to a complex number through the field's fixed embedding.

Three fields are built in:

* ``silver_field``      -- Q(i, sqrt 7)  with basis {1, i, s7, i*s7}
* ``golden_field``      -- Q(i, sqrt 5)  with basis {1, i, s5, i*s5}
* ``cyclotomic5_field`` -- Q(zeta_5)     with power basis {1, z, z^2, z^3}

Additional fields can be registered from a JSON spec file, see
`load_field_spec`.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from pathlib import Path

import numpy as np

EMBED_TOL = 1e-12

RationalLike = int | str | Fraction


class FieldError(ValueError):
    """Field mismatch, unknown automorphism, or an invalid field spec."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)):
        num, den = x
        return Fraction(int(num), int(den))
    return Fraction(x)


def _frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(_frac(v) for v in row) for row in rows)


def _mat_vec(m, v: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _identity(n: int):
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def _diag(vals):
    n = len(vals)
    return [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _invertible(m) -> bool:
    n = len(m)
    a = [list(row) for row in m]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return False
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return True


class NumberFieldSpec:
    """A number field given by structure constants over a fixed Q-basis.

    Parameters
    ----------
    name : str
    basis_labels : labels of the basis elements; the first must be the unit.
    mul_table : d x d array of rational coordinate vectors, entry (i, j)
        holding the coordinates of ``b_i * b_j``.
    embedding : complex value of each basis element under the fixed
        embedding into C.
    automorphisms : name -> d x d rational matrix acting on coordinate
        columns.  Must contain the key ``"conj"`` (complex conjugation).
    """

    def __init__(self, name, basis_labels, mul_table, embedding, automorphisms):
        self.name = str(name)
        self.basis_labels = tuple(basis_labels)
        self.degree = len(self.basis_labels)
        self.mul_table = tuple(
            tuple(tuple(_frac(c) for c in cell) for cell in row) for row in mul_table
        )
        self.embedding = np.asarray(embedding, dtype=complex)
        self.automorphisms = {str(k): _frac_matrix(v) for k, v in automorphisms.items()}
        if "conj" not in self.automorphisms:
            raise FieldError(f"field {name!r} must register complex conjugation as 'conj'")
        self.validate()

    # -- element constructors ------------------------------------------------

    def element(self, coords) -> FieldElement:
        coords = tuple(_frac(c) for c in coords)
        if len(coords) != self.degree:
            raise FieldError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FieldElement(self, coords)

    def zero(self) -> FieldElement:
        return self.element([0] * self.degree)

    def one(self) -> FieldElement:
        return self.basis_element(0)

    def basis_element(self, i: int) -> FieldElement:
        return self.element([1 if j == i else 0 for j in range(self.degree)])

    def from_rational(self, q) -> FieldElement:
        c = [Fraction(0)] * self.degree
        c[0] = _frac(q)
        return self.element(c)

    def gaussian(self, z) -> FieldElement:
        """a + b*i as an element, assuming basis elements 0 and 1 are 1 and i."""
        z = complex(z)
        c = [Fraction(0)] * self.degree
        c[0], c[1] = Fraction(z.real), Fraction(z.imag)
        return self.element(c)

    # -- automorphisms -------------------------------------------------------

    def automorphism_matrix(self, name: str):
        try:
            return self.automorphisms[name]
        except KeyError:
            raise FieldError(f"unknown automorphism {name!r} on field {self.name!r}") from None

    def aut_order(self, name: str, max_order: int = 24) -> int:
        m = self.automorphism_matrix(name)
        p = m
        for k in range(1, max_order + 1):
            if p == _identity(self.degree):
                return k
            p = _mat_mul(p, m)
        raise FieldError(f"automorphism {name!r} has order > {max_order}")

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        """Check unit, commutativity, associativity, automorphism and embedding axioms."""
        d = self.degree
        basis = [self.basis_element(i) for i in range(d)]
        one = basis[0]
        for b in basis:
            if one * b != b:
                raise FieldError(f"{self.name}: basis element 0 is not a unit")
        for i in range(d):
            for j in range(i + 1, d):
                if basis[i] * basis[j] != basis[j] * basis[i]:
                    raise FieldError(f"{self.name}: product not commutative on basis ({i},{j})")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if (basis[i] * basis[j]) * basis[k] != basis[i] * (basis[j] * basis[k]):
                        raise FieldError(
                            f"{self.name}: product not associative on basis ({i},{j},{k})"
                        )
        for name, m in self.automorphisms.items():
            if not _invertible(m):
                raise FieldError(f"{self.name}: automorphism {name!r} is singular")
            for i in range(d):
                for j in range(d):
                    lhs = (basis[i] * basis[j]).apply(name)
                    rhs = basis[i].apply(name) * basis[j].apply(name)
                    if lhs != rhs:
                        raise FieldError(
                            f"{self.name}: {name!r} not multiplicative on basis ({i},{j})"
                        )
        for i in range(d):
            for j in range(d):
                lhs = self.embedding[i] * self.embedding[j]
                rhs = (basis[i] * basis[j]).embed()
                if abs(lhs - rhs) > EMBED_TOL * max(1.0, abs(lhs)):
                    raise FieldError(f"{self.name}: embedding violates mul_table at ({i},{j})")
        for i in range(d):
            emb = basis[i].conjugate().embed()
            if abs(emb - self.embedding[i].conjugate()) > EMBED_TOL:
                raise FieldError(f"{self.name}: 'conj' does not embed as complex conjugation")

    def __repr__(self) -> str:
        return f"NumberFieldSpec({self.name!r}, degree={self.degree})"


@dataclass(frozen=True, eq=False)
class FieldElement:
    """An exact element of a `NumberFieldSpec`: rational coordinates over its basis."""

    field: NumberFieldSpec
    coords: tuple[Fraction, ...]

    def _check(self, other: FieldElement) -> None:
        if self.field is not other.field:
            raise FieldError(f"field mismatch: {self.field.name!r} vs {other.field.name!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _frac(other)
            return FieldElement(self.field, tuple(a * q for a in self.coords))
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        d = self.field.degree
        table = self.field.mul_table
        out = [Fraction(0)] * d
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b == 0:
                    continue
                ab = a * b
                cell = table[i][j]
                for k in range(d):
                    if cell[k] != 0:
                        out[k] += ab * cell[k]
        return FieldElement(self.field, tuple(out))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.field is other.field
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coords))

    def apply(self, aut: str) -> FieldElement:
        """Apply the named automorphism (exact coordinate action)."""
        m = self.field.automorphism_matrix(aut)
        return FieldElement(self.field, _mat_vec(m, self.coords))

    def conjugate(self) -> FieldElement:
        return self.apply("conj")

    def embed(self) -> complex:
        """Complex value under the field's fixed embedding (the one lossy step)."""
        return complex(sum(complex(c) * e for c, e in zip(self.coords, self.field.embedding)))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_gaussian_integer(self) -> bool:
        """True when only the 1 and i coordinates are set, with integer values."""
        head, tail = self.coords[:2], self.coords[2:]
        return all(c.denominator == 1 for c in head) and all(c == 0 for c in tail)

    def __repr__(self) -> str:
        terms = [
            f"{c}*{lbl}" if lbl != "1" else f"{c}"
            for c, lbl in zip(self.coords, self.field.basis_labels)
            if c != 0
        ]
        return " + ".join(terms) if terms else "0"


# -- built-in towers ---------------------------------------------------------


def _quadratic_compositum(name, d, sqrt_val, sigma_matrix) -> NumberFieldSpec:
    """Q(i, sqrt d) with basis {1, i, s, i*s}, s = sqrt(d) > 0."""
    table = [
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
        [[0, 0, 1, 0], [0, 0, 0, 1], [d, 0, 0, 0], [0, d, 0, 0]],
        [[0, 0, 0, 1], [0, 0, -1, 0], [0, d, 0, 0], [-d, 0, 0, 0]],
    ]
    embedding = [1.0, 1.0j, sqrt_val, 1.0j * sqrt_val]
    return NumberFieldSpec(
        name,
        ("1", "i", f"s{d}", f"i*s{d}"),
        table,
        embedding,
        {"sigma": sigma_matrix, "conj": _diag([1, -1, 1, -1])},
    )


@cache
def silver_field() -> NumberFieldSpec:
    """Q(i, sqrt 7); 'sigma' sends i -> -i, sqrt7 -> -sqrt7 (fixes i*sqrt7)."""
    return _quadratic_compositum("K_s", 7, 7.0 ** 0.5, _diag([1, -1, -1, 1]))


@cache
def golden_field() -> NumberFieldSpec:
    """Q(i, sqrt 5); 'sigma' sends sqrt5 -> -sqrt5 and fixes Q(i)."""
    return _quadratic_compositum("K_g", 5, 5.0 ** 0.5, _diag([1, 1, -1, -1]))


@cache
def cyclotomic5_field() -> NumberFieldSpec:
    """Q(zeta_5) in the power basis; 'sigma' sends zeta -> zeta^3, conj = sigma^2."""
    d = 4
    # image of z^p under z -> z^(3p mod 5), reduced via 1 + z + z^2 + z^3 + z^4 = 0
    sigma = [[Fraction(0)] * d for _ in range(d)]
    for p in range(d):
        e = (3 * p) % 5
        if e == 4:
            for r in range(d):
                sigma[r][p] = Fraction(-1)
        else:
            sigma[e][p] = Fraction(1)
    conj = _mat_mul(_frac_matrix(sigma), _frac_matrix(sigma))
    return power_basis_field(
        "K_m",
        [1, 1, 1, 1, 1],
        cmath.exp(2j * cmath.pi / 5),
        labels="z",
        automorphisms={"sigma": sigma, "conj": conj},
    )


def power_basis_field(name, min_poly, root, labels="x", automorphisms=None) -> NumberFieldSpec:
    """Field Q[x]/(p) in the power basis {1, x, ..., x^(d-1)}.

    ``min_poly`` lists the monic polynomial's coefficients [c0, ..., c_{d-1}, 1]
    or [c0, ..., c_{d-1}] (leading 1 implied); ``root`` is the embedded root.
    ``automorphisms`` must include 'conj' unless the field is totally real,
    in which case conjugation defaults to the identity.
    """
    coeffs = [_frac(c) for c in min_poly]
    if len(coeffs) > 1 and coeffs[-1] == 1:
        coeffs = coeffs[:-1]
    d = len(coeffs)
    # reduction of x^k for k in [0, 2d-2]
    powers: list[list[Fraction]] = [[Fraction(1 if i == k else 0) for i in range(d)] for k in range(d)]
    for k in range(d, 2 * d - 1):
        prev = powers[k - 1]
        shifted = [Fraction(0)] + prev[:-1]
        lead = prev[-1]
        powers.append([s - lead * c for s, c in zip(shifted, coeffs)])
    table = [[powers[i + j] for j in range(d)] for i in range(d)]
    embedding = [root ** k for k in range(d)]
    auts = dict(automorphisms or {})
    if "conj" not in auts:
        if all(abs(complex(e).imag) < EMBED_TOL for e in embedding):
            auts["conj"] = _identity(d)
        else:
            raise FieldError(f"field {name!r} needs an explicit 'conj' automorphism")
    lbls = tuple("1" if k == 0 else (labels if k == 1 else f"{labels}^{k}") for k in range(d))
    return NumberFieldSpec(name, lbls, table, embedding, auts)


def load_field_spec(path: str | Path) -> NumberFieldSpec:
    """Register an additional field from a JSON file.

    Schema::

        {
          "name": "K_x",
          "min_poly": ["-2", "0", "1"],          # monic; rationals as int or "p/q"
          "root": [1.4142135623730951, 0.0],     # embedded root [re, im]
          "automorphisms": {"sigma": [[...]], "conj": [[...]]},
          "labels": "x"
        }

    The multiplication table is derived from the minimal polynomial; the
    automorphism matrices act on power-basis coordinates and are validated
    against the product and the embedding.
    """
    raw = json.loads(Path(path).read_text())
    root = complex(raw["root"][0], raw["root"][1])
    auts = {k: _frac_matrix(v) for k, v in raw.get("automorphisms", {}).items()}
    return power_basis_field(
        raw["name"], raw["min_poly"], root, labels=raw.get("labels", "x"), automorphisms=auts
    )
