"""Exact coefficient arithmetic.

Two layers: ``GaussianRational`` is an element of Q(i) with arbitrary-precision
rational real and imaginary parts, and ``SymScalar`` extends it to Laurent
polynomials in declared function symbols (so metric factors like e^{-f} stay
exactly invertible).  No floating point anywhere; every value is immutable.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping

if TYPE_CHECKING:  # FunctionSymbol.derivative is a degree-1 exterior.Form
    from .exterior import Form


class NotInvertible(ArithmeticError):
    """The scalar has no exact inverse in the Laurent ring."""


class Nonzeroness(enum.Enum):
    ZERO = "Zero"
    NONZERO_CONSTANT = "NonzeroConstant"
    NONZERO_DECLARED = "NonzeroDeclared"
    NONZERO_FORMAL = "NonzeroFormal"


class GaussianRational:
    """An exact element a + b*i of Q(i).

    Fractions keep themselves reduced with positive denominator, so values
    are always in canonical form.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __truediv__(self, other):
        other = _coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise NotInvertible("division by zero in Q(i)")
        return GaussianRational(self.re / norm, -self.im / norm)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        """Canonical text: `5/4`, `-i`, `1/2*i`, `(1/2-3/4*i)`."""
        if self.is_zero():
            return "0"
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        im = _imag_str(abs(self.im))
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{im})"


def _imag_str(b: Fraction) -> str:
    if b == 1:
        return "i"
    if b == -1:
        return "-i"
    return f"{b}*i"


def _coerce(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    raise TypeError(f"cannot coerce {type(value).__name__} into Q(i)")


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def i_power(k: int) -> GaussianRational:
    """i**k for any integer k."""
    return (ONE, I, -ONE, -I)[k % 4]


class FunctionSymbol:
    """A formal function on the manifold.

    The conjugate is declared (a real symbol pairs with itself), the exterior
    derivative is either a declared degree-1 form or opaque (None), and
    nonvanishing is a declaration, never a deduction.
    """

    __slots__ = ("name", "conj_name", "nonzero", "invertible", "derivative")

    def __init__(self, name: str, conj_name: str | None = None, *,
                 nonzero: bool = False, invertible: bool = False,
                 derivative: "Form | None" = None):
        self.name = name
        self.conj_name = conj_name if conj_name is not None else name
        self.nonzero = nonzero
        self.invertible = invertible
        self.derivative = derivative

    @property
    def is_real(self) -> bool:
        return self.conj_name == self.name

    def __eq__(self, other):
        if not isinstance(other, FunctionSymbol):
            return NotImplemented
        return (self.name == other.name and self.conj_name == other.conj_name
                and self.nonzero == other.nonzero
                and self.invertible == other.invertible
                and self.derivative == other.derivative)

    def __repr__(self):
        return f"FunctionSymbol({self.name!r}, conj={self.conj_name!r})"


class SymbolTable:
    """Declared function symbols of one manifold spec, keyed by name."""

    def __init__(self, symbols: Iterable[FunctionSymbol] = ()):
        self._symbols: dict[str, FunctionSymbol] = {}
        for sym in symbols:
            self.declare(sym)

    def declare(self, sym: FunctionSymbol) -> None:
        if sym.name in self._symbols:
            raise ValueError(f"symbol {sym.name!r} declared twice")
        self._symbols[sym.name] = sym

    def check_involution(self) -> None:
        for sym in self._symbols.values():
            partner = self._symbols.get(sym.conj_name)
            if partner is None:
                raise ValueError(f"symbol {sym.name!r} pairs with undeclared "
                                 f"{sym.conj_name!r}")
            if partner.conj_name != sym.name:
                raise ValueError(f"conjugate pairing {sym.name!r} <-> "
                                 f"{sym.conj_name!r} is not involutive")

    def __getitem__(self, name: str) -> FunctionSymbol:
        return self._symbols[name]

    def __contains__(self, name: str) -> bool:
        return name in self._symbols

    def __iter__(self):
        return iter(self._symbols.values())

    def __len__(self):
        return len(self._symbols)

    def names(self) -> list[str]:
        return list(self._symbols)

    def __eq__(self, other):
        if not isinstance(other, SymbolTable):
            return NotImplemented
        return self._symbols == other._symbols


# A Laurent monomial in function symbols: ((name, exponent), ...) with names
# strictly ascending and exponents nonzero.  () is the constant monomial.
Monomial = tuple[tuple[str, int], ...]

_CONST: Monomial = ()


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict[str, int] = dict(a)
    for name, k in b:
        new = exps.get(name, 0) + k
        if new:
            exps[name] = new
        else:
            del exps[name]
    return tuple(sorted(exps.items()))


class SymScalar:
    """A finite Q(i)-linear combination of Laurent monomials in symbols.

    The zero scalar is the empty combination; zero coefficients are never
    stored, which makes equality a dictionary comparison.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, GaussianRational] | None = None):
        data: dict[Monomial, GaussianRational] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    data[mono] = coeff
        object.__setattr__(self, "_terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("SymScalar is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, value) -> "SymScalar":
        return cls({_CONST: _coerce(value)})

    @classmethod
    def symbol(cls, name: str, exponent: int = 1, coeff=1) -> "SymScalar":
        if exponent == 0:
            return cls.const(coeff)
        return cls({((name, exponent),): _coerce(coeff)})

    @classmethod
    def zero(cls) -> "SymScalar":
        return _SYM_ZERO

    @classmethod
    def one(cls) -> "SymScalar":
        return _SYM_ONE

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _CONST in self._terms)

    def constant_value(self) -> GaussianRational:
        if not self._terms:
            return ZERO
        if not self.is_constant():
            raise ValueError(f"{self.render()} is not a constant")
        return self._terms[_CONST]

    def terms(self) -> list[tuple[Monomial, GaussianRational]]:
        return sorted(self._terms.items())

    def symbol_names(self) -> set[str]:
        return {name for mono in self._terms for name, _ in mono}

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce_sym(other)
        data = dict(self._terms)
        for mono, coeff in other._terms.items():
            new = data.get(mono, ZERO) + coeff
            if new:
                data[mono] = new
            else:
                data.pop(mono, None)
        return SymScalar(data)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce_sym(other))

    def __rsub__(self, other):
        return _coerce_sym(other) + (-self)

    def __neg__(self):
        return SymScalar({m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        other = _coerce_sym(other)
        data: dict[Monomial, GaussianRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mul_monomials(m1, m2)
                new = data.get(mono, ZERO) + c1 * c2
                if new:
                    data[mono] = new
                else:
                    data.pop(mono, None)
        return SymScalar(data)

    __rmul__ = __mul__

    # -- table-aware operations ----------------------------------------------

    def conj(self, table: SymbolTable) -> "SymScalar":
        data: dict[Monomial, GaussianRational] = {}
        for mono, coeff in self._terms.items():
            swapped = tuple(sorted((table[name].conj_name, k) for name, k in mono))
            data[swapped] = data.get(swapped, ZERO) + coeff.conj()
        return SymScalar(data)

    def invert(self, table: SymbolTable) -> "SymScalar":
        if len(self._terms) != 1:
            raise NotInvertible(f"{self.render()} is not a single Laurent monomial")
        (mono, coeff), = self._terms.items()
        for name, _ in mono:
            if not table[name].invertible:
                raise NotInvertible(f"symbol {name!r} is not declared invertible")
        inv_mono = tuple((name, -k) for name, k in mono)
        return SymScalar({inv_mono: coeff.inverse()})

    def classify(self, table: SymbolTable) -> Nonzeroness:
        if not self._terms:
            return Nonzeroness.ZERO
        if self.is_constant():
            return Nonzeroness.NONZERO_CONSTANT
        if len(self._terms) == 1:
            (mono, _), = self._terms.items()
            if all(table[name].nonzero for name, _ in mono):
                return Nonzeroness.NONZERO_DECLARED
        return Nonzeroness.NONZERO_FORMAL

    # -- equality / rendering -------------------------------------------------

    def _key(self):
        return tuple(sorted((m, (c.re, c.im)) for m, c in self._terms.items()))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = _coerce_sym(other)
        if not isinstance(other, SymScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"SymScalar<{self.render()}>"

    def render(self) -> str:
        """Canonical text, e.g. `-1/4*i*F` or `1/2 + V3g*V3g_bar`."""
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.terms():
            parts.append(_render_term(coeff, mono))
        out = parts[0]
        for part in parts[1:]:
            if part.startswith("-"):
                out += " - " + part[1:]
            else:
                out += " + " + part
        return out


def _render_term(coeff: GaussianRational, mono: Monomial) -> str:
    syms = "*".join(name if k == 1 else f"{name}^{k}" for name, k in mono)
    if not syms:
        return coeff.render()
    if coeff == ONE:
        return syms
    if coeff == -ONE:
        return "-" + syms
    return f"{coeff.render()}*{syms}"


def _coerce_sym(value) -> SymScalar:
    if isinstance(value, SymScalar):
        return value
    if isinstance(value, (int, Fraction, GaussianRational)):
        return SymScalar.const(value)
    raise TypeError(f"cannot coerce {type(value).__name__} into a scalar")


_SYM_ZERO = SymScalar()
_SYM_ONE = SymScalar({_CONST: ONE})
