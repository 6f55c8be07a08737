"""Manifold specifications: the `.akspec` DSL, real-coframe ingestion, and
structural validation (d^2 = 0, omega real/closed, unitary-mode detection).

The DSL is line-oriented UTF-8 with `#` comments:

    manifold <name>
    dim <2n>
    coframe phi1 .. phin
    symbol <name> [real | conj <other>] [nonzero] [invertible]
                  [d = <1-form expr> | d = opaque]
    d phi<j> = <sum of coeff * monomial>
    omega = <(1,1)-form expr>

Monomials are written `phi{I,J}` (e.g. `phi{13,2}` for phi^13 wedge phibar^2);
coefficients are rationals `a/b`, the unit `i`, and symbol factors with
optional integer exponents (`E^-1`), joined by `*`, with unary `-`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import operators
from .exterior import (BasisMonomial, Bidegree, Form, Pairing, RealForm,
                       check_pairing, complex_to_real, real_to_complex)
from .scalars import (GaussianRational, I, FunctionSymbol, SymbolTable,
                      SymScalar)


class SpecError(Exception):
    """Base for every spec-processing failure."""

    def __init__(self, message: str, line: int | None = None,
                 col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class SpecSyntaxError(SpecError):
    pass


class UnknownSymbolError(SpecError):
    pass


class DegreeMismatchError(SpecError):
    pass


class NonRealOmegaError(SpecError):
    pass


class InvalidSpecError(SpecError):
    """A structural check failed with every needed derivative known."""


class ManifoldSpec:
    """An immutable manifold description; flags are computed once.

    `unitary_scale` is the positive rational c with
    omega = (i c / 2) * sum_j phi^{j jbar}, or None.
    """

    def __init__(self, name: str, n: int, coframe: tuple[str, ...],
                 symbols: SymbolTable, structure: dict[int, Form], omega: Form):
        self.name = name
        self.n = n
        self.coframe = tuple(coframe)
        self.symbols = symbols
        self.structure = dict(structure)
        self.omega = omega
        self._cache: dict = {}
        self.constant_coefficient = (
            omega.is_constant_coefficient()
            and all(f.is_constant_coefficient() for f in structure.values()))
        self.unitary_scale = _detect_unitary_scale(omega, n)
        self._domega_status, self.almost_kahler = _closedness_of_omega(self)

    def generator_index(self, name: str) -> int:
        return self.coframe.index(name) + 1

    def d_generator(self, j: int) -> Form:
        return self.structure.get(j, Form.zero())

    def __eq__(self, other):
        if not isinstance(other, ManifoldSpec):
            return NotImplemented
        return (self.name == other.name and self.n == other.n
                and self.coframe == other.coframe
                and self.symbols == other.symbols
                and self.structure == other.structure
                and self.omega == other.omega)

    __hash__ = None  # mutable cache inside

    def __repr__(self):
        return f"ManifoldSpec({self.name!r}, n={self.n})"


def _detect_unitary_scale(omega: Form, n: int) -> Fraction | None:
    expected = {BasisMonomial((j,), (j,)) for j in range(1, n + 1)}
    terms = dict(omega.terms())
    if set(terms) != expected:
        return None
    coeffs = set(terms.values())
    if len(coeffs) != 1:
        return None
    coeff = coeffs.pop()
    if not coeff.is_constant():
        return None
    c = coeff.constant_value() * GaussianRational(0, -2)  # s = i c / 2
    if c.im != 0 or c.re <= 0:
        return None
    return c.re


def _closedness_of_omega(spec: ManifoldSpec) -> tuple[str, bool]:
    try:
        domega = operators.ext_d(spec, spec.omega)
    except operators.OpaqueDerivativeError:
        return "opaque", False
    return ("closed", True) if domega.is_zero() else ("nonclosed", False)


# ---------------------------------------------------------------------------
# Expression parsing

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<mono>phi\{(?P<holo>\d*),(?P<anti>\d*)\})"
    r"|(?P<number>\d+(?:/\d+)?)"
    r"|(?P<pow>\^-?\d+)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[+\-*])")


@dataclass
class _Token:
    kind: str
    text: str
    col: int
    holo: str = ""
    anti: str = ""


def _tokenize(text: str, line: int, col_offset: int = 0) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}",
                                  line, col_offset + pos + 1)
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        tok = _Token(kind, m.group(), col_offset + m.start() + 1)
        if kind == "mono":
            tok.holo = m.group("holo")
            tok.anti = m.group("anti")
        tokens.append(tok)
    return tokens


def _parse_indices(digits: str, n: int, line: int, col: int) -> tuple[int, ...]:
    indices = tuple(int(ch) for ch in digits)
    for idx in indices:
        if not 1 <= idx <= n:
            raise SpecSyntaxError(f"coframe index {idx} out of range 1..{n}",
                                  line, col)
    if any(indices[i] >= indices[i + 1] for i in range(len(indices) - 1)):
        raise SpecSyntaxError(f"indices {digits!r} must be strictly ascending",
                              line, col)
    return indices


def _parse_form_tokens(tokens: list[_Token], n: int, symbols: SymbolTable,
                       line: int) -> Form:
    if not tokens:
        raise SpecSyntaxError("empty expression", line)
    total = Form.zero()
    pos = 0
    while pos < len(tokens):
        sign = 1
        while pos < len(tokens) and tokens[pos].kind == "op" and \
                tokens[pos].text in "+-":
            if tokens[pos].text == "-":
                sign = -sign
            pos += 1
        coeff = SymScalar.one()
        monomial: BasisMonomial | None = None
        expect_factor = True
        while pos < len(tokens):
            tok = tokens[pos]
            if tok.kind == "op" and tok.text in "+-":
                break
            if tok.kind == "op" and tok.text == "*":
                if expect_factor:
                    raise SpecSyntaxError("misplaced '*'", line, tok.col)
                expect_factor = True
                pos += 1
                continue
            if not expect_factor:
                raise SpecSyntaxError(f"missing '*' before {tok.text!r}",
                                      line, tok.col)
            if tok.kind == "number":
                coeff = coeff * SymScalar.const(Fraction(tok.text))
            elif tok.kind == "name" and tok.text == "i":
                coeff = coeff * SymScalar.const(I)
            elif tok.kind == "name":
                if tok.text not in symbols:
                    raise UnknownSymbolError(f"unknown symbol {tok.text!r}",
                                             line, tok.col)
                exponent = 1
                if pos + 1 < len(tokens) and tokens[pos + 1].kind == "pow":
                    exponent = int(tokens[pos + 1].text[1:])
                    pos += 1
                coeff = coeff * SymScalar.symbol(tok.text, exponent)
            elif tok.kind == "mono":
                if monomial is not None:
                    raise SpecSyntaxError("two monomials in one term",
                                          line, tok.col)
                monomial = BasisMonomial(
                    _parse_indices(tok.holo, n, line, tok.col),
                    _parse_indices(tok.anti, n, line, tok.col))
            else:
                raise SpecSyntaxError(f"unexpected token {tok.text!r}",
                                      line, tok.col)
            expect_factor = False
            pos += 1
        if expect_factor:
            raise SpecSyntaxError("dangling operator", line)
        if monomial is None:
            raise SpecSyntaxError("term lacks a basis monomial phi{..,..}",
                                  line)
        if sign < 0:
            coeff = -coeff
        total = total + Form.monomial(monomial, coeff)
    return total


def parse_form(text: str, n: int, symbols: SymbolTable | None = None,
               line: int = 0) -> Form:
    """Parse a standalone form expression in the DSL grammar."""
    if symbols is None:
        symbols = SymbolTable()
    return _parse_form_tokens(_tokenize(text, line), n, symbols, line)


# ---------------------------------------------------------------------------
# Spec parsing

def parse_spec(text: str) -> ManifoldSpec:
    name = None
    n = None
    coframe: list[str] = []
    symbols = SymbolTable()
    structure: dict[int, Form] = {}
    omega: Form | None = None
    pending_derivatives: list[tuple[str, str, int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "manifold":
            if len(words) != 2:
                raise SpecSyntaxError("expected: manifold <name>", line_no)
            name = words[1]
        elif head == "dim":
            if len(words) != 2 or not words[1].isdigit():
                raise SpecSyntaxError("expected: dim <2n>", line_no)
            dim = int(words[1])
            if dim % 2 or dim < 2:
                raise SpecSyntaxError(f"dim must be even and positive, got {dim}",
                                      line_no)
            n = dim // 2
        elif head == "coframe":
            coframe = words[1:]
            if n is None:
                raise SpecSyntaxError("dim must precede coframe", line_no)
            if len(coframe) != n:
                raise SpecSyntaxError(
                    f"coframe lists {len(coframe)} names, expected {n}", line_no)
            if len(set(coframe)) != n:
                raise SpecSyntaxError("duplicate coframe names", line_no)
        elif head == "symbol":
            if n is None:
                raise SpecSyntaxError("dim must precede symbol declarations",
                                      line_no)
            _parse_symbol_line(line, line_no, symbols, pending_derivatives)
        elif head == "d":
            if n is None or not coframe:
                raise SpecSyntaxError("coframe must precede structure equations",
                                      line_no)
            rest = line[1:].lstrip()
            if "=" not in rest:
                raise SpecSyntaxError("expected: d <generator> = <2-form>",
                                      line_no)
            gen_name, expr = rest.split("=", 1)
            gen_name = gen_name.strip()
            if gen_name not in coframe:
                raise SpecSyntaxError(f"{gen_name!r} is not a coframe generator",
                                      line_no)
            j = coframe.index(gen_name) + 1
            if j in structure:
                raise SpecSyntaxError(f"duplicate structure equation for "
                                      f"{gen_name}", line_no)
            form = parse_form(expr, n, symbols, line_no)
            bad = [pq for pq in form.bidegrees() if pq[0] + pq[1] != 2]
            if bad:
                raise DegreeMismatchError(
                    f"d {gen_name} contains a term of bidegree {bad[0]}, "
                    "expected total degree 2", line_no)
            structure[j] = form
        elif head == "omega":
            rest = line[5:].lstrip()
            if not rest.startswith("="):
                raise SpecSyntaxError("expected: omega = <(1,1)-form>", line_no)
            if n is None:
                raise SpecSyntaxError("dim must precede omega", line_no)
            omega = parse_form(rest[1:], n, symbols, line_no)
            if omega.bidegrees() not in ([], [(1, 1)]):
                raise DegreeMismatchError(
                    f"omega has bidegrees {omega.bidegrees()}, expected (1,1)",
                    line_no)
        else:
            raise SpecSyntaxError(f"unknown directive {head!r}", line_no)

    if name is None:
        raise SpecSyntaxError("missing manifold line")
    if n is None:
        raise SpecSyntaxError("missing dim line")
    if not coframe:
        raise SpecSyntaxError("missing coframe line")
    if omega is None:
        raise SpecSyntaxError("missing omega line")

    symbols.check_involution()
    for sym_name, expr, line_no in pending_derivatives:
        form = parse_form(expr, n, symbols, line_no)
        if any(p + q != 1 for p, q in form.bidegrees()):
            raise DegreeMismatchError(
                f"derivative of {sym_name} must be a 1-form", line_no)
        symbols[sym_name].derivative = form

    if omega.conj(symbols) != omega:
        raise NonRealOmegaError("omega is not a real form")

    return ManifoldSpec(name, n, tuple(coframe), symbols, structure, omega)


def _parse_symbol_line(line: str, line_no: int, symbols: SymbolTable,
                       pending: list[tuple[str, str, int]]) -> None:
    m = re.match(r"symbol\s+([A-Za-z_]\w*)\s*(.*)$", line)
    if m is None:
        raise SpecSyntaxError("expected: symbol <name> [...]", line_no)
    sym_name, rest = m.group(1), m.group(2)
    if sym_name in ("i", "d", "opaque"):
        raise SpecSyntaxError(f"reserved symbol name {sym_name!r}", line_no)
    derivative_expr: str | None = None
    dm = re.search(r"(?:^|\s)d\s*=\s*(.*)$", rest)
    if dm:
        body = dm.group(1).strip()
        if not body:
            raise SpecSyntaxError("expected: d = <1-form> | d = opaque",
                                  line_no)
        if body != "opaque":
            derivative_expr = body
        rest = rest[:dm.start()].strip()
    conj_name = sym_name
    nonzero = invertible = False
    attrs = rest.split()
    idx = 0
    while idx < len(attrs):
        word = attrs[idx]
        if word == "real":
            conj_name = sym_name
        elif word == "conj":
            idx += 1
            if idx >= len(attrs):
                raise SpecSyntaxError("conj needs a partner name", line_no)
            conj_name = attrs[idx]
        elif word == "nonzero":
            nonzero = True
        elif word == "invertible":
            invertible = True
        else:
            raise SpecSyntaxError(f"unknown symbol attribute {word!r}", line_no)
        idx += 1
    symbols.declare(FunctionSymbol(sym_name, conj_name, nonzero=nonzero,
                                   invertible=invertible, derivative=None))
    if derivative_expr is not None:
        pending.append((sym_name, derivative_expr, line_no))


# ---------------------------------------------------------------------------
# Rendering (canonical, round-trips through parse_spec)

def _coeff_dsl_terms(coeff: SymScalar) -> list[tuple[int, list[str]]]:
    """Split a scalar into DSL factor lists, one per (monomial, re/im) part."""
    out = []
    for mono, value in coeff.terms():
        syms = [name if k == 1 else f"{name}^{k}" for name, k in mono]
        for part, is_imag in ((value.re, False), (value.im, True)):
            if not part:
                continue
            sign = 1 if part > 0 else -1
            factors = []
            if abs(part) != 1 or (not is_imag and not syms):
                factors.append(str(abs(part)))
            if is_imag:
                factors.append("i")
            factors.extend(syms)
            out.append((sign, factors))
    return out


def render_form_dsl(form: Form) -> str:
    if form.is_zero():
        raise ValueError("the zero form has no DSL rendering; omit the line")
    chunks: list[tuple[int, str]] = []
    for mono, coeff in form.terms():
        for sign, factors in _coeff_dsl_terms(coeff):
            body = "*".join(factors + [mono.render()]) if factors \
                else mono.render()
            chunks.append((sign, body))
    text = ("-" if chunks[0][0] < 0 else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        text += (" - " if sign < 0 else " + ") + body
    return text


def render_spec(spec: ManifoldSpec) -> str:
    lines = [f"manifold {spec.name}", f"dim {2 * spec.n}",
             "coframe " + " ".join(spec.coframe)]
    for sym in spec.symbols:
        attrs = ["real" if sym.is_real else f"conj {sym.conj_name}"]
        if sym.nonzero:
            attrs.append("nonzero")
        if sym.invertible:
            attrs.append("invertible")
        if sym.derivative is None:
            attrs.append("d = opaque")
        elif sym.derivative.is_zero():
            pass  # a vanishing derivative cannot be written; treat as opaque
        else:
            attrs.append("d = " + render_form_dsl(sym.derivative))
        lines.append(f"symbol {sym.name} " + " ".join(attrs))
    for j in range(1, spec.n + 1):
        form = spec.structure.get(j)
        if form and not form.is_zero():
            lines.append(f"d {spec.coframe[j - 1]} = " + render_form_dsl(form))
    lines.append("omega = " + render_form_dsl(spec.omega))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Real presentations

@dataclass
class RealFramePresentation:
    """Structure equations on a real coframe e^1..e^{2n} plus the matching
    phi^j = e^{a_j} + i e^{b_j}."""

    n: int
    de: dict[int, RealForm] = field(default_factory=dict)
    pairing: Pairing = ()

    def __post_init__(self):
        check_pairing(self.pairing, self.n)
        for a, form in self.de.items():
            if not 1 <= a <= 2 * self.n:
                raise ValueError(f"de^{a}: index out of range")
            if any(len(mono) != 2 for mono in form):
                raise ValueError(f"de^{a} is not a 2-form")


def real_two_form(terms: list[tuple[int, int, int]]) -> RealForm:
    """Build a real 2-form from (coefficient, i, j) triples with i < j."""
    out: RealForm = {}
    for coeff, i, j in terms:
        if not i < j:
            raise ValueError(f"real indices must ascend: ({i},{j})")
        key = (i, j)
        cur = out.get(key, SymScalar.zero()) + SymScalar.const(coeff)
        if cur:
            out[key] = cur
        else:
            out.pop(key, None)
    return out


def complexify(real: RealFramePresentation) -> dict[int, Form]:
    """Express each d(phi^j) = d e^{a_j} + i d e^{b_j} in the complex basis."""
    out: dict[int, Form] = {}
    for j, (a_idx, b_idx) in enumerate(real.pairing, start=1):
        combined: RealForm = {}
        for mono, coeff in real.de.get(a_idx, {}).items():
            combined[mono] = combined.get(mono, SymScalar.zero()) + coeff
        for mono, coeff in real.de.get(b_idx, {}).items():
            cur = combined.get(mono, SymScalar.zero()) + coeff * I
            if cur:
                combined[mono] = cur
            else:
                combined.pop(mono, None)
        form = real_to_complex(combined, real.pairing)
        if not form.is_zero():
            out[j] = form
    return out


def realify(form: Form, pairing: Pairing) -> RealForm:
    """Inverse substitution of complexify's output, for round-trip checks."""
    return complex_to_real(form, pairing)


# ---------------------------------------------------------------------------
# Validation

@dataclass
class ValidationItem:
    check: str
    status: str  # Verified | SkippedOpaque | Failed | Info
    detail: str = ""

    def to_dict(self) -> dict:
        return {"check_id": self.check, "status": self.status,
                "detail": self.detail}


@dataclass
class ValidationReport:
    spec_name: str
    items: list[ValidationItem]

    @property
    def ok(self) -> bool:
        return all(item.status != "Failed" for item in self.items)

    def to_dict(self) -> dict:
        return {"spec_name": self.spec_name, "ok": self.ok,
                "items": [item.to_dict() for item in self.items]}


def validate(spec: ManifoldSpec) -> ValidationReport:
    """Structural checks; raises InvalidSpecError on a hard failure."""
    items: list[ValidationItem] = []
    for j in range(1, spec.n + 1):
        gen = spec.coframe[j - 1]
        try:
            dd = operators.ext_d(spec, spec.d_generator(j))
        except operators.OpaqueDerivativeError as exc:
            items.append(ValidationItem(f"d2_{gen}", "SkippedOpaque",
                                        f"needs d({exc.symbol})"))
            continue
        if dd.is_zero():
            items.append(ValidationItem(f"d2_{gen}", "Verified"))
        else:
            raise InvalidSpecError(
                f"d^2({gen}) = {dd.render()} != 0 with all derivatives known")

    if spec.omega.conj(spec.symbols) == spec.omega:
        items.append(ValidationItem("omega_real", "Verified"))
    else:
        raise InvalidSpecError("omega is not real")

    if spec._domega_status == "closed":
        items.append(ValidationItem("omega_closed", "Verified",
                                    "almost_kahler = true"))
    elif spec._domega_status == "opaque":
        items.append(ValidationItem("omega_closed", "SkippedOpaque",
                                    "almost_kahler = false"))
    else:
        items.append(ValidationItem("omega_closed", "Failed",
                                    "d(omega) != 0; almost_kahler = false"))

    if spec.unitary_scale is not None:
        items.append(ValidationItem("unitary_mode", "Verified",
                                    f"scale = {spec.unitary_scale}"))
        if spec.constant_coefficient:
            items.append(ValidationItem("omega_positive", "Verified",
                                        "unitary coframe, positivity automatic"))
    else:
        items.append(ValidationItem("unitary_mode", "Info",
                                    "omega is not of unitary shape"))
    return ValidationReport(spec.name, items)
