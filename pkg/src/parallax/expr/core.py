"""Exact rational functions over Q(parameters), charts and differential towers.

The heavy lifting (sparse multivariate arithmetic, gcd cancellation) is done by
sympy's sparse ``FracField`` in graded-lex order; this module wraps it with the
chart bookkeeping the rest of the package relies on:

* every :class:`RatExpr` belongs to a :class:`Chart` (coordinates, constant
  parameters, optional :class:`DiffTower`);
* charts are nested: an expression on a sub-chart is silently lifted when it
  meets an expression on a bigger chart;
* :func:`derive` differentiates with respect to a chart variable, using the
  tower derivation tables for transcendental elements such as ``e^y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from sympy import QQ, Symbol
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import grlex

from ..errors import (
    ChartMismatch,
    DivisionByZeroPolynomial,
    NameClash,
    NonIntegrable,
    TowerInsufficient,
    UnknownSymbol,
)

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

#: marker for a derivative that the tower does not know (top of a formal jet)
UNKNOWN = None


def _check_names(names: Iterable[str], what: str) -> tuple[str, ...]:
    names = tuple(names)
    for n in names:
        if not isinstance(n, str) or not _NAME.match(n):
            raise UnknownSymbol(f"invalid {what} name {n!r}", name=n)
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise NameClash(f"duplicate {what} names {dup}", names=dup)
    return names


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


@dataclass(frozen=True)
class ConstField:
    """Q extended by algebraically independent transcendental parameters."""

    parameters: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parameters", _check_names(self.parameters, "parameter"))

    def __contains__(self, name):
        return name in self.parameters

    def union(self, other: "ConstField") -> "ConstField":
        extra = tuple(p for p in other.parameters if p not in self.parameters)
        return ConstField(self.parameters + extra)


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Block:
    # names added together; tables[name] = ((var, FracElement | None), ...)
    names: tuple[str, ...]
    tables: tuple[tuple[str, tuple[tuple[str, object], ...]], ...]

    def table(self, name):
        return dict(dict(self.tables)[name])

    @cached_property
    def key(self):
        return (self.names, tuple(
            (n, tuple((v, None if e is None else str(e.as_expr())) for v, e in t))
            for n, t in self.tables))


class DiffTower:
    """Differential field tower over the rational functions of a chart.

    Elements are added in blocks.  A block's derivation tables may mention the
    chart, earlier blocks and the block itself (``d/dy t = t`` for ``t = e^y``),
    never a later block.  A single-element block is the usual case; a larger
    block models a solution vector of a linear system (``y, y'`` with
    ``y'' = r y``).
    """

    __slots__ = ("variables", "field", "blocks", "__dict__")

    def __init__(self, variables: Iterable[str], field: ConstField | None = None, blocks=()):
        self.variables = _check_names(variables, "variable")
        self.field = field if field is not None else ConstField()
        self.blocks = tuple(blocks)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for b in self.blocks for n in b.names)

    @cached_property
    def key(self):
        return tuple(b.key for b in self.blocks)

    @property
    def chart(self) -> "Chart":
        return Chart(self.variables, self.field, self)

    def __eq__(self, other):
        return isinstance(other, DiffTower) and (self.variables, self.field, self.key) == (
            other.variables, other.field, other.key)

    def __hash__(self):
        return hash((self.variables, self.field, self.key))

    def __repr__(self):
        return f"DiffTower({list(self.variables)}, extensions={list(self.names)})"

    def table(self, name: str) -> dict:
        for b in self.blocks:
            if name in b.names:
                return b.table(name)
        raise UnknownSymbol(f"{name!r} is not a tower element", name=name)

    # construction -----------------------------------------------------------

    def extend(self, name: str, table: Mapping) -> "DiffTower":
        return self.extend_system((name,), {name: table})

    def extend_system(self, names: Iterable[str], tables: Mapping[str, Mapping]) -> "DiffTower":
        names = tuple(names)
        taken = set(self.variables) | set(self.field.parameters) | set(self.names)
        for n in names:
            if not isinstance(n, str) or not _NAME.match(n):
                raise UnknownSymbol(f"invalid tower element name {n!r}", name=n)
            if n in taken or names.count(n) > 1:
                raise NameClash(f"tower element name {n!r} is already in use", name=n)
        provisional = DiffTower(self.variables, self.field, self.blocks + (
            _Block(names, tuple((n, tuple((v, None) for v in self.variables)) for n in names)),))
        scratch = provisional.chart
        built = []
        for n in names:
            raw = dict(tables.get(n, {}))
            for v in raw:
                if v not in self.variables:
                    raise UnknownSymbol(f"derivation table of {n!r} mentions non-variable {v!r}",
                                        element=n, name=v)
            row = []
            for v in self.variables:
                entry = raw.get(v, 0)
                if entry is UNKNOWN:
                    row.append((v, None))
                else:
                    row.append((v, scratch.coerce(entry)._f))
            built.append((n, tuple(row)))
        tower = DiffTower(self.variables, self.field, self.blocks + (_Block(names, tuple(built)),))
        _verify_integrable(tower, names)
        return tower

    def formal_function(self, name: str, variable: str, order: int) -> "DiffTower":
        """Add ``name0 .. name<order>`` with ``d/dvariable name_i = name_{i+1}``.

        The derivative of the top element is unknown; asking for it raises
        :class:`TowerInsufficient`.  Other partials vanish.
        """
        if variable not in self.variables:
            raise UnknownSymbol(f"{variable!r} is not a chart variable", name=variable)
        tower = self
        top = f"{name}{order}"
        tower = tower.extend(top, {v: (UNKNOWN if v == variable else 0) for v in self.variables})
        for i in range(order - 1, -1, -1):
            tower = tower.extend(f"{name}{i}", {variable: f"{name}{i + 1}"})
        return tower


def extend_tower(tower: DiffTower, name: str, table: Mapping) -> DiffTower:
    """Add one transcendental element; the mixed-partials condition is verified."""
    return tower.extend(name, table)


def _verify_integrable(tower: DiffTower, names):
    chart = tower.chart
    for n in names:
        table = tower.table(n)
        vs = tower.variables
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                u, v = vs[a], vs[b]
                tu, tv = table[u], table[v]
                if tu is None or tv is None:
                    continue
                try:
                    lhs = chart.wrap(tv).derive(u)
                    rhs = chart.wrap(tu).derive(v)
                except TowerInsufficient:
                    continue
                if lhs != rhs:
                    raise NonIntegrable(
                        f"d/d{u} d/d{v} {n} != d/d{v} d/d{u} {n}",
                        element=n, pair=[u, v], lhs=str(lhs), rhs=str(rhs))


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

class Chart:
    """Coordinate chart: variables, constant parameters and an optional tower."""

    __slots__ = ("variables", "field", "tower", "__dict__")

    def __init__(self, variables: Iterable[str] = (), field: ConstField | Iterable[str] | None = None,
                 tower: DiffTower | None = None):
        self.variables = _check_names(variables, "variable")
        if field is None:
            field = tower.field if tower is not None else ConstField()
        elif not isinstance(field, ConstField):
            field = ConstField(tuple(field))
        self.field = field
        clash = set(self.variables) & set(field.parameters)
        if clash:
            raise NameClash(f"names used both as variable and parameter: {sorted(clash)}",
                            names=sorted(clash))
        if tower is not None and (tower.variables != self.variables or tower.field != field):
            raise ChartMismatch("tower was built over a different chart",
                                chart=list(self.variables), tower=list(tower.variables))
        self.tower = tower if tower is not None and tower.blocks else None

    # identity ------------------------------------------------------------------

    @property
    def parameters(self) -> tuple[str, ...]:
        return self.field.parameters

    @property
    def tower_names(self) -> tuple[str, ...]:
        return self.tower.names if self.tower is not None else ()

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.variables + self.tower_names + self.parameters

    @property
    def dim(self) -> int:
        return len(self.variables)

    @cached_property
    def key(self):
        return (self.variables, self.parameters, self.tower.key if self.tower else ())

    def __eq__(self, other):
        return isinstance(other, Chart) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        extra = f", params={list(self.parameters)}" if self.parameters else ""
        if self.tower_names:
            extra += f", tower={list(self.tower_names)}"
        return f"Chart({list(self.variables)}{extra})"

    def contains(self, other: "Chart") -> bool:
        """True when every expression on ``other`` is also an expression here."""
        if other is self or other == self:
            return True
        if not set(other.variables) <= set(self.variables):
            return False
        if not set(other.parameters) <= set(self.parameters):
            return False
        if other.tower is None:
            return True
        if self.tower is None:
            return False
        mine = {n: b.key for b in self.tower.blocks for n in b.names}
        return all(mine.get(n) == b.key for b in other.tower.blocks for n in b.names)

    # derived charts ------------------------------------------------------------

    def with_tower(self, tower: DiffTower | None) -> "Chart":
        return Chart(self.variables, self.field, tower)

    def with_parameters(self, *names: str) -> "Chart":
        field = self.field.union(ConstField(names))
        tower = self.tower
        if tower is not None:
            rebuilt = DiffTower(self.variables, field)
            for b in tower.blocks:
                rebuilt = rebuilt.extend_system(
                    b.names, {n: {v: (None if e is None else Chart(
                        self.variables, field, rebuilt).wrap_foreign(e, self))
                        for v, e in b.table(n).items()} for n in b.names})
            tower = rebuilt
        return Chart(self.variables, field, tower)

    def empty_tower(self) -> DiffTower:
        return self.tower if self.tower is not None else DiffTower(self.variables, self.field)

    def extend(self, name: str, table: Mapping) -> "Chart":
        return self.empty_tower().extend(name, table).chart

    def formal_function(self, name: str, variable: str, order: int) -> "Chart":
        return self.empty_tower().formal_function(name, variable, order).chart

    def constants(self) -> "Chart":
        """The chart of constants (parameters only)."""
        return Chart((), self.field)

    # sympy domain ----------------------------------------------------------------

    @cached_property
    def domain(self) -> FracField:
        return FracField(tuple(Symbol(s) for s in self.symbols), QQ, grlex)

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.symbols)}

    @cached_property
    def _dtable(self) -> dict:
        # var -> [(generator index, FracElement | None)] over tower elements
        out = {v: [] for v in self.variables}
        if self.tower is None:
            return out
        K = self.domain
        for b in self.tower.blocks:
            for n in b.names:
                idx = self._index[n]
                for v, e in b.table(n).items():
                    out[v].append((idx, None if e is None else e.set_field(K)))
        return out

    # element construction ----------------------------------------------------------

    def wrap(self, frac: FracElement) -> "RatExpr":
        if frac.field != self.domain:
            frac = frac.set_field(self.domain)
        return RatExpr(self, frac)

    def wrap_foreign(self, frac: FracElement, chart: "Chart") -> "RatExpr":
        return RatExpr(chart, frac).lift(self)

    def symbol(self, name: str) -> "RatExpr":
        try:
            i = self._index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}", name=name,
                                known=list(self.symbols)) from None
        return RatExpr(self, self.domain.gens[i])

    var = symbol

    def const(self, value) -> "RatExpr":
        if isinstance(value, Fraction):
            value = QQ(value.numerator, value.denominator)
        return RatExpr(self, self.domain(value))

    @property
    def zero(self) -> "RatExpr":
        return RatExpr(self, self.domain.zero)

    @property
    def one(self) -> "RatExpr":
        return RatExpr(self, self.domain.one)

    def coerce(self, value) -> "RatExpr":
        """Turn text, numbers or sub-chart expressions into an expression here."""
        if isinstance(value, RatExpr):
            return value.lift(self)
        if isinstance(value, str):
            from .parser import parse_expr
            return parse_expr(value, self)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return self.const(value)
        raise TypeError(f"cannot interpret {value!r} as an expression")

    def __call__(self, value) -> "RatExpr":
        return self.coerce(value)


# ---------------------------------------------------------------------------
# polynomials and rational functions
# ---------------------------------------------------------------------------

class Poly:
    """Read-only view of a sparse polynomial on a chart (graded-lex order)."""

    __slots__ = ("chart", "_p")

    def __init__(self, chart: Chart, poly):
        self.chart = chart
        self._p = poly

    @property
    def terms(self) -> dict:
        """Exponent tuples (over ``chart.symbols``) mapped to rational coefficients."""
        return {m: _to_fraction(c) for m, c in self._p.terms()}

    def items(self):
        """Terms in decreasing graded-lex order."""
        return [(m, _to_fraction(c)) for m, c in self._p.terms()]

    @property
    def is_zero(self) -> bool:
        return not self._p

    @property
    def leading_coefficient(self) -> Fraction:
        return _to_fraction(self._p.LC)

    def degree(self, name: str | None = None) -> int:
        if name is None:
            return max((sum(m) for m in self._p.monoms()), default=-1)
        return self._p.degree(self.chart._index[name])

    def as_expr(self) -> "RatExpr":
        return RatExpr(self.chart, self.chart.domain(self._p))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.as_expr() == other.as_expr()
        return self.as_expr() == other

    def __hash__(self):
        return hash(self.as_expr())

    def __str__(self):
        from .parser import poly_text
        return poly_text(self)

    def __repr__(self):
        return f"Poly({self})"


def _common(a: "RatExpr", b: "RatExpr") -> tuple["RatExpr", "RatExpr"]:
    if a.chart is b.chart or a.chart == b.chart:
        return a, b
    if b.chart.contains(a.chart):
        return a.lift(b.chart), b
    if a.chart.contains(b.chart):
        return a, b.lift(a.chart)
    raise ChartMismatch("expressions live on incompatible charts",
                        left=repr(a.chart), right=repr(b.chart))


class RatExpr:
    """Immutable exact rational function, canonically reduced.

    ``numerator/denominator`` are coprime and the denominator is normalised to
    leading coefficient 1.  Arithmetic accepts ``int`` and ``Fraction`` operands
    and expressions on nested charts.
    """

    __slots__ = ("chart", "_f")

    def __init__(self, chart: Chart, frac: FracElement):
        self.chart = chart
        self._f = frac

    # structure ------------------------------------------------------------------

    @property
    def numerator(self) -> Poly:
        lc = self._f.denom.LC
        return Poly(self.chart, self._f.numer.quo_ground(lc))

    @property
    def denominator(self) -> Poly:
        lc = self._f.denom.LC
        return Poly(self.chart, self._f.denom.quo_ground(lc))

    @property
    def is_zero(self) -> bool:
        return not self._f.numer

    def __bool__(self):
        return bool(self._f.numer)

    @property
    def free_symbols(self) -> frozenset:
        syms = self.chart.symbols
        used = set()
        for p in (self._f.numer, self._f.denom):
            for m in p.monoms():
                used.update(syms[i] for i, e in enumerate(m) if e)
        return frozenset(used)

    @property
    def is_constant(self) -> bool:
        """True for elements of the constant field (no variables, no tower elements)."""
        return self.free_symbols <= set(self.chart.parameters)

    @property
    def is_polynomial(self) -> bool:
        return self._f.denom.is_ground

    @property
    def is_rational_number(self) -> bool:
        return self._f.numer.is_ground and self._f.denom.is_ground

    def as_fraction(self) -> Fraction:
        if not self.is_rational_number:
            raise ValueError(f"{self} is not a rational number")
        return Fraction(_to_fraction(self._f.numer.LC if self._f.numer else QQ(0))) / \
            _to_fraction(self._f.denom.LC)

    def lift(self, chart: Chart) -> "RatExpr":
        if chart is self.chart or chart == self.chart:
            return self
        if not chart.contains(self.chart):
            raise ChartMismatch("cannot lift expression to a chart that does not contain it",
                                expr=str(self), source=repr(self.chart), target=repr(chart))
        return RatExpr(chart, self._f.set_field(chart.domain))

    def restrict(self, chart: Chart) -> "RatExpr":
        """Move to a smaller chart that still holds every symbol used here."""
        missing = self.free_symbols - set(chart.symbols)
        if missing:
            raise ChartMismatch(f"symbols {sorted(missing)} are not on the target chart",
                                missing=sorted(missing))
        return RatExpr(chart, self._f.set_field(chart.domain))

    # arithmetic -----------------------------------------------------------------

    def _other(self, other):
        if isinstance(other, RatExpr):
            return _common(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, self.chart.const(other)
        return None

    def __add__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return RatExpr(a.chart, a._f + b._f)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return RatExpr(a.chart, a._f - b._f)

    def __rsub__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return RatExpr(a.chart, b._f - a._f)

    def __mul__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return RatExpr(a.chart, a._f * b._f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if not b._f.numer:
            raise DivisionByZeroPolynomial("division by the zero polynomial", numerator=str(a))
        return RatExpr(a.chart, a._f / b._f)

    def __rtruediv__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if not a._f.numer:
            raise DivisionByZeroPolynomial("division by the zero polynomial", numerator=str(b))
        return RatExpr(a.chart, b._f / a._f)

    def __neg__(self):
        return RatExpr(self.chart, -self._f)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        if n < 0 and not self._f.numer:
            raise DivisionByZeroPolynomial("negative power of zero")
        return RatExpr(self.chart, self._f ** n)

    def __eq__(self, other):
        pair = self._other(other) if not isinstance(other, RatExpr) else None
        if isinstance(other, RatExpr):
            try:
                a, b = _common(self, other)
            except ChartMismatch:
                return False
            return a._f == b._f
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._f == b._f

    def __hash__(self):
        if self.is_rational_number:
            return hash(self.as_fraction())
        return hash(self._f.as_expr())

    # calculus ---------------------------------------------------------------------

    def partial(self, name: str) -> "RatExpr":
        """Formal partial derivative with respect to any symbol of the chart."""
        try:
            i = self.chart._index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}", name=name) from None
        return RatExpr(self.chart, self._f.diff(self.chart.domain.gens[i]))

    def derive(self, v: str) -> "RatExpr":
        return derive(self, v)

    def subs(self, mapping: Mapping, chart: Chart | None = None) -> "RatExpr":
        return compose(self, mapping, chart)

    # conversion ------------------------------------------------------------------------

    def to_sympy(self):
        return self._f.as_expr()

    def __str__(self):
        from .parser import to_text
        return to_text(self)

    def __repr__(self):
        return f"RatExpr({self})"


def derive(f: RatExpr, v: str) -> RatExpr:
    """Exact partial derivative along chart variable ``v`` (tower-aware)."""
    chart = f.chart
    if v not in chart.variables:
        raise UnknownSymbol(f"{v!r} is not a chart variable", name=v, variables=list(chart.variables))
    K = chart.domain
    res = f._f.diff(K.gens[chart._index[v]])
    for idx, entry in chart._dtable[v]:
        part = f._f.diff(K.gens[idx])
        if not part.numer:
            continue
        if entry is None:
            raise TowerInsufficient(
                f"derivative of tower element {chart.symbols[idx]!r} along {v!r} is not known",
                element=chart.symbols[idx], variable=v)
        res = res + part * entry
    return RatExpr(chart, res)


def compose(f: RatExpr, mapping: Mapping, chart: Chart | None = None) -> RatExpr:
    """Substitute symbols of ``f`` by expressions (or numbers) on ``chart``.

    Symbols that are not mapped are looked up by name on the target chart.
    Raises :class:`DivisionByZeroPolynomial` when the denominator collapses.
    """
    if chart is None:
        vals = [v for v in mapping.values() if isinstance(v, RatExpr)]
        chart = vals[0].chart if vals else f.chart
        for v in vals[1:]:
            if not chart.contains(v.chart):
                chart = v.chart if v.chart.contains(chart) else chart
    values = []
    for s in f.chart.symbols:
        if s in mapping:
            values.append(chart.coerce(mapping[s]))
        elif s in chart._index:
            values.append(chart.symbol(s))
        else:
            values.append(None)

    def evaluate(poly):
        total = chart.domain.zero
        powers: dict = {}
        for mon, c in poly.terms():
            term = chart.domain(c)
            for i, e in enumerate(mon):
                if not e:
                    continue
                if values[i] is None:
                    raise UnknownSymbol(f"no value for {f.chart.symbols[i]!r}",
                                        name=f.chart.symbols[i])
                key = (i, e)
                if key not in powers:
                    powers[key] = values[i]._f ** e
                term = term * powers[key]
            total = total + term
        return total

    num = evaluate(f._f.numer)
    den = evaluate(f._f.denom)
    if not den.numer:
        raise DivisionByZeroPolynomial("denominator vanishes identically after substitution",
                                       expr=str(f))
    return RatExpr(chart, num / den)
