"""Closed-form counting of chord diagrams, shapes, and irreducible shadows.

Everything in this module lives on the "matching" side of the theory: linear
chord diagrams (no unpaired vertices) filtered by genus, the finite shape
polynomials obtained by collapsing stacks, and the irreducible shadows that
form the crossing cores of shapes.  All arithmetic is exact; counts are
plain ints and polynomials carry int or Fraction coefficients.

The central recursion is the two-term one for chord diagram counts by genus,

    (n + 1) c_g(n) = 2(2n - 1) c_g(n-1) + (n - 1)(2n - 1)(2n - 3) c_{g-1}(n-2),

seeded by the empty diagram.  A companion recursion produces the finite
weight family ``shape_weights(g)`` whose entries expand the genus-g diagram
series in the basis x^n (1-4x)^(-n-1/2) and, at the same time, give the
shape polynomial in the basis x^n (1+x)^(n+1).
"""

from __future__ import annotations

from .series import (
    Polynomial,
    TruncatedSeries,
    XYPolynomial,
    puiseux_expand,
)

MARK_KINDS = ("H", "K", "L", "M")

_chord_cache: dict[tuple[int, int], int] = {}
_weight_cache: dict[int, dict[int, int]] = {1: {2: 1}}
_marked_cache: dict[str, list[XYPolynomial]] = {}
_derived_cache: list[Polynomial] = []


def chord_count(genus: int, arcs: int) -> int:
    """Number of linear chord diagrams with ``arcs`` chords and given genus."""
    if genus < 0 or arcs < 2 * genus:
        return 0
    if arcs == 0:
        return 1
    key = (genus, arcs)
    cached = _chord_cache.get(key)
    if cached is not None:
        return cached
    n = arcs
    total = 2 * (2 * n - 1) * chord_count(genus, n - 1)
    total += (n - 1) * (2 * n - 1) * (2 * n - 3) * chord_count(genus - 1, n - 2)
    value, rem = divmod(total, n + 1)
    if rem:
        raise ArithmeticError(f"chord recursion not divisible at g={genus}, n={n}")
    _chord_cache[key] = value
    return value


def chord_count_row(genus: int, max_arcs: int) -> list[int]:
    return [chord_count(genus, n) for n in range(max_arcs + 1)]


def shape_weights(genus: int) -> dict[int, int]:
    """Weights w(n), supported on 2g <= n <= 3g - 1, defining the genus-g bases.

    The genus-g chord diagram series equals sum w(n) x^n (1-4x)^(-n-1/2) and
    the shape polynomial equals sum w(n) x^n (1+x)^(n+1).  Only defined for
    genus >= 1; genus 0 is covered by the Catalan series and the constant
    shape polynomial.
    """
    if genus < 1:
        raise ValueError("shape weights are defined for genus >= 1")
    cached = _weight_cache.get(genus)
    if cached is not None:
        return dict(cached)
    prev = shape_weights(genus - 1)
    row: dict[int, int] = {}
    for n in range(2 * genus, 3 * genus):
        total = (n - 1) * (2 * n - 1) * (2 * n - 3) * prev.get(n - 2, 0)
        total += 2 * (2 * n - 1) * (2 * n - 3) * (2 * n - 5) * prev.get(n - 3, 0)
        value, rem = divmod(total, n + 1)
        if rem:
            raise ArithmeticError(f"weight recursion not divisible at g={genus}, n={n}")
        if value:
            row[n] = value
    _weight_cache[genus] = row
    return dict(row)


def shape_poly(genus: int) -> Polynomial:
    """Generating polynomial of genus-g shapes, counted by arcs.

    Degree 6g - 1 for genus >= 1; the empty shape gives the constant 1 at
    genus 0.
    """
    if genus == 0:
        return Polynomial([1])
    acc = Polynomial()
    one_plus_x = Polynomial([1, 1])
    for n, w in sorted(shape_weights(genus).items()):
        term = Polynomial([w]).shift(n)
        for _ in range(n + 1):
            term = term * one_plus_x
        acc = acc + term
    return acc


_BUILTIN_IRREDUCIBLE = {
    1: Polynomial([0, 0, 1, 2, 1]),
    2: Polynomial([0, 0, 0, 0, 17, 160, 566, 1004, 961, 476, 96]),
}


def irreducible_poly(genus: int, *, derived: bool = False) -> Polynomial:
    """Generating polynomial of genus-g irreducible shadows, counted by arcs.

    Genus 1 and 2 ship as fixed polynomials; pass ``derived=True`` (or ask
    for genus >= 3) to compute the polynomial by inverting the shape
    recursion instead.
    """
    if genus < 1:
        raise ValueError("irreducible shadows require genus >= 1")
    if not derived and genus in _BUILTIN_IRREDUCIBLE:
        return _BUILTIN_IRREDUCIBLE[genus]
    while len(_derived_cache) < genus:
        _derived_cache.append(_derive_irreducible(len(_derived_cache) + 1))
    return _derived_cache[genus - 1]


def marked_irreducible_poly(kind: str) -> XYPolynomial:
    """Genus-1 irreducible shadow polynomial with y marking one crossing type.

    ``kind`` selects which of the four genus-1 shadows carries the marker:
    H (two mutually crossing arcs), K and L (the three-arc shadows), or
    M (the four-arc shadow).  Coefficients at y^0 cover the other shadows.
    """
    if kind not in MARK_KINDS:
        raise ValueError(f"unknown mark kind {kind!r}")
    arcs_of = {"H": 2, "K": 3, "L": 3, "M": 4}
    counts = {2: 1, 3: 2, 4: 1}
    marked = arcs_of[kind]
    terms: dict[tuple[int, int], int] = {(marked, 1): 1}
    for n, c in counts.items():
        rest = c - (1 if n == marked else 0)
        if rest:
            terms[(n, 0)] = rest
    return XYPolynomial(terms)


def marked_shape_poly(genus: int, kind: str) -> XYPolynomial:
    """Genus-g shape polynomial with y marking crossing components of one type.

    The marker follows the block decomposition of the shape: each block whose
    shadow matches ``kind`` contributes one power of y.  At y = 1 this
    reduces to ``shape_poly(genus)``.
    """
    if kind not in MARK_KINDS:
        raise ValueError(f"unknown mark kind {kind!r}")
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    table = _marked_cache.setdefault(kind, [XYPolynomial.constant(1)])
    while len(table) <= genus:
        table.append(_next_marked(table, kind))
    return table[genus]


def _xy_from_poly(p: Polynomial) -> XYPolynomial:
    return XYPolynomial({(i, 0): c for i, c in enumerate(p.coeffs) if c})


def _marked_irreducible(genus: int, kind: str) -> XYPolynomial:
    if genus == 1:
        return marked_irreducible_poly(kind)
    return _xy_from_poly(irreducible_poly(genus))


def _next_marked(table: list[XYPolynomial], kind: str) -> XYPolynomial:
    gg = len(table)
    cap = 6 * gg
    x = XYPolynomial.monomial(1, 0)
    acc = XYPolynomial()
    for i in range(1, gg):
        acc = acc + table[i].mul(table[gg - i], cap)
    acc = x.mul(acc, cap)
    u = _stack_substitution(table, gg - 1, cap)
    tail = XYPolynomial()
    for j in range(1, gg + 1):
        block = _compose_x(_marked_irreducible(j, kind), u, gg - j, cap)
        tail = tail + block[gg - j]
    acc = acc + XYPolynomial({(0, 0): 1, (1, 0): 1}).mul(tail, cap)
    return acc


def _stack_substitution(
    table: list[XYPolynomial], tcap: int, cap: int
) -> list[XYPolynomial]:
    """Series in t (list of x,y-polynomials) replacing x in an inner polynomial.

    With P(t) the partial sum of the table entries, this is
    x P(t)^2 / (1 - x (P(t)^2 - 1)), the substitution that inflates an
    irreducible core by hanging shape material off its arcs.
    """
    x = XYPolynomial.monomial(1, 0)
    p = [table[k] if k < len(table) else XYPolynomial() for k in range(tcap + 1)]
    p2 = _tmul(p, p, tcap, cap)
    den = [XYPolynomial() for _ in range(tcap + 1)]
    den[0] = XYPolynomial.constant(1) - x.mul(p2[0] - 1, cap)
    for m in range(1, tcap + 1):
        den[m] = -x.mul(p2[m], cap)
    num = [x.mul(q, cap) for q in p2]
    return _tmul(num, _tinv(den, tcap, cap), tcap, cap)


def _tmul(
    a: list[XYPolynomial], b: list[XYPolynomial], tcap: int, cap: int
) -> list[XYPolynomial]:
    out = [XYPolynomial() for _ in range(tcap + 1)]
    for m in range(tcap + 1):
        for k in range(m + 1):
            if k < len(a) and m - k < len(b):
                out[m] = out[m] + a[k].mul(b[m - k], cap)
    return out


def _tinv(a: list[XYPolynomial], tcap: int, cap: int) -> list[XYPolynomial]:
    if a[0] != XYPolynomial.constant(1):
        raise ValueError("t-series inverse requires constant term 1")
    out = [XYPolynomial.constant(1)]
    for m in range(1, tcap + 1):
        acc = XYPolynomial()
        for k in range(1, m + 1):
            acc = acc + a[k].mul(out[m - k], cap)
        out.append(-acc)
    return out


def _compose_x(
    poly: XYPolynomial, u: list[XYPolynomial], tcap: int, cap: int
) -> list[XYPolynomial]:
    """Substitute the t-series ``u`` for x in ``poly``, keeping y intact."""
    slices: dict[int, XYPolynomial] = {}
    for (i, j), c in poly.terms.items():
        slices[i] = slices.get(i, XYPolynomial()) + XYPolynomial.monomial(0, j, c)
    top = max(slices) if slices else 0
    acc = [XYPolynomial() for _ in range(tcap + 1)]
    for i in range(top, -1, -1):
        acc = _tmul(acc, u[: tcap + 1], tcap, cap)
        if i in slices:
            acc[0] = acc[0] + slices[i]
    return acc


def _poly_exact_div_1px(p: Polynomial) -> Polynomial:
    """Exact division by (1 + x); raises if the remainder is nonzero."""
    out: list = []
    carry = 0
    for c in p.coeffs:
        q = c - carry
        out.append(q)
        carry = q
    if out and out[-1] != 0:
        raise ArithmeticError("polynomial is not divisible by 1 + x")
    return Polynomial(out[:-1])


def _derive_irreducible(genus: int) -> Polynomial:
    cap = 6 * genus
    x = XYPolynomial.monomial(1, 0)
    val = _xy_from_poly(shape_poly(genus))
    for i in range(1, genus):
        prod = _xy_from_poly(shape_poly(i)).mul(_xy_from_poly(shape_poly(genus - i)), cap)
        val = val - x.mul(prod, cap)
    shapes = [_xy_from_poly(shape_poly(k)) for k in range(genus)]
    u = _stack_substitution(shapes, genus - 1, cap)
    for j in range(1, genus):
        inner = _compose_x(_xy_from_poly(irreducible_poly(j, derived=True)), u, genus - j, cap)
        val = val - XYPolynomial({(0, 0): 1, (1, 0): 1}).mul(inner[genus - j], cap)
    if val.y_degree() != 0:
        raise ArithmeticError("unexpected marker content in shadow inversion")
    return _poly_exact_div_1px(val.at_y(1))


def catalan_series(order: int) -> TruncatedSeries:
    """Series of the Catalan numbers, from the closed form (1 - sqrt(1-4x))/2x."""
    wide = TruncatedSeries([1, -4], order + 1).sqrt()
    return ((1 - wide).shifted_down(1) / 2).truncate(order)


def chord_series(genus: int, order: int, route: str = "recursion") -> TruncatedSeries:
    """Truncated series counting genus-g linear chord diagrams by arcs.

    Three independent routes are provided so they can be played against each
    other in tests:

    * ``"recursion"``: term-by-term from the two-term recursion.
    * ``"closed"``: the finite weight expansion over (1-4x)^(-n-1/2)
      (Catalan closed form at genus 0).
    * ``"shapes"``: inflate the shape polynomial, composing it with
      x C0^2 / (1 - x C0^2) and multiplying by the Catalan series C0.
    """
    if route == "recursion":
        return TruncatedSeries([chord_count(genus, n) for n in range(order)], order)
    if route == "closed":
        if genus == 0:
            return catalan_series(order)
        acc = TruncatedSeries.zero(order)
        for n, w in sorted(shape_weights(genus).items()):
            acc = acc + puiseux_expand(n, order).shift(n) * w
        return acc
    if route == "shapes":
        c0 = catalan_series(order)
        xc2 = (c0 * c0).shift(1)
        inner = xc2 / (1 - xc2)
        acc = TruncatedSeries.zero(order)
        for c in reversed(shape_poly(genus).coeffs):
            acc = acc * inner + c
        return c0 * acc
    raise ValueError(f"unknown route {route!r}")
