"""Chord diagrams over a linear backbone and their topological invariants.

A diagram has vertices 1..n on an oriented backbone and a partial matching
drawn as arcs in the upper half plane.  Thickening vertices to disks and
edges to ribbons produces a fatgraph whose boundary components determine the
Euler characteristic and hence the genus of the diagram.

Besides the genus computation this module holds the purely combinatorial
toolbox: dot-bracket parsing with paged brackets, projections that collapse
stacks and strip away secondary content, the decomposition into crossing
components, classification of those components against the genus-1 catalog,
and the loop statistics used to cross-check marked generating functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

Arc = tuple[int, int]

#: Bracket pairs available for dot-bracket output, lowest page first.
PAGES: tuple[str, ...] = ("()", "[]", "{}", "<>") + tuple(
    chr(ord("A") + k) + chr(ord("a") + k) for k in range(26)
)

_OPEN_PAGE = {p[0]: idx for idx, p in enumerate(PAGES)}
_CLOSE_PAGE = {p[1]: idx for idx, p in enumerate(PAGES)}


@dataclass(frozen=True)
class Diagram:
    """An n-vertex diagram with arcs stored sorted by left endpoint.

    Arcs are 1-based pairs ``(i, j)`` with ``i < j``; every vertex occurs in
    at most one arc.  Construction normalizes arc order and validates.
    """

    n: int
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen: set[int] = set()
        fixed = []
        for i, j in self.arcs:
            if i > j:
                i, j = j, i
            if i == j:
                raise ValueError(f"degenerate arc at vertex {i}")
            if not (1 <= i and j <= self.n):
                raise ValueError(f"arc ({i}, {j}) outside 1..{self.n}")
            if i in seen or j in seen:
                raise ValueError(f"vertex used twice in arc ({i}, {j})")
            seen.update((i, j))
            fixed.append((i, j))
        object.__setattr__(self, "arcs", tuple(sorted(fixed)))

    @classmethod
    def from_partner(cls, n: int, partner: list[int]) -> Diagram:
        """Build from a partner array (index 0 unused, 0 meaning unpaired)."""
        arcs = [
            (v, partner[v])
            for v in range(1, n + 1)
            if partner[v] > v
        ]
        return cls(n, tuple(arcs))

    def partner(self) -> list[int]:
        out = [0] * (self.n + 1)
        for i, j in self.arcs:
            out[i] = j
            out[j] = i
        return out

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    def genus(self) -> GenusResult:
        return genus_of_partner(self.n, self.partner())

    def to_json_dict(self) -> dict:
        return {"n": self.n, "arcs": [[i, j] for i, j in self.arcs]}

    @classmethod
    def from_json_dict(cls, data: dict) -> Diagram:
        return cls(int(data["n"]), tuple((int(i), int(j)) for i, j in data["arcs"]))


@dataclass(frozen=True)
class GenusResult:
    """Topological summary of a diagram's fatgraph."""

    genus: int
    boundary_components: int
    euler_characteristic: int


def arcs_cross(a: Arc, b: Arc) -> bool:
    """Whether two arcs cross when drawn in the upper half plane."""
    i, j = a
    k, l = b
    return (i < k < j < l) or (k < i < l < j)


def boundary_components(n: int, partner: list[int]) -> int:
    """Count boundary components of the thickened diagram.

    Half-edges are numbered so that reversal is a bit flip: backbone edge
    v -> v+1 owns halves 2(v-1) and 2(v-1)+1, and the a-th arc (sorted by
    left endpoint) owns halves B0+2a and B0+2a+1 with B0 = 2(n-1).  At each
    vertex the counterclockwise order is (right backbone, arc, left
    backbone); faces are the orbits of the composition of that rotation
    with half-edge reversal.
    """
    if n == 0:
        return 1
    arcs = [
        (v, partner[v])
        for v in range(1, n + 1)
        if partner[v] > v
    ]
    base = 2 * (n - 1)
    total = base + 2 * len(arcs)
    if total == 0:
        return 1
    arc_half = [0] * (n + 1)
    for a, (i, j) in enumerate(arcs):
        arc_half[i] = base + 2 * a
        arc_half[j] = base + 2 * a + 1
    sigma_next = [0] * total
    for v in range(1, n + 1):
        cycle = []
        if v < n:
            cycle.append(2 * (v - 1))
        if partner[v]:
            cycle.append(arc_half[v])
        if v > 1:
            cycle.append(2 * (v - 2) + 1)
        for t, h in enumerate(cycle):
            sigma_next[h] = cycle[(t + 1) % len(cycle)]
    seen = bytearray(total)
    faces = 0
    for start in range(total):
        if seen[start]:
            continue
        faces += 1
        h = start
        while not seen[h]:
            seen[h] = 1
            h = sigma_next[h ^ 1]
    return faces


def genus_of_partner(n: int, partner: list[int]) -> GenusResult:
    """Genus from a partner array, via the boundary component count."""
    if n == 0:
        return GenusResult(0, 1, 2)
    num_arcs = sum(1 for v in range(1, n + 1) if partner[v] > v)
    faces = boundary_components(n, partner)
    euler = n - ((n - 1) + num_arcs) + faces
    if (2 - euler) % 2:
        raise AssertionError("odd Euler characteristic for an orientable surface")
    return GenusResult((2 - euler) // 2, faces, euler)


# -- dot-bracket ----------------------------------------------------------


def parse_structure(text: str) -> Diagram:
    """Parse a dot-bracket string into a diagram.

    Dots are unpaired vertices.  Crossing arcs use successive bracket pages
    ``()``, ``[]``, ``{}``, ``<>``, then ``Aa`` through ``Zz``.

    Raises:
        ValueError: on stray characters, an unmatched closer, or an
            unclosed opener; messages carry the 1-based column.
    """
    stacks: dict[int, list[int]] = {}
    arcs: list[Arc] = []
    for col, ch in enumerate(text.strip(), start=1):
        if ch == ".":
            continue
        if ch in _OPEN_PAGE:
            stacks.setdefault(_OPEN_PAGE[ch], []).append(col)
        elif ch in _CLOSE_PAGE:
            page = _CLOSE_PAGE[ch]
            if not stacks.get(page):
                raise ValueError(f"unmatched {ch!r} at column {col}")
            arcs.append((stacks[page].pop(), col))
        else:
            raise ValueError(f"unexpected character {ch!r} at column {col}")
    for page, stack in stacks.items():
        if stack:
            raise ValueError(
                f"unclosed {PAGES[page][0]!r} at column {stack[-1]}"
            )
    return Diagram(len(text.strip()), tuple(arcs))


def emit_structure(diagram: Diagram) -> str:
    """Render a diagram as dot-bracket text.

    Arcs are greedily assigned to the lowest page on which they cross
    nothing already placed there; crossing-free diagrams therefore come out
    in plain round brackets.

    Raises:
        ValueError: if the diagram needs more than the available pages.
    """
    pages: list[list[Arc]] = []
    assignment: dict[Arc, int] = {}
    for arc in diagram.arcs:
        for idx, placed in enumerate(pages):
            if all(not arcs_cross(arc, other) for other in placed):
                placed.append(arc)
                assignment[arc] = idx
                break
        else:
            if len(pages) >= len(PAGES):
                raise ValueError(
                    f"diagram needs more than {len(PAGES)} bracket pages"
                )
            pages.append([arc])
            assignment[arc] = len(pages) - 1
    chars = ["."] * diagram.n
    for (i, j), page in assignment.items():
        chars[i - 1] = PAGES[page][0]
        chars[j - 1] = PAGES[page][1]
    return "".join(chars)


# -- projections ----------------------------------------------------------


def _compact(arcs: set[Arc]) -> tuple[int, set[Arc]]:
    """Drop unpaired vertices and renumber the remaining ones 1..2k."""
    used = sorted({v for arc in arcs for v in arc})
    index = {v: t + 1 for t, v in enumerate(used)}
    return len(used), {(index[i], index[j]) for i, j in arcs}


def _project(diagram: Diagram, *, drop_noncrossing: bool) -> Diagram:
    """Iterate the reduction rules until nothing changes.

    The shape projection repeatedly drops unpaired vertices, collapses
    stacked arcs and deletes arcs between adjacent vertices; the shadow
    projection additionally deletes every arc that crosses nothing.
    """
    n, arcs = _compact(set(diagram.arcs))
    while True:
        paired = [False] * (n + 2)
        for i, j in arcs:
            paired[i] = paired[j] = True
        removed = None
        for i, j in arcs:
            if j == i + 1:
                removed = (i, j)
                break
            if (i + 1, j - 1) in arcs:
                removed = (i, j)
                break
            if drop_noncrossing and not any(
                arcs_cross((i, j), other) for other in arcs
            ):
                removed = (i, j)
                break
        if removed is None:
            break
        arcs.discard(removed)
        n, arcs = _compact(arcs)
    return Diagram(n, tuple(arcs))


def project_shape(diagram: Diagram) -> Diagram:
    """The shape: no unpaired vertices, no stacks, no adjacent-vertex arcs.

    Pure secondary content collapses away entirely, so the shape of a
    genus-0 diagram is empty.  The projection preserves genus.
    """
    return _project(diagram, drop_noncrossing=False)


def project_shadow(diagram: Diagram) -> Diagram:
    """The shadow: the shape with every non-crossing arc removed as well."""
    return _project(diagram, drop_noncrossing=True)


# -- crossing components and their classification -------------------------

#: The four irreducible genus-1 shadows, keyed by their traditional labels.
GENUS1_SHADOWS: dict[str, Diagram] = {
    "H": Diagram(4, ((1, 3), (2, 4))),
    "K": Diagram(6, ((1, 3), (2, 5), (4, 6))),
    "L": Diagram(6, ((1, 4), (2, 5), (3, 6))),
    "M": Diagram(8, ((1, 4), (2, 6), (3, 7), (5, 8))),
}

_SHADOW_LABELS = {d: name for name, d in GENUS1_SHADOWS.items()}


@dataclass(frozen=True)
class ComponentBlock:
    """One crossing component, with the components nested directly inside it."""

    arc_indices: tuple[int, ...]
    span: tuple[int, int]
    genus: int
    label: str
    children: tuple[ComponentBlock, ...]


def crossing_components(diagram: Diagram) -> list[list[int]]:
    """Connected components of the crossing graph, as lists of arc indices.

    Arcs that cross nothing form singleton components.
    """
    arcs = diagram.arcs
    m = len(arcs)
    parent = list(range(m))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(m):
        for b in range(a + 1, m):
            if arcs_cross(arcs[a], arcs[b]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for a in range(m):
        groups.setdefault(find(a), []).append(a)
    return sorted(groups.values(), key=lambda g: min(arcs[a][0] for a in g))


def classify_component(diagram: Diagram, arc_indices: list[int]) -> tuple[str, int]:
    """Label one crossing component.

    Returns a pair ``(label, genus)`` where the label is ``"secondary"``
    for a single non-crossing arc, one of ``"H"``, ``"K"``, ``"L"``, ``"M"``
    for a genus-1 component according to its shadow, and ``"higher"``
    otherwise.
    """
    if len(arc_indices) == 1:
        return "secondary", 0
    sub = Diagram(diagram.n, tuple(diagram.arcs[a] for a in arc_indices))
    shadow = project_shadow(sub)
    g = shadow.genus().genus
    if g == 1:
        label = _SHADOW_LABELS.get(shadow)
        if label is None:
            raise AssertionError(
                f"genus-1 component with shadow outside the catalog: {shadow}"
            )
        return label, 1
    return "higher", g


def block_decomposition(diagram: Diagram) -> list[ComponentBlock]:
    """Nest the crossing components into a forest by span containment.

    Distinct components can never partially overlap (that would make them
    one component), so sorting spans by start and nesting greedily gives a
    well-defined forest.
    """
    arcs = diagram.arcs
    flat: list[ComponentBlock] = []
    for indices in crossing_components(diagram):
        span = (
            min(arcs[a][0] for a in indices),
            max(arcs[a][1] for a in indices),
        )
        label, genus = classify_component(diagram, indices)
        flat.append(ComponentBlock(tuple(indices), span, genus, label, ()))
    flat.sort(key=lambda b: (b.span[0], -b.span[1]))
    return _assemble_forest(flat)


def _assemble_forest(flat: list[ComponentBlock]) -> list[ComponentBlock]:
    """Rebuild parent-child links from spans (input sorted by (start, -end))."""
    roots: list[ComponentBlock] = []
    path: list[tuple[ComponentBlock, list[ComponentBlock]]] = []
    for node in flat:
        bucket: list[ComponentBlock] = []
        while path and not (
            path[-1][0].span[0] < node.span[0] and node.span[1] < path[-1][0].span[1]
        ):
            finished, kids = path.pop()
            closed = ComponentBlock(
                finished.arc_indices,
                finished.span,
                finished.genus,
                finished.label,
                tuple(kids),
            )
            if path:
                path[-1][1].append(closed)
            else:
                roots.append(closed)
        path.append((node, bucket))
    while path:
        finished, kids = path.pop()
        closed = ComponentBlock(
            finished.arc_indices,
            finished.span,
            finished.genus,
            finished.label,
            tuple(kids),
        )
        if path:
            path[-1][1].append(closed)
        else:
            roots.append(closed)
    return roots


# -- validity and loop statistics -----------------------------------------


def validate_constraints(diagram: Diagram, min_arc: int, min_stack: int) -> None:
    """Check the two structural side conditions.

    Args:
        min_arc: every arc whose interior is entirely unpaired must span at
            least this far, i.e. enclose at least ``min_arc - 1`` vertices.
        min_stack: every maximal run of parallel arcs must have at least
            this many arcs.

    Raises:
        ValueError: naming the first offending arc or stack.
    """
    if min_arc < 1 or min_stack < 1:
        raise ValueError("both structure parameters must be at least 1")
    partner = diagram.partner()
    for i, j in diagram.arcs:
        if j - i < min_arc and all(partner[v] == 0 for v in range(i + 1, j)):
            raise ValueError(
                f"arc ({i}, {j}) encloses {j - i - 1} unpaired vertices, "
                f"needs {min_arc - 1}"
            )
        if i > 1 and j < diagram.n and partner[i - 1] == j + 1:
            continue  # not the outermost arc of its run
        run = 1
        while i + run < j - run and partner[i + run] == j - run:
            run += 1
        if run < min_stack:
            raise ValueError(
                f"stack starting at arc ({i}, {j}) has {run} arcs, needs {min_stack}"
            )


def satisfies_constraints(diagram: Diagram, min_arc: int, min_stack: int) -> bool:
    try:
        validate_constraints(diagram, min_arc, min_stack)
    except ValueError:
        return False
    return True


def loop_counts(diagram: Diagram, *, literal_multi: bool = False) -> dict[str, int]:
    """Count stacks and the four loop patterns.

    A loop hangs off an arc ``(i, j)`` whose interior splits into unpaired
    gaps and closed child intervals, each exactly spanned by an arc: no
    children makes a hairpin; one child makes a bulge or an interior loop
    depending on whether one or both gaps are nonempty (both empty is just
    a stacked pair); two or more children make a multiloop.

    A multiloop whose children include two or more crossing-carrying
    intervals sits at a branch point of the diagram's shape rather than
    inside a stem or a secondary region, and the stem-decomposition
    generating functions never mark it.  Those patterns are skipped by
    default so that the census agrees with the marked series; pass
    ``literal_multi=True`` to count every branching pattern.

    The stack count is the number of maximal runs of parallel arcs.
    """
    n = diagram.n
    partner = diagram.partner()
    counts = {"stack": 0, "hairpin": 0, "bulge": 0, "interior": 0, "multi": 0}
    for i, j in diagram.arcs:
        if not (i > 1 and j < n and partner[i - 1] == j + 1):
            counts["stack"] += 1
    involved = [0] * (n + 1)
    arcs = diagram.arcs
    for a in range(len(arcs)):
        for b in range(a + 1, len(arcs)):
            if arcs_cross(arcs[a], arcs[b]):
                for v in (*arcs[a], *arcs[b]):
                    involved[v] = 1
    crossing_below = [0, *accumulate(involved[1:])]

    def has_crossing(lo: int, hi: int) -> bool:
        return crossing_below[hi] - crossing_below[lo - 1] > 0

    for i, j in arcs:
        v = i + 1
        children: list[Arc] = []
        intact = True
        while v < j:
            p = partner[v]
            if p == 0:
                v += 1
            elif v < p < j:
                children.append((v, p))
                v = p + 1
            else:
                intact = False
                break
        if not intact:
            continue
        if not children:
            counts["hairpin"] += 1
        elif len(children) == 1:
            (cl, cr) = children[0]
            gaps = (cl - i - 1 > 0) + (j - cr - 1 > 0)
            if gaps == 1:
                counts["bulge"] += 1
            elif gaps == 2:
                counts["interior"] += 1
        else:
            deep = sum(1 for cl, cr in children if has_crossing(cl, cr))
            if literal_multi or deep <= 1:
                counts["multi"] += 1
    return counts


def stem_count(diagram: Diagram) -> int:
    """Number of stems: chains of stacks linked by bulges and interior loops."""
    counts = loop_counts(diagram)
    return counts["stack"] - counts["bulge"] - counts["interior"]
