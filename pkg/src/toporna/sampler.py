"""Uniform random sampling of structures at fixed length and genus.

Sampling mirrors the decomposition the generating functions count: a
structure is a secondary prefix, a shape drawn from the finite inventory
for the target genus, and one stem chain per shape arc, with secondary
fillers spliced into the gap after each inflated endpoint.  Every
discrete choice uses exact integer weights from DP tables, so draws are
uniform by construction and no floating point enters the pipeline.

The enumerative fallback materializes the whole family first and is only
meant for cross-checks at small lengths.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from itertools import accumulate

from mpmath import mp

from .diagram import Diagram, classify_component, crossing_components, loop_counts
from .genfun import LOOP_KINDS, StructureClass
from .oracle import PK_LABELS, enumerate_diagrams, enumerate_shapes

__all__ = [
    "StructureSampler",
    "empirical_stats",
    "sample_enumerative",
    "chi_square",
    "chi_square_pvalue",
]


def _draw(rng: random.Random, cum: list[int]) -> int:
    """Index into a cumulative integer weight list, exactly."""
    return bisect_right(cum, rng.randrange(cum[-1]))


def _tokens_to_diagram(tokens: list[int]) -> Diagram:
    # 0 is an unpaired vertex, +k opens arc k, -k closes it
    first: dict[int, int] = {}
    arcs = []
    for pos, tok in enumerate(tokens, start=1):
        if tok > 0:
            first[tok] = pos
        elif tok < 0:
            arcs.append((first[-tok], pos))
    return Diagram(len(tokens), tuple(arcs))


class StructureSampler:
    """Exact uniform sampler over structures of one genus.

    Tables cover lengths up to ``max_len`` and are built once; afterwards
    each draw costs a handful of weighted choices plus the recursion into
    secondary fillers.  For positive genus the shape inventory is
    enumerated up front, and that enumeration grows quickly with the
    number of admissible shape arcs (``max_len // (2 * min_stack)``
    capped at one below six times the genus), so keep ``max_len`` modest
    at genus two and beyond.
    """

    def __init__(self, cls_: StructureClass, genus: int, max_len: int):
        if genus < 0:
            raise ValueError("genus must be nonnegative")
        if max_len < 0:
            raise ValueError("max_len must be nonnegative")
        if genus and cls_.min_arc > cls_.min_stack + 1:
            raise ValueError(
                "chain inflation needs min_arc <= min_stack + 1; "
                f"got min_arc={cls_.min_arc}, min_stack={cls_.min_stack}"
            )
        self.cls_ = cls_
        self.genus = genus
        self.max_len = max_len
        self._cum: dict[tuple, list[int]] = {}
        self._build_secondary()
        if genus:
            self._build_inventory()
            self._build_chains()
        else:
            self._total = list(self._d0)

    # -- table construction ------------------------------------------------

    def _build_secondary(self) -> None:
        """Fill the genus-zero grammar tables up to ``max_len``.

        The grammar factors a secondary segment as a sequence of unpaired
        vertices and closed components; a component is a maximal coloured
        run of nested arcs wrapping an interior that is a hairpin fill, a
        one-sided or two-sided gap around a single component, or at least
        two components with free gaps.  The branches partition interiors,
        which is what makes the sampler uniform.
        """
        lam, r = self.cls_.min_arc, self.cls_.min_stack
        top = self.max_len
        hp = [1 if m >= lam - 1 else 0 for m in range(top + 1)]
        comp = [0] * (top + 1)
        bl = [0] * (top + 1)
        inter = [0] * (top + 1)
        cg = [0] * (top + 1)
        tl = [0] * (top + 1)
        cgtl = [0] * (top + 1)
        multi = [0] * (top + 1)
        body = [0] * (top + 1)
        for m in range(top + 1):
            if m:
                bl[m] = bl[m - 1] + comp[m - 1]
                inter[m] = inter[m - 1] + bl[m - 1]
            cgtl[m] = sum(cg[t] * tl[m - t] for t in range(2, m - 1))
            multi[m] = (multi[m - 1] if m else 0) + cgtl[m]
            body[m] = hp[m] + 2 * bl[m] + inter[m] + multi[m]
            comp[m] = sum(body[m - 2 * s] for s in range(r, m // 2 + 1))
            cg[m] = (cg[m - 1] if m else 0) + comp[m]
            tl[m] = sum(cg[v] * (1 if v == m else tl[m - v]) for v in range(2, m + 1))
        d0 = [0] * (top + 1)
        for m in range(top + 1):
            if m == 0:
                d0[0] = 1
            else:
                d0[m] = d0[m - 1] + sum(comp[t] * d0[m - t] for t in range(2, m + 1))
        gtl = list(accumulate(tl))
        self._hp, self._comp, self._bl, self._inter = hp, comp, bl, inter
        self._tl, self._cgtl, self._multi, self._body = tl, cgtl, multi, body
        self._gtl = gtl
        self._gdt = [1 + v for v in gtl]
        self._d0 = d0

    def _build_inventory(self) -> None:
        r = self.cls_.min_stack
        self._k_cap = min(6 * self.genus - 1, self.max_len // (2 * r))
        self._shapes: dict[int, list[Diagram]] = {}
        for shape, _ in enumerate_shapes(self._k_cap, genus=self.genus):
            self._shapes.setdefault(len(shape.arcs), []).append(shape)

    def _build_chains(self) -> None:
        r = self.cls_.min_stack
        top = self.max_len
        d0 = self._d0
        p2 = [sum(d0[a] * d0[m - a] for a in range(m + 1)) for m in range(top + 1)]
        p2m1 = list(p2)
        p2m1[0] -= 1
        geo = [0] * (top + 1)
        for m in range(top + 1):
            if m == 0:
                geo[0] = 1
                continue
            geo[m] = sum(
                p2m1[m - 2 * s - t] * geo[t]
                for s in range(r, m // 2 + 1)
                for t in range(m - 2 * s + 1)
            )
        pg = [sum(p2[a] * geo[m - a] for a in range(m + 1)) for m in range(top + 1)]
        pmg = [sum(p2m1[a] * geo[m - a] for a in range(m + 1)) for m in range(top + 1)]
        chain = [
            sum(pg[m - 2 * s] for s in range(r, m // 2 + 1)) for m in range(top + 1)
        ]
        cp = [[1] + [0] * top]
        for _ in range(self._k_cap):
            prev = cp[-1]
            cp.append(
                [sum(prev[a] * chain[m - a] for a in range(m + 1)) for m in range(top + 1)]
            )
        lead = [
            [sum(d0[a] * po[m - a] for a in range(m + 1)) for m in range(top + 1)]
            for po in cp
        ]
        self._p2, self._p2m1, self._geo = p2, p2m1, geo
        self._pg, self._pmg, self._chain = pg, pmg, chain
        self._cp, self._lead = cp, lead
        self._total = [
            sum(len(v) * lead[k][m] for k, v in self._shapes.items())
            for m in range(top + 1)
        ]

    def _cum_for(self, key: tuple, build) -> list[int]:
        cum = self._cum.get(key)
        if cum is None:
            cum = list(accumulate(build()))
            self._cum[key] = cum
        return cum

    # -- public interface --------------------------------------------------

    def count(self, n: int) -> int:
        """Number of structures of length ``n`` (tables must cover it)."""
        if not 0 <= n <= self.max_len:
            raise ValueError(f"length {n} outside table range 0..{self.max_len}")
        return self._total[n]

    def sample(self, n: int, rng: random.Random) -> Diagram:
        if self.count(n) == 0:
            raise ValueError(f"no structures of length {n} at genus {self.genus}")
        fresh = iter(range(1, n + 2)).__next__
        if self.genus == 0:
            return _tokens_to_diagram(self._seq_tokens(n, fresh, rng))
        return _tokens_to_diagram(self._positive_tokens(n, fresh, rng))

    def sample_many(self, n: int, draws: int, seed=None) -> list[Diagram]:
        """Draw ``draws`` structures with a private ``random.Random(seed)``."""
        rng = random.Random(seed)
        return [self.sample(n, rng) for _ in range(draws)]

    # -- positive-genus assembly -------------------------------------------

    def _positive_tokens(self, n: int, fresh, rng: random.Random) -> list[int]:
        ks = sorted(self._shapes)
        cum = self._cum_for(
            ("k", n),
            lambda: [len(self._shapes[k]) * self._lead[k][n] for k in ks],
        )
        k = ks[_draw(rng, cum)]
        pool = self._shapes[k]
        shape = pool[rng.randrange(len(pool))]
        cum = self._cum_for(
            ("prefix", k, n),
            lambda: [self._d0[m] * self._cp[k][n - m] for m in range(n + 1)],
        )
        m0 = _draw(rng, cum)
        rem = n - m0
        lens = []
        for j in range(k - 1, 0, -1):
            cum = self._cum_for(
                ("part", j, rem),
                lambda j=j, rem=rem: [
                    self._chain[c] * self._cp[j][rem - c] for c in range(rem + 1)
                ],
            )
            c = _draw(rng, cum)
            lens.append(c)
            rem -= c
        lens.append(rem)
        blocks = [self._chain_blocks(c, fresh, rng) for c in lens]
        left_index = {arc[0]: i for i, arc in enumerate(shape.arcs)}
        partner = shape.partner()
        tokens = self._seq_tokens(m0, fresh, rng)
        for v in range(1, shape.n + 1):
            if partner[v] > v:
                tokens.extend(blocks[left_index[v]][0])
            else:
                tokens.extend(blocks[left_index[partner[v]]][1])
        return tokens

    def _chain_blocks(self, c: int, fresh, rng: random.Random):
        """Sample one stem chain of ``c`` vertices as (opens, closes) tokens.

        A chain is a run of stacks inflating a single shape arc.  The
        outermost stack's trailing filler sits after the whole chain, the
        innermost stack's leading filler directly wraps the interior, and
        each junction carries a not-both-empty filler pair keeping the
        stacks maximal.
        """
        r = self.cls_.min_stack
        cum = self._cum_for(
            ("stack0", c),
            lambda: [self._pg[c - 2 * s] for s in range(r, c // 2 + 1)],
        )
        stacks = [r + _draw(rng, cum)]
        rem = c - 2 * stacks[0]
        cum = self._cum_for(
            ("numer", rem),
            lambda rem=rem: [self._p2[m] * self._geo[rem - m] for m in range(rem + 1)],
        )
        m = _draw(rng, cum)
        fl, fr = self._pair_tokens(m, fresh, rng)
        rem -= m
        juncs = []
        while rem:
            cum = self._cum_for(
                ("stack", rem),
                lambda rem=rem: [
                    self._pmg[rem - 2 * s] for s in range(r, rem // 2 + 1)
                ],
            )
            s = r + _draw(rng, cum)
            rem -= 2 * s
            cum = self._cum_for(
                ("junc", rem),
                lambda rem=rem: [
                    self._p2m1[t] * self._geo[rem - t] for t in range(rem + 1)
                ],
            )
            t = _draw(rng, cum)
            juncs.append(self._pair_tokens(t, fresh, rng))
            stacks.append(s)
            rem -= t
        keylists = [[fresh() for _ in range(s)] for s in stacks]
        opens: list[int] = []
        for t, keys in enumerate(keylists):
            opens.extend(keys)
            if t < len(keylists) - 1:
                opens.extend(juncs[t][0])
        opens.extend(fl)
        closes: list[int] = []
        for t in range(len(keylists) - 1, -1, -1):
            closes.extend(-k for k in reversed(keylists[t]))
            closes.extend(juncs[t - 1][1] if t else fr)
        return opens, closes

    def _pair_tokens(self, m: int, fresh, rng: random.Random):
        cum = self._cum_for(
            ("split", m),
            lambda: [self._d0[a] * self._d0[m - a] for a in range(m + 1)],
        )
        a = _draw(rng, cum)
        return self._seq_tokens(a, fresh, rng), self._seq_tokens(m - a, fresh, rng)

    # -- secondary emission ------------------------------------------------

    def _seq_tokens(self, m: int, fresh, rng: random.Random) -> list[int]:
        out: list[int] = []
        while m:
            cum = self._cum_for(
                ("seq", m),
                lambda m=m: [self._d0[m - 1]]
                + [self._comp[t] * self._d0[m - t] for t in range(2, m + 1)],
            )
            idx = _draw(rng, cum)
            if idx == 0:
                out.append(0)
                m -= 1
            else:
                t = idx + 1
                self._comp_tokens(t, out, fresh, rng)
                m -= t
        return out

    def _comp_tokens(self, t: int, out, fresh, rng: random.Random) -> None:
        r = self.cls_.min_stack
        cum = self._cum_for(
            ("comp", t),
            lambda: [self._body[t - 2 * s] for s in range(r, t // 2 + 1)],
        )
        s = r + _draw(rng, cum)
        keys = [fresh() for _ in range(s)]
        out.extend(keys)
        self._body_tokens(t - 2 * s, out, fresh, rng)
        out.extend(-k for k in reversed(keys))

    def _body_tokens(self, u: int, out, fresh, rng: random.Random) -> None:
        cum = self._cum_for(
            ("body", u),
            lambda: [
                self._hp[u],
                self._bl[u],
                self._bl[u],
                self._inter[u],
                self._multi[u],
            ],
        )
        branch = _draw(rng, cum)
        if branch == 0:
            out.extend([0] * u)
        elif branch in (1, 2):
            a = 1 + _draw(
                rng,
                self._cum_for(
                    ("gapc", u),
                    lambda: [self._comp[u - a] for a in range(1, u + 1)],
                ),
            )
            if branch == 1:
                out.extend([0] * a)
                self._comp_tokens(u - a, out, fresh, rng)
            else:
                self._comp_tokens(u - a, out, fresh, rng)
                out.extend([0] * a)
        elif branch == 3:
            a = 1 + _draw(
                rng,
                self._cum_for(
                    ("gap2", u),
                    lambda: [self._bl[u - a] for a in range(1, u + 1)],
                ),
            )
            v = u - a
            b = 1 + _draw(
                rng,
                self._cum_for(
                    ("gapc", v),
                    lambda v=v: [self._comp[v - b] for b in range(1, v + 1)],
                ),
            )
            out.extend([0] * a)
            self._comp_tokens(v - b, out, fresh, rng)
            out.extend([0] * b)
        else:
            a = _draw(
                rng,
                self._cum_for(
                    ("mgap", u),
                    lambda: [self._cgtl[u - a] for a in range(u + 1)],
                ),
            )
            out.extend([0] * a)
            v = u - a
            t = _draw(
                rng,
                self._cum_for(
                    ("munit", v),
                    lambda v=v: [
                        self._comp[t] * self._gtl[v - t] for t in range(v + 1)
                    ],
                ),
            )
            self._comp_tokens(t, out, fresh, rng)
            v -= t
            b = _draw(
                rng,
                self._cum_for(
                    ("ugap", v),
                    lambda v=v: [self._tl[v - b] for b in range(v + 1)],
                ),
            )
            out.extend([0] * b)
            self._tail_tokens(v - b, out, fresh, rng)

    def _tail_tokens(self, v: int, out, fresh, rng: random.Random) -> None:
        # one or more further (component, gap) units of a multiloop
        while v:
            t = _draw(
                rng,
                self._cum_for(
                    ("tunit", v),
                    lambda v=v: [
                        self._comp[t] * self._gdt[v - t] for t in range(v + 1)
                    ],
                ),
            )
            self._comp_tokens(t, out, fresh, rng)
            v -= t
            b = _draw(
                rng,
                self._cum_for(
                    ("tgap", v),
                    lambda v=v: [
                        (1 if b == v else 0) + self._tl[v - b] for b in range(v + 1)
                    ],
                ),
            )
            out.extend([0] * b)
            v -= b


def sample_enumerative(
    cls_: StructureClass, genus: int, n: int, draws: int, seed=None
) -> list[Diagram]:
    """Draw uniformly by materializing the whole family first.

    Only sensible at small lengths; the grammar sampler covers the rest.
    """
    pool = list(
        enumerate_diagrams(n, cls_.min_arc, cls_.min_stack, genus=genus)
    )
    if not pool:
        raise ValueError(f"no structures of length {n} at genus {genus}")
    rng = random.Random(seed)
    return [pool[rng.randrange(len(pool))] for _ in range(draws)]


def empirical_stats(samples: list[Diagram]) -> dict:
    """Census-style aggregate over sampled structures.

    Returns draw count, total arcs, arc histogram, loop tallies and
    crossing-block class tallies in the same layout the brute-force
    census uses, so the two are directly comparable.
    """
    if not samples:
        raise ValueError("need at least one sample")
    report = {
        "draws": len(samples),
        "arcs": 0,
        "arc_hist": {},
        "loops": {kind: 0 for kind in LOOP_KINDS},
        "pk": {label: 0 for label in PK_LABELS},
    }
    hist = report["arc_hist"]
    for d in samples:
        k = len(d.arcs)
        report["arcs"] += k
        hist[k] = hist.get(k, 0) + 1
        for kind, c in loop_counts(d).items():
            report["loops"][kind] += c
        for indices in crossing_components(d):
            label, _ = classify_component(d, indices)
            if label != "secondary":
                report["pk"][label] += 1
    return report


def chi_square(observed, weights) -> tuple[float, int]:
    """Pearson statistic of observed counts against exact bin weights.

    ``weights`` holds the unnormalized exact frequency of every bin; bins
    absent from ``observed`` count as zero draws, and an observed bin
    outside the support raises.  Returns ``(stat, dof)``.
    """
    total = sum(weights.values())
    draws = sum(observed.values())
    if total <= 0 or draws <= 0:
        raise ValueError("need positive weights and at least one draw")
    support = {key for key, w in weights.items() if w > 0}
    stray = set(observed) - support
    if stray and any(observed[key] for key in stray):
        raise ValueError(f"observed bins outside the support: {sorted(stray)!r}")
    stat = 0.0
    for key in support:
        expected = draws * weights[key] / total
        diff = observed.get(key, 0) - expected
        stat += diff * diff / expected
    return stat, len(support) - 1


def chi_square_pvalue(stat: float, dof: int) -> float:
    """Upper tail probability of the chi-square distribution."""
    if dof <= 0:
        raise ValueError("dof must be positive")
    with mp.workdps(30):
        half = mp.mpf(dof) / 2
        return float(mp.gammainc(half, a=mp.mpf(stat) / 2, regularized=True))
