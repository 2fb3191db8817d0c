"""Box diagrams: construction, partial order, radii, integrands, enumeration.

A box diagram has four external vertices Z1, Z2, W1, W2 and n internal
vertices T1..Tn.  The one-loop diagram joins a single internal vertex to
all four externals; larger diagrams are built by attaching "slingshots":
the external vertex at the chosen site becomes internal (keeping its
edges and order relations), a fresh external takes over the site label
with one new solid edge (the handle), two new solid edges run to the
two site-adjacent externals (the arms) and one new dashed edge joins
those adjacent externals (the string).  Each attachment also adds order
relations, so the strict partial order prescribes how the integration
cycles must be nested.

Solid edges contribute 1/N(Yi - Yj) factors to the diagram's rational
integrand, dashed edges contribute N(Yi - Yj); both edge sets are
multisets.  Internal labels are interchangeable: diagrams differing by a
permutation of T1..Tn are identified, externals stay fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

__all__ = [
    "EXTERNALS",
    "ADJACENT",
    "BoxDiagram",
    "RadiiAssignment",
    "IntegrandExpr",
    "one_loop",
    "attach_slingshot",
    "from_history",
    "assign_radii",
    "integrand",
    "canonical_key",
    "enumerate_diagrams",
    "to_dot",
]

EXTERNALS = ("Z1", "Z2", "W1", "W2")

# The two externals receiving the slingshot arms (and the dashed string)
# when attaching at a given site; fixed so that attaching at W2 or Z2
# reproduces the two-loop ladder integrand factor list.
ADJACENT = {
    "Z1": ("Z2", "W2"),
    "Z2": ("Z1", "W1"),
    "W1": ("Z2", "W2"),
    "W2": ("Z1", "W1"),
}

# Order relations added by an attachment, with "T" the fresh internal
# vertex: site Z1 gives W2 < T < Z1, Z2; site Z2 gives W1 < T < Z1, Z2;
# site W1 gives W1, W2 < T < Z2; site W2 gives W1, W2 < T < Z1.
_NEW_RELATIONS = {
    "Z1": (("W2", "T"), ("T", "Z1"), ("T", "Z2")),
    "Z2": (("W1", "T"), ("T", "Z1"), ("T", "Z2")),
    "W1": (("W1", "T"), ("W2", "T"), ("T", "Z2")),
    "W2": (("W1", "T"), ("W2", "T"), ("T", "Z1")),
}


def _transitive_closure(pairs: frozenset[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    rel = set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return frozenset(rel)


@dataclass(frozen=True)
class BoxDiagram:
    """An n-loop box diagram with its construction history.

    `solid` and `dashed` are edge multisets stored as sorted tuples of
    sorted vertex pairs; `order` is the transitively closed strict
    partial order; `history` records the slingshot attachment sites in
    construction order (empty for the one-loop diagram).
    """

    n: int
    solid: tuple[tuple[str, str], ...]
    dashed: tuple[tuple[str, str], ...]
    order: frozenset[tuple[str, str]]
    history: tuple[str, ...] = field(default=())

    @property
    def internals(self) -> tuple[str, ...]:
        return tuple(f"T{i}" for i in range(1, self.n + 1))

    @property
    def vertices(self) -> tuple[str, ...]:
        return EXTERNALS + self.internals

    def degree(self, v: str) -> int:
        """Solid degree minus dashed degree at vertex v."""
        s = sum(1 for e in self.solid for x in e if x == v)
        d = sum(1 for e in self.dashed for x in e if x == v)
        return s - d

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on failure."""
        if len(self.solid) != 3 * self.n + 1:
            raise ValueError(f"expected {3*self.n+1} solid edges, got {len(self.solid)}")
        if len(self.dashed) != self.n - 1:
            raise ValueError(f"expected {self.n-1} dashed edges, got {len(self.dashed)}")
        for v in self.internals:
            if self.degree(v) != 4:
                raise ValueError(f"internal vertex {v} has net degree {self.degree(v)} != 4")
        for v in EXTERNALS:
            if self.degree(v) != 1:
                raise ValueError(f"external vertex {v} has net degree {self.degree(v)} != 1")
        for (a, b) in self.order:
            if a == b:
                raise ValueError(f"order is not irreflexive at {a}")
            if (b, a) in self.order:
                raise ValueError(f"order contains a 2-cycle {a} <-> {b}")
        if _transitive_closure(self.order) != self.order:
            raise ValueError("order is not transitively closed")


def _edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def one_loop() -> BoxDiagram:
    """The one-loop diagram: T1 joined to all four externals, W1, W2 < T1 < Z1, Z2."""
    solid = tuple(sorted(_edge("T1", v) for v in EXTERNALS))
    order = _transitive_closure(frozenset({
        ("W1", "T1"), ("W2", "T1"), ("T1", "Z1"), ("T1", "Z2"),
    }))
    return BoxDiagram(n=1, solid=solid, dashed=(), order=order, history=())


def attach_slingshot(d: BoxDiagram, site: str) -> BoxDiagram:
    """Attach a slingshot at one of the four external sites.

    The external at `site` becomes the internal vertex T_{n+1}, keeping
    its incident edges and order relations; the fresh external takes the
    site label.
    """
    if site not in EXTERNALS:
        raise ValueError(f"site must be one of {EXTERNALS}, got {site!r}")
    t_new = f"T{d.n + 1}"

    def rename(v: str) -> str:
        return t_new if v == site else v

    solid = [_edge(rename(a), rename(b)) for (a, b) in d.solid]
    dashed = [_edge(rename(a), rename(b)) for (a, b) in d.dashed]
    order = {(rename(a), rename(b)) for (a, b) in d.order}

    adj1, adj2 = ADJACENT[site]
    solid.append(_edge(site, t_new))          # handle to the fresh external
    solid.append(_edge(t_new, adj1))          # arms
    solid.append(_edge(t_new, adj2))
    dashed.append(_edge(adj1, adj2))          # string

    for (a, b) in _NEW_RELATIONS[site]:
        order.add((t_new if a == "T" else a, t_new if b == "T" else b))

    return BoxDiagram(
        n=d.n + 1,
        solid=tuple(sorted(solid)),
        dashed=tuple(sorted(dashed)),
        order=_transitive_closure(frozenset(order)),
        history=d.history + (site,),
    )


def from_history(history: tuple[str, ...]) -> BoxDiagram:
    """Rebuild a diagram from its attachment-site sequence."""
    d = one_loop()
    for site in history:
        d = attach_slingshot(d, site)
    return d


@dataclass(frozen=True)
class RadiiAssignment:
    """Cycle radii for the internal vertices plus the external bounds.

    Externals Z_i live outside radius r_max_i = max{r_k : T_k < Z_i};
    externals W_i live inside r_min_i = min{r_k : W_i < T_k}.
    """

    r: dict[str, Fraction]
    r_max_1: Fraction
    r_max_2: Fraction
    r_min_1: Fraction
    r_min_2: Fraction


def assign_radii(d: BoxDiagram) -> RadiiAssignment:
    """Strictly order-compatible radii by longest-chain leveling.

    Internal vertex T gets level = longest internal chain strictly below
    it, and radius (level+1)/(depth+2), an exact rational in (0, 1); the
    strict inequalities r_i < r_j for T_i < T_j then hold by
    construction and are re-validated.
    """
    internals = d.internals
    below = {t: {s for s in internals if (s, t) in d.order} for t in internals}

    levels: dict[str, int] = {}

    def level(t: str) -> int:
        if t not in levels:
            levels[t] = 1 + max((level(s) for s in below[t]), default=-1)
        return levels[t]

    for t in internals:
        if t in below[t]:
            raise ValueError(f"order has a cycle through {t}")
        level(t)
    depth = max(levels.values())
    r = {t: Fraction(levels[t] + 1, depth + 2) for t in internals}

    for i in internals:
        for j in internals:
            if (i, j) in d.order and not r[i] < r[j]:
                raise ValueError(f"radii violate {i} < {j}")

    def r_max(z: str) -> Fraction:
        cand = [r[t] for t in internals if (t, z) in d.order]
        if not cand:
            raise ValueError(f"no internal vertex below {z}")
        return max(cand)

    def r_min(w: str) -> Fraction:
        cand = [r[t] for t in internals if (w, t) in d.order]
        if not cand:
            raise ValueError(f"no internal vertex above {w}")
        return min(cand)

    return RadiiAssignment(
        r=r,
        r_max_1=r_max("Z1"), r_max_2=r_max("Z2"),
        r_min_1=r_min("W1"), r_min_2=r_min("W2"),
    )


@dataclass(frozen=True)
class IntegrandExpr:
    """Factor lists of the diagram's rational integrand.

    Each entry (a, b) denotes the factor N(Ya - Yb); denominator factors
    come from solid edges, numerator factors from dashed edges.
    """

    numerator: tuple[tuple[str, str], ...]
    denominator: tuple[tuple[str, str], ...]


def integrand(d: BoxDiagram) -> IntegrandExpr:
    return IntegrandExpr(numerator=d.dashed, denominator=d.solid)


def canonical_key(d: BoxDiagram):
    """Label-permutation-invariant key; equal keys iff isomorphic diagrams.

    Minimizes the (solid, dashed, order) encoding over all permutations
    of the internal labels, externals fixed.  Brute force, so n <= 8.
    """
    if d.n > 8:
        raise ValueError("canonical_key supports at most 8 internal vertices")
    internals = d.internals
    best = None
    for perm in permutations(internals):
        mapping = dict(zip(internals, perm))

        def rn(v: str) -> str:
            return mapping.get(v, v)

        key = (
            d.n,
            tuple(sorted(_edge(rn(a), rn(b)) for (a, b) in d.solid)),
            tuple(sorted(_edge(rn(a), rn(b)) for (a, b) in d.dashed)),
            tuple(sorted((rn(a), rn(b)) for (a, b) in d.order)),
        )
        if best is None or key < best:
            best = key
    return best


def enumerate_diagrams(n: int) -> list[BoxDiagram]:
    """All distinct n-loop diagrams, one representative per isomorphism class.

    Breadth-first over the four attachment sites with canonical-key
    deduplication; output deterministically sorted by key.
    """
    if n < 1:
        raise ValueError("loop count must be >= 1")
    if n > 6:
        raise ValueError("enumeration supports at most 6 loops")
    current = {canonical_key(one_loop()): one_loop()}
    for _ in range(n - 1):
        nxt: dict[object, BoxDiagram] = {}
        for d in current.values():
            for site in EXTERNALS:
                child = attach_slingshot(d, site)
                key = canonical_key(child)
                if key not in nxt:
                    nxt[key] = child
        current = nxt
    return [current[k] for k in sorted(current)]


def to_dot(d: BoxDiagram, name: str = "boxdiag") -> str:
    """DOT rendering: boxed externals, filled internals, dashed strings."""
    lines = [f"graph {name} {{"]
    for v in EXTERNALS:
        lines.append(f'  "{v}" [shape=box];')
    for v in d.internals:
        lines.append(f'  "{v}" [shape=circle, style=filled];')
    for (a, b) in d.solid:
        lines.append(f'  "{a}" -- "{b}";')
    for (a, b) in d.dashed:
        lines.append(f'  "{a}" -- "{b}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
