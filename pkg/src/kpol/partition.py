"""Point-set partitions with box regions and conservative crossing tests.

The point sets met in k-POL are Cartesian products or subsets of them.  A
product set is cut into a quantile grid of blocks; an arbitrary set is cut by
median splits along alternating axes, which gives the same grid when the set
is a product.  Every region is the bounding box of its points, so a surface
whose interval enclosure over a box excludes zero cannot meet those points.
"""

import math
import random
from dataclasses import dataclass
from itertools import product

from kpol.algebra.interval import interval_eval_bounds
from kpol.algebra.poly import MultiPoly, monomials
from kpol.exceptions import EmptyAxis, InvalidRange


@dataclass(frozen=True)
class Cell:
    """A region (box) and the indices of the points it owns."""

    box: tuple
    members: tuple

    def __len__(self):
        return len(self.members)


@dataclass
class PartitionScheme:
    """One level of cells plus leftover points (always empty for grids)."""

    r: int
    cells: list
    leftover: tuple = ()

    def point_count(self):
        return sum(len(c) for c in self.cells) + len(self.leftover)


def bounding_box(points, members):
    t = len(points[members[0]])
    return tuple(
        (min(points[i][a] for i in members), max(points[i][a] for i in members)) for a in range(t)
    )


def partition_points(points, members, r):
    """Split ``members`` (indices into ``points``) into at most ``r`` cells by median cuts.

    Axes are cut cyclically; a part is cut until the number of parts reaches
    ``r`` or every part is a single point.  Each cell has at most
    ``ceil(N / 2**floor(log2 r))`` points.
    """
    if r < 2:
        raise InvalidRange("r must be at least 2")
    members = list(members)
    if not members:
        return PartitionScheme(r, [])
    t = len(points[members[0]])
    parts = [members]
    depth = 0
    while len(parts) * 2 <= r:
        axis = depth % t
        nxt = []
        for part in parts:
            if len(part) < 2:
                nxt.append(part)
                continue
            part = sorted(part, key=lambda i: (points[i][axis], points[i]))
            half = len(part) // 2
            nxt.extend((part[:half], part[half:]))
        if len(nxt) == len(parts):
            break
        parts = nxt
        depth += 1
    cells = [Cell(bounding_box(points, p), tuple(p)) for p in parts]
    return PartitionScheme(r, cells)


def _blocks(n, g):
    return [(start, min(start + g, n)) for start in range(0, n, g)]


@dataclass
class BlockGrid:
    """Quantile product grid: per axis, blocks of ``g`` consecutive distinct values.

    ``blocks[a]`` lists ``(start, end)`` index ranges into ``axes[a]``; cells
    are addressed by a tuple of block numbers, one per axis.
    """

    t: int
    g: int
    axes: tuple
    blocks: tuple

    @property
    def shape(self):
        return tuple(len(b) for b in self.blocks)

    def n_cells(self):
        return math.prod(self.shape)

    def cell_ids(self):
        return list(product(*(range(len(b)) for b in self.blocks)))

    def box(self, cell):
        return tuple(
            (self.axes[a][self.blocks[a][j][0]], self.axes[a][self.blocks[a][j][1] - 1])
            for a, j in enumerate(cell)
        )

    def span_box(self, lo_cell, hi_cell):
        """Box spanning the block ranges ``lo_cell[a] .. hi_cell[a] - 1`` on each axis."""
        return tuple(
            (self.axes[a][self.blocks[a][lo][0]], self.axes[a][self.blocks[a][hi - 1][1] - 1])
            for a, (lo, hi) in enumerate(zip(lo_cell, hi_cell))
        )

    def ranges(self, cell):
        return tuple(self.blocks[a][j] for a, j in enumerate(cell))

    def cell_points(self, cell):
        return list(product(*(self.axes[a][s:e] for a, (s, e) in enumerate(self.ranges(cell)))))

    def cell_size(self, cell):
        return math.prod(e - s for s, e in self.ranges(cell))

    def block_of(self, axis, index):
        return index // self.g


def build_grid(axis_sets, g):
    """Cut each sorted distinct axis into blocks of ``g`` values (the last may be shorter)."""
    if g < 1:
        raise InvalidRange("g must be at least 1")
    axes = tuple(tuple(a) for a in axis_sets)
    if not axes or any(not a for a in axes):
        raise EmptyAxis("every axis needs at least one value")
    blocks = tuple(tuple(_blocks(len(a), g)) for a in axes)
    return BlockGrid(len(axes), g, axes, blocks)


def compile_terms(P):
    """Term list of ``P`` with integral coefficients as plain ints (faster enclosures)."""
    return tuple((e, int(c) if c.denominator == 1 else c) for e, c in P._compile())


def box_may_vanish(terms, box, refine=1):
    """False only if the enclosure of the compiled polynomial over ``box`` excludes 0."""
    lo, hi = interval_eval_bounds(terms, box)
    if lo > 0 or hi < 0:
        return False
    if refine <= 0:
        return True
    axis = max(range(len(box)), key=lambda a: box[a][1] - box[a][0])
    a, b = box[axis]
    if a == b:
        return True
    mid = (a + b) / 2
    left = box[:axis] + ((a, mid),) + box[axis + 1:]
    right = box[:axis] + ((mid, b),) + box[axis + 1:]
    return box_may_vanish(terms, left, refine - 1) or box_may_vanish(terms, right, refine - 1)


def box_sign(terms, box):
    """Constant sign of the polynomial over ``box`` when the enclosure proves it, else None."""
    lo, hi = interval_eval_bounds(terms, box)
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    return None


def crossed_cells(surface, grid, refine=1, counter=None):
    """Cells of ``grid`` whose box the zero set of ``surface`` may meet.

    Block ranges are halved recursively; a range whose spanning box provably
    avoids the zero set is dropped whole.  Enclosures shrink with the box, so
    the result equals testing every cell on its own.
    """
    terms = compile_terms(surface)
    out = []
    shape = grid.shape
    # per axis: smallest and largest value of each block, ints where integral
    firsts, lasts = [], []
    for a in range(grid.t):
        vals = [int(v) if v.denominator == 1 else v for v in grid.axes[a]]
        firsts.append([vals[s] for s, _ in grid.blocks[a]])
        lasts.append([vals[e - 1] for _, e in grid.blocks[a]])

    def visit(lo, hi):
        box = tuple((firsts[a][l], lasts[a][h - 1]) for a, (l, h) in enumerate(zip(lo, hi)))
        if counter is not None:
            counter.sign()
        single = all(h - l == 1 for l, h in zip(lo, hi))
        if single:
            if box_may_vanish(terms, box, refine):
                out.append(tuple(lo))
            return
        if box_sign(terms, box) is not None:
            return
        axis = max(range(len(lo)), key=lambda a: hi[a] - lo[a])
        mid = (lo[axis] + hi[axis]) // 2
        visit(lo, hi[:axis] + (mid,) + hi[axis + 1:])
        visit(lo[:axis] + (mid,) + lo[axis + 1:], hi)

    visit((0,) * grid.t, shape)
    out.sort()
    return out


def random_surface(t, degree, rng, through, coeff=9):
    """Random polynomial of total degree ``degree`` through the point ``through``."""
    terms = {}
    for e in monomials(t, degree):
        if any(e):
            c = rng.randint(-coeff, coeff)
            if c:
                terms[e] = c
    if not any(sum(e) == degree for e in terms):
        e = [0] * t
        e[rng.randrange(t)] = degree
        terms[tuple(e)] = rng.choice([-1, 1]) * rng.randint(1, coeff)
    P = MultiPoly(t, terms)
    return P - P.evaluate(through)


def fit_slope(xs, ys):
    """Least-squares slope of ``log ys`` against ``log xs``."""
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    num = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    den = sum((a - mx) ** 2 for a in lx)
    return num / den


@dataclass
class CrossingReport:
    t: int
    degree: int
    grid_sizes: list
    r_values: list
    max_counts: list
    mean_counts: list
    slope_max: float
    slope_mean: float

    @property
    def slope(self):
        return self.slope_mean


def measure_crossing_exponent(t, degree, grid_sizes, trials, seed=0, block=2, span=10**6):
    """Crossed-cell counts of random surfaces on ``m^t``-cell grids and their log-log slope.

    Each trial draws a product point set with ``m * block`` distinct integer
    values per axis and a random surface through a random point of the
    bounding box.
    """
    grid_sizes = list(grid_sizes)
    if trials < 1:
        raise InvalidRange("trials must be at least 1")
    if any(b <= a for a, b in zip(grid_sizes, grid_sizes[1:])):
        raise InvalidRange("grid_sizes must increase")
    rng = random.Random(seed)
    max_counts, mean_counts, r_values = [], [], []
    for m in grid_sizes:
        counts = []
        for _ in range(trials):
            axes = [sorted(rng.sample(range(-span, span), m * block)) for _ in range(t)]
            grid = build_grid(axes, block)
            through = [rng.randint(ax[0], ax[-1]) for ax in axes]
            surface = random_surface(t, degree, rng, through)
            counts.append(len(crossed_cells(surface, grid, refine=0)))
        r_values.append(m**t)
        max_counts.append(max(counts))
        mean_counts.append(sum(counts) / len(counts))
    return CrossingReport(
        t,
        degree,
        grid_sizes,
        r_values,
        max_counts,
        mean_counts,
        fit_slope(r_values, [max(c, 1) for c in max_counts]),
        fit_slope(r_values, [max(c, 1e-9) for c in mean_counts]),
    )
