"""Grid maps and static feasibility of disk translations.

Cell (i, j) covers the closed unit square [i, i+1] x [j, j+1]; its center is
(i + 0.5, j + 0.5). Everything outside the map bounds counts as blocked. A disk of
radius r occupies a cell when the distance from its center to the cell's closed
square is strictly below r, so a disk exactly tangent to a square does not occupy it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .geometry import Point2


class CellCoord(NamedTuple):
    i: int
    j: int


def cell_of_point(p: Point2) -> CellCoord:
    return CellCoord(math.floor(p.x), math.floor(p.y))


def cell_center(cell: CellCoord) -> Point2:
    return Point2(cell.i + 0.5, cell.j + 0.5)


@dataclass(frozen=True)
class GridMap:
    """Rectangular map of unit cells; blocked holds the statically forbidden cells."""

    width: int
    height: int
    blocked: frozenset[CellCoord] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"map must be positive-sized, got {self.width}x{self.height}")

    def in_bounds(self, cell: CellCoord) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def is_blocked(self, cell: CellCoord) -> bool:
        """Out-of-bounds cells are blocked."""
        i, j = cell
        if not (0 <= i < self.width and 0 <= j < self.height):
            return True
        return (i, j) in self.blocked

    def is_free(self, cell: CellCoord) -> bool:
        return not self.is_blocked(cell)

    @classmethod
    def from_rows(cls, rows: Iterable[str]) -> "GridMap":
        """Build from row strings, rows[j][i] describing cell (i, j): '.' free, '#' blocked."""
        rows = list(rows)
        if not rows:
            raise ValueError("no rows")
        width = len(rows[0])
        blocked = set()
        for j, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {j} has length {len(row)}, expected {width}")
            for i, ch in enumerate(row):
                if ch == "#":
                    blocked.add(CellCoord(i, j))
                elif ch != ".":
                    raise ValueError(f"unknown map character {ch!r} at ({i}, {j})")
        return cls(width, len(rows), frozenset(blocked))

    def to_rows(self) -> list[str]:
        return [
            "".join("#" if (i, j) in self.blocked else "." for i in range(self.width))
            for j in range(self.height)
        ]


# Upper bound on a unit cell's center-to-corner distance sqrt(2)/2, with slack so
# center-distance prefilters stay conservative under float rounding.
_NEAR_PAD = 0.7072


def _point_square_distance(x: float, y: float, i: int, j: int) -> float:
    """Distance from a point to the closed unit square of cell (i, j)."""
    dx = i - x if x < i else (x - (i + 1) if x > i + 1 else 0.0)
    dy = j - y if y < j else (y - (j + 1) if y > j + 1 else 0.0)
    return math.hypot(dx, dy)


def _point_box_distance(px: float, py: float, x0: float, y0: float, x1: float, y1: float) -> float:
    dx = x0 - px if px < x0 else (px - x1 if px > x1 else 0.0)
    dy = y0 - py if py < y0 else (py - y1 if py > y1 else 0.0)
    return math.hypot(dx, dy)


def _segment_box_distance(ax, ay, bx, by, x0, y0, x1, y1) -> float:
    """Exact distance from the non-degenerate segment [(ax,ay),(bx,by)] to a closed box.

    A Liang-Barsky clip detects intersection (distance zero). Disjoint convex shapes
    attain their minimum distance at a vertex of one of them, so the remaining cases
    reduce to segment endpoints against the box and box corners against the segment.
    """
    dx = bx - ax
    dy = by - ay
    len2 = dx * dx + dy * dy
    if len2 <= 0.0:
        # squared extents can underflow to zero for subnormal segments
        return _point_box_distance(ax, ay, x0, y0, x1, y1)
    t_lo = 0.0
    t_hi = 1.0
    separated = False
    for p, q in ((-dx, ax - x0), (dx, x1 - ax), (-dy, ay - y0), (dy, y1 - ay)):
        if p == 0.0:
            if q < 0.0:
                separated = True
                break
        else:
            t = q / p
            if p < 0.0:
                if t > t_hi:
                    separated = True
                    break
                if t > t_lo:
                    t_lo = t
            else:
                if t < t_lo:
                    separated = True
                    break
                if t < t_hi:
                    t_hi = t
    if not separated and t_lo <= t_hi:
        return 0.0
    best = min(
        _point_box_distance(ax, ay, x0, y0, x1, y1),
        _point_box_distance(bx, by, x0, y0, x1, y1),
    )
    for cx, cy in ((x0, y0), (x1, y0), (x1, y1), (x0, y1)):
        t = ((cx - ax) * dx + (cy - ay) * dy) / len2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        d = math.hypot(cx - (ax + t * dx), cy - (ay + t * dy))
        if d < best:
            best = d
    return best


def segment_cell_distance(a: Point2, b: Point2, cell: CellCoord) -> float:
    """Exact distance from segment [a, b] to the closed unit square of a cell."""
    i, j = cell
    if a.x == b.x and a.y == b.y:
        return _point_square_distance(a.x, a.y, i, j)
    return _segment_box_distance(a.x, a.y, b.x, b.y, float(i), float(j), i + 1.0, j + 1.0)


def cells_overlapping_disk(center: Point2, radius: float) -> set[CellCoord]:
    """Cells whose closed square intersects the open disk (distance strictly < radius)."""
    if radius <= 0.0:
        return set()
    out = set()
    r2 = radius * radius
    i_lo = math.floor(center.x - radius)
    i_hi = math.floor(center.x + radius)
    j_lo = math.floor(center.y - radius)
    j_hi = math.floor(center.y + radius)
    for i in range(i_lo, i_hi + 1):
        x = center.x
        dx = i - x if x < i else (x - (i + 1) if x > i + 1 else 0.0)
        for j in range(j_lo, j_hi + 1):
            y = center.y
            dy = j - y if y < j else (y - (j + 1) if y > j + 1 else 0.0)
            if dx * dx + dy * dy < r2:
                out.add(CellCoord(i, j))
    return out


def cells_swept_by_move(a: Point2, b: Point2, radius: float) -> set[CellCoord]:
    """Cells whose closed square intersects the open capsule swept by the disk from a to b."""
    if a.x == b.x and a.y == b.y:
        return cells_overlapping_disk(a, radius)
    if radius <= 0.0:
        return set()
    ax, ay, bx, by = a.x, a.y, b.x, b.y
    dx = bx - ax
    dy = by - ay
    len2 = dx * dx + dy * dy
    if len2 <= 0.0:
        return cells_overlapping_disk(a, radius)
    near = radius + _NEAR_PAD
    accept = radius - 1e-9
    out = set()
    i_lo = math.floor(min(ax, bx) - radius)
    i_hi = math.floor(max(ax, bx) + radius)
    j_lo = math.floor(min(ay, by) - radius)
    j_hi = math.floor(max(ay, by) + radius)
    for i in range(i_lo, i_hi + 1):
        cx = i + 0.5
        for j in range(j_lo, j_hi + 1):
            cy = j + 0.5
            # the cell-center distance brackets the square distance within half a
            # diagonal, so only a thin borderline band needs the exact computation
            t = ((cx - ax) * dx + (cy - ay) * dy) / len2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            d = math.hypot(cx - (ax + t * dx), cy - (ay + t * dy))
            if d >= near:
                continue
            if d < accept or _segment_box_distance(ax, ay, bx, by, float(i), float(j), i + 1.0, j + 1.0) < radius:
                out.add(CellCoord(i, j))
    return out


def cells_near_move(a: Point2, b: Point2, radius: float) -> tuple[CellCoord, ...]:
    """Cells whose center lies within radius plus half a cell diagonal of segment [a, b].

    A cheap superset of cells_swept_by_move in row-major order, meant for spatial
    index queries where over-approximation is sound.
    """
    ax, ay, bx, by = a.x, a.y, b.x, b.y
    dx = bx - ax
    dy = by - ay
    len2 = dx * dx + dy * dy
    near = radius + _NEAR_PAD
    i_lo = math.floor(min(ax, bx) - near)
    i_hi = math.floor(max(ax, bx) + near)
    out = []
    for i in range(i_lo, i_hi + 1):
        cx = i + 0.5
        # clip the segment to the x-band that can reach this column of centers,
        # then scan only the rows around the clipped piece
        if dx != 0.0:
            ta = (cx - near - ax) / dx
            tb = (cx + near - ax) / dx
            if ta > tb:
                ta, tb = tb, ta
            if ta < 0.0:
                ta = 0.0
            if tb > 1.0:
                tb = 1.0
            if ta > tb:
                continue
        else:
            if abs(cx - ax) >= near:
                continue
            ta, tb = 0.0, 1.0
        y_a = ay + ta * dy
        y_b = ay + tb * dy
        if y_a > y_b:
            y_a, y_b = y_b, y_a
        for j in range(math.floor(y_a - near), math.floor(y_b + near) + 1):
            cy = j + 0.5
            if len2 > 0.0:
                t = ((cx - ax) * dx + (cy - ay) * dy) / len2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                d = math.hypot(cx - (ax + t * dx), cy - (ay + t * dy))
            else:
                d = math.hypot(cx - ax, cy - ay)
            if d < near:
                out.append(CellCoord(i, j))
    return tuple(out)


def capsule_blocked(grid: GridMap, a: Point2, b: Point2, radius: float) -> bool:
    """Whether the open capsule swept from a to b overlaps a blocked or out-of-bounds cell.

    Equivalent to testing is_blocked over cells_swept_by_move, but runs in time
    proportional to the blocked cells near the move instead of the swept area: the
    map boundary is an O(1) endpoint check because the capsule's extremes sit at
    its endpoints, and only blocked cells inside the bounding box are measured.
    """
    ax, ay, bx, by = a.x, a.y, b.x, b.y
    if min(ax, bx) < radius or max(ax, bx) > grid.width - radius:
        return True
    if min(ay, by) < radius or max(ay, by) > grid.height - radius:
        return True
    blocked = grid.blocked
    if not blocked:
        return False
    i_lo = math.floor(min(ax, bx) - radius)
    i_hi = math.floor(max(ax, bx) + radius)
    j_lo = math.floor(min(ay, by) - radius)
    j_hi = math.floor(max(ay, by) + radius)
    if (i_hi - i_lo + 1) * (j_hi - j_lo + 1) < len(blocked):
        candidates = [
            (i, j)
            for i in range(i_lo, i_hi + 1)
            for j in range(j_lo, j_hi + 1)
            if (i, j) in blocked
        ]
    else:
        candidates = [(i, j) for (i, j) in blocked if i_lo <= i <= i_hi and j_lo <= j <= j_hi]
    if not candidates:
        return False
    dx = bx - ax
    dy = by - ay
    len2 = dx * dx + dy * dy
    near = radius + _NEAR_PAD
    accept = radius - 1e-9
    for i, j in candidates:
        cx = i + 0.5
        cy = j + 0.5
        if len2 > 0.0:
            t = ((cx - ax) * dx + (cy - ay) * dy) / len2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            d = math.hypot(cx - (ax + t * dx), cy - (ay + t * dy))
        else:
            d = math.hypot(cx - ax, cy - ay)
        if d >= near:
            continue
        if d < accept:
            return True
        if len2 > 0.0:
            if _segment_box_distance(ax, ay, bx, by, float(i), float(j), i + 1.0, j + 1.0) < radius:
                return True
        elif _point_square_distance(ax, ay, i, j) < radius:
            return True
    return False


def move_feasible_static(grid: GridMap, a: Point2, b: Point2, radius: float) -> bool:
    """Whether the swept capsule stays on free in-bounds cells for the whole move."""
    return not capsule_blocked(grid, a, b, radius)
