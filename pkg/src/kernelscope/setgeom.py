"""Rasterized set geometry on parameter-plane rectangles.

Masks are boolean rasters over a ``GridSpec``; a cell belongs to a set iff
its center does.  Connectivity is 4-neighbour everywhere (a conservative
stand-in for open connectivity).  Kernels of mask sequences are estimated by
intersecting the last ``tail_length`` masks and taking the connected
component of the marked point, which matches the true kernel up to one-cell
boundary ambiguity for eventually monotone or convergent sequences.

All measurements are taken relative to the grid window; unbounded sets only
ever enter as their restriction to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import ndimage

from . import _kernels as _k
from .errors import EmptySet, GridMismatch, OutOfGrid


@dataclass(frozen=True)
class GridSpec:
    """Rectangular raster: origin is the lower-left corner, nx*ny cells."""

    origin: complex
    width: float
    height: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("nx and ny must be positive")
        if not (self.width > 0.0 and self.height > 0.0):
            raise ValueError("width and height must be positive")

    @property
    def cell_width(self) -> float:
        return self.width / self.nx

    @property
    def cell_height(self) -> float:
        return self.height / self.ny

    @property
    def cell_diagonal(self) -> float:
        return math.hypot(self.cell_width, self.cell_height)

    def center(self, i: int, j: int) -> complex:
        return complex(self.origin.real + (i + 0.5) * self.cell_width,
                       self.origin.imag + (j + 0.5) * self.cell_height)

    def centers(self) -> np.ndarray:
        """Complex array of shape (ny, nx) holding every cell center."""
        x = self.origin.real + (np.arange(self.nx) + 0.5) * self.cell_width
        y = self.origin.imag + (np.arange(self.ny) + 0.5) * self.cell_height
        return x[None, :] + 1j * y[:, None]

    def cell_of(self, point: complex) -> tuple[int, int]:
        """(i, j) of the cell containing the point; raises OutOfGrid."""
        point = complex(point)
        fx = (point.real - self.origin.real) / self.cell_width
        fy = (point.imag - self.origin.imag) / self.cell_height
        i = int(math.floor(fx))
        j = int(math.floor(fy))
        if not (0 <= i < self.nx and 0 <= j < self.ny):
            raise OutOfGrid(f"point {point} outside grid window")
        return i, j


@dataclass
class GridMask:
    """Boolean raster on a grid; row j = 0 is the origin row."""

    grid: GridSpec
    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=bool)
        if cells.shape != (self.grid.ny, self.grid.nx):
            raise ValueError(
                f"cells shape {cells.shape} does not match grid "
                f"({self.grid.ny}, {self.grid.nx})")
        self.cells = cells

    @property
    def count(self) -> int:
        return int(self.cells.sum())

    @property
    def is_empty(self) -> bool:
        return not self.cells.any()

    def copy(self) -> "GridMask":
        return GridMask(self.grid, self.cells.copy())


@dataclass(frozen=True)
class KernelEstimate:
    """Kernel of a mask sequence w.r.t. a marked point (tail intersection)."""

    mask: GridMask
    marked_point: complex
    tail_length: int
    source_count: int
    has_kernel: bool


def empty_mask(grid: GridSpec) -> GridMask:
    return GridMask(grid, np.zeros((grid.ny, grid.nx), dtype=bool))


def full_mask(grid: GridSpec) -> GridMask:
    return GridMask(grid, np.ones((grid.ny, grid.nx), dtype=bool))


def rasterize(grid: GridSpec, predicate: Callable[[np.ndarray], np.ndarray]) -> GridMask:
    """Mask of cells whose center satisfies the (vectorized) predicate."""
    return GridMask(grid, np.asarray(predicate(grid.centers()), dtype=bool))


def disk_mask(grid: GridSpec, center: complex, radius: float) -> GridMask:
    return rasterize(grid, lambda z: np.abs(z - center) <= radius)


def _require_same_grid(a: GridMask, b: GridMask) -> None:
    if a.grid != b.grid:
        raise GridMismatch(f"masks live on different grids: {a.grid} vs {b.grid}")


def connected_components(mask: GridMask) -> tuple[np.ndarray, int]:
    """4-connectivity labeling; ids 1..count in first-encounter row-major order.

    Row-major means scanning the origin row first, left to right, then
    upward, so the id order is deterministic regardless of how the labeling
    itself is scheduled.
    """
    labels = np.zeros(mask.cells.shape, dtype=np.int32)
    stack = np.empty(mask.cells.size, dtype=np.int64)
    count = _k._label_components(mask.cells, labels, stack)
    return labels, int(count)


def component_of(mask: GridMask, point: complex) -> GridMask:
    """Connected component of the cell containing the point (maybe empty)."""
    i, j = mask.grid.cell_of(point)
    if not mask.cells[j, i]:
        return empty_mask(mask.grid)
    labels, _count = connected_components(mask)
    return GridMask(mask.grid, labels == labels[j, i])


def mask_hausdorff(a: GridMask, b: GridMask, method: str = "auto") -> float:
    """Euclidean Hausdorff distance between the true-cell center sets.

    Two routes compute the same exact quantity: an exact Euclidean distance
    transform ("edt", default) and the brute-force max-min double loop
    ("brute"); tests assert they agree.
    """
    _require_same_grid(a, b)
    if a.is_empty or b.is_empty:
        raise EmptySet("mask_hausdorff needs two nonempty masks")
    if method == "auto":
        method = "edt"
    g = a.grid
    if method == "edt":
        sampling = (g.cell_height, g.cell_width)
        d_to_b = ndimage.distance_transform_edt(~b.cells, sampling=sampling)
        d_to_a = ndimage.distance_transform_edt(~a.cells, sampling=sampling)
        return float(max(d_to_b[a.cells].max(), d_to_a[b.cells].max()))
    if method == "brute":
        centers = g.centers()
        ax = centers.real[a.cells]
        ay = centers.imag[a.cells]
        bx = centers.real[b.cells]
        by = centers.imag[b.cells]
        return float(_k._hausdorff_brute(ax, ay, bx, by))
    raise ValueError(f"unknown method {method!r}")


def symmetric_difference_fraction(a: GridMask, b: GridMask) -> float:
    """|A symmetric-difference B| / max(1, |A union B|) in cell counts."""
    _require_same_grid(a, b)
    sym = int(np.logical_xor(a.cells, b.cells).sum())
    union = int(np.logical_or(a.cells, b.cells).sum())
    return sym / max(1, union)


def kernel_estimate(masks: Sequence[GridMask], marked_point: complex,
                    tail_length: int = 3) -> KernelEstimate:
    """Kernel of a mask sequence: tail intersection, component of the mark.

    The component of the marked point's cell inside the intersection of the
    last ``tail_length`` masks; empty with ``has_kernel=False`` when the
    marked cell itself drops out of the intersection.
    """
    if tail_length < 2:
        raise ValueError("tail_length must be >= 2")
    if len(masks) < tail_length:
        raise ValueError(f"need at least tail_length={tail_length} masks, got {len(masks)}")
    grid = masks[0].grid
    for m in masks[1:]:
        if m.grid != grid:
            raise GridMismatch("kernel_estimate needs masks on one grid")
    inter = np.logical_and.reduce([m.cells for m in masks[-tail_length:]])
    i, j = grid.cell_of(marked_point)
    if not inter[j, i]:
        return KernelEstimate(empty_mask(grid), complex(marked_point),
                              tail_length, len(masks), False)
    comp = component_of(GridMask(grid, inter), marked_point)
    return KernelEstimate(comp, complex(marked_point), tail_length,
                          len(masks), True)


def boundary_cell_count(mask: GridMask) -> int:
    """True cells 4-adjacent to a false cell or to the window edge."""
    c = mask.cells
    padded = np.zeros((c.shape[0] + 2, c.shape[1] + 2), dtype=bool)
    padded[1:-1, 1:-1] = c
    interior = (padded[:-2, 1:-1] & padded[2:, 1:-1]
                & padded[1:-1, :-2] & padded[1:-1, 2:])
    return int((c & ~interior).sum())


# -- PBM (P1) file format ----------------------------------------------------
#
#   P1
#   # gridspec <origin_re> <origin_im> <width> <height> <nx> <ny>
#   <nx> <ny>
#   row j=0 first (origin row), one line per row, top row last
#
# Floats are written with repr (shortest round-trip), making the write ->
# read -> write cycle bit-exact.


def render_pbm(mask: GridMask) -> str:
    g = mask.grid
    lines = ["P1",
             f"# gridspec {g.origin.real!r} {g.origin.imag!r} "
             f"{g.width!r} {g.height!r} {g.nx} {g.ny}",
             f"{g.nx} {g.ny}"]
    for j in range(g.ny):
        lines.append(" ".join("1" if v else "0" for v in mask.cells[j]))
    return "\n".join(lines) + "\n"


def write_pbm(mask: GridMask, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(render_pbm(mask))


def read_pbm(path) -> GridMask:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != "P1":
        raise ValueError(f"{path}: not a P1 PBM file")
    if len(lines) < 2 or not lines[1].startswith("# gridspec "):
        raise ValueError(f"{path}: missing gridspec comment")
    parts = lines[1][len("# gridspec "):].split()
    if len(parts) != 6:
        raise ValueError(f"{path}: malformed gridspec comment")
    ox, oy, w, h = (float(p) for p in parts[:4])
    nx, ny = int(parts[4]), int(parts[5])
    dims = lines[2].split()
    if len(dims) != 2 or int(dims[0]) != nx or int(dims[1]) != ny:
        raise ValueError(f"{path}: dimension line disagrees with gridspec")
    rows = [ln for ln in lines[3:] if ln.strip()]
    if len(rows) != ny:
        raise ValueError(f"{path}: expected {ny} rows, found {len(rows)}")
    cells = np.zeros((ny, nx), dtype=bool)
    for j, row in enumerate(rows):
        bits = row.split()
        if len(bits) != nx:
            raise ValueError(f"{path}: row {j} has {len(bits)} entries, expected {nx}")
        cells[j] = [bit == "1" for bit in bits]
    grid = GridSpec(complex(ox, oy), w, h, nx, ny)
    return GridMask(grid, cells)
