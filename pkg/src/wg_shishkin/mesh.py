"""Shishkin tensor-product meshes on the unit square.

The 1D partition is piecewise equidistant: [0, lam] and [1-lam, 1] each get
n/4 cells of the fine width ``4*lam/n`` and [lam, 1-lam] gets n/2 cells of the
coarse width ``2*(1-2*lam)/n``, with ``lam = min(alpha*eps*ln(n), 1/4)``.
The 2D mesh is the tensor product of two identical such partitions.
"""

import math
from dataclasses import dataclass, field

import numpy as np

MESH_KINDS = ("shishkin", "uniform")

#: Local side order of a cell and the sign of its outward normal relative to
#: the canonical edge normal (+x for vertical edges, +y for horizontal ones).
SIDES = ("south", "east", "north", "west")
SIDE_SIGNS = (-1.0, 1.0, 1.0, -1.0)


@dataclass(frozen=True)
class MeshParams:
    """Parameters of a Shishkin (or uniform) tensor mesh.

    Attributes
    ----------
    n : int
        Cells per axis; must be >= 4 and divisible by 4.
    eps : float
        Perturbation parameter in (0, 1].
    k : int
        Polynomial degree, >= 3.
    alpha : float
        Transition constant; defaults to k + 1.
    mesh_kind : str
        "shishkin" or "uniform" (uniform forces the transition point to 1/4,
        which makes every cell width 1/n).
    """

    n: int
    eps: float
    k: int
    alpha: float | None = None
    mesh_kind: str = "shishkin"

    def __post_init__(self):
        if self.n < 4 or self.n % 4 != 0:
            raise ValueError(f"n must be >= 4 and divisible by 4, got {self.n}")
        if not 0.0 < self.eps <= 1.0:
            raise ValueError(f"eps must lie in (0, 1], got {self.eps}")
        if self.k < 3:
            raise ValueError(f"degree k must be >= 3, got {self.k}")
        if self.alpha is None:
            object.__setattr__(self, "alpha", float(self.k + 1))
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.mesh_kind not in MESH_KINDS:
            raise ValueError(f"mesh_kind must be one of {MESH_KINDS}")


@dataclass(frozen=True)
class Cell:
    """Axis-aligned rectangular cell of the tensor mesh."""

    index: tuple[int, int]
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    widths: tuple[float, float]
    edge_ids: tuple[int, int, int, int]  # south, east, north, west

    @property
    def area(self) -> float:
        return self.widths[0] * self.widths[1]


@dataclass(frozen=True)
class Edge:
    """Mesh edge; the canonical normal is +x (vertical) or +y (horizontal)."""

    id: int
    orientation: str  # "horizontal" or "vertical"
    endpoints: tuple[tuple[float, float], tuple[float, float]]
    length: float
    cells: tuple[int, ...]
    on_boundary: bool

    @property
    def canonical_normal(self) -> tuple[float, float]:
        return (1.0, 0.0) if self.orientation == "vertical" else (0.0, 1.0)


@dataclass(frozen=True)
class ShishkinMesh:
    params: MeshParams
    breakpoints: np.ndarray
    lam: float
    h_fine: float
    h_coarse: float
    cells: list[Cell] = field(repr=False)
    edges: list[Edge] = field(repr=False)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def n_cells(self) -> int:
        return self.params.n ** 2

    @property
    def n_edges(self) -> int:
        n = self.params.n
        return 2 * n * (n + 1)

    def boundary_edge_ids(self) -> list[int]:
        return [e.id for e in self.edges if e.on_boundary]

    def axis_widths(self) -> np.ndarray:
        """Nominal cell widths along one axis (both axes are identical)."""
        n = self.params.n
        quarter = n // 4
        w = np.full(n, self.h_coarse)
        w[:quarter] = self.h_fine
        w[n - quarter:] = self.h_fine
        return w


def transition_point(n: int, eps: float, alpha: float) -> float:
    """Distance from the boundary at which the mesh switches fine -> coarse."""
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return min(alpha * eps * math.log(n), 0.25)


def axis_partition(n: int, lam: float) -> np.ndarray:
    """Piecewise-equidistant breakpoints of [0, 1], symmetric about 1/2."""
    if not 0.0 < lam <= 0.25:
        raise ValueError(f"transition point must lie in (0, 1/4], got {lam}")
    if n < 4 or n % 4 != 0:
        raise ValueError(f"n must be >= 4 and divisible by 4, got {n}")
    quarter = n // 4
    points = np.empty(n + 1)
    # Left half; the right half is mirrored so points[i] + points[n-i] == 1.
    fine = lam / quarter
    coarse = (0.5 - lam) / quarter
    for i in range(quarter + 1):
        points[i] = i * fine
    for j in range(1, quarter + 1):
        points[quarter + j] = lam + j * coarse
    points[quarter] = lam
    points[2 * quarter] = 0.5
    for i in range(2 * quarter):
        points[n - i] = 1.0 - points[i]
    return points


def build_mesh(params: MeshParams) -> ShishkinMesh:
    """Construct the full tensor mesh with cells, edges and adjacency.

    Ordering is deterministic: cells lexicographic by (i, j); all horizontal
    edges (row by row) first, then all vertical edges (column by column).
    """
    n = params.n
    lam = 0.25 if params.mesh_kind == "uniform" else transition_point(
        n, params.eps, params.alpha)
    points = axis_partition(n, lam)
    h_fine = 4.0 * lam / n
    h_coarse = 2.0 * (1.0 - 2.0 * lam) / n

    quarter = n // 4

    def width(i: int) -> float:
        # Nominal region width, not the breakpoint difference: guarantees
        # that equal-width cells compare equal, so local operators can be
        # shared across cells of the same size class.
        return h_fine if i < quarter or i >= n - quarter else h_coarse

    n_horizontal = n * (n + 1)

    def horizontal_id(i: int, j: int) -> int:
        return j * n + i

    def vertical_id(i: int, j: int) -> int:
        return n_horizontal + i * n + j

    cells = []
    for i in range(n):
        for j in range(n):
            cells.append(Cell(
                index=(i, j),
                x_range=(points[i], points[i + 1]),
                y_range=(points[j], points[j + 1]),
                widths=(width(i), width(j)),
                edge_ids=(horizontal_id(i, j), vertical_id(i + 1, j),
                          horizontal_id(i, j + 1), vertical_id(i, j)),
            ))

    def cell_id(i: int, j: int) -> int:
        return i * n + j

    edges = []
    for j in range(n + 1):
        for i in range(n):
            neighbors = tuple(cell_id(i, jj) for jj in (j - 1, j) if 0 <= jj < n)
            edges.append(Edge(
                id=horizontal_id(i, j),
                orientation="horizontal",
                endpoints=((points[i], points[j]), (points[i + 1], points[j])),
                length=width(i),
                cells=neighbors,
                on_boundary=j in (0, n),
            ))
    for i in range(n + 1):
        for j in range(n):
            neighbors = tuple(cell_id(ii, j) for ii in (i - 1, i) if 0 <= ii < n)
            edges.append(Edge(
                id=vertical_id(i, j),
                orientation="vertical",
                endpoints=((points[i], points[j]), (points[i], points[j + 1])),
                length=width(j),
                cells=neighbors,
                on_boundary=i in (0, n),
            ))
    edges.sort(key=lambda e: e.id)

    return ShishkinMesh(params=params, breakpoints=points, lam=lam,
                        h_fine=h_fine, h_coarse=h_coarse,
                        cells=cells, edges=edges)
