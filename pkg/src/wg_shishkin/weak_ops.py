"""Per-cell matrices of the weak Laplacian, weak gradient and stabilizer.

A weak function on a cell is the triple {v0, vb, vg}: an interior Q_k
polynomial, a P_k trace and a [P_k]^2 gradient approximation per edge. All
matrices act on the local coefficient vector laid out as

    interior (k+1)^2 | per side (south, east, north, west):
                       trace (k+1), grad-x (k+1), grad-y (k+1)

with edge coefficients stored in the canonical edge orientation; the +/-1
outward-normal sign is applied inside the operators, never to the data.
"""

from dataclasses import dataclass

import numpy as np

from .basis import CellBasis, EdgeBasis, default_quadrature
from .mesh import SIDE_SIGNS, SIDES, Cell, Edge


@dataclass(frozen=True)
class LocalDofLayout:
    """Index layout of the local coefficient vector of one cell."""

    k: int

    @property
    def n_interior(self) -> int:
        return (self.k + 1) ** 2

    @property
    def n_per_side(self) -> int:
        return 3 * (self.k + 1)

    @property
    def n_loc(self) -> int:
        return self.n_interior + 4 * self.n_per_side

    @property
    def interior(self) -> slice:
        return slice(0, self.n_interior)

    def trace(self, side: int) -> slice:
        base = self.n_interior + side * self.n_per_side
        return slice(base, base + self.k + 1)

    def grad_x(self, side: int) -> slice:
        base = self.n_interior + side * self.n_per_side + (self.k + 1)
        return slice(base, base + self.k + 1)

    def grad_y(self, side: int) -> slice:
        base = self.n_interior + side * self.n_per_side + 2 * (self.k + 1)
        return slice(base, base + self.k + 1)


@dataclass(frozen=True)
class LocalOperators:
    """Weak-operator and stiffness matrices of one cell."""

    layout: LocalDofLayout
    L: np.ndarray  # (k+1)^2   x n_loc, weak Laplacian coefficients
    G: np.ndarray  # 2(k+1)^2  x n_loc, weak gradient (x block, then y block)
    S: np.ndarray  # n_loc x n_loc, stabilizer
    A: np.ndarray  # n_loc x n_loc, eps^2 L'L + G'G + S


def _side_edge(cell: Cell, side: int) -> Edge:
    """Geometry of one cell side as a canonical (ascending-coordinate) edge."""
    (x0, x1), (y0, y1) = cell.x_range, cell.y_range
    h1, h2 = cell.widths
    name = SIDES[side]
    if name == "south":
        endpoints, orientation, length = ((x0, y0), (x1, y0)), "horizontal", h1
    elif name == "north":
        endpoints, orientation, length = ((x0, y1), (x1, y1)), "horizontal", h1
    elif name == "east":
        endpoints, orientation, length = ((x1, y0), (x1, y1)), "vertical", h2
    else:
        endpoints, orientation, length = ((x0, y0), (x0, y1)), "vertical", h2
    return Edge(id=-1, orientation=orientation, endpoints=endpoints,
                length=length, cells=(), on_boundary=False)


def _side_tables(cell: Cell, k: int, q: int):
    """Per-side quadrature plus cell/edge basis tables on each side."""
    basis = CellBasis(cell, k)
    tables = []
    for side in range(4):
        edge = _side_edge(cell, side)
        ebasis = EdgeBasis(edge, k)
        x, y, w = ebasis.quad_points(q)
        t = x if edge.orientation == "horizontal" else y
        tables.append({
            "vertical": edge.orientation == "vertical",
            "sign": SIDE_SIGNS[side],
            "E": ebasis.eval(t),
            "V0": basis.eval(x, y),
            "VX": basis.eval(x, y, dx=1),
            "VY": basis.eval(x, y, dy=1),
            "w": w,
        })
    return basis, tables


def weak_laplacian_matrix(cell: Cell, k: int, q: int | None = None) -> np.ndarray:
    """Matrix L whose column d holds the Q_k coefficients of the discrete
    weak Laplacian of the d-th local unit coefficient.

    Realizes, against every test polynomial phi in Q_k,
        (Lap_w v, phi)_T = (v0, Lap phi)_T - <vb, grad phi . n> + <vg . n, phi>.
    """
    q = default_quadrature(k) if q is None else q
    layout = LocalDofLayout(k)
    basis, tables = _side_tables(cell, k, q)
    L = np.zeros((layout.n_interior, layout.n_loc))

    x, y, w = basis.quad_points(q)
    V = basis.eval(x, y)
    Vlap = basis.eval(x, y, dx=2) + basis.eval(x, y, dy=2)
    L[:, layout.interior] = (Vlap * w) @ V.T

    for side, tab in enumerate(tables):
        Vn = tab["VX"] if tab["vertical"] else tab["VY"]
        moments_n = (Vn * tab["w"]) @ tab["E"].T      # <chi_j, dphi_i/d(axis)>
        moments_0 = (tab["V0"] * tab["w"]) @ tab["E"].T
        L[:, layout.trace(side)] -= tab["sign"] * moments_n
        grad = layout.grad_x(side) if tab["vertical"] else layout.grad_y(side)
        L[:, grad] += tab["sign"] * moments_0
    return L


def weak_gradient_matrix(cell: Cell, k: int, q: int | None = None) -> np.ndarray:
    """Matrix G of the discrete weak gradient; rows are the x-component
    coefficients followed by the y-component ones.

    Realizes (grad_w v, q)_T = -(v0, div q)_T + <vb, q . n> for q in [Q_k]^2;
    vg never enters, so its columns are identically zero.
    """
    q = default_quadrature(k) if q is None else q
    layout = LocalDofLayout(k)
    basis, tables = _side_tables(cell, k, q)
    dim = layout.n_interior
    G = np.zeros((2 * dim, layout.n_loc))

    x, y, w = basis.quad_points(q)
    V = basis.eval(x, y)
    G[:dim, layout.interior] = -(basis.eval(x, y, dx=1) * w) @ V.T
    G[dim:, layout.interior] = -(basis.eval(x, y, dy=1) * w) @ V.T

    for side, tab in enumerate(tables):
        moments = tab["sign"] * (tab["V0"] * tab["w"]) @ tab["E"].T
        block = slice(0, dim) if tab["vertical"] else slice(dim, 2 * dim)
        G[block, layout.trace(side)] += moments
    return G


def stabilizer_matrix(cell: Cell, k: int, eps: float, h: float, H: float,
                      q: int | None = None) -> np.ndarray:
    """Stabilizer block: eps^2/h <grad v0 - vg, .> + (eps^2/(h^2 H) + 1/H)
    <v0 - vb, .> over the four sides.

    h and H are the GLOBAL fine/coarse mesh widths, on every cell including
    coarse-region ones; the scheme is defined with global widths and must
    not be "corrected" to per-cell sizes.
    """
    q = default_quadrature(k) if q is None else q
    layout = LocalDofLayout(k)
    _, tables = _side_tables(cell, k, q)
    c_grad = eps * eps / h
    c_val = (eps / h) ** 2 / H + 1.0 / H

    n_loc = layout.n_loc
    S = np.zeros((n_loc, n_loc))
    eye = np.eye(k + 1)
    for side, tab in enumerate(tables):
        EW = tab["E"] * tab["w"]
        jump_val = np.zeros((k + 1, n_loc))
        jump_val[:, layout.interior] = EW @ tab["V0"].T
        jump_val[:, layout.trace(side)] = -eye
        jump_gx = np.zeros((k + 1, n_loc))
        jump_gx[:, layout.interior] = EW @ tab["VX"].T
        jump_gx[:, layout.grad_x(side)] = -eye
        jump_gy = np.zeros((k + 1, n_loc))
        jump_gy[:, layout.interior] = EW @ tab["VY"].T
        jump_gy[:, layout.grad_y(side)] = -eye
        S += c_grad * (jump_gx.T @ jump_gx + jump_gy.T @ jump_gy)
        S += c_val * (jump_val.T @ jump_val)
    return 0.5 * (S + S.T)


def local_stiffness(cell: Cell, k: int, eps: float, h: float, H: float,
                    q: int | None = None) -> LocalOperators:
    """All local operators plus the stiffness block eps^2 L'L + G'G + S."""
    L = weak_laplacian_matrix(cell, k, q)
    G = weak_gradient_matrix(cell, k, q)
    S = stabilizer_matrix(cell, k, eps, h, H, q)
    A = eps * eps * (L.T @ L) + G.T @ G + S
    A = 0.5 * (A + A.T)
    return LocalOperators(layout=LocalDofLayout(k), L=L, G=G, S=S, A=A)
