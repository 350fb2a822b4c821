"""Exact fermionic Fock space on M modes (dimension 2**M).

Basis states are occupation bitstrings: bit k of the basis index is the
occupation of mode k, and the vacuum is the all-zero index 0.  Mode
operators carry the parity string sign (-1)**(#occupied modes below k),
which makes the anticommutation relations

    {A^-(f), A^+(g)} = <f|g>,   {A^+(f), A^+(g)} = 0

hold exactly.  Inner products are antilinear in the FIRST argument
throughout the package.

Operators are scipy sparse matrices (the smooth operators ``second_quantize``
and ``dgamma`` are built block-by-block in particle number); vectors are
plain complex ndarrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

DEFAULT_MAX_MODES = 12


@dataclass(frozen=True)
class ModeSpace:
    """M orthonormal one-particle modes; Fock dimension 2**M."""

    modes: int
    max_modes: int = field(default=DEFAULT_MAX_MODES, repr=False)

    def __post_init__(self):
        if not 1 <= self.modes <= self.max_modes:
            raise ValueError(
                f"mode count {self.modes} outside 1..{self.max_modes} "
                "(raise max_modes explicitly if you really want a bigger space)"
            )

    @property
    def dim(self) -> int:
        return 1 << self.modes

    def vacuum(self) -> np.ndarray:
        vac = np.zeros(self.dim, dtype=complex)
        vac[0] = 1.0
        return vac

    def basis_state(self, occupied: tuple[int, ...]) -> np.ndarray:
        """Wedge basis vector a+_{k1} ... a+_{kr} |vac> for k1 < ... < kr."""
        if tuple(sorted(occupied)) != tuple(occupied):
            raise ValueError("occupied modes must be ascending")
        index = 0
        for k in occupied:
            index |= 1 << k
        state = np.zeros(self.dim, dtype=complex)
        state[index] = 1.0
        return state


def _popcounts(dim: int) -> np.ndarray:
    pc = np.zeros(dim, dtype=np.int64)
    for i in range(1, dim):
        pc[i] = pc[i >> 1] + (i & 1)
    return pc


@lru_cache(maxsize=None)
def _mode_operators(modes: int) -> tuple[tuple[sparse.csr_matrix, ...], np.ndarray]:
    """Sparse creation operators for every mode, plus the popcount table."""
    dim = 1 << modes
    pc = _popcounts(dim)
    source = np.arange(dim, dtype=np.int64)
    ops = []
    for k in range(modes):
        empty = (source >> k) & 1 == 0
        cols = source[empty]
        rows = cols | (1 << k)
        signs = 1.0 - 2.0 * (pc[cols & ((1 << k) - 1)] & 1)
        ops.append(
            sparse.csr_matrix((signs.astype(complex), (rows, cols)), shape=(dim, dim))
        )
    return tuple(ops), pc


def creation(space: ModeSpace, f: np.ndarray) -> sparse.csr_matrix:
    """A^+(f) = sum_k f_k a+_k; linear in f."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (space.modes,):
        raise ValueError(f"expected a length-{space.modes} vector, got shape {f.shape}")
    ops, _ = _mode_operators(space.modes)
    out = sparse.csr_matrix((space.dim, space.dim), dtype=complex)
    for fk, op in zip(f, ops):
        if fk != 0:
            out = out + fk * op
    return out


def annihilation(space: ModeSpace, f: np.ndarray) -> sparse.csr_matrix:
    """A^-(f) = (A^+(f))^dagger; antilinear in f."""
    return creation(space, f).conj().T.tocsr()


def second_quantize(space: ModeSpace, U: np.ndarray, *, unitary_tol: float = 1e-10) -> sparse.csr_matrix:
    """Multiplicative second quantization of a one-particle unitary.

    Acts on the wedge basis as (U e_{k1}) ^ ... ^ (U e_{kr}); the matrix is
    block diagonal in particle number with determinant entries
    det U[T, S] between occupation sets S -> T.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (space.modes, space.modes):
        raise ValueError(f"expected {space.modes}x{space.modes} matrix")
    if np.max(np.abs(U.conj().T @ U - np.eye(space.modes))) > unitary_tol:
        raise ValueError("second_quantize requires a unitary argument")
    return _det_blocks(space, U)


def _det_blocks(space: ModeSpace, U: np.ndarray) -> sparse.csr_matrix:
    from itertools import combinations

    dim = space.dim
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    for r in range(space.modes + 1):
        subsets = [(sum(1 << k for k in s), s) for s in combinations(range(space.modes), r)]
        for col_index, col_set in subsets:
            for row_index, row_set in subsets:
                if r == 0:
                    d = 1.0
                else:
                    d = np.linalg.det(U[np.ix_(row_set, col_set)])
                if abs(d) > 1e-14:
                    rows.append(row_index)
                    cols.append(col_index)
                    vals.append(d)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))


def dgamma(space: ModeSpace, H: np.ndarray) -> sparse.csr_matrix:
    """Additive second quantization: dG(H) = sum_{kl} H_kl a+_k a-_l.

    For rank-one H = |f><g| this is exactly A^+(f) A^-(g); for H = I it is
    the number operator.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape != (space.modes, space.modes):
        raise ValueError(f"expected {space.modes}x{space.modes} matrix")
    ops, _ = _mode_operators(space.modes)
    out = sparse.csr_matrix((space.dim, space.dim), dtype=complex)
    for k in range(space.modes):
        ak = ops[k].conj().T
        for l in range(space.modes):
            if H[l, k] != 0:
                # dG(H) e_k-particle: sum over l of H_{lk} a+_l a-_k
                out = out + H[l, k] * (ops[l] @ ak)
    return out


def gram_inner(left: list[np.ndarray], right: list[np.ndarray]) -> complex:
    """<u_1 ^ ... ^ u_m | v_1 ^ ... ^ v_n> = det[<u_i|v_j>], 0 if m != n.

    Both lists are read in the order the creators are applied to build the
    vector, leftmost first: A^+(u_1) ... A^+(u_m) |vac>.
    """
    if len(left) != len(right):
        return 0.0
    if not left:
        return 1.0
    gram = np.array([[np.vdot(u, v) for v in right] for u in left])
    return complex(np.linalg.det(gram))


def wedge_vector(space: ModeSpace, vectors: list[np.ndarray]) -> np.ndarray:
    """A^+(v_1) ... A^+(v_n) |vac>, leftmost creator applied last."""
    state = space.vacuum()
    for v in reversed(vectors):
        state = creation(space, v) @ state
    return state


def parity_of(op, modes: int, tol: float = 1e-12) -> str:
    """Classify an operator against the number-parity grading.

    'even' preserves occupation-count parity, 'odd' flips it, 'mixed'
    does neither.
    """
    op = sparse.csr_matrix(op)
    _, pc = _mode_operators(modes)
    par = (pc & 1).astype(bool)
    coo = op.tocoo()
    if coo.nnz == 0:
        return "even"
    same = par[coo.row] == par[coo.col]
    big = np.abs(coo.data) > tol
    has_even = bool(np.any(same & big))
    has_odd = bool(np.any(~same & big))
    if has_even and has_odd:
        return "mixed"
    return "odd" if has_odd else "even"


def dense(op) -> np.ndarray:
    """Materialize a Fock operator as a dense ndarray (small spaces only)."""
    if sparse.issparse(op):
        return op.toarray()
    return np.asarray(op)
