"""Momentum-space 4x4 blocks and their ordered, phase-fixed eigendecompositions.

Each momentum k gets a Hermitian block acting on the doubled mode space
(A_k, B_k, A^dag_{-k}, B^dag_{-k}); its spectrum is {+omega1, +omega2,
-omega1, -omega2}.  Decompositions order the eigenvector columns
(+omega1, +omega2, -omega1, -omega2) and fix each column's phase so the
entry of largest modulus is real and positive, which makes repeated
decompositions bitwise identical and null-quench overlaps exactly the
identity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EigensolverFailure, GaplessAmbiguity, MomentumMismatch
from .model import ModelParams, structure_functions

# Columns of the ascending eigh output rearranged to (+w1, +w2, -w1, -w2).
_ORDER = (3, 2, 0, 1)
_DEGENERACY_TOL = 1e-12


def bdg_block_stack(params: ModelParams, k_values) -> np.ndarray:
    """Stacked (n, 4, 4) Hermitian blocks for an array of momenta."""
    ks = np.asarray(k_values, dtype=float)
    zk, wk = structure_functions(params, ks)
    zm, wm = structure_functions(params, -ks)
    h2 = 2.0 * params.field
    n = ks.size
    blocks = np.zeros((n, 4, 4), dtype=complex)
    blocks[:, 0, 0] = h2
    blocks[:, 1, 1] = h2
    blocks[:, 2, 2] = -h2
    blocks[:, 3, 3] = -h2
    blocks[:, 0, 1] = np.conj(zk)
    blocks[:, 1, 0] = zk
    blocks[:, 2, 3] = -zm
    blocks[:, 3, 2] = -np.conj(zm)
    blocks[:, 0, 3] = np.conj(wk)
    blocks[:, 3, 0] = wk
    blocks[:, 1, 2] = -np.conj(wm)
    blocks[:, 2, 1] = -wm
    return blocks


@dataclass(frozen=True, eq=False)
class BdgBlock:
    """One momentum block; Hermitian with particle-hole symmetric spectrum."""

    k: float
    matrix: np.ndarray


def bdg_block(params: ModelParams, k: float) -> BdgBlock:
    """The 4x4 block at momentum k.

    In the (A_k, B_k, A^dag_{-k}, B^dag_{-k}) basis the particle corner is
    [[2h, Z*(k)], [Z(k), 2h]], the hole corner its negated -k transpose,
    and the pairing corner [[0, W*(k)], [-W*(-k), 0]].
    """
    return BdgBlock(k=float(k), matrix=bdg_block_stack(params, [k])[0])


def _phase_fix(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real positive.

    Ties pick the lowest row index (argmax).  Works on (..., 4, 4) stacks.
    """
    mags = np.abs(vectors)
    rows = np.argmax(mags, axis=-2)
    pivot = np.take_along_axis(vectors, rows[..., None, :], axis=-2)[..., 0, :]
    phase = pivot / np.abs(pivot)
    return vectors * np.conj(phase)[..., None, :]


def _order_degenerate(energies: np.ndarray, vectors: np.ndarray):
    """Reorder columns inside degenerate clusters by descending Re of row 0."""
    for start in range(3):
        stop = start + 1
        while stop < 4 and abs(energies[stop] - energies[start]) <= _DEGENERACY_TOL:
            stop += 1
        if stop - start > 1:
            cluster = list(range(start, stop))
            key = sorted(cluster, key=lambda j: -vectors[0, j].real)
            vectors[:, cluster] = vectors[:, key]
    return energies, vectors


def decompose_stack(blocks: np.ndarray):
    """Ordered phase-fixed eigendecomposition of an (n, 4, 4) stack.

    Returns (energies, vectors) with energies[:, j] ordered
    (+w1, +w2, -w1, -w2) and vectors[:, :, j] the matching columns.
    """
    try:
        evals, evecs = np.linalg.eigh(blocks)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"eigh failed on momentum blocks: {exc}") from exc
    energies = evals[..., _ORDER]
    vectors = _phase_fix(evecs[..., _ORDER])
    # Degenerate blocks are rare (criticality, or gamma*delta = h = 0); fix
    # their column order one block at a time.
    gaps = np.min(np.abs(np.diff(evals, axis=-1)), axis=-1)
    for i in np.nonzero(gaps <= _DEGENERACY_TOL)[0]:
        _order_degenerate(energies[i], vectors[i])
    return energies, vectors


@dataclass(frozen=True, eq=False)
class ModeDecomposition:
    """Eigensystem of one block: energies (+w1, +w2, -w1, -w2) and unitary columns."""

    block: BdgBlock
    energies: np.ndarray
    vectors: np.ndarray


def mode_decomposition(block: BdgBlock) -> ModeDecomposition:
    """Self-adjoint eigendecomposition with the package ordering and phases."""
    m = block.matrix
    if np.max(np.abs(m - m.conj().T)) > 1e-12:
        raise EigensolverFailure(f"block at k = {block.k} is not Hermitian")
    energies, vectors = decompose_stack(m[None])
    return ModeDecomposition(block=block, energies=energies[0], vectors=vectors[0])


@dataclass(frozen=True, eq=False)
class OverlapMatrix:
    """Unitary overlap between charging and battery eigenbases at one momentum."""

    m: np.ndarray


def overlap_matrix(pre: ModeDecomposition, post: ModeDecomposition) -> OverlapMatrix:
    """M = (post vectors)^dag (pre vectors); rows index post modes."""
    if pre.block.k != post.block.k:
        raise MomentumMismatch(
            f"pre at k = {pre.block.k} vs post at k = {post.block.k}"
        )
    return OverlapMatrix(m=post.vectors.conj().T @ pre.vectors)


def ground_state_projector(decomp: ModeDecomposition) -> np.ndarray:
    """Projector onto the negative-energy pair of columns.

    At criticality (omega2 ~ 0) the split is basis dependent; the
    deterministic degenerate ordering is used and GaplessAmbiguity warns.
    """
    if decomp.energies[1] <= 1e-12:
        warnings.warn(
            f"gapless block at k = {decomp.block.k}: projector uses the "
            "deterministic degenerate basis",
            GaplessAmbiguity,
            stacklevel=2,
        )
    neg = decomp.vectors[:, 2:]
    return neg @ neg.conj().T
