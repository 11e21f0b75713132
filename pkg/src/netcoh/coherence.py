"""Dephasing, entropic quantities, coherence measures, and discord.

All entropies and coherence figures are in bits (logarithm base 2), so one
maximally coherent qubit carries exactly 1.0 bit.  The convention
0 log 0 := 0 applies throughout; eigenvalues in [-1e-9, 0) are clamped to
zero before entropy evaluation and anything more negative is a hard error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .linalg import (
    ATOL_SPECTRAL,
    DensityMatrix,
    DimensionMismatchError,
    as_square_matrix,
    hermitian_eig,
    is_unitary,
    partial_trace,
    tensor,
)
from .rng import DEFAULT_SEED, haar_unitary, substream

A_TO_B = "a_to_b"
B_TO_A = "b_to_a"

EIGENVALUE_CLAMP = -1e-9
IDENTITY_AGREEMENT_TOL = 1e-9

Cut = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class ProductBasis:
    """Orthonormal product basis: one unitary of column vectors per subsystem.

    The global basis matrix is the tensor product of the local matrices, so
    global column (i_0, i_1, ...) in lexicographic order is the tensor
    product of local columns i_k.
    """

    local_bases: tuple[np.ndarray, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        mats = []
        if len(self.local_bases) != len(dims):
            raise DimensionMismatchError(
                f"{len(self.local_bases)} local bases for {len(dims)} subsystems"
            )
        for mat, d in zip(self.local_bases, dims):
            m = as_square_matrix(mat)
            if m.shape[0] != d:
                raise DimensionMismatchError(f"local basis dim {m.shape[0]} != subsystem dim {d}")
            if not is_unitary(m, ATOL_SPECTRAL):
                raise ValueError("local basis matrix is not unitary within 1e-9")
            m = m.copy()
            m.setflags(write=False)
            mats.append(m)
        object.__setattr__(self, "local_bases", tuple(mats))
        object.__setattr__(self, "dims", dims)

    @cached_property
    def matrix(self) -> np.ndarray:
        m = tensor(*self.local_bases)
        m.setflags(write=False)
        return m

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @classmethod
    def computational(cls, dims: Sequence[int]) -> "ProductBasis":
        return cls(tuple(np.eye(int(d), dtype=complex) for d in dims), tuple(dims))

    def subset(self, subsystems: Iterable[int]) -> "ProductBasis":
        """Basis restricted to a subset of subsystems, in original order."""
        idx = sorted(set(int(i) for i in subsystems))
        return ProductBasis(
            tuple(self.local_bases[i] for i in idx), tuple(self.dims[i] for i in idx)
        )

    def replace_local(self, subsystem: int, mat: np.ndarray) -> "ProductBasis":
        locs = list(self.local_bases)
        locs[int(subsystem)] = mat
        return ProductBasis(tuple(locs), self.dims)


def random_product_basis(dims: Sequence[int], gen: np.random.Generator) -> ProductBasis:
    return ProductBasis(tuple(haar_unitary(int(d), gen) for d in dims), tuple(dims))


def _check_basis(rho: DensityMatrix, basis: ProductBasis) -> None:
    if basis.dims != rho.dims:
        raise DimensionMismatchError(f"basis dims {basis.dims} != state dims {rho.dims}")


def normalize_cut(dims: Sequence[int], cut: Cut) -> Cut:
    group_a = tuple(sorted(set(int(i) for i in cut[0])))
    group_b = tuple(sorted(set(int(i) for i in cut[1])))
    n = len(dims)
    if not group_a or not group_b:
        raise DimensionMismatchError("both cut groups must be non-empty")
    if sorted(group_a + group_b) != list(range(n)):
        raise DimensionMismatchError(f"cut {cut} does not partition {n} subsystems")
    return group_a, group_b


BIPARTITE_CUT: Cut = ((0,), (1,))


# ---------------------------------------------------------------------------
# Dephasing


def _dephase_mask(dims: tuple[int, ...], subsystems: tuple[int, ...]) -> np.ndarray:
    total = int(np.prod(dims))
    digits = np.array(np.unravel_index(np.arange(total), dims))
    mask = np.ones((total, total), dtype=bool)
    for k in subsystems:
        mask &= digits[k][:, None] == digits[k][None, :]
    return mask


def dephase(
    rho: DensityMatrix, basis: ProductBasis, subsystems: Iterable[int] | None = None
) -> DensityMatrix:
    """Zero the off-diagonal elements of the listed subsystems in ``basis``.

    With ``subsystems=None`` all subsystems are dephased (the fully dephasing
    channel).  The map is idempotent and trace preserving.
    """
    _check_basis(rho, basis)
    if subsystems is None:
        subs = tuple(range(len(rho.dims)))
    else:
        subs = tuple(sorted(set(int(s) for s in subsystems)))
        if any(s < 0 or s >= len(rho.dims) for s in subs):
            raise DimensionMismatchError(f"subsystems {subs} out of range")
    b = basis.matrix
    frame = b.conj().T @ rho.matrix @ b
    frame[~_dephase_mask(rho.dims, subs)] = 0.0
    return DensityMatrix(b @ frame @ b.conj().T, rho.dims)


# ---------------------------------------------------------------------------
# Entropies


def entropy_of_probabilities(p: np.ndarray) -> float:
    """Shannon entropy in bits with 0 log 0 := 0 and roundoff clamping."""
    p = np.real(np.asarray(p, dtype=complex))
    if np.min(p) < EIGENVALUE_CLAMP:
        raise ValueError(f"probability {np.min(p):.3e} below clamp floor {EIGENVALUE_CLAMP:.1e}")
    p = np.clip(p, 0.0, None)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def _eigvals_2x2(m: np.ndarray) -> np.ndarray:
    half_tr = (m[0, 0].real + m[1, 1].real) / 2.0
    radius = math.hypot((m[0, 0].real - m[1, 1].real) / 2.0, abs(m[0, 1]))
    return np.array([half_tr - radius, half_tr + radius])


def _entropy_of_hermitian(m: np.ndarray) -> float:
    d = m.shape[0]
    if d == 1:
        return entropy_of_probabilities(np.array([m[0, 0].real]))
    if d == 2:
        return entropy_of_probabilities(_eigvals_2x2(m))
    w, _ = hermitian_eig(m)
    return entropy_of_probabilities(w)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) in bits; lies in [0, log2 dim]."""
    return _entropy_of_hermitian(rho.matrix)


def rec(rho: DensityMatrix, basis: ProductBasis) -> float:
    """Relative entropy of coherence: S(dephased rho) - S(rho), in bits.

    Zero exactly on states diagonal in the basis; additive over tensor
    products; non-increasing under incoherent operations.
    """
    _check_basis(rho, basis)
    b = basis.matrix
    diag = np.real(np.einsum("ij,jk,ki->i", b.conj().T, rho.matrix, b))
    return entropy_of_probabilities(diag) - von_neumann_entropy(rho)


def mutual_information(rho: DensityMatrix, cut: Cut = BIPARTITE_CUT) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) across the cut, in bits."""
    group_a, group_b = normalize_cut(rho.dims, cut)
    s_a = von_neumann_entropy(partial_trace(rho, group_a))
    s_b = von_neumann_entropy(partial_trace(rho, group_b))
    return s_a + s_b - von_neumann_entropy(rho)


# ---------------------------------------------------------------------------
# Net global coherence


@dataclass(frozen=True)
class CoherenceReport:
    """Coherence figures for one state, basis, and bipartition, in bits.

    ``rec_net`` equals both ``rec_global - sum(rec_local)`` and
    ``mutual_info - mutual_info_dephased``; the two routes are computed
    independently and must agree within 1e-9.
    """

    rec_global: float
    rec_local: tuple[float, ...]
    rec_net: float
    mutual_info: float
    mutual_info_dephased: float

    def __post_init__(self):
        route_difference = self.rec_global - sum(self.rec_local)
        route_mutual = self.mutual_info - self.mutual_info_dephased
        if abs(self.rec_net - route_difference) > IDENTITY_AGREEMENT_TOL:
            raise ValueError("rec_net inconsistent with rec_global - sum(rec_local)")
        if abs(self.rec_net - route_mutual) > IDENTITY_AGREEMENT_TOL:
            raise ValueError("rec_net inconsistent with the mutual-information route")

    def to_json(self) -> dict:
        from .reporting import sig

        return {
            "rec_global": sig(self.rec_global),
            "rec_local": [sig(x) for x in self.rec_local],
            "rec_net": sig(self.rec_net),
            "mutual_info": sig(self.mutual_info),
            "mutual_info_dephased": sig(self.mutual_info_dephased),
        }


def net_global_coherence(
    rho: DensityMatrix, basis: ProductBasis, cut: Cut = BIPARTITE_CUT
) -> CoherenceReport:
    """Net global coherence across a cut, computed by two independent routes.

    Route one subtracts the marginal coherences from the global one; route
    two subtracts the dephased-state mutual information from the raw mutual
    information.  They agree within 1e-9 (raise otherwise) and the result is
    nonnegative up to -1e-9.
    """
    _check_basis(rho, basis)
    group_a, group_b = normalize_cut(rho.dims, cut)
    rec_global = rec(rho, basis)
    rec_locals = []
    for group in (group_a, group_b):
        marg = partial_trace(rho, group)
        rec_locals.append(rec(marg, basis.subset(group)))
    net = rec_global - sum(rec_locals)
    mi = mutual_information(rho, (group_a, group_b))
    mi_deph = mutual_information(dephase(rho, basis), (group_a, group_b))
    if abs(net - (mi - mi_deph)) > IDENTITY_AGREEMENT_TOL:
        raise ArithmeticError(
            f"net-coherence routes disagree by {abs(net - (mi - mi_deph)):.3e}"
        )
    if net < -IDENTITY_AGREEMENT_TOL:
        raise ArithmeticError(f"net coherence {net:.3e} below the positivity floor")
    return CoherenceReport(
        rec_global=rec_global,
        rec_local=tuple(rec_locals),
        rec_net=net,
        mutual_info=mi,
        mutual_info_dephased=mi_deph,
    )


# ---------------------------------------------------------------------------
# Basis-dependent discord


def _require_bipartite(rho: DensityMatrix) -> None:
    if len(rho.dims) != 2:
        raise DimensionMismatchError(
            f"discord functions need a two-subsystem state, got dims {rho.dims}"
        )


def _measured_side(direction: str) -> int:
    if direction == A_TO_B:
        return 0
    if direction == B_TO_A:
        return 1
    raise ValueError(f"direction must be {A_TO_B!r} or {B_TO_A!r}, got {direction!r}")


def _conditional_blocks(
    rho_mat: np.ndarray, dims: tuple[int, int], side: int, basis_mat: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Weights p_i and unnormalized conditional blocks <i|rho|i> on the other side.

    Returns (weights, blocks) with blocks of shape (d_measured, d_other, d_other).
    """
    d_a, d_b = dims
    t = rho_mat.reshape(d_a, d_b, d_a, d_b)
    if side == 0:
        blocks = np.einsum("ai,abcd,ci->ibd", basis_mat.conj(), t, basis_mat)
    else:
        blocks = np.einsum("bi,abcd,di->iac", basis_mat.conj(), t, basis_mat)
    weights = np.real(np.trace(blocks, axis1=1, axis2=2))
    return weights, blocks


def _discord_fixed_entropies(
    rho_mat: np.ndarray,
    dims: tuple[int, int],
    side: int,
    basis_mat: np.ndarray,
    mutual_info_value: float,
    entropy_other: float,
) -> float:
    """I(rho) - I(dephased-on-side rho) given precomputed constants.

    Uses the block structure of the one-sided dephased state: its entropy is
    H(p) + sum_i p_i S(cond_i), its measured-side marginal has spectrum p,
    and its unmeasured marginal is that of rho (precomputed entropy_other).
    The mutual information of the dephased state thus collapses to
    entropy_other - sum_i p_i S(cond_i / p_i).
    """
    weights, blocks = _conditional_blocks(rho_mat, dims, side, basis_mat)
    conditional_term = 0.0
    d_other = blocks.shape[1]
    if d_other == 2:
        # Vectorized 2x2 spectra of all conditional blocks at once.
        a = np.real(blocks[:, 0, 0])
        d = np.real(blocks[:, 1, 1])
        half_tr = (a + d) / 2.0
        radius = np.hypot((a - d) / 2.0, np.abs(blocks[:, 0, 1]))
        lam = np.stack([half_tr - radius, half_tr + radius], axis=1)
        lam = np.clip(lam, 0.0, None)
        nz = lam > 0.0
        keep = weights > 1e-15
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = np.where(nz, lam / weights[:, None], 1.0)
            terms = np.where(nz & keep[:, None], -lam * np.log2(np.where(nz, scaled, 1.0)), 0.0)
        conditional_term = float(np.sum(terms))
    else:
        for w, block in zip(weights, blocks):
            if w > 1e-15:
                conditional_term += w * _entropy_of_hermitian(block / w)
    mi_dephased = entropy_other - conditional_term
    return mutual_info_value - mi_dephased


def basis_dependent_discord(rho: DensityMatrix, basis: ProductBasis, direction: str) -> float:
    """Mutual-information loss under one-sided dephasing, in bits.

    Nonnegative; zero for states already block-diagonal in the measured
    side's basis.
    """
    _require_bipartite(rho)
    _check_basis(rho, basis)
    side = _measured_side(direction)
    other = 1 - side
    mi = mutual_information(rho, BIPARTITE_CUT)
    ent_other = von_neumann_entropy(partial_trace(rho, (other,)))
    return _discord_fixed_entropies(
        rho.matrix, rho.dims, side, basis.local_bases[side], mi, ent_other
    )


# ---------------------------------------------------------------------------
# Discord minimization over local bases


def _givens(d: int, p: int, q: int, theta: float, phi: float) -> np.ndarray:
    g = np.eye(d, dtype=complex)
    c = math.cos(theta)
    s = math.sin(theta)
    ph = complex(math.cos(phi), math.sin(phi))
    g[p, p] = c
    g[q, q] = c
    g[p, q] = -s * ph
    g[q, p] = s * ph.conjugate()
    return g


def _basis_from_angles(seed_unitary: np.ndarray, angles: np.ndarray) -> np.ndarray:
    d = seed_unitary.shape[0]
    u = seed_unitary
    k = 0
    for p in range(d - 1):
        for q in range(p + 1, d):
            u = u @ _givens(d, p, q, angles[k], angles[k + 1])
            k += 2
    return u


def minimize_discord(
    rho: DensityMatrix,
    direction: str,
    *,
    seed: int = DEFAULT_SEED,
    restarts: int = 32,
) -> tuple[float, ProductBasis]:
    """Minimum of the basis-dependent discord over local product bases.

    The objective depends only on the measured side's basis, so the search
    runs over that side: the basis is a seed unitary times a product of
    complex Givens rotations, refined by coordinate descent on the rotation
    angles until a full sweep improves by less than 1e-9.  Column phases are
    omitted from the parameterization because dephasing projectors are
    invariant under them.  Seeds are the marginal eigenbasis (first, so that
    zero-discord states come back with a marginal-diagonalizing witness),
    the identity, and ``restarts`` Haar-random unitaries on substreams
    derived from ``seed`` by counter.

    The unmeasured side of the returned basis is the eigenbasis of a
    generically weighted mixture of the conditional blocks, which for
    zero-discord states simultaneously diagonalizes them.  For states with
    degenerate marginal or conditional spectra the optimizer reports the
    best value found; no constructive basis search beyond the restarts is
    attempted.
    """
    _require_bipartite(rho)
    side = _measured_side(direction)
    other = 1 - side
    d_m = rho.dims[side]
    mi = mutual_information(rho, BIPARTITE_CUT)
    ent_other = von_neumann_entropy(partial_trace(rho, (other,)))

    def objective(umat: np.ndarray) -> float:
        return _discord_fixed_entropies(rho.matrix, rho.dims, side, umat, mi, ent_other)

    # Marginal eigenbasis first: for zero-discord states every basis may
    # reach the floor, and this seed is the one that also diagonalizes the
    # measured marginal (what witness construction downstream wants).
    _, marginal_basis = hermitian_eig(partial_trace(rho, (side,)).matrix)
    seeds = [marginal_basis, np.eye(d_m, dtype=complex)]
    for r in range(restarts):
        seeds.append(haar_unitary(d_m, substream(seed, 0x5EED, r)))

    n_angles = d_m * (d_m - 1)  # (theta, phi) per index pair
    # Theta flips the sign of a 2x2 block under a pi shift, which leaves the
    # basis projectors unchanged only when the block is the whole matrix.
    theta_period = math.pi if d_m == 2 else 2.0 * math.pi
    best_val = math.inf
    best_u = seeds[0]
    for seed_u in seeds:
        angles = np.zeros(n_angles)
        current = objective(seed_u)
        first_sweep = True
        while True:
            previous = current
            for k in range(n_angles):
                period = theta_period if k % 2 == 0 else 2.0 * math.pi

                def line(x: float, k: int = k) -> float:
                    trial = angles.copy()
                    trial[k] = x
                    return objective(_basis_from_angles(seed_u, trial))

                if first_sweep:
                    # Coarse scan guards against multimodal coordinates.
                    grid = angles[k] + np.linspace(-period / 2, period / 2, 17)
                    values = [line(x) for x in grid]
                    j = int(np.argmin(values))
                    pivot, pivot_val = float(grid[j]), float(values[j])
                    span = period / 16
                else:
                    pivot, pivot_val = float(angles[k]), current
                    span = period / 8
                res = minimize_scalar(
                    line, bounds=(pivot - span, pivot + span), method="bounded"
                )
                cand_val, cand_x = (
                    (float(res.fun), float(res.x))
                    if res.fun < pivot_val
                    else (pivot_val, pivot)
                )
                if cand_val < current:
                    angles[k] = cand_x
                    current = cand_val
            first_sweep = False
            if previous - current < 1e-9:
                break
        if current < best_val:
            best_val = current
            best_u = _basis_from_angles(seed_u, angles)
        if best_val < 1e-10:
            break

    # Unmeasured-side witness basis: eigenbasis of a generic mixture of the
    # conditional blocks (distinct weights break accidental degeneracy).
    weights, blocks = _conditional_blocks(rho.matrix, rho.dims, side, best_u)
    mix_weights = 1.0 + 0.37 * np.arange(len(blocks))
    generic = sum(w * b for w, b in zip(mix_weights, blocks))
    generic = generic / max(np.trace(generic).real, 1e-12)
    _, other_basis = hermitian_eig(generic)

    locals_out = [None, None]
    locals_out[side] = best_u
    locals_out[other] = other_basis
    basis = ProductBasis((locals_out[0], locals_out[1]), rho.dims)
    return max(best_val, 0.0) if best_val > -1e-9 else best_val, basis
