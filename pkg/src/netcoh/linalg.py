"""Dense complex linear algebra for small multi-qubit systems.

Matrices are plain complex numpy arrays.  Index convention, used everywhere
in the package: subsystem 0 is the most significant tensor factor, i.e.
``tensor(a, b)`` indexes basis states as ``|i_a i_b>`` with ``i_a`` varying
slowest (the ``numpy.kron`` convention).

Tolerance tiers: 1e-10 for exact-identity checks, 1e-9 for spectral
reconstructions and unitarity.  These leave two orders of margin above
double-precision accumulation at the dimensions supported here (d <= 4096).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

ATOL_IDENTITY = 1e-10
ATOL_SPECTRAL = 1e-9
PSD_FLOOR = -1e-9

JACOBI_OFFDIAG_THRESHOLD = 1e-12
JACOBI_MAX_SWEEPS = 100


class DimensionMismatchError(ValueError):
    """Operands have incompatible shapes or subsystem signatures."""


class NotHermitianError(ValueError):
    """A Hermitian matrix was required."""


class InvalidStateError(ValueError):
    """A density-matrix invariant (hermiticity, trace, PSD) is violated."""


def as_square_matrix(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def matrices_equal(a: np.ndarray, b: np.ndarray, atol: float = ATOL_IDENTITY) -> bool:
    """Entrywise equality with an explicit absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b)) <= atol)


def is_hermitian(m: np.ndarray, atol: float = ATOL_IDENTITY) -> bool:
    a = np.asarray(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= atol)


def is_unitary(m: np.ndarray, atol: float = ATOL_SPECTRAL) -> bool:
    a = as_square_matrix(m)
    return matrices_equal(a.conj().T @ a, np.eye(a.shape[0]), atol)


def tensor(*operands: np.ndarray) -> np.ndarray:
    """Kronecker product; the first operand is the most significant factor."""
    if not operands:
        raise ValueError("tensor() needs at least one operand")
    mats = [np.asarray(op, dtype=complex) for op in operands]
    return reduce(np.kron, mats)


# ---------------------------------------------------------------------------
# Density matrices


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix with a subsystem-dimension signature.

    Invariants checked at construction: hermiticity within 1e-10, unit trace
    within 1e-10, and positive semidefiniteness with eigenvalues permitted
    down to -1e-9 (roundoff floor); anything more negative is a hard error.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = as_square_matrix(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims):
            raise DimensionMismatchError(f"subsystem dims must be positive, got {dims}")
        if int(np.prod(dims)) != mat.shape[0]:
            raise DimensionMismatchError(
                f"dims {dims} do not multiply to matrix dimension {mat.shape[0]}"
            )
        herm_err = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_err > ATOL_IDENTITY:
            raise InvalidStateError(f"not Hermitian: max |rho_ij - conj(rho_ji)| = {herm_err:.3e}")
        trace_err = abs(complex(np.trace(mat)) - 1.0)
        if trace_err > ATOL_IDENTITY:
            raise InvalidStateError(f"trace differs from 1 by {trace_err:.3e}")
        sym = (mat + mat.conj().T) / 2.0
        _require_psd(sym)
        object.__setattr__(self, "matrix", sym)
        object.__setattr__(self, "dims", dims)
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def subsystem_count(self) -> int:
        return len(self.dims)

    @classmethod
    def from_vector(cls, psi: np.ndarray, dims: Sequence[int]) -> "DensityMatrix":
        """Projector onto a (normalized) pure state vector."""
        v = np.asarray(psi, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidStateError("zero vector cannot define a state")
        v = v / norm
        return cls(np.outer(v, v.conj()), tuple(dims))

    def marginal(self, keep: Iterable[int]) -> "DensityMatrix":
        return partial_trace(self, keep)


def _require_psd(sym: np.ndarray) -> None:
    # Cholesky of rho + (|floor| + slack) I succeeds iff min eigenvalue is
    # above the PSD floor, up to rounding; cheap certificate at any dim.
    shift = -PSD_FLOOR * (1.0 + 1e-6) + 1e-15
    try:
        np.linalg.cholesky(sym + shift * np.eye(sym.shape[0]))
    except np.linalg.LinAlgError:
        raise InvalidStateError(f"not PSD: an eigenvalue lies below {PSD_FLOOR:.1e}") from None


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    dims = tuple(dims)
    d = int(np.prod(dims))
    return DensityMatrix(np.eye(d, dtype=complex) / d, dims)


def _digit_table(dims: tuple[int, ...]) -> np.ndarray:
    """Array of shape (n_subsystems, prod(dims)): digits of each flat index."""
    total = int(np.prod(dims))
    return np.array(np.unravel_index(np.arange(total), dims))


def partial_trace_matrix(mat: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Partial trace of a raw matrix over the subsystems not in ``keep``."""
    dims = tuple(int(d) for d in dims)
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if not keep:
        raise DimensionMismatchError("must keep at least one subsystem")
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {n} subsystems")
    a = as_square_matrix(mat).reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # Trace highest indices first so earlier axis numbers stay valid.
    remaining = list(dims)
    for idx in sorted(traced, reverse=True):
        a = np.trace(a, axis1=idx, axis2=idx + len(remaining))
        del remaining[idx]
    d_keep = int(np.prod([dims[k] for k in keep]))
    return a.reshape(d_keep, d_keep)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the kept subsystems, in their original order."""
    keep = sorted(set(int(k) for k in keep))
    reduced = partial_trace_matrix(rho.matrix, rho.dims, keep)
    return DensityMatrix(reduced, tuple(rho.dims[k] for k in keep))


def permute_subsystems(mat: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: output subsystem k is input subsystem perm[k]."""
    dims = tuple(int(d) for d in dims)
    perm = tuple(int(p) for p in perm)
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise DimensionMismatchError(f"{perm} is not a permutation of {n} subsystems")
    a = as_square_matrix(mat).reshape(dims + dims)
    a = np.transpose(a, perm + tuple(p + n for p in perm))
    d = int(np.prod(dims))
    return a.reshape(d, d)


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose one subsystem's indices; Hermitian and trace-preserving."""
    n = len(rho.dims)
    if subsystem < 0 or subsystem >= n:
        raise DimensionMismatchError(f"subsystem {subsystem} out of range for {n} subsystems")
    dims = rho.dims
    a = rho.matrix.reshape(dims + dims)
    a = np.swapaxes(a, subsystem, subsystem + n)
    d = rho.dim
    return a.reshape(d, d)


# ---------------------------------------------------------------------------
# Hermitian eigendecomposition: cyclic Jacobi rotations


def _offdiag_norm(a: np.ndarray) -> float:
    # Summed directly; the sqrt(||a||^2 - ||diag||^2) shortcut cancels
    # catastrophically once the off-diagonal part is small.
    off = a - np.diag(np.diagonal(a))
    return float(np.linalg.norm(off))


def hermitian_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvector columns).  Convergence is
    declared when the off-diagonal Frobenius norm falls below 1e-12 relative
    to the matrix scale, within at most 100 sweeps.  The reconstruction
    ``V diag(w) V^dag`` matches the input to within 1e-9.
    """
    a = as_square_matrix(m)
    if not is_hermitian(a, ATOL_IDENTITY):
        raise NotHermitianError("hermitian_eig requires a Hermitian matrix")
    a = (a + a.conj().T) / 2.0
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    if d == 1:
        return np.array([a[0, 0].real]), v
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = JACOBI_OFFDIAG_THRESHOLD * scale
    skip = threshold / d  # a full sweep of skipped entries keeps off-norm <= threshold
    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) <= threshold:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                absc = abs(apq)
                if absc <= skip:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / absc
                tau = (app - aqq) / (2.0 * absc)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, -s * phase], [s * np.conj(phase), c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, [p, q]] = v[:, [p, q]] @ rot
    eigvals = np.real(np.diagonal(a)).copy()
    order = np.argsort(eigvals, kind="stable")
    return eigvals[order], v[:, order]


def _canonical_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its largest component is real positive."""
    k = int(np.argmax(np.abs(vec)))
    pivot = vec[k]
    if abs(pivot) == 0.0:
        return vec
    return vec * (np.conj(pivot) / abs(pivot))


def unitary_eig(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a unitary matrix via its commuting Hermitian parts.

    A unitary is normal, so H = (U + U^dag)/2 and K = (U - U^dag)/(2i) commute
    and share an orthonormal eigenbasis; K is diagonalized inside each
    degenerate eigenspace of H.  Columns are ordered by eigenvalue phase in
    [0, 2pi), ties broken by lexicographic order of the (phase-canonicalized)
    eigenvector components.
    """
    a = as_square_matrix(u)
    if not is_unitary(a, ATOL_SPECTRAL):
        raise ValueError("unitary_eig requires a unitary matrix")
    h = (a + a.conj().T) / 2.0
    k = (a - a.conj().T) / 2.0j
    wh, v = hermitian_eig(h)
    d = a.shape[0]
    # Group near-equal eigenvalues of H and diagonalize K inside each block.
    group_tol = 1e-8 * max(1.0, float(np.max(np.abs(wh))))
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and wh[stop] - wh[stop - 1] <= group_tol:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            sub = block.conj().T @ k @ block
            _, w = hermitian_eig(sub)
            v[:, start:stop] = block @ w
        start = stop
    eigvals = np.array([v[:, j].conj() @ a @ v[:, j] for j in range(d)])
    recon_err = float(np.max(np.abs(a - (v * eigvals) @ v.conj().T)))
    if recon_err > ATOL_SPECTRAL:
        raise ArithmeticError(f"unitary eigendecomposition failed to reconstruct: {recon_err:.3e}")
    for j in range(d):
        v[:, j] = _canonical_phase(v[:, j])
    phases = np.mod(np.angle(eigvals), 2.0 * np.pi)
    phases = np.where(phases > 2.0 * np.pi - 1e-9, phases - 2.0 * np.pi, phases)
    lex_keys = [tuple(np.round(v[:, j], 9).view(float)) for j in range(d)]
    order = sorted(range(d), key=lambda j: (round(phases[j] / 1e-9) * 1e-9, lex_keys[j]))
    return eigvals[order], v[:, order]


# ---------------------------------------------------------------------------
# Gate networks

_S2 = np.sqrt(0.5)

GATE_MATRICES: dict[str, np.ndarray] = {
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "T": np.diag([1.0, np.exp(1j * np.pi / 4)]),
    "S": np.diag([1.0, 1.0j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}

TWO_QUBIT_GATES = ("CNOT", "CZ")

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class GateNetwork:
    """Ordered list of gates from {H, T, S, X, Y, Z, CNOT, CZ} on named qubits.

    For CNOT, targets are (control, target).  CZ is symmetric.
    """

    qubit_count: int
    gates: tuple[tuple[str, tuple[int, ...]], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.qubit_count < 1:
            raise ValueError("qubit_count must be positive")
        normalized = []
        for entry in self.gates:
            name, targets = entry
            targets = tuple(int(t) for t in targets)
            if name in GATE_MATRICES:
                if len(targets) != 1:
                    raise ValueError(f"gate {name} takes one target, got {targets}")
            elif name in TWO_QUBIT_GATES:
                if len(targets) != 2 or targets[0] == targets[1]:
                    raise ValueError(f"gate {name} takes two distinct targets, got {targets}")
            else:
                raise ValueError(f"unknown gate name {name!r}")
            if any(t < 0 or t >= self.qubit_count for t in targets):
                raise ValueError(f"targets {targets} out of range for {self.qubit_count} qubits")
            normalized.append((name, targets))
        object.__setattr__(self, "gates", tuple(normalized))


@lru_cache(maxsize=4096)
def _embedded_gate(n: int, name: str, targets: tuple[int, ...]) -> np.ndarray:
    def chain(factors: dict[int, np.ndarray]) -> np.ndarray:
        return tensor(*[factors.get(i, np.eye(2, dtype=complex)) for i in range(n)])

    if name in GATE_MATRICES:
        return chain({targets[0]: GATE_MATRICES[name]})
    if name == "CNOT":
        ctrl, tgt = targets
        return chain({ctrl: _P0}) + chain({ctrl: _P1, tgt: GATE_MATRICES["X"]})
    if name == "CZ":
        a, b = targets
        return chain({a: _P0}) + chain({a: _P1, b: GATE_MATRICES["Z"]})
    raise ValueError(f"unknown gate name {name!r}")


def compile_gate_network(network: GateNetwork) -> np.ndarray:
    """Unitary of the network; the first listed gate is applied first."""
    d = 2**network.qubit_count
    u = np.eye(d, dtype=complex)
    for name, targets in network.gates:
        u = _embedded_gate(network.qubit_count, name, targets) @ u
    return u


# ---------------------------------------------------------------------------
# Random ensembles (seeded by the caller; see rng.substream)


def random_density_matrix(dims: Sequence[int], gen: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random mixed state: normalized G G^dag, Ginibre G."""
    from .rng import ginibre

    dims = tuple(dims)
    d = int(np.prod(dims))
    g = ginibre(d, gen)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dims)


def random_pure_density(dims: Sequence[int], gen: np.random.Generator) -> DensityMatrix:
    """Haar-random pure state projector."""
    dims = tuple(dims)
    d = int(np.prod(dims))
    v = gen.standard_normal(d) + 1j * gen.standard_normal(d)
    return DensityMatrix.from_vector(v, dims)


def random_gate_network(
    qubit_count: int, depth: int, gen: np.random.Generator
) -> GateNetwork:
    names = list(GATE_MATRICES) + list(TWO_QUBIT_GATES)
    gates = []
    for _ in range(depth):
        name = names[int(gen.integers(len(names)))]
        if name in TWO_QUBIT_GATES and qubit_count >= 2:
            pair = gen.choice(qubit_count, size=2, replace=False)
            gates.append((name, (int(pair[0]), int(pair[1]))))
        else:
            if name in TWO_QUBIT_GATES:
                name = "H"
            gates.append((name, (int(gen.integers(qubit_count)),)))
    return GateNetwork(qubit_count, tuple(gates))


# ---------------------------------------------------------------------------
# JSON file formats


def matrix_to_json(m: np.ndarray) -> dict:
    """{"dim": d, "entries": [[re, im], ...]} with row-major entries."""
    a = as_square_matrix(m)
    flat = a.reshape(-1)
    return {"dim": a.shape[0], "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        d = int(obj["dim"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if len(entries) != d * d:
        raise ValueError(f"matrix of dim {d} needs {d * d} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(d, d)


def gate_network_to_json(network: GateNetwork) -> dict:
    return {
        "qubits": network.qubit_count,
        "gates": [{"name": name, "targets": list(t)} for name, t in network.gates],
    }


def gate_network_from_json(obj: dict) -> GateNetwork:
    try:
        n = int(obj["qubits"])
        gates = tuple((g["name"], tuple(g["targets"])) for g in obj["gates"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed gate-network object: {exc}") from exc
    return GateNetwork(n, gates)


def load_matrix(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path: str, m: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)
        fh.write("\n")
