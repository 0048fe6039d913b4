"""Dense linear algebra for a three-qubit register.

States are plain complex ndarrays. A density matrix is 8x8, indexed in the
binary product basis |q1 q2 q3> with qubit 1 the leftmost tensor factor, so
row index a = 4*a1 + 2*a2 + a3 runs |000>, |001>, ..., |111>. Kets are
length-8 vectors in the same order. Nothing here is specific to the NMR
realization; higher modules attach physics to these arrays.
"""

import json

import numpy as np

__all__ = [
    "NonHermitianError",
    "PhysicalityError",
    "kron",
    "hermitian_eigs",
    "partial_transpose",
    "partial_trace",
    "matrix_exp_hermitian",
    "save_matrix",
    "load_matrix",
    "check_density",
    "ID2",
    "SX",
    "SY",
    "SZ",
]

HERM_ATOL = 1e-9

#
# Pauli matrices, reused everywhere
#

ID2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


class NonHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not.

    Carries the largest elementwise asymmetry |m - m^dag| in
    ``max_asymmetry``.
    """

    def __init__(self, max_asymmetry):
        self.max_asymmetry = float(max_asymmetry)
        super().__init__(
            "matrix is not Hermitian, max |m - m^dag| = %.3e" % self.max_asymmetry
        )


class PhysicalityError(ValueError):
    """Raised when an array fails a density-matrix check."""


def kron(a, b):
    """Kronecker product of two operators.

    Parameters
    ----------
    a, b : ndarray
        Square complex matrices.

    Returns
    -------
    ndarray
        Matrix of shape (dim(a)*dim(b), dim(a)*dim(b)); ``a`` acts on the
        left (more significant) factor.
    """
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermitian_eigs(m, atol=HERM_ATOL):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : ndarray
        Hermitian matrix.
    atol : float
        Largest tolerated elementwise asymmetry before the input is
        rejected.

    Returns
    -------
    (ndarray, ndarray)
        Eigenvalues in ascending order, and the matrix whose columns are
        the matching orthonormal eigenvectors.

    Raises
    ------
    NonHermitianError
        If max |m - m^dag| exceeds ``atol``.
    """
    m = np.asarray(m, dtype=complex)
    asym = np.max(np.abs(m - m.conj().T))
    if asym > atol:
        raise NonHermitianError(asym)
    vals, vecs = np.linalg.eigh(m)
    return vals, vecs


def partial_transpose(rho, qubit):
    """Transpose one qubit's indices of a three-qubit density matrix.

    Parameters
    ----------
    rho : ndarray
        8x8 density matrix.
    qubit : int
        1, 2 or 3; qubit 1 is the leftmost tensor factor.

    Returns
    -------
    ndarray
        8x8 partial transpose. Hermitian and unit trace whenever the input
        is, but not necessarily positive.
    """
    if qubit not in (1, 2, 3):
        raise ValueError("qubit must be 1, 2 or 3, got %r" % (qubit,))
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2, 2, 2)
    # axes: (a1, a2, a3, b1, b2, b3); swap the row/column index of one qubit
    k = qubit - 1
    r = np.swapaxes(r, k, k + 3)
    return r.reshape(8, 8)


def partial_trace(rho, keep):
    """Trace out all qubits not listed in ``keep``.

    Parameters
    ----------
    rho : ndarray
        8x8 density matrix.
    keep : sequence of int
        Qubit labels (1..3) to retain, e.g. (1, 3). Order in the result
        follows the label order, ascending.

    Returns
    -------
    ndarray
        Reduced density matrix of dimension 2**len(keep).
    """
    keep = sorted(set(int(q) for q in keep))
    if not keep or any(q not in (1, 2, 3) for q in keep):
        raise ValueError("keep must be a non-empty subset of {1, 2, 3}")
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2, 2, 2)
    labels = [1, 2, 3]
    for q in [q for q in (3, 2, 1) if q not in keep]:
        k = labels.index(q)
        r = np.trace(r, axis1=k, axis2=k + len(labels))
        labels.remove(q)
    dim = 2 ** len(labels)
    return r.reshape(dim, dim)


def matrix_exp_hermitian(h, scale=1.0):
    """exp(1j * scale * h) for Hermitian ``h`` via eigendecomposition.

    Parameters
    ----------
    h : ndarray
        Hermitian matrix.
    scale : float
        Real prefactor inside the exponent. Propagators use
        ``scale = -t`` for evolution exp(-i h t).

    Returns
    -------
    ndarray
        Unitary matrix V diag(exp(1j*scale*lam)) V^dag.
    """
    vals, vecs = hermitian_eigs(h)
    phases = np.exp(1j * float(scale) * vals)
    return (vecs * phases) @ vecs.conj().T


#
# Matrix interchange format: a small JSON document with the dimension and
# the row-major entries as [re, im] pairs, reals printed at 17 significant
# digits so the round trip is exact for doubles.
#


def save_matrix(path, m):
    """Write a complex matrix to ``path`` in the interchange format."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (m.shape,))
    dim = m.shape[0]
    rows = []
    for v in m.reshape(-1):
        rows.append("[%s, %s]" % (format(v.real, ".17g"), format(v.imag, ".17g")))
    text = '{\n  "dim": %d,\n  "entries": [\n    %s\n  ]\n}\n' % (
        dim,
        ",\n    ".join(rows),
    )
    with open(path, "w") as f:
        f.write(text)


def load_matrix(path):
    """Read a matrix written by :func:`save_matrix`."""
    with open(path) as f:
        doc = json.load(f)
    dim = int(doc["dim"])
    entries = doc["entries"]
    if len(entries) != dim * dim:
        raise ValueError(
            "entry count %d does not match dim %d" % (len(entries), dim)
        )
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(dim, dim)


def check_density(rho, trace_atol=1e-8, herm_atol=HERM_ATOL, eig_floor=-1e-6):
    """Validate a density matrix; raise PhysicalityError on failure.

    Checks trace within ``trace_atol`` of 1, Hermiticity within
    ``herm_atol``, and smallest eigenvalue above ``eig_floor``.
    Returns the matrix unchanged on success.
    """
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_atol:
        raise PhysicalityError("trace %r deviates from 1 by %.3e" % (tr, abs(tr - 1)))
    asym = np.max(np.abs(rho - rho.conj().T))
    if asym > herm_atol:
        raise PhysicalityError("Hermiticity violated, max asymmetry %.3e" % asym)
    vals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if vals[0] < eig_floor:
        raise PhysicalityError("negative eigenvalue %.3e" % vals[0])
    return rho
