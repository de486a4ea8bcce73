"""Dense operator algebra: operators, maps between matrix algebras, Choi matrices.

Conventions used throughout the package:

- Operators are dense complex square matrices.  The tensor product is the
  Kronecker product, so basis vectors of A tensor B are ordered
  lexicographically: index (i, k) of the product maps to i * dim_B + k.
- A linear map E between matrix algebras is stored by its coefficients over
  matrix units, coeff[p, q, i, j] = E(e_ij)[p, q].  Applying the map is a
  single contraction over (i, j).
- The Choi matrix of E is C = sum_ij e_ij tensor E(e_ij), a square matrix on
  the input space tensor the output space.  E is completely positive exactly
  when C is positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError

# Tolerance for identities that should hold to rounding error.
ALGEBRA_TOL = 1e-12
# Default pass/fail tolerance for certificates.
CHECK_TOL = 1e-10


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(a, ord=2))


def _as_square_complex(entries, dim: int | None = None) -> np.ndarray:
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("operator", "square matrix", a.shape)
    if dim is not None and a.shape[0] != dim:
        raise DimensionMismatchError("operator", dim, a.shape[0])
    return a


@dataclass(frozen=True)
class ComplexOperator:
    """Immutable dense complex operator with a declared dimension."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        a = _as_square_complex(self.entries, self.dim)
        a = np.array(a, copy=True)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_array(cls, entries) -> "ComplexOperator":
        a = _as_square_complex(entries)
        return cls(a.shape[0], a)

    @classmethod
    def identity(cls, dim: int) -> "ComplexOperator":
        return cls(dim, np.eye(dim, dtype=complex))

    @classmethod
    def zero(cls, dim: int) -> "ComplexOperator":
        return cls(dim, np.zeros((dim, dim), dtype=complex))

    def adjoint(self) -> "ComplexOperator":
        return ComplexOperator(self.dim, self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def norm(self) -> float:
        return operator_norm(self.entries)

    def is_hermitian(self, tol: float = CHECK_TOL) -> bool:
        return operator_norm(self.entries - self.entries.conj().T) <= tol

    def __add__(self, other: "ComplexOperator") -> "ComplexOperator":
        self._check_same_dim(other)
        return ComplexOperator(self.dim, self.entries + other.entries)

    def __sub__(self, other: "ComplexOperator") -> "ComplexOperator":
        self._check_same_dim(other)
        return ComplexOperator(self.dim, self.entries - other.entries)

    def __neg__(self) -> "ComplexOperator":
        return ComplexOperator(self.dim, -self.entries)

    def __mul__(self, scalar) -> "ComplexOperator":
        return ComplexOperator(self.dim, self.entries * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "ComplexOperator") -> "ComplexOperator":
        self._check_same_dim(other)
        return ComplexOperator(self.dim, self.entries @ other.entries)

    def _check_same_dim(self, other: "ComplexOperator"):
        if self.dim != other.dim:
            raise DimensionMismatchError("operator", self.dim, other.dim)

    def to_json_dict(self) -> dict:
        re = [float(x) for x in self.entries.real.ravel()]
        im = [float(x) for x in self.entries.imag.ravel()]
        return {"dim": self.dim, "re": re, "im": im}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ComplexOperator":
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
        if re.size != dim * dim:
            raise DimensionMismatchError("re", dim * dim, re.size)
        if im.size != dim * dim:
            raise DimensionMismatchError("im", dim * dim, im.size)
        return cls(dim, (re + 1j * im).reshape(dim, dim))


def tensor(a: ComplexOperator, b: ComplexOperator) -> ComplexOperator:
    """Kronecker product with lexicographic index order.

    result[(i * dim_b + k), (j * dim_b + l)] = a[i, j] * b[k, l].
    """
    return ComplexOperator(a.dim * b.dim, np.kron(a.entries, b.entries))


def _matrix_unit(dim: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((dim, dim), dtype=complex)
    e[i, j] = 1.0
    return e


@dataclass(frozen=True)
class OperatorMap:
    """Linear map from one matrix algebra to another, stored over matrix units."""

    dim_in: int
    dim_out: int
    coeff: np.ndarray  # coeff[p, q, i, j] = map(e_ij)[p, q]

    def __post_init__(self):
        c = np.asarray(self.coeff, dtype=complex)
        want = (self.dim_out, self.dim_out, self.dim_in, self.dim_in)
        if c.shape != want:
            raise DimensionMismatchError("coefficient tensor", want, c.shape)
        c = np.array(c, copy=True)
        c.setflags(write=False)
        object.__setattr__(self, "coeff", c)

    @classmethod
    def from_function(
        cls, dim_in: int, dim_out: int, fn: Callable[[np.ndarray], np.ndarray]
    ) -> "OperatorMap":
        """Build the coefficient tensor by evaluating fn on every matrix unit."""
        coeff = np.zeros((dim_out, dim_out, dim_in, dim_in), dtype=complex)
        for i in range(dim_in):
            for j in range(dim_in):
                out = np.asarray(fn(_matrix_unit(dim_in, i, j)), dtype=complex)
                if out.shape != (dim_out, dim_out):
                    raise DimensionMismatchError("output", (dim_out, dim_out), out.shape)
                coeff[:, :, i, j] = out
        return cls(dim_in, dim_out, coeff)

    @classmethod
    def from_kraus(cls, dim_in: int, dim_out: int, kraus: Sequence[np.ndarray]) -> "OperatorMap":
        """Map W -> sum_s K_s W K_s^dagger for rectangular Kraus operators."""
        coeff = np.zeros((dim_out, dim_out, dim_in, dim_in), dtype=complex)
        for k in kraus:
            k = np.asarray(k, dtype=complex)
            if k.shape != (dim_out, dim_in):
                raise DimensionMismatchError("kraus", (dim_out, dim_in), k.shape)
            coeff += np.einsum("pi,qj->pqij", k, k.conj())
        return cls(dim_in, dim_out, coeff)

    def apply(self, w) -> ComplexOperator:
        m = w.entries if isinstance(w, ComplexOperator) else np.asarray(w, dtype=complex)
        if m.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatchError("input", (self.dim_in, self.dim_in), m.shape)
        return ComplexOperator(self.dim_out, np.einsum("pqij,ij->pq", self.coeff, m))

    def apply_array(self, m: np.ndarray) -> np.ndarray:
        """apply() without the wrapper, for inner loops."""
        return np.einsum("pqij,ij->pq", self.coeff, m)

    def choi(self) -> "ChoiMatrix":
        mat = np.transpose(self.coeff, (2, 0, 3, 1)).reshape(
            self.dim_in * self.dim_out, self.dim_in * self.dim_out
        )
        return ChoiMatrix(self.dim_in, self.dim_out, mat)


@dataclass(frozen=True)
class BipartiteMap(OperatorMap):
    """OperatorMap whose input algebra is a tensor product of two factors."""

    dim_in1: int
    dim_in2: int

    def __post_init__(self):
        if self.dim_in1 * self.dim_in2 != self.dim_in:
            raise DimensionMismatchError(
                "input factors", self.dim_in, (self.dim_in1, self.dim_in2)
            )
        super().__post_init__()

    @classmethod
    def build(
        cls,
        dim_in1: int,
        dim_in2: int,
        dim_out: int,
        fn: Callable[[np.ndarray], np.ndarray],
    ) -> "BipartiteMap":
        base = OperatorMap.from_function(dim_in1 * dim_in2, dim_out, fn)
        return cls(base.dim_in, base.dim_out, base.coeff, dim_in1, dim_in2)

    @classmethod
    def build_from_kraus(
        cls, dim_in1: int, dim_in2: int, dim_out: int, kraus: Sequence[np.ndarray]
    ) -> "BipartiteMap":
        base = OperatorMap.from_kraus(dim_in1 * dim_in2, dim_out, kraus)
        return cls(base.dim_in, base.dim_out, base.coeff, dim_in1, dim_in2)

    def apply_pair(self, a: ComplexOperator, b: ComplexOperator) -> ComplexOperator:
        """Apply to a product input a tensor b, checking each factor."""
        if a.dim != self.dim_in1:
            raise DimensionMismatchError("first input factor", self.dim_in1, a.dim)
        if b.dim != self.dim_in2:
            raise DimensionMismatchError("second input factor", self.dim_in2, b.dim)
        return self.apply(np.kron(a.entries, b.entries))


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix sum_ij e_ij tensor E(e_ij) of a map between matrix algebras."""

    dim_in: int
    dim_out: int
    mat: np.ndarray

    def __post_init__(self):
        m = _as_square_complex(self.mat, self.dim_in * self.dim_out)
        m = np.array(m, copy=True)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def hermiticity_defect(self) -> float:
        return operator_norm(self.mat - self.mat.conj().T)

    def min_eigenvalue(self) -> float:
        herm = (self.mat + self.mat.conj().T) / 2
        return float(np.linalg.eigvalsh(herm)[0])


@dataclass(frozen=True)
class CpuCertificate:
    """Result of a complete-positivity and unitality check."""

    cp: bool
    unital: bool
    min_eigenvalue: float
    unitality_deviation: float
    choi_defect: float

    def to_json_dict(self) -> dict:
        return {
            "cp": self.cp,
            "unital": self.unital,
            "min_eigenvalue": self.min_eigenvalue,
            "unitality_deviation": self.unitality_deviation,
            "choi_defect": self.choi_defect,
        }


def certify_cpu(m: OperatorMap, tol: float = CHECK_TOL) -> CpuCertificate:
    """Certify that a map is completely positive and unital.

    cp holds when the Choi matrix is Hermitian to within tol and its smallest
    eigenvalue is >= -tol.  unital holds when the image of the identity is the
    identity to within tol in operator norm.
    """
    choi = m.choi()
    defect = choi.hermiticity_defect()
    min_eig = choi.min_eigenvalue()
    image_of_identity = m.apply_array(np.eye(m.dim_in, dtype=complex))
    unit_dev = operator_norm(image_of_identity - np.eye(m.dim_out, dtype=complex))
    return CpuCertificate(
        cp=bool(min_eig >= -tol and defect <= tol),
        unital=bool(unit_dev <= tol),
        min_eigenvalue=min_eig,
        unitality_deviation=unit_dev,
        choi_defect=defect,
    )


def hermitian_eigenvalues(a: ComplexOperator, tol: float = CHECK_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian operator.

    Raises NonHermitianError with the measured asymmetry when the input is not
    Hermitian to within tol.
    """
    asym = operator_norm(a.entries - a.entries.conj().T)
    if asym > tol:
        raise NonHermitianError(asym, tol)
    return np.linalg.eigvalsh(a.entries)
