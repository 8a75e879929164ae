"""
Factorizations of symmetric positive definite precision matrices.

Small systems use a dense Cholesky factor; larger ones use a sparse LU with
symmetric fill-reducing ordering and no off-diagonal pivoting, which for an
SPD matrix is an LDL' factorization in disguise. A factor is immutable once
built and may be shared between threads for concurrent solves.
"""

from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from config import GMRF_CONFIG, INFERENCE_CONFIG

from .exceptions import FactorizationError


class PrecisionFactor:
    """Factorization of an SPD matrix Q supporting solves, log-determinants and inverse entries"""

    def __init__(self, matrix, dense_limit: Optional[int] = None, label: str = "precision"):
        Q = sp.csc_matrix(matrix) if sp.issparse(matrix) else sp.csc_matrix(np.asarray(matrix, dtype=float))
        self.n = int(Q.shape[0])
        self.label = label
        limit = INFERENCE_CONFIG["dense_latent_limit"] if dense_limit is None else dense_limit
        self.dense = self.n <= limit
        self._chunk = GMRF_CONFIG["solve_chunk_size"]

        if self.dense:
            try:
                self._cho = sla.cho_factor(Q.toarray(), lower=True, check_finite=True)
            except (np.linalg.LinAlgError, ValueError) as exc:
                raise FactorizationError(f"{label} is not positive definite ({exc})",
                                         {"label": label, "n": self.n, "backend": "dense"})
            diag = np.diag(self._cho[0])
            self._logdet = float(2.0 * np.sum(np.log(diag)))
        else:
            try:
                self._lu = spla.splu(Q, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                                     options={"SymmetricMode": True})
            except RuntimeError as exc:
                raise FactorizationError(f"{label} is singular ({exc})",
                                         {"label": label, "n": self.n, "backend": "sparse"})
            diag = self._lu.U.diagonal()
            if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
                raise FactorizationError(f"{label} is not positive definite",
                                         {"label": label, "n": self.n, "backend": "sparse",
                                          "min_pivot": float(np.min(diag))})
            self._logdet = float(np.sum(np.log(diag)))

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Q^{-1} rhs for a vector or a column block"""
        rhs = np.asarray(rhs, dtype=float)
        if self.dense:
            return sla.cho_solve(self._cho, rhs, check_finite=False)
        return self._lu.solve(rhs)

    def logdet(self) -> float:
        return self._logdet

    def inverse(self) -> np.ndarray:
        """Full dense inverse; only sensible for the dense backend"""
        return self.solve(np.eye(self.n))

    def inverse_columns(self, columns: Sequence[int]) -> np.ndarray:
        """Columns of Q^{-1}, shape (n, len(columns))"""
        columns = np.asarray(columns, dtype=np.int64)
        unit = np.zeros((self.n, len(columns)))
        unit[columns, np.arange(len(columns))] = 1.0
        return self.solve(unit)

    def diag_inverse(self) -> np.ndarray:
        """Diagonal of Q^{-1}, by chunked unit-vector solves on the sparse backend"""
        if self.dense:
            return np.diag(self.inverse()).copy()
        out = np.empty(self.n)
        for start in range(0, self.n, self._chunk):
            cols = np.arange(start, min(start + self._chunk, self.n))
            block = self.inverse_columns(cols)
            out[cols] = block[cols, np.arange(len(cols))]
        return out

    def quadratic_diag(self, design: sp.spmatrix) -> np.ndarray:
        """diag(A Q^{-1} A') for a row design matrix A"""
        A = sp.csr_matrix(design)
        if self.dense:
            Z = self.solve(A.T.toarray())
            return np.asarray((A.multiply(Z.T)).sum(axis=1)).ravel()
        out = np.empty(A.shape[0])
        At = A.T.tocsc()
        for start in range(0, A.shape[0], self._chunk):
            stop = min(start + self._chunk, A.shape[0])
            Z = self.solve(At[:, start:stop].toarray())
            out[start:stop] = np.asarray(A[start:stop].multiply(Z.T).sum(axis=1)).ravel()
        return out


class ConstrainedFactor:
    """
    Gaussian N(., Q^{-1}) conditioned on Cx = 0 (conditioning by kriging).

    Covariance: Q^{-1} - V W^{-1} V' with V = Q^{-1}C', W = C V.
    """

    def __init__(self, factor: PrecisionFactor, constraints: np.ndarray):
        self.factor = factor
        self.C = np.atleast_2d(np.asarray(constraints, dtype=float)) if np.size(constraints) else \
            np.zeros((0, factor.n))
        self.k = int(self.C.shape[0])
        if self.k:
            self.V = factor.solve(self.C.T)
            self.W = self.C @ self.V
            try:
                self._W_cho = sla.cho_factor(self.W, lower=True)
            except np.linalg.LinAlgError as exc:
                raise FactorizationError(f"constraint system is rank deficient ({exc})",
                                         {"constraints": self.k})
        else:
            self.V = np.zeros((factor.n, 0))
            self.W = np.zeros((0, 0))

    def correct(self, x: np.ndarray) -> np.ndarray:
        """x - V W^{-1} C x; works column-wise for blocks"""
        if not self.k:
            return x
        return x - self.V @ sla.cho_solve(self._W_cho, self.C @ x)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Constrained covariance applied to rhs"""
        return self.correct(self.factor.solve(rhs))

    def marginal_variances(self) -> np.ndarray:
        base = self.factor.diag_inverse()
        if not self.k:
            return base
        VW = sla.cho_solve(self._W_cho, self.V.T).T
        return base - np.sum(VW * self.V, axis=1)

    def covariance_block(self, indices: Sequence[int]) -> np.ndarray:
        """Constrained covariance restricted to ``indices``"""
        indices = np.asarray(indices, dtype=np.int64)
        cols = self.factor.inverse_columns(indices)
        block = cols[indices, :]
        if self.k:
            Vi = self.V[indices, :]
            block = block - Vi @ sla.cho_solve(self._W_cho, Vi.T)
        return block

    def quadratic_diag(self, design: sp.spmatrix) -> np.ndarray:
        """diag(A Sigma A') under the constrained covariance"""
        base = self.factor.quadratic_diag(design)
        if not self.k:
            return base
        AV = sp.csr_matrix(design) @ self.V
        return base - np.sum(sla.cho_solve(self._W_cho, AV.T).T * AV, axis=1)

    def log_constraint_correction(self) -> float:
        """0.5 log|C Q^{-1} C'| - 0.5 log|C C'|; zero without constraints"""
        if not self.k:
            return 0.0
        _, logdet_w = np.linalg.slogdet(self.W)
        _, logdet_cc = np.linalg.slogdet(self.C @ self.C.T)
        return 0.5 * (logdet_w - logdet_cc)


def sparse_logdet(matrix: sp.spmatrix) -> float:
    """log|Q| of an SPD matrix through the sparse backend"""
    return PrecisionFactor(matrix, dense_limit=0, label="logdet").logdet()
