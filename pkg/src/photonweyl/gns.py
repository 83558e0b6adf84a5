"""Finite GNS data: Gram matrices and represented Weyl operators.

A family of test functions ``f_1 .. f_N`` spans the (non-orthogonal)
GNS vectors ``v_n = W(f_n) Omega`` with Gram matrix

    G[m, n] = <v_m, v_n> = F(f_m, f_n).

Positivity of the state shows up as positive semidefiniteness of G;
the span is orthonormalized by a rank-revealing pivoted Cholesky
factorization, and represented Weyl operators act by

    W(h) v_f = exp(-i sigma*(h, f)) v_{f + h},

with sigma* the symplectic form exposed by the kernel.
"""

import numpy as np
from scipy.linalg import lapack

from .errors import ConfigurationError


def gram_matrix(kernel, fns):
    """Hermitian Gram matrix G[m, n] = F(f_m, f_n)."""
    n = len(fns)
    G = np.empty((n, n), dtype=complex)
    for m in range(n):
        G[m, m] = kernel.corr(fns[m], fns[m])
        for k in range(m + 1, n):
            val = kernel.corr(fns[m], fns[k])
            G[m, k] = val
            G[k, m] = np.conj(val)
    return G


def positivity_report(G, tol=1e-10):
    """Eigenvalue-based positivity diagnostics of a Gram matrix."""
    G = np.asarray(G, dtype=complex)
    herm = float(np.max(np.abs(G - G.conj().T)))
    sym = 0.5 * (G + G.conj().T)
    eigs = np.linalg.eigvalsh(sym)
    max_eig = float(eigs[-1])
    min_eig = float(eigs[0])
    scale = max(max_eig, 1.0)
    return {
        "hermiticity_residual": herm,
        "eigenvalues": eigs,
        "min_eigenvalue": min_eig,
        "max_eigenvalue": max_eig,
        "rank": int(np.count_nonzero(eigs > tol * scale)),
        "positive": bool(min_eig >= -tol * scale),
    }


def orthonormal_basis(G, drop_tol=1e-10):
    """Coefficients of an orthonormal basis of the span, by pivoted Cholesky.

    Returns ``(coeffs, rank, piv)`` where column j of `coeffs` gives the
    expansion e_j = sum_n coeffs[n, j] v_n of an orthonormal vector;
    directions whose pivot falls below `drop_tol` times the largest
    diagonal are dropped (null directions of a degenerate Gram).
    """
    G = np.asarray(G, dtype=complex)
    n = G.shape[0]
    scale = float(np.max(np.abs(np.diag(G)))) if n else 0.0
    if scale == 0.0:
        return np.zeros((n, 0), dtype=complex), 0, np.arange(n)
    c, piv, rank, info = lapack.zpstrf(G, lower=0, tol=drop_tol * scale)
    if info < 0:
        raise ConfigurationError("pivoted Cholesky failed (info=%d)" % info)
    piv = np.asarray(piv, dtype=int) - 1  # LAPACK is 1-based
    rank = int(rank)
    U = np.triu(c)[:rank, :rank]
    # P^T G P = U^H U on the leading rank block, so the columns of
    # P U^{-1} expand an orthonormal basis of the span.
    inv_u = np.linalg.inv(U)
    coeffs = np.zeros((n, rank), dtype=complex)
    coeffs[piv[:rank], :] = inv_u
    return coeffs, rank, piv


def gram_rank(G, drop_tol=1e-10):
    return orthonormal_basis(G, drop_tol)[1]


def covariance_residual(kernel, fns, h):
    """Weyl covariance of the kernel under the argument shift h.

    For every pair the identity

        exp(i [sigma*(h, f_m) - sigma*(h, f_n)]) F(f_m + h, f_n + h)
            = F(f_m, f_n)

    must hold; returns the largest absolute violation.
    """
    worst = 0.0
    shifted = [f + h for f in fns]
    for m, fm in enumerate(fns):
        for n, fn in enumerate(fns):
            phase = np.exp(
                1j * (kernel.sigma_star(h, fm) - kernel.sigma_star(h, fn))
            )
            lhs = phase * kernel.corr(shifted[m], shifted[n])
            worst = max(worst, abs(lhs - kernel.corr(fm, fn)))
    return float(worst)


def weyl_consistency(kernel, fns, h1, h2, drop_tol=1e-10):
    """Represented Weyl product relation on a finite GNS family.

    Builds the extended family with argument shifts {0, h1, h2, h1+h2},
    orthonormalizes its Gram, and compares the coordinate action of
    W(h1) W(h2) with exp(-i sigma*(h1, h2)) W(h1 + h2) on the base
    block, along with the unitarity defect of W(h2).  Returns a dict of
    residuals (normalized by the largest coordinate magnitude) plus the
    rank of the extended Gram.
    """
    n0 = len(fns)
    h12 = h1 + h2
    shifted2 = [f + h2 for f in fns]
    family = (
        list(fns)
        + [f + h1 for f in fns]
        + shifted2
        + [f + h12 for f in fns]
    )
    G = gram_matrix(kernel, family)
    coeffs, rank, _ = orthonormal_basis(G, drop_tol)
    coords = coeffs.conj().T @ G  # coords[:, k] of v_{family[k]}

    def block(s):
        return slice(s * n0, (s + 1) * n0)

    sig = kernel.sigma_star
    # W(h2) v_j, then W(h1) applied to it, versus W(h1 + h2) v_j.
    ph2 = np.array([np.exp(-1j * sig(h2, f)) for f in fns])
    ph12_chain = np.array(
        [np.exp(-1j * (sig(h2, fns[j]) + sig(h1, shifted2[j]))) for j in range(n0)]
    )
    ph12_direct = np.array([np.exp(-1j * sig(h12, f)) for f in fns])

    w2 = coords[:, block(2)] * ph2[None, :]
    chain = coords[:, block(3)] * ph12_chain[None, :]
    direct = np.exp(-1j * sig(h1, h2)) * coords[:, block(3)] * ph12_direct[None, :]
    scale = max(float(np.max(np.abs(direct))), 1e-300)
    product_residual = float(np.max(np.abs(chain - direct))) / scale

    base = coords[:, block(0)]
    unitarity_residual = float(
        np.max(np.abs(w2.conj().T @ w2 - base.conj().T @ base))
    )
    return {
        "product_residual": product_residual,
        "unitarity_residual": unitarity_residual,
        "rank": rank,
        "gram_size": 4 * n0,
    }
