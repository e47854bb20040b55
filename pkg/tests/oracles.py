"""Independent reference implementations used only by the tests.

Everything here is deliberately naive (explicit pseudo-inverse refits,
coordinate descent, dense masked products) so it shares no code path with
the package under test.
"""

import numpy as np


def greedy_pursuit_oracle(X, x, max_steps, residual_tol=1e-8, ortho_tol=1e-8):
    """Forward greedy selection with an explicit pinv refit at every step.

    Returns (selection order, betas per step, residual norms per step).
    """
    n = X.shape[1]
    selected = []
    betas, rnorms = [], []
    r = x.copy()
    for _ in range(max_steps):
        corr = X.T @ r
        j = int(np.argmax(np.abs(corr)))
        selected.append(j)
        sub = X[:, selected]
        beta = np.linalg.pinv(sub) @ x
        r = x - sub @ beta
        betas.append(beta)
        rnorms.append(float(np.linalg.norm(r)))
        if rnorms[-1] < residual_tol:
            break
        if np.max(np.abs(X.T @ r)) <= ortho_tol:
            break
    return selected, betas, rnorms


def cd_lasso(X, x, lam, max_sweeps=500000, tol=1e-12):
    """Coordinate-descent lasso for min ||x - X b||^2 / 2 + lam ||b||_1."""
    n = X.shape[1]
    beta = np.zeros(n)
    col_sq = np.sum(X**2, axis=0)
    r = x.copy()
    for _ in range(max_sweeps):
        delta = 0.0
        for j in range(n):
            if col_sq[j] == 0.0:
                continue
            old = beta[j]
            rho = X[:, j] @ r + col_sq[j] * old
            new = np.sign(rho) * max(abs(rho) - lam, 0.0) / col_sq[j]
            if new != old:
                r += X[:, j] * (old - new)
                beta[j] = new
                delta = max(delta, abs(new - old))
        if delta < tol:
            break
    return beta


def normal_equation_beta(X, x):
    """Least squares via the normal equations (full-column-rank X only)."""
    return np.linalg.solve(X.T @ X, X.T @ x)


def masked_residuals_dense(X, beta, labels, x, n_classes):
    """Class residuals from the literal definition with dense masked vectors."""
    out = np.zeros(n_classes)
    for k in range(1, n_classes + 1):
        beta_k = np.where(labels == k, beta, 0.0)
        out[k - 1] = np.linalg.norm(x - X @ beta_k)
    return out


def masked_norms_dense(X, beta, labels, n_classes):
    """(own, complement) contribution norms from dense masked vectors."""
    own = np.zeros(n_classes)
    comp = np.zeros(n_classes)
    for k in range(1, n_classes + 1):
        beta_k = np.where(labels == k, beta, 0.0)
        own[k - 1] = np.linalg.norm(X @ beta_k)
        comp[k - 1] = np.linalg.norm(X @ (beta - beta_k))
    return own, comp


def projection_angle(x, M):
    """Angle between x and span(M) from an SVD-orthonormalized basis."""
    U, s, _ = np.linalg.svd(np.atleast_2d(M), full_matrices=False)
    U = U[:, s > 1e-12 * max(s[0], 1e-300)]
    cos = np.linalg.norm(U.T @ x) / np.linalg.norm(x)
    return float(np.arccos(np.clip(cos, 0.0, 1.0)))
