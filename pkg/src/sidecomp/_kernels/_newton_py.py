"""Pure-numpy damped-Newton idempotent search (fallback backend).

Solves F(c) = vec(P(c)^2 - P(c)) = 0 for P(c) = sum_m c_m B_m over a fixed
matrix basis, one independent run per start vector. The compiled backend
in ``_newton.pyx`` mirrors this step for step.
"""

import numpy as np

__all__ = ["newton_search"]


def newton_search(basis, starts, max_iter=100, damping=0.5, ftol=1e-13):
    """Run damped Newton from each start; return (coefficients, converged).

    Parameters
    ----------
    basis : (d, n, n) complex array
        Matrix basis; P(c) = sum_m c[m] * basis[m].
    starts : (t, d) complex array
        Initial coefficient vectors, one row per independent run.
    max_iter : int
        Iteration cap per run.
    damping : float
        Fixed Newton step fraction.
    ftol : float
        Run counts as converged when ||P^2 - P||_F <= ftol.

    Returns
    -------
    coeffs : (t, d) complex array of final coefficients.
    converged : (t,) bool array.
    """
    basis = np.ascontiguousarray(basis, dtype=np.complex128)
    starts = np.ascontiguousarray(
        np.atleast_2d(np.asarray(starts, dtype=np.complex128))
    )
    d, n, _ = basis.shape
    runs = starts.shape[0]
    coeffs = np.array(starts, copy=True)
    converged = np.zeros(runs, dtype=bool)
    eye = np.eye(d)

    for t in range(runs):
        c = starts[t].copy()
        ok = False
        for _ in range(max_iter):
            p = np.tensordot(c, basis, axes=1)
            f = (p @ p - p).reshape(-1)
            fn = float(np.linalg.norm(f))
            if not np.isfinite(fn) or float(np.linalg.norm(c)) > 1e8:
                break
            if fn <= ftol:
                ok = True
                break
            bp = basis @ p
            pb = p @ basis
            jac = (bp + pb - basis).reshape(d, n * n).T
            gram = jac.conj().T @ jac
            # tiny Tikhonov term keeps the step defined on solution manifolds
            ridge = 1e-12 * max(float(np.max(gram.real.diagonal())), 1e-300)
            try:
                delta = np.linalg.solve(gram + ridge * eye, -(jac.conj().T @ f))
            except np.linalg.LinAlgError:
                break
            c = c + damping * delta
        coeffs[t] = c
        converged[t] = ok
    return coeffs, converged
