"""Dense reference implementations, written independently of the solver."""

import numpy as np

_GAUSS = (0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0))


def _local_gradients(u, v):
    # bilinear shape functions on the unit square, corners (0,0),(1,0),(0,1),(1,1)
    return np.array([
        [-(1 - v), -(1 - u)],
        [(1 - v), -u],
        [-v, (1 - u)],
        [v, u],
    ])


def element_stiffness():
    """Exact (2x2 Gauss) gradient products on one square cell; h-independent in 2D."""
    K = np.zeros((4, 4))
    for u in _GAUSS:
        for v in _GAUSS:
            g = _local_gradients(u, v)
            K += 0.25 * g @ g.T
    return K


def dense_stiffness(m):
    """Assemble B_ij = (grad phi_i, grad phi_j) over all (m-1)^2 cells."""
    n = m - 2
    K = element_stiffness()
    B = np.zeros((n * n, n * n))

    def index(p, q):  # full-grid node (p, q) -> interior index or None
        if 1 <= p <= n and 1 <= q <= n:
            return (p - 1) + (q - 1) * n
        return None

    for cx in range(m - 1):
        for cy in range(m - 1):
            nodes = [index(cx, cy), index(cx + 1, cy), index(cx, cy + 1), index(cx + 1, cy + 1)]
            for a, ia in enumerate(nodes):
                for b, ib in enumerate(nodes):
                    if ia is not None and ib is not None:
                        B[ia, ib] += K[a, b]
    return B


def node_xy(m, D=1.0):
    n = m - 2
    h = D / (m - 1)
    pts = []
    for j in range(n * n):
        pts.append(((j % n + 1) * h, (j // n + 1) * h))
    return np.array(pts)


def dense_g0(w, m, kernel, D=1.0):
    """Double loop G0[w]_i = h^4 sum_j |w_j|^2 V(x_i - x_j)."""
    h = D / (m - 1)
    pts = node_xy(m, D)
    out = np.zeros(len(w))
    for i in range(len(w)):
        for j in range(len(w)):
            d = pts[i] - pts[j]
            out[i] += abs(w[j]) ** 2 * kernel(d[0], d[1])
    return h ** 4 * out


def dense_kernel_matrix(m, kernel, D=1.0):
    pts = node_xy(m, D)
    d = pts[:, None, :] - pts[None, :, :]
    return kernel(d[..., 0], d[..., 1])


def dense_hamiltonian(m, trap, theta, kappa, z_own, z_other, kernel, D=1.0):
    h = D / (m - 1)
    pts = node_xy(m, D)
    Kmat = dense_kernel_matrix(m, kernel, D)
    g_own = h ** 4 * Kmat @ (z_own ** 2)
    g_other = h ** 4 * Kmat @ (z_other ** 2)
    Y = h * h * np.diag(trap(pts[:, 0], pts[:, 1]))
    return (dense_stiffness(m) + Y + theta * np.diag(g_own) + kappa * np.diag(g_other)) / h ** 2


def dense_ground_state(H):
    w, v = np.linalg.eigh(H)
    g = v[:, 0]
    return w[0], g * np.sign(g[np.argmax(np.abs(g))])


def dense_substitution(m, traps, thetas, kappa, masses, z1, z2, kernel, steps, D=1.0):
    """Plain substitution with exact dense eigensolves; returns the list of iterates."""
    h = D / (m - 1)
    out = []
    for _ in range(steps):
        H1 = dense_hamiltonian(m, traps[0], thetas[0], kappa, z1, z2, kernel, D)
        H2 = dense_hamiltonian(m, traps[1], thetas[1], kappa, z2, z1, kernel, D)
        _, g1 = dense_ground_state(H1)
        _, g2 = dense_ground_state(H2)
        z1 = g1 * np.sqrt(masses[0]) / h
        z2 = g2 * np.sqrt(masses[1]) / h
        out.append((z1, z2))
    return out
