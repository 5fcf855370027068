"""Flat-background spectral operators: twisted Dirac, TT splitting, covers.

Everything in this module is diagonal in Fourier modes, so operators act
exactly on the stored coefficients; no grids are involved.
"""

from __future__ import annotations

import numpy as np

from ..clifford import GammaRep, Spinor, unit_spinor
from .fields import FourierScalarField, FourierSymTensor, TwistedSpinorField

TT_TOL = 1e-10


def spinor_embed_field(
    h: FourierSymTensor, rep: GammaRep, sigma0: Spinor | None = None
) -> TwistedSpinorField:
    """Mode-wise tensor-to-twisted-spinor embedding h_ij -> h_ij (g_i s0) e^j."""
    sig = unit_spinor(rep) if sigma0 is None else sigma0
    gam_sig = np.stack([g @ sig.components for g in rep.gamma])  # (n, spin_dim)
    modes = {}
    for k in h.mode_set():
        modes[k] = h.mode_matrix(k).T @ gam_sig
    return TwistedSpinorField(h.n, rep.spin_dim, modes)


def dirac_symbol(rep: GammaRep, k) -> np.ndarray:
    """sum_a i k_a gamma_a (a Hermitian matrix)."""
    mat = np.zeros((rep.spin_dim, rep.spin_dim), dtype=complex)
    for a, ka in enumerate(k):
        if ka != 0:
            mat += 1j * ka * rep.gamma[a]
    return mat


def twisted_dirac(phi: TwistedSpinorField, rep: GammaRep) -> TwistedSpinorField:
    """Clifford contraction of the flat derivative on the spinor slot.

    Acts as identity on the coframe slot.  The symbol is Hermitian, so the
    operator is its own formal adjoint (checked discretely in tests).
    """
    modes = {}
    for k, a in phi.modes.items():
        modes[k] = a @ dirac_symbol(rep, k).T
    return TwistedSpinorField(phi.n, phi.spin_dim, modes)


def lichnerowicz_flat(h: FourierSymTensor) -> FourierSymTensor:
    """On a flat torus the curvature term vanishes: just the rough Laplacian."""
    return h.rough_laplacian_flat()


def tt_split(h: FourierSymTensor):
    """Unique decomposition h = tt + lie + conf on the flat torus.

    tt is transverse traceless, lie = L_X(flat) for a vector field X, and
    conf = u * flat.  tt is the L2-orthogonal projection of h onto the TT
    subspace (the lie and conf parts are mutually oblique in general).
    Returns (tt, lie, conf) as FourierSymTensor.
    """
    n = h.n
    tt_modes, lie_modes, conf_modes = {}, {}, {}
    eye = np.eye(n)
    for k in h.mode_set():
        hk = h.mode_matrix(k)
        kv = np.array(k, dtype=float)
        k2 = float(kv @ kv)
        if k2 == 0.0:
            u = np.trace(hk) / n
            conf = u * eye
            lie = np.zeros_like(hk)
        else:
            t = np.trace(hk)
            b = kv @ hk
            q = kv @ b
            u = (t - q / k2) / (n - 1)
            v = (t - n * u) / 2j
            b_perp = b - (q / k2) * kv
            x = b_perp / (1j * k2) + (v / k2) * kv
            lie = 1j * (np.outer(kv, x) + np.outer(x, kv))
            conf = u * eye
        tt = hk - lie - conf
        tt_modes[k], lie_modes[k], conf_modes[k] = tt, lie, conf

    def pack(mode_mats):
        comp = {}
        for i in range(n):
            for j in range(i, n):
                modes = {
                    k: m[i, j] for k, m in mode_mats.items() if m[i, j] != 0
                }
                if modes:
                    comp[(i, j)] = FourierScalarField(n, h.cutoff, modes,
                                                      check_reality=False)
        return FourierSymTensor(n, comp)

    return pack(tt_modes), pack(lie_modes), pack(conf_modes)


def tt_project(h: FourierSymTensor) -> FourierSymTensor:
    return tt_split(h)[0]


def tt_defect(h: FourierSymTensor) -> float:
    """Max amplitude of trace and divergence over all modes."""
    worst = 0.0
    tr = h.trace_flat()
    for a in tr.modes.values():
        worst = max(worst, abs(a))
    for f in h.divergence_flat():
        for a in f.modes.values():
            worst = max(worst, abs(a))
    return worst


def _mode_constraint_matrix(n: int, rep: GammaRep, gam_sig: np.ndarray, k) -> np.ndarray:
    """Complex constraint matrix (trace, divergence, Dirac) on Sym_C at mode k."""
    kv = np.array(k, dtype=float)
    sym = dirac_symbol(rep, k)
    rows = []
    for e in _sym_basis(n):
        cons = [np.trace(e)]
        cons.extend(kv @ e)
        dpsi = (e.T @ gam_sig) @ sym.T
        cons.extend(dpsi.reshape(-1))
        rows.append(np.array(cons, dtype=complex))
    return np.array(rows).T  # (n_constraints, n_sym)


def stability_kernel_basis(n: int, rep: GammaRep, cutoff: int = 2):
    """Basis of band-limited h with tr h = 0, div h = 0, Dirac(embed h) = 0.

    The tensor-to-spinor embedding is injective only over the reals (all
    gamma_i sigma0 sit in one chirality), so each +-k mode pair is analyzed
    as a real-linear system on (Re h(k), Im h(k)).  On the flat torus every
    nonzero pair comes out trivial and the kernel is exactly the constant
    traceless tensors.
    """
    basis = _constant_traceless_basis(n)
    sig = unit_spinor(rep)
    gam_sig = np.stack([g @ sig.components for g in rep.gamma])
    from .fields import _freq_box

    extra = 0
    for k in _freq_box(n, cutoff):
        m_plus = _mode_constraint_matrix(n, rep, gam_sig, k)
        m_minus = _mode_constraint_matrix(n, rep, gam_sig, tuple(-v for v in k))
        # real field: amplitude x + i y at k forces x - i y at -k
        blocks = []
        for m, sgn in ((m_plus, 1.0), (m_minus, -1.0)):
            blocks.append(np.hstack([m.real, sgn * -m.imag]))
            blocks.append(np.hstack([m.imag, sgn * m.real]))
        a = np.vstack(blocks)
        s = np.linalg.svd(a, compute_uv=False)
        extra += int(np.sum(s <= 1e-10 * max(1.0, s[0])))
    if extra:
        raise AssertionError(
            f"nonzero-frequency kernel of dimension {extra}: operator bug")
    return [FourierSymTensor.from_constant(m) for m in basis]


def _sym_basis(n: int):
    out = []
    for i in range(n):
        for j in range(i, n):
            e = np.zeros((n, n))
            e[i, j] = e[j, i] = 1.0
            out.append(e)
    return out


def _constant_traceless_basis(n: int):
    """Orthonormal basis (Frobenius) of traceless symmetric n x n matrices."""
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n))
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            mats.append(e)
    for i in range(1, n):
        d = np.zeros(n)
        d[:i] = 1.0
        d[i] = -float(i)
        d /= np.linalg.norm(d)
        mats.append(np.diag(d))
    return mats


def cover_pullback(h: FourierSymTensor, fold) -> FourierSymTensor:
    """Pull back along the torus self-cover with the given fold counts.

    The covering torus has periods 2 pi fold_j; in its own integer frequency
    lattice the mode k of the base becomes the mode (k_j fold_j).
    """
    fold = tuple(int(c) for c in fold)
    if len(fold) != h.n or any(c < 1 for c in fold):
        raise ValueError(f"bad fold counts {fold}")
    comp = {}
    for key, f in h.components.items():
        modes = {
            tuple(v * c for v, c in zip(k, fold)): a for k, a in f.modes.items()
        }
        comp[key] = FourierScalarField(
            h.n, f.cutoff * max(fold), modes, check_reality=False)
    return FourierSymTensor(h.n, comp)


def cover_lichnerowicz(h: FourierSymTensor, fold) -> FourierSymTensor:
    """Flat Lichnerowicz on the covering torus (wavenumbers k_j / fold_j)."""
    fold = tuple(int(c) for c in fold)
    comp = {}
    for key, f in h.components.items():
        modes = {
            k: sum((v / c) ** 2 for v, c in zip(k, fold)) * a
            for k, a in f.modes.items()
        }
        comp[key] = FourierScalarField(h.n, f.cutoff, modes, check_reality=False)
    return FourierSymTensor(h.n, comp)


def cover_l2_inner(a: FourierSymTensor, b: FourierSymTensor, fold) -> float:
    """L2 pairing on the covering torus of volume (2 pi)^n prod(fold)."""
    scale = float(np.prod([int(c) for c in fold]))
    return float(np.real(a.l2_inner(b))) * scale
