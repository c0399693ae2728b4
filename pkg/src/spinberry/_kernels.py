"""Sequential inner loops along a sampled path.

Two implementations of every kernel live here: a numba-compiled one and a
pure-numpy one. ``SPINBERRY_DISABLE_NUMBA=1`` (or numba being unavailable)
selects the numpy path. Both are exported under explicit names so the
benchmark and the tests can call either.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

_DISABLED = os.environ.get("SPINBERRY_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}
USE_NUMBA = numba is not None and not _DISABLED


# ---------------------------------------------------------------- numpy path


def transport_numpy(vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Parallel-transport a sampled frame path.

    ``vecs`` has shape ``(n, d, r)``: an orthonormal ``d x r`` frame per
    sample. Returns the transported frames (sample 0 untouched, every
    consecutive overlap Hermitian positive) and the smallest overlap singular
    value of each step.
    """
    vecs = np.asarray(vecs, dtype=complex)
    overlaps = np.conj(np.swapaxes(vecs[:-1], -1, -2)) @ vecs[1:]
    w, s, vh = np.linalg.svd(overlaps)
    step = np.conj(np.swapaxes(vh, -1, -2)) @ np.conj(np.swapaxes(w, -1, -2))
    r = vecs.shape[2]
    gauge = np.empty((vecs.shape[0], r, r), dtype=complex)
    gauge[0] = np.eye(r)
    for k in range(len(step)):
        gauge[k + 1] = step[k] @ gauge[k]
    return vecs @ gauge, s.min(axis=-1)


def propagate_numpy(unitaries: np.ndarray, psi: np.ndarray) -> tuple[np.ndarray, float]:
    """Apply ``unitaries[0]``, then ``unitaries[1]``, ... to ``psi``.

    Returns the final state and the largest norm drift seen along the way.
    """
    psi = np.array(psi, dtype=complex)
    drift = 0.0
    for u in unitaries:
        psi = u @ psi
        drift = max(drift, abs(np.linalg.norm(psi) - 1.0))
    return psi, drift


# ---------------------------------------------------------------- numba path

if numba is not None:

    @numba.njit(cache=True)
    def _transport_jit(vecs):
        n, d, r = vecs.shape
        out = np.empty_like(vecs)
        out[0] = vecs[0]
        smin = np.empty(n - 1)
        for k in range(n - 1):
            prev = np.ascontiguousarray(out[k])
            nxt = np.ascontiguousarray(vecs[k + 1])
            ov = np.conj(prev.T) @ nxt
            w, s, vh = np.linalg.svd(ov)
            smin[k] = s.min()
            out[k + 1] = nxt @ (np.conj(vh.T) @ np.conj(w.T))
        return out, smin

    @numba.njit(cache=True)
    def _propagate_jit(unitaries, psi):
        n, d, _ = unitaries.shape
        cur = psi.copy()
        nxt = np.empty_like(cur)
        drift = 0.0
        for k in range(n):
            for a in range(d):
                acc = 0j
                for b in range(d):
                    acc += unitaries[k, a, b] * cur[b]
                nxt[a] = acc
            norm2 = 0.0
            for a in range(d):
                cur[a] = nxt[a]
                norm2 += cur[a].real * cur[a].real + cur[a].imag * cur[a].imag
            dev = abs(np.sqrt(norm2) - 1.0)
            if dev > drift:
                drift = dev
        return cur, drift

    def transport_numba(vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _transport_jit(np.ascontiguousarray(vecs, dtype=np.complex128))

    def propagate_numba(unitaries: np.ndarray, psi: np.ndarray) -> tuple[np.ndarray, float]:
        out, drift = _propagate_jit(
            np.ascontiguousarray(unitaries, dtype=np.complex128),
            np.ascontiguousarray(psi, dtype=np.complex128),
        )
        return out, float(drift)

else:  # pragma: no cover
    transport_numba = transport_numpy
    propagate_numba = propagate_numpy


if USE_NUMBA:
    transport = transport_numba
    propagate = propagate_numba
else:
    transport = transport_numpy
    propagate = propagate_numpy
